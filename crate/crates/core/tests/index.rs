mod common;

use faer::c64;
use proptest::prelude::*;
use relindex_core::algebra::{AlgebraRep, BlockAlgebra};
use relindex_core::fredholm::{direct_sum, FredholmModule};
use relindex_core::index::*;
use relindex_core::linalg::{self, CMat};
use relindex_core::models::{build_agreeing_pair, DomainWallConfig, MassProfile};
use relindex_core::surgery::{diamond, t_grid, CChoice};
use relindex_core::Error;

fn params() -> KernelParams {
    KernelParams::default()
}

/// Graded module on `p + q` sites (one site per basis vector, grading
/// `+` on the first `p`) whose `F_+` has the given singular values.
fn module_with_singular_values(p: usize, q: usize, sv: &[f64], seed: u64) -> FredholmModule {
    assert!(sv.len() <= p.min(q));
    let mut rng = common::rng(seed);
    let (v, w) = (common::rand_unitary(q, &mut rng), common::rand_unitary(p, &mut rng));
    let mut s = linalg::zeros(q, p);
    for (k, &x) in sv.iter().enumerate() {
        s[(k, k)] = c64::new(x, 0.0);
    }
    let fp = &v * s * w.adjoint();
    let n = p + q;
    let mut f = linalg::zeros(n, n);
    for i in 0..q {
        for j in 0..p {
            f[(p + i, j)] = fp[(i, j)];
            f[(j, p + i)] = fp[(i, j)].conj();
        }
    }
    let alg = BlockAlgebra::commutative(n).unwrap();
    let g: Vec<i8> = (0..n).map(|k| if k < p { 1 } else { -1 }).collect();
    let rep = AlgebraRep::standard(alg, &vec![1; n]).unwrap().with_grading(g).unwrap();
    FredholmModule::new(rep, f).unwrap()
}

fn lattice(sites: usize, m: MassProfile, mt: MassProfile) -> DomainWallConfig {
    let mut cfg = DomainWallConfig::sign_pattern(sites, 10.0, [1.0; 3], [1.0; 3]);
    cfg.mass = m;
    cfg.mass_tilde = mt;
    cfg
}

#[test]
fn zero_operator_is_all_kernel() {
    let x = module_with_singular_values(2, 3, &[], 5);
    let r = graded_index(&x, &params()).unwrap();
    assert_eq!((r.index, r.kernel_plus, r.kernel_minus), (-1, 2, 3));
}

#[test]
fn swap_module_has_index_zero() {
    let x = module_with_singular_values(1, 1, &[1.0], 0);
    let r = graded_index(&x, &params()).unwrap();
    assert_eq!((r.index, r.kernel_plus, r.kernel_minus), (0, 0, 0));
}

#[test]
fn constant_mass_has_no_kernel() {
    let cfg = lattice(64, MassProfile::constant(1.0), MassProfile::constant(1.0));
    let b = build_agreeing_pair(&cfg).unwrap();
    let r = graded_index(&b.x, &params()).unwrap();
    assert_eq!((r.index, r.kernel_plus, r.kernel_minus), (0, 0, 0));
    assert_eq!(b.oracle_indices, (0, 0));
}

#[test]
fn single_wall_orientation() {
    let up = MassProfile::three(-1.0, 1.0, 1.0, -7.5, 7.5);
    let down = MassProfile::three(1.0, 1.0, -1.0, -7.5, 7.5);
    let b = build_agreeing_pair(&lattice(64, up, down)).unwrap();
    let x = graded_index(&b.x, &params()).unwrap();
    let xt = graded_index(&b.x_tilde, &params()).unwrap();
    assert_eq!((x.index, xt.index), (1, -1));
    assert_eq!(b.oracle_indices, (1, -1));
    assert!(x.spectral_gap >= 10.0);
}

#[test]
fn supertrace_examples() {
    let sigma1 = CMat::from_fn(2, 2, |i, j| if i != j { linalg::ONE } else { linalg::ZERO });
    for t in [0.1, 1.0, 10.0] {
        assert!(mckean_singer(&sigma1, &[1.0, -1.0], t).unwrap().abs() < 1e-15);
        assert_eq!(mckean_singer(&linalg::zeros(2, 2), &[1.0, -1.0], t).unwrap(), 0.0);
    }
    assert!(matches!(mckean_singer(&linalg::identity(2), &[1.0, -1.0], 1.0), Err(Error::NotOdd(_))));
    assert!(mckean_singer(&sigma1, &[1.0, -1.0], 0.0).is_err());
}

#[test]
fn supertrace_matches_the_wall_index() {
    let up = MassProfile::three(-1.0, 1.0, 1.0, -7.5, 7.5);
    let b = build_agreeing_pair(&lattice(64, up.clone(), up)).unwrap();
    let ind = graded_index(&b.x, &params()).unwrap().index as f64;
    let (wd, _) = b.dirac.as_ref().unwrap();
    for t in [0.1, 1.0, 10.0] {
        assert!((mckean_singer(&wd.d, &wd.grading(), t).unwrap() - ind).abs() <= 1e-6);
        assert!((mckean_singer_module(&b.x, t).unwrap() - ind).abs() <= 1e-6);
    }
}

#[test]
fn ungraded_modules_have_no_index() {
    let mut rng = common::rng(1);
    let x = common::random_module([1, 2, 1], false, &mut rng);
    assert!(matches!(graded_index(&x, &params()), Err(Error::Grading(_))));
}

#[test]
fn unseparated_small_values_are_ambiguous() {
    let x = module_with_singular_values(7, 7, &[1e-4, 5e-4, 2e-3, 1.0, 1.0, 1.0, 1.0], 2);
    let err = graded_index(&x, &params()).unwrap_err();
    assert!(matches!(err, Error::AmbiguousKernel { .. }), "{err}");
    let clean = module_with_singular_values(7, 7, &[1e-9, 5e-9, 0.5, 1.0, 1.0, 1.0, 1.0], 2);
    let r = graded_index(&clean, &params()).unwrap();
    assert_eq!((r.kernel_plus, r.kernel_minus), (2, 2));
}

#[test]
fn empty_half_counts_dimensions() {
    let r = index_of_block(&linalg::zeros(0, 3), 3, 0, &params()).unwrap();
    assert_eq!((r.index, r.kernel_plus, r.kernel_minus), (3, 3, 0));
}

#[test]
fn trace_of_a_self_pair_is_twice_the_index() {
    let up = MassProfile::three(-1.0, 1.0, 1.0, -7.5, 7.5);
    let b = build_agreeing_pair(&lattice(64, up.clone(), up)).unwrap();
    let trace = homotopy_index_trace(&b.pair, &t_grid(11), &params()).unwrap();
    assert!(is_constant(&trace));
    assert!(trace.iter().all(|p| p.index.index == 2));
}

#[test]
fn opposite_walls_give_the_relative_index() {
    let cfg = DomainWallConfig::sign_pattern(100, 10.0, [-1.0, 1.0, 1.0], [1.0, 1.0, -1.0]);
    let b = build_agreeing_pair(&cfg).unwrap();
    let r = relative_index_experiment(&b.pair, &t_grid(11), &params()).unwrap();
    assert_eq!(r.indices(), [1, -1, 0, 0]);
    assert_eq!(r.residual, 0);
    assert!(r.trace_is_constant());
    assert_eq!(r.homotopy_trace[0].index.index, r.x.index + r.x_tilde.index);
    assert_eq!(r.homotopy_trace[10].index.index, r.pasted.index + r.pasted_mirror.index);
    assert_eq!(graded_index(&diamond(&b.pair, CChoice::FromX).unwrap(), &params()).unwrap().index, 0);
}

#[test]
fn equal_masses_give_equal_indices() {
    let cfg = DomainWallConfig::sign_pattern(100, 10.0, [-1.0, 1.0, 1.0], [-1.0, 1.0, 1.0]);
    let b = build_agreeing_pair(&cfg).unwrap();
    let r = relative_index_experiment(&b.pair, &t_grid(11), &params()).unwrap();
    assert_eq!(r.indices(), [1, 1, 1, 1]);
    assert_eq!(r.residual, 0);
}

#[test]
fn direct_sum_of_lattice_modules_adds_indices() {
    let up = MassProfile::three(-1.0, 1.0, 1.0, -7.5, 7.5);
    let two = MassProfile::three(-1.0, 1.0, -1.0, -7.5, 7.5);
    let b = build_agreeing_pair(&lattice(64, up, two)).unwrap();
    let s = direct_sum(&b.x, &b.x_tilde).unwrap();
    let (a, c) = (graded_index(&b.x, &params()).unwrap(), graded_index(&b.x_tilde, &params()).unwrap());
    assert_eq!(graded_index(&s, &params()).unwrap().index, a.index + c.index);
}

/// Grading-preserving unitary conjugation of a module's operator.
fn conjugate_even(x: &FredholmModule, seed: u64) -> FredholmModule {
    let mut rng = common::rng(seed);
    let g = x.rep().grading().unwrap();
    let plus: Vec<usize> = (0..g.len()).filter(|&k| g[k] > 0).collect();
    let minus: Vec<usize> = (0..g.len()).filter(|&k| g[k] < 0).collect();
    let mut u = linalg::zeros(g.len(), g.len());
    for idx in [&plus, &minus] {
        linalg::scatter(&mut u, idx, idx, &common::rand_unitary(idx.len(), &mut rng));
    }
    let f = u.adjoint() * x.operator() * &u;
    FredholmModule::new(x.rep().clone(), f).unwrap()
}

#[test]
fn trace_fails_for_ungraded_pairs() {
    let mut rng = common::rng(3);
    let p = common::random_pair([1, 2, 1], [1, 2, 1], false, &mut rng);
    assert!(matches!(homotopy_index_trace(&p, &[0.0], &params()), Err(Error::Grading(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn kernel_count_matches_the_construction(
        p in 1usize..6,
        q in 1usize..6,
        deficit_frac in 0.0f64..1.0,
        seed in any::<u64>(),
    ) {
        // The cutoff scales with the median, so the bulk must be the majority.
        let m = p.min(q);
        let r = m - ((m.saturating_sub(1) / 2) as f64 * deficit_frac).round() as usize;
        let sv: Vec<f64> = (0..r).map(|k| 0.5 + 0.1 * k as f64).collect();
        let x = module_with_singular_values(p, q, &sv, seed);
        let res = graded_index(&x, &params()).unwrap();
        prop_assert_eq!(res.index, p as i64 - q as i64);
        prop_assert_eq!(res.kernel_plus, p - r);
        prop_assert_eq!(res.kernel_minus, q - r);
        prop_assert_eq!(res.index, res.kernel_plus as i64 - res.kernel_minus as i64);
        let conj = graded_index(&conjugate_even(&x, seed ^ 1), &params()).unwrap();
        prop_assert_eq!(conj.index, res.index);
        prop_assert_eq!(conj.kernel_plus, res.kernel_plus);
    }

    #[test]
    fn index_is_additive(
        a in (1usize..4, 1usize..4, 0usize..3),
        b in (1usize..4, 1usize..4, 0usize..3),
        seed in any::<u64>(),
    ) {
        let make = |(p, q, r): (usize, usize, usize), s| {
            let r = r.min(p).min(q);
            module_with_singular_values(p, q, &vec![0.7; r], s)
        };
        let (x, y) = (make(a, seed), make(b, seed ^ 7));
        let (ix, iy) = (graded_index(&x, &params()).unwrap(), graded_index(&y, &params()).unwrap());
        // Different site counts: pad into a common algebra by relabelling.
        let n = x.dim() + y.dim();
        let alg = BlockAlgebra::commutative(n).unwrap();
        let gx = x.rep().grading().unwrap().to_vec();
        let gy = y.rep().grading().unwrap().to_vec();
        let g: Vec<i8> = gx.iter().chain(&gy).copied().collect();
        let rep = AlgebraRep::standard(alg, &vec![1; n]).unwrap().with_grading(g).unwrap();
        let s = FredholmModule::new(rep, linalg::direct_sum(x.operator(), y.operator())).unwrap();
        prop_assert_eq!(graded_index(&s, &params()).unwrap().index, ix.index + iy.index);
    }
}
