mod common;

use proptest::prelude::*;
use relindex_core::fredholm::{bump_family, direct_sum, standard_test_family, CompactnessProfile};
use relindex_core::linalg::{self, CMat};
use relindex_core::models::{build_agreeing_pair, DomainWallConfig};
use relindex_core::surgery::*;
use relindex_core::Error;

fn odd_defect(f: &CMat, g: &[i8]) -> f64 {
    let gamma: Vec<f64> = g.iter().map(|&s| s as f64).collect();
    linalg::max_abs(&(linalg::diag_mul_left(&gamma, f) + linalg::diag_mul_right(f, &gamma)))
}

#[test]
fn self_diamond_is_the_cornerless_operator() {
    let mut rng = common::rng(1);
    let x = common::random_module([3, 4, 2], true, &mut rng);
    let (j1, j2) = common::ideals();
    let p = SurgeryPair::new(&x, &x, &j1, &j2, None).unwrap();
    assert_eq!(p.identification(), &linalg::identity(4));
    let d = diamond(&p, CChoice::FromX).unwrap();
    assert_eq!(d.operator(), &p.cornerless_x());
    assert_ne!(d.operator(), p.x().operator());
    assert!(endpoint_check(&p).unwrap() <= 1e-12);
}

#[test]
fn diamond_is_hermitian_and_odd() {
    let mut rng = common::rng(2);
    let p = common::random_pair([2, 4, 3], [3, 4, 1], true, &mut rng);
    for choice in [CChoice::FromX, CChoice::FromXtilde, CChoice::Average] {
        let d = diamond(&p, choice).unwrap();
        assert!(linalg::is_zero(&(d.operator() - d.operator().adjoint())));
        assert_eq!(odd_defect(d.operator(), d.rep().grading().unwrap()), 0.0);
        assert_eq!(d.dim(), 2 + 4 + 1);
    }
}

#[test]
fn middle_block_choice_changes_the_norm_by_the_agreement_defect() {
    let mut rng = common::rng(3);
    let p = common::random_pair([2, 3, 2], [1, 3, 2], false, &mut rng);
    let fx = diamond(&p, CChoice::FromX).unwrap();
    let ft = diamond(&p, CChoice::FromXtilde).unwrap();
    let c = &p.decomposition_x().c;
    let t = p.identification();
    let ct = t.adjoint() * &p.decomposition_x_tilde().c * t;
    let gap = common::norm(&(fx.operator() - ft.operator()));
    assert!((gap - common::norm(&(c - ct))).abs() < 1e-12);
    let avg = diamond(&p, CChoice::Average).unwrap();
    let half = common::norm(&(fx.operator() - avg.operator()));
    assert!((half - 0.5 * gap).abs() < 1e-12);
}

#[test]
fn homotopy_starts_at_the_split_pair() {
    let mut rng = common::rng(4);
    let p = common::random_pair([3, 2, 4], [2, 2, 2], true, &mut rng);
    let f0 = homotopy_operator(&p, 0.0).unwrap();
    let split = linalg::direct_sum(&p.cornerless_x(), &p.cornerless_x_tilde());
    assert_eq!(f0.operator(), &split);
    let plain = direct_sum(p.x(), p.x_tilde()).unwrap();
    assert_eq!(f0.module.rep(), plain.rep());
}

#[test]
fn homotopy_is_hermitian_odd_and_lipschitz() {
    let mut rng = common::rng(5);
    let p = common::random_pair([2, 3, 4], [4, 3, 1], true, &mut rng);
    let lip = 2.0 * (common::norm(&p.decomposition_x().d) + common::norm(&p.decomposition_x_tilde().d));
    let grid = t_grid(11);
    let samples: Vec<HomotopySample> = grid.iter().map(|&t| homotopy_operator(&p, t).unwrap()).collect();
    for s in &samples {
        assert!(linalg::is_zero(&(s.operator() - s.operator().adjoint())));
        assert_eq!(odd_defect(s.operator(), s.module.rep().grading().unwrap()), 0.0);
    }
    let id = linalg::identity(samples[0].operator().nrows());
    for w in samples.windows(2) {
        let dt = w[1].t - w[0].t;
        let diff = common::norm(&(w[1].operator() - w[0].operator()));
        assert!(diff <= lip * dt + 1e-12, "{diff} > {}", lip * dt);
        let sq = |s: &HomotopySample| CompactnessProfile::of(&(s.operator() * s.operator() - &id)).unwrap();
        let (a, b) = (sq(&w[0]), sq(&w[1]));
        let bound = (common::norm(w[0].operator()) + common::norm(w[1].operator())) * diff;
        for k in 1..=a.len() {
            assert!((a.sigma(k) - b.sigma(k)).abs() <= bound + 1e-12);
        }
    }
}

#[test]
fn homotopy_rejects_parameters_outside_the_quarter_turn() {
    let mut rng = common::rng(6);
    let p = common::random_pair([1, 1, 1], [1, 1, 1], false, &mut rng);
    for t in [-0.1, 1.6, f64::NAN] {
        assert!(matches!(homotopy_operator(&p, t), Err(Error::TOutOfRange(_))));
    }
    assert_eq!(t_grid(11).len(), 11);
    assert_eq!(t_grid(11)[10], std::f64::consts::FRAC_PI_2);
}

#[test]
fn pasting_unitary_is_an_exact_intertwining_unitary() {
    let mut rng = common::rng(7);
    let p = common::random_pair([3, 4, 5], [6, 4, 7], true, &mut rng);
    let u = pasting_unitary(&p);
    let id = linalg::identity(u.nrows());
    assert_eq!(u.adjoint() * &u, id);
    assert_eq!(&u * u.adjoint(), id);
    let tests = standard_test_family(p.x().algebra(), 3);
    assert_eq!(pasting_intertwining_defect(&p, &tests).unwrap(), 0.0);
}

#[test]
fn endpoint_identity_on_random_blocks() {
    let mut rng = common::rng(8);
    let p = common::random_pair([3, 4, 5], [6, 4, 7], false, &mut rng);
    assert!(endpoint_check(&p).unwrap() <= 1e-12);
    let graded = common::random_pair([3, 4, 5], [6, 4, 7], true, &mut rng);
    assert!(endpoint_check(&graded).unwrap() <= 1e-12);
}

#[test]
fn only_one_sign_convention_closes_the_endpoint() {
    let mut rng = common::rng(9);
    let p = common::random_pair([3, 4, 5], [6, 4, 7], false, &mut rng);
    assert!(endpoint_check_with(&p, SwapSign::NegateThird).unwrap() <= 1e-12);
    assert!(endpoint_check_with(&p, SwapSign::NegateSixth).unwrap() > 1e-3);
}

#[test]
fn endpoint_identity_on_a_lattice_pair() {
    let cfg = DomainWallConfig::sign_pattern(200, 10.0, [-1.0, 1.0, 1.0], [1.0, 1.0, -1.0]);
    let b = build_agreeing_pair(&cfg).unwrap();
    assert!(endpoint_check(&b.pair).unwrap() <= 1e-12);
    let tests = bump_family(b.x.algebra());
    assert_eq!(pasting_intertwining_defect(&b.pair, &tests).unwrap(), 0.0);
}

#[test]
fn middle_dimensions_must_match() {
    let mut rng = common::rng(10);
    let x = common::random_module([1, 2, 1], false, &mut rng);
    let y = common::random_module([1, 3, 1], false, &mut rng);
    let (j1, j2) = common::ideals();
    assert!(matches!(SurgeryPair::new(&x, &y, &j1, &j2, None), Err(Error::Identification(_))));
    let g = common::random_module([2, 2, 2], true, &mut rng);
    let u = common::random_module([2, 2, 2], false, &mut rng);
    assert!(matches!(SurgeryPair::new(&g, &u, &j1, &j2, None), Err(Error::Grading(_))));
}

#[test]
fn swapped_pair_builds_the_mirror() {
    let mut rng = common::rng(11);
    let p = common::random_pair([2, 2, 3], [1, 2, 2], true, &mut rng);
    let q = p.swapped();
    assert_eq!(q.x().operator(), p.x_tilde().operator());
    let mirror = diamond(&q, CChoice::FromX).unwrap();
    assert_eq!(mirror.dim(), 1 + 2 + 3);
    assert!(endpoint_check(&q).unwrap() <= 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn endpoint_identity_holds_for_all_block_sizes(
        x in (1usize..5, 1usize..5, 1usize..5),
        y in (1usize..5, 1usize..5),
        graded in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let mut rng = common::rng(seed);
        let p = common::random_pair([x.0, x.1, x.2], [y.0, x.1, y.1], graded, &mut rng);
        prop_assert!(endpoint_check(&p).unwrap() <= 1e-12);
    }
}
