mod common;

use std::collections::HashMap;

use proptest::prelude::*;
use relindex_core::linalg::{self, CMat};
use relindex_core::symbolic::certify::{homotopy_matrix, mirror_matrix, proposition_matrix};
use relindex_core::symbolic::term::{crosses, word_signature, Word};
use relindex_core::symbolic::*;

fn corpus() -> Vec<Term> {
    let mut out = Vec::new();
    for m in [proposition_matrix(), mirror_matrix(), homotopy_matrix()] {
        let sq = m.mul(&m).unwrap();
        for i in 0..sq.size() {
            for j in 0..sq.size() {
                out.push(sq.entry(i, j).clone());
            }
        }
    }
    for r in &RewriteSystem::default().rules {
        out.push(r.rhs.clone());
    }
    out
}

#[test]
fn parsing_examples() {
    let t = parse_term("a b + b c").unwrap();
    assert_eq!((t.signature(), t.len()), ((Space::H0, Space::H1), 2));
    assert_eq!(parse_term("b d").unwrap().signature(), (Space::H2, Space::H1));
    assert!(matches!(parse_term("d b"), Err(SymbolicError::Signature(_))));
    assert!(matches!(parse_term("a +"), Err(SymbolicError::Parse { .. })));
    assert_eq!(parse_term_as("1", (Space::H0, Space::H0)).unwrap(), Term::identity(Space::H0));
    assert!(parse_term_as("a", (Space::H0, Space::H0)).is_err());
}

#[test]
fn reduction_examples() {
    let rs = RewriteSystem::default();
    let r = reduce(&parse_term("a a").unwrap(), &rs).unwrap();
    assert_eq!(r.term, parse_term("1 - b b*").unwrap());
    assert_eq!(r.steps.len(), 1);
    assert_eq!(r.steps[0].rule, "A1");
    let kill = reduce(&parse_term("b d~").unwrap(), &rs).unwrap();
    assert!(kill.term.is_zero());
    assert_eq!(kill.steps[0].rule, "KILL");
    let both = reduce(&parse_term("a b + b c").unwrap(), &rs).unwrap();
    assert!(both.term.is_zero());
    let adj = reduce(&parse_term("b* a").unwrap(), &rs).unwrap();
    assert_eq!(adj.term, parse_term("-c b*").unwrap());
}

#[test]
fn certificates_pass() {
    let p = verify_proposition().unwrap();
    assert!(p.passed());
    assert_eq!((p.pass_count(), p.entries.len()), (9, 9));
    let h = verify_homotopy().unwrap();
    assert!(h.passed());
    assert_eq!((h.pass_count(), h.entries.len()), (36, 36));
    assert!(h.checks.iter().any(|c| c.name == "endpoint" && c.pass));
    assert!(h.checks.iter().any(|c| c.name == "start" && c.pass));
}

#[test]
fn dropping_a6_breaks_the_middle_entry() {
    let rs = RewriteSystem::default().without("A6").unwrap();
    let h = verify_homotopy_with(&rs).unwrap();
    assert!(!h.passed());
    let failed: Vec<(usize, usize)> = h.failures().map(|e| (e.row, e.col)).collect();
    assert!(failed.contains(&(2, 2)), "{failed:?}");
    assert_ne!(h.entry(2, 2).unwrap().normal_form, "1");
}

#[test]
fn dropping_kill_leaves_a_crossing_word() {
    let rs = RewriteSystem::default().without("KILL").unwrap();
    let p = verify_proposition_with(&rs).unwrap();
    let e = p.entry(1, 3).unwrap();
    assert!(!e.pass);
    assert!(e.normal_form.contains("b d~"), "{}", e.normal_form);
}

#[test]
fn unknown_axioms_are_reported() {
    let err = RewriteSystem::default().without("A9").unwrap_err();
    assert_eq!(err, SymbolicError::UnknownAxiom("A9".into()));
}

#[test]
fn reduction_keeps_signatures_and_commutes_with_adjoint() {
    let rs = RewriteSystem::default();
    for t in corpus() {
        let r = reduce(&t, &rs).unwrap();
        assert_eq!(r.term.signature(), t.signature(), "{t}");
        let rstar = reduce(&t.adjoint(), &rs).unwrap();
        assert_eq!(rstar.term, r.term.adjoint(), "{t}");
    }
}

#[test]
fn step_counts_are_bounded() {
    let p = verify_proposition().unwrap();
    let h = verify_homotopy().unwrap();
    assert!(p.total_steps + h.total_steps <= 100_000);
    assert!(h.total_steps > 0);
    let rs = RewriteSystem::default();
    assert!(rs.rules.iter().all(|r| r.decreases()), "termination measure");
}

// Numeric instantiation.

const DIMS: [(Space, usize); 5] = [(Space::H1, 4), (Space::H0, 6), (Space::H2, 4), (Space::H1t, 4), (Space::H2t, 4)];

fn dim(s: Space) -> usize {
    DIMS.iter().find(|(x, _)| *x == s).unwrap().1
}

type Blocks = HashMap<Letter, CMat>;

fn eval_word(w: &Word, blocks: &Blocks, source: Space) -> CMat {
    let mut out = linalg::identity(dim(source));
    for x in w.iter().rev() {
        let m = &blocks[&x.letter];
        out = if x.adj { m.adjoint() * &out } else { m * &out };
    }
    out
}

fn eval_term(t: &Term, blocks: &Blocks, s: f64, k: f64) -> CMat {
    let mut out = linalg::zeros(dim(t.target()), dim(t.source()));
    for (w, c) in t.monomials() {
        out += linalg::scale(&eval_word(w, blocks, t.source()), c.eval(s, k));
    }
    out
}

fn reflection(theta: f64) -> [[f64; 2]; 2] {
    [[theta.cos(), theta.sin()], [theta.sin(), -theta.cos()]]
}

/// Exact tuple: `F = F_A ⊕ R(H1'', H0') ⊕ F_Q ⊕ R(H0'', H2') ⊕ F_T` with 2×2
/// reflections, conjugated by block-diagonal unitaries. `x̃` differs from `x`
/// by unitaries on `H1` and `H2` only.
fn exact_blocks(rng: &mut impl rand::Rng) -> Blocks {
    // Coordinates: H1 = [A A B B], H0 = [P P Q Q R R], H2 = [S S T T].
    let (n1, n0, n2) = (4, 6, 4);
    let mut f = linalg::zeros(n1 + n0 + n2, n1 + n0 + n2);
    let mut put = |i: usize, j: usize, th: f64| {
        let r = reflection(th);
        f[(i, i)] = linalg::ONE * r[0][0];
        f[(i, j)] = linalg::ONE * r[0][1];
        f[(j, i)] = linalg::ONE * r[1][0];
        f[(j, j)] = linalg::ONE * r[1][1];
    };
    let angles: Vec<f64> = (0..7).map(|_| rng.gen_range(0.2..1.4)).collect();
    put(0, 1, angles[0]); // A
    put(2, n1, angles[1]); // B with P
    put(3, n1 + 1, angles[2]); // B with P
    put(n1 + 2, n1 + 3, angles[3]); // Q
    put(n1 + 4, n1 + n0, angles[4]); // R with S
    put(n1 + 5, n1 + n0 + 1, angles[5]); // R with S
    put(n1 + n0 + 2, n1 + n0 + 3, angles[6]); // T
    let v = linalg::direct_sum(
        &linalg::direct_sum(&common::rand_unitary(n1, rng), &common::rand_unitary(n0, rng)),
        &common::rand_unitary(n2, rng),
    );
    let f = v.adjoint() * f * &v;
    let w = linalg::direct_sum(
        &linalg::direct_sum(&common::rand_unitary(n1, rng), &linalg::identity(n0)),
        &common::rand_unitary(n2, rng),
    );
    let ft = w.adjoint() * &f * &w;
    let (h1, h0, h2): (Vec<usize>, Vec<usize>, Vec<usize>) =
        ((0..n1).collect(), (n1..n1 + n0).collect(), (n1 + n0..n1 + n0 + n2).collect());
    let blk = |m: &CMat, r: &[usize], c: &[usize]| linalg::select(m, r, c);
    HashMap::from([
        (Letter::A, blk(&f, &h1, &h1)),
        (Letter::B, blk(&f, &h1, &h0)),
        (Letter::C, blk(&f, &h0, &h0)),
        (Letter::D, blk(&f, &h0, &h2)),
        (Letter::E, blk(&f, &h2, &h2)),
        (Letter::At, blk(&ft, &h1, &h1)),
        (Letter::Bt, blk(&ft, &h1, &h0)),
        (Letter::Dt, blk(&ft, &h0, &h2)),
        (Letter::Et, blk(&ft, &h2, &h2)),
    ])
}

fn perturb(blocks: &mut Blocks, eps: f64, rng: &mut impl rand::Rng) {
    for (letter, m) in blocks.iter_mut() {
        let noise = if letter.is_selfadjoint() {
            common::rand_hermitian(m.nrows(), rng)
        } else {
            common::rand_cmat(m.nrows(), m.ncols(), rng)
        };
        *m += linalg::scale(&noise, eps);
    }
}

/// Typed words of length 2 and 3 that cross between the two sides.
fn crossing_words() -> Vec<Word> {
    let syms: Vec<Sym> = Letter::ALL
        .iter()
        .flat_map(|&l| [Sym::new(l, false), Sym::new(l, true)])
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut out = Vec::new();
    let mut frontier: Vec<Word> = syms.iter().map(|&s| vec![s]).collect();
    for _ in 0..2 {
        let mut next = Vec::new();
        for w in &frontier {
            for &s in &syms {
                let mut v = w.clone();
                v.push(s);
                if word_signature(&v).is_ok() {
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().filter(|w| crosses(w)).cloned());
        frontier = next;
    }
    out
}

/// Largest norm of an axiom residual, crossing words included.
fn axiom_defect(blocks: &Blocks, rs: &RewriteSystem, crossing: &[Word]) -> f64 {
    let mut delta: f64 = 0.0;
    for r in &rs.rules {
        let source = r.lhs.last().unwrap().source();
        let lhs = eval_word(&r.lhs, blocks, source);
        delta = delta.max(common::norm(&(lhs - eval_term(&r.rhs, blocks, 0.0, 1.0))));
    }
    for w in crossing {
        delta = delta.max(common::norm(&eval_word(w, blocks, w.last().unwrap().source())));
    }
    for l in Letter::ALL.iter().filter(|l| l.is_selfadjoint()) {
        let m = &blocks[l];
        delta = delta.max(common::norm(&(m - m.adjoint())));
    }
    delta
}

#[test]
fn symbolic_identities_hold_numerically_up_to_the_axiom_defect() {
    let rs = RewriteSystem::default();
    let crossing = crossing_words();
    assert!(crossing.iter().any(|w| w.len() == 2));
    let mats = [proposition_matrix(), mirror_matrix(), homotopy_matrix()];
    let squares: Vec<SymMatrix> = mats.iter().map(|m| m.mul(m).unwrap()).collect();
    let mut worst: f64 = 0.0;
    for trial in 0..50u64 {
        let mut rng = common::rng(1000 + trial);
        let mut blocks = exact_blocks(&mut rng);
        assert!(axiom_defect(&blocks, &rs, &crossing) < 1e-13, "exact tuple {trial}");
        let eps = 10f64.powi(-(3 + (trial % 4) as i32));
        perturb(&mut blocks, eps, &mut rng);
        let delta = axiom_defect(&blocks, &rs, &crossing);
        assert!(delta > 0.0);
        for t in [0.0, 0.3, 0.9, std::f64::consts::FRAC_PI_2] {
            let (s, k) = (f64::sin(t), f64::cos(t));
            for sq in &squares {
                for i in 0..sq.size() {
                    for j in 0..sq.size() {
                        let want = if i == j { linalg::identity(dim(sq.spaces()[i])) } else { linalg::zeros(dim(sq.spaces()[i]), dim(sq.spaces()[j])) };
                        let got = eval_term(sq.entry(i, j), &blocks, s, k);
                        worst = worst.max(common::norm(&(got - want)) / delta);
                    }
                }
            }
        }
    }
    println!("soundness constant C = {worst:.3}");
    assert!(worst <= 20.0, "C = {worst}");
}

fn scalar_strategy() -> impl Strategy<Value = Scalar> {
    prop::collection::vec((-3i64..=3, 0u32..4, 0u32..4), 0..4).prop_map(|ms| {
        ms.into_iter().fold(Scalar::zero(), |acc, (c, se, ke)| &acc + &Scalar::monomial(c, se, ke))
    })
}

proptest! {
    #[test]
    fn scalar_ring_laws(a in scalar_strategy(), b in scalar_strategy(), c in scalar_strategy(), t in -3.0f64..3.0) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        let (s, k) = (t.sin(), t.cos());
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-9 * (1.0 + x.abs() + y.abs());
        prop_assert!(close((&a * &b).eval(s, k), a.eval(s, k) * b.eval(s, k)));
        prop_assert!(close((&a + &b).eval(s, k), a.eval(s, k) + b.eval(s, k)));
        prop_assert_eq!(&Scalar::s() * &Scalar::s(), &Scalar::one() - &(&Scalar::k() * &Scalar::k()));
    }

    #[test]
    fn random_words_reduce_consistently(picks in prop::collection::vec(0usize..64, 1..6), coeff in -3i64..=3, seed in any::<u64>()) {
        let syms: Vec<Sym> = Letter::ALL.iter().flat_map(|&l| [Sym::new(l, false), Sym::new(l, true)]).collect();
        let mut w: Word = vec![syms[picks[0] % syms.len()]];
        for &p in &picks[1..] {
            let src = w.last().unwrap().source();
            let next: Vec<Sym> = syms.iter().copied().filter(|s| s.target() == src).collect();
            w.push(next[p % next.len()]);
        }
        let t = Term::word(w, Scalar::int(coeff)).unwrap();
        let rs = RewriteSystem::default();
        let r = reduce(&t, &rs).unwrap();
        prop_assert_eq!(r.term.signature(), t.signature());
        prop_assert!(r.steps.len() <= 100_000);
        // Normal forms need not be unique, but both sides agree on exact tuples.
        let blocks = exact_blocks(&mut common::rng(seed));
        let lhs = eval_term(&reduce(&t.adjoint(), &rs).unwrap().term, &blocks, 0.0, 1.0);
        let rhs = eval_term(&r.term, &blocks, 0.0, 1.0).adjoint().to_owned();
        let orig = eval_term(&t, &blocks, 0.0, 1.0).adjoint().to_owned();
        prop_assert!(common::norm(&(&lhs - &rhs)) < 1e-10);
        prop_assert!(common::norm(&(&lhs - &orig)) < 1e-10);
    }
}

#[test]
fn normal_forms_are_not_unique() {
    let rs = RewriteSystem::default();
    let t = parse_term("b~* a~ b~ c").unwrap();
    let a = reduce(&t, &rs).unwrap().term;
    let b = reduce(&t.adjoint(), &rs).unwrap().term.adjoint();
    assert_ne!(a, b);
    let blocks = exact_blocks(&mut common::rng(9));
    assert!(common::norm(&(eval_term(&a, &blocks, 0.0, 1.0) - eval_term(&b, &blocks, 0.0, 1.0))) < 1e-12);
}
