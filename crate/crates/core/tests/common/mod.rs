#![allow(dead_code)]

use faer::c64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relindex_core::algebra::{AlgebraRep, BlockAlgebra, Ideal};
use relindex_core::fredholm::FredholmModule;
use relindex_core::linalg::{self, CMat};
use relindex_core::surgery::SurgeryPair;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_cmat<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| c64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

pub fn rand_hermitian<R: Rng>(n: usize, rng: &mut R) -> CMat {
    let m = rand_cmat(n, n, rng);
    linalg::scale(&(&m + m.adjoint()), 0.5)
}

/// Eigenvectors of a random Hermitian matrix.
pub fn rand_unitary<R: Rng>(n: usize, rng: &mut R) -> CMat {
    linalg::hermitian_eigen(&rand_hermitian(n, rng)).unwrap().1
}

pub fn norm(m: &CMat) -> f64 {
    linalg::op_norm(m).unwrap()
}

/// Alternating grading within each block.
pub fn alternating_grading(dims: &[usize]) -> Vec<i8> {
    dims.iter()
        .flat_map(|&n| (0..n).map(|i| if i % 2 == 0 { 1 } else { -1 }))
        .collect()
}

/// Random Hermitian module over three sites with multiplicities `dims`; odd
/// for the alternating grading when `graded`.
pub fn random_module<R: Rng>(dims: [usize; 3], graded: bool, rng: &mut R) -> FredholmModule {
    let alg = BlockAlgebra::commutative(3).unwrap();
    let mut rep = AlgebraRep::standard(alg, &dims).unwrap();
    let mut f = rand_hermitian(dims.iter().sum(), rng);
    if graded {
        let g = alternating_grading(&dims);
        for i in 0..g.len() {
            for j in 0..g.len() {
                if g[i] == g[j] {
                    f[(i, j)] = linalg::ZERO;
                }
            }
        }
        rep = rep.with_grading(g).unwrap();
    }
    FredholmModule::new(rep, f).unwrap()
}

pub fn ideals() -> (Ideal, Ideal) {
    (Ideal::new([0, 1]), Ideal::new([1, 2]))
}

/// Random pair with `H_0` of the same dimension on both sides.
pub fn random_pair<R: Rng>(x: [usize; 3], y: [usize; 3], graded: bool, rng: &mut R) -> SurgeryPair {
    assert_eq!(x[1], y[1]);
    let mx = random_module(x, graded, rng);
    let my = random_module(y, graded, rng);
    let (j1, j2) = ideals();
    SurgeryPair::new(&mx, &my, &j1, &j2, None).unwrap()
}
