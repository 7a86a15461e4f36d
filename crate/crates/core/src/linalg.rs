//! Dense complex matrix helpers shared by the numerical modules.

use faer::{c64, Mat, Side};

use crate::error::{Error, Result};

pub type CMat = Mat<c64>;

pub const ZERO: c64 = c64 { re: 0.0, im: 0.0 };
pub const ONE: c64 = c64 { re: 1.0, im: 0.0 };
pub const I: c64 = c64 { re: 0.0, im: 1.0 };

/// Relative tolerance under which a matrix counts as (anti-)Hermitian for the
/// eigenvalue shortcut in [`singular_values`].
const NORMAL_REL_TOL: f64 = 1e-13;

pub fn zeros(rows: usize, cols: usize) -> CMat {
    Mat::zeros(rows, cols)
}

pub fn identity(n: usize) -> CMat {
    Mat::identity(n, n)
}

pub fn real_diag(values: &[f64]) -> CMat {
    let n = values.len();
    Mat::from_fn(n, n, |i, j| if i == j { c64::new(values[i], 0.0) } else { ZERO })
}

pub fn adjoint(m: &CMat) -> CMat {
    m.adjoint().to_owned()
}

pub fn max_abs(m: &CMat) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.norm_max()
}

pub fn is_zero(m: &CMat) -> bool {
    (0..m.ncols()).all(|j| (0..m.nrows()).all(|i| m[(i, j)] == ZERO))
}

/// Max-abs distance between `m` and its adjoint; exact for exactly Hermitian input.
pub fn hermiticity_gap(m: &CMat) -> f64 {
    assert_eq!(m.nrows(), m.ncols());
    let n = m.nrows();
    let mut gap = 0.0f64;
    for j in 0..n {
        for i in j..n {
            gap = gap.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    gap
}

pub fn is_hermitian(m: &CMat) -> bool {
    m.nrows() == m.ncols() && hermiticity_gap(m) == 0.0
}

/// `a * b - b * a`
pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// `a * b + b * a`
pub fn anticommutator(a: &CMat, b: &CMat) -> CMat {
    a * b + b * a
}

/// Left-multiplies by a diagonal given as a real vector.
pub fn diag_mul_left(d: &[f64], m: &CMat) -> CMat {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * d[i])
}

/// Right-multiplies by a diagonal given as a real vector.
pub fn diag_mul_right(m: &CMat, d: &[f64]) -> CMat {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * d[j])
}

/// Submatrix on arbitrary row and column index lists.
pub fn select(m: &CMat, rows: &[usize], cols: &[usize]) -> CMat {
    Mat::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

/// Writes `block` into `target` at the given index lists.
pub fn scatter(target: &mut CMat, rows: &[usize], cols: &[usize], block: &CMat) {
    debug_assert_eq!(block.nrows(), rows.len());
    debug_assert_eq!(block.ncols(), cols.len());
    for (j, &cj) in cols.iter().enumerate() {
        for (i, &ri) in rows.iter().enumerate() {
            target[(ri, cj)] = block[(i, j)];
        }
    }
}

/// Block-diagonal sum.
pub fn direct_sum(a: &CMat, b: &CMat) -> CMat {
    let (ra, ca) = (a.nrows(), a.ncols());
    let mut out = zeros(ra + b.nrows(), ca + b.ncols());
    out.submatrix_mut(0, 0, ra, ca).copy_from(a);
    out.submatrix_mut(ra, ca, b.nrows(), b.ncols()).copy_from(b);
    out
}

/// Assembles a block matrix. `None` entries are zero blocks.
pub fn assemble(row_dims: &[usize], col_dims: &[usize], blocks: &[Vec<Option<CMat>>]) -> CMat {
    let rows: usize = row_dims.iter().sum();
    let cols: usize = col_dims.iter().sum();
    let mut out = zeros(rows, cols);
    let mut r0 = 0;
    for (bi, &rd) in row_dims.iter().enumerate() {
        let mut c0 = 0;
        for (bj, &cd) in col_dims.iter().enumerate() {
            if let Some(block) = &blocks[bi][bj] {
                assert_eq!((block.nrows(), block.ncols()), (rd, cd), "block ({bi},{bj}) shape");
                out.submatrix_mut(r0, c0, rd, cd).copy_from(block);
            }
            c0 += cd;
        }
        r0 += rd;
    }
    out
}

pub fn scale(m: &CMat, s: f64) -> CMat {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * s)
}

/// Eigenvalues (ascending) of the Hermitian part of `m`.
pub fn hermitian_eigenvalues(m: &CMat) -> Result<Vec<f64>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    m.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Eigensolve(format!("{e:?}")))
}

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a Hermitian matrix.
pub fn hermitian_eigen(m: &CMat) -> Result<(Vec<f64>, CMat)> {
    let n = m.nrows();
    if n == 0 {
        return Ok((Vec::new(), zeros(0, 0)));
    }
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigensolve(format!("{e:?}")))?;
    let s = evd.S().column_vector();
    let values = (0..n).map(|i| s[i].re).collect();
    Ok((values, evd.U().to_owned()))
}

/// Singular values in nonincreasing order.
///
/// Square matrices that are Hermitian or anti-Hermitian to within a relative
/// `1e-13` go through the cheaper eigenvalue path.
pub fn singular_values(m: &CMat) -> Result<Vec<f64>> {
    let (r, c) = (m.nrows(), m.ncols());
    if r == 0 || c == 0 {
        return Ok(Vec::new());
    }
    if is_zero(m) {
        return Ok(vec![0.0; r.min(c)]);
    }
    if r == c {
        let scale = max_abs(m);
        let herm = hermiticity_gap(m);
        let normal = if herm <= NORMAL_REL_TOL * scale {
            Some(m.to_owned())
        } else {
            let im = Mat::from_fn(r, c, |i, j| m[(i, j)] * I);
            (hermiticity_gap(&im) <= NORMAL_REL_TOL * scale).then_some(im)
        };
        if let Some(h) = normal {
            let mut sv: Vec<f64> = hermitian_eigenvalues(&h)?.into_iter().map(f64::abs).collect();
            sv.sort_by(|a, b| b.total_cmp(a));
            return Ok(sv);
        }
    }
    let mut sv = m
        .singular_values()
        .map_err(|e| Error::Eigensolve(format!("{e:?}")))?;
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Operator (spectral) norm.
pub fn op_norm(m: &CMat) -> Result<f64> {
    if is_zero(m) {
        return Ok(0.0);
    }
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}

/// Applies a real function to a Hermitian matrix through its eigendecomposition.
pub fn hermitian_function(m: &CMat, f: impl Fn(f64) -> f64) -> Result<CMat> {
    let (values, vecs) = hermitian_eigen(m)?;
    let fv: Vec<f64> = values.into_iter().map(f).collect();
    let scaled = diag_mul_right(&vecs, &fv);
    Ok(&scaled * vecs.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singular_values_match_for_normal_and_general_paths() {
        let m = Mat::from_fn(3, 3, |i, j| c64::new((i + 2 * j) as f64, (i as f64) - (j as f64)));
        let h = &m + m.adjoint();
        let general = h.singular_values().unwrap();
        let fast = singular_values(&h).unwrap();
        for (a, b) in general.iter().zip(&fast) {
            assert!((a - b).abs() < 1e-12);
        }
        let skew = &m - m.adjoint();
        let general = skew.singular_values().unwrap();
        let fast = singular_values(&skew).unwrap();
        for (a, b) in general.iter().zip(&fast) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn assemble_places_blocks() {
        let a = identity(2);
        let b = scale(&identity(1), 3.0);
        let m = assemble(&[2, 1], &[2, 1], &[vec![Some(a), None], vec![None, Some(b)]]);
        assert_eq!(m[(2, 2)], c64::new(3.0, 0.0));
        assert_eq!(m[(0, 2)], ZERO);
        assert_eq!(m[(1, 1)], ONE);
    }

    #[test]
    fn empty_matrices_have_zero_norm() {
        assert_eq!(op_norm(&zeros(0, 4)).unwrap(), 0.0);
        assert_eq!(op_norm(&zeros(3, 3)).unwrap(), 0.0);
    }
}
