//! Block matrices of terms.

use super::rewrite::{reduce, Reduction, RewriteSystem};
use super::term::{Space, Term};
use super::SymbolicError;

/// Square block matrix; entry `(i, j)` maps `spaces[j]` into `spaces[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    spaces: Vec<Space>,
    entries: Vec<Vec<Term>>,
}

impl SymMatrix {
    pub fn new(spaces: Vec<Space>, entries: Vec<Vec<Term>>) -> Result<Self, SymbolicError> {
        let n = spaces.len();
        if entries.len() != n || entries.iter().any(|r| r.len() != n) {
            return Err(SymbolicError::Signature(format!("matrix is not {n}×{n}")));
        }
        for (i, row) in entries.iter().enumerate() {
            for (j, t) in row.iter().enumerate() {
                if t.signature() != (spaces[j], spaces[i]) {
                    return Err(SymbolicError::Signature(format!(
                        "entry ({}, {}) is {}→{}, slot needs {}→{}",
                        i + 1,
                        j + 1,
                        t.source(),
                        t.target(),
                        spaces[j],
                        spaces[i]
                    )));
                }
            }
        }
        Ok(Self { spaces, entries })
    }

    /// Builds a matrix from entry texts; empty text or `0` means zero.
    pub fn from_text(spaces: &[Space], rows: &[&[&str]]) -> Result<Self, SymbolicError> {
        let entries = rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, text)| {
                        let sig = (spaces[j], spaces[i]);
                        if text.trim().is_empty() {
                            Ok(Term::zero(sig.0, sig.1))
                        } else {
                            super::parse::parse_term_as(text, sig)
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(spaces.to_vec(), entries)
    }

    pub fn identity(spaces: &[Space]) -> Self {
        let entries = (0..spaces.len())
            .map(|i| {
                (0..spaces.len())
                    .map(|j| {
                        if i == j {
                            Term::identity(spaces[i])
                        } else {
                            Term::zero(spaces[j], spaces[i])
                        }
                    })
                    .collect()
            })
            .collect();
        Self {
            spaces: spaces.to_vec(),
            entries,
        }
    }

    pub fn size(&self) -> usize {
        self.spaces.len()
    }

    pub fn spaces(&self) -> &[Space] {
        &self.spaces
    }

    pub fn entry(&self, i: usize, j: usize) -> &Term {
        &self.entries[i][j]
    }

    pub fn mul(&self, other: &SymMatrix) -> Result<SymMatrix, SymbolicError> {
        if self.spaces != other.spaces {
            return Err(SymbolicError::Signature("matrices act on different decompositions".into()));
        }
        let n = self.size();
        let mut entries = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let mut acc = Term::zero(self.spaces[j], self.spaces[i]);
                for l in 0..n {
                    acc = acc.add(&self.entries[i][l].compose(&other.entries[l][j])?)?;
                }
                row.push(acc);
            }
            entries.push(row);
        }
        Ok(SymMatrix {
            spaces: self.spaces.clone(),
            entries,
        })
    }

    /// Entrywise adjoint of the transpose.
    pub fn adjoint(&self) -> SymMatrix {
        let n = self.size();
        let entries = (0..n)
            .map(|i| (0..n).map(|j| self.entries[j][i].adjoint()).collect())
            .collect();
        SymMatrix {
            spaces: self.spaces.clone(),
            entries,
        }
    }

    pub fn map(&self, f: impl Fn(&Term) -> Term) -> SymMatrix {
        SymMatrix {
            spaces: self.spaces.clone(),
            entries: self.entries.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &SymMatrix) -> SymMatrix {
        let mut spaces = self.spaces.clone();
        spaces.extend_from_slice(&other.spaces);
        let n = spaces.len();
        let k = self.size();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match (i < k, j < k) {
                        (true, true) => self.entries[i][j].clone(),
                        (false, false) => other.entries[i - k][j - k].clone(),
                        _ => Term::zero(spaces[j], spaces[i]),
                    })
                    .collect()
            })
            .collect();
        SymMatrix { spaces, entries }
    }

    /// `U* M U` for the signed permutation `(Uv)_p = sign_p · v_{perm[p]}`,
    /// written on the source decomposition of `U`.
    pub fn conjugate_signed_permutation(&self, perm: &[usize], sign: &[i64]) -> Result<SymMatrix, SymbolicError> {
        let n = self.size();
        if perm.len() != n || sign.len() != n {
            return Err(SymbolicError::Signature("permutation length mismatch".into()));
        }
        let mut inv = vec![usize::MAX; n];
        for (p, &q) in perm.iter().enumerate() {
            inv[q] = p;
        }
        let spaces: Vec<Space> = (0..n).map(|i| self.spaces[inv[i]]).collect();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let (p, q) = (inv[i], inv[j]);
                        self.entries[p][q].scale(&super::scalar::Scalar::int(sign[p] * sign[q]))
                    })
                    .collect()
            })
            .collect();
        SymMatrix::new(spaces, entries)
    }
}

/// `M · M` with every entry reduced.
pub fn square_symbolic(m: &SymMatrix, rs: &RewriteSystem) -> Result<Vec<Vec<Reduction>>, SymbolicError> {
    let sq = m.mul(m)?;
    (0..sq.size())
        .map(|i| (0..sq.size()).map(|j| reduce(sq.entry(i, j), rs)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swap_of_identities_squares_to_one() {
        let sp = [Space::H0, Space::H0];
        let m = SymMatrix::from_text(&sp, &[&["", "1"], &["1", ""]]).unwrap();
        let sq = square_symbolic(&m, &RewriteSystem::default()).unwrap();
        for (i, row) in sq.iter().enumerate() {
            for (j, r) in row.iter().enumerate() {
                assert_eq!(r.term, *SymMatrix::identity(&sp).entry(i, j));
            }
        }
    }

    #[test]
    fn slot_signatures_are_checked() {
        let sp = [Space::H1, Space::H0];
        assert!(SymMatrix::from_text(&sp, &[&["a", "b"], &["b*", "c"]]).is_ok());
        assert!(SymMatrix::from_text(&sp, &[&["a", "b*"], &["b", "c"]]).is_err());
    }
}
