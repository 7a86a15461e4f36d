//! Certificates: the pasted operator and the homotopy square to the
//! identity modulo the axioms.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::matrix::SymMatrix;
use super::rewrite::{reduce, Reduction, RewriteSystem, Step, KILL};
use super::scalar::Scalar;
use super::term::Space;
use super::SymbolicError;

/// At most this many alternative rule orderings are tried on a stuck entry.
pub const MAX_ORDERINGS: usize = 24;

pub const QUOTIENT_NOTE: &str = "relations hold modulo compact and modulo locally compact operators; \
both are treated as equalities in the quotient by locally compact operators";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryCertificate {
    /// 1-based.
    pub row: usize,
    pub col: usize,
    pub pass: bool,
    pub expected: String,
    pub normal_form: String,
    /// 0 for the listed rule order, otherwise the index of the fallback
    /// ordering that succeeded.
    pub ordering: usize,
    pub steps: Vec<Step>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    pub note: String,
    pub axioms: Vec<String>,
    pub entries: Vec<EntryCertificate>,
    pub checks: Vec<Check>,
    pub total_steps: usize,
    pub elapsed_ms: f64,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.pass) && self.checks.iter().all(|c| c.pass)
    }

    pub fn pass_count(&self) -> usize {
        self.entries.iter().filter(|e| e.pass).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &EntryCertificate> {
        self.entries.iter().filter(|e| !e.pass)
    }

    pub fn entry(&self, row: usize, col: usize) -> Option<&EntryCertificate> {
        self.entries.iter().find(|e| e.row == row && e.col == col)
    }
}

/// `x ◇ x̃` on `H_1 ⊕ H_0 ⊕ H̃_2`.
pub fn proposition_matrix() -> SymMatrix {
    SymMatrix::from_text(
        &[Space::H1, Space::H0, Space::H2t],
        &[&["a", "b", ""], &["b*", "c", "d~"], &["", "d~*", "e~"]],
    )
    .expect("well typed")
}

/// `x̃ ◇ x` on `H̃_1 ⊕ H_0 ⊕ H_2`.
pub fn mirror_matrix() -> SymMatrix {
    SymMatrix::from_text(
        &[Space::H1t, Space::H0, Space::H2],
        &[&["a~", "b~", ""], &["b~*", "c", "d"], &["", "d*", "e"]],
    )
    .expect("well typed")
}

/// `𝓕_t` on `H_1 ⊕ H_0 ⊕ H_2 ⊕ H̃_1 ⊕ H̃_0 ⊕ H̃_2` with `s = sin t`,
/// `k = cos t`.
pub fn homotopy_matrix() -> SymMatrix {
    SymMatrix::from_text(
        &[Space::H1, Space::H0, Space::H2, Space::H1t, Space::H0, Space::H2t],
        &[
            &["a", "b", "", "", "", ""],
            &["b*", "c", "k d", "", "", "-s d~"],
            &["", "k d*", "e", "", "s d*", ""],
            &["", "", "", "a~", "b~", ""],
            &["", "", "s d", "b~*", "c", "k d~"],
            &["", "-s d~*", "", "", "k d~*", "e~"],
        ],
    )
    .expect("well typed")
}

/// Slot `p` of the pasted decomposition takes slot `PASTING_PERM[p]` of
/// `H ⊕ H̃`, times `PASTING_SIGN[p]`.
pub const PASTING_PERM: [usize; 6] = [0, 1, 5, 3, 4, 2];
pub const PASTING_SIGN: [i64; 6] = [1, 1, -1, 1, 1, 1];

fn permutations_of(ids: &[String], limit: usize) -> Vec<Vec<String>> {
    let mut cur = ids.to_vec();
    let mut out = Vec::new();
    // Lexicographic successors of the listed order.
    let mut idx: Vec<usize> = (0..cur.len()).collect();
    while out.len() < limit {
        let Some(i) = (1..idx.len()).rev().find(|&i| idx[i - 1] < idx[i]) else {
            break;
        };
        let j = (i..idx.len()).rev().find(|&j| idx[j] > idx[i - 1]).expect("successor exists");
        idx.swap(i - 1, j);
        idx[i..].reverse();
        cur = idx.iter().map(|&k| ids[k].clone()).collect();
        out.push(cur.clone());
    }
    out
}

fn certify_entries(
    m: &SymMatrix,
    rs: &RewriteSystem,
) -> Result<(Vec<EntryCertificate>, usize), SymbolicError> {
    let sq = m.mul(m)?;
    let target = SymMatrix::identity(m.spaces());
    let ids: Vec<String> = rs.ids().into_iter().filter(|i| i != KILL).collect();
    let mut orderings: Option<Vec<Vec<String>>> = None;
    let mut entries = Vec::new();
    let mut total = 0;
    let n = m.size();
    for i in 0..n {
        for j in 0..n {
            let expected = target.entry(i, j);
            let first: Reduction = reduce(sq.entry(i, j), rs)?;
            total += first.steps.len();
            let mut chosen = (0, first.clone());
            if first.term != *expected {
                let alts = orderings.get_or_insert_with(|| permutations_of(&ids, MAX_ORDERINGS));
                for (k, order) in alts.iter().enumerate() {
                    let r = reduce(sq.entry(i, j), &rs.reordered(order))?;
                    total += r.steps.len();
                    if r.term == *expected {
                        chosen = (k + 1, r);
                        break;
                    }
                }
            }
            let (ordering, red) = chosen;
            entries.push(EntryCertificate {
                row: i + 1,
                col: j + 1,
                pass: red.term == *expected,
                expected: expected.to_string(),
                normal_form: red.term.to_string(),
                ordering,
                steps: red.steps,
            });
        }
    }
    Ok((entries, total))
}

fn certificate(name: &str, m: &SymMatrix, rs: &RewriteSystem, extra: impl FnOnce() -> Result<Vec<Check>, SymbolicError>) -> Result<Certificate, SymbolicError> {
    let start = Instant::now();
    let (entries, total_steps) = certify_entries(m, rs)?;
    let checks = extra()?;
    Ok(Certificate {
        name: name.into(),
        note: QUOTIENT_NOTE.into(),
        axioms: rs.ids(),
        entries,
        checks,
        total_steps,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

fn adjoint_check(m: &SymMatrix) -> Check {
    let pass = m.adjoint() == *m;
    Check {
        name: "selfadjoint".into(),
        pass,
        detail: if pass {
            "matrix equals its adjoint".into()
        } else {
            "matrix differs from its adjoint".into()
        },
    }
}

/// `(x ◇ x̃)² = 1` entry by entry.
pub fn verify_proposition_with(rs: &RewriteSystem) -> Result<Certificate, SymbolicError> {
    let m = proposition_matrix();
    certificate("proposition", &m, rs, || Ok(vec![adjoint_check(&m)]))
}

pub fn verify_proposition() -> Result<Certificate, SymbolicError> {
    verify_proposition_with(&RewriteSystem::default())
}

/// `𝓕_t² = 1` entry by entry, `𝓕_t = 𝓕_t*`, and at `t = π/2` the
/// conjugation identity with `(x ◇ x̃) ⊕ (x̃ ◇ x)`.
pub fn verify_homotopy_with(rs: &RewriteSystem) -> Result<Certificate, SymbolicError> {
    let m = homotopy_matrix();
    certificate("homotopy", &m, rs, || {
        let end = m.map(|t| t.map_scalars(|c| Scalar::int(c.eval_int(1, 0))));
        let pasted = proposition_matrix().direct_sum(&mirror_matrix());
        let conj = pasted.conjugate_signed_permutation(&PASTING_PERM, &PASTING_SIGN)?;
        let endpoint = conj == end;
        let start = m.map(|t| t.map_scalars(|c| Scalar::int(c.eval_int(0, 1))));
        let split = start == proposition_split();
        Ok(vec![
            adjoint_check(&m),
            Check {
                name: "endpoint".into(),
                pass: endpoint,
                detail: "F_{pi/2} = U* ((F<>F~) + (F~<>F)) U".into(),
            },
            Check {
                name: "start".into(),
                pass: split,
                detail: "F_0 = F + F~ without corners".into(),
            },
        ])
    })
}

pub fn verify_homotopy() -> Result<Certificate, SymbolicError> {
    verify_homotopy_with(&RewriteSystem::default())
}

/// `F ⊕ F̃` with corners removed, on the homotopy decomposition.
fn proposition_split() -> SymMatrix {
    SymMatrix::from_text(
        &[Space::H1, Space::H0, Space::H2, Space::H1t, Space::H0, Space::H2t],
        &[
            &["a", "b", "", "", "", ""],
            &["b*", "c", "d", "", "", ""],
            &["", "d*", "e", "", "", ""],
            &["", "", "", "a~", "b~", ""],
            &["", "", "", "b~*", "c", "d~"],
            &["", "", "", "", "d~*", "e~"],
        ],
    )
    .expect("well typed")
}
