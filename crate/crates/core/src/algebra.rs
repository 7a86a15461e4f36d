//! Finite-dimensional model of the coefficient algebra: a direct sum of matrix
//! blocks, its ideals (subsets of blocks), and representations on a concrete
//! Hilbert space.
//!
//! Block indices are zero-based throughout.

use std::collections::{BTreeMap, BTreeSet};

use faer::{c64, Mat};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};

/// `A = M_{n_0} ⊕ M_{n_1} ⊕ …`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockAlgebra {
    blocks: Vec<usize>,
}

impl BlockAlgebra {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Shape("block algebra needs at least one block".into()));
        }
        if let Some(i) = blocks.iter().position(|&n| n == 0) {
            return Err(Error::Shape(format!("block {i} has dimension 0")));
        }
        Ok(Self { blocks })
    }

    /// Functions on `sites` points: every block is 1×1.
    pub fn commutative(sites: usize) -> Result<Self> {
        Self::new(vec![1; sites])
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_commutative(&self) -> bool {
        self.blocks.iter().all(|&n| n == 1)
    }
}

/// An element `φ = (φ_0, φ_1, …)` with `φ_i` an `n_i × n_i` complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    blocks: Vec<CMat>,
}

impl AlgebraElement {
    pub fn new(alg: &BlockAlgebra, blocks: Vec<CMat>) -> Result<Self> {
        if blocks.len() != alg.num_blocks() {
            return Err(Error::Shape(format!(
                "element has {} blocks, algebra has {}",
                blocks.len(),
                alg.num_blocks()
            )));
        }
        for (i, (b, &n)) in blocks.iter().zip(alg.blocks()).enumerate() {
            if b.nrows() != n || b.ncols() != n {
                return Err(Error::Shape(format!(
                    "block {i} is {}x{}, expected {n}x{n}",
                    b.nrows(),
                    b.ncols()
                )));
            }
        }
        Ok(Self { blocks })
    }

    pub fn identity(alg: &BlockAlgebra) -> Self {
        Self {
            blocks: alg.blocks().iter().map(|&n| linalg::identity(n)).collect(),
        }
    }

    pub fn zero(alg: &BlockAlgebra) -> Self {
        Self {
            blocks: alg.blocks().iter().map(|&n| linalg::zeros(n, n)).collect(),
        }
    }

    /// Unit of block `i` (identity there, zero elsewhere).
    pub fn block_unit(alg: &BlockAlgebra, i: usize) -> Self {
        let mut out = Self::zero(alg);
        out.blocks[i] = linalg::identity(alg.blocks()[i]);
        out
    }

    /// Multiplication operator by a real function of the block index
    /// (commutative algebras only).
    pub fn from_function(alg: &BlockAlgebra, values: &[f64]) -> Result<Self> {
        if !alg.is_commutative() {
            return Err(Error::Shape("from_function needs a commutative algebra".into()));
        }
        if values.len() != alg.num_blocks() {
            return Err(Error::Shape(format!(
                "{} function values for {} sites",
                values.len(),
                alg.num_blocks()
            )));
        }
        let blocks = values
            .iter()
            .map(|&v| Mat::from_fn(1, 1, |_, _| c64::new(v, 0.0)))
            .collect();
        Ok(Self { blocks })
    }

    /// Hermitian element with entries of magnitude O(1).
    pub fn random_hermitian<R: Rng>(alg: &BlockAlgebra, rng: &mut R) -> Self {
        let blocks = alg
            .blocks()
            .iter()
            .map(|&n| {
                let g = Mat::from_fn(n, n, |_, _| {
                    c64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                });
                let h = &g + g.adjoint();
                linalg::scale(&h, 0.5)
            })
            .collect();
        Self { blocks }
    }

    pub fn random<R: Rng>(alg: &BlockAlgebra, rng: &mut R) -> Self {
        let blocks = alg
            .blocks()
            .iter()
            .map(|&n| {
                Mat::from_fn(n, n, |_, _| {
                    c64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                })
            })
            .collect();
        Self { blocks }
    }

    pub fn blocks(&self) -> &[CMat] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &CMat {
        &self.blocks[i]
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a * b).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            blocks: self.blocks.iter().map(|b| linalg::scale(b, s)).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            blocks: self.blocks.iter().map(linalg::adjoint).collect(),
        }
    }

    /// Largest max-abs entry over all blocks.
    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().map(linalg::max_abs).fold(0.0, f64::max)
    }

    pub fn is_zero_on(&self, i: usize) -> bool {
        linalg::is_zero(&self.blocks[i])
    }
}

/// Ideal `J ⊂ A`, given by the set of blocks it contains.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ideal {
    blocks: BTreeSet<usize>,
}

impl Ideal {
    pub fn new(blocks: impl IntoIterator<Item = usize>) -> Self {
        Self {
            blocks: blocks.into_iter().collect(),
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn full(alg: &BlockAlgebra) -> Self {
        Self::new(0..alg.num_blocks())
    }

    pub fn contains(&self, block: usize) -> bool {
        self.blocks.contains(&block)
    }

    pub fn blocks(&self) -> &BTreeSet<usize> {
        &self.blocks
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn validate(&self, alg: &BlockAlgebra) -> Result<()> {
        match self.blocks.iter().next_back() {
            Some(&max) if max >= alg.num_blocks() => Err(Error::MalformedIdeal {
                index: max,
                blocks: alg.num_blocks(),
            }),
            _ => Ok(()),
        }
    }
}

/// `J_1 + J_2 = A`, which in the block model means the index sets cover all blocks.
pub fn ideal_cover_check(j1: &Ideal, j2: &Ideal, alg: &BlockAlgebra) -> Result<bool> {
    j1.validate(alg)?;
    j2.validate(alg)?;
    Ok((0..alg.num_blocks()).all(|i| j1.contains(i) || j2.contains(i)))
}

pub fn ideal_intersect(j1: &Ideal, j2: &Ideal) -> Ideal {
    Ideal {
        blocks: j1.blocks.intersection(&j2.blocks).copied().collect(),
    }
}

/// Splits `φ = φ_1 + φ_2` with `φ_1 ∈ J_1`, `φ_2 ∈ J_2`; on the overlap
/// `φ_1 = λφ` and `φ_2 = (1-λ)φ`.
pub fn ideal_decompose(
    phi: &AlgebraElement,
    j1: &Ideal,
    j2: &Ideal,
    lambda: f64,
    alg: &BlockAlgebra,
) -> Result<(AlgebraElement, AlgebraElement)> {
    if phi.num_blocks() != alg.num_blocks() {
        return Err(Error::Shape("element does not belong to the algebra".into()));
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Shape(format!("split parameter {lambda} outside [0, 1]")));
    }
    if !ideal_cover_check(j1, j2, alg)? {
        let uncovered = (0..alg.num_blocks())
            .filter(|&i| !j1.contains(i) && !j2.contains(i))
            .collect();
        return Err(Error::NoDecomposition { uncovered });
    }
    let mut first = Vec::with_capacity(alg.num_blocks());
    let mut second = Vec::with_capacity(alg.num_blocks());
    for (i, block) in phi.blocks().iter().enumerate() {
        let n = block.nrows();
        match (j1.contains(i), j2.contains(i)) {
            (true, false) => {
                first.push(block.clone());
                second.push(linalg::zeros(n, n));
            }
            (false, true) => {
                first.push(linalg::zeros(n, n));
                second.push(block.clone());
            }
            _ => {
                // The larger share is rounded, the smaller one is the exact
                // remainder (Sterbenz), so φ_1 + φ_2 == φ bit for bit.
                if lambda >= 0.5 {
                    let part = linalg::scale(block, lambda);
                    second.push(block - &part);
                    first.push(part);
                } else {
                    let part = linalg::scale(block, 1.0 - lambda);
                    first.push(block - &part);
                    second.push(part);
                }
            }
        }
    }
    Ok((AlgebraElement { blocks: first }, AlgebraElement { blocks: second }))
}

/// Placement of one basis vector of `H`: the block it belongs to (or `None`
/// if `A` acts on it by zero), its row inside the block and which copy of the
/// block representation it sits in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slot {
    pub block: Option<usize>,
    pub row: usize,
    pub copy: usize,
}

/// Representation `ρ: A → B(H)` acting by `φ_i ⊗ 1_{m_i}`, with an optional
/// grading sign per basis vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraRep {
    algebra: BlockAlgebra,
    slots: Vec<Slot>,
    multiplicities: Vec<usize>,
    grading: Option<Vec<i8>>,
}

impl AlgebraRep {
    /// Validated representation from an explicit basis layout.
    pub fn new(algebra: BlockAlgebra, slots: Vec<Slot>, grading: Option<Vec<i8>>) -> Result<Self> {
        let nb = algebra.num_blocks();
        let mut fibers: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        let mut null_rows = BTreeSet::new();
        for (k, s) in slots.iter().enumerate() {
            match s.block {
                Some(b) => {
                    if b >= nb {
                        return Err(Error::Shape(format!("slot {k} refers to block {b} of {nb}")));
                    }
                    if s.row >= algebra.blocks()[b] {
                        return Err(Error::Shape(format!("slot {k}: row {} out of block {b}", s.row)));
                    }
                    fibers.entry((b, s.copy)).or_default().push(s.row);
                }
                None => {
                    if !null_rows.insert((s.row, s.copy)) {
                        return Err(Error::Shape(format!("slot {k} duplicates a null slot")));
                    }
                }
            }
        }
        let mut multiplicities = vec![0usize; nb];
        for (&(b, copy), rows) in &fibers {
            let mut sorted = rows.clone();
            sorted.sort_unstable();
            if sorted != (0..algebra.blocks()[b]).collect::<Vec<_>>() {
                return Err(Error::Shape(format!("fiber (block {b}, copy {copy}) is incomplete")));
            }
            multiplicities[b] += 1;
        }
        for (b, &m) in multiplicities.iter().enumerate() {
            if (0..m).any(|c| !fibers.contains_key(&(b, c))) {
                return Err(Error::Shape(format!("copies of block {b} are not numbered 0..{m}")));
            }
        }
        if let Some(g) = &grading {
            if g.len() != slots.len() {
                return Err(Error::Grading(format!("{} signs for {} basis vectors", g.len(), slots.len())));
            }
            if g.iter().any(|&s| s != 1 && s != -1) {
                return Err(Error::Grading("grading signs must be +1 or -1".into()));
            }
            let mut fiber_sign: BTreeMap<(usize, usize), i8> = BTreeMap::new();
            for (s, &sign) in slots.iter().zip(g) {
                if let Some(b) = s.block {
                    if *fiber_sign.entry((b, s.copy)).or_insert(sign) != sign {
                        return Err(Error::Grading(format!(
                            "grading is not constant on fiber (block {b}, copy {})",
                            s.copy
                        )));
                    }
                }
            }
        }
        Ok(Self {
            algebra,
            slots,
            multiplicities,
            grading,
        })
    }

    /// Block-major layout: all copies of block 0, then block 1, …
    pub fn standard(algebra: BlockAlgebra, multiplicities: &[usize]) -> Result<Self> {
        if multiplicities.len() != algebra.num_blocks() {
            return Err(Error::Shape("one multiplicity per block required".into()));
        }
        let mut slots = Vec::new();
        for (b, (&n, &m)) in algebra.blocks().iter().zip(multiplicities).enumerate() {
            for copy in 0..m {
                for row in 0..n {
                    slots.push(Slot {
                        block: Some(b),
                        row,
                        copy,
                    });
                }
            }
        }
        Self::new(algebra, slots, None)
    }

    pub fn with_grading(self, grading: Vec<i8>) -> Result<Self> {
        Self::new(self.algebra, self.slots, Some(grading))
    }

    pub fn algebra(&self) -> &BlockAlgebra {
        &self.algebra
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn dim(&self) -> usize {
        self.slots.len()
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn grading(&self) -> Option<&[i8]> {
        self.grading.as_deref()
    }

    pub fn is_graded(&self) -> bool {
        self.grading.is_some()
    }

    pub fn grading_signs_f64(&self) -> Option<Vec<f64>> {
        self.grading
            .as_ref()
            .map(|g| g.iter().map(|&s| f64::from(s)).collect())
    }

    /// The grading operator `γ` as a diagonal matrix.
    pub fn grading_operator(&self) -> Option<CMat> {
        self.grading_signs_f64().map(|g| linalg::real_diag(&g))
    }

    /// `AH = H`: no basis vector is annihilated by `A` and every block is
    /// represented at least once.
    pub fn is_nondegenerate(&self) -> bool {
        self.slots.iter().all(|s| s.block.is_some()) && self.multiplicities.iter().all(|&m| m >= 1)
    }

    /// Basis indices spanning `JH`.
    pub fn ideal_indices(&self, j: &Ideal) -> Vec<usize> {
        self.slots
            .iter()
            .enumerate()
            .filter(|(_, s)| s.block.is_some_and(|b| j.contains(b)))
            .map(|(k, _)| k)
            .collect()
    }

    /// Basis indices spanning the essential subspace `AH`.
    pub fn essential_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.slots[k].block.is_some()).collect()
    }

    /// Restriction to a set of basis vectors that is a union of whole
    /// fibers; copies are renumbered from zero.
    pub fn restrict(&self, indices: &[usize]) -> Result<Self> {
        let slots = indices.iter().map(|&k| self.slots[k]).collect();
        let grading = self.grading.as_ref().map(|g| indices.iter().map(|&k| g[k]).collect());
        Self::new(self.algebra.clone(), renumber_copies(slots), grading)
    }

    /// Concatenation `H ⊕ H'` of two representations of the same algebra.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch("direct sum of representations of different algebras".into()));
        }
        if self.is_graded() != other.is_graded() {
            return Err(Error::Grading("direct sum of graded and ungraded representations".into()));
        }
        let null_offset = self
            .slots
            .iter()
            .filter(|s| s.block.is_none())
            .map(|s| s.copy + 1)
            .max()
            .unwrap_or(0);
        let mut slots = self.slots.clone();
        slots.extend(other.slots.iter().map(|s| Slot {
            copy: s.copy
                + match s.block {
                    Some(b) => self.multiplicities[b],
                    None => null_offset,
                },
            ..*s
        }));
        let grading = match (&self.grading, &other.grading) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        Self::new(self.algebra.clone(), renumber_copies(slots), grading)
    }

    /// Reorders the basis: new basis vector `k` is old basis vector `order[k]`.
    pub fn permute(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.dim() {
            return Err(Error::Shape("permutation length differs from dimension".into()));
        }
        self.restrict(order)
    }

    /// `ρ(φ)` as a dense matrix.
    pub fn rep_apply(&self, phi: &AlgebraElement) -> Result<CMat> {
        if phi.num_blocks() != self.algebra.num_blocks() {
            return Err(Error::Shape(format!(
                "element with {} blocks applied to representation of {} blocks",
                phi.num_blocks(),
                self.algebra.num_blocks()
            )));
        }
        for (i, (b, &n)) in phi.blocks().iter().zip(self.algebra.blocks()).enumerate() {
            if b.nrows() != n || b.ncols() != n {
                return Err(Error::Shape(format!("element block {i} has the wrong size")));
            }
        }
        let n = self.dim();
        let mut out = linalg::zeros(n, n);
        for (b, fiber) in self.fibers() {
            let block = phi.block(b);
            for &(ri, u) in &fiber {
                for &(rj, v) in &fiber {
                    out[(u, v)] = block[(ri, rj)];
                }
            }
        }
        Ok(out)
    }

    /// Orthogonal projection onto `JH`.
    pub fn ideal_projection(&self, j: &Ideal) -> CMat {
        let diag: Vec<f64> = self
            .slots
            .iter()
            .map(|s| if s.block.is_some_and(|b| j.contains(b)) { 1.0 } else { 0.0 })
            .collect();
        linalg::real_diag(&diag)
    }

    /// `(block, [(row, basis index)])` for every fiber.
    fn fibers(&self) -> Vec<(usize, Vec<(usize, usize)>)> {
        let mut map: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
        for (k, s) in self.slots.iter().enumerate() {
            if let Some(b) = s.block {
                map.entry((b, s.copy)).or_default().push((s.row, k));
            }
        }
        map.into_iter().map(|((b, _), f)| (b, f)).collect()
    }
}

pub fn ideal_projection(j: &Ideal, rep: &AlgebraRep) -> Result<CMat> {
    j.validate(rep.algebra())?;
    Ok(rep.ideal_projection(j))
}

pub fn rep_apply(rep: &AlgebraRep, phi: &AlgebraElement) -> Result<CMat> {
    rep.rep_apply(phi)
}

/// Renumbers copies so that for each block they are `0..m` in order of first
/// appearance. Assumes `(block, copy)` already identifies a fiber.
fn renumber_copies(mut slots: Vec<Slot>) -> Vec<Slot> {
    let mut seen: BTreeMap<(Option<usize>, usize), usize> = BTreeMap::new();
    let mut next: BTreeMap<Option<usize>, usize> = BTreeMap::new();
    for s in &mut slots {
        let id = *seen.entry((s.block, s.copy)).or_insert_with(|| {
            let c = next.entry(s.block).or_default();
            *c += 1;
            *c - 1
        });
        s.copy = id;
    }
    slots
}
