//! Fredholm modules `(ρ, H, F)` as data, with singular-value profiles standing
//! in for the "modulo compact" relations, the three-by-three block
//! decomposition attached to a pair of covering ideals, and the
//! agreement-on-an-ideal measurement.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{ideal_cover_check, ideal_intersect, AlgebraElement, AlgebraRep, BlockAlgebra, Ideal, Slot};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat};

/// Tolerance for structural identities (intertwiners, projections).
pub const EXACT_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct FredholmModule {
    rep: AlgebraRep,
    f: CMat,
}

impl FredholmModule {
    pub fn new(rep: AlgebraRep, f: CMat) -> Result<Self> {
        if f.nrows() != rep.dim() || f.ncols() != rep.dim() {
            return Err(Error::Shape(format!(
                "operator is {}x{}, representation has dimension {}",
                f.nrows(),
                f.ncols(),
                rep.dim()
            )));
        }
        Ok(Self { rep, f })
    }

    pub fn rep(&self) -> &AlgebraRep {
        &self.rep
    }

    pub fn operator(&self) -> &CMat {
        &self.f
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn is_graded(&self) -> bool {
        self.rep.is_graded()
    }

    pub fn algebra(&self) -> &BlockAlgebra {
        self.rep.algebra()
    }

    /// Same module written in a reordered basis.
    pub fn permute(&self, order: &[usize]) -> Result<Self> {
        let rep = self.rep.permute(order)?;
        let f = linalg::select(&self.f, order, order);
        Self::new(rep, f)
    }
}

/// `x ⊕ x̃`: block-diagonal representation and operator.
pub fn direct_sum(x: &FredholmModule, y: &FredholmModule) -> Result<FredholmModule> {
    if x.algebra() != y.algebra() {
        return Err(Error::AlgebraMismatch("direct sum of modules over different algebras".into()));
    }
    let rep = x.rep.direct_sum(&y.rep)?;
    FredholmModule::new(rep, linalg::direct_sum(&x.f, &y.f))
}

/// Singular values `σ_1 ≥ σ_2 ≥ …` of a defect operator.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CompactnessProfile {
    pub singular_values: Vec<f64>,
}

impl CompactnessProfile {
    pub fn of(m: &CMat) -> Result<Self> {
        Ok(Self {
            singular_values: linalg::singular_values(m)?,
        })
    }

    /// `σ_k`, one-based; zero past the end.
    pub fn sigma(&self, k: usize) -> f64 {
        assert!(k >= 1, "singular values are indexed from 1");
        self.singular_values.get(k - 1).copied().unwrap_or(0.0)
    }

    pub fn norm(&self) -> f64 {
        self.sigma(1)
    }

    pub fn is_zero(&self) -> bool {
        self.singular_values.iter().all(|&s| s == 0.0)
    }

    pub fn len(&self) -> usize {
        self.singular_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.singular_values.is_empty()
    }
}

/// A named test element of the algebra.
#[derive(Clone, Debug)]
pub struct TestElement {
    pub id: String,
    pub element: AlgebraElement,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalityDefect {
    pub id: String,
    pub norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DefectReport {
    /// `‖F − F*‖`
    pub selfadjoint_defect: f64,
    /// Profile of `F² − 1`.
    pub square_profile: CompactnessProfile,
    /// `‖[F, ρ(φ)]‖` per test element.
    pub locality_defects: Vec<LocalityDefect>,
    /// `‖γF + Fγ‖`, graded modules only.
    pub odd_defect: Option<f64>,
}

impl DefectReport {
    pub fn square_defect(&self) -> f64 {
        self.square_profile.norm()
    }

    pub fn max_locality_defect(&self) -> f64 {
        self.locality_defects.iter().map(|l| l.norm).fold(0.0, f64::max)
    }

    /// Largest of all reported defects.
    pub fn max_defect(&self) -> f64 {
        self.selfadjoint_defect
            .max(self.square_defect())
            .max(self.max_locality_defect())
            .max(self.odd_defect.unwrap_or(0.0))
    }

    pub fn locality(&self, id: &str) -> Option<f64> {
        self.locality_defects.iter().find(|l| l.id == id).map(|l| l.norm)
    }
}

/// Raised-cosine bump `½(1 + cos(π(i − center)/half_width))` over block
/// indices, times the identity of each block.
pub fn bump(alg: &BlockAlgebra, center: f64, half_width: f64) -> AlgebraElement {
    let blocks = alg
        .blocks()
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let u = (i as f64 - center) / half_width;
            let v = if u.abs() < 1.0 {
                0.5 * (1.0 + (std::f64::consts::PI * u).cos())
            } else {
                0.0
            };
            linalg::scale(&linalg::identity(n), v)
        })
        .collect();
    AlgebraElement::new(alg, blocks).expect("bump matches the algebra")
}

/// Default test family: the unit, five raised-cosine bumps centred at evenly
/// spaced blocks, and three seeded random Hermitian elements.
pub fn standard_test_family(alg: &BlockAlgebra, seed: u64) -> Vec<TestElement> {
    let mut out = vec![TestElement {
        id: "identity".into(),
        element: AlgebraElement::identity(alg),
    }];
    out.extend(bump_family(alg));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..3 {
        out.push(TestElement {
            id: format!("random{k}"),
            element: AlgebraElement::random_hermitian(alg, &mut rng),
        });
    }
    out
}

/// The five bumps of the standard family; widths scale with the number of
/// blocks, so on a refinement family they are the same physical function.
pub fn bump_family(alg: &BlockAlgebra) -> Vec<TestElement> {
    let nb = alg.num_blocks() as f64;
    let half_width = nb / 6.0;
    (0..5)
        .map(|k| {
            let center = (k as f64 + 1.0) * nb / 6.0 - 0.5;
            TestElement {
                id: format!("bump{k}"),
                element: bump(alg, center, half_width),
            }
        })
        .collect()
}

pub fn defect_report(x: &FredholmModule, tests: &[TestElement]) -> Result<DefectReport> {
    let gamma = x.rep.grading_signs_f64();
    defect_report_with(&x.f, |phi| x.rep.rep_apply(phi), gamma.as_deref(), tests)
}

/// Defect report for an operator with an arbitrary representation map.
pub fn defect_report_with(
    f: &CMat,
    rho: impl Fn(&AlgebraElement) -> Result<CMat>,
    gamma: Option<&[f64]>,
    tests: &[TestElement],
) -> Result<DefectReport> {
    let n = f.nrows();
    let skew = f - f.adjoint();
    let selfadjoint_defect = linalg::op_norm(&skew)?;
    let square = f * f - linalg::identity(n);
    let square_profile = CompactnessProfile::of(&square)?;
    let mut locality_defects = Vec::with_capacity(tests.len());
    for t in tests {
        let r = rho(&t.element)?;
        let c = linalg::commutator(f, &r);
        locality_defects.push(LocalityDefect {
            id: t.id.clone(),
            norm: linalg::op_norm(&c)?,
        });
    }
    let odd_defect = match gamma {
        Some(g) => {
            let anti = linalg::diag_mul_left(g, f) + linalg::diag_mul_right(f, g);
            Some(linalg::op_norm(&anti)?)
        }
        None => None,
    };
    Ok(DefectReport {
        selfadjoint_defect,
        square_profile,
        locality_defects,
        odd_defect,
    })
}

/// True iff every defect is at most `tol`.
pub fn is_degenerate(x: &FredholmModule, tests: &[TestElement], tol: f64) -> Result<bool> {
    if tol < 0.0 {
        return Err(Error::Shape("tolerance must be nonnegative".into()));
    }
    Ok(defect_report(x, tests)?.max_defect() <= tol)
}

/// Profiles of `ρ(φ)C` and `Cρ(φ)` for each test element: the measurement
/// behind "locally compact".
pub fn local_profiles(c: &CMat, rep: &AlgebraRep, tests: &[TestElement]) -> Result<Vec<(String, CompactnessProfile, CompactnessProfile)>> {
    tests
        .iter()
        .map(|t| {
            let r = rep.rep_apply(&t.element)?;
            Ok((t.id.clone(), CompactnessProfile::of(&(&r * c))?, CompactnessProfile::of(&(c * &r))?))
        })
        .collect()
}

/// `H = H_1 ⊕ H_0 ⊕ H_2` with `H_0 = JH`, `H_1 = J_1H ⊖ H_0`,
/// `H_2 = J_2H ⊖ H_0`, and the five blocks of `F` in that order.
#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    /// Basis indices of `H_1`, `H_0`, `H_2` (in this order).
    pub indices: [Vec<usize>; 3],
    pub a: CMat,
    pub b: CMat,
    pub c: CMat,
    pub d: CMat,
    pub e: CMat,
    /// Profile of `P_1FP_2`.
    pub corner_profile: CompactnessProfile,
    /// Profile of `P_2FP_1`.
    pub corner_profile_adjoint: CompactnessProfile,
}

impl BlockDecomposition {
    pub fn dims(&self) -> [usize; 3] {
        [self.indices[0].len(), self.indices[1].len(), self.indices[2].len()]
    }

    pub fn h1(&self) -> &[usize] {
        &self.indices[0]
    }

    pub fn h0(&self) -> &[usize] {
        &self.indices[1]
    }

    pub fn h2(&self) -> &[usize] {
        &self.indices[2]
    }

    /// Projections `[P_1, P_0, P_2]` on `H` of dimension `dim`.
    pub fn projections(&self, dim: usize) -> [CMat; 3] {
        let proj = |idx: &[usize]| {
            let mut d = vec![0.0; dim];
            for &k in idx {
                d[k] = 1.0;
            }
            linalg::real_diag(&d)
        };
        [proj(&self.indices[0]), proj(&self.indices[1]), proj(&self.indices[2])]
    }

    /// Basis order `H_1, H_0, H_2`.
    pub fn ordering(&self) -> Vec<usize> {
        self.indices.iter().flatten().copied().collect()
    }
}

pub fn block_decompose(x: &FredholmModule, j1: &Ideal, j2: &Ideal) -> Result<BlockDecomposition> {
    let alg = x.algebra();
    if !ideal_cover_check(j1, j2, alg)? {
        let uncovered = (0..alg.num_blocks())
            .filter(|&i| !j1.contains(i) && !j2.contains(i))
            .collect();
        return Err(Error::NoDecomposition { uncovered });
    }
    if !x.rep.is_nondegenerate() {
        return Err(Error::Degenerate("block decomposition needs AH = H".into()));
    }
    let j = ideal_intersect(j1, j2);
    let slots = x.rep.slots();
    let region = |k: usize| {
        let b = slots[k].block.expect("nondegenerate");
        match (j1.contains(b), j2.contains(b)) {
            (true, true) => 1,
            (true, false) => 0,
            _ => 2,
        }
    };
    let mut indices: [Vec<usize>; 3] = Default::default();
    for k in 0..x.dim() {
        indices[region(k)].push(k);
    }
    debug_assert_eq!(indices[1], x.rep.ideal_indices(&j));
    let [i1, i0, i2] = &indices;
    let f = &x.f;
    let corner = linalg::select(f, i1, i2);
    let corner_adj = linalg::select(f, i2, i1);
    Ok(BlockDecomposition {
        a: linalg::select(f, i1, i1),
        b: linalg::select(f, i1, i0),
        c: linalg::select(f, i0, i0),
        d: linalg::select(f, i0, i2),
        e: linalg::select(f, i2, i2),
        corner_profile: CompactnessProfile::of(&corner)?,
        corner_profile_adjoint: CompactnessProfile::of(&corner_adj)?,
        indices,
    })
}

/// Canonical identification `JH → JH̃`: basis vectors with equal slots are
/// matched. Returned as the index map from positions in `x`'s `JH` list to
/// positions in `x̃`'s `JH` list.
pub fn canonical_identification(x: &AlgebraRep, y: &AlgebraRep, j: &Ideal) -> Result<Vec<usize>> {
    let ix = x.ideal_indices(j);
    let iy = y.ideal_indices(j);
    if ix.len() != iy.len() {
        return Err(Error::Identification(format!(
            "JH has dimension {} and {} in the two modules",
            ix.len(),
            iy.len()
        )));
    }
    let key = |rep: &AlgebraRep, k: usize| -> (Slot, i8) {
        (rep.slots()[k], rep.grading().map_or(0, |g| g[k]))
    };
    let mut lookup = std::collections::BTreeMap::new();
    for (pos, &k) in iy.iter().enumerate() {
        lookup.insert(key(y, k), pos);
    }
    ix.iter()
        .map(|&k| {
            lookup.get(&key(x, k)).copied().ok_or_else(|| {
                Error::Identification(format!("no partner for basis vector {k} ({:?})", x.slots()[k]))
            })
        })
        .collect()
}

/// Permutation matrix `T: JH → JH̃` for a position map.
pub fn identification_matrix(map: &[usize]) -> CMat {
    let n = map.len();
    let mut t = linalg::zeros(n, n);
    for (from, &to) in map.iter().enumerate() {
        t[(to, from)] = linalg::ONE;
    }
    t
}

/// Checks that `T: JH → JH̃` is an isometry intertwining the representations
/// (tested on three seeded random elements and the block units of `J`'s
/// first blocks) and preserving the grading. Returns the largest defect.
pub fn check_intertwiner(t: &CMat, x: &AlgebraRep, y: &AlgebraRep, j: &Ideal) -> Result<f64> {
    let ix = x.ideal_indices(j);
    let iy = y.ideal_indices(j);
    if t.nrows() != iy.len() || t.ncols() != ix.len() {
        return Err(Error::Shape(format!(
            "T is {}x{}, expected {}x{}",
            t.nrows(),
            t.ncols(),
            iy.len(),
            ix.len()
        )));
    }
    let alg = x.algebra();
    let mut rng = ChaCha8Rng::seed_from_u64(0x1d_e4_1a_15);
    let mut elements: Vec<AlgebraElement> = (0..3).map(|_| AlgebraElement::random(alg, &mut rng)).collect();
    elements.extend(j.blocks().iter().take(4).map(|&b| AlgebraElement::block_unit(alg, b)));
    let mut worst = 0.0f64;
    for phi in &elements {
        let rx = linalg::select(&x.rep_apply(phi)?, &ix, &ix);
        let ry = linalg::select(&y.rep_apply(phi)?, &iy, &iy);
        worst = worst.max(linalg::max_abs(&(t * &rx - &ry * t)));
    }
    let iso = t.adjoint() * t - linalg::identity(ix.len());
    worst = worst.max(linalg::max_abs(&iso));
    if let (Some(gx), Some(gy)) = (x.grading_signs_f64(), y.grading_signs_f64()) {
        let gx: Vec<f64> = ix.iter().map(|&k| gx[k]).collect();
        let gy: Vec<f64> = iy.iter().map(|&k| gy[k]).collect();
        let g = linalg::diag_mul_right(t, &gx) - linalg::diag_mul_left(&gy, t);
        worst = worst.max(linalg::max_abs(&g));
    }
    Ok(worst)
}

/// Profile of `T P F P T* − P̃ F̃ P̃` on `JH̃`; with the canonical
/// identification this is the profile of `c − c̃`.
pub fn agreement_defect(x: &FredholmModule, y: &FredholmModule, j: &Ideal, t: Option<&CMat>) -> Result<CompactnessProfile> {
    j.validate(x.algebra())?;
    if x.algebra() != y.algebra() {
        return Err(Error::AlgebraMismatch("modules over different algebras".into()));
    }
    let t = match t {
        Some(t) => t.clone(),
        None => identification_matrix(&canonical_identification(&x.rep, &y.rep, j)?),
    };
    let defect = check_intertwiner(&t, &x.rep, &y.rep, j)?;
    if defect > EXACT_TOL {
        return Err(Error::InvalidIntertwiner {
            defect,
            tol: EXACT_TOL,
        });
    }
    let ix = x.rep.ideal_indices(j);
    let iy = y.rep.ideal_indices(j);
    let c = linalg::select(&x.f, &ix, &ix);
    let ct = linalg::select(&y.f, &iy, &iy);
    let diff = &t * &c * t.adjoint() - ct;
    CompactnessProfile::of(&diff)
}
