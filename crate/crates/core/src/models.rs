//! Concrete module pairs: one-dimensional Wilson–Dirac domain-wall operators
//! on a discretised interval, and exact toy modules with vanishing defects.
//!
//! Lattice: sites `x_j = −L + (j + ½)h`, `h = 2L/N`, two spinor components
//! per site, grading `γ = 1 ⊗ σ_3`. The operator is
//!
//! ```text
//! D = σ_1 ⊗ i∇ + σ_2 ⊗ (m − (r h / 2) Δ)
//! ```
//!
//! with `∇` the central difference and `Δ` the lattice Laplacian. Its
//! `H_+ → H_-` block is `i(m + (1 − S*)/h)` for `r = 1`, so a mass wall
//! `− → +` binds a positive-chirality zero mode.
//!
//! With [`Boundary::Chiral`] (the default) the component that would carry a
//! spurious edge mode is removed at an end where the mass is negative:
//! `H_-` at the left end, `H_+` at the right end. The graded index then
//! equals `(sgn m(L) − sgn m(−L)) / 2`.

use faer::c64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraRep, BlockAlgebra, Ideal, Slot};
use crate::error::{Error, Result};
use crate::fredholm::{agreement_defect, CompactnessProfile, FredholmModule};
use crate::linalg::{self, CMat, ZERO};
use crate::surgery::SurgeryPair;

pub const MIN_SITES: usize = 16;
pub const MAX_SITES: usize = 2000;

/// Piecewise-constant mass: `values[0]` left of `breakpoints[0]`,
/// `values[i]` on `[breakpoints[i-1], breakpoints[i])`, …
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MassProfile {
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
}

impl MassProfile {
    pub fn constant(m: f64) -> Self {
        Self {
            breakpoints: Vec::new(),
            values: vec![m],
        }
    }

    /// Three segments separated at `x_l` and `x_r`.
    pub fn three(left: f64, middle: f64, right: f64, x_l: f64, x_r: f64) -> Self {
        Self {
            breakpoints: vec![x_l, x_r],
            values: vec![left, middle, right],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.len() != self.breakpoints.len() + 1 {
            return Err(Error::Config(format!(
                "mass profile has {} values for {} breakpoints",
                self.values.len(),
                self.breakpoints.len()
            )));
        }
        if self.breakpoints.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Config("mass breakpoints must be sorted".into()));
        }
        if self.values.iter().chain(&self.breakpoints).any(|v| !v.is_finite()) {
            return Err(Error::Config("mass profile contains a non-finite number".into()));
        }
        Ok(())
    }

    pub fn at(&self, x: f64) -> f64 {
        let seg = self.breakpoints.iter().take_while(|&&b| x >= b).count();
        self.values[seg]
    }

    /// The same profile on a domain stretched by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            breakpoints: self.breakpoints.iter().map(|b| b * factor).collect(),
            values: self.values.clone(),
        }
    }
}

/// How the two ends of the interval are closed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// Drop the spinor component that carries an edge mode at an end with
    /// negative mass.
    #[default]
    Chiral,
    /// Plain truncation: both components kept at every site.
    Dirichlet,
}

fn default_half_length() -> f64 {
    10.0
}
fn default_wilson_r() -> f64 {
    1.0
}
fn default_cutoff() -> f64 {
    1e-3
}
fn default_gap_ratio() -> f64 {
    10.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainWallConfig {
    #[serde(default = "default_half_length")]
    pub half_length: f64,
    pub sites: usize,
    pub mass: MassProfile,
    pub mass_tilde: MassProfile,
    #[serde(default = "default_wilson_r")]
    pub wilson_r: f64,
    /// `[x_l, x_r]`: `J_1` is the sites left of `x_r`, `J_2` the sites right
    /// of `x_l`.
    pub middle: [f64; 2],
    #[serde(default = "default_cutoff")]
    pub kernel_cutoff: f64,
    #[serde(default = "default_gap_ratio")]
    pub gap_ratio: f64,
    #[serde(default)]
    pub boundary: Boundary,
}

/// How a configuration is carried to another number of sites.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scaling {
    /// Same interval, finer lattice.
    #[default]
    FixedLength,
    /// Same lattice spacing; the interval and every breakpoint grow with `N`.
    FixedSpacing,
}

/// Which of the two mass profiles to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    M,
    MTilde,
}

impl DomainWallConfig {
    /// Pair with mass signs `(left, middle, right)` and `(left~, middle, right~)`
    /// of magnitude one, walls at `±0.75 L`, middle region the central half.
    pub fn sign_pattern(sites: usize, half_length: f64, x: [f64; 3], x_tilde: [f64; 3]) -> Self {
        let wall = 0.75 * half_length;
        Self {
            half_length,
            sites,
            mass: MassProfile::three(x[0], x[1], x[2], -wall, wall),
            mass_tilde: MassProfile::three(x_tilde[0], x_tilde[1], x_tilde[2], -wall, wall),
            wilson_r: 1.0,
            middle: [-0.5 * half_length, 0.5 * half_length],
            kernel_cutoff: default_cutoff(),
            gap_ratio: default_gap_ratio(),
            boundary: Boundary::Chiral,
        }
    }

    /// The configuration at `sites` lattice points.
    pub fn refined(&self, sites: usize, scaling: Scaling) -> Self {
        let mut out = self.clone();
        out.sites = sites;
        if scaling == Scaling::FixedSpacing {
            let f = sites as f64 / self.sites as f64;
            out.half_length *= f;
            out.mass = self.mass.scaled(f);
            out.mass_tilde = self.mass_tilde.scaled(f);
            out.middle = [self.middle[0] * f, self.middle[1] * f];
        }
        out
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_length / self.sites as f64
    }

    pub fn coordinates(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.sites).map(|j| -self.half_length + (j as f64 + 0.5) * h).collect()
    }

    pub fn profile(&self, which: Which) -> &MassProfile {
        match which {
            Which::M => &self.mass,
            Which::MTilde => &self.mass_tilde,
        }
    }

    pub fn masses(&self, which: Which) -> Vec<f64> {
        let p = self.profile(which);
        self.coordinates().into_iter().map(|x| p.at(x)).collect()
    }

    /// `(J_1, J_2)`: sites with `x < x_r` and sites with `x > x_l`.
    pub fn ideals(&self) -> (Ideal, Ideal) {
        let xs = self.coordinates();
        let [xl, xr] = self.middle;
        let j1 = Ideal::new((0..self.sites).filter(|&j| xs[j] < xr));
        let j2 = Ideal::new((0..self.sites).filter(|&j| xs[j] > xl));
        (j1, j2)
    }

    pub fn kernel_params(&self) -> crate::index::KernelParams {
        crate::index::KernelParams {
            cutoff_rel: self.kernel_cutoff,
            gap_ratio: self.gap_ratio,
        }
    }

    /// Structural checks that do not depend on the mass agreement.
    pub fn validate_shape(&self) -> Result<()> {
        if self.sites < MIN_SITES {
            return Err(Error::TooCoarse { sites: self.sites });
        }
        if self.sites > MAX_SITES {
            return Err(Error::Config(format!("{} sites exceeds the dense limit {MAX_SITES}", self.sites)));
        }
        if self.sites % 2 != 0 {
            return Err(Error::Config(format!("number of sites must be even, got {}", self.sites)));
        }
        if !(self.half_length > 0.0 && self.half_length.is_finite()) {
            return Err(Error::Config("half_length must be positive".into()));
        }
        if !(self.wilson_r >= 0.0 && self.wilson_r.is_finite()) {
            return Err(Error::Config("wilson_r must be nonnegative".into()));
        }
        if !(self.kernel_cutoff > 0.0 && self.gap_ratio > 1.0) {
            return Err(Error::Config("kernel_cutoff must be positive and gap_ratio above 1".into()));
        }
        let [xl, xr] = self.middle;
        if !(xl < xr && xl >= -self.half_length && xr <= self.half_length) {
            return Err(Error::Config(format!("middle region [{xl}, {xr}] is not inside the interval")));
        }
        self.mass.validate()?;
        self.mass_tilde.validate()?;
        let n = self.sites;
        let edge = (n / 10).max(1);
        for which in [Which::M, Which::MTilde] {
            let m = self.masses(which);
            let outer = (0..edge).chain(n - edge..n);
            if let Some(j) = outer.into_iter().find(|&j| m[j].abs() < 0.5) {
                return Err(Error::Config(format!(
                    "|mass| = {} < 0.5 at outer site {j} ({which:?})",
                    m[j].abs()
                )));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_shape()?;
        let (j1, j2) = self.ideals();
        let m = self.masses(Which::M);
        let mt = self.masses(Which::MTilde);
        for j in 0..self.sites {
            if j1.contains(j) && j2.contains(j) && m[j] != mt[j] {
                return Err(Error::Config(format!(
                    "masses disagree on the middle region at site {j}: {} vs {}",
                    m[j], mt[j]
                )));
            }
        }
        Ok(())
    }

    /// Index predicted by counting walls: `(sgn m(L) − sgn m(−L)) / 2`.
    pub fn wall_count(&self, which: Which) -> i64 {
        let m = self.masses(which);
        let sgn = |v: f64| if v > 0.0 { 1 } else { -1 };
        (sgn(m[self.sites - 1]) - sgn(m[0])) / 2
    }

    /// Number of sign changes of the mass between neighbouring sites.
    pub fn wall_number(&self, which: Which) -> usize {
        let m = self.masses(which);
        m.windows(2).filter(|w| (w[0] > 0.0) != (w[1] > 0.0)).count()
    }

    /// Half the smallest mass magnitude on the lattice.
    pub fn low_mode_threshold(&self, which: Which) -> f64 {
        LOW_MODE_FRACTION * self.masses(which).iter().fold(f64::INFINITY, |a, m| a.min(m.abs()))
    }
}

/// Modes of `D` below this fraction of the mass gap count as bound states.
pub const LOW_MODE_FRACTION: f64 = 0.5;

/// Number of eigenvalues of a Hermitian `D` with `|λ| < threshold`. Each
/// mass wall binds one such mode; doublers add more.
pub fn low_mode_count(d: &CMat, threshold: f64) -> Result<usize> {
    Ok(linalg::hermitian_eigenvalues(d)?.iter().filter(|l| l.abs() < threshold).count())
}

/// Hermitian lattice operator with its graded representation.
#[derive(Clone, Debug)]
pub struct WilsonDirac {
    pub d: CMat,
    pub rep: AlgebraRep,
}

impl WilsonDirac {
    pub fn grading(&self) -> Vec<f64> {
        self.rep.grading_signs_f64().expect("graded")
    }
}

pub fn build_wilson_dirac(cfg: &DomainWallConfig, which: Which) -> Result<WilsonDirac> {
    cfg.validate_shape()?;
    let n = cfg.sites;
    let h = cfg.spacing();
    let r = cfg.wilson_r;
    let m = cfg.masses(which);

    // Full 2N lattice operator, basis index 2j + s (s = 0 up, 1 down).
    let mut d = linalg::zeros(2 * n, 2 * n);
    let i = linalg::I;
    // sigma_1 ⊗ P + sigma_2 ⊗ W, off-diagonal in spin.
    let mut put = |j: usize, k: usize, p: c64, w: f64| {
        // <up|D|down> = P - iW, <down|D|up> = P + iW
        d[(2 * j, 2 * k + 1)] += p - i * w;
        d[(2 * j + 1, 2 * k)] += p + i * w;
    };
    for j in 0..n {
        put(j, j, ZERO, m[j] + r / h);
        if j + 1 < n {
            // P = i∇: P_{j,j+1} = i/(2h), P_{j+1,j} = −i/(2h)
            put(j, j + 1, i * (0.5 / h), -0.5 * r / h);
            put(j + 1, j, -i * (0.5 / h), -0.5 * r / h);
        }
    }

    let mut keep: Vec<usize> = (0..2 * n).collect();
    if cfg.boundary == Boundary::Chiral {
        if m[0] < 0.0 {
            keep.retain(|&k| k != 1);
        }
        if m[n - 1] < 0.0 {
            keep.retain(|&k| k != 2 * (n - 1));
        }
    }
    let d = linalg::select(&d, &keep, &keep);

    let alg = BlockAlgebra::commutative(n)?;
    let mut slots = Vec::with_capacity(keep.len());
    let mut grading = Vec::with_capacity(keep.len());
    let mut copies = vec![0usize; n];
    for &k in &keep {
        let site = k / 2;
        slots.push(Slot {
            block: Some(site),
            row: 0,
            copy: copies[site],
        });
        copies[site] += 1;
        grading.push(if k % 2 == 0 { 1 } else { -1 });
    }
    let rep = AlgebraRep::new(alg, slots, Some(grading))?;
    Ok(WilsonDirac { d, rep })
}

/// `F = D(1 + D²)^{−1/2}`, made exactly Hermitian and exactly odd.
pub fn module_from_dirac(d: &CMat, rep: &AlgebraRep) -> Result<FredholmModule> {
    let f = linalg::hermitian_function(d, |l| l / (1.0 + l * l).sqrt())?;
    let g = rep.grading();
    let n = f.nrows();
    let f = faer::Mat::from_fn(n, n, |i, j| {
        if g.is_some_and(|g| g[i] == g[j]) {
            return ZERO;
        }
        // Hermitian part; symmetric in (i, j) so the result is exactly Hermitian.
        (f[(i, j)] + f[(j, i)].conj()) * 0.5
    });
    FredholmModule::new(rep.clone(), f)
}

/// A surgery-ready model pair together with its lattice operators.
#[derive(Clone, Debug)]
pub struct ModelBundle {
    pub pair: SurgeryPair,
    pub x: FredholmModule,
    pub x_tilde: FredholmModule,
    pub dirac: Option<(WilsonDirac, WilsonDirac)>,
    pub j1: Ideal,
    pub j2: Ideal,
    pub agreement: CompactnessProfile,
    /// Wall-count predictions for `x` and `x̃`.
    pub oracle_indices: (i64, i64),
    /// Number of mass walls of `m` and `m̃`.
    pub walls: (usize, usize),
    /// In-gap eigenvalue counts of `D` and `D̃`.
    pub low_modes: (usize, usize),
}

impl ModelBundle {
    /// Every wall binds exactly one in-gap mode and nothing else does.
    pub fn oracle_consistent(&self) -> bool {
        self.walls == self.low_modes
    }
}

pub fn build_agreeing_pair(cfg: &DomainWallConfig) -> Result<ModelBundle> {
    cfg.validate()?;
    let wd = build_wilson_dirac(cfg, Which::M)?;
    let wdt = build_wilson_dirac(cfg, Which::MTilde)?;
    let x = module_from_dirac(&wd.d, &wd.rep)?;
    let xt = module_from_dirac(&wdt.d, &wdt.rep)?;
    let (j1, j2) = cfg.ideals();
    let j = crate::algebra::ideal_intersect(&j1, &j2);
    let agreement = agreement_defect(&x, &xt, &j, None)?;
    let pair = SurgeryPair::new(&x, &xt, &j1, &j2, None)?;
    let low_modes = (
        low_mode_count(&wd.d, cfg.low_mode_threshold(Which::M))?,
        low_mode_count(&wdt.d, cfg.low_mode_threshold(Which::MTilde))?,
    );
    Ok(ModelBundle {
        pair,
        x,
        x_tilde: xt,
        dirac: Some((wd, wdt)),
        j1,
        j2,
        agreement,
        oracle_indices: (cfg.wall_count(Which::M), cfg.wall_count(Which::MTilde)),
        walls: (cfg.wall_number(Which::M), cfg.wall_number(Which::MTilde)),
        low_modes,
    })
}

/// Signed permutation with entries in `{±1, ±i}`: unitary with no rounding.
fn exact_unitary<R: Rng>(n: usize, rng: &mut R) -> CMat {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let phases = [linalg::ONE, -linalg::ONE, linalg::I, -linalg::I];
    let mut u = linalg::zeros(n, n);
    for (col, &row) in perm.iter().enumerate() {
        u[(row, col)] = phases[rng.gen_range(0..4)];
    }
    u
}

/// `[[0, u*], [u, 0]]` on a graded space of dimension `2k`, grading
/// `(+,…,+,−,…,−)`.
fn odd_involution(u: &CMat) -> CMat {
    let k = u.nrows();
    linalg::assemble(&[k, k], &[k, k], &[vec![None, Some(linalg::adjoint(u))], vec![Some(u.clone()), None]])
}

/// Exact toy pair over a three-block commutative algebra (left, middle,
/// right). `dims = (n1, n0, n2, ñ1, ñ2)` are the dimensions of `H_1, H_0,
/// H_2, H̃_1, H̃_2`; each must be even. `F` is a direct sum of odd unitary
/// involutions, so every defect vanishes exactly; `c` is shared.
pub fn toy_exact_pair(dims: [usize; 5], seed: u64) -> Result<ModelBundle> {
    if let Some(odd) = dims.iter().find(|&&n| n % 2 == 1) {
        return Err(Error::Construction(format!("graded toy summand of odd dimension {odd}")));
    }
    let [n1, n0, n2, m1, m2] = dims;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alg = BlockAlgebra::commutative(3)?;
    let c_unitary = exact_unitary(n0 / 2, &mut rng);
    let mut build = |d1: usize, d2: usize| -> Result<FredholmModule> {
        let parts = [(0usize, d1, exact_unitary(d1 / 2, &mut rng)), (1, n0, c_unitary.clone()), (2, d2, exact_unitary(d2 / 2, &mut rng))];
        let mut slots = Vec::new();
        let mut grading = Vec::new();
        let mut f = linalg::zeros(0, 0);
        for (block, dim, u) in &parts {
            for copy in 0..*dim {
                slots.push(Slot {
                    block: Some(*block),
                    row: 0,
                    copy,
                });
                grading.push(if copy < dim / 2 { 1 } else { -1 });
            }
            f = linalg::direct_sum(&f, &odd_involution(u));
        }
        let rep = AlgebraRep::new(alg.clone(), slots, Some(grading))?;
        FredholmModule::new(rep, f)
    };
    let x = build(n1, n2)?;
    let xt = build(m1, m2)?;
    let j1 = Ideal::new([0, 1]);
    let j2 = Ideal::new([1, 2]);
    if !x.rep().is_nondegenerate() || !xt.rep().is_nondegenerate() {
        return Err(Error::Construction("every toy summand needs positive dimension".into()));
    }
    let agreement = agreement_defect(&x, &xt, &Ideal::new([1]), None)?;
    let pair = SurgeryPair::new(&x, &xt, &j1, &j2, None)?;
    Ok(ModelBundle {
        pair,
        x,
        x_tilde: xt,
        dirac: None,
        j1,
        j2,
        agreement,
        oracle_indices: (0, 0),
        walls: (0, 0),
        low_modes: (0, 0),
    })
}
