//! Graded index of finite-dimensional modules, the supertrace cross-check,
//! and the relative index experiment on a surgery pair.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fredholm::FredholmModule;
use crate::linalg::{self, CMat};
use crate::surgery::{diamond, homotopy_operator, CChoice, SurgeryPair};

/// Parameters of the kernel split.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    /// Singular values below `cutoff_rel · median` are kernel candidates.
    pub cutoff_rel: f64,
    /// Minimum ratio between the smallest bulk and the largest kernel value.
    pub gap_ratio: f64,
}

impl Default for KernelParams {
    fn default() -> Self {
        Self {
            cutoff_rel: 1e-3,
            gap_ratio: 10.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexResult {
    pub index: i64,
    pub kernel_plus: usize,
    pub kernel_minus: usize,
    /// Ratio of the smallest bulk to the largest kernel singular value of
    /// `F_+` (or of the smallest value to the cutoff when the split is empty).
    pub spectral_gap: f64,
    pub threshold_used: f64,
}

/// `F_+ = (H_+ → H_-)` block of a graded operator, with the `H_-` and `H_+`
/// basis indices.
pub fn positive_part(f: &CMat, grading: &[i8]) -> (CMat, Vec<usize>, Vec<usize>) {
    let plus: Vec<usize> = (0..grading.len()).filter(|&k| grading[k] > 0).collect();
    let minus: Vec<usize> = (0..grading.len()).filter(|&k| grading[k] < 0).collect();
    (linalg::select(f, &minus, &plus), minus, plus)
}

/// Index of `F_+` by splitting its singular values at the largest relative
/// gap below the cutoff.
pub fn graded_index(x: &FredholmModule, params: &KernelParams) -> Result<IndexResult> {
    let grading = x
        .rep()
        .grading()
        .ok_or_else(|| Error::Grading("graded index of an ungraded module".into()))?;
    let (fp, minus, plus) = positive_part(x.operator(), grading);
    index_of_block(&fp, plus.len(), minus.len(), params)
}

/// Kernel split for an `n_minus × n_plus` block.
pub fn index_of_block(fp: &CMat, n_plus: usize, n_minus: usize, params: &KernelParams) -> Result<IndexResult> {
    let mut sv = linalg::singular_values(fp)?;
    sv.reverse();
    let r = sv.len();
    let base_plus = n_plus - r;
    let base_minus = n_minus - r;
    if r == 0 {
        return Ok(IndexResult {
            index: n_plus as i64 - n_minus as i64,
            kernel_plus: n_plus,
            kernel_minus: n_minus,
            spectral_gap: f64::INFINITY,
            threshold_used: 0.0,
        });
    }
    let median = if r % 2 == 1 {
        sv[r / 2]
    } else {
        0.5 * (sv[r / 2 - 1] + sv[r / 2])
    };
    let scale = if median > 0.0 { median } else { sv[r - 1] };
    if scale == 0.0 {
        return Ok(IndexResult {
            index: n_plus as i64 - n_minus as i64,
            kernel_plus: n_plus,
            kernel_minus: n_minus,
            spectral_gap: f64::INFINITY,
            threshold_used: 0.0,
        });
    }
    let cutoff = params.cutoff_rel * scale;
    let below = sv.iter().take_while(|&&s| s < cutoff).count();
    let (split, gap) = if below == 0 {
        (0, if cutoff > 0.0 { sv[0] / cutoff } else { f64::INFINITY })
    } else {
        (1..=below)
            .map(|k| {
                let bulk = sv.get(k).copied().unwrap_or(f64::INFINITY);
                let ratio = if sv[k - 1] == 0.0 { f64::INFINITY } else { bulk / sv[k - 1] };
                (k, ratio)
            })
            .fold((0, f64::NEG_INFINITY), |best, cand| if cand.1 > best.1 { cand } else { best })
    };
    if below > 0 && gap < params.gap_ratio {
        return Err(Error::AmbiguousKernel {
            operator: format!("F+ ({n_minus}x{n_plus})"),
            ratio: gap,
            required: params.gap_ratio,
        });
    }
    let kernel_plus = base_plus + split;
    let kernel_minus = base_minus + split;
    Ok(IndexResult {
        index: kernel_plus as i64 - kernel_minus as i64,
        kernel_plus,
        kernel_minus,
        spectral_gap: gap,
        threshold_used: cutoff,
    })
}

/// Anticommutation tolerance for [`mckean_singer`].
pub const ODD_TOL: f64 = 1e-10;

/// Supertrace `Tr(γ e^{−tD²})` of an odd Hermitian operator.
pub fn mckean_singer(d: &CMat, grading: &[f64], t: f64) -> Result<f64> {
    if t <= 0.0 {
        return Err(Error::Shape(format!("heat time must be positive, got {t}")));
    }
    let anti = linalg::diag_mul_left(grading, d) + linalg::diag_mul_right(d, grading);
    let defect = linalg::max_abs(&anti);
    if defect > ODD_TOL {
        return Err(Error::NotOdd(defect));
    }
    let (values, vecs) = linalg::hermitian_eigen(d)?;
    let mut total = 0.0;
    for (i, &lambda) in values.iter().enumerate() {
        let chirality: f64 = (0..vecs.nrows()).map(|k| grading[k] * vecs[(k, i)].norm_sqr()).sum();
        total += (-t * lambda * lambda).exp() * chirality;
    }
    Ok(total)
}

/// Supertrace of a graded module's operator.
pub fn mckean_singer_module(x: &FredholmModule, t: f64) -> Result<f64> {
    let g = x
        .rep()
        .grading_signs_f64()
        .ok_or_else(|| Error::Grading("supertrace of an ungraded module".into()))?;
    mckean_singer(x.operator(), &g, t)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub t: f64,
    pub index: IndexResult,
}

/// Graded index of `(ρ ⊕ ρ̃, H ⊕ H̃, 𝓕_t)` along a grid.
pub fn homotopy_index_trace(p: &SurgeryPair, grid: &[f64], params: &KernelParams) -> Result<Vec<TracePoint>> {
    if !p.x().is_graded() {
        return Err(Error::Grading("index trace of an ungraded pair".into()));
    }
    grid.iter()
        .map(|&t| {
            let sample = homotopy_operator(p, t)?;
            let index = graded_index(&sample.module, params).map_err(|e| e.in_operator(&format!("F_t at t={t:.6}")))?;
            Ok(TracePoint { t, index })
        })
        .collect()
}

pub fn is_constant(trace: &[TracePoint]) -> bool {
    trace.windows(2).all(|w| w[0].index.index == w[1].index.index)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelativeIndexReport {
    pub x: IndexResult,
    pub x_tilde: IndexResult,
    /// `x ◇ x̃`
    pub pasted: IndexResult,
    /// `x̃ ◇ x`
    pub pasted_mirror: IndexResult,
    /// `(ind(x◇x̃) − ind(x)) − (ind(x̃) − ind(x̃◇x))`
    pub residual: i64,
    pub homotopy_trace: Vec<TracePoint>,
}

impl RelativeIndexReport {
    pub fn indices(&self) -> [i64; 4] {
        [self.x.index, self.x_tilde.index, self.pasted.index, self.pasted_mirror.index]
    }

    pub fn trace_is_constant(&self) -> bool {
        is_constant(&self.homotopy_trace)
    }
}

pub fn relative_index_experiment(p: &SurgeryPair, grid: &[f64], params: &KernelParams) -> Result<RelativeIndexReport> {
    relative_index_experiment_with(p, grid, params, CChoice::FromX)
}

pub fn relative_index_experiment_with(
    p: &SurgeryPair,
    grid: &[f64],
    params: &KernelParams,
    c_choice: CChoice,
) -> Result<RelativeIndexReport> {
    let x = graded_index(p.x(), params).map_err(|e| e.in_operator("x"))?;
    let x_tilde = graded_index(p.x_tilde(), params).map_err(|e| e.in_operator("x~"))?;
    let pasted = graded_index(&diamond(p, c_choice)?, params).map_err(|e| e.in_operator("x<>x~"))?;
    let pasted_mirror =
        graded_index(&diamond(&p.swapped(), c_choice)?, params).map_err(|e| e.in_operator("x~<>x"))?;
    let residual = (pasted.index - x.index) - (x_tilde.index - pasted_mirror.index);
    let homotopy_trace = homotopy_index_trace(p, grid, params)?;
    Ok(RelativeIndexReport {
        x,
        x_tilde,
        pasted,
        pasted_mirror,
        residual,
        homotopy_trace,
    })
}
