//! Config-driven runs: a single surgery experiment on a domain-wall pair,
//! refinement sweeps over the number of sites, and sign-pattern sweeps.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fredholm::{defect_report, standard_test_family, CompactnessProfile, DefectReport};
use crate::index::{graded_index, mckean_singer, mckean_singer_module, relative_index_experiment_with, IndexResult, TracePoint};
use crate::models::{build_agreeing_pair, DomainWallConfig, MassProfile, ModelBundle, Scaling};
use crate::surgery::{diamond, endpoint_check, homotopy_operator, t_grid, CChoice};

/// Endpoint identity tolerance.
pub const ENDPOINT_TOL: f64 = 1e-12;
/// Heat times for the supertrace cross-check.
pub const HEAT_TIMES: [f64; 3] = [0.1, 1.0, 10.0];
pub const SUPERTRACE_TOL: f64 = 1e-6;
/// Test element whose commutator is tracked across a sweep.
pub const MONITORED_BUMP: &str = "bump2";
/// Leading singular values of `𝓕_t² − 1` written per homotopy sample.
pub const HOMOTOPY_SIGMAS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Verify,
    Experiment,
    Sweep,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

fn default_t_grid() -> usize {
    11
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurgerySettings {
    #[serde(default)]
    pub c_choice: CChoice,
    #[serde(default = "default_t_grid")]
    pub t_grid: usize,
    /// Square-defect profile of every homotopy sample.
    #[serde(default = "default_true")]
    pub homotopy_defects: bool,
}

impl Default for SurgerySettings {
    fn default() -> Self {
        Self {
            c_choice: CChoice::FromX,
            t_grid: default_t_grid(),
            homotopy_defects: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSettings {
    pub sites: Vec<usize>,
    #[serde(default)]
    pub scaling: Scaling,
    /// Run every boundary-sign pattern at each size instead of the model's
    /// own masses.
    #[serde(default)]
    pub sign_patterns: bool,
}

fn default_formats() -> Vec<Format> {
    vec![Format::Json, Format::Csv]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSettings {
    #[serde(default)]
    pub dir: Option<PathBuf>,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
}

impl Default for OutputSettings {
    fn default() -> Self {
        Self {
            dir: None,
            formats: default_formats(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub model: Option<DomainWallConfig>,
    #[serde(default)]
    pub surgery: SurgerySettings,
    #[serde(default)]
    pub sweep: Option<SweepSettings>,
    #[serde(default)]
    pub output: OutputSettings,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn model(&self) -> Result<&DomainWallConfig> {
        self.model
            .as_ref()
            .ok_or_else(|| Error::Config(format!("mode {:?} needs a model section", self.mode)))
    }

    pub fn validate(&self) -> Result<()> {
        if self.mode == Mode::Verify {
            return Ok(());
        }
        let model = self.model()?;
        if self.surgery.t_grid < 2 {
            return Err(Error::Config("surgery.t_grid needs at least the two endpoints".into()));
        }
        if self.output.formats.is_empty() {
            return Err(Error::Config("output.formats is empty".into()));
        }
        match (self.mode, &self.sweep) {
            (Mode::Sweep, None) => Err(Error::Config("mode sweep needs a sweep section".into())),
            (Mode::Sweep, Some(s)) => {
                if s.sites.is_empty() {
                    return Err(Error::Config("sweep.sites is empty".into()));
                }
                if s.sites.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::Config("sweep.sites must be strictly increasing".into()));
                }
                for &n in &s.sites {
                    let c = model.refined(n, s.scaling);
                    if s.sign_patterns {
                        for (_, p) in sign_patterns(&c)? {
                            p.validate()?;
                        }
                    } else {
                        c.validate()?;
                    }
                }
                Ok(())
            }
            _ => model.validate(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomotopyDefectRow {
    pub t: f64,
    pub selfadjoint_defect: f64,
    pub square_sigmas: Vec<f64>,
    pub index: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Defects {
    pub x: DefectReport,
    pub x_tilde: DefectReport,
    pub pasted: DefectReport,
    pub pasted_mirror: DefectReport,
    pub corner_x: CompactnessProfile,
    pub corner_x_tilde: CompactnessProfile,
    pub agreement: CompactnessProfile,
    pub homotopy: Vec<HomotopyDefectRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Oracle {
    /// `(sgn m(L) − sgn m(−L)) / 2` for `m` and `m̃`.
    pub wall_count: (i64, i64),
    pub walls: (usize, usize),
    pub low_modes: (usize, usize),
    pub consistent: bool,
}

impl Oracle {
    pub fn of(b: &ModelBundle) -> Self {
        Self {
            wall_count: b.oracle_indices,
            walls: b.walls,
            low_modes: b.low_modes,
            consistent: b.oracle_consistent(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupertracePoint {
    pub operator: String,
    pub t: f64,
    pub value: f64,
    pub index: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Indices {
    pub x: IndexResult,
    pub x_tilde: IndexResult,
    pub pasted: IndexResult,
    pub pasted_mirror: IndexResult,
    pub oracle: Oracle,
    pub supertrace: Vec<SupertracePoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Contract {
    pub residual_zero: bool,
    pub endpoint_ok: bool,
    pub trace_constant: bool,
    pub trace_endpoints: bool,
    pub oracle_consistent: bool,
    pub supertrace_ok: bool,
}

impl Contract {
    /// Residual zero, endpoint identity, constant trace.
    pub fn passed(&self) -> bool {
        self.violations().is_empty()
    }

    pub fn violations(&self) -> Vec<&'static str> {
        [
            (self.residual_zero, "relative index residual is nonzero"),
            (self.endpoint_ok, "endpoint identity residual too large"),
            (self.trace_constant, "index varies along the homotopy"),
        ]
        .into_iter()
        .filter(|(ok, _)| !ok)
        .map(|(_, msg)| msg)
        .collect()
    }

    /// Failed cross-checks that do not affect the exit code.
    pub fn diagnostics(&self) -> Vec<&'static str> {
        [
            (self.trace_endpoints, "homotopy endpoints disagree with the module indices"),
            (self.oracle_consistent, "in-gap mode count differs from the wall count"),
            (self.supertrace_ok, "supertrace differs from the index"),
        ]
        .into_iter()
        .filter(|(ok, _)| !ok)
        .map(|(_, msg)| msg)
        .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config_echo: ExperimentConfig,
    pub defects: Defects,
    pub indices: Indices,
    pub residual: i64,
    pub homotopy_trace: Vec<TracePoint>,
    pub endpoint_residual: f64,
    pub contract: Contract,
}

fn supertrace_points(b: &ModelBundle, idx: &[(&str, &IndexResult)]) -> Result<Vec<SupertracePoint>> {
    let mut out = Vec::new();
    if let Some((wd, wdt)) = &b.dirac {
        for (name, w, ind) in [("D", wd, idx[0].1), ("D~", wdt, idx[1].1)] {
            let g = w.grading();
            for t in HEAT_TIMES {
                out.push(SupertracePoint {
                    operator: name.into(),
                    t,
                    value: mckean_singer(&w.d, &g, t)?,
                    index: ind.index,
                });
            }
        }
    }
    for (name, module, ind) in [("F", &b.x, idx[0].1), ("F~", &b.x_tilde, idx[1].1)] {
        for t in HEAT_TIMES {
            out.push(SupertracePoint {
                operator: name.into(),
                t,
                value: mckean_singer_module(module, t)?,
                index: ind.index,
            });
        }
    }
    Ok(out)
}

/// Runs one experiment on the configured model.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let model = cfg.model()?;
    let bundle = build_agreeing_pair(model)?;
    experiment_on(cfg, &bundle)
}

pub fn experiment_on(cfg: &ExperimentConfig, bundle: &ModelBundle) -> Result<ExperimentReport> {
    let model = cfg.model()?;
    let params = model.kernel_params();
    let p = &bundle.pair;
    let grid = t_grid(cfg.surgery.t_grid);
    let rel = relative_index_experiment_with(p, &grid, &params, cfg.surgery.c_choice)?;
    let tests = standard_test_family(bundle.x.algebra(), cfg.seed);
    let pasted = diamond(p, cfg.surgery.c_choice)?;
    let mirror = diamond(&p.swapped(), cfg.surgery.c_choice)?;
    let mut homotopy = Vec::new();
    if cfg.surgery.homotopy_defects {
        for point in &rel.homotopy_trace {
            let s = homotopy_operator(p, point.t)?;
            let f = s.operator();
            let sq = f * f - crate::linalg::identity(f.nrows());
            let profile = CompactnessProfile::of(&sq)?;
            homotopy.push(HomotopyDefectRow {
                t: point.t,
                selfadjoint_defect: crate::linalg::op_norm(&(f - f.adjoint()))?,
                square_sigmas: profile.singular_values.iter().take(HOMOTOPY_SIGMAS).copied().collect(),
                index: point.index.index,
            });
        }
    }
    let defects = Defects {
        x: defect_report(&bundle.x, &tests)?,
        x_tilde: defect_report(&bundle.x_tilde, &tests)?,
        pasted: defect_report(&pasted, &tests)?,
        pasted_mirror: defect_report(&mirror, &tests)?,
        corner_x: p.decomposition_x().corner_profile.clone(),
        corner_x_tilde: p.decomposition_x_tilde().corner_profile.clone(),
        agreement: bundle.agreement.clone(),
        homotopy,
    };
    let supertrace = supertrace_points(bundle, &[("x", &rel.x), ("x~", &rel.x_tilde)])?;
    let endpoint_residual = endpoint_check(p)?;
    let trace = &rel.homotopy_trace;
    let trace_endpoints = match (trace.first(), trace.last()) {
        (Some(a), Some(z)) => {
            a.index.index == rel.x.index + rel.x_tilde.index
                && z.index.index == rel.pasted.index + rel.pasted_mirror.index
        }
        _ => false,
    };
    let contract = Contract {
        residual_zero: rel.residual == 0,
        endpoint_ok: endpoint_residual <= ENDPOINT_TOL,
        trace_constant: rel.trace_is_constant(),
        trace_endpoints,
        oracle_consistent: bundle.oracle_consistent(),
        supertrace_ok: supertrace
            .iter()
            .all(|s| (s.value - s.index as f64).abs() <= SUPERTRACE_TOL),
    };
    Ok(ExperimentReport {
        config_echo: cfg.clone(),
        indices: Indices {
            x: rel.x.clone(),
            x_tilde: rel.x_tilde.clone(),
            pasted: rel.pasted.clone(),
            pasted_mirror: rel.pasted_mirror.clone(),
            oracle: Oracle::of(bundle),
            supertrace,
        },
        defects,
        residual: rel.residual,
        homotopy_trace: rel.homotopy_trace,
        endpoint_residual,
        contract,
    })
}

fn sign_label(v: &[f64]) -> String {
    let s: Vec<&str> = v.iter().map(|&x| if x > 0.0 { "+" } else { "-" }).collect();
    format!("({})", s.join(","))
}

/// All boundary-sign variants of a three-segment pair: the outer values of
/// `m` and `m̃` take both signs independently, magnitudes and the shared
/// middle value are kept. Sixteen configurations.
pub fn sign_patterns(cfg: &DomainWallConfig) -> Result<Vec<(String, DomainWallConfig)>> {
    let (m, mt) = (&cfg.mass, &cfg.mass_tilde);
    if m.values.len() != 3 || mt.values.len() != 3 || m.breakpoints != mt.breakpoints {
        return Err(Error::Config(
            "sign patterns need two three-segment profiles with the same breakpoints".into(),
        ));
    }
    let mut out = Vec::with_capacity(16);
    for bits in 0..16u32 {
        let sign = |k: u32| if bits & (1 << k) == 0 { -1.0 } else { 1.0 };
        let values = [sign(3) * m.values[0].abs(), m.values[1], sign(2) * m.values[2].abs()];
        let values_t = [sign(1) * mt.values[0].abs(), mt.values[1], sign(0) * mt.values[2].abs()];
        let mut c = cfg.clone();
        c.mass = MassProfile {
            breakpoints: m.breakpoints.clone(),
            values: values.to_vec(),
        };
        c.mass_tilde = MassProfile {
            breakpoints: mt.breakpoints.clone(),
            values: values_t.to_vec(),
        };
        out.push((format!("{}/{}", sign_label(&values), sign_label(&values_t)), c));
    }
    Ok(out)
}

/// One row of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "N")]
    pub sites: usize,
    pub pattern: String,
    pub half_length: f64,
    pub bump_commutator: f64,
    pub corner_sigma5: f64,
    pub agreement_sigma5: f64,
    pub ind_x: i64,
    pub ind_x_tilde: i64,
    #[serde(rename = "ind_x_diamond_x_tilde")]
    pub ind_pasted: i64,
    #[serde(rename = "ind_x_tilde_diamond_x")]
    pub ind_pasted_mirror: i64,
    pub residual: i64,
    pub trace_constant: bool,
    pub endpoint_residual: f64,
    pub walls_x: usize,
    pub low_modes_x: usize,
    pub walls_x_tilde: usize,
    pub low_modes_x_tilde: usize,
}

impl SweepRow {
    pub fn oracle_consistent(&self) -> bool {
        self.walls_x == self.low_modes_x && self.walls_x_tilde == self.low_modes_x_tilde
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepChecks {
    pub residual_zero: bool,
    pub trace_constant: bool,
    pub endpoint_ok: bool,
    pub oracle_consistent: bool,
    /// Each monitored defect is nonincreasing in `N` (refinement sweeps).
    pub monotone: bool,
    pub strictly_decreasing: bool,
    /// Smallest ratio of consecutive bump commutators.
    pub min_bump_ratio: Option<f64>,
}

impl SweepChecks {
    pub fn passed(&self) -> bool {
        self.residual_zero && self.trace_constant && self.endpoint_ok && self.oracle_consistent && self.monotone
    }

    pub fn violations(&self) -> Vec<&'static str> {
        [
            (self.residual_zero, "relative index residual is nonzero"),
            (self.trace_constant, "index varies along the homotopy"),
            (self.endpoint_ok, "endpoint identity residual too large"),
            (self.oracle_consistent, "in-gap mode count differs from the wall count"),
            (self.monotone, "a monitored defect grows with N"),
        ]
        .into_iter()
        .filter(|(ok, _)| !ok)
        .map(|(_, msg)| msg)
        .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub config_echo: ExperimentConfig,
    pub rows: Vec<SweepRow>,
    pub checks: SweepChecks,
}

/// One sweep row for a single configuration.
pub fn sweep_row(cfg: &ExperimentConfig, model: &DomainWallConfig, pattern: &str) -> Result<SweepRow> {
    let bundle = build_agreeing_pair(model)?;
    let params = model.kernel_params();
    let grid = t_grid(cfg.surgery.t_grid);
    let rel = relative_index_experiment_with(&bundle.pair, &grid, &params, cfg.surgery.c_choice)
        .map_err(|e| e.in_operator(&format!("N={}", model.sites)))?;
    let bump = crate::fredholm::bump_family(bundle.x.algebra())
        .into_iter()
        .filter(|t| t.id == MONITORED_BUMP)
        .collect::<Vec<_>>();
    let report = defect_report(&bundle.x, &bump)?;
    let sigma5 = |p: &CompactnessProfile| p.sigma(5);
    Ok(SweepRow {
        sites: model.sites,
        pattern: pattern.into(),
        half_length: model.half_length,
        bump_commutator: report.locality(MONITORED_BUMP).unwrap_or(f64::NAN),
        corner_sigma5: sigma5(&bundle.pair.decomposition_x().corner_profile),
        agreement_sigma5: sigma5(&bundle.agreement),
        ind_x: rel.x.index,
        ind_x_tilde: rel.x_tilde.index,
        ind_pasted: rel.pasted.index,
        ind_pasted_mirror: rel.pasted_mirror.index,
        residual: rel.residual,
        trace_constant: rel.trace_is_constant(),
        endpoint_residual: endpoint_check(&bundle.pair)?,
        walls_x: bundle.walls.0,
        low_modes_x: bundle.low_modes.0,
        walls_x_tilde: bundle.walls.1,
        low_modes_x_tilde: bundle.low_modes.1,
    })
}

fn decreasing(values: &[f64], strict: bool) -> bool {
    values.windows(2).all(|w| if strict { w[1] < w[0] } else { w[1] <= w[0] })
}

pub fn sweep_checks(rows: &[SweepRow], refinement: bool) -> SweepChecks {
    let col = |f: fn(&SweepRow) -> f64| rows.iter().map(f).collect::<Vec<f64>>();
    let monitored = [
        col(|r| r.bump_commutator),
        col(|r| r.corner_sigma5),
        col(|r| r.agreement_sigma5),
    ];
    let bumps = &monitored[0];
    SweepChecks {
        residual_zero: rows.iter().all(|r| r.residual == 0),
        trace_constant: rows.iter().all(|r| r.trace_constant),
        endpoint_ok: rows.iter().all(|r| r.endpoint_residual <= ENDPOINT_TOL),
        oracle_consistent: rows.iter().all(SweepRow::oracle_consistent),
        monotone: !refinement || monitored.iter().all(|m| decreasing(m, false)),
        strictly_decreasing: refinement && monitored.iter().all(|m| decreasing(m, true)),
        min_bump_ratio: (refinement && bumps.len() > 1)
            .then(|| bumps.windows(2).map(|w| w[0] / w[1]).fold(f64::INFINITY, f64::min)),
    }
}

pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let model = cfg.model()?;
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| Error::Config("mode sweep needs a sweep section".into()))?;
    let mut rows = Vec::new();
    for &n in &sweep.sites {
        let refined = model.refined(n, sweep.scaling);
        if sweep.sign_patterns {
            for (label, c) in sign_patterns(&refined)? {
                rows.push(sweep_row(cfg, &c, &label)?);
            }
        } else {
            let label = format!("{}/{}", sign_label(&refined.mass.values), sign_label(&refined.mass_tilde.values));
            rows.push(sweep_row(cfg, &refined, &label)?);
        }
    }
    let checks = sweep_checks(&rows, !sweep.sign_patterns);
    Ok(SweepReport {
        config_echo: cfg.clone(),
        rows,
        checks,
    })
}

/// Graded index of a single model module, for quick checks.
pub fn model_indices(model: &DomainWallConfig) -> Result<(IndexResult, IndexResult)> {
    let b = build_agreeing_pair(model)?;
    let params = model.kernel_params();
    Ok((graded_index(&b.x, &params)?, graded_index(&b.x_tilde, &params)?))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Writes `report.json` and `homotopy.csv` as requested; returns the paths.
pub fn write_experiment(report: &ExperimentReport, dir: &Path, formats: &[Format]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut out = Vec::new();
    if formats.contains(&Format::Json) {
        let p = dir.join("report.json");
        write_json(&p, report)?;
        out.push(p);
    }
    if formats.contains(&Format::Csv) {
        let p = dir.join("homotopy.csv");
        let mut w = csv::Writer::from_path(&p)?;
        let mut header = vec!["t".to_string(), "selfadjoint_defect".to_string()];
        header.extend((1..=HOMOTOPY_SIGMAS).map(|k| format!("sigma{k}")));
        header.push("index".into());
        w.write_record(&header)?;
        for (i, tp) in report.homotopy_trace.iter().enumerate() {
            let row = report.defects.homotopy.get(i);
            let mut rec = vec![tp.t.to_string()];
            rec.push(row.map_or(String::new(), |r| r.selfadjoint_defect.to_string()));
            for k in 0..HOMOTOPY_SIGMAS {
                rec.push(
                    row.and_then(|r| r.square_sigmas.get(k))
                        .map_or(String::new(), |v| v.to_string()),
                );
            }
            rec.push(tp.index.index.to_string());
            w.write_record(&rec)?;
        }
        w.flush()?;
        out.push(p);
    }
    Ok(out)
}

/// Writes `sweep.json` and `sweep.csv` as requested; returns the paths.
pub fn write_sweep(report: &SweepReport, dir: &Path, formats: &[Format]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut out = Vec::new();
    if formats.contains(&Format::Json) {
        let p = dir.join("sweep.json");
        write_json(&p, report)?;
        out.push(p);
    }
    if formats.contains(&Format::Csv) {
        let p = dir.join("sweep.csv");
        let mut w = csv::Writer::from_path(&p)?;
        for r in &report.rows {
            w.serialize(r)?;
        }
        w.flush()?;
        out.push(p);
    }
    Ok(out)
}

/// Wall-clock timings, kept out of the reports so those stay reproducible.
#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub command: String,
    pub elapsed_seconds: f64,
}

pub fn write_timing(dir: &Path, timing: &Timing) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let p = dir.join("timing.json");
    write_json(&p, timing)?;
    Ok(p)
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONTRACT: u8 = 1;
pub const EXIT_AMBIGUOUS: u8 = 2;
pub const EXIT_CONFIG: u8 = 3;

/// Process exit code for a failed run.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::TooCoarse { .. } => EXIT_CONFIG,
        Error::AmbiguousKernel { .. } => EXIT_AMBIGUOUS,
        _ => EXIT_CONTRACT,
    }
}
