use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use relindex_core::experiment::{
    exit_code, run_experiment, run_sweep, write_experiment, write_sweep, write_timing, ExperimentConfig, Format,
    Mode, Timing, EXIT_CONFIG, EXIT_CONTRACT, EXIT_OK,
};
use relindex_core::symbolic::{verify_homotopy_with, verify_proposition_with, Certificate, RewriteSystem};
use relindex_core::Error;

#[derive(Parser)]
#[command(name = "relindex", version, about = "Relative index experiments on lattice domain walls")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(clap::Args)]
struct RunArgs {
    /// JSON configuration file.
    config: PathBuf,
    /// Output directory (overrides `output.dir`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for the random test elements (overrides `seed`).
    #[arg(long)]
    seed: Option<u64>,
    /// Write only this format (overrides `output.formats`).
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Subcommand)]
enum Command {
    /// Certify the block identities symbolically.
    Verify {
        /// Remove an axiom (by id, or KILL) before rewriting. Repeatable.
        #[arg(long = "drop-axiom")]
        drop_axiom: Vec<String>,
        /// Rule file replacing the shipped axioms.
        #[arg(long)]
        axioms: Option<PathBuf>,
        /// Write both certificates, with every rewrite step, as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run one surgery experiment.
    Experiment(RunArgs),
    /// Run a refinement or sign-pattern sweep.
    Sweep(RunArgs),
}

const DEFAULT_OUT: &str = "out";

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Verify {
            drop_axiom,
            axioms,
            trace,
        } => verify(&drop_axiom, axioms.as_deref(), trace.as_deref()),
        Command::Experiment(args) => run(Mode::Experiment, &args),
        Command::Sweep(args) => run(Mode::Sweep, &args),
    };
    ExitCode::from(code)
}

fn verify(drop: &[String], axioms: Option<&Path>, trace: Option<&Path>) -> u8 {
    match certify(drop, axioms) {
        Ok(certs) => {
            let total: usize = certs.iter().map(|c| c.entries.len()).sum();
            let passed: usize = certs.iter().map(Certificate::pass_count).sum();
            for c in &certs {
                for e in &c.entries {
                    let verdict = if e.pass { "PASS" } else { "FAIL" };
                    if e.pass {
                        println!("{} ({},{}) {verdict} [{} steps]", c.name, e.row, e.col, e.steps.len());
                    } else {
                        println!(
                            "{} ({},{}) {verdict}: normal form {} expected {}",
                            c.name, e.row, e.col, e.normal_form, e.expected
                        );
                    }
                }
                for k in &c.checks {
                    println!("{} check {} {}", c.name, k.name, if k.pass { "PASS" } else { "FAIL" });
                }
            }
            let checks_ok = certs.iter().all(|c| c.checks.iter().all(|k| k.pass));
            if passed == total {
                println!("{total} entries PASS");
            } else {
                println!("{passed} of {total} entries PASS");
            }
            if let Some(path) = trace {
                let text = match serde_json::to_string_pretty(&trace_json(&certs)) {
                    Ok(t) => t,
                    Err(e) => {
                        eprintln!("error: {e}");
                        return 2;
                    }
                };
                if let Err(e) = std::fs::write(path, text + "\n") {
                    eprintln!("error: {}: {e}", path.display());
                    return 2;
                }
            }
            if passed == total && checks_ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn certify(drop: &[String], axioms: Option<&Path>) -> Result<Vec<Certificate>, Error> {
    let mut rs = match axioms {
        Some(p) => RewriteSystem::parse(&std::fs::read_to_string(p)?)?,
        None => RewriteSystem::default(),
    };
    for id in drop {
        rs = rs.without(id)?;
    }
    Ok(vec![verify_proposition_with(&rs)?, verify_homotopy_with(&rs)?])
}

fn load(mode: Mode, args: &RunArgs) -> Result<(ExperimentConfig, PathBuf, Vec<Format>), Error> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if cfg.mode != mode {
        return Err(Error::Config(format!(
            "config mode is {:?}, command needs {:?}",
            cfg.mode, mode
        )));
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(f) = args.format {
        cfg.output.formats = vec![match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }];
    }
    if let Some(out) = &args.out {
        cfg.output.dir = Some(out.clone());
    }
    let dir = cfg.output.dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    let formats = cfg.output.formats.clone();
    Ok((cfg, dir, formats))
}

fn run(mode: Mode, args: &RunArgs) -> u8 {
    let (cfg, dir, formats) = match load(mode, args) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let start = Instant::now();
    let outcome = match mode {
        Mode::Sweep => run_sweep(&cfg).and_then(|r| {
            let files = write_sweep(&r, &dir, &formats)?;
            for row in &r.rows {
                println!(
                    "N={:<5} {:<16} ind=({}, {}, {}, {}) residual={} bump={:.4e} corner5={:.3e} agree5={:.3e} modes={}/{}",
                    row.sites,
                    row.pattern,
                    row.ind_x,
                    row.ind_x_tilde,
                    row.ind_pasted,
                    row.ind_pasted_mirror,
                    row.residual,
                    row.bump_commutator,
                    row.corner_sigma5,
                    row.agreement_sigma5,
                    row.low_modes_x + row.low_modes_x_tilde,
                    row.walls_x + row.walls_x_tilde,
                );
            }
            Ok((r.checks.violations(), files))
        }),
        _ => run_experiment(&cfg).and_then(|r| {
            let files = write_experiment(&r, &dir, &formats)?;
            let i = &r.indices;
            println!(
                "ind x = {}, ind x~ = {}, ind x<>x~ = {}, ind x~<>x = {}",
                i.x.index, i.x_tilde.index, i.pasted.index, i.pasted_mirror.index
            );
            println!("residual = {}, endpoint residual = {:.3e}", r.residual, r.endpoint_residual);
            for d in r.contract.diagnostics() {
                println!("note: {d}");
            }
            Ok((r.contract.violations(), files))
        }),
    };
    match outcome {
        Ok((violations, files)) => {
            let timing = Timing {
                command: format!("{mode:?}").to_lowercase(),
                elapsed_seconds: start.elapsed().as_secs_f64(),
            };
            if let Err(e) = write_timing(&dir, &timing) {
                eprintln!("warning: {e}");
            }
            for f in &files {
                println!("wrote {}", f.display());
            }
            if violations.is_empty() {
                println!("contract OK");
                EXIT_OK
            } else {
                for v in &violations {
                    println!("contract violation: {v}");
                }
                EXIT_CONTRACT
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// `{certificate: {"i,j": [{rule, position, monomial}, ...]}}`.
fn trace_json(certs: &[Certificate]) -> serde_json::Value {
    let mut root = serde_json::Map::new();
    for c in certs {
        let mut entries = serde_json::Map::new();
        for e in &c.entries {
            entries.insert(format!("{},{}", e.row, e.col), serde_json::json!(e.steps));
        }
        root.insert(c.name.clone(), serde_json::Value::Object(entries));
    }
    serde_json::Value::Object(root)
}
