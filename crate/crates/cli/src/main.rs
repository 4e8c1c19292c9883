mod commands;
mod config;
mod source;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use symtomo::positivity::{CertifyConfig, DEFAULT_FAIL_TOL};
use symtomo::quadrature::DiskGrid;
use symtomo::reconstruction::{DEFAULT_DISK_NODES, DEFAULT_DISK_RADIUS};
use symtomo::tomogram::{parse_rays, GridSpec};
use symtomo::TomoError;

use commands::{Output, EXIT_INCONCLUSIVE, EXIT_INPUT, VERSION};
use config::{Format, RunConfig};

#[derive(Parser)]
#[command(name = "symtomo", version, about = "Symplectic tomograms: evaluate, certify, reconstruct")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a tomogram on a grid of X values for each ray.
    Tomogram {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Randomized test of whether a source is a quantum tomogram.
    Certify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Inverse Radon transform to a density matrix.
    Reconstruct {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        disk: DiskArgs,
        /// State to compare against (path or builtin); defaults to the source's own state.
        #[arg(long)]
        reference: Option<String>,
        /// Tolerance for accepting the reconstruction as a state.
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        /// Also write the accepted state as a state file.
        #[arg(long)]
        state_out: Option<PathBuf>,
    },
    /// Purity from the characteristic function and from the tomogram double integral.
    Purity {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        disk: DiskArgs,
    },
    /// Worked examples with builtin sources.
    Demo {
        which: DemoKind,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DemoKind {
    Counterexample,
    Vacuum,
}

#[derive(Args)]
struct Common {
    /// JSON state file, CSV table (X,mu,nu,W), or builtin:{vacuum,counterexample,fock:N,thermal:NBAR}.
    #[arg(long, alias = "state")]
    source: String,
    /// Fock truncation of reconstructed states.
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format; csv applies to `tomogram` only.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, default_value_t = -6.0, allow_negative_numbers = true)]
    xmin: f64,
    #[arg(long, default_value_t = 6.0, allow_negative_numbers = true)]
    xmax: f64,
    #[arg(long, default_value_t = 241)]
    nx: usize,
    /// Rays as "mu,nu;mu,nu;...".
    #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
    rays: String,
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 16)]
    tuple_size: usize,
    #[arg(long, default_value_t = 2.0)]
    radius: f64,
    #[arg(long, default_value_t = DEFAULT_FAIL_TOL)]
    fail_tol: f64,
}

impl BudgetArgs {
    fn config(&self, seed: u64) -> CertifyConfig {
        CertifyConfig {
            trials: self.trials,
            tuple_size: self.tuple_size,
            seed,
            radius: self.radius,
            fail_tol: self.fail_tol,
        }
    }
}

#[derive(Args)]
struct DiskArgs {
    #[arg(long, default_value_t = DEFAULT_DISK_RADIUS)]
    disk_radius: f64,
    #[arg(long, default_value_t = DEFAULT_DISK_NODES)]
    nodes: usize,
}

fn exit_code_for(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<TomoError>() {
        Some(
            TomoError::Truncation(_)
            | TomoError::Quadrature(_)
            | TomoError::InvalidMatrix(_)
            | TomoError::NotPositive { .. },
        ) => EXIT_INCONCLUSIVE,
        _ => EXIT_INPUT,
    }
}

fn write_text(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn document(cfg: &RunConfig, report: Value) -> anyhow::Result<String> {
    let mut doc = json!({ "version": VERSION, "config": cfg });
    if let (Some(map), Value::Object(rest)) = (doc.as_object_mut(), report) {
        map.extend(rest);
    }
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

fn emit(cfg: &RunConfig, out: Output) -> anyhow::Result<i32> {
    match (cfg.format, out.csv) {
        (Format::Csv, Some(csv)) => {
            write_text(cfg.out.as_deref(), &csv)?;
            let mut summary = out.report;
            if let Some(map) = summary.as_object_mut() {
                map.remove("rays");
            }
            eprint!("{}", document(cfg, summary)?);
        }
        (Format::Csv, None) => anyhow::bail!(TomoError::InvalidInput(format!(
            "csv output is only available for the tomogram subcommand, not {}",
            cfg.command
        ))),
        (Format::Json, _) => write_text(cfg.out.as_deref(), &document(cfg, out.report)?)?,
    }
    Ok(out.exit)
}

fn base_config(command: &str, common: &Common, default_format: Format) -> anyhow::Result<RunConfig> {
    let format = common.format.unwrap_or(default_format);
    if format == Format::Csv && command != "tomogram" {
        anyhow::bail!(TomoError::InvalidInput(format!(
            "csv output is only available for the tomogram subcommand, not {command}"
        )));
    }
    let mut cfg = RunConfig::new(command, format);
    cfg.source = Some(common.source.clone());
    cfg.out = common.out.clone();
    Ok(cfg)
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Tomogram { common, grid } => {
            let mut cfg = base_config("tomogram", &common, Format::Csv)?;
            let spec = GridSpec::new(grid.xmin, grid.xmax, grid.nx, parse_rays(&grid.rays)?)?;
            cfg.grid = Some(spec.clone());
            let src = source::load_source(&common.source)?;
            emit(&cfg, commands::tomogram(&src, &spec)?)
        }
        Command::Certify { common, budget } => {
            let mut cfg = base_config("certify", &common, Format::Json)?;
            let cert = budget.config(common.seed);
            cfg.certification = Some(cert);
            let src = source::load_source(&common.source)?;
            emit(&cfg, commands::certify_cmd(&src, &cert)?)
        }
        Command::Reconstruct { common, disk, reference, tol, state_out } => {
            let mut cfg = base_config("reconstruct", &common, Format::Json)?;
            let dim = common.dim.unwrap_or(32);
            let grid = DiskGrid::new(disk.disk_radius, disk.nodes)?;
            cfg.dim = Some(dim);
            cfg.disk = Some(grid);
            cfg.reference = reference.clone();
            cfg.tolerance = Some(tol);
            let src = source::load_source(&common.source)?;
            let (out, state) = commands::reconstruct(&src, dim, &grid, tol, reference.as_deref())?;
            if let (Some(path), Some(state)) = (state_out.as_deref(), state) {
                write_text(Some(path), &(serde_json::to_string_pretty(&state)? + "\n"))?;
            }
            if let Some(w) = out.report["warnings"].as_array() {
                for w in w.iter().filter_map(Value::as_str) {
                    eprintln!("warning: {w}");
                }
            }
            if let Some(f) = out.report["fidelity"].as_f64() {
                eprintln!("fidelity: {f:.6}");
            }
            emit(&cfg, out)
        }
        Command::Purity { common, disk } => {
            let mut cfg = base_config("purity", &common, Format::Json)?;
            let grid = DiskGrid::new(disk.disk_radius, disk.nodes)?;
            cfg.disk = Some(grid);
            let src = source::load_source(&common.source)?;
            emit(&cfg, commands::purity(&src, &grid)?)
        }
        Command::Demo { which, seed, budget, out } => {
            let name = match which {
                DemoKind::Counterexample => "counterexample",
                DemoKind::Vacuum => "vacuum",
            };
            let mut cfg = RunConfig::new(&format!("demo {name}"), Format::Json);
            let cert = budget.config(seed);
            cfg.certification = Some(cert);
            cfg.out = out;
            let output = match which {
                DemoKind::Counterexample => commands::demo_counterexample(&cert)?,
                DemoKind::Vacuum => commands::demo_vacuum(&cert)?,
            };
            emit(&cfg, output)
        }
    }
}

/// Error chain joined with ": ", skipping causes already quoted by their parent.
fn describe(err: &anyhow::Error) -> String {
    let mut out = String::new();
    for cause in err.chain() {
        let text = cause.to_string();
        if !out.ends_with(&text) {
            if !out.is_empty() {
                out.push_str(": ");
            }
            out.push_str(&text);
        }
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {}", describe(&err));
            ExitCode::from(exit_code_for(&err) as u8)
        }
    }
}
