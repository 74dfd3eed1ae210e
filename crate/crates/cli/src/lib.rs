//! Front end for the `calogero` binary: config handling, the verification
//! and reduction suites, trajectory output and the exit-code contract.
//!
//! Exit codes: 0 all checks pass, 1 a property fails, 2 bad config or
//! arguments, 3 domain exit (sampler exhaustion or a run leaving the domain).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub mod catalog;
pub mod config;
pub mod error;
pub mod reduce;
pub mod report;
pub mod simulate;
pub mod verify;

pub use catalog::{cmd_catalog, CatalogEntry};
pub use config::{Overrides, RMatrixKind, RunConfig};
pub use error::{exit, CliError};
pub use reduce::cmd_reduce_check;
pub use report::{PropertyRecord, VerificationReport};
pub use simulate::{cmd_simulate, SimulationSummary, TRAJECTORY_SCHEMA};
pub use verify::cmd_verify;

use calogero_core::AlgebraDescriptor;

#[derive(Debug, Parser)]
#[command(
    name = "calogero",
    version,
    about = "Dynamical r-matrices and spin Calogero models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the supported algebras.
    Catalog {
        #[arg(long)]
        json: bool,
    },
    /// Check the r-matrix identities at seeded random points.
    Verify(RunArgs),
    /// Integrate the constrained equations of motion.
    Simulate(RunArgs),
    /// Compare the non-Abelian and Abelian constructions.
    ReduceCheck(RunArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Algebra name as listed by `catalog`, e.g. sl3, su4, sl2x3.
    #[arg(long)]
    pub algebra: Option<AlgebraDescriptor>,
    /// `abelian` or `nonabelian`.
    #[arg(long, value_parser = parse_kind)]
    pub rmatrix: Option<RMatrixKind>,
    /// Master seed; sample i of each property uses its own derived stream.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Points per property.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Report (verify, reduce-check) or trajectory (simulate) file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print JSON instead of text.
    #[arg(long)]
    pub json: bool,
    /// Debug negative control: add an equivariant perturbation of this size.
    #[arg(long, allow_negative_numbers = true)]
    pub perturb: Option<f64>,
    /// Thread count; results do not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
}

fn parse_kind(s: &str) -> Result<RMatrixKind, String> {
    match s {
        "abelian" => Ok(RMatrixKind::Abelian),
        "nonabelian" => Ok(RMatrixKind::Nonabelian),
        _ => Err(format!("expected abelian or nonabelian, got '{s}'")),
    }
}

impl RunArgs {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        cfg.apply(&Overrides {
            algebra: self.algebra,
            rmatrix: self.rmatrix,
            seed: self.seed,
            samples: self.samples,
            out: self.out.clone(),
            perturb: self.perturb,
            workers: self.workers,
        });
        Ok(cfg)
    }
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(format!("writing {}", path.display()), e))
}

fn emit_report(
    report: &VerificationReport,
    cfg: &RunConfig,
    json: bool,
    stdout: &mut dyn Write,
) -> Result<i32, CliError> {
    if let Some(path) = &cfg.output.path {
        write_file(path, &report.to_json())?;
    }
    let text = if json {
        report.to_json()
    } else {
        report.to_text()
    };
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| CliError::io("writing report", e))?;
    Ok(if report.passed {
        exit::OK
    } else {
        exit::PROPERTY_FAILURE
    })
}

fn simulate(args: &RunArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = args.resolve()?;
    let out = cmd_simulate(&cfg)?;
    let inst = calogero_core::build_algebra(&cfg.descriptor()?)?;
    let kmax = simulate::kmax(&cfg, &inst);
    let summary_text = if args.json {
        out.summary.to_json()
    } else {
        out.summary.to_text()
    };
    match &cfg.output.path {
        Some(path) => {
            let file = std::fs::File::create(path)
                .map_err(|e| CliError::io(format!("creating {}", path.display()), e))?;
            simulate::write_trajectory(
                std::io::BufWriter::new(file),
                cfg.output.format,
                &inst,
                kmax,
                &out.trajectory,
                &out.summary,
            )?;
            stdout
                .write_all(summary_text.as_bytes())
                .map_err(|e| CliError::io("writing summary", e))?;
        }
        None => {
            simulate::write_trajectory(
                &mut *stdout,
                cfg.output.format,
                &inst,
                kmax,
                &out.trajectory,
                &out.summary,
            )?;
            eprint!("{summary_text}");
        }
    }
    Ok(out.summary.exit_code())
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Catalog { json } => {
            let entries = cmd_catalog();
            let text = if *json {
                serde_json::to_string_pretty(&entries).expect("catalog is plain data") + "\n"
            } else {
                catalog::catalog_text(&entries)
            };
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::io("writing catalog", e))?;
            Ok(exit::OK)
        }
        Command::Verify(args) => {
            let cfg = args.resolve()?;
            emit_report(&cmd_verify(&cfg)?, &cfg, args.json, stdout)
        }
        Command::ReduceCheck(args) => {
            let cfg = args.resolve()?;
            emit_report(&cmd_reduce_check(&cfg)?, &cfg, args.json, stdout)
        }
        Command::Simulate(args) => simulate(args, stdout),
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Errors go to stderr.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                exit::CONFIG
            } else {
                exit::OK
            };
        }
    };
    match dispatch(&cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
