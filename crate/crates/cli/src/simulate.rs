//! `simulate`: one constrained trajectory with conservation monitors.

use std::io::Write;

use calogero_core::dynamics::{
    conservation_report, integrate, ConservationSummary, ExitStatus, Trajectory,
};
use calogero_core::phase::PhasePoint;
use calogero_core::sampling::{rng_for, sample_phase_point};
use calogero_core::{DynamicalRMatrix, Element, Instance, Kind};
use serde::Serialize;

use crate::config::{OutputFormat, RMatrixKind, RunConfig};
use crate::error::CliError;
use crate::report::PropertyRecord;
use crate::verify::{setup, Setup};

/// Version tag of the trajectory column layout.
pub const TRAJECTORY_SCHEMA: &str = "trajectory-v1";

const INITIAL_STREAM: u64 = 100;

#[derive(Debug, Clone, Serialize)]
pub struct SimulationSummary {
    pub schema: &'static str,
    pub algebra: String,
    pub exit: ExitStatus,
    #[serde(flatten)]
    pub conservation: ConservationSummary,
    pub checks: Vec<PropertyRecord>,
    pub passed: bool,
}

impl SimulationSummary {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary is plain data") + "\n"
    }

    pub fn to_text(&self) -> String {
        let c = &self.conservation;
        let exit = match &self.exit {
            ExitStatus::Completed => "completed".to_string(),
            ExitStatus::DomainExit { time, reason } => {
                format!("domain exit at t = {time}: {reason}")
            }
        };
        let mut out = format!(
            "simulate {}: {exit}\n  records {}  t_final {}\n  q range [{:.6}, {:.6}]  min |α(q)| {:.3e}\n",
            self.algebra, c.records, c.t_final, c.q_min, c.q_max, c.root_min
        );
        for p in &self.checks {
            out += &format!(
                "  {:<16} {}  {:.3e}  tol {:.1e}\n",
                p.name,
                if p.passed { "PASS" } else { "FAIL" },
                p.max_residual,
                p.tolerance
            );
        }
        out
    }

    pub fn exit_code(&self) -> i32 {
        use crate::error::exit;
        match self.exit {
            ExitStatus::DomainExit { .. } => exit::DOMAIN,
            ExitStatus::Completed if self.passed => exit::OK,
            ExitStatus::Completed => exit::PROPERTY_FAILURE,
        }
    }
}

pub struct SimulationOutput {
    pub trajectory: Trajectory,
    pub summary: SimulationSummary,
}

fn vector(name: &str, v: &[f64], dim: usize) -> Result<Element, CliError> {
    if v.len() != dim {
        return Err(CliError::Config(format!(
            "initial.{name} has {} coefficients, the algebra has dimension {dim}",
            v.len()
        )));
    }
    Ok(Element::from_column_slice(v))
}

fn initial_point(cfg: &RunConfig, r: &dyn DynamicalRMatrix) -> Result<PhasePoint, CliError> {
    let inst = r.instance();
    let dim = inst.dim();
    let Some(init) = &cfg.initial else {
        return Ok(sample_phase_point(
            r,
            &cfg.sampler,
            true,
            &mut rng_for(cfg.seed, INITIAL_STREAM, 0),
        )?);
    };
    let mut pt = PhasePoint::new(
        vector("q", &init.q, dim)?,
        vector("p", &init.p, dim)?,
        vector("xi", &init.xi, dim)?,
    );
    pt.validate(inst, Kind::Abelian)
        .map_err(|e| CliError::Config(format!("initial point: {e}")))?;
    if init.enforce_constraint {
        for i in inst.chain.k() {
            pt.xi[i] = 0.0;
        }
    } else if !pt.on_constraint_surface(inst) {
        return Err(CliError::Config(format!(
            "initial point has |ξ_K| = {:.3e}; set initial.enforce_constraint to project it",
            pt.constraint_norm(inst)
        )));
    }
    if let Err(e) = r.evaluate(&pt.q) {
        return Err(CliError::Config(format!("initial q: {e}")));
    }
    Ok(pt)
}

pub fn column_names(inst: &Instance, kmax: usize) -> Vec<String> {
    let rank = inst.rank();
    let mut cols = vec!["t".to_string()];
    cols.extend((0..rank).map(|i| format!("q_{i}")));
    cols.extend((0..rank).map(|i| format!("p_{i}")));
    cols.extend((0..inst.dim()).map(|i| format!("xi_{i}")));
    cols.push("H".into());
    cols.extend((2..=kmax).map(|k| format!("h{k}")));
    cols.extend(["chi_norm", "lax_residual", "spec_drift"].map(String::from));
    cols
}

fn rows(inst: &Instance, traj: &Trajectory) -> Vec<Vec<f64>> {
    let k = inst.chain.k();
    traj.states
        .iter()
        .zip(&traj.monitors)
        .map(|(s, m)| {
            let mut row = vec![m.t];
            row.extend(s.q.rows_range(k.clone()).iter());
            row.extend(s.p.rows_range(k.clone()).iter());
            row.extend(s.xi.iter());
            row.push(m.hamiltonian);
            row.extend(&m.invariants);
            row.extend([m.chi_norm, m.lax_residual, m.spectral_drift]);
            row
        })
        .collect()
}

/// Writes the trajectory as CSV (fixed header row, shortest round-trip
/// floats) or as a JSON document with the same columns.
pub fn write_trajectory<W: Write>(
    out: W,
    format: OutputFormat,
    inst: &Instance,
    kmax: usize,
    traj: &Trajectory,
    summary: &SimulationSummary,
) -> Result<(), CliError> {
    let cols = column_names(inst, kmax);
    let data = rows(inst, traj);
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&cols)?;
            for row in &data {
                w.write_record(row.iter().map(|x| format!("{x:?}")))?;
            }
            w.flush().map_err(|e| CliError::io("writing CSV", e))?;
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                schema: &'static str,
                columns: &'a [String],
                rows: &'a [Vec<f64>],
                summary: &'a SimulationSummary,
            }
            let doc = Doc {
                schema: TRAJECTORY_SCHEMA,
                columns: &cols,
                rows: &data,
                summary,
            };
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, &doc)
                .map_err(|e| CliError::io("writing JSON", e.into()))?;
            writeln!(out).map_err(|e| CliError::io("writing JSON", e))?;
        }
    }
    Ok(())
}

pub fn cmd_simulate(cfg: &RunConfig) -> Result<SimulationOutput, CliError> {
    cfg.validate()?;
    if cfg.rmatrix != RMatrixKind::Abelian {
        return Err(CliError::Config(
            "simulate integrates the Abelian model; set rmatrix to abelian".into(),
        ));
    }
    let Setup { inst, r, .. } = setup(cfg)?;
    let point = initial_point(cfg, r.as_ref())?;
    let traj = integrate(r.as_ref(), &point, &cfg.integrator)?;
    let conservation = conservation_report(&inst, &traj);
    let tol = &cfg.tolerances;
    let seed = cfg.seed;
    let check = |name: &str, value: f64, tolerance: f64| {
        PropertyRecord::from_residuals(name, tolerance, seed, &[value])
    };
    let checks = vec![
        check("energy_drift", conservation.energy_drift, tol.drift),
        check("spectral_drift", conservation.spectral_drift, tol.spectral),
        check("chi_norm", conservation.chi_max, tol.chi),
        check("casimir_drift", conservation.casimir_drift, tol.drift),
        check("lax_residual", conservation.lax_residual_max, tol.residual),
    ];
    let passed = checks.iter().all(|c| c.passed);
    let summary = SimulationSummary {
        schema: TRAJECTORY_SCHEMA,
        algebra: inst.descriptor.label(),
        exit: traj.status.clone(),
        conservation,
        checks,
        passed,
    };
    Ok(SimulationOutput {
        trajectory: traj,
        summary,
    })
}

/// Invariant orders recorded by a run of this config.
pub fn kmax(cfg: &RunConfig, inst: &Instance) -> usize {
    cfg.integrator.kmax.unwrap_or(inst.algebra.block_size())
}
