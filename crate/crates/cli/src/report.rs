use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::CliError;

pub const REPORT_SCHEMA: &str = "verification-report-v1";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyRecord {
    pub name: String,
    pub samples: usize,
    pub max_residual: f64,
    pub mean_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub seed: u64,
}

impl PropertyRecord {
    /// Statistics of per-sample residuals listed in sample order. A NaN
    /// residual fails the property.
    pub fn from_residuals(name: &str, tolerance: f64, seed: u64, residuals: &[f64]) -> Self {
        let mut max = 0.0_f64;
        let mut sum = 0.0;
        for &r in residuals {
            max = if r.is_nan() || max.is_nan() {
                f64::NAN
            } else {
                max.max(r)
            };
            sum += r;
        }
        let mean = if residuals.is_empty() {
            0.0
        } else {
            sum / residuals.len() as f64
        };
        PropertyRecord {
            name: name.to_string(),
            samples: residuals.len(),
            max_residual: max,
            mean_residual: mean,
            tolerance,
            passed: max <= tolerance,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub algebra: String,
    pub rmatrix: String,
    pub seed: u64,
    pub samples: usize,
    pub perturb: Option<f64>,
    pub properties: Vec<PropertyRecord>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn new(
        command: &'static str,
        algebra: String,
        rmatrix: String,
        seed: u64,
        samples: usize,
        perturb: Option<f64>,
    ) -> Self {
        VerificationReport {
            schema: REPORT_SCHEMA,
            command,
            algebra,
            rmatrix,
            seed,
            samples,
            perturb,
            properties: Vec::new(),
            passed: true,
        }
    }

    pub fn push(&mut self, record: PropertyRecord) {
        self.passed &= record.passed;
        self.properties.push(record);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let perturb = self
            .perturb
            .map(|e| format!(" perturb={e:e}"))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{} {} ({}) seed={} samples={}{perturb}",
            self.command, self.algebra, self.rmatrix, self.seed, self.samples
        );
        for p in &self.properties {
            let _ = writeln!(
                out,
                "  {:<22} {}  max {:.3e}  mean {:.3e}  tol {:.1e}",
                p.name,
                if p.passed { "PASS" } else { "FAIL" },
                p.max_residual,
                p.mean_residual,
                p.tolerance
            );
        }
        let _ = writeln!(
            out,
            "{}",
            if self.passed {
                "all properties pass"
            } else {
                "some properties FAIL"
            }
        );
        out
    }
}

/// Thread pool with `workers` threads, or the rayon default.
pub(crate) fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        b = b.num_threads(n);
    }
    b.build()
        .map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))
}

/// Evaluates `f` on `0..n` in parallel. Results come back in index order and
/// the first error by index wins, so the outcome does not depend on
/// scheduling.
pub(crate) fn per_sample<F>(pool: &rayon::ThreadPool, n: usize, f: F) -> Result<Vec<f64>, CliError>
where
    F: Fn(u64) -> Result<f64, CliError> + Sync,
{
    let results: Vec<Result<f64, CliError>> =
        pool.install(|| (0..n as u64).into_par_iter().map(&f).collect());
    results.into_iter().collect()
}
