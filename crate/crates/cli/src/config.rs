//! Run configuration: a JSON file plus command-line overrides.

use std::path::{Path, PathBuf};

use calogero_core::dynamics::IntegratorConfig;
use calogero_core::sampling::SamplerConfig;
use calogero_core::AlgebraDescriptor;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RMatrixKind {
    #[default]
    Abelian,
    Nonabelian,
}

impl std::fmt::Display for RMatrixKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RMatrixKind::Abelian => "abelian",
            RMatrixKind::Nonabelian => "nonabelian",
        })
    }
}

/// Initial phase point as full coefficient vectors in the adapted basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialCondition {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    pub xi: Vec<f64>,
    /// Zero the `K`-component of `ξ` instead of rejecting the point.
    #[serde(default)]
    pub enforce_constraint: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Residuals of analytic identities.
    pub residual: f64,
    /// Residuals that go through finite-difference derivatives.
    pub finite_difference: f64,
    /// Relative energy drift and absolute Casimir drift of a run.
    pub drift: f64,
    /// Eigenvalue drift of the Lax matrix.
    pub spectral: f64,
    /// Largest `|ξ_K|` along a run.
    pub chi: f64,
    pub two_form: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual: 1e-9,
            finite_difference: 1e-6,
            drift: 1e-8,
            spectral: 1e-7,
            chi: 1e-9,
            two_form: 1e-7,
        }
    }
}

impl Tolerances {
    fn validate(&self) -> Result<(), CliError> {
        let named = [
            ("residual", self.residual),
            ("finite_difference", self.finite_difference),
            ("drift", self.drift),
            ("spectral", self.spectral),
            ("chi", self.chi),
            ("two_form", self.two_form),
        ];
        for (name, v) in named {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::Config(format!(
                    "tolerances.{name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub format: OutputFormat,
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub algebra: Option<AlgebraDescriptor>,
    pub rmatrix: RMatrixKind,
    pub initial: Option<InitialCondition>,
    pub integrator: IntegratorConfig,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub samples: usize,
    pub sampler: SamplerConfig,
    pub output: OutputConfig,
    /// Worker threads for sample suites; defaults to the rayon default.
    pub workers: Option<usize>,
    /// Debug negative control: strength of an equivariant perturbation.
    pub perturb: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            algebra: None,
            rmatrix: RMatrixKind::Abelian,
            initial: None,
            integrator: IntegratorConfig::default(),
            tolerances: Tolerances::default(),
            seed: 42,
            samples: 100,
            sampler: SamplerConfig::default(),
            output: OutputConfig::default(),
            workers: None,
            perturb: None,
        }
    }
}

/// Command-line values that replace config fields when present.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub algebra: Option<AlgebraDescriptor>,
    pub rmatrix: Option<RMatrixKind>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub out: Option<PathBuf>,
    pub perturb: Option<f64>,
    pub workers: Option<usize>,
}

impl RunConfig {
    /// Parses JSON, reporting the field path and line/column of the first error.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let inner = e.inner();
            let path = e.path().to_string();
            let at = if path == "." {
                String::new()
            } else {
                format!(" at `{path}`")
            };
            let (line, column) = (inner.line(), inner.column());
            // serde_json appends its own location; keep only the message
            let full = inner.to_string();
            let msg = full
                .strip_suffix(&format!(" at line {line} column {column}"))
                .unwrap_or(&full);
            CliError::Config(format!("line {line} column {column}{at}: {msg}"))
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(a) = o.algebra {
            self.algebra = Some(a);
        }
        if let Some(k) = o.rmatrix {
            self.rmatrix = k;
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if let Some(n) = o.samples {
            self.samples = n;
        }
        if let Some(p) = &o.out {
            self.output.path = Some(p.clone());
        }
        if let Some(e) = o.perturb {
            self.perturb = Some(e);
        }
        if let Some(w) = o.workers {
            self.workers = Some(w);
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.tolerances.validate()?;
        self.integrator
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        if self.algebra.is_none() {
            return Err(CliError::Config(
                "no algebra given (config field `algebra` or --algebra)".into(),
            ));
        }
        if self.samples == 0 {
            return Err(CliError::Config("samples must be at least 1".into()));
        }
        if self.workers == Some(0) {
            return Err(CliError::Config("workers must be at least 1".into()));
        }
        if let Some(e) = self.perturb {
            if !e.is_finite() {
                return Err(CliError::Config(format!("perturb must be finite, got {e}")));
            }
        }
        let s = &self.sampler;
        if !(s.q_box > 0.0 && s.scale > 0.0 && s.max_condition >= 1.0 && s.max_attempts > 0) {
            return Err(CliError::Config(format!("invalid sampler settings {s:?}")));
        }
        Ok(())
    }

    pub fn descriptor(&self) -> Result<AlgebraDescriptor, CliError> {
        self.algebra.ok_or_else(|| {
            CliError::Config("no algebra given (config field `algebra` or --algebra)".into())
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_gives_defaults() {
        let cfg = RunConfig::from_json("{}").unwrap();
        assert_eq!(cfg, RunConfig::default());
    }

    #[test]
    fn full_config_parses() {
        let text = r#"{
            "algebra": {"family": "sl-product", "n": 2, "copies": 3, "automorphism": "cyclic"},
            "rmatrix": "nonabelian",
            "integrator": {"step": 0.01, "t_end": 1.0},
            "tolerances": {"residual": 1e-8},
            "seed": 7,
            "samples": 5,
            "output": {"format": "json", "path": "out.json"}
        }"#;
        let cfg = RunConfig::from_json(text).unwrap();
        assert_eq!(cfg.algebra, Some(AlgebraDescriptor::sl_product(2, 3)));
        assert_eq!(cfg.rmatrix, RMatrixKind::Nonabelian);
        assert_eq!(cfg.tolerances.residual, 1e-8);
        assert_eq!(cfg.tolerances.drift, 1e-8);
        assert_eq!(cfg.output.format, OutputFormat::Json);
        cfg.validate().unwrap();
    }

    #[test]
    fn errors_name_the_field_and_line() {
        let text = "{\n  \"seed\": 1,\n  \"tolerances\": {\"residual\": \"tight\"}\n}";
        let msg = RunConfig::from_json(text).unwrap_err().to_string();
        assert!(msg.contains("line 3"), "{msg}");
        assert!(msg.contains("tolerances.residual"), "{msg}");
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let msg = RunConfig::from_json(r#"{"sede": 1}"#)
            .unwrap_err()
            .to_string();
        assert!(msg.contains("sede"), "{msg}");
    }

    #[test]
    fn non_positive_tolerances_are_rejected() {
        let mut cfg = RunConfig {
            algebra: Some(AlgebraDescriptor::sl(2)),
            ..Default::default()
        };
        cfg.tolerances.drift = 0.0;
        assert!(matches!(cfg.validate(), Err(CliError::Config(_))));
    }

    #[test]
    fn overrides_win() {
        let mut cfg = RunConfig::default();
        cfg.apply(&Overrides {
            seed: Some(9),
            samples: Some(3),
            workers: Some(4),
            ..Default::default()
        });
        assert_eq!((cfg.seed, cfg.samples, cfg.workers), (9, 3, Some(4)));
    }
}
