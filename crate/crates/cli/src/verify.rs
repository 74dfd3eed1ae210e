//! `verify`: residual suites for the configured r-matrix over seeded samples.

use std::sync::Arc;

use calogero_core::phase::{first_class_residual, prop1_residual};
use calogero_core::rmatrix::{
    cdybe_residual, compatibility_residual, dirac_reduce, equivariance_residual, nonabelian_extend,
    operator_residual, quasi_triangularity_residual,
};
use calogero_core::sampling::{gaussian_in, rng_for, sample_base_point, sample_phase_point};
use calogero_core::{build_algebra, AlekseevMeinrenken, DynamicalRMatrix, Instance, Perturbed};

use crate::config::{RMatrixKind, RunConfig};
use crate::error::CliError;
use crate::report::{per_sample, pool, PropertyRecord, VerificationReport};

/// The algebra and r-matrices a command works with.
pub(crate) struct Setup {
    pub inst: Arc<Instance>,
    /// The Alekseev–Meinrenken r-matrix, perturbed when requested.
    pub base: Arc<dyn DynamicalRMatrix>,
    /// `base` or its non-Abelian extension, per the config.
    pub r: Arc<dyn DynamicalRMatrix>,
}

pub(crate) fn setup(cfg: &RunConfig) -> Result<Setup, CliError> {
    let desc = cfg.descriptor()?;
    let inst = Arc::new(build_algebra(&desc).map_err(|e| CliError::Config(e.to_string()))?);
    let am: Arc<dyn DynamicalRMatrix> = Arc::new(AlekseevMeinrenken::new(inst.clone()));
    let base: Arc<dyn DynamicalRMatrix> = match cfg.perturb {
        Some(eps) => Arc::new(Perturbed::equivariant(am, eps, cfg.seed)),
        None => am,
    };
    let r: Arc<dyn DynamicalRMatrix> = match cfg.rmatrix {
        RMatrixKind::Abelian => base.clone(),
        RMatrixKind::Nonabelian => Arc::new(nonabelian_extend(base.clone())?),
    };
    Ok(Setup { inst, base, r })
}

// One random stream per suite, so adding a suite never shifts the others.
const CDYBE: u64 = 1;
const EQUIVARIANCE: u64 = 2;
const QUASI_TRIANGULARITY: u64 = 3;
const COMPATIBILITY: u64 = 4;
const PROP1: u64 = 5;
const FIRST_CLASS: u64 = 6;
const DIRAC: u64 = 7;

pub fn cmd_verify(cfg: &RunConfig) -> Result<VerificationReport, CliError> {
    cfg.validate()?;
    let Setup { inst, base, r } = setup(cfg)?;
    let pool = pool(cfg.workers)?;
    let (seed, n, sampler) = (cfg.seed, cfg.samples, &cfg.sampler);
    let tol = &cfg.tolerances;
    // derivatives of the non-Abelian extension are finite differences
    let derivative_tol = match cfg.rmatrix {
        RMatrixKind::Abelian => tol.residual,
        RMatrixKind::Nonabelian => tol.finite_difference,
    };
    let dim = inst.dim();
    let r = r.as_ref();

    let mut report = VerificationReport::new(
        "verify",
        inst.descriptor.label(),
        cfg.rmatrix.to_string(),
        seed,
        n,
        cfg.perturb,
    );
    let mut suite =
        |name: &str, tolerance: f64, f: &(dyn Fn(u64) -> Result<f64, CliError> + Sync)| {
            per_sample(&pool, n, f)
                .map(|res| report.push(PropertyRecord::from_residuals(name, tolerance, seed, &res)))
        };

    suite("cdybe", derivative_tol, &|i| {
        let mut rng = rng_for(seed, CDYBE, i);
        let q = sample_base_point(r, sampler, &mut rng)?;
        let x = gaussian_in(dim, 0..dim, 1.0, &mut rng);
        let y = gaussian_in(dim, 0..dim, 1.0, &mut rng);
        Ok(cdybe_residual(r, &q, &x, &y)?.amax())
    })?;
    suite("equivariance", derivative_tol, &|i| {
        let mut rng = rng_for(seed, EQUIVARIANCE, i);
        let q = sample_base_point(r, sampler, &mut rng)?;
        let x = gaussian_in(dim, r.variables(), 1.0, &mut rng);
        Ok(equivariance_residual(r, &q, &x)?.amax())
    })?;
    suite("quasi_triangularity", tol.residual, &|i| {
        let q = sample_base_point(r, sampler, &mut rng_for(seed, QUASI_TRIANGULARITY, i))?;
        Ok(quasi_triangularity_residual(&inst, &r.evaluate(&q)?))
    })?;
    // the K/K⊥ block structure is a statement about the Abelian r-matrix
    suite("compatibility", tol.residual, &|i| {
        let q = sample_base_point(base.as_ref(), sampler, &mut rng_for(seed, COMPATIBILITY, i))?;
        Ok(compatibility_residual(&inst, &base.evaluate(&q)?))
    })?;
    suite("prop1", derivative_tol, &|i| {
        let pt = sample_phase_point(r, sampler, false, &mut rng_for(seed, PROP1, i))?;
        Ok(prop1_residual(r, &pt)?.amax())
    })?;
    let kind = r.kind();
    suite("first_class", tol.residual, &|i| {
        let pt = sample_phase_point(r, sampler, false, &mut rng_for(seed, FIRST_CLASS, i))?;
        Ok(first_class_residual(&inst, &pt, kind)?.amax())
    })?;
    let reduced = dirac_reduce(Arc::new(nonabelian_extend(base.clone())?))?;
    suite("dirac_round_trip", tol.residual, &|i| {
        let q = sample_base_point(base.as_ref(), sampler, &mut rng_for(seed, DIRAC, i))?;
        Ok(operator_residual(
            &reduced.evaluate(&q)?,
            &base.evaluate(&q)?,
        ))
    })?;
    Ok(report)
}
