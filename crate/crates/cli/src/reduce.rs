//! `reduce-check`: the Abelian and non-Abelian constructions agree on the
//! gauge slice.

use std::sync::Arc;

use calogero_core::phase::gauge_transform;
use calogero_core::reduction::{
    inverse_m, map_m, tangent_generator, two_form_match, verify_quasi_lax_match, weyl_identify,
    weyl_transform, OrbitTangent,
};
use calogero_core::rmatrix::{nonabelian_extend, FD_STEP};
use calogero_core::sampling::{gaussian_in, rng_for, sample_phase_point};
use calogero_core::{weyl_group, AlekseevMeinrenken, DynamicalRMatrix};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{per_sample, pool, PropertyRecord, VerificationReport};
use crate::verify::{setup, Setup};

const CONSTRAINT: u64 = 11;
const LAX: u64 = 12;
const TWO_FORM: u64 = 13;
const WEYL: u64 = 14;

/// Relative tolerance of the gauge-invariant comparison in Weyl matching.
const WEYL_TOL: f64 = 1e-9;

/// Runs the reduction suites. The non-Abelian side is always built from the
/// unperturbed r-matrix, so `--perturb` turns the Abelian side into a
/// mismatched partner.
pub fn cmd_reduce_check(cfg: &RunConfig) -> Result<VerificationReport, CliError> {
    cfg.validate()?;
    let Setup { inst, base, .. } = setup(cfg)?;
    let clean: Arc<dyn DynamicalRMatrix> = Arc::new(AlekseevMeinrenken::new(inst.clone()));
    let r_f = nonabelian_extend(clean.clone())?;
    let pool = pool(cfg.workers)?;
    let (seed, n, sampler, tol) = (cfg.seed, cfg.samples, &cfg.sampler, &cfg.tolerances);
    let dim = inst.dim();
    let point = |stream: u64, i: u64| {
        sample_phase_point(clean.as_ref(), sampler, true, &mut rng_for(seed, stream, i))
    };

    let mut report = VerificationReport::new(
        "reduce-check",
        inst.descriptor.label(),
        "nonabelian/abelian".into(),
        seed,
        n,
        cfg.perturb,
    );

    let res = per_sample(&pool, n, |i| {
        let pt = point(CONSTRAINT, i)?;
        let slice = map_m(&inst, &pt)?;
        let back = inverse_m(&inst, &slice);
        let round_trip = (&back.p - &pt.p).amax().max((&back.xi - &pt.xi).amax());
        Ok(slice.constraint_residual(&inst).max(round_trip))
    })?;
    report.push(PropertyRecord::from_residuals(
        "constraint_solution",
        tol.residual,
        seed,
        &res,
    ));

    let matches = pool.install(|| -> Result<Vec<_>, CliError> {
        use rayon::prelude::*;
        let all: Vec<Result<_, CliError>> = (0..n as u64)
            .into_par_iter()
            .map(|i| {
                Ok(verify_quasi_lax_match(
                    &r_f,
                    base.as_ref(),
                    &point(LAX, i)?,
                )?)
            })
            .collect();
        all.into_iter().collect()
    })?;
    let lax: Vec<f64> = matches.iter().map(|m| m.lax).collect();
    let ham: Vec<f64> = matches.iter().map(|m| m.hamiltonian).collect();
    report.push(PropertyRecord::from_residuals(
        "quasi_lax_match",
        tol.residual,
        seed,
        &lax,
    ));
    report.push(PropertyRecord::from_residuals(
        "hamiltonian_match",
        tol.residual,
        seed,
        &ham,
    ));

    let res = per_sample(&pool, n, |i| {
        let pt = point(TWO_FORM, i)?;
        let mut rng = rng_for(seed, TWO_FORM + 100, i);
        let mut tangent = || -> Result<OrbitTangent, CliError> {
            let x = gaussian_in(dim, 0..dim, 1.0, &mut rng);
            Ok(OrbitTangent {
                dq: gaussian_in(dim, inst.chain.k(), 1.0, &mut rng),
                dp: gaussian_in(dim, inst.chain.k(), 1.0, &mut rng),
                x: tangent_generator(&inst, &pt.xi, &x)?,
            })
        };
        let (u, v) = (tangent()?, tangent()?);
        Ok(two_form_match(&inst, &pt, &u, &v, FD_STEP)?.abs())
    })?;
    report.push(PropertyRecord::from_residuals(
        "two_form_match",
        tol.two_form,
        seed,
        &res,
    ));

    // 0 when a constructed pair is identified with the right Weyl element
    // and an unrelated pair is not identified at all, 1 otherwise.
    let group = weyl_group(&inst);
    let res = per_sample(&pool, n, |i| {
        let x = point(WEYL, 2 * i)?;
        let w = &group[(i as usize) % group.len()];
        let kappa = gaussian_in(dim, inst.chain.k(), 1.0, &mut rng_for(seed, WEYL + 100, i));
        let y = gauge_transform(&inst, &weyl_transform(&inst, w, &x), &kappa)?;
        let found = weyl_identify(&inst, &x, &y, WEYL_TOL).is_some_and(|v| {
            (v.algebra_operator(&inst) * &x.q - w.algebra_operator(&inst) * &x.q).amax() <= 1e-9
        });
        let unrelated = point(WEYL, 2 * i + 1)?;
        let rejected = weyl_identify(&inst, &x, &unrelated, WEYL_TOL).is_none();
        Ok(if found && rejected { 0.0 } else { 1.0 })
    })?;
    report.push(PropertyRecord::from_residuals(
        "weyl_identification",
        0.5,
        seed,
        &res,
    ));

    Ok(report)
}
