//! Constrained Hamiltonian flow of `H = ½ B(L, L)` for an Abelian r-matrix,
//! its Lax form `L̇ = [R(q)L, L]`, and fixed-step RK4 integration with
//! conservation monitors.

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::Instance;
use crate::phase::{invariant_functions, PhasePoint};
use crate::rmatrix::residual::variable_gradient;
use crate::rmatrix::{DynamicalRMatrix, Jet, Kind};
use crate::Element;

/// Time derivative `(q̇, ṗ, ξ̇)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tangent {
    pub dq: Element,
    pub dp: Element,
    pub dxi: Element,
}

fn require_abelian(r: &dyn DynamicalRMatrix) -> Result<()> {
    if r.kind() != Kind::Abelian {
        return Err(Error::InvalidArgument(
            "the equations of motion are implemented for Abelian r-matrices".into(),
        ));
    }
    Ok(())
}

/// Hamiltonian vector field of `½ B(L, L)`:
/// `q̇ = P_K L`, `ṗ = Σ_i T^i B(L, ∂_i R ξ)`, `ξ̇ = [ξ, R* L]`.
pub fn vector_field(r: &dyn DynamicalRMatrix, point: &PhasePoint) -> Result<Tangent> {
    require_abelian(r)?;
    let inst = r.instance();
    point.validate(inst, Kind::Abelian)?;
    point.require_constrained(inst)?;
    let jet = r.jet(&point.q)?;
    Ok(field_from_jet(inst, &jet, point))
}

fn field_from_jet(inst: &Instance, jet: &Jet, point: &PhasePoint) -> Tangent {
    let alg = &inst.algebra;
    let lax = &point.p - &jet.value * &point.xi;
    let gl = alg.gram() * &lax;
    let dp = variable_gradient(inst, inst.chain.k(), |i| {
        gl.dot(&(&jet.partials[i] * &point.xi))
    });
    let dxi = alg.commutator(&point.xi, &(alg.b_adjoint(&jet.value) * &lax));
    Tangent {
        dq: inst.chain.project_k(&lax),
        dp,
        dxi,
    }
}

/// `L̇ = ṗ − (∇_{q̇} R) ξ − R ξ̇` along a tangent.
fn lax_rate(jet: &Jet, point: &PhasePoint, t: &Tangent) -> Element {
    &t.dp - jet.directional(&t.dq) * &point.xi - &jet.value * &t.dxi
}

fn lax_identity_from_jet(inst: &Instance, jet: &Jet, point: &PhasePoint) -> f64 {
    let tangent = field_from_jet(inst, jet, point);
    let lax = &point.p - &jet.value * &point.xi;
    let target = inst.algebra.commutator(&(&jet.value * &lax), &lax);
    (lax_rate(jet, point, &tangent) - target).norm()
}

/// `‖L̇ − [R(q)L, L]‖` with `L̇` from the chain rule along the Hamiltonian
/// vector field. Zero on `ξ_K = 0`; in general nonzero off it, which is why
/// the constraint is not enforced here.
pub fn lax_identity_residual(r: &dyn DynamicalRMatrix, point: &PhasePoint) -> Result<f64> {
    require_abelian(r)?;
    let inst = r.instance();
    point.validate(inst, Kind::Abelian)?;
    let jet = r.jet(&point.q)?;
    Ok(lax_identity_from_jet(inst, &jet, point))
}

/// `ṗ` and `ξ̇_{K⊥}` recovered from the `K` and `K⊥` components of the Lax
/// equation, using invertibility of `R(q)` on `K⊥`.
pub fn recover_from_lax(r: &dyn DynamicalRMatrix, point: &PhasePoint) -> Result<Tangent> {
    require_abelian(r)?;
    let inst = r.instance();
    point.validate(inst, Kind::Abelian)?;
    point.require_constrained(inst)?;
    let jet = r.jet(&point.q)?;
    let lax = &point.p - &jet.value * &point.xi;
    let dq = inst.chain.project_k(&lax);
    let rhs = inst.algebra.commutator(&(&jet.value * &lax), &lax);
    let dp = inst.chain.project_k(&rhs);
    // −(∇_{q̇}R)ξ − R ξ̇ = P_{K⊥}[RL, L]
    let kp = inst.chain.kperp();
    let target = -(inst.chain.project_kperp(&rhs) + jet.directional(&dq) * &point.xi);
    let block = jet
        .value
        .view((kp.start, kp.start), (kp.len(), kp.len()))
        .into_owned();
    let sol = block
        .lu()
        .solve(&target.rows(kp.start, kp.len()).into_owned())
        .ok_or_else(|| Error::Domain("R(q) is singular on K⊥".into()))?;
    let mut dxi = Element::zeros(inst.dim());
    dxi.rows_mut(kp.start, kp.len()).copy_from(&sol);
    Ok(Tangent { dq, dp, dxi })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorConfig {
    pub step: f64,
    pub t_end: f64,
    /// Highest power in the monitored invariants `h_2..h_kmax`; defaults to
    /// the block size.
    pub kmax: Option<usize>,
    /// Record every `record_every`-th step (the final state is always kept).
    pub record_every: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            step: 1e-3,
            t_end: 10.0,
            kmax: None,
            record_every: 1,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "step must be positive, got {}",
                self.step
            )));
        }
        if !(self.t_end.is_finite() && self.step <= self.t_end) {
            return Err(Error::InvalidArgument(format!(
                "need 0 < step ≤ t_end, got step {} and t_end {}",
                self.step, self.t_end
            )));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidArgument(
                "record_every must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum ExitStatus {
    Completed,
    /// The next step would leave the r-matrix domain; the trajectory ends at
    /// `time`.
    DomainExit {
        time: f64,
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Monitor {
    pub t: f64,
    pub hamiltonian: f64,
    /// `h_2..h_kmax` of `L`.
    pub invariants: Vec<f64>,
    /// Orbit Casimirs of `ξ`, same normalisation as `invariants`.
    pub casimirs: Vec<f64>,
    /// `|ξ_K|`.
    pub chi_norm: f64,
    pub lax_residual: f64,
    /// Largest distance of the eigenvalues of `L` from the initial ones.
    pub spectral_drift: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<PhasePoint>,
    pub monitors: Vec<Monitor>,
    pub status: ExitStatus,
}

/// Eigenvalues of `x` in the defining representation.
pub fn spectrum(inst: &Instance, x: &Element) -> Vec<Complex<f64>> {
    let m = inst.algebra.matrix_of(x);
    if inst.algebra.is_compact() {
        // iM is Hermitian
        let h = m * Complex::new(0.0, 1.0);
        return h
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .map(|&l| Complex::new(0.0, -l))
            .collect();
    }
    let real = m.map(|z| z.re);
    match real.clone().try_schur(f64::EPSILON, 10_000) {
        Some(schur) => schur.complex_eigenvalues().iter().copied().collect(),
        None => vec![Complex::new(f64::NAN, f64::NAN); real.nrows()],
    }
}

/// Greedy nearest-neighbour matching distance between two spectra.
fn spectral_distance(reference: &[Complex<f64>], now: &[Complex<f64>]) -> f64 {
    let mut used = vec![false; now.len()];
    let mut worst: f64 = 0.0;
    for z in reference {
        let (j, d) = now
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, w)| (j, (z - w).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("spectra have equal length");
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

struct MonitorContext {
    kmax: usize,
    spectrum0: Vec<Complex<f64>>,
}

fn monitor(
    inst: &Instance,
    jet: &Jet,
    point: &PhasePoint,
    t: f64,
    ctx: &MonitorContext,
) -> Monitor {
    let lax = &point.p - &jet.value * &point.xi;
    let casimir_k = inst.algebra.block_size();
    Monitor {
        t,
        hamiltonian: 0.5 * inst.algebra.form(&lax, &lax),
        invariants: invariant_functions(inst, &lax, ctx.kmax).expect("kmax checked"),
        casimirs: invariant_functions(inst, &point.xi, casimir_k).expect("block size is valid"),
        chi_norm: point.constraint_norm(inst),
        lax_residual: lax_identity_from_jet(inst, jet, point),
        spectral_drift: spectral_distance(&ctx.spectrum0, &spectrum(inst, &lax)),
    }
}

fn axpy(point: &PhasePoint, h: f64, t: &Tangent) -> PhasePoint {
    PhasePoint {
        q: &point.q + &t.dq * h,
        p: &point.p + &t.dp * h,
        xi: &point.xi + &t.dxi * h,
    }
}

/// Classical RK4 with a fixed step. Leaving the domain truncates the
/// trajectory and sets [`ExitStatus::DomainExit`]; other errors propagate.
pub fn integrate(
    r: &dyn DynamicalRMatrix,
    point0: &PhasePoint,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    require_abelian(r)?;
    cfg.validate()?;
    let inst = r.instance();
    point0.validate(inst, Kind::Abelian)?;
    point0.require_constrained(inst)?;
    let kmax = cfg.kmax.unwrap_or(inst.algebra.block_size());
    invariant_functions(inst, &point0.xi, kmax)?;

    let jet0 = r.jet(&point0.q)?;
    let lax0 = &point0.p - &jet0.value * &point0.xi;
    let ctx = MonitorContext {
        kmax,
        spectrum0: spectrum(inst, &lax0),
    };

    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![point0.clone()],
        monitors: vec![monitor(inst, &jet0, point0, 0.0, &ctx)],
        status: ExitStatus::Completed,
    };

    let steps = (cfg.t_end / cfg.step - 1e-9).ceil().max(1.0) as usize;
    let mut state = point0.clone();
    let mut jet = jet0;
    let mut t = 0.0;
    for n in 1..=steps {
        let h = if n == steps { cfg.t_end - t } else { cfg.step };
        let stepped = (|| -> Result<(PhasePoint, Jet)> {
            let k1 = field_from_jet(inst, &jet, &state);
            let s2 = axpy(&state, h / 2.0, &k1);
            let k2 = field_from_jet(inst, &r.jet(&s2.q)?, &s2);
            let s3 = axpy(&state, h / 2.0, &k2);
            let k3 = field_from_jet(inst, &r.jet(&s3.q)?, &s3);
            let s4 = axpy(&state, h, &k3);
            let k4 = field_from_jet(inst, &r.jet(&s4.q)?, &s4);
            let combine = |a: &Element, b: &Element, c: &Element, d: &Element| {
                (a + b * 2.0 + c * 2.0 + d) * (h / 6.0)
            };
            let next = PhasePoint {
                q: &state.q + combine(&k1.dq, &k2.dq, &k3.dq, &k4.dq),
                p: &state.p + combine(&k1.dp, &k2.dp, &k3.dp, &k4.dp),
                xi: &state.xi + combine(&k1.dxi, &k2.dxi, &k3.dxi, &k4.dxi),
            };
            let next_jet = r.jet(&next.q)?;
            Ok((next, next_jet))
        })();
        match stepped {
            Ok((next, next_jet)) => {
                state = next;
                jet = next_jet;
                t = if n == steps {
                    cfg.t_end
                } else {
                    n as f64 * cfg.step
                };
            }
            Err(e) if e.is_domain() => {
                traj.status = ExitStatus::DomainExit {
                    time: t,
                    reason: e.to_string(),
                };
                if traj.times.last() != Some(&t) {
                    traj.monitors.push(monitor(inst, &jet, &state, t, &ctx));
                    traj.times.push(t);
                    traj.states.push(state);
                }
                return Ok(traj);
            }
            Err(e) => return Err(e),
        }
        if n % cfg.record_every == 0 || n == steps {
            traj.monitors.push(monitor(inst, &jet, &state, t, &ctx));
            traj.times.push(t);
            traj.states.push(state.clone());
        }
    }
    Ok(traj)
}

/// Per-record Lax residuals of a trajectory.
pub fn lax_residual(traj: &Trajectory) -> Vec<f64> {
    traj.monitors.iter().map(|m| m.lax_residual).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConservationSummary {
    pub records: usize,
    pub t_final: f64,
    /// `max |H − H₀| / |H₀|` (absolute when `H₀ = 0`).
    pub energy_drift: f64,
    /// `max |h_k − h_k(0)|`.
    pub invariant_drift: f64,
    /// `max |tr ξ^k − tr ξ₀^k|`.
    pub casimir_drift: f64,
    pub chi_max: f64,
    pub lax_residual_max: f64,
    pub spectral_drift: f64,
    /// Range of the diagonal entries of `q` (imaginary parts for `su(n)`).
    pub q_min: f64,
    pub q_max: f64,
    /// Smallest `|α(q)|` over roots and records.
    pub root_min: f64,
}

fn max_drift(series: impl Iterator<Item = Vec<f64>>, reference: &[f64]) -> f64 {
    series
        .flat_map(|v| {
            v.into_iter()
                .zip(reference.iter().copied())
                .map(|(a, b)| (a - b).abs())
                .collect::<Vec<_>>()
        })
        .fold(0.0, f64::max)
}

pub fn conservation_report(inst: &Instance, traj: &Trajectory) -> ConservationSummary {
    let first = &traj.monitors[0];
    let h0 = first.hamiltonian;
    let scale = if h0 == 0.0 { 1.0 } else { h0.abs() };
    let energy_drift = traj
        .monitors
        .iter()
        .map(|m| (m.hamiltonian - h0).abs() / scale)
        .fold(0.0, f64::max);
    let mut q_min = f64::INFINITY;
    let mut q_max = f64::NEG_INFINITY;
    let mut root_min = f64::INFINITY;
    for s in &traj.states {
        for d in inst.cartan_diagonal(&s.q) {
            q_min = q_min.min(d);
            q_max = q_max.max(d);
        }
        for a in inst.root_values(&s.q) {
            root_min = root_min.min(a.abs());
        }
    }
    ConservationSummary {
        records: traj.monitors.len(),
        t_final: *traj.times.last().expect("trajectory is never empty"),
        energy_drift,
        invariant_drift: max_drift(
            traj.monitors.iter().map(|m| m.invariants.clone()),
            &first.invariants,
        ),
        casimir_drift: max_drift(
            traj.monitors.iter().map(|m| m.casimirs.clone()),
            &first.casimirs,
        ),
        chi_max: traj.monitors.iter().map(|m| m.chi_norm).fold(0.0, f64::max),
        lax_residual_max: traj
            .monitors
            .iter()
            .map(|m| m.lax_residual)
            .fold(0.0, f64::max),
        spectral_drift: traj
            .monitors
            .iter()
            .map(|m| m.spectral_drift)
            .fold(0.0, f64::max),
        q_min,
        q_max,
        root_min,
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::lie::{build_algebra, AlgebraDescriptor};
    use crate::linalg::unit;
    use crate::phase::{hamiltonian, lax_gradient};
    use crate::rmatrix::AlekseevMeinrenken;

    fn sl2() -> AlekseevMeinrenken {
        AlekseevMeinrenken::new(Arc::new(build_algebra(&AlgebraDescriptor::sl(2)).unwrap()))
    }

    fn hyperbolic_point() -> PhasePoint {
        PhasePoint::new(
            unit(3, 0),
            unit(3, 0) * 0.3,
            unit(3, 1) * 2.0 - unit(3, 2) * 2.0,
        )
    }

    #[test]
    fn free_motion() {
        let r = sl2();
        let pt = PhasePoint::new(unit(3, 0) * 0.5, unit(3, 0) * 0.7, Element::zeros(3));
        let t = vector_field(&r, &pt).unwrap();
        assert_eq!(t.dq, pt.p);
        assert_eq!(t.dp.amax(), 0.0);
        assert_eq!(t.dxi.amax(), 0.0);
        assert_eq!(lax_identity_residual(&r, &pt).unwrap(), 0.0);
    }

    #[test]
    fn velocity_is_momentum() {
        let r = sl2();
        let pt = hyperbolic_point();
        assert!((vector_field(&r, &pt).unwrap().dq - &pt.p).amax() < 1e-15);
    }

    #[test]
    fn energy_is_stationary_along_the_field() {
        let r = sl2();
        let pt = hyperbolic_point();
        let jet = r.jet(&pt.q).unwrap();
        let lax = &pt.p - &jet.value * &pt.xi;
        let grad = lax_gradient(r.instance(), r.variables(), &jet, &pt, &lax);
        let t = vector_field(&r, &pt).unwrap();
        let alg = &r.instance().algebra;
        let rate =
            alg.form(&grad.dq, &t.dq) + alg.form(&grad.dp, &t.dp) + alg.form(&grad.dxi, &t.dxi);
        assert!(rate.abs() < 1e-12);
    }

    #[test]
    fn lax_identity_and_its_failure_off_the_surface() {
        let r = sl2();
        let pt = hyperbolic_point();
        assert!(lax_identity_residual(&r, &pt).unwrap() < 1e-12);
        let mut off = pt.clone();
        off.xi[0] = 0.5;
        assert!(lax_identity_residual(&r, &off).unwrap() > 1e-3);
        assert!(matches!(
            vector_field(&r, &off),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn lax_decomposition_recovers_the_field() {
        let r = sl2();
        let pt = hyperbolic_point();
        let a = vector_field(&r, &pt).unwrap();
        let b = recover_from_lax(&r, &pt).unwrap();
        assert!((a.dp - b.dp).amax() < 1e-12);
        assert!((a.dxi - b.dxi).amax() < 1e-12);
    }

    #[test]
    fn short_run_conserves_energy() {
        let r = sl2();
        let cfg = IntegratorConfig {
            step: 1e-2,
            t_end: 1.0,
            ..Default::default()
        };
        let traj = integrate(&r, &hyperbolic_point(), &cfg).unwrap();
        assert_eq!(traj.status, ExitStatus::Completed);
        assert_eq!(traj.times.len(), 101);
        assert!((traj.times[100] - 1.0).abs() < 1e-15);
        let rep = conservation_report(r.instance(), &traj);
        assert!(rep.energy_drift < 1e-8, "{rep:?}");
        let h = hamiltonian(&r, traj.states.last().unwrap()).unwrap();
        assert!((h - traj.monitors[0].hamiltonian).abs() < 1e-8);
    }

    #[test]
    fn collision_truncates() {
        // attractive coupling: −ab < 0
        let r = sl2();
        let pt = PhasePoint::new(
            unit(3, 0) * 0.5,
            Element::zeros(3),
            (unit(3, 1) + unit(3, 2)) * 0.5,
        );
        let cfg = IntegratorConfig {
            step: 1e-3,
            t_end: 5.0,
            ..Default::default()
        };
        let traj = integrate(&r, &pt, &cfg).unwrap();
        assert!(
            matches!(traj.status, ExitStatus::DomainExit { .. }),
            "{:?}",
            traj.status
        );
        assert!(*traj.times.last().unwrap() < 5.0);
    }

    #[test]
    fn config_validation() {
        assert!(IntegratorConfig {
            step: 0.0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(IntegratorConfig {
            step: 2.0,
            t_end: 1.0,
            ..Default::default()
        }
        .validate()
        .is_err());
    }
}
