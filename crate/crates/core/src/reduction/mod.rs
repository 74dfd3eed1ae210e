//! Matching of the non-Abelian construction on `F` with the Abelian one on
//! `K`: the gauge slice `{Q = q ∈ Ǩ, χ_F = 0}`, the map
//! `m(q, p, ξ) = (q, P, ξ)` onto it, and the residual Weyl symmetry.

use nalgebra::Complex;

use crate::error::{check_len, Error, Result};
use crate::lie::{diagonalize_to_cartan, weyl_group, Diagonalization, Instance, WeylElement};
use crate::phase::{momentum_map, PhasePoint, CONSTRAINT_TOL};
use crate::rmatrix::nonabelian::ad_inverse_on_kperp_f;
use crate::rmatrix::{DynamicalRMatrix, Kind};
use crate::{CMatrix, Element};

/// A point `(q, P, ξ)` with `q ∈ Ǩ`, `P ∈ F` on the slice `[q, P] + ξ_F = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeSlicePoint {
    pub q: Element,
    pub big_p: Element,
    pub xi: Element,
}

impl GaugeSlicePoint {
    pub fn as_phase_point(&self) -> PhasePoint {
        PhasePoint::new(self.q.clone(), self.big_p.clone(), self.xi.clone())
    }

    /// `|[q, P] + ξ_F|`.
    pub fn constraint_residual(&self, inst: &Instance) -> f64 {
        momentum_map(inst, &self.as_phase_point(), Kind::Nonabelian).norm()
    }
}

fn require_in(
    inst: &Instance,
    v: &Element,
    range: std::ops::Range<usize>,
    name: &'static str,
) -> Result<()> {
    check_len(v, inst.dim())?;
    let off = inst.chain.off_norm(v, range);
    if off > 1e-10 * (1.0 + v.norm()) {
        return Err(Error::NotInSubspace {
            subspace: name,
            norm: off,
        });
    }
    Ok(())
}

/// `P = p − (ad_q|_{K⊥∩F})⁻¹ ξ_{K⊥∩F}` without checking `ξ_K = 0`.
fn slice_momentum(inst: &Instance, q: &Element, p: &Element, xi: &Element) -> Result<Element> {
    Ok(p - ad_inverse_on_kperp_f(inst, q)? * inst.chain.project_kperp_f(xi))
}

/// Unique solution of `[q, P] + ξ_F = 0` with `P_K P = p`, given `ξ_K = 0`.
pub fn solve_constraint(
    inst: &Instance,
    q: &Element,
    p: &Element,
    xi: &Element,
) -> Result<GaugeSlicePoint> {
    require_in(inst, q, inst.chain.k(), "K")?;
    require_in(inst, p, inst.chain.k(), "K")?;
    check_len(xi, inst.dim())?;
    let xi_k = inst.chain.project_k(xi).norm();
    if xi_k > CONSTRAINT_TOL * (1.0 + xi.norm()) {
        return Err(Error::Precondition(format!(
            "ξ_K = 0 is required (|ξ_K| = {xi_k:.3e})"
        )));
    }
    Ok(GaugeSlicePoint {
        q: q.clone(),
        big_p: slice_momentum(inst, q, p, xi)?,
        xi: xi.clone(),
    })
}

/// `m(q, p, ξ) = (q, P(q, p, ξ), ξ)`.
pub fn map_m(inst: &Instance, point: &PhasePoint) -> Result<GaugeSlicePoint> {
    solve_constraint(inst, &point.q, &point.p, &point.xi)
}

/// `m⁻¹(q, P, ξ) = (q, P_K P, ξ)`.
pub fn inverse_m(inst: &Instance, slice: &GaugeSlicePoint) -> PhasePoint {
    PhasePoint::new(
        slice.q.clone(),
        inst.chain.project_k(&slice.big_p),
        slice.xi.clone(),
    )
}

/// Brings `(Q, P, ξ)` with regular `Q ∈ F` to `Q = q ∈ Ǩ` by the adjoint
/// action of `F`.
pub fn gauge_fix(
    inst: &Instance,
    big_q: &Element,
    big_p: &Element,
    xi: &Element,
) -> Result<(GaugeSlicePoint, Diagonalization)> {
    require_in(inst, big_p, inst.chain.f(), "F")?;
    check_len(xi, inst.dim())?;
    let d = diagonalize_to_cartan(inst, big_q)?;
    let slice = GaugeSlicePoint {
        q: d.q.clone(),
        big_p: &d.ad_f * big_p,
        xi: &d.ad_f * xi,
    };
    Ok((slice, d))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiLaxMatch {
    /// `|L_F(m(x)) − L_K(x)|`.
    pub lax: f64,
    /// `|H_F(m(x)) − H_K(x)|`.
    pub hamiltonian: f64,
}

pub fn verify_quasi_lax_match(
    r_f: &dyn DynamicalRMatrix,
    r_k: &dyn DynamicalRMatrix,
    point: &PhasePoint,
) -> Result<QuasiLaxMatch> {
    if r_f.kind() != Kind::Nonabelian || r_k.kind() != Kind::Abelian {
        return Err(Error::InvalidArgument(
            "expected a non-Abelian and an Abelian r-matrix".into(),
        ));
    }
    let inst = r_k.instance();
    let slice = map_m(inst, point)?;
    let alg = &inst.algebra;
    let l_f = &slice.big_p - r_f.evaluate(&slice.q)? * &slice.xi;
    let l_k = &point.p - r_k.evaluate(&point.q)? * &point.xi;
    Ok(QuasiLaxMatch {
        lax: (&l_f - &l_k).norm(),
        hamiltonian: 0.5 * (alg.form(&l_f, &l_f) - alg.form(&l_k, &l_k)).abs(),
    })
}

/// Tangent vector `(δq, δp, [x, ξ])` to `{ξ_K = 0}` at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitTangent {
    pub dq: Element,
    pub dp: Element,
    /// Generator of the orbit direction `δξ = [x, ξ]`.
    pub x: Element,
}

/// Projects `x` onto the generators whose orbit direction keeps `ξ_K = 0`:
/// `P_K [x, ξ] = 0`.
pub fn tangent_generator(inst: &Instance, xi: &Element, x: &Element) -> Result<Element> {
    check_len(x, inst.dim())?;
    let k = inst.chain.k();
    // [x, ξ] = −ad_ξ x, so the constraint rows are the K rows of ad_ξ.
    let c = inst.algebra.ad(xi).rows(k.start, k.len()).into_owned();
    let cct = &c * c.transpose();
    let coef = cct.lu().solve(&(&c * x)).ok_or(Error::Degenerate {
        gap: 0.0,
        threshold: 0.0,
    })?;
    Ok(x - c.transpose() * coef)
}

/// `Ω(u, v) = B(δq_u, δp_v) − B(δq_v, δp_u) + B(ξ, [x_u, x_v])`.
fn two_form(
    inst: &Instance,
    xi: &Element,
    u: (&Element, &Element, &Element),
    v: (&Element, &Element, &Element),
) -> f64 {
    let alg = &inst.algebra;
    alg.form(u.0, v.1) - alg.form(v.0, u.1) + alg.form(xi, &alg.commutator(u.2, v.2))
}

/// `Ω_F(m_* u, m_* v) − Ω_K(u, v)` with `m_*` by central differences
/// (step `h`) along `(q + s δq, p + s δp, e^{s ad_x} ξ)`.
pub fn two_form_match(
    inst: &Instance,
    point: &PhasePoint,
    u: &OrbitTangent,
    v: &OrbitTangent,
    h: f64,
) -> Result<f64> {
    point.validate(inst, Kind::Abelian)?;
    point.require_constrained(inst)?;
    let alg = &inst.algebra;
    for t in [u, v] {
        require_in(inst, &t.dq, inst.chain.k(), "K")?;
        require_in(inst, &t.dp, inst.chain.k(), "K")?;
        check_len(&t.x, inst.dim())?;
        let leak = inst
            .chain
            .project_k(&alg.commutator(&t.x, &point.xi))
            .norm();
        if leak > 1e-10 * (1.0 + t.x.norm() * point.xi.norm()) {
            return Err(Error::NotInSubspace {
                subspace: "the tangent space of ξ_K = 0",
                norm: leak,
            });
        }
    }
    let push = |t: &OrbitTangent| -> Result<Element> {
        let at = |s: f64| {
            let xi = alg.exp_ad(&(&t.x * s)) * &point.xi;
            slice_momentum(inst, &(&point.q + &t.dq * s), &(&point.p + &t.dp * s), &xi)
        };
        Ok((at(h)? - at(-h)?) / (2.0 * h))
    };
    let (dpu, dpv) = (push(u)?, push(v)?);
    let omega_f = two_form(inst, &point.xi, (&u.dq, &dpu, &u.x), (&v.dq, &dpv, &v.x));
    let omega_k = two_form(inst, &point.xi, (&u.dq, &u.dp, &u.x), (&v.dq, &v.dp, &v.x));
    Ok(omega_f - omega_k)
}

/// Traces of all words of length ≤ 4 in `{Ξ, H_1, …, H_r}` containing `Ξ`,
/// real and imaginary parts. Invariant under `ξ ↦ e^{ad_κ} ξ`, `κ ∈ K`.
pub fn gauge_signature(inst: &Instance, xi: &Element) -> Vec<f64> {
    let alg = &inst.algebra;
    let mut letters: Vec<CMatrix> = vec![alg.matrix_of(xi)];
    letters.extend(alg.basis()[inst.chain.k()].iter().cloned());
    let size = letters[0].nrows();
    let mut out = Vec::new();
    let mut frontier: Vec<(CMatrix, bool)> = vec![(CMatrix::identity(size, size), false)];
    for _ in 0..4 {
        let mut next = Vec::with_capacity(frontier.len() * letters.len());
        for (word, has_xi) in &frontier {
            for (i, l) in letters.iter().enumerate() {
                let w = word * l;
                let has = *has_xi || i == 0;
                if has {
                    let t: Complex<f64> = w.trace();
                    out.push(t.re);
                    out.push(t.im);
                }
                next.push((w, has));
            }
        }
        frontier = next;
    }
    out
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter()
        .zip(b)
        .all(|(x, y)| (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs())))
}

fn close_vec(a: &Element, b: &Element, tol: f64) -> bool {
    (a - b).amax() <= tol * (1.0 + a.amax().max(b.amax()))
}

/// Weyl element `w` with `w·x = y` up to `K`-gauge, if any. The comparison
/// of `ξ` uses [`gauge_signature`] at relative tolerance `tol`.
pub fn weyl_identify(
    inst: &Instance,
    x: &PhasePoint,
    y: &PhasePoint,
    tol: f64,
) -> Option<WeylElement> {
    let sig_y = gauge_signature(inst, &y.xi);
    weyl_group(inst).into_iter().find(|w| {
        let op = w.algebra_operator(inst);
        close_vec(&(&op * &x.q), &y.q, tol)
            && close_vec(&(&op * &x.p), &y.p, tol)
            && close(&gauge_signature(inst, &(&op * &x.xi)), &sig_y, tol)
    })
}

/// Applies a Weyl element to all three components of a phase point.
pub fn weyl_transform(inst: &Instance, w: &WeylElement, point: &PhasePoint) -> PhasePoint {
    let op = w.algebra_operator(inst);
    PhasePoint::new(&op * &point.q, &op * &point.p, &op * &point.xi)
}
