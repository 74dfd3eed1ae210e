//! Phase space `T*V̌ × g*` with `V = K` or `V = F`, the quasi-Lax operator
//! `L = p − R(q)ξ`, the momentum map and the Lie–Poisson bracket.
//!
//! Gradients are B-gradients: `df(X) = B(∇f, X)`. The bracket is
//!
//! `{f, g} = B(∇_q f, ∇_p g) − B(∇_q g, ∇_p f) + B(ξ, [∇_ξ f, ∇_ξ g])`.

mod orbit;

use nalgebra::Complex;

use crate::error::{check_len, Error, Result};
use crate::lie::Instance;
use crate::rmatrix::{
    residual::cdybe_from_jet, residual::variable_gradient, DynamicalRMatrix, Jet, Kind,
};
use crate::{CMatrix, Element, Operator};

pub use orbit::OrbitSeed;

/// Relative tolerance for `ξ_K = 0` and membership preconditions.
pub const CONSTRAINT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    pub q: Element,
    pub p: Element,
    pub xi: Element,
}

impl PhasePoint {
    pub fn new(q: Element, p: Element, xi: Element) -> Self {
        PhasePoint { q, p, xi }
    }

    /// Checks lengths and that `q, p` lie in the variable subalgebra of `kind`.
    pub fn validate(&self, inst: &Instance, kind: Kind) -> Result<()> {
        let dim = inst.dim();
        check_len(&self.q, dim)?;
        check_len(&self.p, dim)?;
        check_len(&self.xi, dim)?;
        let (range, name) = match kind {
            Kind::Abelian => (inst.chain.k(), "K"),
            Kind::Nonabelian => (inst.chain.f(), "F"),
        };
        for v in [&self.q, &self.p] {
            let off = inst.chain.off_norm(v, range.clone());
            if off > 1e-10 * (1.0 + v.norm()) {
                return Err(Error::NotInSubspace {
                    subspace: name,
                    norm: off,
                });
            }
        }
        Ok(())
    }

    /// Norm of `ξ_K`.
    pub fn constraint_norm(&self, inst: &Instance) -> f64 {
        inst.chain.project_k(&self.xi).norm()
    }

    pub fn on_constraint_surface(&self, inst: &Instance) -> bool {
        self.constraint_norm(inst) <= CONSTRAINT_TOL * (1.0 + self.xi.norm())
    }

    pub(crate) fn require_constrained(&self, inst: &Instance) -> Result<()> {
        if !self.on_constraint_surface(inst) {
            return Err(Error::Precondition(format!(
                "ξ_K = 0 is required (|ξ_K| = {:.3e})",
                self.constraint_norm(inst)
            )));
        }
        Ok(())
    }
}

/// B-gradient of a phase-space function.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub dq: Element,
    pub dp: Element,
    pub dxi: Element,
}

impl Gradient {
    pub fn zeros(dim: usize) -> Self {
        Gradient {
            dq: Element::zeros(dim),
            dp: Element::zeros(dim),
            dxi: Element::zeros(dim),
        }
    }
}

pub fn poisson_bracket(inst: &Instance, xi: &Element, f: &Gradient, g: &Gradient) -> f64 {
    let alg = &inst.algebra;
    alg.form(&f.dq, &g.dp) - alg.form(&g.dq, &f.dp) + alg.form(xi, &alg.commutator(&f.dxi, &g.dxi))
}

/// `L(q, p, ξ) = p − R(q)ξ`.
pub fn quasi_lax(r: &dyn DynamicalRMatrix, point: &PhasePoint) -> Result<Element> {
    point.validate(r.instance(), r.kind())?;
    Ok(&point.p - r.evaluate(&point.q)? * &point.xi)
}

/// `χ = [q, p] + P_V ξ`; for the Abelian kind this is `ξ_K`.
pub fn momentum_map(inst: &Instance, point: &PhasePoint, kind: Kind) -> Element {
    match kind {
        Kind::Abelian => inst.chain.project_k(&point.xi),
        Kind::Nonabelian => {
            inst.algebra.commutator(&point.q, &point.p) + inst.chain.project_f(&point.xi)
        }
    }
}

/// Gradient of `B(u, L)` at fixed `u`, from a jet of `R` at `point.q`.
pub fn lax_gradient(
    inst: &Instance,
    kind_vars: std::ops::Range<usize>,
    jet: &Jet,
    point: &PhasePoint,
    u: &Element,
) -> Gradient {
    let alg = &inst.algebra;
    let g = alg.gram();
    let gu = g * u;
    let dq = variable_gradient(inst, kind_vars.clone(), |i| {
        -gu.dot(&(&jet.partials[i] * &point.xi))
    });
    Gradient {
        dq,
        dp: inst.chain.project(u, kind_vars),
        dxi: -(alg.b_adjoint(&jet.value) * u),
    }
}

/// Gradient of the momentum-map component `χ_x = B(x, χ)`, `x ∈ V`.
pub fn momentum_gradient(inst: &Instance, point: &PhasePoint, kind: Kind, x: &Element) -> Gradient {
    let alg = &inst.algebra;
    match kind {
        Kind::Abelian => Gradient {
            dq: Element::zeros(inst.dim()),
            dp: Element::zeros(inst.dim()),
            dxi: inst.chain.project_k(x),
        },
        Kind::Nonabelian => Gradient {
            dq: inst.chain.project_f(&alg.commutator(&point.p, x)),
            dp: inst.chain.project_f(&alg.commutator(x, &point.q)),
            dxi: inst.chain.project_f(x),
        },
    }
}

/// Residual of the bracket identity for the quasi-Lax operator,
///
/// `{L_a, L_b} − (B(e_a, [R e_b, L]) + B(e_a, R[L, e_b]) − B(e_a, (∇_χ R) e_b))`
///
/// with `L_a = B(e_a, L)`. Holds at every point of the domain, constrained or
/// not, exactly when `R` solves the CDYBE.
pub fn prop1_residual(r: &dyn DynamicalRMatrix, point: &PhasePoint) -> Result<Operator> {
    let inst = r.instance();
    point.validate(inst, r.kind())?;
    let jet = r.jet(&point.q)?;
    Ok(prop1_from_jet(inst, r.kind(), r.variables(), &jet, point))
}

pub(crate) fn prop1_from_jet(
    inst: &Instance,
    kind: Kind,
    vars: std::ops::Range<usize>,
    jet: &Jet,
    point: &PhasePoint,
) -> Operator {
    let alg = &inst.algebra;
    let dim = alg.dim();
    let g = alg.gram();
    let xi = &point.xi;
    let lax = &point.p - &jet.value * xi;

    // Row i ∈ V of w: a ↦ −B(e_a, ∂_i R ξ). The canonical part of
    // {L_a, L_b} is w[b][a] − w[a][b].
    let mut w = Operator::zeros(dim, dim);
    for (k, i) in vars.clone().enumerate() {
        let col = -(g * (&jet.partials[k] * xi));
        w.row_mut(i).copy_from(&col.transpose());
    }
    let mut lhs = w.transpose() - &w;

    // Lie–Poisson part: (R*)ᵀ W_ξ R* with W_ξ[c][d] = B(ξ, [e_c, e_d]),
    // which is B([ξ, e_c], e_d) by invariance.
    let w_xi = alg.ad(xi).transpose() * g;
    let r_star = alg.b_adjoint(&jet.value);
    lhs += r_star.transpose() * w_xi * &r_star;

    let ad_l = alg.ad(&lax);
    let chi = momentum_map(inst, point, kind);
    let rhs = g * (-(&ad_l * &jet.value) + &jet.value * &ad_l - jet.directional(&chi));
    lhs - rhs
}

/// `B(ξ, CDYBE(e_a, e_b))`, which equals [`prop1_residual`] entrywise when
/// `R` is equivariant.
pub fn prop1_via_cdybe(r: &dyn DynamicalRMatrix, point: &PhasePoint) -> Result<Operator> {
    let inst = r.instance();
    point.validate(inst, r.kind())?;
    let jet = r.jet(&point.q)?;
    let dim = inst.dim();
    let gxi = inst.algebra.gram() * &point.xi;
    let mut out = Operator::zeros(dim, dim);
    for a in 0..dim {
        let ea = crate::linalg::unit(dim, a);
        for b in a + 1..dim {
            let eb = crate::linalg::unit(dim, b);
            let v = gxi.dot(&cdybe_from_jet(inst, r.variables(), &jet, &ea, &eb));
            out[(a, b)] = v;
            out[(b, a)] = -v;
        }
    }
    Ok(out)
}

/// `{χ_i, χ_j} − B([e_i, e_j], χ)` over basis pairs of the variable
/// subalgebra.
pub fn first_class_residual(inst: &Instance, point: &PhasePoint, kind: Kind) -> Result<Operator> {
    point.validate(inst, kind)?;
    let alg = &inst.algebra;
    let vars = match kind {
        Kind::Abelian => inst.chain.k(),
        Kind::Nonabelian => inst.chain.f(),
    };
    let dim = inst.dim();
    let chi = momentum_map(inst, point, kind);
    let grads: Vec<Gradient> = vars
        .clone()
        .map(|i| momentum_gradient(inst, point, kind, &crate::linalg::unit(dim, i)))
        .collect();
    let n = vars.len();
    let mut out = Operator::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            let bracket = poisson_bracket(inst, &point.xi, &grads[a], &grads[b]);
            let ea = crate::linalg::unit(dim, vars.start + a);
            let eb = crate::linalg::unit(dim, vars.start + b);
            out[(a, b)] = bracket - alg.form(&alg.commutator(&ea, &eb), &chi);
        }
    }
    Ok(out)
}

/// `H = ½ B(L, L)`.
pub fn hamiltonian(r: &dyn DynamicalRMatrix, point: &PhasePoint) -> Result<f64> {
    let l = quasi_lax(r, point)?;
    Ok(0.5 * r.instance().algebra.form(&l, &l))
}

/// `½ B(p, p) + ½ B(Rξ_{K⊥}, Rξ_{K⊥})`, valid on `ξ_K = 0` for a compatible
/// Abelian r-matrix.
pub fn constrained_hamiltonian(r: &dyn DynamicalRMatrix, point: &PhasePoint) -> Result<f64> {
    let inst = r.instance();
    if r.kind() != Kind::Abelian {
        return Err(Error::InvalidArgument(
            "the constrained Hamiltonian is defined for Abelian r-matrices".into(),
        ));
    }
    point.validate(inst, Kind::Abelian)?;
    point.require_constrained(inst)?;
    let alg = &inst.algebra;
    let rxi = r.evaluate(&point.q)? * inst.chain.project_kperp(&point.xi);
    Ok(0.5 * alg.form(&point.p, &point.p) + 0.5 * alg.form(&rxi, &rxi))
}

/// Phase making `c·X` Hermitian-like so that traces of powers are real:
/// `1` for split forms, `−i` for `su(n)`.
fn trace_twist(inst: &Instance) -> Complex<f64> {
    if inst.algebra.is_compact() {
        Complex::new(0.0, -1.0)
    } else {
        Complex::new(1.0, 0.0)
    }
}

fn check_kmax(inst: &Instance, kmax: usize) -> Result<()> {
    let n = inst.algebra.block_size();
    if !(2..=n).contains(&kmax) {
        return Err(Error::InvalidArgument(format!(
            "kmax = {kmax} must lie in 2..={n} for {}",
            inst.algebra.label()
        )));
    }
    Ok(())
}

/// `h_k = Re tr((cX)^k)` for `k = 2..=kmax` in the defining representation,
/// with `c = 1` on split forms and `c = −i` on `su(n)`.
pub fn invariant_functions(inst: &Instance, x: &Element, kmax: usize) -> Result<Vec<f64>> {
    check_len(x, inst.dim())?;
    check_kmax(inst, kmax)?;
    let m = inst.algebra.matrix_of(x) * trace_twist(inst);
    let mut power = m.clone();
    let mut out = Vec::with_capacity(kmax - 1);
    for _ in 2..=kmax {
        power = &power * &m;
        out.push(power.trace().re);
    }
    Ok(out)
}

/// B-gradients of the [`invariant_functions`] at `x`.
pub fn invariant_gradients(inst: &Instance, x: &Element, kmax: usize) -> Result<Vec<Element>> {
    check_len(x, inst.dim())?;
    check_kmax(inst, kmax)?;
    let c = trace_twist(inst);
    let m = inst.algebra.matrix_of(x);
    let size = m.nrows();
    let mut power: CMatrix = CMatrix::identity(size, size);
    let mut out = Vec::with_capacity(kmax - 1);
    for k in 1..kmax {
        power = &power * &m;
        // d tr((cX)^{k+1}) = (k+1) c^{k+1} tr(X^k dX)
        let scale = c.powu(k as u32 + 1) * (k as f64 + 1.0);
        out.push(inst.algebra.coefficients(&(&power * scale)));
    }
    Ok(out)
}

/// Matrix of brackets `{h_j ∘ L, h_k ∘ L}` for `j, k = 2..=kmax`.
pub fn invariant_brackets(
    r: &dyn DynamicalRMatrix,
    point: &PhasePoint,
    kmax: usize,
) -> Result<Operator> {
    let inst = r.instance();
    point.validate(inst, r.kind())?;
    let jet = r.jet(&point.q)?;
    let lax = &point.p - &jet.value * &point.xi;
    let grads: Vec<Gradient> = invariant_gradients(inst, &lax, kmax)?
        .iter()
        .map(|u| lax_gradient(inst, r.variables(), &jet, point, u))
        .collect();
    let n = grads.len();
    Ok(Operator::from_fn(n, n, |a, b| {
        poisson_bracket(inst, &point.xi, &grads[a], &grads[b])
    }))
}

/// Gauge action of `κ ∈ K`: `(q, p, ξ) ↦ (q, p, e^{ad_κ} ξ)` on `ξ_K = 0`.
pub fn gauge_transform(inst: &Instance, point: &PhasePoint, kappa: &Element) -> Result<PhasePoint> {
    point.validate(inst, Kind::Abelian)?;
    check_len(kappa, inst.dim())?;
    let off = inst.chain.off_norm(kappa, inst.chain.k());
    if off > 1e-10 * (1.0 + kappa.norm()) {
        return Err(Error::NotInSubspace {
            subspace: "K",
            norm: off,
        });
    }
    point.require_constrained(inst)?;
    Ok(PhasePoint {
        q: point.q.clone(),
        p: point.p.clone(),
        xi: inst.algebra.exp_ad(kappa) * &point.xi,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::lie::{build_algebra, AlgebraDescriptor};
    use crate::linalg::unit;
    use crate::rmatrix::AlekseevMeinrenken;

    fn sl2() -> AlekseevMeinrenken {
        AlekseevMeinrenken::new(Arc::new(build_algebra(&AlgebraDescriptor::sl(2)).unwrap()))
    }

    fn example_point() -> PhasePoint {
        let ln2 = std::f64::consts::LN_2;
        PhasePoint::new(
            unit(3, 0) * (ln2 / 2.0),
            unit(3, 0),
            unit(3, 1) + unit(3, 2),
        )
    }

    #[test]
    fn quasi_lax_on_sl2_example() {
        let r = sl2();
        let l = quasi_lax(&r, &example_point()).unwrap();
        assert!((l - Element::from_vec(vec![1.0, -2.0, 1.0])).amax() < 1e-13);
    }

    #[test]
    fn trace_of_square() {
        let r = sl2();
        let l = quasi_lax(&r, &example_point()).unwrap();
        let h = invariant_functions(r.instance(), &l, 2).unwrap();
        assert!((h[0] + 2.0).abs() < 1e-12);
        assert!(invariant_functions(r.instance(), &l, 3).is_err());
    }

    #[test]
    fn zero_spin_gives_momentum() {
        let r = sl2();
        let mut pt = example_point();
        pt.xi = Element::zeros(3);
        assert_eq!(quasi_lax(&r, &pt).unwrap(), pt.p);
    }

    #[test]
    fn lie_poisson_bracket_of_root_coordinates() {
        let inst = build_algebra(&AlgebraDescriptor::sl(2)).unwrap();
        let grad = |x: Element| Gradient {
            dxi: x,
            ..Gradient::zeros(3)
        };
        let v = poisson_bracket(&inst, &unit(3, 0), &grad(unit(3, 1)), &grad(unit(3, 2)));
        assert!((v - 2.0).abs() < 1e-15);
    }

    #[test]
    fn momentum_map_examples() {
        let inst = build_algebra(&AlgebraDescriptor::sl(2)).unwrap();
        let pt = PhasePoint::new(
            Element::zeros(3),
            Element::zeros(3),
            unit(3, 0) + unit(3, 1) * 3.0,
        );
        assert_eq!(momentum_map(&inst, &pt, Kind::Abelian), unit(3, 0));

        let ln2 = std::f64::consts::LN_2;
        let big_p = unit(3, 0) - (unit(3, 1) + unit(3, 2)) / ln2;
        let pt = PhasePoint::new(unit(3, 0) * (ln2 / 2.0), big_p, unit(3, 1) - unit(3, 2));
        assert!(momentum_map(&inst, &pt, Kind::Nonabelian).amax() < 1e-15);
    }

    #[test]
    fn closed_form_potential() {
        let r = sl2();
        let pt = PhasePoint::new(
            unit(3, 0),
            Element::zeros(3),
            unit(3, 1) * 2.0 - unit(3, 2) * 2.0,
        );
        let h = constrained_hamiltonian(&r, &pt).unwrap();
        let expected = 1.0 / 1f64.sinh().powi(2);
        assert!((h - expected).abs() < 1e-12);
        assert!((h - 0.72407).abs() < 1e-5);
        assert!((hamiltonian(&r, &pt).unwrap() - h).abs() < 1e-12);
    }

    #[test]
    fn constrained_form_needs_constraint() {
        let r = sl2();
        let pt = PhasePoint::new(unit(3, 0), Element::zeros(3), unit(3, 0));
        assert!(matches!(
            constrained_hamiltonian(&r, &pt),
            Err(Error::Precondition(_))
        ));
        assert!(gauge_transform(r.instance(), &pt, &unit(3, 0)).is_err());
    }

    #[test]
    fn prop1_matches_cdybe_form() {
        let r = sl2();
        let pt = PhasePoint::new(
            unit(3, 0) * 0.8,
            unit(3, 0) * 0.3,
            Element::from_vec(vec![0.4, 1.1, -0.7]),
        );
        let a = prop1_residual(&r, &pt).unwrap();
        assert!(a.amax() < 1e-13, "{a}");
        let b = prop1_via_cdybe(&r, &pt).unwrap();
        assert!(b.amax() < 1e-13);
    }

    #[test]
    fn gauge_identity() {
        let r = sl2();
        let pt = example_point();
        let same = gauge_transform(r.instance(), &pt, &Element::zeros(3)).unwrap();
        assert_eq!(same, pt);
    }
}
