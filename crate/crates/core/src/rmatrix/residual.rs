use std::ops::Range;

use crate::error::{check_len, Error, Result};
use crate::lie::Instance;
use crate::linalg::spectral_norm;
use crate::rmatrix::{DynamicalRMatrix, Jet};
use crate::{Element, Operator};

/// CDYBE residual `E(R^a, X, Y) + [R^s X, R^s Y]` with `R^a = R − ½ id`,
/// `R^s = ½ id` and
///
/// `E = [R^aX, R^aY] − R^a([R^aX, Y] − [R^aY, X]) + ∇_{Y_V} R^a X − ∇_{X_V} R^a Y + ⟨X, (∇R^a) Y⟩`
///
/// where `V` is the variable subalgebra and the last term is the `V`-valued
/// B-gradient of `q ↦ B(X, R^a(q) Y)`. Vanishes for a dynamical r-matrix.
pub fn cdybe_residual(
    r: &dyn DynamicalRMatrix,
    q: &Element,
    x: &Element,
    y: &Element,
) -> Result<Element> {
    let inst = r.instance();
    check_len(x, inst.dim())?;
    check_len(y, inst.dim())?;
    let jet = r.jet(q)?;
    Ok(cdybe_from_jet(inst, r.variables(), &jet, x, y))
}

pub fn cdybe_from_jet(
    inst: &Instance,
    vars: Range<usize>,
    jet: &Jet,
    x: &Element,
    y: &Element,
) -> Element {
    let alg = &inst.algebra;
    let dim = alg.dim();
    let ra = &jet.value - Operator::identity(dim, dim) * 0.5;
    let ra_x = &ra * x;
    let ra_y = &ra * y;

    let mut res = alg.commutator(&ra_x, &ra_y);
    res -= &ra * (alg.commutator(&ra_x, y) - alg.commutator(&ra_y, x));

    let x_v = inst.chain.project(x, vars.clone());
    let y_v = inst.chain.project(y, vars.clone());
    res += jet.directional(&y_v) * x;
    res -= jet.directional(&x_v) * y;

    res += variable_gradient(inst, vars, |i| {
        x.dot(&(alg.gram() * (&jet.partials[i] * y)))
    });

    res += alg.commutator(x, y) * 0.25;
    res
}

/// B-gradient in the variable subalgebra of a function given by its partial
/// derivatives along the basis vectors.
pub(crate) fn variable_gradient(
    inst: &Instance,
    vars: Range<usize>,
    partial: impl Fn(usize) -> f64,
) -> Element {
    let n = vars.len();
    let g = Element::from_iterator(n, (0..n).map(partial));
    let gram = inst.algebra.gram();
    let block = gram.view((vars.start, vars.start), (n, n)).into_owned();
    let coords = block
        .lu()
        .solve(&g)
        .expect("B is non-degenerate on the variable subalgebra");
    let mut out = Element::zeros(inst.dim());
    out.rows_mut(vars.start, n).copy_from(&coords);
    out
}

/// `∇_{[x,q]} R(q) − [ad_x, R(q)]`; vanishes for equivariant `R`.
pub fn equivariance_residual(
    r: &dyn DynamicalRMatrix,
    q: &Element,
    x: &Element,
) -> Result<Operator> {
    let inst = r.instance();
    check_len(x, inst.dim())?;
    let vars = r.variables();
    let off = inst.chain.off_norm(x, vars);
    if off > 1e-10 * (1.0 + x.norm()) {
        return Err(Error::NotInSubspace {
            subspace: "the variable subalgebra",
            norm: off,
        });
    }
    let alg = &inst.algebra;
    let value = r.evaluate(q)?;
    let ad_x = alg.ad(x);
    let mut res = -(&ad_x * &value - &value * &ad_x);
    let direction = alg.commutator(x, q);
    if direction.amax() > 0.0 {
        res += r.derivative(q, &direction)?;
    }
    Ok(res)
}

/// `‖R + R* − id‖` (spectral norm).
pub fn quasi_triangularity_residual(inst: &Instance, op: &Operator) -> f64 {
    let dim = inst.dim();
    spectral_norm(&(op + inst.algebra.b_adjoint(op) - Operator::identity(dim, dim)))
}

/// `max(‖P_K R P_{K⊥}‖, ‖P_{K⊥} R P_K‖)`.
pub fn compatibility_residual(inst: &Instance, op: &Operator) -> f64 {
    let (k, kp) = (inst.chain.k(), inst.chain.kperp());
    let upper = op
        .view((k.start, kp.start), (k.len(), kp.len()))
        .into_owned();
    let lower = op
        .view((kp.start, k.start), (kp.len(), k.len()))
        .into_owned();
    spectral_norm(&upper).max(spectral_norm(&lower))
}

/// `‖a − b‖` (spectral norm).
pub fn operator_residual(a: &Operator, b: &Operator) -> f64 {
    spectral_norm(&(a - b))
}
