//! Dynamical r-matrices `q ↦ R(q) ∈ End(g)` and their defining residuals.
//!
//! Under the identification `g ≅ g*` through `B`, an r-matrix is an operator
//! on coefficient vectors. The quasi-triangular normalisation reads
//! `R(q) + R(q)* = id`, with `*` the B-adjoint.

mod am;
pub(crate) mod nonabelian;
mod perturbed;
pub(crate) mod residual;

use std::ops::Range;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lie::Instance;
use crate::linalg::unit;
use crate::{Element, Operator};

pub use am::AlekseevMeinrenken;
pub use nonabelian::{dirac_reduce, nonabelian_extend, DiracReduction, NonAbelianExtension};
pub use perturbed::Perturbed;
pub use residual::{
    cdybe_residual, compatibility_residual, equivariance_residual, operator_residual,
    quasi_triangularity_residual,
};

/// Bound on `‖A⁻¹‖` for every operator `A` an evaluation inverts; this is
/// the quantitative stand-in for invertibility in the domain predicates.
pub const DOMAIN_CONDITION: f64 = 1e8;

/// Step of the central differences used for non-Abelian base points.
pub const FD_STEP: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    /// Variables in the Cartan subalgebra `K`.
    Abelian,
    /// Variables in the reductive subalgebra `F`.
    Nonabelian,
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Kind::Abelian => f.write_str("abelian"),
            Kind::Nonabelian => f.write_str("nonabelian"),
        }
    }
}

/// Value of an r-matrix at a base point together with its partial
/// derivatives along the basis of the variable subalgebra.
#[derive(Debug, Clone)]
pub struct Jet {
    pub value: Operator,
    pub partials: Vec<Operator>,
}

impl Jet {
    /// `∇_v R` for `v` in the variable subalgebra (extra components ignored).
    pub fn directional(&self, v: &Element) -> Operator {
        let dim = self.value.nrows();
        let mut out = Operator::zeros(dim, dim);
        for (i, d) in self.partials.iter().enumerate() {
            if v[i] != 0.0 {
                out += d * v[i];
            }
        }
        out
    }
}

pub trait DynamicalRMatrix: Send + Sync {
    fn instance(&self) -> &Arc<Instance>;

    fn kind(&self) -> Kind;

    fn evaluate(&self, q: &Element) -> Result<Operator>;

    /// Directional derivative `d/dt R(q + t v)` at `t = 0`.
    fn derivative(&self, q: &Element, v: &Element) -> Result<Operator>;

    /// Largest `‖A⁻¹‖` among the operators the evaluation inverts.
    fn condition(&self, q: &Element) -> Result<f64>;

    fn in_domain(&self, q: &Element) -> bool {
        self.evaluate(q).is_ok()
    }

    /// Index range of the variable subalgebra (`K` or `F`) in the adapted basis.
    fn variables(&self) -> Range<usize> {
        let chain = &self.instance().chain;
        match self.kind() {
            Kind::Abelian => chain.k(),
            Kind::Nonabelian => chain.f(),
        }
    }

    fn jet(&self, q: &Element) -> Result<Jet> {
        let dim = self.instance().dim();
        let value = self.evaluate(q)?;
        let partials = self
            .variables()
            .map(|i| self.derivative(q, &unit(dim, i)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Jet { value, partials })
    }
}

/// Central difference `(R(q+hv) − R(q−hv)) / 2h`.
pub fn central_difference(
    r: &dyn DynamicalRMatrix,
    q: &Element,
    v: &Element,
    h: f64,
) -> Result<Operator> {
    let plus = r.evaluate(&(q + v * h))?;
    let minus = r.evaluate(&(q - v * h))?;
    Ok((plus - minus) / (2.0 * h))
}

/// Central difference with one Richardson extrapolation step.
pub fn richardson_derivative(
    r: &dyn DynamicalRMatrix,
    q: &Element,
    v: &Element,
    h: f64,
) -> Result<Operator> {
    let fine = central_difference(r, q, v, h)?;
    let coarse = central_difference(r, q, v, 2.0 * h)?;
    Ok((fine * 4.0 - coarse) / 3.0)
}
