use std::sync::Arc;

use crate::error::{check_len, Error, Result};
use crate::lie::{Automorphism, AutomorphismKind, Instance};
use crate::linalg::{embed_block, inverse_norm, unit};
use crate::rmatrix::{DynamicalRMatrix, Jet, Kind, DOMAIN_CONDITION};
use crate::{Element, Operator};

/// The Alekseev–Meinrenken r-matrix on the Cartan subalgebra `K`:
///
/// `R(q)|_K = ½ id_K`, `R(q)|_{K⊥} = (1 − θ⁻¹ e^{−ad_q}|_{K⊥})⁻¹`.
///
/// It is block diagonal with respect to `g = K ⊕ K⊥`.
#[derive(Debug, Clone)]
pub struct AlekseevMeinrenken {
    inst: Arc<Instance>,
    theta: Automorphism,
}

/// Pieces shared by the value and its derivatives at one base point.
struct Factors {
    /// `e^{−ad_q}` on all of `g`.
    exp_neg: Operator,
    /// `A(q)⁻¹` on `K⊥`.
    a_inv: Operator,
}

impl AlekseevMeinrenken {
    /// Uses the automorphism named in the instance descriptor.
    pub fn new(inst: Arc<Instance>) -> Self {
        let theta = inst.default_automorphism().clone();
        AlekseevMeinrenken { inst, theta }
    }

    pub fn with_automorphism(inst: Arc<Instance>, kind: AutomorphismKind) -> Result<Self> {
        let theta = inst.automorphism(kind).cloned().ok_or_else(|| {
            Error::Unsupported(format!("{kind} automorphism on {}", inst.algebra.label()))
        })?;
        Ok(AlekseevMeinrenken { inst, theta })
    }

    pub fn theta(&self) -> &Automorphism {
        &self.theta
    }

    fn check_cartan(&self, q: &Element) -> Result<()> {
        check_len(q, self.inst.dim())?;
        let off = self.inst.chain.off_norm(q, self.inst.chain.k());
        if off > 1e-10 * (1.0 + q.norm()) {
            return Err(Error::NotInSubspace {
                subspace: "K",
                norm: off,
            });
        }
        Ok(())
    }

    /// `A(q) = 1 − θ⁻¹ e^{−ad_q}` restricted to `K⊥`.
    pub fn a_block(&self, q: &Element) -> Result<Operator> {
        self.check_cartan(q)?;
        Ok(self.a_block_from(&self.inst.algebra.exp_ad(&-q)))
    }

    fn a_block_from(&self, exp_neg: &Operator) -> Operator {
        let kp = self.inst.chain.kperp();
        let full =
            Operator::identity(self.inst.dim(), self.inst.dim()) - self.theta.inverse() * exp_neg;
        full.view((kp.start, kp.start), (kp.len(), kp.len()))
            .into_owned()
    }

    fn factors(&self, q: &Element) -> Result<Factors> {
        self.check_cartan(q)?;
        let exp_neg = self.inst.algebra.exp_ad(&-q);
        let a = self.a_block_from(&exp_neg);
        let cond = inverse_norm(&a);
        if cond.is_nan() || cond > DOMAIN_CONDITION {
            return Err(Error::Domain(format!(
                "1 − θ⁻¹e^(−ad q) on K⊥ has inverse norm {cond:.3e}"
            )));
        }
        let a_inv = a
            .try_inverse()
            .ok_or_else(|| Error::Domain("1 − θ⁻¹e^(−ad q) is singular on K⊥".into()))?;
        Ok(Factors { exp_neg, a_inv })
    }

    fn value_from(&self, f: &Factors) -> Operator {
        let dim = self.inst.dim();
        let k = self.inst.chain.k();
        let mut r = embed_block(dim, k.end, &f.a_inv);
        for i in k {
            r[(i, i)] = 0.5;
        }
        r
    }

    /// `−A⁻¹ (θ⁻¹ ad_v e^{−ad_q}) A⁻¹` on `K⊥`, zero on `K`; exact because
    /// `ad_q` and `ad_v` commute.
    fn derivative_from(&self, f: &Factors, v: &Element) -> Operator {
        let dim = self.inst.dim();
        let kp = self.inst.chain.kperp();
        let d_a = self.theta.inverse() * self.inst.algebra.ad(v) * &f.exp_neg;
        let d_a = d_a.view((kp.start, kp.start), (kp.len(), kp.len()));
        let block = -(&f.a_inv * d_a * &f.a_inv);
        embed_block(dim, kp.start, &block)
    }
}

impl DynamicalRMatrix for AlekseevMeinrenken {
    fn instance(&self) -> &Arc<Instance> {
        &self.inst
    }

    fn kind(&self) -> Kind {
        Kind::Abelian
    }

    fn evaluate(&self, q: &Element) -> Result<Operator> {
        let f = self.factors(q)?;
        Ok(self.value_from(&f))
    }

    fn derivative(&self, q: &Element, v: &Element) -> Result<Operator> {
        check_len(v, self.inst.dim())?;
        let off = self.inst.chain.off_norm(v, self.inst.chain.k());
        if off > 1e-10 * (1.0 + v.norm()) {
            return Err(Error::NotInSubspace {
                subspace: "K",
                norm: off,
            });
        }
        let f = self.factors(q)?;
        Ok(self.derivative_from(&f, v))
    }

    fn condition(&self, q: &Element) -> Result<f64> {
        Ok(inverse_norm(&self.a_block(q)?))
    }

    fn jet(&self, q: &Element) -> Result<Jet> {
        let f = self.factors(q)?;
        let dim = self.inst.dim();
        Ok(Jet {
            value: self.value_from(&f),
            partials: self
                .inst
                .chain
                .k()
                .map(|i| self.derivative_from(&f, &unit(dim, i)))
                .collect(),
        })
    }
}
