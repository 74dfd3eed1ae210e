use std::sync::Arc;

use crate::error::{check_len, Error, Result};
use crate::lie::{diagonalize_to_cartan, Instance};
use crate::linalg::{embed_block, inverse_norm};
use crate::rmatrix::{richardson_derivative, DynamicalRMatrix, Kind, DOMAIN_CONDITION, FD_STEP};
use crate::{Element, Operator};

/// `(ad_q|_{K⊥∩F})⁻¹`, embedded as an operator on `g` that vanishes off
/// `K⊥ ∩ F`.
pub(crate) fn ad_inverse_on_kperp_f(inst: &Instance, q: &Element) -> Result<Operator> {
    let range = inst.chain.kperp_f();
    let (block, cond) = ad_block(inst, q);
    if cond.is_nan() || cond > DOMAIN_CONDITION {
        return Err(Error::Domain(format!(
            "ad_q on K⊥∩F has inverse norm {cond:.3e}"
        )));
    }
    let inv = block
        .try_inverse()
        .ok_or_else(|| Error::Domain("ad_q is singular on K⊥∩F".into()))?;
    Ok(embed_block(inst.dim(), range.start, &inv))
}

fn ad_block(inst: &Instance, q: &Element) -> (Operator, f64) {
    let range = inst.chain.kperp_f();
    let ad = inst.algebra.ad(q);
    let block = ad
        .view((range.start, range.start), (range.len(), range.len()))
        .into_owned();
    let cond = inverse_norm(&block);
    (block, cond)
}

fn require_subspace(
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

/// Non-Abelian r-matrix on `F̌` obtained by inverting the Dirac reduction
/// and extending by `F`-equivariance:
///
/// `R_F(q) = R_K(q) − (ad_q|_{K⊥∩F})⁻¹ P_{K⊥∩F}` on `Ǩ`, and
/// `R_F(Q) = Ad_f⁻¹ R_F(q) Ad_f` when `Ad_f Q = q`.
#[derive(Clone)]
pub struct NonAbelianExtension {
    base: Arc<dyn DynamicalRMatrix>,
}

pub fn nonabelian_extend(base: Arc<dyn DynamicalRMatrix>) -> Result<NonAbelianExtension> {
    if base.kind() != Kind::Abelian {
        return Err(Error::InvalidArgument(
            "the non-Abelian extension starts from an Abelian r-matrix".into(),
        ));
    }
    Ok(NonAbelianExtension { base })
}

impl NonAbelianExtension {
    pub fn base(&self) -> &Arc<dyn DynamicalRMatrix> {
        &self.base
    }

    /// `R_F(q)` for `q` in the Cartan subalgebra, without conjugation.
    pub fn at_cartan(&self, q: &Element) -> Result<Operator> {
        Ok(self.base.evaluate(q)? - ad_inverse_on_kperp_f(self.base.instance(), q)?)
    }
}

impl DynamicalRMatrix for NonAbelianExtension {
    fn instance(&self) -> &Arc<Instance> {
        self.base.instance()
    }

    fn kind(&self) -> Kind {
        Kind::Nonabelian
    }

    fn evaluate(&self, big_q: &Element) -> Result<Operator> {
        let inst = self.instance();
        // On K itself use the formula pointwise; conjugating into the sorted
        // chamber would agree only for Weyl-equivariant bases.
        if inst.chain.off_norm(big_q, inst.chain.k()) == 0.0 {
            return self.at_cartan(big_q);
        }
        let d = diagonalize_to_cartan(inst, big_q)?;
        let at_q = self.at_cartan(&d.q)?;
        Ok(&d.ad_f_inv * at_q * &d.ad_f)
    }

    fn derivative(&self, big_q: &Element, v: &Element) -> Result<Operator> {
        let inst = self.instance();
        require_subspace(inst, v, inst.chain.f(), "F")?;
        richardson_derivative(self, big_q, v, FD_STEP)
    }

    fn condition(&self, big_q: &Element) -> Result<f64> {
        let d = diagonalize_to_cartan(self.instance(), big_q)?;
        let (_, cond) = ad_block(self.instance(), &d.q);
        Ok(self.base.condition(&d.q)?.max(cond))
    }
}

/// Dirac reduction of a non-Abelian r-matrix to the Cartan subalgebra:
/// `R_K(q) = R_F(q) + (ad_q|_{K⊥∩F})⁻¹` on `K⊥ ∩ F`, unchanged on `K + F⊥`.
#[derive(Clone)]
pub struct DiracReduction {
    source: Arc<dyn DynamicalRMatrix>,
}

pub fn dirac_reduce(source: Arc<dyn DynamicalRMatrix>) -> Result<DiracReduction> {
    if source.kind() != Kind::Nonabelian {
        return Err(Error::InvalidArgument(
            "Dirac reduction needs an r-matrix with variables in F".into(),
        ));
    }
    Ok(DiracReduction { source })
}

impl DiracReduction {
    pub fn source(&self) -> &Arc<dyn DynamicalRMatrix> {
        &self.source
    }
}

impl DynamicalRMatrix for DiracReduction {
    fn instance(&self) -> &Arc<Instance> {
        self.source.instance()
    }

    fn kind(&self) -> Kind {
        Kind::Abelian
    }

    fn evaluate(&self, q: &Element) -> Result<Operator> {
        let inst = self.instance();
        require_subspace(inst, q, inst.chain.k(), "K")?;
        let correction = ad_inverse_on_kperp_f(inst, q)?;
        Ok(self.source.evaluate(q)? + correction)
    }

    fn derivative(&self, q: &Element, v: &Element) -> Result<Operator> {
        let inst = self.instance();
        require_subspace(inst, v, inst.chain.k(), "K")?;
        richardson_derivative(self, q, v, FD_STEP)
    }

    fn condition(&self, q: &Element) -> Result<f64> {
        let (_, cond) = ad_block(self.instance(), q);
        Ok(self.source.condition(q)?.max(cond))
    }
}
