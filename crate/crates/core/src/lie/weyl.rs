use itertools::Itertools;
use nalgebra::Complex;

use crate::lie::Instance;
use crate::linalg::block_diag;
use crate::{CMatrix, Element, Operator};

/// Element of the Weyl group of `K ⊂ F`, a permutation of the diagonal
/// entries of each factor. Acts on `g` by conjugation with the
/// (block-repeated) permutation matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    pub perm: Vec<usize>,
}

impl WeylElement {
    pub fn identity(n: usize) -> Self {
        WeylElement {
            perm: (0..n).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// `(self ∘ other)(j) = self(other(j))`.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        WeylElement {
            perm: other.perm.iter().map(|&j| self.perm[j]).collect(),
        }
    }

    pub fn inverse(&self) -> WeylElement {
        let mut inv = vec![0; self.perm.len()];
        for (j, &p) in self.perm.iter().enumerate() {
            inv[p] = j;
        }
        WeylElement { perm: inv }
    }

    /// Permutation matrix `P e_j = e_{σ(j)}` repeated over the factors.
    pub fn matrix(&self, inst: &Instance) -> CMatrix {
        let n = self.perm.len();
        let mut p = CMatrix::zeros(n, n);
        for (j, &s) in self.perm.iter().enumerate() {
            p[(s, j)] = Complex::new(1.0, 0.0);
        }
        block_diag(&p, inst.algebra.copies())
    }

    /// Action on `g` as an operator on coefficient vectors.
    pub fn algebra_operator(&self, inst: &Instance) -> Operator {
        let p = self.matrix(inst);
        inst.algebra.conjugation_operator(&p, &p.transpose())
    }

    /// Restriction of the action to `K`.
    pub fn cartan_operator(&self, inst: &Instance) -> Operator {
        let k = inst.chain.k();
        self.algebra_operator(inst)
            .view((k.start, k.start), (k.len(), k.len()))
            .into_owned()
    }
}

/// All elements of the Weyl group, identity first.
pub fn weyl_group(inst: &Instance) -> Vec<WeylElement> {
    let n = inst.algebra.block_size();
    (0..n)
        .permutations(n)
        .map(|perm| WeylElement { perm })
        .collect()
}

pub fn weyl_order(inst: &Instance) -> usize {
    (1..=inst.algebra.block_size()).product()
}

pub fn weyl_act(inst: &Instance, w: &WeylElement, q: &Element) -> Element {
    w.algebra_operator(inst) * q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{build_algebra, AlgebraDescriptor};
    use crate::linalg::unit;

    #[test]
    fn orders() {
        let sl2 = build_algebra(&AlgebraDescriptor::sl(2)).unwrap();
        let sl3 = build_algebra(&AlgebraDescriptor::sl(3)).unwrap();
        assert_eq!(weyl_group(&sl2).len(), 2);
        assert_eq!(weyl_group(&sl3).len(), 6);
        assert_eq!(weyl_order(&sl3), 6);
        assert!(weyl_group(&sl3)[0].is_identity());
    }

    #[test]
    fn sl2_reflection_negates_h() {
        let inst = build_algebra(&AlgebraDescriptor::sl(2)).unwrap();
        let w = &weyl_group(&inst)[1];
        let q = unit(3, 0) * 0.7;
        assert!((weyl_act(&inst, w, &q) + &q).amax() < 1e-15);
        assert!((w.cartan_operator(&inst)[(0, 0)] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn closed_under_composition() {
        let inst = build_algebra(&AlgebraDescriptor::su(3)).unwrap();
        let group = weyl_group(&inst);
        for a in &group {
            for b in &group {
                let c = a.compose(b);
                assert!(group.contains(&c));
                let lhs = c.algebra_operator(&inst);
                let rhs = a.algebra_operator(&inst) * b.algebra_operator(&inst);
                assert!((lhs - rhs).amax() < 1e-14);
            }
            assert!(a.compose(&a.inverse()).is_identity());
        }
    }

    #[test]
    fn action_preserves_ad_spectrum() {
        let inst = build_algebra(&AlgebraDescriptor::sl(3)).unwrap();
        let q = inst.cartan_from_diagonal(&[0.9, -0.2, -0.7]);
        let mut base = inst
            .root_values(&q)
            .iter()
            .map(|r| r.abs())
            .collect::<Vec<_>>();
        base.sort_by(f64::total_cmp);
        for w in weyl_group(&inst) {
            let mut moved = inst
                .root_values(&weyl_act(&inst, &w, &q))
                .iter()
                .map(|r| r.abs())
                .collect::<Vec<_>>();
            moved.sort_by(f64::total_cmp);
            for (a, b) in base.iter().zip(&moved) {
                assert!((a - b).abs() < 1e-14);
            }
        }
    }
}
