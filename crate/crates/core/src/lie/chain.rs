use std::ops::Range;

use crate::lie::LieAlgebra;
use crate::linalg::unit;
use crate::{Element, Operator};

/// Index data for `K ⊂ F ⊆ g` in an adapted basis ordered as
/// `K`, then `K⊥ ∩ F`, then `F⊥`.
///
/// The three blocks are mutually B-orthogonal, so every projector is a
/// coordinate slice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubalgebraChain {
    dim: usize,
    k_end: usize,
    f_end: usize,
}

impl SubalgebraChain {
    pub fn new(dim: usize, k_dim: usize, f_dim: usize) -> Self {
        assert!(k_dim <= f_dim && f_dim <= dim);
        SubalgebraChain {
            dim,
            k_end: k_dim,
            f_end: f_dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn k(&self) -> Range<usize> {
        0..self.k_end
    }

    pub fn kperp(&self) -> Range<usize> {
        self.k_end..self.dim
    }

    pub fn f(&self) -> Range<usize> {
        0..self.f_end
    }

    pub fn fperp(&self) -> Range<usize> {
        self.f_end..self.dim
    }

    pub fn kperp_f(&self) -> Range<usize> {
        self.k_end..self.f_end
    }

    pub fn k_indices(&self) -> Vec<usize> {
        self.k().collect()
    }

    pub fn kperp_indices(&self) -> Vec<usize> {
        self.kperp().collect()
    }

    pub fn f_indices(&self) -> Vec<usize> {
        self.f().collect()
    }

    pub fn fperp_indices(&self) -> Vec<usize> {
        self.fperp().collect()
    }

    pub fn projector(&self, range: Range<usize>) -> Operator {
        let mut p = Operator::zeros(self.dim, self.dim);
        for i in range {
            p[(i, i)] = 1.0;
        }
        p
    }

    pub fn project(&self, x: &Element, range: Range<usize>) -> Element {
        let mut out = Element::zeros(self.dim);
        for i in range {
            out[i] = x[i];
        }
        out
    }

    pub fn project_k(&self, x: &Element) -> Element {
        self.project(x, self.k())
    }

    pub fn project_kperp(&self, x: &Element) -> Element {
        self.project(x, self.kperp())
    }

    pub fn project_f(&self, x: &Element) -> Element {
        self.project(x, self.f())
    }

    pub fn project_kperp_f(&self, x: &Element) -> Element {
        self.project(x, self.kperp_f())
    }

    /// Euclidean norm of the coordinates outside `range`.
    pub fn off_norm(&self, x: &Element, range: Range<usize>) -> f64 {
        x.iter()
            .enumerate()
            .filter(|(i, _)| !range.contains(i))
            .map(|(_, v)| v * v)
            .sum::<f64>()
            .sqrt()
    }

    /// Residuals of the chain invariants, largest first violation wins.
    pub fn validate(&self, alg: &LieAlgebra) -> ChainReport {
        let dim = self.dim;
        let mut k_abelian = 0.0_f64;
        for i in self.k() {
            for j in self.k() {
                k_abelian = k_abelian.max(alg.commutator(&unit(dim, i), &unit(dim, j)).amax());
            }
        }
        let mut closure = 0.0_f64;
        for i in self.f() {
            for j in self.f() {
                let c = alg.commutator(&unit(dim, i), &unit(dim, j));
                closure = closure.max(self.off_norm(&c, self.f()));
            }
        }
        let g = alg.gram();
        let mut orthogonality = 0.0_f64;
        let blocks = [self.k(), self.kperp_f(), self.fperp()];
        for (bi, r1) in blocks.iter().enumerate() {
            for r2 in blocks.iter().skip(bi + 1) {
                for i in r1.clone() {
                    for j in r2.clone() {
                        orthogonality = orthogonality.max(g[(i, j)].abs());
                    }
                }
            }
        }
        let det = |r: Range<usize>| g.view((r.start, r.start), (r.len(), r.len())).determinant();
        ChainReport {
            k_abelian,
            f_closure: closure,
            block_orthogonality: orthogonality,
            k_form_det: det(self.k()),
            f_form_det: det(self.f()),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ChainReport {
    pub k_abelian: f64,
    pub f_closure: f64,
    pub block_orthogonality: f64,
    pub k_form_det: f64,
    pub f_form_det: f64,
}

impl ChainReport {
    pub fn is_valid(&self, tol: f64) -> bool {
        self.k_abelian <= tol
            && self.f_closure <= tol
            && self.block_orthogonality <= tol
            && self.k_form_det.abs() > tol
            && self.f_form_det.abs() > tol
    }
}
