use nalgebra::Complex;

use crate::error::{check_len, Error, Result};
use crate::linalg::{re_trace_product, unit};
use crate::{CMatrix, Element, Operator};

/// Self-dual Lie algebra given by a basis of matrices in a defining
/// representation.
///
/// The bilinear form is the real trace form `B(X, Y) = Re tr(XY)` of that
/// representation. Structure constants are stored as the adjoint matrices of
/// the basis elements: `ad_basis[a][(c, b)] = f^{ab}_c` with
/// `[T^a, T^b] = f^{ab}_c T^c`.
#[derive(Debug, Clone)]
pub struct LieAlgebra {
    label: String,
    block: usize,
    copies: usize,
    compact: bool,
    basis: Vec<CMatrix>,
    gram: Operator,
    gram_inv: Operator,
    ad_basis: Vec<Operator>,
}

/// Relative tolerance on closure of the basis under commutators.
const CLOSURE_TOL: f64 = 1e-12;

fn nonzeros(m: &CMatrix) -> Vec<(usize, usize, Complex<f64>)> {
    let mut out = Vec::new();
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let v = m[(i, j)];
            if v.re != 0.0 || v.im != 0.0 {
                out.push((i, j, v));
            }
        }
    }
    out
}

impl LieAlgebra {
    /// Builds an algebra from a basis of defining-representation matrices.
    ///
    /// `block` is the size of one block of the (block-diagonal) representation
    /// and `copies` the number of blocks. `compact` marks anti-Hermitian real
    /// forms, where diagonalisation is unitary.
    pub fn from_basis(
        label: impl Into<String>,
        block: usize,
        copies: usize,
        compact: bool,
        basis: Vec<CMatrix>,
    ) -> Result<Self> {
        let dim = basis.len();
        if dim == 0 {
            return Err(Error::InvalidArgument("empty basis".into()));
        }
        let size = block * copies;
        if let Some(bad) = basis.iter().find(|t| t.shape() != (size, size)) {
            return Err(Error::InvalidArgument(format!(
                "basis matrix has shape {:?}, expected {size}x{size}",
                bad.shape()
            )));
        }
        let gram = Operator::from_fn(dim, dim, |a, b| re_trace_product(&basis[a], &basis[b]));
        let gram_inv = gram.clone().try_inverse().ok_or_else(|| {
            Error::InvalidArgument("trace form is degenerate on the basis".into())
        })?;
        let mut alg = LieAlgebra {
            label: label.into(),
            block,
            copies,
            compact,
            basis,
            gram,
            gram_inv,
            ad_basis: Vec::new(),
        };
        // Catalog bases have a handful of nonzeros per matrix, so commutators
        // and their coordinates are computed on sparse entries.
        let sparse: Vec<Vec<(usize, usize, Complex<f64>)>> =
            alg.basis.iter().map(nonzeros).collect();
        let mut ad_basis = vec![Operator::zeros(dim, dim); dim];
        let mut comm = CMatrix::zeros(size, size);
        for a in 0..dim {
            for b in 0..dim {
                comm.fill(Complex::new(0.0, 0.0));
                for &(i, k, x) in &sparse[a] {
                    for &(l, j, y) in &sparse[b] {
                        if k == l {
                            comm[(i, j)] += x * y;
                        }
                        if j == i {
                            comm[(l, k)] -= y * x;
                        }
                    }
                }
                if comm.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
                    continue;
                }
                let rhs = Element::from_iterator(
                    dim,
                    sparse.iter().map(|t| {
                        t.iter()
                            .map(|&(i, j, v)| (v * comm[(j, i)]).re)
                            .sum::<f64>()
                    }),
                );
                let c = &alg.gram_inv * rhs;
                let mut back = comm.clone();
                for (ck, t) in c.iter().zip(&sparse) {
                    if *ck != 0.0 {
                        for &(i, j, v) in t {
                            back[(i, j)] -= v * *ck;
                        }
                    }
                }
                let err = back.norm();
                if err > CLOSURE_TOL * (1.0 + comm.norm()) {
                    return Err(Error::InvalidArgument(format!(
                        "basis not closed under commutators ([T{a}, T{b}] misses by {err:.3e})"
                    )));
                }
                ad_basis[a].set_column(b, &c);
            }
        }
        alg.ad_basis = ad_basis;
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Size of one block of the defining representation.
    pub fn block_size(&self) -> usize {
        self.block
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn is_compact(&self) -> bool {
        self.compact
    }

    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }

    pub fn gram(&self) -> &Operator {
        &self.gram
    }

    pub fn gram_inv(&self) -> &Operator {
        &self.gram_inv
    }

    /// `f^{ab}_c`.
    pub fn structure_constant(&self, a: usize, b: usize, c: usize) -> f64 {
        self.ad_basis[a][(c, b)]
    }

    /// Coefficients of the B-orthogonal projection of `m` onto `g`.
    pub fn coefficients(&self, m: &CMatrix) -> Element {
        let rhs = Element::from_iterator(
            self.dim(),
            self.basis.iter().map(|t| re_trace_product(t, m)),
        );
        &self.gram_inv * rhs
    }

    pub fn matrix_of(&self, x: &Element) -> CMatrix {
        let n = self.block * self.copies;
        let mut m = CMatrix::zeros(n, n);
        for (c, t) in x.iter().zip(&self.basis) {
            if *c != 0.0 {
                m += t * Complex::new(*c, 0.0);
            }
        }
        m
    }

    /// Bracket of two elements, checking dimensions.
    pub fn bracket(&self, x: &Element, y: &Element) -> Result<Element> {
        check_len(x, self.dim())?;
        check_len(y, self.dim())?;
        Ok(self.commutator(x, y))
    }

    /// Unchecked bracket `[x, y]`.
    pub fn commutator(&self, x: &Element, y: &Element) -> Element {
        self.ad(x) * y
    }

    /// Invariant form, checking dimensions.
    pub fn bilinear(&self, x: &Element, y: &Element) -> Result<f64> {
        check_len(x, self.dim())?;
        check_len(y, self.dim())?;
        Ok(self.form(x, y))
    }

    /// Unchecked `B(x, y)`.
    pub fn form(&self, x: &Element, y: &Element) -> f64 {
        (&self.gram * y).dot(x)
    }

    /// Matrix of `ad_x` on coefficient vectors.
    pub fn ad(&self, x: &Element) -> Operator {
        let dim = self.dim();
        let mut out = Operator::zeros(dim, dim);
        for (a, xa) in x.iter().enumerate() {
            if *xa != 0.0 {
                out += &self.ad_basis[a] * *xa;
            }
        }
        out
    }

    /// `e^{ad_x}` by scaling and squaring.
    pub fn exp_ad(&self, x: &Element) -> Operator {
        self.ad(x).exp()
    }

    /// B-adjoint `M*` with `B(Mx, y) = B(x, M*y)`.
    pub fn b_adjoint(&self, op: &Operator) -> Operator {
        &self.gram_inv * op.transpose() * &self.gram
    }

    /// Operator of `X ↦ g X g⁻¹` on coefficient vectors.
    pub fn conjugation_operator(&self, g: &CMatrix, g_inv: &CMatrix) -> Operator {
        let dim = self.dim();
        let mut out = Operator::zeros(dim, dim);
        for (b, t) in self.basis.iter().enumerate() {
            out.set_column(b, &self.coefficients(&(g * t * g_inv)));
        }
        out
    }

    /// Largest `|Σ_cyc f^{ab}_d f^{dc}_e|` over all index triples, checked
    /// in the equivalent form `ad_{[a,b]} = [ad_a, ad_b]`.
    pub fn jacobi_residual(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0_f64;
        for a in 0..dim {
            for b in 0..dim {
                let ab = self.ad_basis[a].column(b).into_owned();
                let lhs = self.ad(&ab);
                let rhs =
                    &self.ad_basis[a] * &self.ad_basis[b] - &self.ad_basis[b] * &self.ad_basis[a];
                worst = worst.max((lhs - rhs).amax());
            }
        }
        worst
    }

    /// Largest `|f^{ab}_c + f^{ba}_c|`.
    pub fn antisymmetry_residual(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0_f64;
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    worst = worst.max(
                        (self.structure_constant(a, b, c) + self.structure_constant(b, a, c)).abs(),
                    );
                }
            }
        }
        worst
    }

    /// Largest `|B([X,Y],Z) + B(Y,[X,Z])|` over basis triples.
    pub fn invariance_residual(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0_f64;
        for a in 0..dim {
            let ad = &self.ad_basis[a];
            // B(ad X ·, ·) + B(·, ad X ·) = ad^T G + G ad
            let m = ad.transpose() * &self.gram + &self.gram * ad;
            worst = worst.max(m.amax());
        }
        worst
    }

    /// Largest deviation between coefficient brackets and matrix commutators.
    pub fn representation_residual(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0_f64;
        for a in 0..dim {
            for b in 0..dim {
                let (ta, tb) = (&self.basis[a], &self.basis[b]);
                let comm = ta * tb - tb * ta;
                let via = self.matrix_of(&self.commutator(&unit(dim, a), &unit(dim, b)));
                worst = worst.max((via - comm).camax());
            }
        }
        worst
    }
}
