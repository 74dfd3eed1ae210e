//! Small dense linear-algebra helpers shared across modules.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

use crate::{CMatrix, Operator};

const SVD_MAX_ITER: usize = 10_000;

/// Singular values, or `None` for non-finite input or a stalled iteration.
/// nalgebra's default SVD never gives up, so NaN input would spin forever.
fn singular_values(op: &Operator) -> Option<DVector<f64>> {
    if op.iter().any(|x| !x.is_finite()) {
        return None;
    }
    if let Some(svd) = op.clone().try_svd(false, false, f64::EPSILON, SVD_MAX_ITER) {
        return Some(svd.singular_values);
    }
    // Fallback: the eigenvalues of [[0, A], [Aᵀ, 0]] are ±σ.
    let (m, n) = op.shape();
    let mut dilation = Operator::zeros(m + n, m + n);
    dilation.view_mut((0, m), (m, n)).copy_from(op);
    dilation.view_mut((m, 0), (n, m)).copy_from(&op.transpose());
    let eig = SymmetricEigen::try_new(dilation, f64::EPSILON, SVD_MAX_ITER)?;
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    vals.truncate(m.min(n));
    vals.iter_mut().for_each(|x| *x = x.max(0.0));
    Some(DVector::from_vec(vals))
}

/// Largest singular value; NaN for non-finite input.
pub fn spectral_norm(op: &Operator) -> f64 {
    if op.is_empty() {
        return 0.0;
    }
    singular_values(op).map_or(f64::NAN, |sv| sv.max())
}

/// 2-norm condition number; `inf` for singular matrices.
pub fn condition_number(op: &Operator) -> f64 {
    if op.is_empty() {
        return 1.0;
    }
    let Some(sv) = singular_values(op) else {
        return f64::INFINITY;
    };
    let (max, min) = (sv.max(), sv.min());
    if min == 0.0 || !min.is_finite() {
        f64::INFINITY
    } else {
        max / min
    }
}

/// `‖A⁻¹‖ = 1 / σ_min(A)`; `inf` for singular matrices.
pub fn inverse_norm(op: &Operator) -> f64 {
    if op.is_empty() {
        return 1.0;
    }
    let Some(sv) = singular_values(op) else {
        return f64::INFINITY;
    };
    let min = sv.min();
    if min == 0.0 || !min.is_finite() {
        f64::INFINITY
    } else {
        1.0 / min
    }
}

pub fn max_abs(op: &Operator) -> f64 {
    op.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// `Re tr(AB)` without forming the product.
pub fn re_trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let x = a[(i, j)] * b[(j, i)];
            acc += x.re;
        }
    }
    acc
}

pub fn to_complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| Complex::new(x, 0.0))
}

pub fn block_diag(block: &CMatrix, copies: usize) -> CMatrix {
    let m = block.nrows();
    let mut out = CMatrix::zeros(m * copies, m * copies);
    for c in 0..copies {
        out.view_mut((c * m, c * m), (m, m)).copy_from(block);
    }
    out
}

/// Unit coefficient vector.
pub fn unit(dim: usize, i: usize) -> DVector<f64> {
    let mut e = DVector::zeros(dim);
    e[i] = 1.0;
    e
}

/// Embeds a principal diagonal block back into a `dim × dim` zero operator.
pub fn embed_block(dim: usize, start: usize, block: &Operator) -> Operator {
    let mut out = Operator::zeros(dim, dim);
    out.view_mut((start, start), block.shape()).copy_from(block);
    out
}
