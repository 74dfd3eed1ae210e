use nalgebra::{Complex, DMatrix};

use crate::error::{check_len, Error, Result};
use crate::lie::Instance;
use crate::linalg::{block_diag, to_complex};
use crate::{CMatrix, Element, Operator};

/// Minimum gap between eigenvalues of `Q` (equivalently, minimum modulus of
/// `ad_Q` on `K⊥ ∩ F`) for `Q` to count as regular.
pub const REGULARITY_GAP: f64 = 1e-8;

/// Result of conjugating `Q ∈ F` into the Cartan subalgebra: `Ad_f Q = q`.
#[derive(Debug, Clone)]
pub struct Diagonalization {
    /// Cartan element in the open chamber of strictly decreasing diagonals.
    pub q: Element,
    /// `f` in the defining representation.
    pub conj: CMatrix,
    pub conj_inv: CMatrix,
    /// `Ad_f` on coefficient vectors.
    pub ad_f: Operator,
    pub ad_f_inv: Operator,
}

/// Conjugates a regular `Q ∈ F` into the Cartan subalgebra `K`.
///
/// For split forms the eigenvalues of `Q` must be real; complex pairs mean
/// `Q` is not conjugate into the split Cartan and yield a domain error.
pub fn diagonalize_to_cartan(inst: &Instance, big_q: &Element) -> Result<Diagonalization> {
    let alg = &inst.algebra;
    check_len(big_q, alg.dim())?;
    let scale = 1.0 + big_q.norm();
    let off = inst.chain.off_norm(big_q, inst.chain.f());
    if off > 1e-10 * scale {
        return Err(Error::NotInSubspace {
            subspace: "F",
            norm: off,
        });
    }
    let m = alg.block_size();
    let full = alg.matrix_of(big_q);
    let block = full.view((0, 0), (m, m)).into_owned();

    let (diag, v, v_inv) = if alg.is_compact() {
        diagonalize_anti_hermitian(&block)?
    } else {
        diagonalize_real(&block, scale)?
    };

    let gap = min_gap(&diag);
    if gap <= REGULARITY_GAP {
        return Err(Error::Degenerate {
            gap,
            threshold: REGULARITY_GAP,
        });
    }

    let conj = block_diag(&v_inv, alg.copies());
    let conj_inv = block_diag(&v, alg.copies());
    let ad_f = alg.conjugation_operator(&conj, &conj_inv);
    let ad_f_inv = alg.conjugation_operator(&conj_inv, &conj);
    Ok(Diagonalization {
        q: inst.cartan_from_diagonal(&diag),
        conj,
        conj_inv,
        ad_f,
        ad_f_inv,
    })
}

fn min_gap(diag: &[f64]) -> f64 {
    let mut gap = f64::INFINITY;
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            gap = gap.min((diag[i] - diag[j]).abs());
        }
    }
    gap
}

/// `Q = U (i μ) U*` with `μ` decreasing.
fn diagonalize_anti_hermitian(block: &CMatrix) -> Result<(Vec<f64>, CMatrix, CMatrix)> {
    let herm = block * Complex::new(0.0, 1.0);
    let eig = herm.symmetric_eigen();
    // Q = -i·(iQ), so the imaginary diagonal is -λ; decreasing -λ is increasing λ.
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let n = block.nrows();
    let mut u = CMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        u.set_column(col, &eig.eigenvectors.column(k));
    }
    let diag = order.iter().map(|&k| -eig.eigenvalues[k]).collect();
    let u_inv = u.adjoint();
    Ok((diag, u, u_inv))
}

fn diagonalize_real(block: &CMatrix, scale: f64) -> Result<(Vec<f64>, CMatrix, CMatrix)> {
    let real: DMatrix<f64> = block.map(|z| z.re);
    let eig = real.complex_eigenvalues();
    if let Some(z) = eig.iter().find(|z| z.im.abs() > 1e-9 * scale) {
        return Err(Error::Domain(format!(
            "eigenvalue {:.6}{:+.6}i is not real, so the element is not conjugate into the split Cartan",
            z.re, z.im
        )));
    }
    let mut vals: Vec<f64> = eig.iter().map(|z| z.re).collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    let gap = min_gap(&vals);
    if gap <= REGULARITY_GAP {
        return Err(Error::Degenerate {
            gap,
            threshold: REGULARITY_GAP,
        });
    }
    let n = real.nrows();
    let mut v = DMatrix::<f64>::zeros(n, n);
    for (col, lambda) in vals.iter().enumerate() {
        let shifted = &real - DMatrix::<f64>::identity(n, n) * *lambda;
        let svd = shifted.svd(false, true);
        let v_t = svd.v_t.expect("requested right singular vectors");
        let (k, _) = svd
            .singular_values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty");
        let vec = v_t.row(k).transpose();
        v.set_column(col, &(vec.normalize()));
    }
    let v_inv = v.clone().try_inverse().ok_or(Error::Degenerate {
        gap,
        threshold: REGULARITY_GAP,
    })?;
    Ok((vals, to_complex(&v), to_complex(&v_inv)))
}
