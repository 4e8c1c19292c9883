//! Small dense Hermitian helpers on top of nalgebra.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Largest entrywise deviation `|m_ij - conj(m_ji)|`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigen-decomposition of the Hermitian part of `m`, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn min_hermitian_eigenvalue(m: &CMatrix) -> f64 {
    SymmetricEigen::new(hermitian_part(m))
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

pub fn trace(m: &CMatrix) -> Complex64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)]).sum()
}

/// Frobenius norm of `a - b` after zero-padding both to the larger size.
pub fn frobenius_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.nrows().max(b.nrows());
    let get = |m: &CMatrix, i: usize, j: usize| {
        if i < m.nrows() && j < m.ncols() {
            m[(i, j)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += (get(a, i, j) - get(b, i, j)).norm_sqr();
        }
    }
    acc.sqrt()
}

/// Zero-pad a square matrix to `dim`; returns a copy when already at least that size.
pub fn embed(m: &CMatrix, dim: usize) -> CMatrix {
    let n = m.nrows();
    if dim <= n {
        return m.clone();
    }
    let mut out = CMatrix::zeros(dim, dim);
    out.view_mut((0, 0), (n, n)).copy_from(m);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn eigenvalues_are_sorted() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0), c(2.0), c(2.0), c(1.0)]);
        let (vals, vecs) = hermitian_eigen(&m);
        assert!((vals[0] + 1.0).abs() < 1e-14);
        assert!((vals[1] - 3.0).abs() < 1e-14);
        let back = &vecs * CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(2, vals.iter().map(|&v| c(v)))) * vecs.adjoint();
        assert!(frobenius_distance(&back, &m) < 1e-13);
    }

    #[test]
    fn defect_detects_asymmetry() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0), c(2.0), c(0.0), c(1.0)]);
        assert_eq!(hermiticity_defect(&m), 2.0);
    }
}
