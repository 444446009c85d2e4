//! Hermitian eigendecomposition and the matrix functions built on it.

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use super::{c64, CMatrix, Operator, STRUCT_TOL};
use crate::error::{QError, Result};

/// Eigenvalues threshold below which a PSD matrix is treated as zero.
const CLAMP_TOL: f64 = 1e-12;

/// Eigenvalues (ascending) and column eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let n = m.nrows();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    hermitian_eigen(m).0
}

/// Applies `f` to the spectrum of a Hermitian matrix.
pub fn spectral_map<F>(m: &CMatrix, f: F) -> CMatrix
where
    F: Fn(f64) -> Complex64,
{
    let (values, vectors) = hermitian_eigen(m);
    let n = m.nrows();
    let mut scaled = vectors.clone();
    for (c, &lambda) in values.iter().enumerate() {
        let fx = f(lambda);
        for r in 0..n {
            scaled[(r, c)] *= fx;
        }
    }
    scaled * vectors.adjoint()
}

/// Square root of a positive semidefinite matrix. Eigenvalues in
/// (−1e-12, 0) are clamped to zero.
pub fn psd_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let (values, _) = hermitian_eigen(m);
    if let Some(&min) = values.first() {
        if min < -CLAMP_TOL {
            return Err(QError::NotPositive {
                min_eigenvalue: min,
            });
        }
    }
    Ok(spectral_map(m, |x| c64(x.max(0.0).sqrt(), 0.0)))
}

/// Number of eigenvalues larger than `tol`.
pub fn numerical_rank(m: &CMatrix, tol: f64) -> usize {
    hermitian_eigenvalues(m)
        .iter()
        .filter(|&&x| x > tol)
        .count()
}

/// exp(scale · h) for Hermitian `h`, computed from the spectral
/// decomposition. The result is unitary whenever `scale` is purely
/// imaginary.
pub fn herm_exp(h: &Operator, scale: Complex64) -> Result<Operator> {
    let deviation = h.hermitian_deviation();
    if deviation > STRUCT_TOL {
        return Err(QError::NotHermitian { deviation });
    }
    let mat = spectral_map(h.mat(), |x| (scale * x).exp());
    Operator::new(h.shape().clone(), mat)
}
