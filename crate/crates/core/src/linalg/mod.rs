//! Dense kernels used by the decompositions.
//!
//! Matrices are `ndarray::Array2` in standard (row-major) layout. Everything
//! here is self-contained: cyclic Jacobi for symmetric problems, Householder
//! economy QR, back-substitution, and a Hessenberg / Francis double-shift QR
//! eigenvalue solver with inverse-iteration eigenvectors for general real
//! matrices.

mod eigen;
mod qr;
mod symmetric;
mod triangular;

use ndarray::Array2;
use num_complex::Complex64;

pub use eigen::{eigenvalues, nonsym_eig, MAX_QR_ITERATIONS};
pub use qr::qr_economy;
pub use symmetric::{sym_eig, SymmetricEigen, MAX_JACOBI_SWEEPS};
pub use triangular::tri_solve;

/// Real dense matrix, row-major.
pub type DenseMatrix = Array2<f64>;

/// Relative pivot threshold shared by the triangular solve and the DMD companion fit.
pub const DEFAULT_RANK_TOL: f64 = 1e-12;

/// Eigenvalues and unit-norm eigenvectors (columns) of a square matrix.
#[derive(Debug, Clone)]
pub struct ComplexEigenPairs {
    pub values: Vec<Complex64>,
    pub vectors: Array2<Complex64>,
}

pub fn frobenius(a: &DenseMatrix) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}
