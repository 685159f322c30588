use ndarray::Array2;

use super::DenseMatrix;
use crate::error::{Error, Result};

/// Solves `R·X = B` for upper-triangular `R` by back-substitution.
///
/// Every pivot must exceed `rank_tol · max|diag(R)|` in magnitude; the first
/// one that does not is reported as [`Error::Singular`].
pub fn tri_solve(r: &DenseMatrix, b: &DenseMatrix, rank_tol: f64) -> Result<DenseMatrix> {
    let k = r.nrows();
    if r.ncols() != k || b.nrows() != k {
        return Err(Error::Dimension(format!(
            "tri_solve: R is {:?}, B is {:?}",
            r.dim(),
            b.dim()
        )));
    }
    let scale = r.diag().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let tol = rank_tol * scale;
    for (i, &d) in r.diag().iter().enumerate() {
        if !(d.abs() > tol) || d == 0.0 {
            return Err(Error::Singular { index: i, value: d, tol });
        }
    }

    let mut x = Array2::zeros(b.dim());
    for c in 0..b.ncols() {
        for i in (0..k).rev() {
            let mut acc = b[[i, c]];
            for j in i + 1..k {
                acc -= r[[i, j]] * x[[j, c]];
            }
            x[[i, c]] = acc / r[[i, i]];
        }
    }
    Ok(x)
}
