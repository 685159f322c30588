use ndarray::{s, Array1, Array2};

use super::DenseMatrix;
use crate::error::{Error, Result};

/// Householder economy QR of an `m × k` matrix, `m ≥ k`.
///
/// Returns `Q` (`m × k`, orthonormal columns) and `R` (`k × k`, upper
/// triangular with non-negative diagonal).
pub fn qr_economy(a: &DenseMatrix) -> Result<(DenseMatrix, DenseMatrix)> {
    let (m, k) = a.dim();
    if m < k {
        return Err(Error::Dimension(format!(
            "qr_economy needs rows >= cols, got {m}x{k}"
        )));
    }
    let mut work = a.to_owned();
    let mut reflectors: Vec<Array1<f64>> = Vec::with_capacity(k);

    for j in 0..k {
        let x = work.slice(s![j.., j]);
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut v = x.to_owned();
        if norm > 0.0 {
            let alpha = if v[0] >= 0.0 { -norm } else { norm };
            v[0] -= alpha;
            let vn = v.iter().map(|t| t * t).sum::<f64>().sqrt();
            if vn > 0.0 {
                v /= vn;
            }
            // H = I − 2 v vᵀ on the trailing block.
            let mut block = work.slice_mut(s![j.., j..]);
            let w = v.dot(&block);
            for (mut row, &vi) in block.rows_mut().into_iter().zip(v.iter()) {
                row.scaled_add(-2.0 * vi, &w);
            }
        } else {
            v.fill(0.0);
        }
        reflectors.push(v);
    }

    let mut r = Array2::zeros((k, k));
    for i in 0..k {
        for j in i..k {
            r[[i, j]] = work[[i, j]];
        }
    }

    // Q = H_0 H_1 … H_{k−1} applied to the first k columns of the identity.
    let mut q = Array2::zeros((m, k));
    for i in 0..k {
        q[[i, i]] = 1.0;
    }
    for (j, v) in reflectors.iter().enumerate().rev() {
        let mut block = q.slice_mut(s![j.., ..]);
        let w = v.dot(&block);
        for (mut row, &vi) in block.rows_mut().into_iter().zip(v.iter()) {
            row.scaled_add(-2.0 * vi, &w);
        }
    }

    for i in 0..k {
        if r[[i, i]] < 0.0 {
            r.row_mut(i).mapv_inplace(|v| -v);
            q.column_mut(i).mapv_inplace(|v| -v);
        }
    }
    Ok((q, r))
}
