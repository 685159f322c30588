use ndarray::{Array1, Array2};

use super::DenseMatrix;
use crate::error::{Error, Result};

/// Sweep cap for the cyclic Jacobi iteration.
pub const MAX_JACOBI_SWEEPS: usize = 100;

/// Eigen-decomposition of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Descending.
    pub values: Array1<f64>,
    /// Orthonormal columns, `vectors.column(i)` pairs with `values[i]`.
    pub vectors: DenseMatrix,
}

/// Cyclic Jacobi eigensolver for symmetric matrices.
///
/// The input must be symmetric to `1e-10` relative to its largest entry.
pub fn sym_eig(c: &DenseMatrix) -> Result<SymmetricEigen> {
    let n = c.nrows();
    if c.ncols() != n {
        return Err(Error::Dimension(format!("sym_eig: matrix is {:?}", c.dim())));
    }
    if c.iter().any(|v| !v.is_finite()) {
        return Err(Error::Contract("sym_eig: non-finite entry".into()));
    }
    let scale = c.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    for i in 0..n {
        for j in 0..i {
            if (c[[i, j]] - c[[j, i]]).abs() > 1e-10 * scale {
                return Err(Error::Contract(format!(
                    "sym_eig: asymmetric at ({i}, {j}): {} vs {}",
                    c[[i, j]],
                    c[[j, i]]
                )));
            }
        }
    }

    let mut a = c.clone();
    // Work on the exactly symmetric part.
    for i in 0..n {
        for j in 0..i {
            let m = 0.5 * (a[[i, j]] + a[[j, i]]);
            a[[i, j]] = m;
            a[[j, i]] = m;
        }
    }
    let mut v = Array2::<f64>::eye(n);
    let total = a.iter().map(|x| x * x).sum::<f64>().sqrt();

    let mut converged = n < 2 || total == 0.0;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_JACOBI_SWEEPS {
            let off = off_diagonal(&a);
            return Err(Error::Numerical(format!(
                "sym_eig: no convergence after {MAX_JACOBI_SWEEPS} sweeps, off-diagonal norm {off:e} (matrix norm {total:e})"
            )));
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[[p, q]];
                if apq == 0.0 {
                    continue;
                }
                let app = a[[p, p]];
                let aqq = a[[q, q]];
                // Rotation annihilating a[p][q] (Golub & Van Loan, sym.schur2).
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;

                for k in 0..n {
                    let akp = a[[k, p]];
                    let akq = a[[k, q]];
                    a[[k, p]] = cs * akp - sn * akq;
                    a[[k, q]] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let apk = a[[p, k]];
                    let aqk = a[[q, k]];
                    a[[p, k]] = cs * apk - sn * aqk;
                    a[[q, k]] = sn * apk + cs * aqk;
                }
                a[[p, q]] = 0.0;
                a[[q, p]] = 0.0;
                for k in 0..n {
                    let vkp = v[[k, p]];
                    let vkq = v[[k, q]];
                    v[[k, p]] = cs * vkp - sn * vkq;
                    v[[k, q]] = sn * vkp + cs * vkq;
                }
            }
        }
        converged = off_diagonal(&a) <= f64::EPSILON * total;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[[j, j]].total_cmp(&a[[i, i]]));
    let values = Array1::from_iter(order.iter().map(|&i| a[[i, i]]));
    let mut vectors = Array2::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        vectors.column_mut(dst).assign(&v.column(src));
    }
    Ok(SymmetricEigen { values, vectors })
}

fn off_diagonal(a: &DenseMatrix) -> f64 {
    let mut s = 0.0;
    for ((i, j), v) in a.indexed_iter() {
        if i != j {
            s += v * v;
        }
    }
    s.sqrt()
}
