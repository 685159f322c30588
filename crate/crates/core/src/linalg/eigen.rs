//! General real eigenproblem.
//!
//! Eigenvalues: diagonal balancing, Householder reduction to upper Hessenberg
//! form, then Francis double-shift QR with deflation on small subdiagonals.
//! Eigenvectors: inverse iteration on the original matrix in complex
//! arithmetic, one solve per eigenvalue with positive or zero imaginary part;
//! the partner of a complex pair gets the conjugate vector.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use super::{ComplexEigenPairs, DenseMatrix};
use crate::error::{Error, Result};

/// Iteration cap per eigenvalue in the shifted QR sweep.
pub const MAX_QR_ITERATIONS: usize = 60;

const INVERSE_ITERATIONS: usize = 3;

/// Eigenvalues and unit-norm eigenvectors of a real square matrix.
pub fn nonsym_eig(a: &DenseMatrix) -> Result<ComplexEigenPairs> {
    let n = a.nrows();
    let values = eigenvalues(a)?;
    let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();

    let mut vectors = Array2::<Complex64>::zeros((n, n));
    let mut done = vec![false; n];
    for j in 0..n {
        if done[j] {
            continue;
        }
        let mu = values[j];
        // Earlier vectors for (numerically) the same eigenvalue, to start
        // subsequent copies in an independent direction.
        let cluster: Vec<Array1<Complex64>> = (0..j)
            .filter(|&i| (values[i] - mu).norm() <= 1e-8 * norm.max(1.0))
            .map(|i| vectors.column(i).to_owned())
            .collect();
        let x = inverse_iteration(a, mu, norm, &cluster);
        vectors.column_mut(j).assign(&x);
        done[j] = true;
        if mu.im != 0.0 {
            if let Some(k) = (j + 1..n).find(|&k| !done[k] && values[k] == mu.conj()) {
                vectors.column_mut(k).assign(&x.mapv(|z| z.conj()));
                done[k] = true;
            }
        }
    }

    Ok(ComplexEigenPairs { values, vectors })
}

/// Eigenvalues of a real square matrix. Complex pairs appear adjacent, the
/// member with negative imaginary part first, and are exact conjugates.
pub fn eigenvalues(a: &DenseMatrix) -> Result<Vec<Complex64>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::Dimension(format!("eigenproblem on {:?} matrix", a.dim())));
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::Contract("eigenproblem: non-finite entry".into()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = a.to_owned();
    balance(&mut h);
    hessenberg(&mut h);
    hqr(&mut h)
}

/// Diagonal similarity scaling by powers of two so rows and columns have
/// comparable norms.
fn balance(a: &mut DenseMatrix) {
    const RADIX: f64 = 2.0;
    let n = a.nrows();
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[[j, i]].abs();
                    r += a[[i, j]].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 0..n {
                        a[[i, j]] *= g;
                    }
                    for j in 0..n {
                        a[[j, i]] *= f;
                    }
                }
            }
        }
    }
}

/// In-place Householder reduction to upper Hessenberg form.
fn hessenberg(a: &mut DenseMatrix) {
    let n = a.nrows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let len = n - k - 1;
        let mut v: Vec<f64> = (0..len).map(|i| a[[k + 1 + i, k]]).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if v[0] >= 0.0 { -norm } else { norm };
        v[0] -= alpha;
        let vn = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if vn == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= vn);

        // A ← H A
        for j in 0..n {
            let dot: f64 = (0..len).map(|i| v[i] * a[[k + 1 + i, j]]).sum();
            for i in 0..len {
                a[[k + 1 + i, j]] -= 2.0 * v[i] * dot;
            }
        }
        // A ← A H
        for i in 0..n {
            let dot: f64 = (0..len).map(|j| a[[i, k + 1 + j]] * v[j]).sum();
            for j in 0..len {
                a[[i, k + 1 + j]] -= 2.0 * dot * v[j];
            }
        }
        a[[k + 1, k]] = alpha;
        for i in k + 2..n {
            a[[i, k]] = 0.0;
        }
    }
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix (destroys `a`).
fn hqr(a: &mut DenseMatrix) -> Result<Vec<Complex64>> {
    let n = a.nrows();
    let mut wr = vec![0.0; n];
    let mut wi = vec![0.0; n];

    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[[i, j]].abs();
        }
    }

    let mut nn = n as isize - 1;
    let mut t = 0.0;
    while nn >= 0 {
        let mut its = 0;
        loop {
            let nu = nn as usize;
            // Find the lowest negligible subdiagonal.
            let mut l = nu;
            while l >= 1 {
                let mut s = a[[l - 1, l - 1]].abs() + a[[l, l]].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[[l, l - 1]].abs() <= f64::EPSILON * s {
                    a[[l, l - 1]] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[[nu, nu]];
            if l == nu {
                wr[nu] = x + t;
                wi[nu] = 0.0;
                nn -= 1;
                break;
            }
            let mut y = a[[nu - 1, nu - 1]];
            let mut w = a[[nu, nu - 1]] * a[[nu - 1, nu]];
            if l + 1 == nu {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let mut z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    z = p + sign(z, p);
                    wr[nu - 1] = x + z;
                    wr[nu] = x + z;
                    if z != 0.0 {
                        wr[nu] = x - w / z;
                    }
                    wi[nu - 1] = 0.0;
                    wi[nu] = 0.0;
                } else {
                    wr[nu - 1] = x + p;
                    wr[nu] = x + p;
                    wi[nu - 1] = -z;
                    wi[nu] = z;
                }
                nn -= 2;
                break;
            }
            if its == MAX_QR_ITERATIONS {
                return Err(Error::Numerical(format!(
                    "shifted QR did not converge: eigenvalue {} of {n} still coupled after {MAX_QR_ITERATIONS} iterations (subdiagonal {:e})",
                    nu + 1,
                    a[[nu, nu - 1]]
                )));
            }
            if its == 10 || its == 20 || its == 40 {
                // Exceptional shift.
                t += x;
                for i in 0..=nu {
                    a[[i, i]] -= x;
                }
                let s = a[[nu, nu - 1]].abs() + a[[nu - 1, nu - 2]].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;

            // Look for two consecutive small subdiagonal elements.
            let mut m = nu - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = a[[m, m]];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[[m + 1, m]] + a[[m, m + 1]];
                q = a[[m + 1, m + 1]] - z - rr - ss;
                r = a[[m + 2, m + 1]];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[[m, m - 1]].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[[m - 1, m - 1]].abs() + z.abs() + a[[m + 1, m + 1]].abs());
                if u <= f64::EPSILON * v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nu {
                a[[i, i - 2]] = 0.0;
                if i != m + 2 {
                    a[[i, i - 3]] = 0.0;
                }
            }

            // Double QR step on rows l..=nu, columns m..=nu.
            let mut xk = 0.0;
            for k in m..nu {
                if k != m {
                    p = a[[k, k - 1]];
                    q = a[[k + 1, k - 1]];
                    r = if k + 1 != nu { a[[k + 2, k - 1]] } else { 0.0 };
                    xk = p.abs() + q.abs() + r.abs();
                    if xk != 0.0 {
                        p /= xk;
                        q /= xk;
                        r /= xk;
                    }
                }
                let s = sign((p * p + q * q + r * r).sqrt(), p);
                if s == 0.0 {
                    continue;
                }
                if k == m {
                    if l != m {
                        a[[k, k - 1]] = -a[[k, k - 1]];
                    }
                } else {
                    a[[k, k - 1]] = -s * xk;
                }
                p += s;
                let xx = p / s;
                let yy = q / s;
                let zz = r / s;
                q /= p;
                r /= p;
                for j in k..=nu {
                    let mut pp = a[[k, j]] + q * a[[k + 1, j]];
                    if k + 1 != nu {
                        pp += r * a[[k + 2, j]];
                        a[[k + 2, j]] -= pp * zz;
                    }
                    a[[k + 1, j]] -= pp * yy;
                    a[[k, j]] -= pp * xx;
                }
                let mmin = if nu < k + 3 { nu } else { k + 3 };
                for i in l..=mmin {
                    let mut pp = xx * a[[i, k]] + yy * a[[i, k + 1]];
                    if k + 1 != nu {
                        pp += zz * a[[i, k + 2]];
                        a[[i, k + 2]] -= pp * r;
                    }
                    a[[i, k + 1]] -= pp * q;
                    a[[i, k]] -= pp;
                }
            }
        }
    }

    Ok(wr
        .into_iter()
        .zip(wi)
        .map(|(re, im)| Complex64::new(re, im))
        .collect())
}

/// Unit eigenvector for `mu` by inverse iteration on `(A − σI)`, `σ` a hair
/// away from `mu` so the factorization stays nonsingular.
fn inverse_iteration(
    a: &DenseMatrix,
    mu: Complex64,
    norm: f64,
    previous: &[Array1<Complex64>],
) -> Array1<Complex64> {
    let n = a.nrows();
    let eps = f64::EPSILON * norm.max(f64::MIN_POSITIVE);
    let sigma = mu + Complex64::new(eps, 0.0);
    let lu = ComplexLu::new(a, sigma, eps);

    // Deterministic start vector, varied per cluster member.
    let offset = previous.len() as f64;
    let mut x = Array1::from_iter(
        (0..n).map(|i| Complex64::new(1.0 + ((i as f64 + 1.0) * (0.618 + offset)).sin() * 0.5, 0.0)),
    );
    orthogonalize(&mut x, previous);
    normalize(&mut x);
    for _ in 0..INVERSE_ITERATIONS {
        x = lu.solve(&x);
        orthogonalize(&mut x, previous);
        normalize(&mut x);
    }
    if mu.im == 0.0 {
        // Rotate to a real vector: make the largest entry real and positive.
        let big = x
            .iter()
            .copied()
            .max_by(|p, q| p.norm().total_cmp(&q.norm()))
            .unwrap_or(Complex64::new(1.0, 0.0));
        let phase = big.conj() / big.norm();
        x.mapv_inplace(|z| Complex64::new((z * phase).re, 0.0));
        normalize(&mut x);
    }
    x
}

fn orthogonalize(x: &mut Array1<Complex64>, basis: &[Array1<Complex64>]) {
    for b in basis {
        let proj: Complex64 = b.iter().zip(x.iter()).map(|(bi, xi)| bi.conj() * xi).sum();
        x.zip_mut_with(b, |xi, bi| *xi -= proj * bi);
    }
}

fn normalize(x: &mut Array1<Complex64>) {
    let n = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 && n.is_finite() {
        x.mapv_inplace(|z| z / n);
    } else {
        x.fill(Complex64::new(0.0, 0.0));
        x[0] = Complex64::new(1.0, 0.0);
    }
}

/// LU with partial pivoting of `A − σI`.
struct ComplexLu {
    lu: Array2<Complex64>,
    perm: Vec<usize>,
}

impl ComplexLu {
    fn new(a: &DenseMatrix, sigma: Complex64, tiny: f64) -> Self {
        let n = a.nrows();
        let mut lu = a.mapv(|v| Complex64::new(v, 0.0));
        for i in 0..n {
            lu[[i, i]] -= sigma;
        }
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| lu[[i, k]].norm().total_cmp(&lu[[j, k]].norm()))
                .unwrap_or(k);
            if p != k {
                for j in 0..n {
                    let tmp = lu[[k, j]];
                    lu[[k, j]] = lu[[p, j]];
                    lu[[p, j]] = tmp;
                }
                perm.swap(k, p);
            }
            if lu[[k, k]].norm() < tiny {
                lu[[k, k]] = Complex64::new(tiny, 0.0);
            }
            let pivot = lu[[k, k]];
            for i in k + 1..n {
                let f = lu[[i, k]] / pivot;
                lu[[i, k]] = f;
                if f != Complex64::new(0.0, 0.0) {
                    for j in k + 1..n {
                        let d = f * lu[[k, j]];
                        lu[[i, j]] -= d;
                    }
                }
            }
        }
        Self { lu, perm }
    }

    fn solve(&self, b: &Array1<Complex64>) -> Array1<Complex64> {
        let n = b.len();
        let mut y: Array1<Complex64> = Array1::from_iter(self.perm.iter().map(|&p| b[p]));
        for i in 0..n {
            for j in 0..i {
                let d = self.lu[[i, j]] * y[j];
                y[i] -= d;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let d = self.lu[[i, j]] * y[j];
                y[i] -= d;
            }
            y[i] /= self.lu[[i, i]];
        }
        y
    }
}
