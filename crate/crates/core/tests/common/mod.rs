//! Reference computations kept apart from the library's own kernels.

#![allow(dead_code)]

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Array2<f64> {
    Array2::from_shape_fn((m, n), |_| 2.0 * rng.random::<f64>() - 1.0)
}

/// Monic characteristic polynomial coefficients `c[0..=n]` (`c[0] = 1`) of
/// `det(zI − A)` by the Faddeev–LeVerrier recursion.
pub fn char_poly(a: &Array2<f64>) -> Vec<f64> {
    let n = a.nrows();
    let mut c = vec![0.0; n + 1];
    c[0] = 1.0;
    let mut m = Array2::<f64>::zeros((n, n));
    for k in 1..=n {
        let mut next = a.dot(&m);
        for i in 0..n {
            next[[i, i]] += c[k - 1];
        }
        m = next;
        let am = a.dot(&m);
        c[k] = -am.diag().sum() / k as f64;
    }
    c
}

fn horner(c: &[f64], z: Complex64) -> Complex64 {
    c.iter().fold(Complex64::new(0.0, 0.0), |acc, &ci| acc * z + ci)
}

/// All roots of a monic polynomial by Weierstrass (Durand–Kerner)
/// iteration followed by Newton polishing.
pub fn poly_roots(c: &[f64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let bound = 1.0 + c[1..].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * bound * 0.5).collect();
    for _ in 0..2000 {
        let mut delta = 0.0_f64;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = horner(c, z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * bound {
            break;
        }
    }
    let deriv: Vec<f64> = c[..n].iter().enumerate().map(|(k, &ck)| ck * (n - k) as f64).collect();
    for zi in &mut z {
        for _ in 0..3 {
            let d = horner(&deriv, *zi);
            if d.norm() > 0.0 {
                *zi -= horner(c, *zi) / d;
            }
        }
    }
    z
}

/// Largest distance between two multisets of complex numbers under greedy
/// nearest matching.
pub fn match_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut left: Vec<Complex64> = b.to_vec();
    let mut worst = 0.0_f64;
    for x in a {
        let (k, d) = left
            .iter()
            .enumerate()
            .map(|(k, y)| (k, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        worst = worst.max(d);
        left.swap_remove(k);
    }
    worst
}

/// Thin SVD by one-sided Jacobi rotations: `(U, σ)` with `σ` descending.
pub fn jacobi_svd(a: &Array2<f64>) -> (Array2<f64>, Array1<f64>) {
    let (m, n) = a.dim();
    let mut w = a.clone();
    for _ in 0..100 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = w.column(p).dot(&w.column(p));
                let beta: f64 = w.column(q).dot(&w.column(q));
                let gamma: f64 = w.column(p).dot(&w.column(q));
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for i in 0..m {
                    let (x, y) = (w[[i, p]], w[[i, q]]);
                    w[[i, p]] = cs * x - sn * y;
                    w[[i, q]] = sn * x + cs * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<(usize, f64)> = (0..n).map(|j| (j, w.column(j).dot(&w.column(j)).sqrt())).collect();
    order.sort_by(|x, y| y.1.total_cmp(&x.1));
    let mut u = Array2::zeros((m, n));
    let mut s = Array1::zeros(n);
    for (k, &(j, sigma)) in order.iter().enumerate() {
        s[k] = sigma;
        if sigma > 0.0 {
            u.column_mut(k).assign(&(&w.column(j) / sigma));
        }
    }
    (u, s)
}
