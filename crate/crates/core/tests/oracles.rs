mod common;

use common::*;
use jetmodes::linalg::{eigenvalues, nonsym_eig};
use ndarray::{array, Array2};
use num_complex::Complex64;

#[test]
fn char_poly_of_known_matrices() {
    // det(zI − A) = z² − 5z − 2 for [[1, 2], [3, 4]].
    assert_eq!(char_poly(&array![[1.0, 2.0], [3.0, 4.0]]), vec![1.0, -5.0, -2.0]);
    let roots = poly_roots(&[1.0, -6.0, 11.0, -6.0]);
    let want = [1.0, 2.0, 3.0].map(|r| Complex64::new(r, 0.0));
    assert!(match_distance(&roots, &want) < 1e-12);
    let roots = poly_roots(&[1.0, 0.0, 1.0]);
    assert!(match_distance(&roots, &[Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)]) < 1e-12);
}

#[test]
fn jacobi_svd_of_known_matrix() {
    let (u, s) = jacobi_svd(&array![[3.0, 0.0], [0.0, -4.0], [0.0, 0.0]]);
    assert!((s[0] - 4.0).abs() < 1e-14 && (s[1] - 3.0).abs() < 1e-14);
    assert!((u[[1, 0]].abs() - 1.0).abs() < 1e-14);
    let mut r = rng(9);
    let a = random_matrix(&mut r, 12, 5);
    let (u, s) = jacobi_svd(&a);
    let utu = u.t().dot(&u);
    for i in 0..5 {
        for j in 0..5 {
            let d = if i == j { 1.0 } else { 0.0 };
            assert!((utu[[i, j]] - d).abs() < 1e-12);
        }
    }
    let gram_trace: f64 = a.iter().map(|v| v * v).sum();
    assert!((s.iter().map(|v| v * v).sum::<f64>() - gram_trace).abs() < 1e-10);
}

#[test]
fn nonsym_eigenpairs_have_small_residuals() {
    let mut r = rng(6);
    for _ in 0..20 {
        let s = random_matrix(&mut r, 6, 6);
        let e = nonsym_eig(&s).unwrap();
        let norm = s.iter().map(|v| v * v).sum::<f64>().sqrt();
        let sc: Array2<Complex64> = s.mapv(|v| Complex64::new(v, 0.0));
        for (j, &mu) in e.values.iter().enumerate() {
            let x = e.vectors.column(j);
            let xn = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!((xn - 1.0).abs() < 1e-12);
            let res = sc.dot(&x) - x.mapv(|z| z * mu);
            let rn = res.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!(rn < 1e-8 * norm, "residual {rn:e}");
        }
        let want = poly_roots(&char_poly(&s));
        assert!(match_distance(&eigenvalues(&s).unwrap(), &want) < 1e-6);
    }
}
