//! Proper orthogonal decomposition by the method of snapshots.
//!
//! With fluctuations `U = S − mean` (`M × N`), the temporal Gram matrix
//! `C = UᵀU` is diagonalised, `C Aⁱ = λⁱ Aⁱ`, and each mode is the normalised
//! combination `φⁱ = U Aⁱ / ‖U Aⁱ‖`. No `1/M` or `1/N` factor is applied, so
//! eigenvalues carry the raw sum-of-squares scale; energy fractions and modes
//! do not depend on it.

use log::warn;
use ndarray::{Array1, Array2, ArrayView2, Axis};

use crate::error::{Error, Result};
use crate::field::SnapshotMatrix;
use crate::linalg::{sym_eig, DenseMatrix};

/// Slack below zero tolerated on Gram eigenvalues before clipping.
pub const EIGEN_SLACK: f64 = 1e-10;

/// Eigenvalues at or below this fraction of the largest are treated as zero.
pub const DEGENERATE_REL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct PodResult {
    /// Temporal mean, length `M`.
    pub mean: Array1<f64>,
    /// Descending, clipped at zero.
    pub eigenvalues: Array1<f64>,
    /// `M × N`, column `i` is `φᵢ`.
    pub modes: DenseMatrix,
    /// `N × N`, entry `(i, n)` is `aᵢ(tₙ) = φᵢᵀ Uⁿ`.
    pub time_coefficients: DenseMatrix,
    pub energy_fractions: Array1<f64>,
    /// Mode `i` has a numerically zero eigenvalue and was left unnormalised.
    pub degenerate: Vec<bool>,
}

impl PodResult {
    pub fn n_modes(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Smallest `k` whose leading modes carry at least `fraction` of the energy.
    pub fn modes_for_energy(&self, fraction: f64) -> Option<usize> {
        let mut acc = 0.0;
        for (i, f) in self.energy_fractions.iter().enumerate() {
            acc += f;
            if acc >= fraction - 1e-12 {
                return Some(i + 1);
            }
        }
        None
    }
}

/// Row-wise temporal mean and the centred matrix.
pub fn fluctuations(s: ArrayView2<'_, f64>) -> Result<(DenseMatrix, Array1<f64>)> {
    let n = s.ncols();
    if n < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 snapshots, got {n}"
        )));
    }
    let mean = s.sum_axis(Axis(1)) / n as f64;
    let mut u = s.to_owned();
    for mut col in u.columns_mut() {
        col -= &mean;
    }
    Ok((u, mean))
}

/// Symmetrised Gram matrix `UᵀU`.
pub fn autocovariance(u: ArrayView2<'_, f64>) -> DenseMatrix {
    let c = u.t().dot(&u);
    (&c + &c.t()) * 0.5
}

/// Fractions `λᵢ / Σλ`; all zero when the total is zero.
pub fn energy_fractions(eigenvalues: &[f64]) -> Result<Array1<f64>> {
    if let Some(bad) = eigenvalues.iter().find(|&&l| !(l >= -EIGEN_SLACK)) {
        return Err(Error::Contract(format!("negative eigenvalue {bad:e}")));
    }
    let clipped: Array1<f64> = eigenvalues.iter().map(|l| l.max(0.0)).collect();
    let total = clipped.sum();
    if total == 0.0 {
        return Ok(Array1::zeros(eigenvalues.len()));
    }
    Ok(clipped / total)
}

pub fn decompose(s: &SnapshotMatrix) -> Result<PodResult> {
    decompose_matrix(s.data().view())
}

/// POD of an arbitrary `M × N` snapshot matrix.
pub fn decompose_matrix(s: ArrayView2<'_, f64>) -> Result<PodResult> {
    let (m, n) = s.dim();
    let (u, mean) = fluctuations(s)?;
    if m < n {
        warn!("fewer rows ({m}) than snapshots ({n}); trailing modes are degenerate");
    }
    let c = autocovariance(u.view());
    let eig = sym_eig(&c)?;

    let lambda_max = eig.values.iter().fold(0.0_f64, |a, &b| a.max(b));
    let mut eigenvalues = Array1::zeros(n);
    for (i, &l) in eig.values.iter().enumerate() {
        if l < -EIGEN_SLACK * lambda_max.max(1.0) {
            return Err(Error::Numerical(format!(
                "Gram eigenvalue {i} is {l:e}, below the clipping slack"
            )));
        }
        eigenvalues[i] = l.max(0.0);
    }

    let mut modes = u.dot(&eig.vectors);
    let mut degenerate = vec![false; n];
    for (i, mut phi) in modes.columns_mut().into_iter().enumerate() {
        let norm = phi.dot(&phi).sqrt();
        if eigenvalues[i] <= DEGENERATE_REL * lambda_max || norm == 0.0 {
            degenerate[i] = true;
        } else {
            phi /= norm;
        }
        let pivot = phi.iter().fold(0.0_f64, |best, &v| if v.abs() > best.abs() { v } else { best });
        if pivot < 0.0 {
            phi.mapv_inplace(|v| -v);
        }
    }

    let time_coefficients = modes.t().dot(&u);
    let energy_fractions = energy_fractions(eigenvalues.as_slice().expect("contiguous"))?;
    Ok(PodResult {
        mean,
        eigenvalues,
        modes,
        time_coefficients,
        energy_fractions,
        degenerate,
    })
}

/// Rank-`k` reconstruction of the fluctuations, `Σ_{i<k} φᵢ aᵢ(tₙ)`.
pub fn reconstruct(result: &PodResult, k: usize) -> Result<DenseMatrix> {
    let n = result.n_modes();
    if k < 1 || k > n {
        return Err(Error::Contract(format!("k = {k} outside 1..={n}")));
    }
    let phi = result.modes.slice(ndarray::s![.., ..k]);
    let a = result.time_coefficients.slice(ndarray::s![..k, ..]);
    Ok(phi.dot(&a))
}

/// Adds the mean back onto a fluctuation reconstruction.
pub fn with_mean(result: &PodResult, fluct: &DenseMatrix) -> DenseMatrix {
    let mut out: Array2<f64> = fluct.clone();
    for mut col in out.columns_mut() {
        col += &result.mean;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frobenius;
    use ndarray::array;
    use proptest::prelude::*;

    #[test]
    fn fluctuation_examples() {
        let (u, mean) = fluctuations(array![[1.0, 3.0], [2.0, 2.0]].view()).unwrap();
        assert_eq!(mean, array![2.0, 2.0]);
        assert_eq!(u, array![[-1.0, 1.0], [0.0, 0.0]]);

        let (u, _) = fluctuations(array![[4.0, 4.0, 4.0], [-1.0, -1.0, -1.0]].view()).unwrap();
        assert!(u.iter().all(|&v| v == 0.0));

        assert!(matches!(
            fluctuations(array![[1.0], [2.0]].view()),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn autocovariance_examples() {
        let c = autocovariance(array![[0.0, 0.0], [1.0, -1.0]].view());
        assert_eq!(c, array![[1.0, -1.0], [-1.0, 1.0]]);
        assert!(autocovariance(Array2::<f64>::zeros((3, 2)).view()).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn two_snapshot_toy() {
        let s = array![[1.0, 1.0], [1.0, -1.0]];
        let r = decompose_matrix(s.view()).unwrap();
        assert_eq!(r.mean, array![1.0, 0.0]);
        assert!((r.eigenvalues[0] - 2.0).abs() < 1e-14);
        assert!(r.eigenvalues[1].abs() < 1e-14);
        assert!(r.modes[[0, 0]].abs() < 1e-14 && (r.modes[[1, 0]] - 1.0).abs() < 1e-14);
        assert!((r.time_coefficients[[0, 0]] - 1.0).abs() < 1e-14);
        assert!((r.time_coefficients[[0, 1]] + 1.0).abs() < 1e-14);
        assert_eq!(r.degenerate, vec![false, true]);

        let rec = reconstruct(&r, 1).unwrap();
        assert!(frobenius(&(rec - array![[0.0, 0.0], [1.0, -1.0]])) < 1e-14);
        assert!(matches!(reconstruct(&r, 0), Err(Error::Contract(_))));
        assert!(matches!(reconstruct(&r, 3), Err(Error::Contract(_))));
    }

    #[test]
    fn energy_fraction_examples() {
        assert_eq!(energy_fractions(&[3.0, 1.0]).unwrap(), array![0.75, 0.25]);
        assert_eq!(energy_fractions(&[5.0, 0.0, 0.0]).unwrap(), array![1.0, 0.0, 0.0]);
        assert_eq!(energy_fractions(&[0.0, 0.0]).unwrap(), array![0.0, 0.0]);
        assert!(matches!(energy_fractions(&[1.0, -1e-3]), Err(Error::Contract(_))));
    }

    fn matrix(m: usize, n: usize) -> impl Strategy<Value = DenseMatrix> {
        proptest::collection::vec(-1.0..1.0_f64, m * n)
            .prop_map(move |v| Array2::from_shape_vec((m, n), v).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn centred_rows_sum_to_zero(s in matrix(10, 5)) {
            let (u, _) = fluctuations(s.view()).unwrap();
            for row in u.rows() {
                prop_assert!(row.sum().abs() < 1e-12 * 5.0);
            }
        }

        #[test]
        fn gram_is_positive_semidefinite(u in matrix(50, 6)) {
            let eig = sym_eig(&autocovariance(u.view())).unwrap();
            prop_assert!(eig.values.iter().all(|&l| l >= -1e-10));
        }

        #[test]
        fn modes_lie_in_snapshot_span(s in matrix(30, 6)) {
            let r = decompose_matrix(s.view()).unwrap();
            let (u, _) = fluctuations(s.view()).unwrap();
            let (q, _) = crate::linalg::qr_economy(&u).unwrap();
            for i in (0..6).filter(|&i| !r.degenerate[i]) {
                let phi = r.modes.column(i);
                let proj = q.dot(&q.t().dot(&phi));
                let res = (&proj - &phi).mapv(|v| v * v).sum().sqrt();
                prop_assert!(res < 1e-10);
            }
        }

        #[test]
        fn fractions_sum_to_one(s in matrix(20, 7)) {
            let r = decompose_matrix(s.view()).unwrap();
            prop_assert!((r.energy_fractions.sum() - 1.0).abs() < 1e-12);
            for w in r.eigenvalues.as_slice().unwrap().windows(2) {
                prop_assert!(w[0] >= w[1]);
            }
        }
    }
}
