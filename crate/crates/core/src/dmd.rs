//! Dynamic mode decomposition through the companion matrix.
//!
//! The snapshot sequence is split into `V1 = [v₁ … v_{N−1}]` and
//! `V2 = [v₂ … v_N]`. With the economy factorisation `V1 = QR`, the companion
//! matrix solves `R S = Qᵀ V2` by back-substitution, so `S` is the
//! least-squares map with `V2 ≈ V1 S`. Its eigenvalues `μ` approximate those
//! of the evolution operator and the modes are `V1 x` for each eigenvector.

use std::cmp::Ordering;
use std::fmt;

use log::warn;
use ndarray::{s, Array2, ArrayView2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::SnapshotMatrix;
use crate::linalg::{nonsym_eig, qr_economy, tri_solve, ComplexEigenPairs, DenseMatrix};

pub use crate::linalg::DEFAULT_RANK_TOL;

/// Width of the neutral band around the unit circle.
pub const DEFAULT_NEUTRAL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stability {
    Stable,
    Neutral,
    Unstable,
}

impl fmt::Display for Stability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stability::Stable => "stable",
            Stability::Neutral => "neutral",
            Stability::Unstable => "unstable",
        })
    }
}

#[derive(Debug, Clone)]
pub struct DmdResult {
    pub companion: DenseMatrix,
    pub eigenvalues: Vec<Complex64>,
    /// `ln μ / δt`, principal branch.
    pub spectrum: Vec<Complex64>,
    /// `M × (N−1)`, column `j` pairs with `eigenvalues[j]`.
    pub modes: Array2<Complex64>,
    /// Euclidean norm of each mode column.
    pub amplitudes: Vec<f64>,
    pub stability: Vec<Stability>,
    pub dt_snap: f64,
}

impl DmdResult {
    /// Mode indices by decreasing amplitude.
    pub fn order_by_amplitude(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.amplitudes.len()).collect();
        idx.sort_by(|&a, &b| {
            self.amplitudes[b]
                .total_cmp(&self.amplitudes[a])
                .then(a.cmp(&b))
        });
        idx
    }

    /// Mode indices by increasing `|Im λ|`, ties broken by amplitude.
    pub fn order_by_frequency(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.spectrum.len()).collect();
        idx.sort_by(|&a, &b| {
            self.spectrum[a]
                .im
                .abs()
                .total_cmp(&self.spectrum[b].im.abs())
                .then(self.amplitudes[b].total_cmp(&self.amplitudes[a]))
                .then(a.cmp(&b))
        });
        idx
    }
}

/// Leading and trailing `N − 1` columns.
pub fn split(s: ArrayView2<'_, f64>) -> Result<(DenseMatrix, DenseMatrix)> {
    let n = s.ncols();
    if n < 3 {
        return Err(Error::InsufficientData(format!(
            "need at least 3 snapshots, got {n}"
        )));
    }
    Ok((
        s.slice(s![.., ..n - 1]).to_owned(),
        s.slice(s![.., 1..]).to_owned(),
    ))
}

/// Least-squares companion matrix `S` with `V2 ≈ V1 S`.
pub fn companion_via_qr(v1: &DenseMatrix, v2: &DenseMatrix, rank_tol: f64) -> Result<DenseMatrix> {
    if v1.dim() != v2.dim() {
        return Err(Error::Dimension(format!(
            "V1 is {:?} but V2 is {:?}",
            v1.dim(),
            v2.dim()
        )));
    }
    let (m, k) = v1.dim();
    if m < k {
        return Err(Error::Dimension(format!(
            "{m} rows cannot support {k} snapshot pairs; need rows >= N - 1"
        )));
    }
    let (q, r) = qr_economy(v1)?;
    let rhs = q.t().dot(v2);
    tri_solve(&r, &rhs, rank_tol)
}

pub fn dmd_eigs(s: &DenseMatrix) -> Result<ComplexEigenPairs> {
    nonsym_eig(s)
}

/// `λ = ln μ / δt`. A zero eigenvalue maps to `−∞` growth.
pub fn spectrum(mu: &[Complex64], dt_snap: f64) -> Result<Vec<Complex64>> {
    if !(dt_snap.is_finite() && dt_snap > 0.0) {
        return Err(Error::Contract(format!("dt_snap {dt_snap} must be positive")));
    }
    Ok(mu
        .iter()
        .map(|&m| {
            if m.norm() == 0.0 {
                warn!("zero DMD eigenvalue, growth rate set to -inf");
                Complex64::new(f64::NEG_INFINITY, 0.0)
            } else {
                Complex64::new(m.norm().ln(), m.arg()) / dt_snap
            }
        })
        .collect())
}

/// Columns `V1 x_j`.
pub fn dynamic_modes(v1: &DenseMatrix, x: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    if v1.ncols() != x.nrows() {
        return Err(Error::Dimension(format!(
            "V1 has {} columns, eigenvectors have {} rows",
            v1.ncols(),
            x.nrows()
        )));
    }
    let re = v1.dot(&x.mapv(|z| z.re));
    let im = v1.dot(&x.mapv(|z| z.im));
    Ok(Array2::from_shape_fn(re.dim(), |ij| Complex64::new(re[ij], im[ij])))
}

pub fn classify(mu: Complex64, tol: f64) -> Stability {
    let r = mu.norm();
    if r > 1.0 + tol {
        Stability::Unstable
    } else if r < 1.0 - tol {
        Stability::Stable
    } else {
        Stability::Neutral
    }
}

pub fn decompose(s: &SnapshotMatrix, rank_tol: f64) -> Result<DmdResult> {
    decompose_matrix(s.data().view(), s.dt_snap(), rank_tol)
}

pub fn decompose_matrix(s: ArrayView2<'_, f64>, dt_snap: f64, rank_tol: f64) -> Result<DmdResult> {
    let (v1, v2) = split(s)?;
    let companion = companion_via_qr(&v1, &v2, rank_tol)?;
    let eig = dmd_eigs(&companion)?;
    let spectrum = spectrum(&eig.values, dt_snap)?;
    let modes = dynamic_modes(&v1, &eig.vectors)?;
    let amplitudes = modes
        .columns()
        .into_iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let stability = eig
        .values
        .iter()
        .map(|&m| classify(m, DEFAULT_NEUTRAL_TOL))
        .collect();
    Ok(DmdResult {
        companion,
        eigenvalues: eig.values,
        spectrum,
        modes,
        amplitudes,
        stability,
        dt_snap,
    })
}

/// Sorts complex numbers by real part, then imaginary part.
pub fn sort_complex(values: &mut [Complex64]) {
    values.sort_by(|a, b| match a.re.total_cmp(&b.re) {
        Ordering::Equal => a.im.total_cmp(&b.im),
        o => o,
    });
}
