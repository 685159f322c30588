//! 2D FFT helpers on the periodic square.

use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::field::Grid2D;

pub type Spectrum = Array2<Complex64>;

/// Forward/inverse 2D transforms plus wavenumber tables for one grid.
///
/// Arrays use the field layout `[iy, ix]`. The forward transform is
/// unnormalized; the inverse divides by `n²`.
pub struct Spectral2D {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    /// Physical wavenumbers `2π k / L`, FFT order.
    k: Vec<f64>,
    /// Same as `k` with the Nyquist entry zeroed, for first derivatives.
    k_deriv: Vec<f64>,
    /// `|k|²` with the mean entry set to zero.
    k2: Array2<f64>,
    /// 2/3-rule keep mask.
    mask: Array2<f64>,
    scratch: Vec<Complex64>,
}

impl Spectral2D {
    pub fn new(grid: &Grid2D) -> Self {
        let n = grid.n();
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let base = std::f64::consts::TAU / grid.length();
        let index = |i: usize| -> i64 {
            if i <= n / 2 {
                i as i64
            } else {
                i as i64 - n as i64
            }
        };
        let k: Vec<f64> = (0..n).map(|i| base * index(i) as f64).collect();
        let mut k_deriv = k.clone();
        k_deriv[n / 2] = 0.0;
        let k2 = Array2::from_shape_fn((n, n), |(i, j)| k[i] * k[i] + k[j] * k[j]);
        let cutoff = n as i64 / 3;
        let mask = Array2::from_shape_fn((n, n), |(i, j)| {
            if index(i).abs() <= cutoff && index(j).abs() <= cutoff && i != n / 2 && j != n / 2 {
                1.0
            } else {
                0.0
            }
        });
        let scratch_len = fwd.get_inplace_scratch_len().max(inv.get_inplace_scratch_len());
        Self {
            n,
            fwd,
            inv,
            k,
            k_deriv,
            k2,
            mask,
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k2(&self) -> &Array2<f64> {
        &self.k2
    }

    pub fn mask(&self) -> &Array2<f64> {
        &self.mask
    }

    /// Derivative wavenumbers along `x` (axis 1) and `y` (axis 0).
    pub fn kx(&self, j: usize) -> f64 {
        self.k_deriv[j]
    }

    pub fn ky(&self, i: usize) -> f64 {
        self.k_deriv[i]
    }

    pub fn wavenumber(&self, i: usize) -> f64 {
        self.k[i]
    }

    pub fn forward(&mut self, real: &Array2<f64>) -> Spectrum {
        let mut buf = real.mapv(|v| Complex64::new(v, 0.0));
        self.transform(&mut buf, true);
        buf
    }

    pub fn forward_complex(&mut self, mut buf: Spectrum) -> Spectrum {
        self.transform(&mut buf, true);
        buf
    }

    /// Inverse transform, returning the real part.
    pub fn inverse(&mut self, spec: &Spectrum) -> Array2<f64> {
        let mut buf = spec.clone();
        self.transform(&mut buf, false);
        let norm = 1.0 / (self.n * self.n) as f64;
        buf.mapv(|z| z.re * norm)
    }

    /// Inverse transform keeping both parts; used to unpack two real fields
    /// carried as `a + i b`.
    pub fn inverse_complex(&mut self, mut buf: Spectrum) -> Spectrum {
        self.transform(&mut buf, false);
        let norm = 1.0 / (self.n * self.n) as f64;
        buf.mapv_inplace(|z| z * norm);
        buf
    }

    fn transform(&mut self, buf: &mut Spectrum, forward: bool) {
        let plan = if forward { &self.fwd } else { &self.inv };
        let data = buf
            .as_slice_mut()
            .expect("spectral buffers are contiguous");
        // Rows (x direction), then columns via transpose.
        plan.process_with_scratch(data, &mut self.scratch);
        let mut t = buf.t().as_standard_layout().into_owned();
        plan.process_with_scratch(
            t.as_slice_mut().expect("contiguous transpose"),
            &mut self.scratch,
        );
        buf.assign(&t.t());
    }

    /// `∂/∂x` in spectral space.
    pub fn ddx(&self, spec: &Spectrum) -> Spectrum {
        let mut out = spec.clone();
        for ((_, j), z) in out.indexed_iter_mut() {
            *z *= Complex64::new(0.0, self.k_deriv[j]);
        }
        out
    }

    /// `∂/∂y` in spectral space.
    pub fn ddy(&self, spec: &Spectrum) -> Spectrum {
        let mut out = spec.clone();
        for ((i, _), z) in out.indexed_iter_mut() {
            *z *= Complex64::new(0.0, self.k_deriv[i]);
        }
        out
    }

    pub fn apply_mask(&self, spec: &mut Spectrum) {
        spec.zip_mut_with(&self.mask, |z, &m| *z *= m);
    }
}
