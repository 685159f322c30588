//! Scalar diagnostics on fields and time series.

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::jet::JetConfig;

/// Rows covered by [`jet_interaction`], in units of the jet radius.
pub const INTERACTION_BAND: f64 = 3.0;

/// Interaction between the two jets.
///
/// Takes the scalar fluctuation about each row's streamwise mean on the
/// gap-facing side of the lower jet (`y1 ≤ y ≤ y1 + 3 r_o`), pairs each row
/// with its mirror image `y ↦ L − y` on the upper jet, and returns the signed
/// Pearson correlation over all paired points. Zero when either band carries
/// no fluctuation.
pub fn jet_interaction(field: &ScalarField, jet: &JetConfig) -> f64 {
    let grid = field.grid();
    let n = grid.n();
    let dx = grid.dx();
    let values = field.values();
    let (y1, _) = jet.centers();

    let row_mean: Vec<f64> = (0..n).map(|i| values.row(i).sum() / n as f64).collect();
    let wrap = |i: isize| -> usize { i.rem_euclid(n as isize) as usize };

    let centre = (y1 / dx).round() as isize;
    let reach = (INTERACTION_BAND * jet.r_o / dx).round() as isize;
    let mut pairs = Vec::with_capacity((reach as usize + 1) * n);
    for d in 0..=reach {
        let lower = wrap(centre + d);
        let upper = wrap(n as isize - (centre + d));
        for j in 0..n {
            pairs.push((
                values[[lower, j]] - row_mean[lower],
                values[[upper, j]] - row_mean[upper],
            ));
        }
    }
    // Row-constant fields leave only rounding noise after mean removal.
    let floor = 1e-12 * values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let quiet = |f: fn(&(f64, f64)) -> f64| pairs.iter().all(|p| f(p).abs() <= floor);
    if quiet(|p| p.0) || quiet(|p| p.1) {
        return 0.0;
    }
    pearson(&pairs)
}

/// Pearson correlation of `a[t]` with `b[t + lag]` for `lag` in
/// `−max_lag..=max_lag`.
pub fn lag_correlation(a: &[f64], b: &[f64], max_lag: usize) -> Result<Vec<(isize, f64)>> {
    if a.len() != b.len() {
        return Err(Error::Dimension(format!(
            "series lengths differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let n = a.len() as isize;
    let max_lag = (max_lag as isize).min(n - 2).max(0);
    let mut out = Vec::new();
    for lag in -max_lag..=max_lag {
        let pairs: Vec<(f64, f64)> = (0..n)
            .filter_map(|t| {
                let u = t + lag;
                (0..n).contains(&u).then(|| (a[t as usize], b[u as usize]))
            })
            .collect();
        out.push((lag, pearson(&pairs)));
    }
    Ok(out)
}

fn pearson(pairs: &[(f64, f64)]) -> f64 {
    let m = pairs.len() as f64;
    if m < 2.0 {
        return 0.0;
    }
    let ma = pairs.iter().map(|p| p.0).sum::<f64>() / m;
    let mb = pairs.iter().map(|p| p.1).sum::<f64>() / m;
    let (mut cov, mut va, mut vb) = (0.0, 0.0, 0.0);
    for &(x, y) in pairs {
        cov += (x - ma) * (y - mb);
        va += (x - ma) * (x - ma);
        vb += (y - mb) * (y - mb);
    }
    if va == 0.0 || vb == 0.0 {
        0.0
    } else {
        cov / (va * vb).sqrt()
    }
}
