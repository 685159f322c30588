//! CSV exports for spectra, POD energies and time coefficients.
//!
//! Numbers use Rust's shortest round-trip formatting, so output does not
//! depend on locale.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use log::warn;
use serde::Deserialize;

use super::write_atomic;
use crate::diagnostics::lag_correlation;
use crate::dmd::DmdResult;
use crate::error::{Error, Result};
use crate::pod::PodResult;

pub const SPECTRUM_HEADER: [&str; 7] = ["index", "mu_re", "mu_im", "mu_abs", "lambda_re", "lambda_im", "stability"];

/// Points on the reference circle file.
pub const UNIT_CIRCLE_POINTS: usize = 361;

fn csv_err(e: csv::Error) -> Error {
    let offset = e.position().map_or(0, |p| p.byte() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Format {
            offset,
            message: format!("{other:?}"),
        },
    }
}

fn finish(w: csv::Writer<Vec<u8>>, path: &Path) -> Result<()> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    write_atomic(path, &bytes)
}

fn record<I: IntoIterator<Item = String>>(w: &mut csv::Writer<Vec<u8>>, fields: I) -> Result<()> {
    w.write_record(fields.into_iter()).map_err(csv_err)
}

/// Spectrum table plus `<stem>_unit_circle.csv`. Returns the circle path.
pub fn export_spectrum_csv(result: &DmdResult, path: &Path) -> Result<PathBuf> {
    if result.eigenvalues.is_empty() {
        return Err(Error::InsufficientData("empty DMD result".into()));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    record(&mut w, SPECTRUM_HEADER.iter().map(|s| s.to_string()))?;
    for (j, (mu, lam)) in result.eigenvalues.iter().zip(&result.spectrum).enumerate() {
        record(
            &mut w,
            [
                j.to_string(),
                mu.re.to_string(),
                mu.im.to_string(),
                mu.norm().to_string(),
                lam.re.to_string(),
                lam.im.to_string(),
                result.stability[j].to_string(),
            ],
        )?;
    }
    finish(w, path)?;

    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let circle = path.with_file_name(format!("{stem}_unit_circle.csv"));
    let mut w = csv::Writer::from_writer(Vec::new());
    record(&mut w, ["angle", "re", "im"].map(String::from))?;
    for i in 0..UNIT_CIRCLE_POINTS {
        let a = TAU * i as f64 / (UNIT_CIRCLE_POINTS - 1) as f64;
        record(&mut w, [a.to_string(), a.cos().to_string(), a.sin().to_string()])?;
    }
    finish(w, &circle)?;
    Ok(circle)
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct SpectrumRow {
    pub index: usize,
    pub mu_re: f64,
    pub mu_im: f64,
    pub mu_abs: f64,
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub stability: String,
}

pub fn parse_spectrum_csv(bytes: &[u8]) -> Result<Vec<SpectrumRow>> {
    let mut r = csv::Reader::from_reader(bytes);
    let header = r.headers().map_err(csv_err)?;
    if header.iter().ne(SPECTRUM_HEADER) {
        return Err(Error::Format {
            offset: 0,
            message: format!("unexpected spectrum header {header:?}"),
        });
    }
    r.deserialize().map(|row| row.map_err(csv_err)).collect()
}

pub fn read_spectrum_csv(path: &Path) -> Result<Vec<SpectrumRow>> {
    parse_spectrum_csv(&std::fs::read(path)?)
}

/// Eigenvalue, energy fraction and cumulative fraction per POD mode.
pub fn export_pod_energy_csv(result: &PodResult, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    record(
        &mut w,
        ["index", "eigenvalue", "energy_fraction", "cumulative", "degenerate"].map(String::from),
    )?;
    let mut acc = 0.0;
    for i in 0..result.n_modes() {
        acc += result.energy_fractions[i];
        record(
            &mut w,
            [
                (i + 1).to_string(),
                result.eigenvalues[i].to_string(),
                result.energy_fractions[i].to_string(),
                acc.to_string(),
                result.degenerate[i].to_string(),
            ],
        )?;
    }
    finish(w, path)
}

/// Columns `snapshot, t, a_1 … a_k` with `t = n · dt_snap`. `k` is clipped to
/// the mode count; the count actually written is returned.
pub fn export_time_coefficients_csv(result: &PodResult, dt_snap: f64, k: usize, path: &Path) -> Result<usize> {
    let n = result.n_modes();
    let k = if k > n {
        warn!("requested {k} time coefficients, only {n} modes; writing {n}");
        n
    } else {
        k
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["snapshot".to_string(), "t".to_string()];
    header.extend((1..=k).map(|i| format!("a_{i}")));
    record(&mut w, header)?;
    for t in 0..result.time_coefficients.ncols() {
        let mut row = vec![t.to_string(), (t as f64 * dt_snap).to_string()];
        row.extend((0..k).map(|i| result.time_coefficients[[i, t]].to_string()));
        record(&mut w, row)?;
    }
    finish(w, path)?;
    Ok(k)
}

/// Lag correlation of `a_i` against `a_j` for each 1-based mode pair.
pub fn export_lag_table(result: &PodResult, pairs: &[(usize, usize)], max_lag: usize, path: &Path) -> Result<()> {
    let n = result.n_modes();
    let mut w = csv::Writer::from_writer(Vec::new());
    record(&mut w, ["mode_i", "mode_j", "lag", "correlation"].map(String::from))?;
    for &(i, j) in pairs {
        if i == 0 || j == 0 || i > n || j > n {
            return Err(Error::Contract(format!("mode pair ({i}, {j}) outside 1..={n}")));
        }
        let a = result.time_coefficients.row(i - 1).to_vec();
        let b = result.time_coefficients.row(j - 1).to_vec();
        for (lag, c) in lag_correlation(&a, &b, max_lag)? {
            record(&mut w, [i.to_string(), j.to_string(), lag.to_string(), c.to_string()])?;
        }
    }
    finish(w, path)
}

/// Named columns of equal length.
pub fn export_columns_csv(columns: &[(&str, &[f64])], path: &Path) -> Result<()> {
    let len = columns.first().map_or(0, |c| c.1.len());
    if columns.iter().any(|c| c.1.len() != len) {
        return Err(Error::Dimension("CSV columns differ in length".into()));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    record(&mut w, columns.iter().map(|c| c.0.to_string()))?;
    for r in 0..len {
        record(&mut w, columns.iter().map(|c| c.1[r].to_string()))?;
    }
    finish(w, path)
}
