//! 8-bit grayscale PGM (P5) export.

use std::path::{Path, PathBuf};

use ndarray::ArrayView1;
use num_complex::Complex64;

use super::write_atomic;
use crate::error::{Error, Result};
use crate::field::Grid2D;

/// Min–max maps a field onto `0..=255`; a constant field maps to 128.
pub fn to_gray(values: ArrayView1<'_, f64>) -> Result<Vec<u8>> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Contract("cannot image non-finite values".into()));
    }
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let span = hi - lo;
    Ok(values
        .iter()
        .map(|&v| {
            if span > 0.0 {
                ((v - lo) / span * 255.0).round().clamp(0.0, 255.0) as u8
            } else {
                128
            }
        })
        .collect())
}

/// PGM bytes for a flattened field. The top image row is the largest `y`.
pub fn encode_pgm(values: ArrayView1<'_, f64>, grid: &Grid2D) -> Result<Vec<u8>> {
    let n = grid.n();
    if values.len() != grid.len() {
        return Err(Error::Dimension(format!(
            "field has {} values, grid needs {}",
            values.len(),
            grid.len()
        )));
    }
    let gray = to_gray(values)?;
    let mut out = format!("P5\n{n} {n}\n255\n").into_bytes();
    for row in gray.chunks(n).rev() {
        out.extend_from_slice(row);
    }
    Ok(out)
}

pub fn export_mode_image(values: ArrayView1<'_, f64>, grid: &Grid2D, path: &Path) -> Result<()> {
    write_atomic(path, &encode_pgm(values, grid)?)
}

/// Writes `<stem>_re.pgm` and `<stem>_im.pgm` next to `path`.
pub fn export_complex_mode_image(
    values: ArrayView1<'_, Complex64>,
    grid: &Grid2D,
    path: &Path,
) -> Result<(PathBuf, PathBuf)> {
    let re_path = suffixed(path, "_re");
    let im_path = suffixed(path, "_im");
    export_mode_image(values.mapv(|z| z.re).view(), grid, &re_path)?;
    export_mode_image(values.mapv(|z| z.im).view(), grid, &im_path)?;
    Ok((re_path, im_path))
}

fn suffixed(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}.pgm"))
}
