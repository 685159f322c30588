//! `KHSNAP01` snapshot files.
//!
//! ```text
//! offset  size  field
//! 0       8     magic "KHSNAP01"
//! 8       4     nx           u32 LE
//! 12      4     ny           u32 LE
//! 16      4     n_snapshots  u32 LE
//! 20      8     dt_snap      f64 LE
//! 28      ...   n_snapshots × ny × nx f64 LE
//! ```
//!
//! Each field is stored row by row: `y` index outer, `x` index inner, which
//! is the flattening order of [`crate::field::flatten`]. The header carries
//! no domain length; decoded grids span `2π`.

use std::f64::consts::TAU;
use std::path::Path;

use ndarray::Array2;

use super::write_atomic;
use crate::error::{Error, Result};
use crate::field::{Grid2D, SnapshotMatrix};

pub const MAGIC: &[u8; 8] = b"KHSNAP01";
pub const HEADER_LEN: usize = 28;

/// Domain length assumed for decoded grids.
pub const FILE_DOMAIN_LENGTH: f64 = TAU;

fn format_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Format {
        offset,
        message: message.into(),
    }
}

pub fn encode_snapshots(s: &SnapshotMatrix) -> Vec<u8> {
    let n = s.grid().n() as u32;
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * s.data().len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&n.to_le_bytes());
    out.extend_from_slice(&n.to_le_bytes());
    out.extend_from_slice(&(s.cols() as u32).to_le_bytes());
    out.extend_from_slice(&s.dt_snap().to_le_bytes());
    for col in s.data().columns() {
        for v in col {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

fn u32_at(bytes: &[u8], offset: usize) -> u32 {
    u32::from_le_bytes(bytes[offset..offset + 4].try_into().expect("4 bytes"))
}

fn f64_at(bytes: &[u8], offset: usize) -> f64 {
    f64::from_le_bytes(bytes[offset..offset + 8].try_into().expect("8 bytes"))
}

pub fn decode_snapshots(bytes: &[u8]) -> Result<SnapshotMatrix> {
    let magic_len = bytes.len().min(MAGIC.len());
    if bytes[..magic_len] != MAGIC[..magic_len] {
        let at = bytes.iter().zip(MAGIC).position(|(a, b)| a != b).unwrap_or(0);
        return Err(format_err(at, "bad magic, expected KHSNAP01"));
    }
    if bytes.len() < HEADER_LEN {
        return Err(format_err(
            bytes.len(),
            format!("truncated header: {} of {HEADER_LEN} bytes", bytes.len()),
        ));
    }
    let nx = u32_at(bytes, 8);
    let ny = u32_at(bytes, 12);
    let count = u32_at(bytes, 16) as usize;
    let dt_snap = f64_at(bytes, 20);
    if nx != ny {
        return Err(format_err(12, format!("non-square grid {nx}x{ny}")));
    }
    let grid = Grid2D::new(nx as usize, FILE_DOMAIN_LENGTH)
        .map_err(|e| format_err(8, format!("unsupported grid size {nx}: {e}")))?;
    if count == 0 {
        return Err(format_err(16, "file holds no snapshots"));
    }
    if !(dt_snap.is_finite() && dt_snap > 0.0) {
        return Err(format_err(20, format!("dt_snap {dt_snap} must be positive")));
    }

    let m = grid.len();
    let expected = m
        .checked_mul(count)
        .and_then(|v| v.checked_mul(8))
        .and_then(|v| v.checked_add(HEADER_LEN))
        .ok_or_else(|| format_err(16, "payload size overflows"))?;
    if bytes.len() < expected {
        return Err(format_err(
            bytes.len(),
            format!(
                "truncated payload: header implies {expected} bytes, found {}",
                bytes.len()
            ),
        ));
    }
    if bytes.len() > expected {
        return Err(format_err(
            expected,
            format!("{} trailing bytes after payload", bytes.len() - expected),
        ));
    }

    let mut data = Array2::zeros((m, count));
    for j in 0..count {
        for k in 0..m {
            let offset = HEADER_LEN + 8 * (j * m + k);
            let v = f64_at(bytes, offset);
            if !v.is_finite() {
                return Err(format_err(offset, format!("non-finite value {v}")));
            }
            data[[k, j]] = v;
        }
    }
    SnapshotMatrix::new(grid, data, dt_snap)
}

pub fn write_snapshots(path: &Path, s: &SnapshotMatrix) -> Result<()> {
    write_atomic(path, &encode_snapshots(s))
}

pub fn read_snapshots(path: &Path) -> Result<SnapshotMatrix> {
    decode_snapshots(&std::fs::read(path)?)
}
