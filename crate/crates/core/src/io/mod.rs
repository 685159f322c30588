//! Files in and out: snapshot persistence, run configs, PGM images and CSV
//! tables.

mod config;
mod image;
mod snapshot;
mod table;

use std::io::Write;
use std::path::Path;

pub use config::{parse_run_config, read_run_config, RunConfig};
pub use image::{encode_pgm, export_complex_mode_image, export_mode_image, to_gray};
pub use snapshot::{
    decode_snapshots, encode_snapshots, read_snapshots, write_snapshots, FILE_DOMAIN_LENGTH,
    HEADER_LEN, MAGIC,
};
pub use table::{
    export_columns_csv, export_lag_table, export_pod_energy_csv, export_spectrum_csv,
    export_time_coefficients_csv, parse_spectrum_csv, read_spectrum_csv, SpectrumRow, SPECTRUM_HEADER,
    UNIT_CIRCLE_POINTS,
};

use crate::error::Result;

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
