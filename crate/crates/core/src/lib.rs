//! Co-axial jet passive-scalar snapshots and their modal decomposition.
//!
//! The pipeline: build the two-jet initial condition ([`jet`]), march it with a
//! pseudo-spectral vorticity/streamfunction solver ([`solver`]) while
//! collecting passive-scalar snapshots ([`field::SnapshotMatrix`]), then
//! decompose them with snapshot POD ([`pod`]) and companion-matrix DMD
//! ([`dmd`]). [`io`] holds the binary snapshot format and the image/CSV
//! exports; [`cli`] wires it all to the `jetmodes` binary.

pub mod cli;
pub mod diagnostics;
pub mod dmd;
pub mod error;
pub mod field;
pub mod io;
pub mod jet;
pub mod linalg;
pub mod pod;
pub mod solver;

pub use error::{Error, Result};
