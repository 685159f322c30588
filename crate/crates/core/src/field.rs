//! Grid, field and snapshot-matrix value types.
//!
//! Fields are stored as `n × n` arrays. The first array axis runs along `y`
//! (transverse, image rows) and the second along `x` (streamwise, image
//! columns), so `values[[i, j]]` is the sample at `(x_j, y_i)`. Jets aligned
//! with `x` therefore render as horizontal bands.
//!
//! Flattening is row-major: entry `[[i, j]]` goes to column index `k = i·n + j`.

use ndarray::{Array1, Array2, ArrayView1};

use crate::error::{Error, Result};

/// Periodic square grid on `[0, L) × [0, L)` with `n` points per side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    n: usize,
    length: f64,
}

impl Grid2D {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::Dimension(format!(
                "grid size {n} must be a power of two and at least 4"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Contract(format!("domain length {length} must be positive")));
        }
        Ok(Self { n, length })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Node coordinates `i·dx`, `i = 0..n`. Identical along both axes.
    pub fn coords(&self) -> Array1<f64> {
        let dx = self.dx();
        Array1::from_iter((0..self.n).map(|i| i as f64 * dx))
    }

    /// Number of points, `n²`.
    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Real-valued samples on a [`Grid2D`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid2D,
    values: Array2<f64>,
}

impl ScalarField {
    pub fn new(grid: Grid2D, values: Array2<f64>) -> Result<Self> {
        if values.dim() != (grid.n(), grid.n()) {
            return Err(Error::Dimension(format!(
                "field shape {:?} does not match grid {}x{}",
                values.dim(),
                grid.n(),
                grid.n()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Contract(format!("non-finite field entry {bad}")));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid2D) -> Self {
        Self {
            grid,
            values: Array2::zeros((grid.n(), grid.n())),
        }
    }

    /// Builds a field from `f(x, y)` evaluated at every node.
    pub fn from_fn(grid: Grid2D, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let dx = grid.dx();
        let values = Array2::from_shape_fn((grid.n(), grid.n()), |(i, j)| {
            f(j as f64 * dx, i as f64 * dx)
        });
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn into_values(self) -> Array2<f64> {
        self.values
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn mean(&self) -> f64 {
        self.values.sum() / self.grid.len() as f64
    }
}

/// Row-major flattening, `k = i·n + j`.
pub fn flatten(field: &ScalarField) -> Array1<f64> {
    field.values.iter().copied().collect()
}

/// Inverse of [`flatten`].
pub fn unflatten(column: ArrayView1<'_, f64>, grid: Grid2D) -> Result<ScalarField> {
    if column.len() != grid.len() {
        return Err(Error::Dimension(format!(
            "column length {} does not match grid size {}",
            column.len(),
            grid.len()
        )));
    }
    let values = Array2::from_shape_vec((grid.n(), grid.n()), column.to_vec())
        .map_err(|e| Error::Dimension(e.to_string()))?;
    ScalarField::new(grid, values)
}

/// `M × N` matrix of flattened fields, one column per sample time.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotMatrix {
    grid: Grid2D,
    data: Array2<f64>,
    dt_snap: f64,
}

impl SnapshotMatrix {
    pub fn new(grid: Grid2D, data: Array2<f64>, dt_snap: f64) -> Result<Self> {
        if data.nrows() != grid.len() {
            return Err(Error::Dimension(format!(
                "snapshot rows {} do not match grid size {}",
                data.nrows(),
                grid.len()
            )));
        }
        if !(dt_snap.is_finite() && dt_snap > 0.0) {
            return Err(Error::Contract(format!("dt_snap {dt_snap} must be positive")));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Contract("non-finite snapshot entry".into()));
        }
        Ok(Self { grid, data, dt_snap })
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn data(&self) -> &Array2<f64> {
        &self.data
    }

    /// Pixel count `M = n²`.
    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    /// Snapshot count `N`.
    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn dt_snap(&self) -> f64 {
        self.dt_snap
    }

    pub fn field(&self, j: usize) -> Result<ScalarField> {
        if j >= self.cols() {
            return Err(Error::Dimension(format!(
                "snapshot {j} out of range ({} columns)",
                self.cols()
            )));
        }
        unflatten(self.data.column(j), self.grid)
    }
}

/// Stacks flattened fields as columns. No scaling or centering.
pub fn assemble_snapshots(fields: &[ScalarField], dt_snap: f64) -> Result<SnapshotMatrix> {
    if fields.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 snapshots, got {}",
            fields.len()
        )));
    }
    let grid = *fields[0].grid();
    if let Some(f) = fields.iter().find(|f| *f.grid() != grid) {
        return Err(Error::Dimension(format!(
            "mixed grids: {}x{} and {}x{}",
            grid.n(),
            grid.n(),
            f.grid().n(),
            f.grid().n()
        )));
    }
    let mut data = Array2::zeros((grid.len(), fields.len()));
    for (mut col, f) in data.columns_mut().into_iter().zip(fields) {
        col.iter_mut()
            .zip(f.values.iter())
            .for_each(|(d, &v)| *d = v);
    }
    SnapshotMatrix::new(grid, data, dt_snap)
}
