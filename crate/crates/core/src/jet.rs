//! Co-axial jet initial conditions.
//!
//! Two tanh-profile jets, streamwise along `x`, centred at `y1 = L/2 − offset`
//! and `y2 = L/2 + offset`:
//!
//! ```text
//! U(y) = Σ_c  u_max · ½ · (1 − tanh(B · (|y − y_c|/r_o − r_o/|y − y_c|)))
//! U    ← u_max · U / max(U)
//! V    = v_max · (r − ½),  r ~ Uniform[0, 1)
//! PS   = U / max(U)
//! ```
//!
//! The transverse noise `r` comes from ChaCha8 seeded with `JetConfig::seed`
//! (`rand_chacha::ChaCha8Rng::seed_from_u64`), drawn in row-major order, so a
//! given seed reproduces `V` bit for bit on every platform.

use std::f64::consts::TAU;

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Grid2D, ScalarField};

/// Parameters of the co-axial jet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JetConfig {
    /// Domain side `L`.
    pub length: f64,
    /// Grid points per side.
    pub n: usize,
    /// Peak streamwise velocity.
    pub u_max: f64,
    /// Transverse noise amplitude; samples lie in `[−v_max/2, v_max/2)`.
    pub v_max: f64,
    /// Jet radius.
    pub r_o: f64,
    /// Steepness (inverse momentum thickness) `B`.
    pub steepness: f64,
    /// Half-distance between the jet centres.
    pub case_offset: f64,
    pub seed: u64,
}

impl Default for JetConfig {
    fn default() -> Self {
        let length = TAU;
        let u_max = 0.1;
        Self {
            length,
            n: 256,
            u_max,
            v_max: u_max / 30.0,
            r_o: length / 20.0,
            steepness: 10.5,
            case_offset: length / 10.0,
            seed: 0,
        }
    }
}

/// Defaults with the jet spacing of case 1 (`L/10`, interacting jets) or
/// case 2 (`L/5`, independent jets).
pub fn preset(case_id: u32) -> Result<JetConfig> {
    let base = JetConfig::default();
    let case_offset = match case_id {
        1 => base.length / 10.0,
        2 => base.length / 5.0,
        other => return Err(Error::UnknownPreset(other)),
    };
    Ok(JetConfig { case_offset, ..base })
}

impl JetConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive, got {v}")))
            }
        };
        positive("length", self.length)?;
        positive("u_max", self.u_max)?;
        positive("r_o", self.r_o)?;
        positive("steepness", self.steepness)?;
        if !(self.v_max.is_finite() && self.v_max >= 0.0) {
            return Err(Error::Config(format!("v_max must be non-negative, got {}", self.v_max)));
        }
        if !(self.case_offset > 0.0 && self.case_offset < self.length / 2.0) {
            return Err(Error::Config(format!(
                "case_offset {} must lie in (0, L/2)",
                self.case_offset
            )));
        }
        Grid2D::new(self.n, self.length).map(|_| ())
    }

    pub fn grid(&self) -> Result<Grid2D> {
        Grid2D::new(self.n, self.length)
    }

    /// Jet centre lines `(y1, y2)`.
    pub fn centers(&self) -> (f64, f64) {
        let mid = self.length / 2.0;
        (mid - self.case_offset, mid + self.case_offset)
    }

    /// Un-normalized single-jet profile at transverse distance `d = |y − y_c|`.
    pub fn jet_profile(&self, d: f64) -> f64 {
        if d == 0.0 {
            // tanh(−∞) limit
            return self.u_max;
        }
        let arg = self.steepness * (d / self.r_o - self.r_o / d);
        self.u_max * 0.5 * (1.0 - arg.tanh())
    }
}

/// Initial streamwise velocity, transverse velocity and passive scalar.
#[derive(Debug, Clone)]
pub struct InitialConditions {
    pub u: ScalarField,
    pub v: ScalarField,
    pub scalar: ScalarField,
}

pub fn build_initial_conditions(cfg: &JetConfig) -> Result<InitialConditions> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let n = grid.n();
    let dx = grid.dx();
    let (y1, y2) = cfg.centers();

    let profile: Vec<f64> = (0..n)
        .map(|i| {
            let y = i as f64 * dx;
            cfg.jet_profile((y - y1).abs()) + cfg.jet_profile((y - y2).abs())
        })
        .collect();
    let peak = profile.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(peak > 0.0) {
        return Err(Error::Numerical("jet profile vanishes on the grid".into()));
    }
    // x/x == 1 exactly, so the maximum lands on u_max without rounding.
    let profile: Vec<f64> = profile.iter().map(|p| cfg.u_max * (p / peak)).collect();

    let u = Array2::from_shape_fn((n, n), |(i, _)| profile[i]);
    let scalar = u.mapv(|v| v / cfg.u_max);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let v = Array2::from_shape_simple_fn((n, n), || {
        cfg.v_max * (rng.random::<f64>() - 0.5)
    });

    Ok(InitialConditions {
        u: ScalarField::new(grid, u)?,
        v: ScalarField::new(grid, v)?,
        scalar: ScalarField::new(grid, scalar)?,
    })
}
