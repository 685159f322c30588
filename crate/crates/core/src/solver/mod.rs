//! Pseudo-spectral 2D incompressible solver with passive-scalar transport.
//!
//! Vorticity/streamfunction form on the periodic square:
//!
//! ```text
//! ∂ω/∂t = −(u·∇)ω + ν∇²ω,    ∂c/∂t = −(u·∇)c + κ∇²c,
//! ∇²ψ = −ω,   u = ∂ψ/∂y,   v = −∂ψ/∂x,   ω = ∂v/∂x − ∂u/∂y
//! ```
//!
//! Time stepping is classical RK4. Advection products are formed in physical
//! space; with dealiasing on, both the factors and the product are truncated
//! by the 2/3 rule. The viscosity is tied to the jet scales,
//! `ν = u_max · r_o / Re`, and `κ = ν / Sc`.

mod spectral;

use std::f64::consts::TAU;

use log::warn;
use ndarray::{Array2, Zip};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{assemble_snapshots, Grid2D, ScalarField, SnapshotMatrix};

pub use spectral::{Spectral2D, Spectrum};

/// Numerical and physical parameters of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    /// Reynolds number based on `velocity_scale` and `length_scale`.
    pub re: f64,
    /// Time step; `None` picks `cfl_target · dx / velocity_scale`.
    pub dt: Option<f64>,
    /// Total steps; the last collected snapshot is taken at this step.
    pub n_steps: usize,
    pub snapshot_interval: usize,
    pub collect_count: usize,
    pub dealias: bool,
    /// `ν / κ`.
    pub schmidt: f64,
    /// Velocity scale of the Reynolds number (jet peak velocity).
    pub velocity_scale: f64,
    /// Length scale of the Reynolds number (jet radius).
    pub length_scale: f64,
    pub cfl_target: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            re: 10_000.0,
            dt: None,
            n_steps: 600,
            snapshot_interval: 5,
            collect_count: 30,
            dealias: true,
            schmidt: 1.0,
            velocity_scale: 0.1,
            length_scale: TAU / 20.0,
            cfl_target: 0.5,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.re.is_finite() && self.re > 0.0) {
            return bad(format!("re must be positive, got {}", self.re));
        }
        if let Some(dt) = self.dt {
            if !(dt.is_finite() && dt > 0.0) {
                return bad(format!("dt must be positive, got {dt}"));
            }
        }
        if self.snapshot_interval < 1 {
            return bad("snapshot_interval must be at least 1".into());
        }
        if self.collect_count < 2 {
            return bad("collect_count must be at least 2".into());
        }
        if !(self.schmidt.is_finite() && self.schmidt > 0.0) {
            return bad(format!("schmidt must be positive, got {}", self.schmidt));
        }
        if !(self.velocity_scale > 0.0 && self.length_scale > 0.0 && self.cfl_target > 0.0) {
            return bad("velocity_scale, length_scale and cfl_target must be positive".into());
        }
        if self.n_steps < self.first_snapshot_offset() {
            return bad(format!(
                "n_steps {} too small for {} snapshots every {} steps",
                self.n_steps, self.collect_count, self.snapshot_interval
            ));
        }
        Ok(())
    }

    /// Steps spanned by the collected window, `interval · (count − 1)`.
    fn first_snapshot_offset(&self) -> usize {
        self.snapshot_interval * self.collect_count.saturating_sub(1)
    }

    /// Step index of the first collected snapshot.
    pub fn first_snapshot_step(&self) -> usize {
        self.n_steps - self.first_snapshot_offset()
    }

    pub fn viscosity(&self) -> f64 {
        self.velocity_scale * self.length_scale / self.re
    }

    pub fn diffusivity(&self) -> f64 {
        self.viscosity() / self.schmidt
    }

    pub fn time_step(&self, grid: &Grid2D) -> f64 {
        self.dt
            .unwrap_or(self.cfl_target * grid.dx() / self.velocity_scale)
    }
}

/// Spectral vorticity and scalar at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub grid: Grid2D,
    pub omega_hat: Spectrum,
    pub scalar_hat: Spectrum,
    pub time: f64,
}

/// Physical-space velocity recovered from a state.
#[derive(Debug, Clone)]
pub struct Velocity {
    pub u: Array2<f64>,
    pub v: Array2<f64>,
}

/// A stateful integrator owning FFT plans and viscous coefficients.
pub struct Solver {
    sp: Spectral2D,
    cfg: SimConfig,
    dt: f64,
    dx: f64,
    nu: f64,
    kappa: f64,
    steps_taken: usize,
    cfl_warned: bool,
}

impl Solver {
    pub fn new(grid: &Grid2D, cfg: SimConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self::with_coefficients(grid, cfg, cfg.viscosity(), cfg.diffusivity()))
    }

    /// Solver with explicit `ν` and `κ` instead of the Reynolds/Schmidt scaling.
    pub fn with_coefficients(grid: &Grid2D, cfg: SimConfig, nu: f64, kappa: f64) -> Self {
        Self {
            sp: Spectral2D::new(grid),
            dt: cfg.time_step(grid),
            dx: grid.dx(),
            cfg,
            nu,
            kappa,
            steps_taken: 0,
            cfl_warned: false,
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn spectral(&mut self) -> &mut Spectral2D {
        &mut self.sp
    }

    /// Transforms physical `U`, `V` and scalar into a spectral state.
    pub fn init_state(
        &mut self,
        u: &ScalarField,
        v: &ScalarField,
        scalar: &ScalarField,
    ) -> Result<FlowState> {
        init_state_with(&mut self.sp, u, v, scalar)
    }

    /// Streamfunction `ψ̂ = ω̂ / |k|²`, zero mean.
    pub fn streamfunction(&self, omega_hat: &Spectrum) -> Spectrum {
        poisson_with(&self.sp, omega_hat)
    }

    pub fn velocity(&mut self, state: &FlowState) -> Velocity {
        let psi = poisson_with(&self.sp, &state.omega_hat);
        let u_hat = self.sp.ddy(&psi);
        let v_hat = self.sp.ddx(&psi).mapv(|z| -z);
        Velocity {
            u: self.sp.inverse(&u_hat),
            v: self.sp.inverse(&v_hat),
        }
    }

    pub fn scalar(&mut self, state: &FlowState) -> Array2<f64> {
        self.sp.inverse(&state.scalar_hat)
    }

    /// `½ ⟨u² + v²⟩` over the domain, from the spectrum.
    pub fn kinetic_energy(&self, state: &FlowState) -> f64 {
        let psi = poisson_with(&self.sp, &state.omega_hat);
        let n4 = (self.sp.n() as f64).powi(4);
        let s: f64 = Zip::from(&psi)
            .and(self.sp.k2())
            .fold(0.0, |acc, z, &k2| acc + k2 * z.norm_sqr());
        0.5 * s / n4
    }

    /// Largest spectral divergence amplitude `|i kx û + i ky v̂| / n²`.
    pub fn max_divergence(&self, state: &FlowState) -> f64 {
        let psi = poisson_with(&self.sp, &state.omega_hat);
        let u_hat = self.sp.ddy(&psi);
        let v_hat = self.sp.ddx(&psi).mapv(|z| -z);
        let div = self.sp.ddx(&u_hat) + self.sp.ddy(&v_hat);
        let n2 = (self.sp.n() * self.sp.n()) as f64;
        div.iter().fold(0.0_f64, |m, z| m.max(z.norm())) / n2
    }

    /// One RK4 step.
    pub fn step(&mut self, state: &FlowState) -> Result<FlowState> {
        let dt = self.dt;
        // With dealiasing the state lives on the 2/3 box: truncate on entry.
        let truncated;
        let state = if self.cfg.dealias {
            let mut s = state.clone();
            self.sp.apply_mask(&mut s.omega_hat);
            self.sp.apply_mask(&mut s.scalar_hat);
            truncated = s;
            &truncated
        } else {
            state
        };
        let (k1w, k1c) = self.rhs(&state.omega_hat, &state.scalar_hat, true);
        let (w2, c2) = (
            axpy(&state.omega_hat, 0.5 * dt, &k1w),
            axpy(&state.scalar_hat, 0.5 * dt, &k1c),
        );
        let (k2w, k2c) = self.rhs(&w2, &c2, false);
        let (w3, c3) = (
            axpy(&state.omega_hat, 0.5 * dt, &k2w),
            axpy(&state.scalar_hat, 0.5 * dt, &k2c),
        );
        let (k3w, k3c) = self.rhs(&w3, &c3, false);
        let (w4, c4) = (
            axpy(&state.omega_hat, dt, &k3w),
            axpy(&state.scalar_hat, dt, &k3c),
        );
        let (k4w, k4c) = self.rhs(&w4, &c4, false);

        let combine = |y: &Spectrum, a: &Spectrum, b: &Spectrum, c: &Spectrum, d: &Spectrum| {
            let mut out = y.clone();
            Zip::from(&mut out)
                .and(a)
                .and(b)
                .and(c)
                .and(d)
                .for_each(|o, &a, &b, &c, &d| *o += (a + 2.0 * b + 2.0 * c + d) * (dt / 6.0));
            out
        };
        let omega_hat = combine(&state.omega_hat, &k1w, &k2w, &k3w, &k4w);
        let scalar_hat = combine(&state.scalar_hat, &k1c, &k2c, &k3c, &k4c);
        self.steps_taken += 1;

        let step = self.steps_taken;
        if omega_hat.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Divergence { step, field: "vorticity" });
        }
        if scalar_hat.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Divergence { step, field: "scalar" });
        }
        Ok(FlowState {
            grid: state.grid,
            omega_hat,
            scalar_hat,
            time: state.time + dt,
        })
    }

    /// Right-hand sides for vorticity and scalar.
    fn rhs(&mut self, omega_hat: &Spectrum, scalar_hat: &Spectrum, check_cfl: bool) -> (Spectrum, Spectrum) {
        let dealias = self.cfg.dealias;
        let sp = &mut self.sp;
        let psi = poisson_with(sp, omega_hat);

        let (mut w, mut c) = (omega_hat.clone(), scalar_hat.clone());
        let mut psi_m = psi;
        if dealias {
            sp.apply_mask(&mut psi_m);
            sp.apply_mask(&mut w);
            sp.apply_mask(&mut c);
        }
        let i = Complex64::new(0.0, 1.0);
        // Pack two real fields per transform: a + i b.
        let uv = sp.ddy(&psi_m) - sp.ddx(&psi_m) * i;
        let wxy = sp.ddx(&w) + sp.ddy(&w) * i;
        let cxy = sp.ddx(&c) + sp.ddy(&c) * i;
        let uv = sp.inverse_complex(uv);
        let wxy = sp.inverse_complex(wxy);
        let cxy = sp.inverse_complex(cxy);

        if check_cfl && !self.cfl_warned {
            let vmax = uv.iter().fold(0.0_f64, |m, z| m.max(z.re.abs()).max(z.im.abs()));
            let cfl = self.dt * vmax / self.dx;
            if cfl > 1.0 {
                warn!("CFL number {cfl:.3} exceeds 1 (dt = {}, max velocity {vmax:.4e})", self.dt);
                self.cfl_warned = true;
            }
        }

        let sp = &mut self.sp;
        let mut products = Array2::<Complex64>::zeros(uv.dim());
        Zip::from(&mut products)
            .and(&uv)
            .and(&wxy)
            .and(&cxy)
            .for_each(|p, uv, wxy, cxy| {
                let (u, v) = (uv.re, uv.im);
                let nw = -(u * wxy.re + v * wxy.im);
                let nc = -(u * cxy.re + v * cxy.im);
                *p = Complex64::new(nw, nc);
            });
        let z = sp.forward_complex(products);
        let n = sp.n();
        let mut nw = Array2::<Complex64>::zeros((n, n));
        let mut nc = Array2::<Complex64>::zeros((n, n));
        for a in 0..n {
            let ma = (n - a) % n;
            for b in 0..n {
                let mb = (n - b) % n;
                let zk = z[[a, b]];
                let zm = z[[ma, mb]].conj();
                nw[[a, b]] = (zk + zm) * 0.5;
                nc[[a, b]] = (zk - zm) * Complex64::new(0.0, -0.5);
            }
        }
        if dealias {
            sp.apply_mask(&mut nw);
            sp.apply_mask(&mut nc);
        }
        let (nu, kappa) = (self.nu, self.kappa);
        Zip::from(&mut nw)
            .and(omega_hat)
            .and(sp.k2())
            .for_each(|r, &w, &k2| *r -= w * (nu * k2));
        Zip::from(&mut nc)
            .and(scalar_hat)
            .and(sp.k2())
            .for_each(|r, &c, &k2| *r -= c * (kappa * k2));
        (nw, nc)
    }
}

fn axpy(y: &Spectrum, a: f64, x: &Spectrum) -> Spectrum {
    let mut out = y.clone();
    out.zip_mut_with(x, |o, &xv| *o += xv * a);
    out
}

fn poisson_with(sp: &Spectral2D, omega_hat: &Spectrum) -> Spectrum {
    let mut psi = omega_hat.clone();
    Zip::from(&mut psi).and(sp.k2()).for_each(|p, &k2| {
        if k2 == 0.0 {
            *p = Complex64::new(0.0, 0.0);
        } else {
            *p /= k2;
        }
    });
    psi
}

fn init_state_with(
    sp: &mut Spectral2D,
    u: &ScalarField,
    v: &ScalarField,
    scalar: &ScalarField,
) -> Result<FlowState> {
    let grid = *u.grid();
    if *v.grid() != grid || *scalar.grid() != grid {
        return Err(Error::Dimension("U, V and scalar must share a grid".into()));
    }
    if sp.n() != grid.n() {
        return Err(Error::Dimension(format!(
            "solver built for n = {}, fields have n = {}",
            sp.n(),
            grid.n()
        )));
    }
    let u_hat = sp.forward(u.values());
    let v_hat = sp.forward(v.values());
    let omega_hat = sp.ddx(&v_hat) - sp.ddy(&u_hat);
    let scalar_hat = sp.forward(scalar.values());
    Ok(FlowState {
        grid,
        omega_hat,
        scalar_hat,
        time: 0.0,
    })
}

/// Standalone form of the Poisson inversion, `ψ̂ = ω̂ / |k|²`.
pub fn poisson_streamfunction(grid: &Grid2D, omega_hat: &Spectrum) -> Spectrum {
    poisson_with(&Spectral2D::new(grid), omega_hat)
}

/// Output of [`run_collect`].
#[derive(Debug, Clone)]
pub struct CollectedRun {
    pub snapshots: SnapshotMatrix,
    /// Time average of `U` over the collected snapshots.
    pub mean_u: ScalarField,
    /// Time average of `V` over the collected snapshots.
    pub mean_v: ScalarField,
    /// Simulation time of each column.
    pub times: Vec<f64>,
    pub dt: f64,
}

/// Integrates `n_steps` steps and keeps the scalar every `snapshot_interval`
/// steps over the final `collect_count` samples (the last one at step
/// `n_steps`).
pub fn run_collect(cfg: &SimConfig, state0: &FlowState) -> Result<CollectedRun> {
    let mut solver = Solver::new(&state0.grid, *cfg)?;
    run_collect_with(&mut solver, cfg, state0, |_, _| {})
}

/// [`run_collect`] with a per-step observer `(step, state)`.
pub fn run_collect_with(
    solver: &mut Solver,
    cfg: &SimConfig,
    state0: &FlowState,
    mut observe: impl FnMut(usize, &FlowState),
) -> Result<CollectedRun> {
    cfg.validate()?;
    let grid = state0.grid;
    let first = cfg.first_snapshot_step();
    let mut fields = Vec::with_capacity(cfg.collect_count);
    let mut times = Vec::with_capacity(cfg.collect_count);
    let mut sum_u = Array2::<f64>::zeros((grid.n(), grid.n()));
    let mut sum_v = Array2::<f64>::zeros((grid.n(), grid.n()));

    let mut state = state0.clone();
    let mut record = |solver: &mut Solver, state: &FlowState| -> Result<()> {
        let c = solver.scalar(state);
        let vel = solver.velocity(state);
        sum_u += &vel.u;
        sum_v += &vel.v;
        fields.push(ScalarField::new(grid, c)?);
        times.push(state.time);
        Ok(())
    };
    observe(0, &state);
    if first == 0 {
        record(solver, &state)?;
    }
    for step in 1..=cfg.n_steps {
        state = solver.step(&state)?;
        observe(step, &state);
        if step >= first && (step - first) % cfg.snapshot_interval == 0 {
            record(solver, &state)?;
        }
    }

    let count = fields.len() as f64;
    let dt = solver.dt();
    let snapshots = assemble_snapshots(&fields, cfg.snapshot_interval as f64 * dt)?;
    Ok(CollectedRun {
        snapshots,
        mean_u: ScalarField::new(grid, sum_u / count)?,
        mean_v: ScalarField::new(grid, sum_v / count)?,
        times,
        dt,
    })
}
