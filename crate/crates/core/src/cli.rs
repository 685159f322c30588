//! Command-line front end.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use log::{info, warn};
use ndarray::{Array2, Axis};
use num_complex::Complex64;

use crate::dmd::{self, DEFAULT_RANK_TOL};
use crate::error::{Error, Result};
use crate::field::SnapshotMatrix;
use crate::io::{self, RunConfig};
use crate::jet::{build_initial_conditions, preset, JetConfig};
use crate::pod;
use crate::solver::{run_collect, Solver};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;

pub const POD_MODES_FILE: &str = "pod_modes.khsnap";
pub const POD_MEAN_FILE: &str = "pod_mean.khsnap";
pub const POD_ENERGY_FILE: &str = "pod_energy.csv";
pub const POD_COEFFICIENTS_FILE: &str = "pod_time_coefficients.csv";
pub const POD_LAG_FILE: &str = "pod_lag.csv";
pub const DMD_MODES_RE_FILE: &str = "dmd_modes_re.khsnap";
pub const DMD_MODES_IM_FILE: &str = "dmd_modes_im.khsnap";
pub const DMD_SPECTRUM_FILE: &str = "dmd_spectrum.csv";

#[derive(Debug, Parser)]
#[command(name = "jetmodes", version, about = "Co-axial jet snapshots with POD and DMD")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the jet initial condition (U, V, scalar) as a three-field snapshot file.
    GenIc {
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=2))]
        case: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Grid points per side.
        #[arg(long, default_value_t = 128)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the solver and store the collected scalar snapshots.
    Simulate {
        /// TOML run description; defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Proper orthogonal decomposition of a snapshot file.
    Pod {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        /// Time coefficients written per snapshot.
        #[arg(long, default_value_t = 5)]
        coefficients: usize,
        /// Mode pair for the lag-correlation table.
        #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [3, 4])]
        lag_pair: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        max_lag: usize,
    },
    /// Companion-matrix dynamic mode decomposition of a snapshot file.
    Dmd {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
        rank_tol: f64,
    },
    /// Time-averaged scalar field (PGM) and its transverse profile (CSV).
    MeanProfile {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Render stored POD or DMD modes as PGM images.
    Export {
        #[arg(long, value_enum)]
        modes: ModeKind,
        #[arg(long, default_value_t = 5)]
        count: usize,
        #[arg(long)]
        out_dir: PathBuf,
        /// DMD mode ranking.
        #[arg(long, value_enum, default_value_t = DmdOrder::Amplitude)]
        order: DmdOrder,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeKind {
    Pod,
    Dmd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DmdOrder {
    Amplitude,
    Frequency,
}

/// Parses `args` (including the program name) and runs the command. Returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::GenIc { case, seed, n, out } => gen_ic(case, seed, n, &out),
        Command::Simulate { config, out } => simulate(config.as_deref(), &out),
        Command::Pod {
            input,
            out_dir,
            coefficients,
            lag_pair,
            max_lag,
        } => run_pod(&input, &out_dir, coefficients, (lag_pair[0], lag_pair[1]), max_lag),
        Command::Dmd {
            input,
            out_dir,
            rank_tol,
        } => run_dmd(&input, &out_dir, rank_tol),
        Command::MeanProfile { input, out } => mean_profile(&input, &out),
        Command::Export {
            modes,
            count,
            out_dir,
            order,
        } => export(modes, count, &out_dir, order),
    }
}

fn gen_ic(case: u32, seed: u64, n: usize, out: &Path) -> Result<()> {
    let jet = JetConfig { n, seed, ..preset(case)? };
    jet.validate()?;
    let ic = build_initial_conditions(&jet)?;
    let s = crate::field::assemble_snapshots(&[ic.u, ic.v, ic.scalar], 1.0)?;
    io::write_snapshots(out, &s)?;
    info!("wrote initial condition for case {case}, seed {seed} to {}", out.display());
    Ok(())
}

/// Sidecar holding the time-averaged `U` and `V` of a simulated run.
pub fn mean_velocity_path(snapshots: &Path) -> PathBuf {
    let stem = snapshots
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    snapshots.with_file_name(format!("{stem}_mean_velocity.khsnap"))
}

fn simulate(config: Option<&Path>, out: &Path) -> Result<()> {
    let cfg = match config {
        Some(p) => io::read_run_config(p)?,
        None => RunConfig::default(),
    };
    let jet = cfg.jet()?;
    let ic = build_initial_conditions(&jet)?;
    let grid = jet.grid()?;
    let mut solver = Solver::new(&grid, cfg.sim)?;
    let state0 = solver.init_state(&ic.u, &ic.v, &ic.scalar)?;
    info!(
        "case {} seed {} n {}: {} steps of dt = {:.4e}",
        cfg.case,
        cfg.seed,
        cfg.n,
        cfg.sim.n_steps,
        solver.dt()
    );
    let run = run_collect(&cfg.sim, &state0)?;
    io::write_snapshots(out, &run.snapshots)?;
    let means = crate::field::assemble_snapshots(&[run.mean_u, run.mean_v], run.snapshots.dt_snap())?;
    io::write_snapshots(&mean_velocity_path(out), &means)?;
    info!(
        "wrote {} snapshots (dt_snap = {:.4e}) to {}",
        run.snapshots.cols(),
        run.snapshots.dt_snap(),
        out.display()
    );
    Ok(())
}

fn matrix_file(like: &SnapshotMatrix, data: Array2<f64>) -> Result<SnapshotMatrix> {
    SnapshotMatrix::new(*like.grid(), data, like.dt_snap())
}

fn run_pod(input: &Path, out_dir: &Path, coefficients: usize, lag_pair: (usize, usize), max_lag: usize) -> Result<()> {
    let s = io::read_snapshots(input)?;
    let r = pod::decompose(&s)?;
    std::fs::create_dir_all(out_dir)?;
    io::write_snapshots(&out_dir.join(POD_MODES_FILE), &matrix_file(&s, r.modes.clone())?)?;
    let mean = r.mean.clone().insert_axis(Axis(1));
    io::write_snapshots(&out_dir.join(POD_MEAN_FILE), &matrix_file(&s, mean)?)?;
    io::export_pod_energy_csv(&r, &out_dir.join(POD_ENERGY_FILE))?;
    io::export_time_coefficients_csv(&r, s.dt_snap(), coefficients, &out_dir.join(POD_COEFFICIENTS_FILE))?;
    let n = r.n_modes();
    if lag_pair.0.max(lag_pair.1) <= n && lag_pair.0.min(lag_pair.1) >= 1 {
        io::export_lag_table(&r, &[lag_pair], max_lag, &out_dir.join(POD_LAG_FILE))?;
    } else {
        warn!("lag pair {lag_pair:?} outside 1..={n}; no lag table written");
    }
    match r.modes_for_energy(0.95) {
        Some(k) => info!("{k} of {n} POD modes carry 95% of the fluctuation energy"),
        None => info!("fluctuation energy is zero"),
    }
    Ok(())
}

fn run_dmd(input: &Path, out_dir: &Path, rank_tol: f64) -> Result<()> {
    if !(rank_tol.is_finite() && rank_tol >= 0.0) {
        return Err(Error::Config(format!("rank tolerance {rank_tol} must be non-negative")));
    }
    let s = io::read_snapshots(input)?;
    let r = dmd::decompose(&s, rank_tol)?;
    std::fs::create_dir_all(out_dir)?;
    io::export_spectrum_csv(&r, &out_dir.join(DMD_SPECTRUM_FILE))?;
    io::write_snapshots(&out_dir.join(DMD_MODES_RE_FILE), &matrix_file(&s, r.modes.mapv(|z| z.re))?)?;
    io::write_snapshots(&out_dir.join(DMD_MODES_IM_FILE), &matrix_file(&s, r.modes.mapv(|z| z.im))?)?;
    let unstable = r.stability.iter().filter(|&&c| c == dmd::Stability::Unstable).count();
    info!("{} DMD eigenvalues, {unstable} unstable", r.eigenvalues.len());
    Ok(())
}

fn mean_profile(input: &Path, out: &Path) -> Result<()> {
    let s = io::read_snapshots(input)?;
    let grid = *s.grid();
    let n = grid.n();
    let mean = s.data().mean_axis(Axis(1)).expect("at least one snapshot");
    let row_mean = |v: &ndarray::Array1<f64>| -> Vec<f64> {
        v.exact_chunks(n).into_iter().map(|r| r.sum() / n as f64).collect()
    };
    let y: Vec<f64> = grid.coords().to_vec();
    let scalar = row_mean(&mean);

    let sidecar = mean_velocity_path(input);
    let u_profile = if sidecar.exists() {
        let v = io::read_snapshots(&sidecar)?;
        if v.grid() != &grid {
            return Err(Error::Dimension("mean-velocity file grid differs from snapshots".into()));
        }
        Some(row_mean(&v.data().column(0).to_owned()))
    } else {
        None
    };

    let mut columns: Vec<(&str, &[f64])> = vec![("y", &y), ("scalar", &scalar)];
    if let Some(u) = &u_profile {
        columns.push(("u", u));
    }
    io::export_columns_csv(&columns, out)?;
    io::export_mode_image(mean.view(), &grid, &out.with_extension("pgm"))?;
    Ok(())
}

fn export(kind: ModeKind, count: usize, out_dir: &Path, order: DmdOrder) -> Result<()> {
    if count == 0 {
        return Err(Error::Contract("--count must be at least 1".into()));
    }
    match kind {
        ModeKind::Pod => {
            let modes = io::read_snapshots(&out_dir.join(POD_MODES_FILE))?;
            let k = clip_count(count, modes.cols());
            for i in 0..k {
                let path = out_dir.join(format!("pod_mode_{:02}.pgm", i + 1));
                io::export_mode_image(modes.data().column(i), modes.grid(), &path)?;
            }
        }
        ModeKind::Dmd => {
            let re = io::read_snapshots(&out_dir.join(DMD_MODES_RE_FILE))?;
            let im = io::read_snapshots(&out_dir.join(DMD_MODES_IM_FILE))?;
            let spectrum = io::read_spectrum_csv(&out_dir.join(DMD_SPECTRUM_FILE))?;
            if re.data().dim() != im.data().dim() || spectrum.len() != re.cols() {
                return Err(Error::Dimension("DMD output files disagree on mode count".into()));
            }
            let amplitude: Vec<f64> = (0..re.cols())
                .map(|j| {
                    let a = re.data().column(j);
                    let b = im.data().column(j);
                    (a.dot(&a) + b.dot(&b)).sqrt()
                })
                .collect();
            let mut idx: Vec<usize> = (0..re.cols()).collect();
            match order {
                DmdOrder::Amplitude => {
                    idx.sort_by(|&a, &b| amplitude[b].total_cmp(&amplitude[a]).then(a.cmp(&b)))
                }
                DmdOrder::Frequency => idx.sort_by(|&a, &b| {
                    spectrum[a]
                        .lambda_im
                        .abs()
                        .total_cmp(&spectrum[b].lambda_im.abs())
                        .then(amplitude[b].total_cmp(&amplitude[a]))
                        .then(a.cmp(&b))
                }),
            }
            let k = clip_count(count, idx.len());
            for (rank, &j) in idx.iter().take(k).enumerate() {
                let mode: ndarray::Array1<Complex64> = re
                    .data()
                    .column(j)
                    .iter()
                    .zip(im.data().column(j))
                    .map(|(&a, &b)| Complex64::new(a, b))
                    .collect();
                let path = out_dir.join(format!("dmd_mode_{:02}.pgm", rank + 1));
                io::export_complex_mode_image(mode.view(), re.grid(), &path)?;
            }
        }
    }
    Ok(())
}

fn clip_count(count: usize, available: usize) -> usize {
    if count > available {
        warn!("requested {count} modes, only {available} available");
        available
    } else {
        count
    }
}
