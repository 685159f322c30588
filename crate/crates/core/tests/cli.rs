use std::path::Path;
use std::process::{Command, Output};

use jetmodes::field::{Grid2D, SnapshotMatrix};
use jetmodes::io::{read_snapshots, write_snapshots, FILE_DOMAIN_LENGTH};
use ndarray::Array2;

fn jetmodes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jetmodes"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn write_matrix(path: &Path, n: usize, cols: usize, f: impl Fn(usize, usize) -> f64) {
    let grid = Grid2D::new(n, FILE_DOMAIN_LENGTH).unwrap();
    let data = Array2::from_shape_fn((n * n, cols), |(k, j)| f(k, j));
    write_snapshots(path, &SnapshotMatrix::new(grid, data, 0.5).unwrap()).unwrap();
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(jetmodes(&[]).status.code(), Some(1));
    assert_eq!(jetmodes(&["pod", "--bogus"]).status.code(), Some(1));
    assert_eq!(jetmodes(&["gen-ic", "--case", "3", "--out", "x"]).status.code(), Some(1));
    let help = jetmodes(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&help.stdout).contains("simulate"));
}

#[test]
fn gen_ic_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.khsnap"), dir.path().join("b.khsnap"));
    for out in [&a, &b] {
        let o = jetmodes(&["gen-ic", "--case", "1", "--seed", "42", "--n", "32", "--out", p(out)]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    let s = read_snapshots(&a).unwrap();
    assert_eq!(s.cols(), 3);
    let u_max = s.data().column(0).iter().fold(f64::MIN, |m, &v| m.max(v));
    assert_eq!(u_max, 0.1);

    let other = dir.path().join("c.khsnap");
    jetmodes(&["gen-ic", "--case", "1", "--seed", "43", "--n", "32", "--out", p(&other)]);
    assert_ne!(bytes, std::fs::read(&other).unwrap());
}

#[test]
fn data_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let two = dir.path().join("two.khsnap");
    write_matrix(&two, 4, 2, |k, j| (k * (j + 1)) as f64);
    let o = jetmodes(&["dmd", "--in", p(&two), "--out-dir", p(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("insufficient data"));

    let bad = dir.path().join("bad.khsnap");
    let mut bytes = std::fs::read(&two).unwrap();
    bytes[..8].copy_from_slice(b"KHSNAP00");
    std::fs::write(&bad, bytes).unwrap();
    let o = jetmodes(&["pod", "--in", p(&bad), "--out-dir", p(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("offset 7"));

    let missing = dir.path().join("missing.khsnap");
    assert_eq!(jetmodes(&["pod", "--in", p(&missing), "--out-dir", p(dir.path())]).status.code(), Some(2));

    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "case = 5\n").unwrap();
    let o = jetmodes(&["simulate", "--config", p(&cfg), "--out", p(&dir.path().join("s.khsnap"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn singular_companion_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let colinear = dir.path().join("colinear.khsnap");
    write_matrix(&colinear, 4, 4, |k, j| (k as f64 + 1.0) * 0.9f64.powi(j as i32));
    let o = jetmodes(&["dmd", "--in", p(&colinear), "--out-dir", p(dir.path())]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("singular"));
}

#[test]
fn full_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cfg = d.join("run.toml");
    std::fs::write(&cfg, "case = 1\nseed = 3\nn = 32\n[sim]\nn_steps = 200\n").unwrap();
    let snaps = d.join("case1.khsnap");
    let o = jetmodes(&["simulate", "--config", p(&cfg), "--out", p(&snaps)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = read_snapshots(&snaps).unwrap();
    assert_eq!((s.rows(), s.cols()), (32 * 32, 30));
    assert!(d.join("case1_mean_velocity.khsnap").exists());

    let out = d.join("out");
    assert_eq!(jetmodes(&["pod", "--in", p(&snaps), "--out-dir", p(&out)]).status.code(), Some(0));
    assert_eq!(
        jetmodes(&["export", "--modes", "pod", "--count", "5", "--out-dir", p(&out)]).status.code(),
        Some(0)
    );
    for i in 1..=5 {
        let img = std::fs::read(out.join(format!("pod_mode_{i:02}.pgm"))).unwrap();
        assert!(img.starts_with(b"P5\n32 32\n255\n"));
        assert_eq!(img.len(), 13 + 32 * 32);
    }
    let energy = std::fs::read_to_string(out.join("pod_energy.csv")).unwrap();
    assert_eq!(energy.lines().count(), 31);
    let coeffs = std::fs::read_to_string(out.join("pod_time_coefficients.csv")).unwrap();
    assert!(coeffs.starts_with("snapshot,t,a_1,a_2,a_3,a_4,a_5\n"));
    assert!(out.join("pod_lag.csv").exists());

    assert_eq!(jetmodes(&["dmd", "--in", p(&snaps), "--out-dir", p(&out)]).status.code(), Some(0));
    let spectrum = std::fs::read_to_string(out.join("dmd_spectrum.csv")).unwrap();
    assert_eq!(spectrum.lines().count(), 30);
    assert!(out.join("dmd_spectrum_unit_circle.csv").exists());
    for order in ["amplitude", "frequency"] {
        let o = jetmodes(&["export", "--modes", "dmd", "--count", "3", "--order", order, "--out-dir", p(&out)]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for i in 1..=3 {
        assert!(out.join(format!("dmd_mode_{i:02}_re.pgm")).exists());
        assert!(out.join(format!("dmd_mode_{i:02}_im.pgm")).exists());
    }

    let profile = d.join("profile.csv");
    assert_eq!(jetmodes(&["mean-profile", "--in", p(&snaps), "--out", p(&profile)]).status.code(), Some(0));
    let text = std::fs::read_to_string(&profile).unwrap();
    assert!(text.starts_with("y,scalar,u\n"));
    assert_eq!(text.lines().count(), 33);
    assert!(d.join("profile.pgm").exists());

    // Same config, same bytes.
    let again = d.join("again.khsnap");
    jetmodes(&["simulate", "--config", p(&cfg), "--out", p(&again)]);
    assert_eq!(std::fs::read(&snaps).unwrap(), std::fs::read(&again).unwrap());
}
