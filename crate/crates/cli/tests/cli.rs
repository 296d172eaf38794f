//! End-to-end runs of the `plateau` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use plateau_core::mesh::{generate_disc_mesh, write_msh};

fn plateau(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plateau")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn summary_value(dir: &Path, key: &str) -> String {
    let mut r = csv::Reader::from_path(dir.join("summary.csv")).unwrap();
    r.records()
        .map(|rec| rec.unwrap())
        .find(|rec| &rec[0] == key)
        .map(|rec| rec[1].to_string())
        .unwrap_or_else(|| panic!("no {key} in summary"))
}

fn residuals(dir: &Path) -> Vec<(f64, String)> {
    let mut r = csv::Reader::from_path(dir.join("iterations.csv")).unwrap();
    assert_eq!(r.headers().unwrap(), vec!["iter", "residual_norm", "step_length", "status"]);
    r.records()
        .map(|rec| {
            let rec = rec.unwrap();
            (rec[1].parse().unwrap(), rec[3].to_string())
        })
        .collect()
}

#[test]
fn disc_run_writes_all_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("out");
    let out = plateau(&["--generate", "24", "0.5", "--guess", "disc", "--output", dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["initial.vtu", "solution.vtu", "iterations.csv", "summary.csv", "traction.csv", "config.txt"] {
        assert!(dir.join(f).is_file(), "{f}");
    }
    let rows = residuals(&dir);
    assert!(rows.windows(2).all(|w| w[1].0 < w[0].0), "residuals decrease");
    assert_eq!(rows.last().unwrap().1, "converged");
    assert!(rows[..rows.len() - 1].iter().all(|r| r.1.is_empty()));
    assert_eq!(summary_value(&dir, "constraints_satisfied"), "true");
    // the VTU holds six points per cell
    let cells = generate_disc_mesh(24, 0.5).unwrap().n_triangles();
    let vtu = fs::read_to_string(dir.join("solution.vtu")).unwrap();
    let points: usize = vtu.split("NumberOfPoints=\"").nth(1).unwrap().split('"').next().unwrap().parse().unwrap();
    assert_eq!(points, 6 * cells);
}

#[test]
fn disc_on_64_boundary_vertices_is_circular() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("out");
    let out = plateau(&["--generate", "64", "0.5", "--output", dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let circularity: f64 = summary_value(&dir, "circularity").parse().unwrap();
    assert!(circularity < 1e-3, "{circularity}");
}

#[test]
fn unknown_tensor_is_a_usage_error_and_writes_nothing() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("out");
    let out = plateau(&["--tensor", "steel", "--output", dir.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("steel"));
    assert!(!dir.exists());
}

#[test]
fn missing_mesh_is_an_input_error_and_writes_nothing() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("out");
    let mesh = tmp.path().join("absent.msh");
    let out = plateau(&["--mesh", mesh.to_str().unwrap(), "--output", dir.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert!(!dir.exists());
}

#[test]
fn mesh_file_input() {
    let tmp = tempfile::tempdir().unwrap();
    let mesh = tmp.path().join("disc.msh");
    write_msh(&generate_disc_mesh(24, 0.5).unwrap(), &mesh).unwrap();
    let dir = tmp.path().join("out");
    let out = plateau(&["--mesh", mesh.to_str().unwrap(), "--output", dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn config_file_with_flag_override() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.cfg");
    let dir = tmp.path().join("out");
    fs::write(
        &cfg,
        format!(
            "# paraboloid on a coarse mesh\ngenerate = 24 0.5\nguess = paraboloid\nmax_iters = 1\noutput = {}\n",
            dir.display()
        ),
    )
    .unwrap();
    let out = plateau(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 4);
    assert_eq!(residuals(&dir).last().unwrap().1, "max_iterations");
    let out = plateau(&["--config", cfg.to_str().unwrap(), "--max-iters", "50"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn bad_config_line_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.cfg");
    fs::write(&cfg, "guess disc\n").unwrap();
    assert_eq!(code(&plateau(&["--config", cfg.to_str().unwrap()])), 2);
    assert_eq!(code(&plateau(&["--generate", "16"])), 2);
}

#[test]
fn line_search_failure_has_its_own_code() {
    // plain Newton from the shoehorn stalls on the coarse mesh
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("out");
    let out = plateau(&[
        "--generate", "16", "0.5", "--guess", "shoehorn", "--stabilization", "0", "--output",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 5);
    assert_eq!(residuals(&dir).last().unwrap().1, "line_search_failure");
}

#[test]
fn single_thread_runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let dir = tmp.path().join(name);
        let out = plateau(&[
            "--generate", "24", "0.5", "--guess", "ellipse", "--threads", "1", "--output",
            dir.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
        dir
    };
    let (a, b) = (run("a"), run("b"));
    for f in ["iterations.csv", "summary.csv", "traction.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn gradient_check_mode() {
    let out = plateau(&["--check-gradient", "--tensor", "aniso_trace"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("gradient check passed"), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("seed")).count(), 3);
}
