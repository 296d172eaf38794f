//! Orchestration: mesh, guess, rescale, Newton, diagnostics, artifacts.

use std::fs;
use std::path::{Path, PathBuf};

use plateau_core::fe::Discretization;
use plateau_core::forms::{augmented_energy, EnergyBreakdown, FormsError, Problem};
use plateau_core::guesses::{interpolate_guess, rescale_to_perimeter, GuessError};
use plateau_core::mesh::{generate_disc_mesh, read_msh, Mesh, MeshError};
use plateau_core::solver::{newton_solve, NewtonReport, SolverError, TerminationReason};
use plateau_core::state::State;
use plateau_core::verify::{constraint_report, fd_gradient_check, random_state, traction_profile, ShapeReport};

use crate::config::{ConfigError, MeshSource, ProblemConfig};
use crate::output::{summary_rows, write_iteration_log, write_summary, write_traction, write_vtu};

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const INPUT: i32 = 3;
    pub const MAX_ITERATIONS: i32 = 4;
    pub const LINE_SEARCH_FAILURE: i32 = 5;
    pub const LINEAR_FAILURE: i32 = 6;
    pub const CONSTRAINTS: i32 = 7;
    pub const GRADIENT_CHECK: i32 = 8;
    pub const NUMERICAL: i32 = 9;
}

/// Boundary vertex count of the mesh used by the gradient check.
pub const CHECK_N_BOUNDARY: usize = 16;
/// Central difference step of the gradient check.
pub const CHECK_STEP: f64 = 1e-6;
/// Largest accepted relative error of the gradient check.
pub const CHECK_TOL: f64 = 1e-5;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error(transparent)]
    Guess(#[from] GuessError),
    #[error(transparent)]
    Forms(#[from] FormsError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Solver(SolverError::InvalidConfig(_)) => exit::USAGE,
            CliError::Mesh(_) | CliError::Io { .. } | CliError::Csv { .. } => exit::INPUT,
            CliError::Forms(FormsError::InvalidParameter { .. }) => exit::USAGE,
            CliError::Guess(_) | CliError::Forms(_) | CliError::Solver(_) => exit::NUMERICAL,
        }
    }
}

/// Everything a finished solve produced.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub initial: State,
    pub state: State,
    pub report: NewtonReport,
    pub energy: EnergyBreakdown,
    pub shape: ShapeReport,
}

impl RunOutcome {
    /// Zero iff Newton converged and the constraint thresholds hold.
    pub fn exit_code(&self) -> i32 {
        match self.report.termination_reason {
            TerminationReason::Converged if self.shape.constraints_satisfied() => exit::SUCCESS,
            TerminationReason::Converged => exit::CONSTRAINTS,
            TerminationReason::MaxIterations => exit::MAX_ITERATIONS,
            TerminationReason::LineSearchFailure => exit::LINE_SEARCH_FAILURE,
            TerminationReason::LinearFailure => exit::LINEAR_FAILURE,
        }
    }
}

pub fn load_mesh(source: &MeshSource) -> Result<Mesh, MeshError> {
    match source {
        MeshSource::File(p) => read_msh(p),
        MeshSource::Generate { n_boundary, ratio } => generate_disc_mesh(*n_boundary, *ratio),
    }
}

/// Checks everything that can be rejected before touching the disk.
pub fn validate(config: &ProblemConfig) -> Result<(), CliError> {
    config.problem.validate()?;
    config.solver.validate()?;
    Ok(())
}

/// Solves without writing anything.
pub fn solve(config: &ProblemConfig, disc: &Discretization) -> Result<RunOutcome, CliError> {
    validate(config)?;
    let initial = rescale_to_perimeter(disc, &interpolate_guess(disc, config.guess))?;
    let (state, report) = newton_solve(disc, &config.problem, &initial, &config.solver)?;
    let energy = augmented_energy(disc, &config.problem, &state)?;
    let shape = constraint_report(disc, &state);
    Ok(RunOutcome { initial, state, report, energy, shape })
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> CliError + '_ {
    move |source| CliError::Csv { path: path.to_path_buf(), source }
}

/// Full run: validates, loads the mesh, solves and writes `initial.vtu`,
/// `solution.vtu`, `iterations.csv`, `summary.csv`, `traction.csv` and the
/// effective `config.txt` into the output directory.
pub fn run(config: &ProblemConfig) -> Result<RunOutcome, CliError> {
    validate(config)?;
    let disc = Discretization::new(load_mesh(&config.mesh)?);
    log::info!(
        "mesh: {} cells, {} boundary edges, {} unknowns",
        disc.mesh().n_triangles(),
        disc.mesh().n_boundary_vertices(),
        disc.layout().total()
    );
    let dir = &config.output_dir;
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let path = dir.join("config.txt");
    fs::write(&path, config.to_text()).map_err(io_err(&path))?;

    let outcome = solve(config, &disc)?;
    let path = dir.join("initial.vtu");
    write_vtu(&disc, &outcome.initial, &path).map_err(io_err(&path))?;
    let path = dir.join("solution.vtu");
    write_vtu(&disc, &outcome.state, &path).map_err(io_err(&path))?;
    let path = dir.join("iterations.csv");
    write_iteration_log(&outcome.report, &path).map_err(csv_err(&path))?;
    let path = dir.join("summary.csv");
    write_summary(&summary_rows(&outcome.report, &outcome.energy, &outcome.shape), &path)
        .map_err(csv_err(&path))?;
    let path = dir.join("traction.csv");
    write_traction(&traction_profile(&disc, &config.problem, &outcome.state), &path).map_err(csv_err(&path))?;
    Ok(outcome)
}

/// Gradient check of the configured problem on a coarse generated mesh:
/// `(seed, max relative error)` for three random states.
pub fn check_gradient(problem: &Problem, seed: u64) -> Result<Vec<(u64, f64)>, CliError> {
    problem.validate()?;
    let disc = Discretization::new(generate_disc_mesh(CHECK_N_BOUNDARY, crate::config::DEFAULT_RATIO)?);
    (seed..seed + 3)
        .map(|s| {
            let state = random_state(&disc, s);
            Ok((s, fd_gradient_check(&disc, problem, &state, CHECK_STEP, s)?.max_error))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn outcome(reason: TerminationReason, perimeter: f64) -> RunOutcome {
        RunOutcome {
            initial: State { x: vec![], l: vec![] },
            state: State { x: vec![], l: vec![] },
            report: NewtonReport {
                converged: reason == TerminationReason::Converged,
                iterations: 1,
                residual_norms: vec![1.0, 1e-7],
                step_lengths: vec![1.0],
                termination_reason: reason,
                target: 1e-6,
                failure: None,
            },
            energy: EnergyBreakdown::default(),
            shape: ShapeReport {
                perimeter,
                max_speed_violation: 0.0,
                l2_speed_violation: 0.0,
                circularity: 0.0,
                planarity: 0.0,
                plane_normal: [0.0, 0.0, 1.0],
                plane_offset: 0.0,
                centroid: [0.0; 3],
                self_intersection_hint: false,
            },
        }
    }

    #[test]
    fn exit_codes_are_distinct_per_outcome() {
        let codes = [
            outcome(TerminationReason::Converged, 2.0 * PI).exit_code(),
            outcome(TerminationReason::Converged, 2.0 * PI + 0.1).exit_code(),
            outcome(TerminationReason::MaxIterations, 2.0 * PI).exit_code(),
            outcome(TerminationReason::LineSearchFailure, 2.0 * PI).exit_code(),
            outcome(TerminationReason::LinearFailure, 2.0 * PI).exit_code(),
        ];
        assert_eq!(
            codes,
            [exit::SUCCESS, exit::CONSTRAINTS, exit::MAX_ITERATIONS, exit::LINE_SEARCH_FAILURE, exit::LINEAR_FAILURE]
        );
    }

    #[test]
    fn error_classes() {
        let usage = CliError::Config(ConfigError::UnknownKey("x".into()));
        let input = CliError::Mesh(MeshError::Topology("open".into()));
        let numerical = CliError::Guess(GuessError::DegeneratePerimeter(0.0));
        assert_eq!([usage.exit_code(), input.exit_code(), numerical.exit_code()], [exit::USAGE, exit::INPUT, exit::NUMERICAL]);
    }
}
