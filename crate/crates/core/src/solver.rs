//! Newton's method with cubic backtracking on the merit `1/2 |F|^2`.

use std::fmt;

use crate::fe::Discretization;
use crate::forms::{Assembler, FormsError, Problem};
use crate::state::State;
use nalgebra::{Matrix3, Vector3};

pub use crate::ldl::{solve_linear, Factorization, LinearError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iters: usize,
    /// Armijo constant of the sufficient decrease test.
    pub ls_sufficient_decrease: f64,
    pub ls_min_step: f64,
    pub ls_max_backtracks: usize,
    /// The Newton matrix is shifted by `delta * diag(M_x, -M_l)` with
    /// `delta = stabilization * min(|F|, 1)`; zero gives the plain Newton
    /// matrix.
    pub stabilization: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            abs_tol: 1e-6,
            rel_tol: 1e-8,
            max_iters: 50,
            ls_sufficient_decrease: 1e-4,
            ls_min_step: 1e-12,
            ls_max_backtracks: 40,
            stabilization: 0.1,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        let reals = [
            ("abs_tol", self.abs_tol),
            ("rel_tol", self.rel_tol),
            ("ls_sufficient_decrease", self.ls_sufficient_decrease),
            ("ls_min_step", self.ls_min_step),
        ];
        for (name, value) in reals {
            if !(value > 0.0 && value.is_finite()) {
                return Err(SolverError::InvalidConfig(format!("{name} must be positive, got {value}")));
            }
        }
        if !(self.stabilization >= 0.0 && self.stabilization.is_finite()) {
            return Err(SolverError::InvalidConfig(format!(
                "stabilization must be non-negative, got {}",
                self.stabilization
            )));
        }
        if self.ls_sufficient_decrease >= 1.0 {
            return Err(SolverError::InvalidConfig(
                "ls_sufficient_decrease must be below 1".into(),
            ));
        }
        if self.max_iters == 0 || self.ls_max_backtracks == 0 {
            return Err(SolverError::InvalidConfig(
                "max_iters and ls_max_backtracks must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolverError {
    #[error(transparent)]
    Forms(#[from] FormsError),
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Linear(#[from] LinearError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TerminationReason {
    Converged,
    MaxIterations,
    LineSearchFailure,
    LinearFailure,
}

impl TerminationReason {
    pub fn as_str(self) -> &'static str {
        match self {
            TerminationReason::Converged => "converged",
            TerminationReason::MaxIterations => "max_iterations",
            TerminationReason::LineSearchFailure => "line_search_failure",
            TerminationReason::LinearFailure => "linear_failure",
        }
    }
}

impl fmt::Display for TerminationReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonReport {
    pub converged: bool,
    /// Accepted Newton steps.
    pub iterations: usize,
    /// `|F|_2` at the initial state and after every accepted step.
    pub residual_norms: Vec<f64>,
    pub step_lengths: Vec<f64>,
    pub termination_reason: TerminationReason,
    /// The tolerance the final residual was tested against.
    pub target: f64,
    /// Description of the failure when not converged.
    pub failure: Option<String>,
}

impl NewtonReport {
    pub fn final_residual(&self) -> f64 {
        *self.residual_norms.last().expect("at least the initial residual")
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LineSearchError {
    #[error("search direction is not a descent direction (slope {0})")]
    NotDescent(f64),
    #[error("no acceptable step above {min_step} (last trial {last_step}) after {backtracks} backtracks")]
    Exhausted {
        last_step: f64,
        min_step: f64,
        backtracks: usize,
    },
}

/// An accepted step and its merit value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSearchStep {
    pub step: f64,
    pub merit: f64,
    pub backtracks: usize,
}

/// Backtracking from the full step: quadratic interpolation on the first
/// reduction, cubic interpolation through the last two trials afterwards, each
/// new step clamped to `[0.1, 0.5]` times the previous one. Non-finite merit
/// values count as failed trials and shrink the step by the lower factor.
pub fn line_search_cubic(
    mut merit: impl FnMut(f64) -> f64,
    merit0: f64,
    g0: f64,
    config: &SolverConfig,
) -> Result<LineSearchStep, LineSearchError> {
    if !(g0 < 0.0) {
        return Err(LineSearchError::NotDescent(g0));
    }
    let c = config.ls_sufficient_decrease;
    let mut lambda = 1.0;
    let mut prev: Option<(f64, f64)> = None;
    let mut backtracks = 0;
    loop {
        let phi = merit(lambda);
        if phi.is_finite() && phi <= merit0 + c * lambda * g0 {
            return Ok(LineSearchStep {
                step: lambda,
                merit: phi,
                backtracks,
            });
        }
        if backtracks >= config.ls_max_backtracks {
            return Err(LineSearchError::Exhausted {
                last_step: lambda,
                min_step: config.ls_min_step,
                backtracks,
            });
        }
        let trial = if !phi.is_finite() {
            0.1 * lambda
        } else if let Some((lp, phip)) = prev {
            let r1 = phi - merit0 - g0 * lambda;
            let r2 = phip - merit0 - g0 * lp;
            let d = lambda - lp;
            let a = (r1 / (lambda * lambda) - r2 / (lp * lp)) / d;
            let b = (-lp * r1 / (lambda * lambda) + lambda * r2 / (lp * lp)) / d;
            if a == 0.0 {
                -g0 / (2.0 * b)
            } else {
                let disc = b * b - 3.0 * a * g0;
                if disc < 0.0 {
                    0.5 * lambda
                } else if b <= 0.0 {
                    (-b + disc.sqrt()) / (3.0 * a)
                } else {
                    // same root, cancellation-free form
                    -g0 / (b + disc.sqrt())
                }
            }
        } else {
            -g0 * lambda * lambda / (2.0 * (phi - merit0 - g0 * lambda))
        };
        let trial = if trial.is_finite() { trial } else { 0.5 * lambda };
        let next = trial.clamp(0.1 * lambda, 0.5 * lambda);
        prev = if phi.is_finite() { Some((lambda, phi)) } else { None };
        lambda = next;
        backtracks += 1;
        if lambda < config.ls_min_step {
            return Err(LineSearchError::Exhausted {
                last_step: lambda,
                min_step: config.ls_min_step,
                backtracks,
            });
        }
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves the (stabilized) Newton system. When the stabilized step is not
/// a descent direction for the merit, the plain Newton step is used instead.
fn newton_direction(
    asm: &Assembler,
    state: &State,
    jac: &crate::sparse::SparseSymMatrix,
    rhs: &[f64],
    delta: f64,
) -> Result<Vec<f64>, SolverError> {
    if delta > 0.0 {
        if let Ok(dz) = stabilized_direction(asm, state, rhs, delta) {
            if dot(rhs, &jac.matvec(&dz)) > 0.0 {
                return Ok(dz);
            }
            log::debug!("newton: stabilized step is not a descent direction");
        }
    }
    Ok(solve_linear(jac, rhs)?)
}

/// Step for `J + delta diag(P M_x P, -M_l)`, where `P` removes the rigid
/// translations: those are left to the anchor term. With `U = M_x T` for the
/// translations `T` and `T^T M_x T = |D| I`, the matrix is
/// `A - delta / |D| U U^T` with `A` the plainly shifted Jacobian, and the
/// rank-3 correction is applied through the Woodbury identity.
fn stabilized_direction(asm: &Assembler, state: &State, rhs: &[f64], delta: f64) -> Result<Vec<f64>, SolverError> {
    let a = asm.stabilized_jacobian(state, delta, delta)?;
    let fact = Factorization::new(&a)?;
    let mut dz = fact.solve(&a, rhs)?;
    let u = asm.translation_loads();
    let area: f64 = u[0].iter().step_by(3).sum();
    let w: Vec<Vec<f64>> = u.iter().map(|ui| fact.solve(&a, ui)).collect::<Result<_, _>>()?;
    // (|D| / delta I - U^T W) c = U^T dz
    let s = Matrix3::from_fn(|i, j| if i == j { area / delta } else { 0.0 } - dot(&u[i], &w[j]));
    let c = s
        .lu()
        .solve(&Vector3::from_fn(|i, _| dot(&u[i], &dz)))
        .ok_or(LinearError::Singular { dof: 0 })?;
    for (j, wj) in w.iter().enumerate() {
        for (d, x) in dz.iter_mut().zip(wj) {
            *d += c[j] * x;
        }
    }
    Ok(dz)
}

/// Newton iteration from `initial`. Solver breakdowns are reported through
/// [`NewtonReport::termination_reason`]; the returned state is the last
/// accepted iterate.
pub fn newton_solve(
    disc: &Discretization,
    problem: &Problem,
    initial: &State,
    config: &SolverConfig,
) -> Result<(State, NewtonReport), SolverError> {
    config.validate()?;
    let asm = Assembler::new(disc, *problem)?;
    let layout = disc.layout();
    let mut z = initial.to_vector();
    let mut state = initial.clone();
    let mut f = asm.residual(&state)?;
    let mut norms = vec![norm(&f)];
    let mut steps = Vec::new();
    let target = config.abs_tol.max(config.rel_tol * norms[0]);
    let mut failure = None;
    log::info!("newton: |F0| = {:.6e}, target {:.3e}", norms[0], target);

    let reason = loop {
        let fnorm = *norms.last().expect("non-empty");
        if fnorm <= target {
            break TerminationReason::Converged;
        }
        if steps.len() >= config.max_iters {
            failure = Some(format!("{} iterations without reaching {target:e}", config.max_iters));
            break TerminationReason::MaxIterations;
        }
        let jac = asm.jacobian(&state)?;
        let rhs: Vec<f64> = f.iter().map(|v| -v).collect();
        let delta = config.stabilization * fnorm.min(1.0);
        let solved = newton_direction(&asm, &state, &jac, &rhs, delta);
        let dz = match solved {
            Ok(dz) => dz,
            Err(SolverError::Linear(e)) => {
                log::warn!("newton: linear solve failed: {e}");
                failure = Some(e.to_string());
                break TerminationReason::LinearFailure;
            }
            Err(e) => return Err(e),
        };
        let merit0 = 0.5 * fnorm * fnorm;
        let g0 = dot(&f, &jac.matvec(&dz));
        let mut trials: Vec<(f64, Vec<f64>)> = Vec::new();
        let evaluate = |lambda: f64, trials: &mut Vec<(f64, Vec<f64>)>| -> f64 {
            let zt: Vec<f64> = z.iter().zip(&dz).map(|(a, b)| a + lambda * b).collect();
            let st = State::from_vector(layout, &zt).expect("length preserved");
            match asm.residual(&st) {
                Ok(r) => {
                    let n = norm(&r);
                    trials.push((lambda, r));
                    0.5 * n * n
                }
                Err(_) => f64::NAN,
            }
        };
        match line_search_cubic(|l| evaluate(l, &mut trials), merit0, g0, config) {
            Ok(accepted) => {
                let lambda = accepted.step;
                for (a, b) in z.iter_mut().zip(&dz) {
                    *a += lambda * b;
                }
                state = State::from_vector(layout, &z).expect("length preserved");
                f = trials
                    .into_iter()
                    .rev()
                    .find(|(l, _)| *l == lambda)
                    .map(|(_, r)| r)
                    .expect("accepted step was evaluated");
                norms.push(norm(&f));
                steps.push(lambda);
                log::info!(
                    "newton: iter {:>3}  |F| = {:.6e}  step {:.4}",
                    steps.len(),
                    norms.last().expect("non-empty"),
                    lambda
                );
            }
            Err(e) => {
                log::warn!("newton: line search failed: {e}");
                failure = Some(e.to_string());
                break TerminationReason::LineSearchFailure;
            }
        }
    };
    let report = NewtonReport {
        converged: reason == TerminationReason::Converged,
        iterations: steps.len(),
        residual_norms: norms,
        step_lengths: steps,
        termination_reason: reason,
        target,
        failure,
    };
    Ok((state, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_quadratic_accepts_the_full_step() {
        let cfg = SolverConfig::default();
        let s = line_search_cubic(|l| (1.0 - l) * (1.0 - l), 1.0, -2.0, &cfg).unwrap();
        assert_eq!(s.step, 1.0);
        assert_eq!(s.backtracks, 0);
    }

    #[test]
    fn quartic_penalty_backtracks_to_an_armijo_step() {
        let cfg = SolverConfig::default();
        let phi = |l: f64| (1.0 - l).powi(2) + 100.0 * l.powi(4);
        let s = line_search_cubic(phi, 1.0, -2.0, &cfg).unwrap();
        assert!(s.step < 1.0 && s.step > 0.0);
        assert!(phi(s.step) <= 1.0 + cfg.ls_sufficient_decrease * s.step * -2.0);
        assert!(s.backtracks >= 1);
    }

    #[test]
    fn steps_are_safeguarded() {
        let cfg = SolverConfig::default();
        let mut trials = Vec::new();
        let phi = |l: f64| {
            trials.push(l);
            (1.0 - l).powi(2) + 1e4 * l.powi(6)
        };
        line_search_cubic(phi, 1.0, -2.0, &cfg).unwrap();
        for w in trials.windows(2) {
            let ratio = w[1] / w[0];
            assert!((0.1 - 1e-15..=0.5 + 1e-15).contains(&ratio), "{ratio}");
        }
    }

    #[test]
    fn rejects_ascent_directions() {
        let cfg = SolverConfig::default();
        assert_eq!(
            line_search_cubic(|l| l, 0.0, 0.0, &cfg),
            Err(LineSearchError::NotDescent(0.0))
        );
        assert!(matches!(
            line_search_cubic(|l| l, 0.0, 1.0, &cfg),
            Err(LineSearchError::NotDescent(_))
        ));
    }

    #[test]
    fn exhaustion_is_reported() {
        let cfg = SolverConfig::default();
        // slope claims descent but the merit only increases
        let out = line_search_cubic(|l| 1.0 + l, 1.0, -1.0, &cfg);
        assert!(matches!(out, Err(LineSearchError::Exhausted { .. })));
    }

    #[test]
    fn non_finite_merit_shrinks_the_step() {
        let cfg = SolverConfig::default();
        let s = line_search_cubic(|l| if l > 0.2 { f64::NAN } else { (1.0 - l).powi(2) }, 1.0, -2.0, &cfg).unwrap();
        assert!(s.step <= 0.2 && s.step > 0.0);
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        let bad = SolverConfig {
            ls_sufficient_decrease: 1.5,
            ..SolverConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = SolverConfig {
            abs_tol: 0.0,
            ..SolverConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
