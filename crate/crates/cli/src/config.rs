//! Run configuration: defaults, flat `key = value` files and overrides.
//!
//! Every key can also be given on the command line; the driver applies the
//! file first and the flags after it.

use std::fs;
use std::path::{Path, PathBuf};

use plateau_core::forms::Problem;
use plateau_core::guesses::GuessField;
use plateau_core::solver::SolverConfig;
use plateau_core::tensors::ElasticityField;

/// Boundary vertex count of the generated mesh when none is configured.
pub const DEFAULT_N_BOUNDARY: usize = 64;
/// Boundary-to-centre cell size ratio of the generated mesh.
pub const DEFAULT_RATIO: f64 = 0.5;

/// Keys understood by [`ProblemConfig::set`].
pub const KEYS: [&str; 13] = [
    "mesh",
    "generate",
    "tensor",
    "guess",
    "mu",
    "alpha",
    "epsilon",
    "tol",
    "max_iters",
    "stabilization",
    "threads",
    "output",
    "seed",
];

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("config line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("invalid value `{value}` for `{key}`: {reason}")]
    InvalidValue { key: String, value: String, reason: String },
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeshSource {
    File(PathBuf),
    Generate { n_boundary: usize, ratio: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemConfig {
    pub problem: Problem,
    pub guess: GuessField,
    pub mesh: MeshSource,
    pub solver: SolverConfig,
    /// Assembly threads; `None` leaves the pool at its default size.
    pub threads: Option<usize>,
    pub output_dir: PathBuf,
    /// Seed of the random states used by the gradient check.
    pub seed: u64,
}

impl Default for ProblemConfig {
    fn default() -> Self {
        ProblemConfig {
            problem: Problem::default(),
            guess: GuessField::Disc,
            mesh: MeshSource::Generate { n_boundary: DEFAULT_N_BOUNDARY, ratio: DEFAULT_RATIO },
            solver: SolverConfig::default(),
            threads: None,
            output_dir: PathBuf::from("plateau-out"),
            seed: 0,
        }
    }
}

/// Splits a config text into `(line, key, value)` triples. Blank lines and
/// everything after `#` are ignored; keys are normalized to snake case.
pub fn parse_key_values(text: &str) -> Result<Vec<(usize, String, String)>, ConfigError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or(ConfigError::Syntax { line: i + 1 })?;
        let key = key.trim().replace('-', "_");
        if key.is_empty() {
            return Err(ConfigError::Syntax { line: i + 1 });
        }
        out.push((i + 1, key, value.trim().to_string()));
    }
    Ok(out)
}

fn invalid(key: &str, value: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::InvalidValue { key: key.into(), value: value.into(), reason: reason.into() }
}

fn positive(key: &str, value: &str) -> Result<f64, ConfigError> {
    let v: f64 = value.parse().map_err(|_| invalid(key, value, "not a number"))?;
    if !(v > 0.0 && v.is_finite()) {
        return Err(invalid(key, value, "must be positive"));
    }
    Ok(v)
}

fn count(key: &str, value: &str) -> Result<usize, ConfigError> {
    match value.parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(invalid(key, value, "must be a positive integer")),
    }
}

impl ProblemConfig {
    /// Applies one setting. Relative mesh paths are resolved against `base`.
    pub fn set(&mut self, key: &str, value: &str, base: Option<&Path>) -> Result<(), ConfigError> {
        let key = key.replace('-', "_");
        match key.as_str() {
            "mesh" => {
                let p = PathBuf::from(value);
                let p = match base {
                    Some(b) if p.is_relative() => b.join(p),
                    _ => p,
                };
                self.mesh = MeshSource::File(p);
            }
            "generate" => {
                let parts: Vec<&str> = value.split_whitespace().collect();
                let [n, r] = parts[..] else {
                    return Err(invalid(&key, value, "expected `N RATIO`"));
                };
                let n_boundary = count(&key, n)?;
                if n_boundary < 3 {
                    return Err(invalid(&key, value, "need at least 3 boundary vertices"));
                }
                self.mesh = MeshSource::Generate { n_boundary, ratio: positive(&key, r)? };
            }
            "tensor" => {
                self.problem.tensor =
                    value.parse::<ElasticityField>().map_err(|e| invalid(&key, value, e.to_string()))?
            }
            "guess" => {
                self.guess = value.parse::<GuessField>().map_err(|e| invalid(&key, value, e.to_string()))?
            }
            "mu" => self.problem.mu = positive(&key, value)?,
            "alpha" => self.problem.alpha = positive(&key, value)?,
            "epsilon" => self.problem.epsilon = positive(&key, value)?,
            "tol" => self.solver.abs_tol = positive(&key, value)?,
            "max_iters" => self.solver.max_iters = count(&key, value)?,
            "stabilization" => {
                let v: f64 = value.parse().map_err(|_| invalid(&key, value, "not a number"))?;
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(invalid(&key, value, "must be non-negative"));
                }
                self.solver.stabilization = v;
            }
            "threads" => self.threads = Some(count(&key, value)?),
            "output" => self.output_dir = PathBuf::from(value),
            "seed" => self.seed = value.parse().map_err(|_| invalid(&key, value, "not an integer"))?,
            _ => return Err(ConfigError::UnknownKey(key)),
        }
        Ok(())
    }

    /// Applies every setting of a config file.
    pub fn load_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        let base = path.parent();
        for (_, key, value) in parse_key_values(&text)? {
            self.set(&key, &value, base)?;
        }
        Ok(())
    }

    /// The `key = value` text that reproduces this configuration.
    pub fn to_text(&self) -> String {
        let mesh = match &self.mesh {
            MeshSource::File(p) => format!("mesh = {}", p.display()),
            MeshSource::Generate { n_boundary, ratio } => format!("generate = {n_boundary} {ratio}"),
        };
        let mut s = format!(
            "{mesh}\ntensor = {}\nguess = {}\nmu = {}\nalpha = {}\nepsilon = {}\ntol = {}\nmax_iters = {}\nstabilization = {}\noutput = {}\nseed = {}\n",
            self.problem.tensor,
            self.guess.name(),
            self.problem.mu,
            self.problem.alpha,
            self.problem.epsilon,
            self.solver.abs_tol,
            self.solver.max_iters,
            self.solver.stabilization,
            self.output_dir.display(),
            self.seed,
        );
        if let Some(t) = self.threads {
            s.push_str(&format!("threads = {t}\n"));
        }
        s
    }
}
