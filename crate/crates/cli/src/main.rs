//! `plateau`: solve for a critical point of boundary bending plus membrane
//! energy and write the results.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use plateau_cli::run::CHECK_TOL;
use plateau_cli::{check_gradient, exit, run, CliError, ProblemConfig};

#[derive(Debug, Parser)]
#[command(name = "plateau", version, about)]
struct Args {
    /// Flat `key = value` file; flags override its settings.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Gmsh MSH 2.2 mesh of the unit disc.
    #[arg(long, value_name = "PATH", conflicts_with = "generate")]
    mesh: Option<PathBuf>,
    /// Generate a graded disc mesh with N boundary vertices.
    #[arg(long, num_args = 2, value_names = ["N", "RATIO"])]
    generate: Option<Vec<String>>,
    /// identity, aniso_trace or aniso_shear.
    #[arg(long)]
    tensor: Option<String>,
    /// disc, ellipse, paraboloid, pringle or shoehorn.
    #[arg(long)]
    guess: Option<String>,
    #[arg(long, value_name = "R")]
    mu: Option<String>,
    #[arg(long, value_name = "R")]
    alpha: Option<String>,
    #[arg(long, value_name = "R")]
    epsilon: Option<String>,
    /// Absolute residual tolerance.
    #[arg(long, value_name = "R")]
    tol: Option<String>,
    #[arg(long, value_name = "N")]
    max_iters: Option<String>,
    /// Newton matrix shift factor; 0 gives plain Newton.
    #[arg(long, value_name = "R")]
    stabilization: Option<String>,
    /// Assembly threads.
    #[arg(long, value_name = "N")]
    threads: Option<String>,
    #[arg(long, value_name = "DIR")]
    output: Option<PathBuf>,
    /// Seed of the gradient check states.
    #[arg(long, value_name = "N")]
    seed: Option<String>,
    /// Compare the residual with finite differences on a coarse mesh and exit.
    #[arg(long)]
    check_gradient: bool,
}

fn configure(args: &Args) -> Result<ProblemConfig, CliError> {
    let mut config = ProblemConfig::default();
    if let Some(path) = &args.config {
        config.load_file(path)?;
    }
    let path_text = |p: &Option<PathBuf>| p.as_ref().map(|p| p.to_string_lossy().into_owned());
    let overrides = [
        ("mesh", path_text(&args.mesh)),
        ("generate", args.generate.as_ref().map(|v| v.join(" "))),
        ("tensor", args.tensor.clone()),
        ("guess", args.guess.clone()),
        ("mu", args.mu.clone()),
        ("alpha", args.alpha.clone()),
        ("epsilon", args.epsilon.clone()),
        ("tol", args.tol.clone()),
        ("max_iters", args.max_iters.clone()),
        ("stabilization", args.stabilization.clone()),
        ("threads", args.threads.clone()),
        ("output", path_text(&args.output)),
        ("seed", args.seed.clone()),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            config.set(key, &v, None)?;
        }
    }
    Ok(config)
}

fn main_inner(args: &Args) -> Result<i32, CliError> {
    let config = configure(args)?;
    if let Some(n) = config.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("thread pool already initialized: {e}");
        }
    }
    if args.check_gradient {
        let mut worst = 0.0f64;
        let mut text = String::new();
        for (seed, err) in check_gradient(&config.problem, config.seed)? {
            text += &format!("seed {seed}: max relative error {err:.3e}\n");
            worst = worst.max(err);
        }
        let ok = worst <= CHECK_TOL;
        text += &format!("gradient check {} (tolerance {CHECK_TOL:e})\n", if ok { "passed" } else { "FAILED" });
        let _ = std::io::stdout().write_all(text.as_bytes());
        return Ok(if ok { exit::SUCCESS } else { exit::GRADIENT_CHECK });
    }
    let outcome = run(&config)?;
    let r = &outcome.report;
    let s = &outcome.shape;
    let mut text = format!(
        "{} after {} iterations, |F| = {:.3e}\n",
        r.termination_reason,
        r.iterations,
        r.final_residual()
    );
    if let Some(f) = &r.failure {
        text += &format!("  {f}\n");
    }
    text += &format!("energy {:.10e}\n", outcome.energy.total);
    text += &format!(
        "perimeter {:.10}  max speed violation {:.3e}  circularity {:.3e}  planarity {:.3e}  self-intersection {}\n",
        s.perimeter, s.max_speed_violation, s.circularity, s.planarity, s.self_intersection_hint
    );
    if r.converged && !s.constraints_satisfied() {
        text += "constraint thresholds (defaults) not met\n";
    }
    text += &format!("results in {}\n", config.output_dir.display());
    // a closed pipe is not a failure of the run
    let _ = std::io::stdout().write_all(text.as_bytes());
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    let code = match main_inner(&args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
