//! Command-line front end: closed-form capacities, single solves, spectral
//! tables, family sweeps, verification suites and exponent fits.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand};
use serde_json::json;

use isocap::harness::{
    fit_exponent_with_threshold, read_csv, records_to_csv, run_sweep, verify_ineq, verify_main,
    verify_spectral, verify_truncation, write_csv, ExperimentConfig, Family,
};
use isocap::spectral::{alpha_root, q_eigenvalue};
use isocap::{
    ball_capacity, perturbed_capacity, Params, Result, ShapeFile, SolverConfig,
};

#[derive(Parser)]
#[command(
    name = "isocap",
    about = "Isocapacitary deficit experiments on star-shaped domains",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the closed-form p-capacity of a ball.
    BallCap {
        #[arg(long, default_value_t = 2)]
        dim: u32,
        #[arg(long, default_value_t = 1.5)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
    },
    /// Solve the exterior problem for a domain described by a shape file.
    Solve {
        #[arg(long, default_value_t = 2)]
        dim: u32,
        #[arg(long, default_value_t = 1.5)]
        p: f64,
        /// Shape file (JSON; see the README for the schema).
        #[arg(long)]
        shape: PathBuf,
        /// Radial grid nodes.
        #[arg(long)]
        radial: Option<usize>,
        /// Continuation schedule of kappa values, comma separated.
        #[arg(long, value_delimiter = ',')]
        kappa_schedule: Option<Vec<f64>>,
        /// Halved-grid error estimation.
        #[arg(long, action = ArgAction::Set)]
        richardson: Option<bool>,
        /// Target kappa of the perturbed integrand (0 = exact capacity).
        #[arg(long, default_value_t = 0.0)]
        kappa: f64,
        /// Include the full discrete potential in the output.
        #[arg(long)]
        full_potential: bool,
    },
    /// Print the spectral table k, alpha_k, Q_k as CSV.
    Spectral {
        #[arg(long, default_value_t = 2)]
        dim: u32,
        #[arg(long, default_value_t = 1.5)]
        p: f64,
        #[arg(long, default_value_t = 100)]
        max_degree: usize,
    },
    /// Run a shape-family sweep and emit the records as CSV.
    Sweep(SweepArgs),
    /// Run a verification suite; the exit code reports pass/fail.
    Verify {
        #[command(subcommand)]
        what: VerifyCmd,
    },
    /// Fit the log-log deficit-vs-asymmetry exponent of a sweep CSV.
    Fit {
        /// Sweep CSV produced by `isocap sweep`.
        #[arg(long = "in")]
        input: PathBuf,
        /// Noise threshold: rows need deficit and asymmetry above this
        /// multiple of the error estimate.
        #[arg(long, default_value_t = 5.0)]
        threshold: f64,
    },
}

/// Sweep flags; each one overrides the matching `ExperimentConfig` field,
/// on top of `--config` when that is given.
#[derive(Args, Clone)]
struct SweepArgs {
    /// JSON experiment config; explicit flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    dim: Option<u32>,
    #[arg(long)]
    p: Option<f64>,
    /// ellipse, harmonic or random.
    #[arg(long)]
    family: Option<Family>,
    /// Aspects (ellipse), amplitudes (harmonic) or indices (random),
    /// comma separated.
    #[arg(long, value_delimiter = ',')]
    schedule: Option<Vec<f64>>,
    /// Degree k of the harmonic family's Y_k.
    #[arg(long)]
    harmonic_degree: Option<usize>,
    /// Number of random shapes when no schedule is given.
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Angular samples per shape (0 = dimension default).
    #[arg(long)]
    grid_points: Option<usize>,
    /// Radial grid nodes.
    #[arg(long)]
    radial: Option<usize>,
    /// Continuation schedule of kappa values, comma separated.
    #[arg(long, value_delimiter = ',')]
    kappa_schedule: Option<Vec<f64>>,
    /// Halved-grid error estimation.
    #[arg(long, action = ArgAction::Set)]
    richardson: Option<bool>,
    /// CSV destination (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl SweepArgs {
    fn into_config(self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_path(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(v) = self.dim {
            cfg.dim = v;
        }
        if let Some(v) = self.p {
            cfg.p = v;
        }
        if let Some(v) = self.family {
            cfg.family = v;
        }
        if let Some(v) = self.schedule {
            cfg.schedule = v;
        }
        if let Some(v) = self.harmonic_degree {
            cfg.harmonic_degree = v;
        }
        if let Some(v) = self.count {
            cfg.count = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.grid_points {
            cfg.grid_points = v;
        }
        if let Some(v) = self.radial {
            cfg.solver.n_radial = v;
        }
        if let Some(v) = self.kappa_schedule {
            cfg.solver.kappa_schedule = v;
        }
        if let Some(v) = self.richardson {
            cfg.solver.richardson = v;
        }
        if let Some(v) = self.out {
            cfg.out = Some(v);
        }
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Deficit vs asymmetry over a shape family: min D/A^2 and min D/alpha.
    Main(SweepArgs),
    /// Capacity truncation bounds on seeded random shapes.
    Truncation {
        #[arg(long, default_value_t = 2)]
        dim: u32,
        #[arg(long, default_value_t = 1.5)]
        p: f64,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Truncation radius.
        #[arg(long, default_value_t = 1.2)]
        s: f64,
        /// Comparison radius for the empirical constant.
        #[arg(long, default_value_t = 1.35)]
        s2: f64,
        #[arg(long, default_value_t = 0)]
        grid_points: usize,
        #[arg(long)]
        radial: Option<usize>,
    },
    /// Pointwise vector inequalities by seeded random scan.
    Ineq {
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Spectral closed forms over random (N, p) draws.
    Spectral {
        #[arg(long, default_value_t = 50)]
        draws: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn run(cmd: Cmd) -> Result<bool> {
    match cmd {
        Cmd::BallCap { dim, p, radius } => {
            let params = Params::new(dim, p)?;
            println!("{:.16e}", ball_capacity(&params, radius)?);
            Ok(true)
        }
        Cmd::Solve {
            dim,
            p,
            shape,
            radial,
            kappa_schedule,
            richardson,
            kappa,
            full_potential,
        } => {
            let params = Params::new(dim, p)?;
            let domain = ShapeFile::from_path(&shape)?.build(&params)?;
            let mut cfg = SolverConfig::default();
            if let Some(v) = radial {
                cfg.n_radial = v;
            }
            if let Some(v) = kappa_schedule {
                cfg.kappa_schedule = v;
            }
            if let Some(v) = richardson {
                cfg.richardson = v;
            }
            let result = perturbed_capacity(&domain, kappa, &cfg)?;
            let text = if full_potential {
                serde_json::to_string_pretty(&result)?
            } else {
                serde_json::to_string_pretty(&json!({
                    "value": result.value,
                    "iterations": result.iterations,
                    "residual": result.residual,
                    "error_estimate": result.error_estimate,
                    "grid_shape": result.grid_shape,
                }))?
            };
            println!("{text}");
            Ok(true)
        }
        Cmd::Spectral { dim, p, max_degree } => {
            let params = Params::new(dim, p)?;
            println!("k,alpha_k,Q_k");
            for k in 0..=max_degree {
                println!(
                    "{k},{:.16e},{:.16e}",
                    alpha_root(&params, k),
                    q_eigenvalue(&params, k)
                );
            }
            Ok(true)
        }
        Cmd::Sweep(args) => {
            let cfg = args.into_config()?;
            let records = run_sweep(&cfg)?;
            let csv = records_to_csv(&records);
            match &cfg.out {
                Some(path) => write_csv(&records, path)?,
                None => print!("{csv}"),
            }
            Ok(true)
        }
        Cmd::Verify { what } => match what {
            VerifyCmd::Main(args) => {
                let cfg = args.into_config()?;
                let report = verify_main(&cfg)?;
                println!("{}", serde_json::to_string_pretty(&report)?);
                Ok(report.pass)
            }
            VerifyCmd::Truncation {
                dim,
                p,
                count,
                seed,
                s,
                s2,
                grid_points,
                radial,
            } => {
                let params = Params::new(dim, p)?;
                let mut solver = SolverConfig::default();
                if let Some(v) = radial {
                    solver.n_radial = v;
                }
                let report =
                    verify_truncation(&params, count, seed, s, s2, grid_points, &solver)?;
                println!("{}", serde_json::to_string_pretty(&report)?);
                Ok(report.pass)
            }
            VerifyCmd::Ineq { samples, seed } => {
                let report = verify_ineq(samples, seed)?;
                print!("{}", report.to_csv());
                Ok(report.pass)
            }
            VerifyCmd::Spectral { draws, seed } => {
                let report = verify_spectral(draws, seed)?;
                println!("{}", serde_json::to_string_pretty(&report)?);
                Ok(report.pass)
            }
        },
        Cmd::Fit { input, threshold } => {
            let records = read_csv(&input)?;
            let (slope, intercept, r2) = fit_exponent_with_threshold(&records, threshold)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "slope": slope,
                    "intercept": intercept,
                    "r_squared": r2,
                }))?
            );
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_declaration_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn sweep_flags_override_config_fields() {
        let args = SweepArgs {
            config: None,
            dim: Some(3),
            p: Some(2.5),
            family: Some(Family::Harmonic),
            schedule: Some(vec![0.1, 0.05]),
            harmonic_degree: Some(3),
            count: None,
            seed: Some(4),
            grid_points: Some(48),
            radial: Some(32),
            kappa_schedule: Some(vec![0.1, 0.0]),
            richardson: Some(false),
            out: None,
        };
        let cfg = args.into_config().unwrap();
        assert_eq!(cfg.dim, 3);
        assert_eq!(cfg.family, Family::Harmonic);
        assert_eq!(cfg.schedule, vec![0.1, 0.05]);
        assert_eq!(cfg.harmonic_degree, 3);
        assert_eq!(cfg.seed, 4);
        assert_eq!(cfg.solver.n_radial, 32);
        assert_eq!(cfg.solver.kappa_schedule, vec![0.1, 0.0]);
        assert!(!cfg.solver.richardson);
        assert_eq!(cfg.count, ExperimentConfig::default().count);
    }

    #[test]
    fn family_parses_from_the_cli_spellings() {
        assert_eq!("ellipse".parse::<Family>().unwrap(), Family::Ellipse);
        assert_eq!("harmonic".parse::<Family>().unwrap(), Family::Harmonic);
        assert_eq!("random".parse::<Family>().unwrap(), Family::Random);
        assert!("pear".parse::<Family>().is_err());
    }
}
