use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use boojum_cli::config::{load_config, Config, SeedKind};
use boojum_cli::pipeline;
use boojum_core::ballgrowth::{grow, DefectBall};
use boojum_core::boundary::equivariant_boundary;
use boojum_core::combinatorics::{c_alpha, min_config, threshold_s};
use boojum_core::defects::survey;
use boojum_core::field::ComplexField;
use boojum_core::params::ModelParams;
use boojum_core::renorm::minimize_positions;

#[derive(Parser)]
#[command(
    name = "boojum",
    about = "Thin-film nematic order parameter laboratory on the unit disk",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Overrides {
    /// Override model.epsilon
    #[arg(long)]
    epsilon: Option<f64>,
    /// Override model.s
    #[arg(long)]
    s: Option<f64>,
    /// Override model.alpha (radians)
    #[arg(long)]
    alpha: Option<f64>,
    /// Override model.degree
    #[arg(long)]
    degree: Option<i32>,
    /// Override grid.n_r
    #[arg(long)]
    n_r: Option<usize>,
    /// Override grid.n_theta
    #[arg(long)]
    n_theta: Option<usize>,
    /// Override run.seed (vortex | boojum | random | file:<path>)
    #[arg(long)]
    seed: Option<String>,
    /// Override run.tol
    #[arg(long)]
    tol: Option<f64>,
    /// Override run.max_steps
    #[arg(long)]
    max_steps: Option<u64>,
    /// Override run.max_time (flow time)
    #[arg(long)]
    max_time: Option<f64>,
    /// Override output.dir
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Overrides {
    fn apply(&self, config: &mut Config) -> Result<()> {
        if let Some(x) = self.epsilon {
            config.epsilon = x;
        }
        if let Some(x) = self.s {
            config.s = x;
        }
        if let Some(x) = self.alpha {
            config.alpha = x;
        }
        if let Some(x) = self.degree {
            config.degree = x;
        }
        if let Some(x) = self.n_r {
            config.n_r = x;
        }
        if let Some(x) = self.n_theta {
            config.n_theta = x;
        }
        if let Some(text) = &self.seed {
            config.seed = SeedKind::parse(text)?;
        }
        if let Some(x) = self.tol {
            config.tol = x;
        }
        if let Some(x) = self.max_steps {
            config.max_steps = x;
        }
        if let Some(x) = self.max_time {
            config.max_time = Some(x);
        }
        if let Some(dir) = &self.out {
            config.out_dir = dir.clone();
        }
        config.params()?;
        Ok(())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Relax one configuration and write the artifact directory
    Simulate {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run the s (and alpha) grid, racing both competitor seeds per point
    Sweep {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Defect census of a stored field
    Defects {
        /// field CSV written by simulate (with its .params.json sidecar)
        field: PathBuf,
        /// write the JSON report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimize the renormalized energy of a boojum configuration
    Renorm {
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 6)]
        restarts: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive verification of the boundary-degree cost minimizers
    DegreeCheck {
        #[arg(long = "D")]
        d: i32,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 6)]
        max_defects: usize,
        #[arg(long, default_value_t = 4)]
        degree_bound: i32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Expand and merge defect balls from a JSON description
    Balls {
        balls: PathBuf,
        #[arg(long)]
        sigma: f64,
        #[arg(long, default_value_t = 0.72)]
        s: f64,
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_3)]
        alpha: f64,
        #[arg(long, default_value_t = 0.02)]
        epsilon: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seed (or relaxed) energies across epsilon with the |ln eps| slope
    SeedEnergy {
        config: PathBuf,
        /// comma-separated epsilon values
        #[arg(long, value_delimiter = ',')]
        eps_list: Vec<f64>,
        /// relax each seed before measuring
        #[arg(long)]
        relax: bool,
        #[command(flatten)]
        overrides: Overrides,
    },
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Simulate { config, overrides } => {
            let mut cfg = load_config(&config)?;
            overrides.apply(&mut cfg)?;
            let outcome = pipeline::simulate(&cfg)?;
            println!(
                "{} steps, residual {:.3e}, energy {:.6}, census: {} interior / {} light / {} heavy / {} bvortex ({})",
                outcome.summary.steps,
                outcome.summary.final_residual,
                outcome.energy.total,
                outcome.summary.n_interior,
                outcome.summary.n_light,
                outcome.summary.n_heavy,
                outcome.summary.n_bvortex,
                if outcome.summary.degree_sum_ok { "degree ok" } else { "degree mismatch" },
            );
            println!("artifacts in {}", cfg.out_dir.display());
            if outcome.summary.converged {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("not converged to tol {:.1e}", cfg.tol);
                Ok(ExitCode::from(3))
            }
        }
        Command::Sweep { config, overrides } => {
            let mut cfg = load_config(&config)?;
            overrides.apply(&mut cfg)?;
            let rows = pipeline::sweep(&cfg)?;
            for row in &rows {
                println!(
                    "s={:.4} alpha={:.4} -> {} (vortex {:?}, boojum {:?}) [{}]",
                    row.s,
                    row.alpha,
                    row.regime.clone().unwrap_or_else(|| "?".into()),
                    row.energy_vortex,
                    row.energy_boojum,
                    row.status
                );
            }
            println!("summary in {}", cfg.out_dir.join("sweep.csv").display());
            let failed = rows.iter().any(|r| r.status != "ok");
            Ok(if failed { ExitCode::from(3) } else { ExitCode::SUCCESS })
        }
        Command::Defects { field, out } => {
            let (field, grid, params) = ComplexField::load(&field)?;
            let bd = equivariant_boundary(params.degree, grid.n_theta);
            let report = survey(&field, &params, &grid, &bd)?;
            emit(out.as_ref(), &serde_json::to_string_pretty(&report)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Renorm {
            degree,
            alpha,
            restarts,
            out,
        } => {
            let outcome = minimize_positions(degree, alpha, restarts)?;
            emit(out.as_ref(), &serde_json::to_string_pretty(&outcome)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::DegreeCheck {
            d,
            alpha,
            max_defects,
            degree_bound,
            out,
        } => {
            let result = min_config(d, alpha, max_defects, degree_bound)?;
            let payload = serde_json::json!({
                "d": d,
                "alpha": alpha,
                "c_alpha": c_alpha(alpha)?,
                "threshold_s": threshold_s(alpha)?,
                "expected_min": d.unsigned_abs() as f64 * c_alpha(alpha)?,
                "min_cost": result.min_cost,
                "minimizers": result.minimizers,
            });
            emit(out.as_ref(), &serde_json::to_string_pretty(&payload)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Balls {
            balls,
            sigma,
            s,
            alpha,
            epsilon,
            out,
        } => {
            let text = fs::read_to_string(&balls)
                .with_context(|| format!("reading {}", balls.display()))?;
            let balls: Vec<DefectBall> = serde_json::from_str(&text)?;
            let params = ModelParams::new(epsilon, s, alpha, 1)?;
            let report = grow(&balls, sigma, &params)?;
            emit(out.as_ref(), &serde_json::to_string_pretty(&report)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::SeedEnergy {
            config,
            eps_list,
            relax,
            overrides,
        } => {
            let mut cfg = load_config(&config)?;
            overrides.apply(&mut cfg)?;
            anyhow::ensure!(!eps_list.is_empty(), "--eps-list needs at least one value");
            let (rows, slope, intercept) = pipeline::seed_energy_scan(&cfg, &eps_list, relax)?;
            println!("epsilon,ln_inv_eps,dirichlet,potential,anchoring,total");
            for r in &rows {
                println!(
                    "{},{},{},{},{},{}",
                    r.epsilon,
                    r.ln_inv_eps,
                    r.energy.dirichlet,
                    r.energy.potential,
                    r.energy.anchoring,
                    r.energy.total
                );
            }
            println!("# slope = {slope}");
            println!("# intercept = {intercept}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
