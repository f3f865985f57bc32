//! Run pipelines: seed -> relax -> census -> artifacts, and the parameter
//! sweep that races the vortex and boojum competitors at every grid point.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use boojum_core::boundary::{equivariant_boundary, BoundaryData};
use boojum_core::defects::{survey, DefectKind, DefectReport};
use boojum_core::energy::{total_energy, EnergyBreakdown};
use boojum_core::field::ComplexField;
use boojum_core::flow::{relax_dt, relax_with, RelaxOptions, RelaxReport};
use boojum_core::grid::{make_polar_grid, PolarGrid};
use boojum_core::params::ModelParams;
use boojum_core::render::{export_director, render_field, RenderMode};
use boojum_core::renorm::{linear_fit, minimize_positions};
use boojum_core::seeds::{boojum_seed, random_seed, vortex_seed};

use crate::config::{Config, SeedKind};

/// Equidistant interleaved boojum angles, light first, starting at zero.
pub fn default_boojum_angles(degree: i32) -> Vec<f64> {
    let d = degree.max(1) as usize;
    (0..2 * d)
        .map(|k| k as f64 * std::f64::consts::PI / d as f64)
        .collect()
}

/// Default vortex layout: one vortex at the origin for degree 1, otherwise
/// unit-degree vortices equally spaced on a small circle.
pub fn default_vortex_layout(degree: i32) -> (Vec<(f64, f64)>, Vec<i32>) {
    let d = degree.unsigned_abs() as usize;
    if d == 0 {
        return (Vec::new(), Vec::new());
    }
    let sign = degree.signum();
    if d == 1 {
        return (vec![(0.0, 0.0)], vec![sign]);
    }
    let radius = 0.35;
    let positions = (0..d)
        .map(|k| {
            let ang = std::f64::consts::TAU * k as f64 / d as f64;
            (radius * ang.cos(), radius * ang.sin())
        })
        .collect();
    (positions, vec![sign; d])
}

/// Boundary data for the run: equivariant by default, or a lifting read from
/// `model.gamma_file` (one sample per line, n_theta lines). A file lifting may
/// be non-equivariant; its winding must match the configured degree.
pub fn boundary_for(config: &Config) -> Result<BoundaryData> {
    match &config.gamma_file {
        None => Ok(equivariant_boundary(config.degree, config.n_theta)),
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading gamma lifting {}", path.display()))?;
            let gamma: Vec<f64> = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(|l| l.parse::<f64>().with_context(|| format!("bad gamma sample '{l}'")))
                .collect::<Result<_>>()?;
            anyhow::ensure!(
                gamma.len() == config.n_theta,
                "gamma file has {} samples, grid has {}",
                gamma.len(),
                config.n_theta
            );
            let bd = BoundaryData::from_gamma(gamma)?;
            anyhow::ensure!(
                bd.degree == config.degree,
                "gamma lifting winds {} times, config says {}",
                bd.degree,
                config.degree
            );
            Ok(bd)
        }
    }
}

pub fn build_seed(
    kind: &SeedKind,
    config: &Config,
    params: &ModelParams,
    grid: &PolarGrid,
    bd: &BoundaryData,
) -> Result<ComplexField> {
    Ok(match kind {
        SeedKind::Vortex => {
            let (positions, degrees) = match (&config.vortex_positions, &config.vortex_degrees) {
                (Some(flat), Some(degs)) => {
                    let positions: Vec<(f64, f64)> =
                        flat.chunks(2).map(|c| (c[0], c[1])).collect();
                    (positions, degs.clone())
                }
                _ => default_vortex_layout(params.degree),
            };
            vortex_seed(&positions, &degrees, params, grid, bd)?
        }
        SeedKind::Boojum => {
            let angles = config
                .boojum_angles
                .clone()
                .unwrap_or_else(|| default_boojum_angles(params.degree));
            boojum_seed(&angles, params, grid, bd)?
        }
        SeedKind::Random => random_seed(config.rng_seed, config.amplitude, grid),
        SeedKind::File(path) => {
            let (field, fgrid, _) = ComplexField::load(path)?;
            if fgrid.n_r != grid.n_r || fgrid.n_theta != grid.n_theta {
                anyhow::bail!(
                    "seed file grid {}x{} does not match configured grid {}x{}",
                    fgrid.n_r,
                    fgrid.n_theta,
                    grid.n_r,
                    grid.n_theta
                );
            }
            field
        }
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub seed: String,
    pub converged: bool,
    pub steps: u64,
    pub final_residual: f64,
    pub energy: EnergyBreakdown,
    pub max_modulus: f64,
    pub n_interior: usize,
    pub n_light: usize,
    pub n_heavy: usize,
    pub n_bvortex: usize,
    pub degree_sum_ok: bool,
}

pub struct RunOutcome {
    pub field: ComplexField,
    pub report: RelaxReport,
    pub census: DefectReport,
    pub energy: EnergyBreakdown,
    pub summary: RunSummary,
}

/// Relax one seed under the configured options and survey the result.
pub fn run_point(
    config: &Config,
    kind: &SeedKind,
    checkpoint_dir: Option<&Path>,
) -> Result<RunOutcome> {
    let params = config.params()?;
    let grid = make_polar_grid(config.n_r, config.n_theta)?;
    let bd = boundary_for(config)?;
    let seed = build_seed(kind, config, &params, &grid, &bd)?;

    let dt = relax_dt(&grid, &params);
    let mut max_steps = config.max_steps;
    if let Some(t) = config.max_time {
        max_steps = max_steps.min((t / dt).ceil() as u64);
    }
    let opts = RelaxOptions {
        tol: config.tol,
        max_steps,
        trace_every: config.trace_every,
        dt: None,
    };

    let every = config.checkpoint_every;
    let mut observer: Box<dyn FnMut(u64, &ComplexField)> = match checkpoint_dir {
        Some(dir) if every > 0 => {
            let dir = dir.to_path_buf();
            let grid_c = grid.clone();
            let params_c = params;
            let mut last = 0u64;
            Box::new(move |step, field| {
                if step > 0 && step >= last + every {
                    last = step;
                    let base = dir.join(format!("checkpoint_{step:09}"));
                    let _ = field.save(&grid_c, &params_c, &base);
                }
            })
        }
        _ => Box::new(|_, _| {}),
    };

    let (field, report) = relax_with(&seed, &params, &grid, &bd, &opts, &mut *observer)?;
    let energy = total_energy(&field, &params, &grid, &bd)?;
    let census = survey(&field, &params, &grid, &bd)?;
    let summary = RunSummary {
        seed: kind.to_string(),
        converged: report.converged,
        steps: report.steps,
        final_residual: report.final_residual,
        energy,
        max_modulus: field.max_modulus(),
        n_interior: census.summary.n_interior,
        n_light: census.summary.n_light,
        n_heavy: census.summary.n_heavy,
        n_bvortex: census.summary.n_bvortex,
        degree_sum_ok: census.summary.degree_sum_ok,
    };
    Ok(RunOutcome {
        field,
        report,
        census,
        energy,
        summary,
    })
}

fn write_energy_trace(path: &Path, report: &RelaxReport) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "step,dirichlet,potential,anchoring,total")?;
    for (step, e) in &report.energy_trace {
        writeln!(
            w,
            "{},{},{},{},{}",
            step, e.dirichlet, e.potential, e.anchoring, e.total
        )?;
    }
    Ok(())
}

/// Comparison of predicted boojum placement against the observed census,
/// written as CSV. Angles are matched modulo a global rotation by aligning
/// the first observed light boojum with the first predicted one.
fn write_renorm_comparison(path: &Path, census: &DefectReport, params: &ModelParams) -> Result<()> {
    let lights: Vec<f64> = census
        .defects
        .iter()
        .filter(|d| d.kind == DefectKind::LightBoojum)
        .map(|d| d.theta)
        .collect();
    let heavies: Vec<f64> = census
        .defects
        .iter()
        .filter(|d| d.kind == DefectKind::HeavyBoojum)
        .map(|d| d.theta)
        .collect();
    let degree = params.degree.unsigned_abs() as usize;
    if lights.len() != degree || heavies.len() != degree || !(1..=3).contains(&degree) {
        return Ok(()); // nothing comparable
    }
    let predicted = minimize_positions(degree, params.alpha, 6)?;
    let shift = lights[0];
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "kind,predicted_theta,observed_theta,gap")?;
    let tau = std::f64::consts::TAU;
    let mut pairs: Vec<(&str, f64, f64)> = Vec::new();
    for (k, &obs) in lights.iter().enumerate() {
        pairs.push(("light", predicted.config.light_angles[k], (obs - shift).rem_euclid(tau)));
    }
    for (k, &obs) in heavies.iter().enumerate() {
        pairs.push(("heavy", predicted.config.heavy_angles[k], (obs - shift).rem_euclid(tau)));
    }
    for (kind, pred, obs) in pairs {
        let mut gap = (obs - pred).rem_euclid(tau);
        if gap > tau / 2.0 {
            gap -= tau;
        }
        writeln!(w, "{kind},{pred},{obs},{gap}")?;
    }
    Ok(())
}

/// Full simulate pipeline: seed, relax, census, artifact directory.
pub fn simulate(config: &Config) -> Result<RunOutcome> {
    let out_dir = &config.out_dir;
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let params = config.params()?;
    let grid = make_polar_grid(config.n_r, config.n_theta)?;

    let outcome = run_point(config, &config.seed, Some(out_dir))?;

    outcome
        .field
        .save(&grid, &params, &out_dir.join("field"))?;
    write_energy_trace(&out_dir.join("energy_trace.csv"), &outcome.report)?;
    fs::write(
        out_dir.join("defects.json"),
        serde_json::to_string_pretty(&outcome.census)?,
    )?;
    fs::write(
        out_dir.join("run.json"),
        serde_json::to_string_pretty(&outcome.summary)?,
    )?;

    let modulus = render_field(&outcome.field, &grid, RenderMode::Modulus, config.image_size)?;
    modulus.write_ppm(BufWriter::new(fs::File::create(out_dir.join("modulus.ppm"))?))?;
    let director = render_field(&outcome.field, &grid, RenderMode::Director, config.image_size)?;
    director.write_ppm(BufWriter::new(fs::File::create(out_dir.join("director.ppm"))?))?;
    export_director(
        &outcome.field,
        &grid,
        BufWriter::new(fs::File::create(out_dir.join("director.csv"))?),
    )?;
    write_renorm_comparison(&out_dir.join("renorm_comparison.csv"), &outcome.census, &params)?;

    Ok(outcome)
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub s: f64,
    pub alpha: f64,
    pub status: String,
    pub energy_vortex: Option<f64>,
    pub energy_boojum: Option<f64>,
    pub winner: Option<String>,
    pub regime: Option<String>,
    pub n_interior: Option<usize>,
    pub n_light: Option<usize>,
    pub n_heavy: Option<usize>,
    pub n_bvortex: Option<usize>,
    pub degree_sum_ok: Option<bool>,
}

/// Label the defect structure of the winning competitor.
pub fn regime_label(summary: &RunSummary) -> String {
    let boundary = summary.n_light + summary.n_heavy + summary.n_bvortex;
    if summary.n_interior > 0 && boundary == 0 {
        "interior".to_string()
    } else if summary.n_interior == 0 && boundary > 0 {
        "boojum".to_string()
    } else if summary.n_interior == 0 && boundary == 0 {
        "smooth".to_string()
    } else {
        "mixed".to_string()
    }
}

fn sweep_one(config: &Config, s: f64, alpha: f64, dir: &Path) -> SweepRow {
    let mut point = config.clone();
    point.s = s;
    point.alpha = alpha;
    point.out_dir = dir.to_path_buf();
    let mut row = SweepRow {
        s,
        alpha,
        status: "ok".to_string(),
        energy_vortex: None,
        energy_boojum: None,
        winner: None,
        regime: None,
        n_interior: None,
        n_light: None,
        n_heavy: None,
        n_bvortex: None,
        degree_sum_ok: None,
    };
    let mut outcomes: Vec<(SeedKind, RunOutcome)> = Vec::new();
    for kind in [SeedKind::Vortex, SeedKind::Boojum] {
        let sub = dir.join(format!("seed_{kind}"));
        if let Err(e) = fs::create_dir_all(&sub) {
            row.status = format!("error: {e}");
            return row;
        }
        let mut pc = point.clone();
        pc.out_dir = sub;
        pc.seed = kind.clone();
        match simulate(&pc) {
            Ok(out) => outcomes.push((kind, out)),
            Err(e) => {
                row.status = format!("error[{kind}]: {e:#}");
            }
        }
    }
    for (kind, out) in &outcomes {
        match kind {
            SeedKind::Vortex => row.energy_vortex = Some(out.energy.total),
            SeedKind::Boojum => row.energy_boojum = Some(out.energy.total),
            _ => {}
        }
    }
    if let Some((kind, best)) = outcomes
        .iter()
        .min_by(|a, b| a.1.energy.total.total_cmp(&b.1.energy.total))
    {
        row.winner = Some(kind.to_string());
        row.regime = Some(regime_label(&best.summary));
        row.n_interior = Some(best.summary.n_interior);
        row.n_light = Some(best.summary.n_light);
        row.n_heavy = Some(best.summary.n_heavy);
        row.n_bvortex = Some(best.summary.n_bvortex);
        row.degree_sum_ok = Some(best.summary.degree_sum_ok);
    }
    row
}

/// Sweep over the configured s (and optionally alpha) grid; each point runs
/// both competitor seeds and reports the lower-energy outcome. Failures are
/// recorded in the row and the sweep continues.
pub fn sweep(config: &Config) -> Result<Vec<SweepRow>> {
    fs::create_dir_all(&config.out_dir)?;
    let alphas = if config.alpha_values.is_empty() {
        vec![config.alpha]
    } else {
        config.alpha_values.clone()
    };
    let mut points: Vec<(f64, f64, PathBuf)> = Vec::new();
    for &s in &config.s_values {
        for &alpha in &alphas {
            let dir = config
                .out_dir
                .join(format!("point_s{s:.4}_a{alpha:.4}"));
            points.push((s, alpha, dir));
        }
    }

    let run_all = || -> Vec<SweepRow> {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            points
                .par_iter()
                .map(|(s, alpha, dir)| sweep_one(config, *s, *alpha, dir))
                .collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            points
                .iter()
                .map(|(s, alpha, dir)| sweep_one(config, *s, *alpha, dir))
                .collect()
        }
    };

    #[cfg(feature = "parallel")]
    let mut rows: Vec<SweepRow> = match config.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .context("building sweep worker pool")?
            .install(run_all),
        None => run_all(),
    };
    #[cfg(not(feature = "parallel"))]
    let mut rows: Vec<SweepRow> = run_all();

    rows.sort_by(|a, b| a.s.total_cmp(&b.s).then(a.alpha.total_cmp(&b.alpha)));
    write_sweep_csv(&config.out_dir.join("sweep.csv"), &rows)?;
    Ok(rows)
}

pub fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(
        w,
        "s,alpha,status,energy_vortex,energy_boojum,winner,regime,n_interior,n_light,n_heavy,n_bvortex,degree_sum_ok"
    )?;
    let opt = |v: &Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let optu = |v: &Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.s,
            r.alpha,
            r.status,
            opt(&r.energy_vortex),
            opt(&r.energy_boojum),
            r.winner.clone().unwrap_or_default(),
            r.regime.clone().unwrap_or_default(),
            optu(&r.n_interior),
            optu(&r.n_light),
            optu(&r.n_heavy),
            optu(&r.n_bvortex),
            r.degree_sum_ok.map(|b| b.to_string()).unwrap_or_default()
        )?;
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct SeedEnergyRow {
    pub epsilon: f64,
    pub ln_inv_eps: f64,
    pub energy: EnergyBreakdown,
}

/// Seed energies across a list of epsilon values (optionally relaxed first),
/// with the least-squares slope and intercept against |ln eps|.
pub fn seed_energy_scan(
    config: &Config,
    eps_list: &[f64],
    relax_first: bool,
) -> Result<(Vec<SeedEnergyRow>, f64, f64)> {
    let grid = make_polar_grid(config.n_r, config.n_theta)?;
    let bd = boundary_for(config)?;
    let mut rows = Vec::new();
    for &eps in eps_list {
        let mut point = config.clone();
        point.epsilon = eps;
        let params = point.params()?;
        let seed = build_seed(&point.seed, &point, &params, &grid, &bd)?;
        let field = if relax_first {
            let dt = relax_dt(&grid, &params);
            let mut max_steps = point.max_steps;
            if let Some(t) = point.max_time {
                max_steps = max_steps.min((t / dt).ceil() as u64);
            }
            let opts = RelaxOptions {
                tol: point.tol,
                max_steps,
                trace_every: point.trace_every,
                dt: None,
            };
            relax_with(&seed, &params, &grid, &bd, &opts, |_, _| {})?.0
        } else {
            seed
        };
        let energy = total_energy(&field, &params, &grid, &bd)?;
        rows.push(SeedEnergyRow {
            epsilon: eps,
            ln_inv_eps: (1.0 / eps).ln(),
            energy,
        });
    }
    let points: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.ln_inv_eps, r.energy.total))
        .collect();
    let (slope, intercept) = linear_fit(&points);
    Ok((rows, slope, intercept))
}
