//! Detection, localization, and classification of defects in a relaxed field:
//! interior vortices with integer degrees, boundary defects classified as
//! light/heavy boojums or boundary vortices with a boojum number, and the
//! degree sum check.

use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::boundary::BoundaryData;
use crate::complex::{principal_phase_step, Cx};
use crate::energy::anchoring_density;
use crate::error::{Error, Result};
use crate::field::ComplexField;
use crate::grid::PolarGrid;
use crate::params::ModelParams;

/// Interior clusters are cells with |u| below this threshold.
pub const MODULUS_THRESHOLD: f64 = 0.4;
/// Boundary clusters are nodes with W above this threshold (a = 0.3).
pub const W_THRESHOLD: f64 = 0.09;

/// Half-width of the phase windows around +alpha and -alpha; keeps the two
/// windows disjoint for every alpha in (0, pi/2).
pub fn branch_tolerance(alpha: f64) -> f64 {
    (0.3f64).min(0.5 * alpha.sin()).min(0.5 * (FRAC_PI_2 - alpha).sin())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DefectKind {
    InteriorVortex,
    LightBoojum,
    HeavyBoojum,
    BoundaryVortex,
}

#[derive(Clone, Debug, Serialize)]
pub struct DefectRecord {
    pub kind: DefectKind,
    pub r: f64,
    pub theta: f64,
    pub degree: i32,
    pub tau: i8,
    /// min |u| over the cluster for interior defects, max W for boundary ones.
    pub confidence: f64,
}

impl DefectRecord {
    /// kind <-> (tau, location) consistency.
    pub fn consistent(&self) -> bool {
        match self.kind {
            DefectKind::LightBoojum => self.tau == -1 && self.r == 1.0,
            DefectKind::HeavyBoojum => self.tau == 1 && self.r == 1.0,
            DefectKind::BoundaryVortex => self.tau == 0 && self.r == 1.0,
            DefectKind::InteriorVortex => self.tau == 0 && self.r < 1.0,
        }
    }
}

/// Boundary cluster that could not be classified; reported, never dropped.
#[derive(Clone, Debug, Serialize)]
pub struct UnclassifiedCluster {
    pub theta: f64,
    pub max_w: f64,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryScan {
    pub defects: Vec<DefectRecord>,
    pub unclassified: Vec<UnclassifiedCluster>,
}

/// Winding number of the field along a closed grid path, from principal
/// phase increments between consecutive cells (the path closes cyclically).
pub fn winding_number(field: &ComplexField, path: &[(usize, usize)]) -> Result<i32> {
    if path.len() < 3 {
        return Err(Error::config("winding path needs at least 3 cells"));
    }
    for (k, &(i, j)) in path.iter().enumerate() {
        let m = field.at(i, j).abs();
        if m <= 0.3 {
            return Err(Error::IllDefinedWinding {
                index: k,
                modulus: m,
            });
        }
    }
    let mut total = 0.0;
    for k in 0..path.len() {
        let (i0, j0) = path[k];
        let (i1, j1) = path[(k + 1) % path.len()];
        total += principal_phase_step(field.at(i1, j1), field.at(i0, j0));
    }
    Ok((total / TAU).round() as i32)
}

/// Full angular ring at radial index i.
pub fn ring_loop(grid: &PolarGrid, i: usize) -> Vec<(usize, usize)> {
    (0..grid.n_theta).map(|j| (i, j)).collect()
}

/// Closed loop of nearest grid cells along the circle of given center and
/// radius; consecutive duplicates are removed.
pub fn circle_loop(
    grid: &PolarGrid,
    center: (f64, f64),
    radius: f64,
    samples: usize,
) -> Result<Vec<(usize, usize)>> {
    let mut path: Vec<(usize, usize)> = Vec::with_capacity(samples);
    for k in 0..samples {
        let ang = TAU * k as f64 / samples as f64;
        let x = center.0 + radius * ang.cos();
        let y = center.1 + radius * ang.sin();
        let cell = grid
            .nearest_cell(x, y)
            .ok_or_else(|| Error::config("winding circle leaves the disk"))?;
        if path.last() != Some(&cell) {
            path.push(cell);
        }
    }
    while path.len() > 1 && path.first() == path.last() {
        path.pop();
    }
    if path.len() < 3 {
        return Err(Error::config("winding circle collapsed onto too few cells"));
    }
    Ok(path)
}

/// Interior defect census: connected clusters of low-modulus cells away from
/// the boundary, each carrying the winding measured on a surrounding circle.
/// Zero-winding clusters are dropped.
pub fn find_interior_defects(
    field: &ComplexField,
    params: &ModelParams,
    grid: &PolarGrid,
) -> Result<Vec<DefectRecord>> {
    field.check_shape(grid)?;
    let n_r = grid.n_r;
    let n_t = grid.n_theta;
    let eps = params.epsilon;
    let mask: Vec<bool> = (0..grid.cells())
        .map(|k| {
            let i = k / n_t;
            field.values[k].abs() < MODULUS_THRESHOLD && 1.0 - grid.radii[i] > 5.0 * eps
        })
        .collect();

    let mut seen = vec![false; grid.cells()];
    let mut records = Vec::new();
    for start in 0..grid.cells() {
        if !mask[start] || seen[start] {
            continue;
        }
        // BFS over the 4-neighborhood with angular wrap and the
        // across-origin link (0, j) ~ (0, j + n_theta/2).
        let mut cluster = Vec::new();
        let mut queue = vec![start];
        seen[start] = true;
        while let Some(k) = queue.pop() {
            cluster.push(k);
            let (i, j) = (k / n_t, k % n_t);
            let mut push = |ii: usize, jj: usize| {
                let kk = ii * n_t + jj;
                if mask[kk] && !seen[kk] {
                    seen[kk] = true;
                    queue.push(kk);
                }
            };
            if i > 0 {
                push(i - 1, j);
            } else {
                push(0, (j + n_t / 2) % n_t);
            }
            if i + 1 < n_r {
                push(i + 1, j);
            }
            push(i, (j + 1) % n_t);
            push(i, (j + n_t - 1) % n_t);
        }

        let mut cx = 0.0;
        let mut cy = 0.0;
        let mut min_mod = f64::INFINITY;
        for &k in &cluster {
            let (i, j) = (k / n_t, k % n_t);
            let (x, y) = grid.cell_xy(i, j);
            cx += x;
            cy += y;
            min_mod = min_mod.min(field.values[k].abs());
        }
        cx /= cluster.len() as f64;
        cy /= cluster.len() as f64;
        let extent = cluster
            .iter()
            .map(|&k| {
                let (i, j) = (k / n_t, k % n_t);
                let (x, y) = grid.cell_xy(i, j);
                ((x - cx).powi(2) + (y - cy).powi(2)).sqrt()
            })
            .fold(0.0f64, f64::max);

        let center_r = (cx * cx + cy * cy).sqrt();
        let mut radius = (5.0 * eps).max(extent + 3.0 * grid.dr);
        let mut winding = None;
        for _ in 0..4 {
            if center_r + radius >= 1.0 - grid.dr {
                break;
            }
            let samples = ((3.0 * TAU * radius / grid.dr).ceil() as usize).max(64);
            match circle_loop(grid, (cx, cy), radius, samples)
                .and_then(|path| winding_number(field, &path))
            {
                Ok(w) => {
                    winding = Some(w);
                    break;
                }
                Err(_) => radius *= 1.4,
            }
        }
        let Some(w) = winding else { continue };
        if w == 0 {
            continue;
        }
        records.push(DefectRecord {
            kind: DefectKind::InteriorVortex,
            r: center_r,
            theta: cy.atan2(cx).rem_euclid(TAU),
            degree: w,
            tau: 0,
            confidence: min_mod,
        });
    }
    records.sort_by(|a, b| a.theta.total_cmp(&b.theta).then(a.r.total_cmp(&b.r)));
    Ok(records)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
    Neither,
}

/// Decide which anchoring branch the boundary value sits on: the phase of
/// u relative to g within `a0` of +alpha (plus) or -alpha (minus).
pub fn phase_branch(u_b: Cx, g_b: Cx, alpha: f64, a0: f64) -> Branch {
    let phi = principal_phase_step(u_b, g_b);
    if (phi - alpha).abs() < a0 {
        Branch::Plus
    } else if (phi + alpha).abs() < a0 {
        Branch::Minus
    } else {
        Branch::Neither
    }
}

/// Angular runs of boundary nodes with W above threshold, merged when closer
/// than 4 eps^s of arc.
fn boundary_clusters(w: &[f64], threshold: f64, dtheta: f64, merge_arc: f64) -> Vec<Vec<usize>> {
    let n = w.len();
    let mask: Vec<bool> = w.iter().map(|&x| x > threshold).collect();
    if mask.iter().all(|&m| !m) {
        return Vec::new();
    }
    if mask.iter().all(|&m| m) {
        return vec![(0..n).collect()];
    }
    // Walk one full circle starting just after a gap node, so no run is
    // split across the wrap or visited twice.
    let anchor = (0..n).find(|&j| !mask[j] && mask[(j + 1) % n]).unwrap();
    let mut runs: Vec<Vec<usize>> = Vec::new();
    let mut current: Option<Vec<usize>> = None;
    for off in 1..=n {
        let j = (anchor + off) % n;
        if mask[j] {
            current.get_or_insert_with(Vec::new).push(j);
        } else if let Some(run) = current.take() {
            runs.push(run);
        }
    }
    if let Some(run) = current.take() {
        runs.push(run);
    }
    // Merge runs separated by less than the merge arc.
    loop {
        let mut merged = false;
        if runs.len() > 1 {
            for a in 0..runs.len() {
                let b = (a + 1) % runs.len();
                if a == b {
                    break;
                }
                let end = *runs[a].last().unwrap();
                let start = runs[b][0];
                let gap_nodes = (start + n - end) % n;
                if (gap_nodes as f64) * dtheta < merge_arc {
                    let tail = runs.remove(b);
                    let a_idx = if b < a { a - 1 } else { a };
                    runs[a_idx].extend(tail);
                    merged = true;
                    break;
                }
            }
        }
        if !merged {
            break;
        }
    }
    runs
}

fn circular_mean(angles: impl Iterator<Item = f64>) -> f64 {
    let mut acc = Cx::ZERO;
    for a in angles {
        acc += Cx::unit(a);
    }
    acc.arg().rem_euclid(TAU)
}

fn majority_branch(
    field: &ComplexField,
    bd: &BoundaryData,
    nodes: &[usize],
    alpha: f64,
    a0: f64,
) -> Branch {
    let mut plus = 0;
    let mut minus = 0;
    for &j in nodes {
        match phase_branch(field.boundary_trace[j], bd.g[j], alpha, a0) {
            Branch::Plus => plus += 1,
            Branch::Minus => minus += 1,
            Branch::Neither => {}
        }
    }
    if plus > minus {
        Branch::Plus
    } else if minus > plus {
        Branch::Minus
    } else {
        Branch::Neither
    }
}

/// Nodes at arc distance in [6, 10] eps^s from the cluster edge, on one side;
/// falls back to the single nearest node at 8 eps^s when the window is
/// under-resolved.
fn side_nodes(n: usize, dtheta: f64, edge: usize, eps_s: f64, before: bool) -> Vec<usize> {
    let lo = (6.0 * eps_s / dtheta).ceil() as usize;
    let hi = (10.0 * eps_s / dtheta).floor() as usize;
    let mut nodes = Vec::new();
    for off in lo..=hi.max(lo) {
        let j = if before {
            (edge + n - off % n) % n
        } else {
            (edge + off) % n
        };
        nodes.push(j);
    }
    if nodes.is_empty() {
        let off = ((8.0 * eps_s / dtheta).round() as usize).max(1);
        let j = if before {
            (edge + n - off % n) % n
        } else {
            (edge + off) % n
        };
        nodes.push(j);
    }
    nodes
}

/// Phase increment along the half-circle of radius rho around the boundary
/// point at angle theta_c, sampled from the ahead side (counterclockwise)
/// through the interior to the behind side. Returns the increment together
/// with the boundary angles of the two endpoints.
fn half_circle_sweep(
    field: &ComplexField,
    grid: &PolarGrid,
    theta_c: f64,
    rho: f64,
) -> Result<(f64, f64, f64)> {
    let q = (theta_c.cos(), theta_c.sin());
    let tangent = (-theta_c.sin(), theta_c.cos());
    let inward = (-q.0, -q.1);
    let samples = ((3.0 * PI * rho / grid.dr).ceil() as usize).max(48);
    let cap = 1.0 - 0.55 * grid.dr;
    let mut cells: Vec<(usize, usize)> = Vec::with_capacity(samples + 1);
    let mut endpoints = (0.0f64, 0.0f64);
    for k in 0..=samples {
        let phi = PI * k as f64 / samples as f64;
        let mut x = q.0 + rho * (phi.cos() * tangent.0 + phi.sin() * inward.0);
        let mut y = q.1 + rho * (phi.cos() * tangent.1 + phi.sin() * inward.1);
        let r = (x * x + y * y).sqrt();
        if r > cap {
            x *= cap / r;
            y *= cap / r;
        }
        // endpoint angles unwrapped to the defect's neighborhood, so the
        // boundary-data lifting is evaluated on the correct branch
        if k == 0 {
            endpoints.0 = theta_c + principal_phase_step(Cx::unit(y.atan2(x)), Cx::unit(theta_c));
        }
        if k == samples {
            endpoints.1 = theta_c + principal_phase_step(Cx::unit(y.atan2(x)), Cx::unit(theta_c));
        }
        let cell = grid
            .nearest_cell(x, y)
            .ok_or_else(|| Error::config("half-circle sample left the disk"))?;
        if cells.last() != Some(&cell) {
            cells.push(cell);
        }
    }
    let mut total = 0.0;
    for w in cells.windows(2) {
        let a = field.at(w[1].0, w[1].1);
        let b = field.at(w[0].0, w[0].1);
        if b.abs() <= 0.3 || a.abs() <= 0.3 {
            return Err(Error::IllDefinedWinding {
                index: 0,
                modulus: a.abs().min(b.abs()),
            });
        }
        total += principal_phase_step(a, b);
    }
    Ok((total, endpoints.0, endpoints.1))
}

/// Boundary defect census from the anchoring density of the trace: clusters
/// above `w_threshold` are classified by the phase branches on clean arcs on
/// both sides, and each receives the degree measured on a half-circle closed
/// across the boundary with the branch-prescribed jump.
pub fn find_boundary_defects(
    field: &ComplexField,
    params: &ModelParams,
    grid: &PolarGrid,
    bd: &BoundaryData,
    w_threshold: f64,
) -> Result<BoundaryScan> {
    field.check_shape(grid)?;
    let n = grid.n_theta;
    let alpha = params.alpha;
    let a0 = branch_tolerance(alpha);
    let eps_s = params.eps_s();
    let w: Vec<f64> = (0..n)
        .map(|j| anchoring_density(field.boundary_trace[j], bd.g[j], alpha))
        .collect();
    let clusters = boundary_clusters(&w, w_threshold, grid.dtheta, 4.0 * eps_s);

    let mut defects = Vec::new();
    let mut unclassified = Vec::new();
    for nodes in clusters {
        let theta_c = circular_mean(nodes.iter().map(|&j| grid.theta(j)));
        let max_w = nodes.iter().map(|&j| w[j]).fold(0.0f64, f64::max);
        let start = nodes[0];
        let end = *nodes.last().unwrap();
        let before = majority_branch(
            field,
            bd,
            &side_nodes(n, grid.dtheta, start, eps_s, true),
            alpha,
            a0,
        );
        let after = majority_branch(
            field,
            bd,
            &side_nodes(n, grid.dtheta, end, eps_s, false),
            alpha,
            a0,
        );
        let (kind, tau) = match (before, after) {
            (Branch::Plus, Branch::Minus) => (DefectKind::LightBoojum, -1i8),
            (Branch::Minus, Branch::Plus) => (DefectKind::HeavyBoojum, 1),
            (Branch::Plus, Branch::Plus) | (Branch::Minus, Branch::Minus) => {
                (DefectKind::BoundaryVortex, 0)
            }
            _ => {
                unclassified.push(UnclassifiedCluster {
                    theta: theta_c,
                    max_w,
                    reason: "no clean branch on one or both sampling arcs".into(),
                });
                continue;
            }
        };

        // Degree from the half-circle phase increment closed across the
        // defect with the branch jump 2 tau alpha; the boundary-data
        // variation between the endpoints is compensated exactly.
        let rho = (8.0 * eps_s).min(0.6);
        let mut degree = None;
        let mut rho_try = rho;
        for _ in 0..3 {
            match half_circle_sweep(field, grid, theta_c, rho_try) {
                Ok((sweep, ahead_angle, behind_angle)) => {
                    let dgamma = bd.gamma_at(ahead_angle) - bd.gamma_at(behind_angle);
                    let total = sweep + dgamma + 2.0 * tau as f64 * alpha;
                    degree = Some((total / TAU).round() as i32);
                    break;
                }
                Err(_) => rho_try *= 1.35,
            }
        }
        let Some(nmult) = degree else {
            unclassified.push(UnclassifiedCluster {
                theta: theta_c,
                max_w,
                reason: "winding sweep crossed a near-zero of |u|".into(),
            });
            continue;
        };
        defects.push(DefectRecord {
            kind,
            r: 1.0,
            theta: theta_c,
            degree: nmult,
            tau,
            confidence: max_w,
        });
    }
    defects.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    Ok(BoundaryScan {
        defects,
        unclassified,
    })
}

/// Degree sum rule: interior degrees plus boundary degrees must equal the
/// boundary-data winding.
pub fn check_degree_sum(defects: &[DefectRecord], degree: i32) -> bool {
    let total: i32 = defects.iter().map(|d| d.degree).sum();
    total == degree
}

#[derive(Clone, Debug, Serialize)]
pub struct DefectSummary {
    pub degree_sum_ok: bool,
    pub n_interior: usize,
    pub n_light: usize,
    pub n_heavy: usize,
    pub n_bvortex: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DefectReport {
    pub defects: Vec<DefectRecord>,
    pub unclassified: Vec<UnclassifiedCluster>,
    pub summary: DefectSummary,
}

/// Combined census of a field snapshot.
pub fn survey(
    field: &ComplexField,
    params: &ModelParams,
    grid: &PolarGrid,
    bd: &BoundaryData,
) -> Result<DefectReport> {
    let interior = find_interior_defects(field, params, grid)?;
    let scan = find_boundary_defects(field, params, grid, bd, W_THRESHOLD)?;
    let mut defects = interior;
    defects.extend(scan.defects);
    let count = |k: DefectKind| defects.iter().filter(|d| d.kind == k).count();
    let summary = DefectSummary {
        degree_sum_ok: check_degree_sum(&defects, bd.degree),
        n_interior: count(DefectKind::InteriorVortex),
        n_light: count(DefectKind::LightBoojum),
        n_heavy: count(DefectKind::HeavyBoojum),
        n_bvortex: count(DefectKind::BoundaryVortex),
    };
    Ok(DefectReport {
        defects,
        unclassified: scan.unclassified,
        summary,
    })
}
