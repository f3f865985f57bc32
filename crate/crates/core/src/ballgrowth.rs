//! Executable model of the defect-ball expansion and merging procedure that
//! produces the logarithmic lower-bound coefficient.
//!
//! Boundary balls grow linearly in the common clock t, interior balls like
//! t^(1/s), so the ratio invariants R/r = t (boundary) and (R/r)^s = t
//! (interior) hold exactly through every merge: merged radii and seed sizes
//! are the sums of the member values, with interior contributions entering a
//! mixed merge through their s-th power.

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::combinatorics::c_alpha;
use crate::error::{Error, Result};
use crate::params::ModelParams;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BallKind {
    /// Centered on the boundary circle at the given angle.
    Boundary { angle: f64 },
    /// Interior center in Cartesian coordinates.
    Interior { x: f64, y: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DefectBall {
    #[serde(flatten)]
    pub kind: BallKind,
    pub radius: f64,
    pub seed: f64,
    pub degree: i32,
    #[serde(default)]
    pub tau: i8,
}

impl DefectBall {
    pub fn boundary(angle: f64, seed: f64, degree: i32, tau: i8) -> DefectBall {
        DefectBall {
            kind: BallKind::Boundary { angle },
            radius: seed,
            seed,
            degree,
            tau,
        }
    }

    pub fn interior(x: f64, y: f64, seed: f64, degree: i32) -> DefectBall {
        DefectBall {
            kind: BallKind::Interior { x, y },
            radius: seed,
            seed,
            degree,
            tau: 0,
        }
    }

    pub fn center(&self) -> (f64, f64) {
        match self.kind {
            BallKind::Boundary { angle } => (angle.cos(), angle.sin()),
            BallKind::Interior { x, y } => (x, y),
        }
    }

    pub fn is_boundary(&self) -> bool {
        matches!(self.kind, BallKind::Boundary { .. })
    }

    /// Radius at clock t: r t for boundary balls, r t^(1/s) for interior.
    pub fn radius_at(&self, t: f64, s: f64) -> f64 {
        if self.is_boundary() {
            self.seed * t
        } else {
            self.seed * t.powf(1.0 / s)
        }
    }
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthEventKind {
    Expand,
    Merge,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthEvent {
    pub time: f64,
    pub event: GrowthEventKind,
    pub balls: Vec<DefectBall>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub history: Vec<GrowthEvent>,
    pub final_balls: Vec<DefectBall>,
    pub final_time: f64,
    /// Total degree attributed to boundary balls at exit.
    pub d_boundary: i32,
    /// Total degree still carried by interior balls at exit.
    pub d_interior: i32,
    pub coefficient: f64,
    pub mu: f64,
}

/// mu = min(2 C_alpha, 1/s).
pub fn mu(params: &ModelParams) -> Result<f64> {
    Ok((2.0 * c_alpha(params.alpha)?).min(1.0 / params.s))
}

/// Lower-bound multiplier pi (mu s |D_b| + |D_int|) of ln(sigma/epsilon).
pub fn lower_bound_coefficient(report: &GrowthReport, params: &ModelParams) -> Result<f64> {
    let mu = mu(params)?;
    Ok(std::f64::consts::PI
        * (mu * params.s * report.d_boundary.unsigned_abs() as f64
            + report.d_interior.unsigned_abs() as f64))
}

/// Merge a transitively touching group into one ball.
///
/// Same-kind merges sum radii and seed sizes. A mixed merge produces a
/// boundary ball whose radius and seed receive the interior contributions
/// through their s-th power. Degrees sum; boojum numbers sum and must stay
/// in -1..=1. The merged center is the midpoint of the enclosing interval
/// (boundary, in angle) or of the farthest-separated pair (interior); if the
/// nominal summed radius does not enclose every member, radius and seed are
/// inflated together so the clock ratio survives.
pub fn merge(touching: &[DefectBall], params: &ModelParams) -> Result<DefectBall> {
    if touching.is_empty() {
        return Err(Error::config("cannot merge an empty group"));
    }
    if touching.len() == 1 {
        return Ok(touching[0]);
    }
    let s = params.s;
    let any_boundary = touching.iter().any(|b| b.is_boundary());
    let degree: i32 = touching.iter().map(|b| b.degree).sum();
    let tau: i64 = touching.iter().map(|b| b.tau as i64).sum();

    let (kind, nominal_radius, nominal_seed) = if any_boundary {
        if !(-1..=1).contains(&tau) {
            return Err(Error::AlternationViolation { tau });
        }
        let radius: f64 = touching
            .iter()
            .map(|b| {
                if b.is_boundary() {
                    b.radius
                } else {
                    b.radius.powf(s)
                }
            })
            .sum();
        let seed: f64 = touching
            .iter()
            .map(|b| if b.is_boundary() { b.seed } else { b.seed.powf(s) })
            .sum();
        // Midpoint of the enclosing angular interval of the boundary members
        // and the projections of the interior members.
        let angles: Vec<f64> = touching
            .iter()
            .map(|b| match b.kind {
                BallKind::Boundary { angle } => angle,
                BallKind::Interior { x, y } => y.atan2(x),
            })
            .collect();
        let reference = angles[0];
        let rel: Vec<f64> = angles
            .iter()
            .map(|&a| {
                let mut d = (a - reference).rem_euclid(TAU);
                if d > TAU / 2.0 {
                    d -= TAU;
                }
                d
            })
            .collect();
        let lo = rel.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = rel.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let angle = (reference + 0.5 * (lo + hi)).rem_euclid(TAU);
        (BallKind::Boundary { angle }, radius, seed)
    } else {
        let radius: f64 = touching.iter().map(|b| b.radius).sum();
        let seed: f64 = touching.iter().map(|b| b.seed).sum();
        // Midpoint of the farthest-separated pair of member extremes.
        let mut best = (0usize, 0usize, f64::NEG_INFINITY);
        for i in 0..touching.len() {
            for j in i..touching.len() {
                let d = dist(touching[i].center(), touching[j].center())
                    + touching[i].radius
                    + touching[j].radius;
                if d > best.2 {
                    best = (i, j, d);
                }
            }
        }
        let (i, j) = (best.0, best.1);
        let (ci, cj) = (touching[i].center(), touching[j].center());
        let d = dist(ci, cj);
        let (x, y) = if d < 1e-15 {
            ci
        } else {
            // Center of the segment spanned by the two extreme points.
            let ux = (cj.0 - ci.0) / d;
            let uy = (cj.1 - ci.1) / d;
            let a = -touching[i].radius;
            let b = d + touching[j].radius;
            let mid = 0.5 * (a + b);
            (ci.0 + mid * ux, ci.1 + mid * uy)
        };
        (BallKind::Interior { x, y }, radius, seed)
    };

    // Inflate minimally (radius and seed together) so enclosure holds.
    let center = match kind {
        BallKind::Boundary { angle } => (angle.cos(), angle.sin()),
        BallKind::Interior { x, y } => (x, y),
    };
    let needed = touching
        .iter()
        .map(|b| dist(center, b.center()) + b.radius)
        .fold(0.0f64, f64::max);
    let (radius, seed) = if needed > nominal_radius {
        (needed, nominal_seed * needed / nominal_radius)
    } else {
        (nominal_radius, nominal_seed)
    };

    Ok(DefectBall {
        kind,
        radius,
        seed,
        degree,
        tau: tau as i8,
    })
}

/// First clock time t > t_now at which the pair touches, if any.
fn contact_time(a: &DefectBall, b: &DefectBall, s: f64, t_now: f64) -> Option<f64> {
    let d = dist(a.center(), b.center());
    if d <= 0.0 {
        return Some(t_now);
    }
    let t = match (a.is_boundary(), b.is_boundary()) {
        (true, true) => d / (a.seed + b.seed),
        (false, false) => (d / (a.seed + b.seed)).powf(s),
        _ => {
            // Monotone in t: bisect r_b t + r_i t^{1/s} = d.
            let (bb, ii) = if a.is_boundary() { (a, b) } else { (b, a) };
            let f = |t: f64| bb.seed * t + ii.seed * t.powf(1.0 / s) - d;
            if f(t_now) >= 0.0 {
                return Some(t_now);
            }
            let mut lo = t_now;
            let mut hi = t_now.max(1.0);
            while f(hi) < 0.0 {
                hi *= 2.0;
                if hi > 1e18 {
                    return None;
                }
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        }
    };
    (t.is_finite() && t >= t_now).then_some(t)
}

/// Clock time at which an interior ball reaches the boundary circle.
fn wall_time(ball: &DefectBall, s: f64) -> Option<f64> {
    if ball.is_boundary() {
        return None;
    }
    let (x, y) = ball.center();
    let gap = 1.0 - (x * x + y * y).sqrt();
    Some((gap.max(0.0) / ball.seed).powf(s))
}

/// Run the expansion/merging procedure from disjoint initial balls until the
/// total boundary radius reaches sigma^s / 2 (or, for a purely interior
/// family, the total interior radius reaches sigma / 2).
pub fn grow(balls: &[DefectBall], sigma: f64, params: &ModelParams) -> Result<GrowthReport> {
    if balls.is_empty() {
        return Err(Error::config("no defect balls to grow"));
    }
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(Error::config(format!("sigma must lie in (0, 1), got {sigma}")));
    }
    let s = params.s;
    for b in balls {
        if !(b.seed > 0.0) || !(b.radius > 0.0) {
            return Err(Error::config("ball radii and seeds must be positive"));
        }
        if (b.radius / b.seed - 1.0).abs() > 1e-9 {
            return Err(Error::config(
                "initial balls must start at their seed size (clock t = 1)",
            ));
        }
        if !b.is_boundary() && b.tau != 0 {
            return Err(Error::config("interior balls carry no boojum number"));
        }
    }
    for i in 0..balls.len() {
        for j in i + 1..balls.len() {
            let d = dist(balls[i].center(), balls[j].center());
            if d <= balls[i].radius + balls[j].radius {
                return Err(Error::config(format!(
                    "initial balls {i} and {j} overlap"
                )));
            }
        }
    }

    let exit_sum_boundary = 0.5 * sigma.powf(s);
    let exit_sum_interior = 0.5 * sigma;
    let mut t = 1.0;
    let mut current: Vec<DefectBall> = balls.to_vec();
    let mut history = Vec::new();
    let total_degree: i32 = current.iter().map(|b| b.degree).sum();

    let set_radii = |balls: &mut [DefectBall], t: f64| {
        for b in balls.iter_mut() {
            b.radius = b.radius_at(t, s);
        }
    };

    loop {
        // Exit clock from the current seed inventory.
        let seed_b: f64 = current
            .iter()
            .filter(|b| b.is_boundary())
            .map(|b| b.seed)
            .sum();
        let t_exit = if seed_b > 0.0 {
            exit_sum_boundary / seed_b
        } else {
            let seed_i: f64 = current.iter().map(|b| b.seed).sum();
            (exit_sum_interior / seed_i).powf(s)
        };

        // Earliest contact among pairs and with the boundary wall.
        let mut t_next = t_exit;
        for i in 0..current.len() {
            if let Some(tw) = wall_time(&current[i], s) {
                if tw > t {
                    t_next = t_next.min(tw);
                }
            }
            for j in i + 1..current.len() {
                if let Some(tc) = contact_time(&current[i], &current[j], s, t) {
                    if tc > t {
                        t_next = t_next.min(tc);
                    }
                }
            }
        }

        if t_next >= t_exit {
            t = t_exit;
            set_radii(&mut current, t);
            history.push(GrowthEvent {
                time: t,
                event: GrowthEventKind::Expand,
                balls: current.clone(),
            });
            break;
        }

        t = t_next;
        set_radii(&mut current, t);
        history.push(GrowthEvent {
            time: t,
            event: GrowthEventKind::Expand,
            balls: current.clone(),
        });

        // Merge transitively touching groups (ties within 1e-12 t count as
        // simultaneous); repeat at the same clock until disjoint, since a
        // merged ball may swallow new neighbors.
        loop {
            let tol = 1e-12 * t.max(1.0);
            let n = current.len();
            let mut group_of: Vec<usize> = (0..n).collect();
            fn find(g: &mut Vec<usize>, k: usize) -> usize {
                let mut root = k;
                while g[root] != root {
                    root = g[root];
                }
                let mut cur = k;
                while g[cur] != cur {
                    let next = g[cur];
                    g[cur] = root;
                    cur = next;
                }
                root
            }
            let mut touched = false;
            for i in 0..n {
                for j in i + 1..n {
                    let d = dist(current[i].center(), current[j].center());
                    if d <= current[i].radius + current[j].radius + tol {
                        let (ri, rj) = (find(&mut group_of, i), find(&mut group_of, j));
                        if ri != rj {
                            group_of[ri] = rj;
                            touched = true;
                        }
                    }
                }
            }
            // Interior balls that reached the wall merge with an empty
            // boundary ball of radius, degree, and boojum number zero.
            let mut wall_hit = vec![false; n];
            for (i, b) in current.iter().enumerate() {
                if !b.is_boundary() {
                    let (x, y) = b.center();
                    if b.radius + tol >= 1.0 - (x * x + y * y).sqrt() {
                        wall_hit[i] = true;
                        touched = true;
                    }
                }
            }
            if !touched {
                break;
            }
            let mut groups: Vec<Vec<DefectBall>> = Vec::new();
            let mut owner: Vec<Option<usize>> = vec![None; n];
            let mut next_balls: Vec<DefectBall> = Vec::new();
            for k in 0..n {
                let root = find(&mut group_of, k);
                let slot = match owner[root] {
                    Some(s) => s,
                    None => {
                        groups.push(Vec::new());
                        owner[root] = Some(groups.len() - 1);
                        groups.len() - 1
                    }
                };
                let mut b = current[k];
                if wall_hit[k] && !b.is_boundary() {
                    // Promote through a zero boundary ball at the projection.
                    let (x, y) = b.center();
                    let angle = y.atan2(x);
                    let promoted = merge(
                        &[b, DefectBall::boundary(angle, f64::MIN_POSITIVE, 0, 0)],
                        params,
                    )?;
                    b = promoted;
                }
                groups[slot].push(b);
            }
            for g in groups {
                if g.len() == 1 {
                    next_balls.push(g[0]);
                } else {
                    let merged = merge(&g, params)?;
                    next_balls.push(merged);
                }
            }
            current = next_balls;
            history.push(GrowthEvent {
                time: t,
                event: GrowthEventKind::Merge,
                balls: current.clone(),
            });
            let now: i32 = current.iter().map(|b| b.degree).sum();
            debug_assert_eq!(now, total_degree);
            if current.len() <= 1 {
                break;
            }
        }

        if current.len() == 1 && current[0].is_boundary() {
            // Grow the survivor to the exit scale.
            let t_end = exit_sum_boundary / current[0].seed;
            if t_end > t {
                t = t_end;
                set_radii(&mut current, t);
                history.push(GrowthEvent {
                    time: t,
                    event: GrowthEventKind::Expand,
                    balls: current.clone(),
                });
            }
            break;
        }
    }

    let d_boundary: i32 = current
        .iter()
        .filter(|b| b.is_boundary())
        .map(|b| b.degree)
        .sum();
    let d_interior: i32 = current
        .iter()
        .filter(|b| !b.is_boundary())
        .map(|b| b.degree)
        .sum();
    let mut report = GrowthReport {
        history,
        final_balls: current,
        final_time: t,
        d_boundary,
        d_interior,
        coefficient: 0.0,
        mu: mu(params)?,
    };
    report.coefficient = lower_bound_coefficient(&report, params)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_3, PI};

    fn params(s: f64) -> ModelParams {
        ModelParams::new(0.02, s, FRAC_PI_3, 1).unwrap()
    }

    #[test]
    fn antipodal_boundary_pair_never_merges() {
        let p = params(0.72);
        let eps_s = p.eps_s();
        let balls = vec![
            DefectBall::boundary(0.0, eps_s, 1, 1),
            DefectBall::boundary(PI, eps_s, 0, -1),
        ];
        let report = grow(&balls, 0.3, &p).unwrap();
        assert_eq!(report.final_balls.len(), 2);
        assert!(!report
            .history
            .iter()
            .any(|e| e.event == GrowthEventKind::Merge));
        // mu = min(2 C_alpha, 1/s) = 10/9 at alpha = pi/3, s = 0.72;
        // coefficient = pi mu s |D_b| = 0.8 pi.
        assert!((report.mu - 10.0 / 9.0).abs() < 1e-12);
        assert!((report.coefficient - 0.8 * PI).abs() < 1e-12);
    }

    #[test]
    fn single_interior_ball_coefficient() {
        let p = params(0.72);
        let balls = vec![DefectBall::interior(0.2, 0.1, p.epsilon, 1)];
        let report = grow(&balls, 0.2, &p).unwrap();
        assert_eq!(report.d_interior, 1);
        assert_eq!(report.d_boundary, 0);
        assert!((report.coefficient - PI).abs() < 1e-12);
    }

    #[test]
    fn two_interior_coefficient_is_two_pi() {
        let p = params(1.0);
        let balls = vec![
            DefectBall::interior(0.4, 0.0, p.epsilon, 1),
            DefectBall::interior(-0.4, 0.0, p.epsilon, 1),
        ];
        let report = grow(&balls, 0.1, &p).unwrap();
        assert!((report.coefficient - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn merge_rules_match_bookkeeping() {
        let p = params(0.72);
        // Two boundary balls: radii and seeds sum, degrees and taus sum.
        let a = DefectBall {
            kind: BallKind::Boundary { angle: 0.0 },
            radius: 0.02,
            seed: 0.01,
            degree: 0,
            tau: -1,
        };
        let b = DefectBall {
            kind: BallKind::Boundary { angle: 0.03 },
            radius: 0.025,
            seed: 0.0125,
            degree: 1,
            tau: 1,
        };
        let m = merge(&[a, b], &p).unwrap();
        assert!(m.is_boundary());
        assert!((m.radius - 0.045).abs() < 1e-15);
        assert!((m.seed - 0.0225).abs() < 1e-15);
        assert_eq!(m.degree, 1);
        assert_eq!(m.tau, 0);

        // Two interior balls of opposite degree cancel.
        let c = DefectBall::interior(0.0, 0.0, 0.01, 1);
        let d = DefectBall::interior(0.02, 0.0, 0.01, -1);
        let m2 = merge(&[c, d], &p).unwrap();
        assert!(!m2.is_boundary());
        assert_eq!(m2.degree, 0);

        // Interior ball with an empty boundary ball promotes via the s-power.
        let e = DefectBall {
            kind: BallKind::Interior { x: 0.97, y: 0.0 },
            radius: 0.03,
            seed: 0.01,
            degree: 1,
            tau: 0,
        };
        let zero = DefectBall::boundary(0.0, f64::MIN_POSITIVE, 0, 0);
        let m3 = merge(&[e, zero], &p).unwrap();
        assert!(m3.is_boundary());
        assert!((m3.radius - 0.03f64.powf(0.72)).abs() < 1e-9);
        assert_eq!(m3.degree, 1);

        // Alternation violation is an error.
        let t1 = DefectBall::boundary(0.0, 0.01, 0, 1);
        let t2 = DefectBall::boundary(0.03, 0.01, 0, 1);
        assert!(matches!(
            merge(&[t1, t2], &p),
            Err(Error::AlternationViolation { .. })
        ));
    }

    #[test]
    fn mixed_merge_promotes_interior_to_boundary() {
        let p = params(0.72);
        let eps_s = p.eps_s();
        // Interior ball near the boundary ball: they must merge into a
        // boundary ball with the s-power radius contribution.
        let balls = vec![
            DefectBall::boundary(0.0, eps_s, 1, 1),
            DefectBall::interior(0.9, 0.0, p.epsilon, 1),
            DefectBall::boundary(PI, eps_s, 0, -1),
        ];
        let report = grow(&balls, 0.4, &p).unwrap();
        assert!(report
            .history
            .iter()
            .any(|e| e.event == GrowthEventKind::Merge));
        assert!(report.final_balls.iter().all(|b| b.is_boundary()));
        assert_eq!(report.d_boundary, 2);
        // Degree conserved through every event.
        for ev in &report.history {
            let sum: i32 = ev.balls.iter().map(|b| b.degree).sum();
            assert_eq!(sum, 2);
        }
    }

    #[test]
    fn clock_ratio_invariant_through_random_histories() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for trial in 0..40 {
            let s = 0.55 + 0.4 * rng.random::<f64>();
            let p = ModelParams::new(0.02, s, FRAC_PI_3, 1).unwrap();
            let n_b = rng.random_range(0usize..3);
            let n_i = rng.random_range(0usize..3);
            if n_b + n_i == 0 {
                continue;
            }
            let mut balls = Vec::new();
            for k in 0..n_b {
                let angle = TAU * (k as f64 + rng.random::<f64>() * 0.5) / (n_b as f64 + 1.0);
                let tau = if k % 2 == 0 { 1 } else { -1 };
                balls.push(DefectBall::boundary(
                    angle,
                    p.eps_s() * (0.5 + rng.random::<f64>()),
                    rng.random_range(-1i32..=2),
                    tau,
                ));
            }
            for _ in 0..n_i {
                let r = 0.3 + 0.5 * rng.random::<f64>();
                let th = TAU * rng.random::<f64>();
                balls.push(DefectBall::interior(
                    r * th.cos(),
                    r * th.sin(),
                    p.epsilon * (0.5 + rng.random::<f64>()),
                    rng.random_range(-2i32..=2),
                ));
            }
            // Discard overlapping setups.
            let Ok(report) = grow(&balls, 0.25, &p) else {
                continue;
            };
            let total: i32 = balls.iter().map(|b| b.degree).sum();
            // Degree conservation and ratio preservation at every event.
            for ev in &report.history {
                let sum: i32 = ev.balls.iter().map(|b| b.degree).sum();
                assert_eq!(sum, total, "trial {trial}");
                for b in &ev.balls {
                    let ratio = if b.is_boundary() {
                        b.radius / b.seed
                    } else {
                        (b.radius / b.seed).powf(s)
                    };
                    assert!(
                        (ratio - ev.time).abs() <= 1e-10 * ev.time.max(1.0),
                        "trial {trial}: ratio {ratio} vs clock {}",
                        ev.time
                    );
                }
            }
        }
    }

    #[test]
    fn coefficient_monotone_in_degrees() {
        let p = params(0.72);
        let mk = |db: i32, di: i32| GrowthReport {
            history: Vec::new(),
            final_balls: Vec::new(),
            final_time: 1.0,
            d_boundary: db,
            d_interior: di,
            coefficient: 0.0,
            mu: 0.0,
        };
        let mut prev = -1.0;
        for db in 0..4 {
            let c = lower_bound_coefficient(&mk(db, 0), &p).unwrap();
            assert!(c > prev);
            prev = c;
        }
        let mut prev = -1.0;
        for di in 0..4 {
            let c = lower_bound_coefficient(&mk(0, di), &p).unwrap();
            assert!(c > prev);
            prev = c;
        }
    }

    #[test]
    fn rejects_bad_initial_data() {
        let p = params(0.72);
        let overlapping = vec![
            DefectBall::boundary(0.0, 0.3, 1, 1),
            DefectBall::boundary(0.1, 0.3, 0, -1),
        ];
        assert!(grow(&overlapping, 0.2, &p).is_err());
        let bad_ratio = vec![DefectBall {
            kind: BallKind::Boundary { angle: 0.0 },
            radius: 0.02,
            seed: 0.01,
            degree: 1,
            tau: 1,
        }];
        assert!(grow(&bad_ratio, 0.2, &p).is_err());
    }
}
