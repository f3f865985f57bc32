//! Renormalized energy of boojum configurations on the unit disk with
//! equivariant boundary data, its conjugate harmonic potential, and the
//! numerical minimization of defect placement.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

/// Ordered boundary angles of the light and heavy boojums.
#[derive(Clone, Debug, Serialize)]
pub struct BoojumConfiguration {
    pub light_angles: Vec<f64>,
    pub heavy_angles: Vec<f64>,
}

impl BoojumConfiguration {
    pub fn new(light_angles: Vec<f64>, heavy_angles: Vec<f64>) -> Result<BoojumConfiguration> {
        if light_angles.len() != heavy_angles.len() || light_angles.is_empty() {
            return Err(Error::config(
                "need equally many light and heavy angles, at least one pair",
            ));
        }
        let cfg = BoojumConfiguration {
            light_angles,
            heavy_angles,
        };
        if cfg.min_separation() < 1e-12 {
            return Err(Error::SingularConfiguration);
        }
        Ok(cfg)
    }

    pub fn degree(&self) -> usize {
        self.light_angles.len()
    }

    fn all_angles(&self) -> Vec<(f64, bool)> {
        let mut v: Vec<(f64, bool)> = self
            .light_angles
            .iter()
            .map(|&a| (a.rem_euclid(TAU), true))
            .chain(self.heavy_angles.iter().map(|&a| (a.rem_euclid(TAU), false)))
            .collect();
        v.sort_by(|x, y| x.0.total_cmp(&y.0));
        v
    }

    fn min_separation(&self) -> f64 {
        let v = self.all_angles();
        let n = v.len();
        let mut min = f64::INFINITY;
        for k in 0..n {
            let next = v[(k + 1) % n].0 + if k + 1 == n { TAU } else { 0.0 };
            min = min.min(next - v[k].0);
        }
        min
    }

    /// True when light and heavy boojums alternate around the circle.
    pub fn interleaved(&self) -> bool {
        let v = self.all_angles();
        v.windows(2).all(|w| w[0].1 != w[1].1) && v.first().map(|f| f.1) != v.last().map(|l| l.1)
    }

    /// Rotate so the first light angle is zero and sort both families.
    pub fn pinned(&self) -> BoojumConfiguration {
        let shift = self.light_angles[0];
        let mut light: Vec<f64> = self
            .light_angles
            .iter()
            .map(|a| (a - shift).rem_euclid(TAU))
            .collect();
        let mut heavy: Vec<f64> = self
            .heavy_angles
            .iter()
            .map(|a| (a - shift).rem_euclid(TAU))
            .collect();
        light.sort_by(f64::total_cmp);
        heavy.sort_by(f64::total_cmp);
        BoojumConfiguration {
            light_angles: light,
            heavy_angles: heavy,
        }
    }
}

/// Chord length |e^{ia} - e^{ib}| = 2 |sin((a - b)/2)|.
fn chord(a: f64, b: f64) -> f64 {
    2.0 * (0.5 * (a - b)).sin().abs()
}

/// Renormalized energy of the configuration:
/// -2 sum_{i != j} [ (alpha/pi) ln|y_i - y_j| + (1 - alpha/pi) ln|yt_i - yt_j| ]
/// -2 sum_{i, j} ln|y_i - yt_j|, with chordal distances on the unit circle.
pub fn renorm_energy_disk(config: &BoojumConfiguration, alpha: f64) -> Result<f64> {
    let a = alpha / PI;
    let light = &config.light_angles;
    let heavy = &config.heavy_angles;
    let d = config.degree();
    let mut w = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                let cll = chord(light[i], light[j]);
                let chh = chord(heavy[i], heavy[j]);
                if cll < 1e-12 || chh < 1e-12 {
                    return Err(Error::SingularConfiguration);
                }
                w += -2.0 * (a * cll.ln() + (1.0 - a) * chh.ln());
            }
            let clh = chord(light[i], heavy[j]);
            if clh < 1e-12 {
                return Err(Error::SingularConfiguration);
            }
            w += -2.0 * clh.ln();
        }
    }
    Ok(w)
}

/// Analytic gradient of [`renorm_energy_disk`] with respect to every angle;
/// light angles first, then heavy.
pub fn renorm_gradient(config: &BoojumConfiguration, alpha: f64) -> Result<Vec<f64>> {
    let a = alpha / PI;
    let light = &config.light_angles;
    let heavy = &config.heavy_angles;
    let d = config.degree();
    // d/dx ln|2 sin((x - y)/2)| = cot((x - y)/2) / 2
    let half_cot = |x: f64, y: f64| -> Result<f64> {
        let h = 0.5 * (x - y);
        if h.sin().abs() < 1e-12 {
            return Err(Error::SingularConfiguration);
        }
        Ok(0.5 * h.cos() / h.sin())
    };
    let mut grad = vec![0.0; 2 * d];
    for i in 0..d {
        for j in 0..d {
            if i != j {
                grad[i] += -4.0 * a * half_cot(light[i], light[j])?;
                grad[d + i] += -4.0 * (1.0 - a) * half_cot(heavy[i], heavy[j])?;
            }
            grad[i] += -2.0 * half_cot(light[i], heavy[j])?;
            grad[d + j] += -2.0 * half_cot(heavy[j], light[i])?;
        }
    }
    Ok(grad)
}

/// Conjugate harmonic potential at an interior point: the weighted sum of
/// disk Green's functions 2 ln|x - p| with weights alpha/pi at light poles
/// and 1 - alpha/pi at heavy poles.
pub fn conjugate_phase_disk(
    config: &BoojumConfiguration,
    alpha: f64,
    point: (f64, f64),
) -> Result<f64> {
    let (x, y) = point;
    if x * x + y * y >= 1.0 {
        return Err(Error::config("the conjugate potential is evaluated strictly inside"));
    }
    let a = alpha / PI;
    let mut phi = 0.0;
    let poles = config
        .light_angles
        .iter()
        .map(|&ang| (ang, a))
        .chain(config.heavy_angles.iter().map(|&ang| (ang, 1.0 - a)));
    for (angle, weight) in poles {
        let dx = x - angle.cos();
        let dy = y - angle.sin();
        let d2 = dx * dx + dy * dy;
        if d2 < 1e-24 {
            return Err(Error::SingularConfiguration);
        }
        phi += weight * d2.ln(); // 2 ln|x - p| = ln(|x - p|^2)
    }
    Ok(phi)
}

#[derive(Clone, Debug, Serialize)]
pub struct MinimizeOutcome {
    pub config: BoojumConfiguration,
    pub value: f64,
    pub restarts_used: u32,
    /// Best value found on the coarse verification grid.
    pub grid_value: f64,
}

/// Minimize the renormalized energy over boojum placements modulo rotation
/// (the first light angle is pinned at zero): multi-start gradient descent
/// with backtracking, then verification against an exhaustive 5-degree grid.
///
/// The energy is defined on configurations in which light and heavy boojums
/// alternate around the circle (the only arrangement the phase branches
/// admit), so both the descent and the verification grid stay inside that
/// space.
pub fn minimize_positions(degree: usize, alpha: f64, restarts: u32) -> Result<MinimizeOutcome> {
    if !(1..=3).contains(&degree) {
        return Err(Error::config(format!(
            "placement minimization supports degree 1..=3, got {degree}"
        )));
    }
    if restarts == 0 {
        return Err(Error::config("need at least one restart"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x0b00);
    let mut best: Option<(f64, BoojumConfiguration)> = None;
    let mut used = 0;
    for attempt in 0..restarts {
        used = attempt + 1;
        // Interleaved start with jitter; light 0 pinned.
        let mut angles: Vec<f64> = (0..2 * degree)
            .map(|k| {
                let base = TAU * k as f64 / (2 * degree) as f64;
                base + 0.5 * (rng.random::<f64>() - 0.5) * TAU / (2 * degree) as f64
            })
            .collect();
        angles[0] = 0.0;
        let light: Vec<f64> = (0..degree).map(|i| angles[2 * i]).collect();
        let heavy: Vec<f64> = (0..degree).map(|i| angles[2 * i + 1]).collect();
        let Ok(start) = BoojumConfiguration::new(light, heavy) else {
            continue;
        };
        match descend(start, alpha) {
            Ok((value, config)) => {
                if best.as_ref().map(|(v, _)| value < *v).unwrap_or(true) {
                    best = Some((value, config));
                }
            }
            Err(Error::SingularConfiguration) => continue,
            Err(e) => return Err(e),
        }
    }
    let Some((mut value, mut config)) = best else {
        return Err(Error::RestartsExhausted(restarts));
    };

    // Exhaustive 5-degree grid check: no grid configuration may beat the
    // optimizer. If one does, descend from it and keep the improvement.
    let (grid_value, grid_config) = coarse_grid_best(degree, alpha)?;
    if grid_value < value - 1e-12 {
        let (v2, c2) = descend(grid_config, alpha)?;
        if v2 < value {
            value = v2;
            config = c2;
        }
    }

    Ok(MinimizeOutcome {
        config: config.pinned(),
        value,
        restarts_used: used,
        grid_value,
    })
}

fn descend(start: BoojumConfiguration, alpha: f64) -> Result<(f64, BoojumConfiguration)> {
    let d = start.degree();
    let mut angles: Vec<f64> = start
        .light_angles
        .iter()
        .chain(start.heavy_angles.iter())
        .copied()
        .collect();
    angles[0] = 0.0;
    let pack = |angles: &[f64]| -> Result<BoojumConfiguration> {
        BoojumConfiguration::new(angles[..d].to_vec(), angles[d..].to_vec())
    };
    let mut config = pack(&angles)?;
    let mut value = renorm_energy_disk(&config, alpha)?;
    let mut step = 0.1;
    for _ in 0..20_000 {
        let mut grad = renorm_gradient(&config, alpha)?;
        grad[0] = 0.0; // rotation gauge: first light angle pinned
        let gnorm = grad.iter().fold(0.0f64, |m, g| m.max(g.abs()));
        if gnorm < 1e-13 {
            break;
        }
        // Backtracking line search on the gradient ray; steps that break the
        // alternation leave the admissible space and are rejected.
        let mut accepted = false;
        for _ in 0..60 {
            let trial: Vec<f64> = angles
                .iter()
                .zip(&grad)
                .map(|(a, g)| a - step * g)
                .collect();
            if let Ok(tc) = pack(&trial) {
                if tc.interleaved() {
                    if let Ok(tv) = renorm_energy_disk(&tc, alpha) {
                        if tv < value - 1e-15 {
                            angles = trial;
                            config = tc;
                            value = tv;
                            step *= 1.6;
                            accepted = true;
                            break;
                        }
                    }
                }
            }
            step *= 0.5;
            if step < 1e-17 {
                break;
            }
        }
        if !accepted {
            break;
        }
    }
    Ok((value, config))
}

/// Exhaustive scan of alternating placements on the 5-degree grid (72
/// nodes): the pinned light sits at zero and the remaining 2 degree - 1
/// angles run over all strictly increasing grid tuples, kinds alternating
/// along the circle.
fn coarse_grid_best(degree: usize, alpha: f64) -> Result<(f64, BoojumConfiguration)> {
    let n = 72usize;
    let step = TAU / n as f64;
    let mut best = f64::INFINITY;
    let mut best_config = None;
    let free = 2 * degree - 1;
    let mut idx = vec![0usize; free];
    loop {
        let ok_order = idx.windows(2).all(|w| w[0] < w[1]) && idx.iter().all(|&k| k >= 1);
        if ok_order {
            let angles: Vec<f64> = std::iter::once(0.0)
                .chain(idx.iter().map(|&k| k as f64 * step))
                .collect();
            let light: Vec<f64> = (0..degree).map(|i| angles[2 * i]).collect();
            let heavy: Vec<f64> = (0..degree).map(|i| angles[2 * i + 1]).collect();
            if let Ok(cfg) = BoojumConfiguration::new(light, heavy) {
                if let Ok(v) = renorm_energy_disk(&cfg, alpha) {
                    if v < best {
                        best = v;
                        best_config = Some(cfg);
                    }
                }
            }
        }
        // Advance the odometer over 1..n, keeping tuples nondecreasing so
        // permutations are skipped early.
        let mut carry = free;
        while carry > 0 {
            idx[carry - 1] += 1;
            if idx[carry - 1] < n {
                break;
            }
            idx[carry - 1] = 1;
            carry -= 1;
        }
        if carry == 0 {
            break;
        }
        for k in 1..free {
            if idx[k] < idx[k - 1] {
                idx[k] = idx[k - 1];
            }
        }
    }
    best_config
        .map(|c| (best, c))
        .ok_or_else(|| Error::config("empty verification grid"))
}

/// Least-squares line fit y = slope * x + intercept.
pub fn linear_fit(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    (slope, intercept)
}
