//! Exact evaluation and brute-force verification of the boundary-defect
//! degree combinatorics: the anchoring constant, the regime threshold, the
//! configuration cost, and its exhaustive minimizers.

use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

/// C_alpha = (alpha/pi)^2 + (1 - alpha/pi)^2, strictly between 1/2 and 1.
pub fn c_alpha(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < FRAC_PI_2) {
        return Err(Error::config(format!(
            "alpha must lie in (0, pi/2), got {alpha}"
        )));
    }
    let a = alpha / PI;
    Ok(a * a + (1.0 - a) * (1.0 - a))
}

/// Threshold exponent 1 / (2 C_alpha) separating interior vortices from
/// boundary boojum pairs.
pub fn threshold_s(alpha: f64) -> Result<f64> {
    Ok(1.0 / (2.0 * c_alpha(alpha)?))
}

/// A configuration of boundary defects: integer-degree boundary vortices and
/// boojum pairs (light degree, heavy degree).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct DegreeConfig {
    pub boundary_vortices: Vec<i32>,
    pub boojum_pairs: Vec<(i32, i32)>,
}

impl DegreeConfig {
    pub fn new(mut boundary_vortices: Vec<i32>, mut boojum_pairs: Vec<(i32, i32)>) -> DegreeConfig {
        boundary_vortices.sort_unstable();
        boojum_pairs.sort_unstable();
        DegreeConfig {
            boundary_vortices,
            boojum_pairs,
        }
    }

    pub fn empty() -> DegreeConfig {
        DegreeConfig::new(Vec::new(), Vec::new())
    }

    pub fn total_degree(&self) -> i32 {
        self.boundary_vortices.iter().sum::<i32>()
            + self
                .boojum_pairs
                .iter()
                .map(|(l, h)| l + h)
                .sum::<i32>()
    }

    /// Number of individual defects (a pair counts two).
    pub fn defect_count(&self) -> usize {
        self.boundary_vortices.len() + 2 * self.boojum_pairs.len()
    }
}

/// Cost sum_j (n_j^0)^2 + sum_i [(n_i^- + alpha/pi)^2 + (n_i^+ - alpha/pi)^2].
pub fn config_cost(config: &DegreeConfig, alpha: f64) -> f64 {
    let a = alpha / PI;
    let vortices: f64 = config
        .boundary_vortices
        .iter()
        .map(|&n| (n as f64) * (n as f64))
        .sum();
    let pairs: f64 = config
        .boojum_pairs
        .iter()
        .map(|&(l, h)| {
            let lo = l as f64 + a;
            let hi = h as f64 - a;
            lo * lo + hi * hi
        })
        .sum();
    vortices + pairs
}

/// The same cost in the single-list (degree, boojum number) encoding:
/// sum (n - tau alpha/pi)^2.
pub fn consolidated_cost(entries: &[(i32, i8)], alpha: f64) -> f64 {
    let a = alpha / PI;
    entries
        .iter()
        .map(|&(n, tau)| {
            let v = n as f64 - tau as f64 * a;
            v * v
        })
        .sum()
}

/// The configuration attaining |d| C_alpha: |d| pairs (0, 1) for d > 0,
/// (-1, 0) for d < 0, no boundary vortices.
pub fn equality_minimizer(d: i32) -> DegreeConfig {
    let pair = if d > 0 { (0, 1) } else { (-1, 0) };
    DegreeConfig::new(Vec::new(), vec![pair; d.unsigned_abs() as usize])
}

#[derive(Clone, Debug, Serialize)]
pub struct MinConfigResult {
    pub min_cost: f64,
    pub minimizers: Vec<DegreeConfig>,
}

/// Exhaustive minimization of [`config_cost`] over all configurations with at
/// most `max_defects` defects, individual degrees within `degree_bound`, and
/// total degree `d`. Ties within 1e-12 are all returned. Zero-degree boundary
/// vortices are excluded: they cost nothing and represent no defect.
pub fn min_config(
    d: i32,
    alpha: f64,
    max_defects: usize,
    degree_bound: i32,
) -> Result<MinConfigResult> {
    if max_defects > 6 {
        return Err(Error::BudgetExceeded(format!(
            "max_defects = {max_defects} exceeds the exhaustive budget of 6"
        )));
    }
    if degree_bound > 4 || degree_bound < 1 {
        return Err(Error::BudgetExceeded(format!(
            "degree_bound = {degree_bound} outside 1..=4"
        )));
    }
    let _ = c_alpha(alpha)?;

    let vortex_values: Vec<i32> = (-degree_bound..=degree_bound).filter(|&n| n != 0).collect();
    let mut pair_values: Vec<(i32, i32)> = Vec::new();
    for l in -degree_bound..=degree_bound {
        for h in -degree_bound..=degree_bound {
            pair_values.push((l, h));
        }
    }

    let mut best = f64::INFINITY;
    let mut minimizers: Vec<DegreeConfig> = Vec::new();
    let mut consider = |config: DegreeConfig, cost: f64, best: &mut f64| {
        if cost < *best - 1e-12 {
            *best = cost;
            minimizers.clear();
            minimizers.push(config);
        } else if cost <= *best + 1e-12 {
            if !minimizers.contains(&config) {
                minimizers.push(config);
            }
        }
    };

    // Nondecreasing multisets of vortex degrees and of pairs.
    let mut vortices: Vec<i32> = Vec::new();
    let mut pairs: Vec<(i32, i32)> = Vec::new();
    fn rec_pairs(
        d: i32,
        alpha: f64,
        pair_values: &[(i32, i32)],
        start: usize,
        slots: usize,
        vortices: &Vec<i32>,
        pairs: &mut Vec<(i32, i32)>,
        best: &mut f64,
        consider: &mut impl FnMut(DegreeConfig, f64, &mut f64),
    ) {
        let config_degree: i32 = vortices.iter().sum::<i32>()
            + pairs.iter().map(|(l, h)| l + h).sum::<i32>();
        if config_degree == d {
            let config = DegreeConfig::new(vortices.clone(), pairs.clone());
            let cost = config_cost(&config, alpha);
            consider(config, cost, best);
        }
        if slots == 0 {
            return;
        }
        for k in start..pair_values.len() {
            pairs.push(pair_values[k]);
            rec_pairs(
                d,
                alpha,
                pair_values,
                k,
                slots - 1,
                vortices,
                pairs,
                best,
                consider,
            );
            pairs.pop();
        }
    }
    fn rec_vortices(
        d: i32,
        alpha: f64,
        vortex_values: &[i32],
        pair_values: &[(i32, i32)],
        start: usize,
        remaining: usize,
        vortices: &mut Vec<i32>,
        pairs: &mut Vec<(i32, i32)>,
        best: &mut f64,
        consider: &mut impl FnMut(DegreeConfig, f64, &mut f64),
    ) {
        rec_pairs(
            d,
            alpha,
            pair_values,
            0,
            remaining / 2,
            vortices,
            pairs,
            best,
            consider,
        );
        if remaining == 0 {
            return;
        }
        for k in start..vortex_values.len() {
            vortices.push(vortex_values[k]);
            rec_vortices(
                d,
                alpha,
                vortex_values,
                pair_values,
                k,
                remaining - 1,
                vortices,
                pairs,
                best,
                consider,
            );
            vortices.pop();
        }
    }
    rec_vortices(
        d,
        alpha,
        &vortex_values,
        &pair_values,
        0,
        max_defects,
        &mut vortices,
        &mut pairs,
        &mut best,
        &mut consider,
    );

    minimizers.sort();
    minimizers.dedup();
    Ok(MinConfigResult {
        min_cost: best,
        minimizers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

    #[test]
    fn c_alpha_values() {
        assert!((c_alpha(FRAC_PI_3).unwrap() - 5.0 / 9.0).abs() < 1e-15);
        assert!((c_alpha(FRAC_PI_4).unwrap() - 5.0 / 8.0).abs() < 1e-15);
        // limit alpha -> pi/2: C -> 1/2
        assert!((c_alpha(FRAC_PI_2 - 1e-9).unwrap() - 0.5).abs() < 1e-8);
        assert!(c_alpha(0.0).is_err());
        assert!(c_alpha(FRAC_PI_2).is_err());
        for k in 1..30 {
            let a = FRAC_PI_2 * k as f64 / 30.0;
            let c = c_alpha(a).unwrap();
            assert!(c > 0.5 && c < 1.0);
        }
    }

    #[test]
    fn threshold_values() {
        assert!((threshold_s(FRAC_PI_3).unwrap() - 0.9).abs() < 1e-14);
        assert!((threshold_s(FRAC_PI_4).unwrap() - 0.8).abs() < 1e-14);
        assert!((threshold_s(FRAC_PI_2 - 1e-9).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn cost_oracles() {
        assert_eq!(config_cost(&DegreeConfig::new(vec![1], vec![]), FRAC_PI_3), 1.0);
        let pair = DegreeConfig::new(vec![], vec![(0, 1)]);
        assert!((config_cost(&pair, FRAC_PI_3) - 5.0 / 9.0).abs() < 1e-15);
        assert_eq!(config_cost(&DegreeConfig::empty(), FRAC_PI_3), 0.0);
    }

    #[test]
    fn minimizers_match_equality_case() {
        for d in -3i32..=3 {
            for alpha in [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3, 1.2] {
                let res = min_config(d, alpha, 6, 4).unwrap();
                let expect = d.unsigned_abs() as f64 * c_alpha(alpha).unwrap();
                assert!(
                    (res.min_cost - expect).abs() < 1e-12,
                    "d={d} alpha={alpha}: {} vs {expect}",
                    res.min_cost
                );
                assert_eq!(
                    res.minimizers,
                    vec![equality_minimizer(d)],
                    "d={d} alpha={alpha}"
                );
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        assert!(min_config(1, FRAC_PI_3, 7, 4).is_err());
        assert!(min_config(1, FRAC_PI_3, 6, 5).is_err());
    }

    #[test]
    fn swap_monotonicity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = FRAC_PI_3;
        for _ in 0..200 {
            let x = rng.random_range(-4i32..4);
            let y = rng.random_range(x + 1..=4);
            let ordered = config_cost(&DegreeConfig::new(vec![], vec![(x, y)]), a);
            let swapped = config_cost(&DegreeConfig::new(vec![], vec![(y, x)]), a);
            assert!(ordered < swapped, "(x,y)=({x},{y})");
        }
    }

    #[test]
    fn consolidated_encoding_agrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n_v = rng.random_range(0usize..3);
            let n_p = rng.random_range(0usize..3);
            let vortices: Vec<i32> = (0..n_v)
                .map(|_| {
                    let mut v = 0;
                    while v == 0 {
                        v = rng.random_range(-4i32..=4);
                    }
                    v
                })
                .collect();
            let pairs: Vec<(i32, i32)> = (0..n_p)
                .map(|_| (rng.random_range(-4i32..=4), rng.random_range(-4i32..=4)))
                .collect();
            let config = DegreeConfig::new(vortices.clone(), pairs.clone());
            let mut entries: Vec<(i32, i8)> = vortices.iter().map(|&n| (n, 0i8)).collect();
            for (l, h) in pairs {
                entries.push((l, -1));
                entries.push((h, 1));
            }
            let alpha = 1.1;
            assert!(
                (config_cost(&config, alpha) - consolidated_cost(&entries, alpha)).abs() < 1e-12
            );
        }
    }

    #[test]
    fn negation_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let alpha = 0.8;
        for _ in 0..100 {
            let v: Vec<i32> = (0..2).map(|_| rng.random_range(-3i32..=3)).collect();
            let p: Vec<(i32, i32)> = (0..2)
                .map(|_| (rng.random_range(-3i32..=3), rng.random_range(-3i32..=3)))
                .collect();
            let config = DegreeConfig::new(v.clone(), p.clone());
            let negated = DegreeConfig::new(
                v.iter().map(|&n| -n).collect(),
                p.iter().map(|&(l, h)| (-h, -l)).collect(),
            );
            assert!(
                (config_cost(&config, alpha) - config_cost(&negated, alpha)).abs() < 1e-12
            );
            assert_eq!(config.total_degree(), -negated.total_degree());
        }
    }
}
