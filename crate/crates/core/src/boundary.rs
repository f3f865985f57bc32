//! Boundary data g = e^{i gamma} stored as a lifting, so winding and phase
//! arithmetic are exact by construction.

use std::f64::consts::TAU;

use crate::complex::Cx;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryData {
    /// Lifting angle samples gamma(theta_j) at the boundary nodes.
    pub gamma: Vec<f64>,
    /// Unit complex samples g_j = e^{i gamma_j}.
    pub g: Vec<Cx>,
    /// Winding of g around the circle.
    pub degree: i32,
}

/// Equivariant data g(theta) = e^{i degree theta}.
pub fn equivariant_boundary(degree: i32, n_theta: usize) -> BoundaryData {
    let dtheta = TAU / n_theta as f64;
    let gamma: Vec<f64> = (0..n_theta).map(|j| degree as f64 * j as f64 * dtheta).collect();
    let g = gamma.iter().map(|&ga| Cx::unit(ga)).collect();
    BoundaryData { gamma, g, degree }
}

impl BoundaryData {
    /// Build from lifting samples. A trustworthy lifting varies by less than
    /// pi between neighboring samples, which pins the closing increment and
    /// makes the winding exact.
    pub fn from_gamma(gamma: Vec<f64>) -> Result<BoundaryData> {
        if gamma.len() < 16 {
            return Err(Error::config(format!(
                "need at least 16 boundary samples, got {}",
                gamma.len()
            )));
        }
        for (j, w) in gamma.windows(2).enumerate() {
            if (w[1] - w[0]).abs() >= std::f64::consts::PI {
                return Err(Error::config(format!(
                    "gamma lifting jumps by {:.3} between samples {j} and {}; \
                     sample the lifting densely enough that steps stay below pi",
                    w[1] - w[0],
                    j + 1
                )));
            }
        }
        let total = Self::total_increment(&gamma);
        let degree = (total / TAU).round();
        let g = gamma.iter().map(|&ga| Cx::unit(ga)).collect();
        Ok(BoundaryData {
            gamma,
            g,
            degree: degree as i32,
        })
    }

    /// Total increment of gamma around the circle, closing the last gap by
    /// the principal branch.
    fn total_increment(gamma: &[f64]) -> f64 {
        let n = gamma.len();
        let mut total = gamma[n - 1] - gamma[0];
        let mut gap = (gamma[0] - gamma[n - 1]).rem_euclid(TAU);
        if gap > TAU / 2.0 {
            gap -= TAU;
        }
        total += gap;
        total
    }

    pub fn n_theta(&self) -> usize {
        self.gamma.len()
    }

    /// Winding of g around the circle, recomputed from the lifting.
    pub fn winding(&self) -> i32 {
        (Self::total_increment(&self.gamma) / TAU).round() as i32
    }

    /// Lifting value at an arbitrary angle by linear interpolation with the
    /// periodic closure gamma(theta + 2 pi) = gamma(theta) + 2 pi degree.
    pub fn gamma_at(&self, theta: f64) -> f64 {
        let n = self.n_theta() as f64;
        let t = theta.rem_euclid(TAU);
        let wraps = ((theta - t) / TAU).round();
        let x = t / TAU * n;
        let j0 = x.floor() as usize % self.n_theta();
        let frac = x - x.floor();
        let g0 = self.gamma[j0];
        let g1 = if j0 + 1 < self.n_theta() {
            self.gamma[j0 + 1]
        } else {
            self.gamma[0] + self.degree as f64 * TAU
        };
        g0 + frac * (g1 - g0) + wraps * self.degree as f64 * TAU
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_one_is_identity_map() {
        let bd = equivariant_boundary(1, 512);
        assert_eq!(bd.winding(), 1);
        for j in [0usize, 100, 511] {
            let th = j as f64 * TAU / 512.0;
            assert!((bd.g[j] - Cx::unit(th)).abs() < 1e-12);
        }
    }

    #[test]
    fn degree_two_doubles_phase() {
        let bd = equivariant_boundary(2, 512);
        assert_eq!(bd.winding(), 2);
        let j = 77;
        let th = j as f64 * TAU / 512.0;
        assert!((bd.g[j] - Cx::unit(2.0 * th)).abs() < 1e-12);
    }

    #[test]
    fn degree_zero_is_constant() {
        let bd = equivariant_boundary(0, 64);
        assert_eq!(bd.winding(), 0);
        for g in &bd.g {
            assert!((*g - Cx::ONE).abs() < 1e-15);
        }
    }

    #[test]
    fn winding_matches_requested_degree() {
        for degree in -3..=3 {
            for n_theta in [16usize, 64, 100, 512] {
                let bd = equivariant_boundary(degree, n_theta);
                assert_eq!(bd.winding(), degree, "degree {degree}, n {n_theta}");
                for g in &bd.g {
                    assert!((g.abs() - 1.0).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn from_gamma_round_trip_and_rejection() {
        let bd = equivariant_boundary(-2, 128);
        let rebuilt = BoundaryData::from_gamma(bd.gamma.clone()).unwrap();
        assert_eq!(rebuilt.degree, -2);

        // An under-sampled lifting with a step of pi or more is rejected.
        let mut bad = equivariant_boundary(1, 64).gamma;
        bad[30] += 3.5;
        assert!(BoundaryData::from_gamma(bad).is_err());
    }

    #[test]
    fn gamma_interpolation_is_exact_for_equivariant_data() {
        let bd = equivariant_boundary(2, 64);
        for &th in &[0.0, 0.1, 1.73, 6.2, -0.4, 7.0] {
            assert!((bd.gamma_at(th) - 2.0 * th).abs() < 1e-10, "theta {th}");
        }
    }
}
