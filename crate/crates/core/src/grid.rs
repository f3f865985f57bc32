//! Cell-centered polar grid on the unit disk.
//!
//! Radial layout r_i = (i + 1/2) dr keeps every node away from the coordinate
//! singularity at the origin; the angular index is periodic. The radial
//! neighbor of the innermost ring across the origin is cell (0, j + n_theta/2),
//! which requires an even angular count.

use std::f64::consts::TAU;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct PolarGrid {
    pub n_r: usize,
    pub n_theta: usize,
    pub dr: f64,
    pub dtheta: f64,
    /// Cell-centered radii r_i = (i + 1/2) dr.
    pub radii: Vec<f64>,
}

pub fn make_polar_grid(n_r: usize, n_theta: usize) -> Result<PolarGrid> {
    if n_r < 8 {
        return Err(Error::config(format!("n_r must be at least 8, got {n_r}")));
    }
    if n_theta < 16 {
        return Err(Error::config(format!(
            "n_theta must be at least 16, got {n_theta}"
        )));
    }
    if n_theta % 2 != 0 {
        return Err(Error::config(format!(
            "n_theta must be even for the across-origin stencil, got {n_theta}"
        )));
    }
    let dr = 1.0 / n_r as f64;
    let dtheta = TAU / n_theta as f64;
    let radii = (0..n_r).map(|i| (i as f64 + 0.5) * dr).collect();
    Ok(PolarGrid {
        n_r,
        n_theta,
        dr,
        dtheta,
        radii,
    })
}

impl PolarGrid {
    pub fn cells(&self) -> usize {
        self.n_r * self.n_theta
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n_r && j < self.n_theta);
        i * self.n_theta + j
    }

    #[inline]
    pub fn wrap_j(&self, j: isize) -> usize {
        j.rem_euclid(self.n_theta as isize) as usize
    }

    #[inline]
    pub fn theta(&self, j: usize) -> f64 {
        j as f64 * self.dtheta
    }

    #[inline]
    pub fn radius(&self, i: usize) -> f64 {
        self.radii[i]
    }

    /// Polar coordinates of a cell center.
    pub fn cell_center(&self, i: usize, j: usize) -> (f64, f64) {
        (self.radii[i], self.theta(j))
    }

    /// Cartesian coordinates of a cell center.
    pub fn cell_xy(&self, i: usize, j: usize) -> (f64, f64) {
        let (r, th) = self.cell_center(i, j);
        (r * th.cos(), r * th.sin())
    }

    /// Exact cell measure r_i dr dtheta.
    #[inline]
    pub fn cell_measure(&self, i: usize) -> f64 {
        self.radii[i] * self.dr * self.dtheta
    }

    /// Nearest cell to the point (x, y); None outside the disk.
    pub fn nearest_cell(&self, x: f64, y: f64) -> Option<(usize, usize)> {
        let r = (x * x + y * y).sqrt();
        if r >= 1.0 {
            return None;
        }
        let i = ((r / self.dr - 0.5).round().max(0.0) as usize).min(self.n_r - 1);
        let th = y.atan2(x).rem_euclid(TAU);
        let j = self.wrap_j((th / self.dtheta).round() as isize);
        Some((i, j))
    }

    /// Nearest ring index to radius r.
    pub fn nearest_ring(&self, r: f64) -> usize {
        ((r / self.dr - 0.5).round().max(0.0) as usize).min(self.n_r - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grid_layout() {
        let g = make_polar_grid(8, 16).unwrap();
        assert_eq!(g.dr, 0.125);
        assert_eq!(g.radii[0], 0.0625);
        assert_eq!(g.radii[7], 1.0 - 0.0625);
    }

    #[test]
    fn paper_scale_layout() {
        let g = make_polar_grid(128, 512).unwrap();
        assert!((g.dr - 0.0078125).abs() < 1e-15);
        assert!((g.dtheta - 0.012271846303085129).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(make_polar_grid(8, 15).is_err());
        assert!(make_polar_grid(7, 16).is_err());
        assert!(make_polar_grid(8, 14).is_err());
    }

    #[test]
    fn index_round_trip_and_periodicity() {
        let g = make_polar_grid(8, 16).unwrap();
        for i in 0..g.n_r {
            for j in 0..g.n_theta {
                let k = g.idx(i, j);
                assert_eq!((k / g.n_theta, k % g.n_theta), (i, j));
            }
        }
        assert_eq!(g.wrap_j(16), 0);
        assert_eq!(g.wrap_j(-1), 15);
        assert_eq!(g.wrap_j(33), 1);
    }

    #[test]
    fn nearest_cell_inverts_centers() {
        let g = make_polar_grid(16, 32).unwrap();
        for i in 0..g.n_r {
            for j in 0..g.n_theta {
                let (x, y) = g.cell_xy(i, j);
                assert_eq!(g.nearest_cell(x, y), Some((i, j)));
            }
        }
        assert_eq!(g.nearest_cell(2.0, 0.0), None);
    }

    #[test]
    fn measures_tile_the_disk() {
        let g = make_polar_grid(32, 64).unwrap();
        let area: f64 = (0..g.n_r)
            .map(|i| g.cell_measure(i) * g.n_theta as f64)
            .sum();
        assert!((area - std::f64::consts::PI).abs() < 1e-12);
    }
}
