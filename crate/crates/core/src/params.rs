//! Model parameters: the dial set of the energy functional.

use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Parameters of the anchored Ginzburg-Landau energy on the unit disk.
///
/// The anchoring strength is tied to the length scale as upsilon = epsilon^(-s)
/// and is always recomputed from `epsilon` and `s`, never stored.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Ginzburg-Landau core length scale, > 0.
    pub epsilon: f64,
    /// Anchoring exponent in (0, 1].
    pub s: f64,
    /// Oblique anchoring angle in radians, open interval (0, pi/2).
    pub alpha: f64,
    /// Winding of the boundary data around the circle.
    pub degree: i32,
}

impl ModelParams {
    pub fn new(epsilon: f64, s: f64, alpha: f64, degree: i32) -> Result<ModelParams> {
        let p = ModelParams {
            epsilon,
            s,
            alpha,
            degree,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(Error::config(format!(
                "epsilon must be positive and finite, got {}",
                self.epsilon
            )));
        }
        if !(self.s > 0.0 && self.s <= 1.0) {
            return Err(Error::config(format!("s must lie in (0, 1], got {}", self.s)));
        }
        if !(self.alpha > 0.0 && self.alpha < FRAC_PI_2) {
            return Err(Error::config(format!(
                "alpha must lie in (0, pi/2), got {}",
                self.alpha
            )));
        }
        Ok(())
    }

    /// Anchoring strength upsilon = epsilon^(-s).
    pub fn upsilon(&self) -> f64 {
        anchoring_strength(self.epsilon, self.s).expect("validated params")
    }

    /// Boundary core scale epsilon^s.
    pub fn eps_s(&self) -> f64 {
        self.epsilon.powf(self.s)
    }
}

/// upsilon = epsilon^(-s) for epsilon > 0 and s in (0, 1].
pub fn anchoring_strength(epsilon: f64, s: f64) -> Result<f64> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::config(format!(
            "epsilon must be positive and finite, got {epsilon}"
        )));
    }
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::config(format!("s must lie in (0, 1], got {s}")));
    }
    Ok(epsilon.powf(-s))
}
