//! Initial-condition generators: vortex products, boojum-pair competitors,
//! and reproducible random fields.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};

use crate::boundary::BoundaryData;
use crate::complex::Cx;
use crate::error::{Error, Result};
use crate::field::ComplexField;
use crate::grid::PolarGrid;
use crate::params::ModelParams;

/// Product ansatz with prescribed interior vortices: the phase winds by the
/// given degree around each position, the modulus drops linearly to zero
/// inside one core length of each, and a global phase rotation aligns the
/// boundary trace with g e^{i alpha}.
pub fn vortex_seed(
    positions: &[(f64, f64)],
    degrees: &[i32],
    params: &ModelParams,
    grid: &PolarGrid,
    bd: &BoundaryData,
) -> Result<ComplexField> {
    if positions.len() != degrees.len() {
        return Err(Error::config(format!(
            "{} positions but {} degrees",
            positions.len(),
            degrees.len()
        )));
    }
    for &(x, y) in positions {
        if x * x + y * y >= 1.0 {
            return Err(Error::config(format!(
                "vortex position ({x}, {y}) is not strictly inside the disk"
            )));
        }
    }
    let total: i32 = degrees.iter().sum();
    if total != bd.degree {
        return Err(Error::config(format!(
            "vortex degrees sum to {total}, boundary degree is {}",
            bd.degree
        )));
    }

    let raw_phase = |x: f64, y: f64| -> f64 {
        positions
            .iter()
            .zip(degrees)
            .map(|(&(px, py), &d)| d as f64 * (y - py).atan2(x - px))
            .sum()
    };
    let modulus = |x: f64, y: f64| -> f64 {
        positions
            .iter()
            .fold(1.0f64, |m, &(px, py)| {
                m.min(((x - px).powi(2) + (y - py).powi(2)).sqrt() / params.epsilon)
            })
            .min(1.0)
    };

    // Circular mean of the phase misfit against g e^{i alpha} on the boundary.
    let mut align = Cx::ZERO;
    for (j, &gamma) in bd.gamma.iter().enumerate() {
        let th = grid.theta(j);
        align += Cx::unit(gamma + params.alpha - raw_phase(th.cos(), th.sin()));
    }
    let phi0 = if align.abs() > 1e-12 {
        align.arg()
    } else {
        params.alpha
    };

    let mut field = ComplexField::from_fn(grid, |r, th| {
        let (x, y) = (r * th.cos(), r * th.sin());
        Cx::from_polar(modulus(x, y), raw_phase(x, y) + phi0)
    });
    for v in &mut field.values {
        debug_assert!(v.is_finite());
    }
    Ok(field)
}

/// Angular (geodesic) distance on the circle subtended by the chord from the
/// point z = (x, y) to the boundary point at `angle`.
fn geodesic_to_boundary_point(x: f64, y: f64, angle: f64) -> f64 {
    let dx = x - angle.cos();
    let dy = y - angle.sin();
    let chord = (dx * dx + dy * dy).sqrt();
    2.0 * (0.5 * chord).clamp(-1.0, 1.0).asin()
}

/// Boojum-pair competitor: unit modulus everywhere, harmonic phase whose
/// boundary trace follows g e^{-i alpha} / g e^{+i alpha} on the arcs between
/// the defect angles, with the phase frozen inside radius eps^s of each
/// defect and blended up to 2 eps^s.
///
/// Angles alternate light (even index) / heavy (odd index) counterclockwise;
/// the phase drops by 2 alpha across a light boojum and by 2 pi - 2 alpha
/// across a heavy one. The interior phase is the explicit harmonic extension
/// sum_k 2 c_k Im log(1 - conj(q_k) z) with c = alpha/pi at light and
/// 1 - alpha/pi at heavy defects, which has exactly those boundary jumps and
/// slope matching the boundary winding.
pub fn boojum_seed(
    pair_angles: &[f64],
    params: &ModelParams,
    grid: &PolarGrid,
    bd: &BoundaryData,
) -> Result<ComplexField> {
    let degree = bd.degree;
    if degree < 1 {
        return Err(Error::config(format!(
            "boojum seed needs positive boundary degree, got {degree}"
        )));
    }
    if pair_angles.len() != 2 * degree as usize {
        return Err(Error::config(format!(
            "expected {} alternating light/heavy angles, got {}",
            2 * degree,
            pair_angles.len()
        )));
    }
    for w in pair_angles.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::config(
                "boojum angles must be strictly increasing",
            ));
        }
    }
    if pair_angles[pair_angles.len() - 1] - pair_angles[0] >= TAU {
        return Err(Error::config(
            "boojum angles must fit one turn of the circle",
        ));
    }

    let alpha = params.alpha;
    let eps_s = params.eps_s();
    // Light boojums carry weight alpha/pi, heavy ones 1 - alpha/pi.
    let coef: Vec<f64> = (0..pair_angles.len())
        .map(|k| {
            if k % 2 == 0 {
                alpha / PI
            } else {
                1.0 - alpha / PI
            }
        })
        .collect();

    // Harmonic phase without its additive constant. Each log factor is
    // evaluated on the principal branch; 1 - conj(q) z has positive real part
    // on the closed disk, so no branch crossing occurs.
    let raw = |x: f64, y: f64| -> f64 {
        let mut p = 0.0;
        for (k, &phi) in pair_angles.iter().enumerate() {
            let (qc, qs) = (phi.cos(), phi.sin());
            // w = 1 - conj(q) z
            let wre = 1.0 - (qc * x + qs * y);
            let wim = -(qc * y - qs * x);
            p += 2.0 * coef[k] * wim.atan2(wre);
        }
        p
    };

    // Pin the constant so the trace on the arc after the first light boojum
    // equals g e^{-i alpha}.
    let theta_ref = 0.5 * (pair_angles[0] + pair_angles[1]);
    let phase_const =
        bd.gamma_at(theta_ref) - alpha - raw(theta_ref.cos(), theta_ref.sin());

    // Frozen core value: midpoint of the lifted phase sampled just outside
    // the blend zone on both sides, which keeps the core swing below pi and
    // adds no spurious winding. (raw is a continuous lifting along the
    // boundary walk away from the defect crossings.)
    let probe = 2.5 * eps_s;
    let frozen: Vec<f64> = pair_angles
        .iter()
        .map(|&phi| {
            let before = raw((phi - probe).cos(), (phi - probe).sin());
            let after = raw((phi + probe).cos(), (phi + probe).sin());
            0.5 * (before + after) + phase_const
        })
        .collect();

    let build = |x: f64, y: f64| -> Cx {
        let mut rho = f64::INFINITY;
        let mut nearest = 0usize;
        for (k, &phi) in pair_angles.iter().enumerate() {
            let d = geodesic_to_boundary_point(x, y, phi);
            if d < rho {
                rho = d;
                nearest = k;
            }
        }
        let phase = raw(x, y) + phase_const;
        let chi = ((rho - eps_s) / eps_s).clamp(0.0, 1.0);
        Cx::unit(chi * phase + (1.0 - chi) * frozen[nearest])
    };

    Ok(ComplexField::from_fn(grid, |r, th| {
        build(r * th.cos(), r * th.sin())
    }))
}

/// Reproducible pseudo-random field, uniform on the disk |u| <= amplitude.
pub fn random_seed(rng_seed: u64, amplitude: f64, grid: &PolarGrid) -> ComplexField {
    debug_assert!(amplitude > 0.0 && amplitude <= 2.0);
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut field = ComplexField::constant(grid, Cx::ZERO);
    for v in &mut field.values {
        let m = amplitude * rng.random::<f64>().sqrt();
        let ph = TAU * rng.random::<f64>();
        *v = Cx::from_polar(m, ph);
    }
    field.sync_trace();
    field
}
