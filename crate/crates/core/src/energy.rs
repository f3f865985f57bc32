//! Discrete energy, anchoring density, and the exact gradient of the
//! discrete energy.
//!
//! The energy is assembled from edge differences (midpoint quadrature with the
//! polar measure r dr dtheta), the quartic well, and the weak-anchoring
//! boundary integral evaluated on the trace extrapolated to r = 1 from the
//! outer two rings. The gradient is the exact derivative of this discrete
//! functional, scaled per unit cell measure, so the boundary condition is
//! folded into the outer two rows and forward differences of the energy match
//! the gradient to rounding accuracy.

use serde::Serialize;

use crate::boundary::BoundaryData;
use crate::complex::Cx;
use crate::error::{Error, Result};
use crate::field::{extrapolate_trace, ComplexField};
use crate::grid::PolarGrid;
use crate::par;
use crate::params::ModelParams;

/// Pointwise anchoring density W(u, g) = (|u|^2-1)^2 / 2 + ((u,g) - cos alpha)^2.
///
/// Zero exactly when |u| = 1 and (u, g) = cos alpha.
pub fn anchoring_density(u_b: Cx, g_b: Cx, alpha: f64) -> f64 {
    let mis = u_b.abs2() - 1.0;
    let proj = u_b.dot(g_b) - alpha.cos();
    0.5 * mis * mis + proj * proj
}

/// Derivative of W with respect to u, as a complex number.
#[inline]
fn anchoring_density_grad(u_b: Cx, g_b: Cx, cos_alpha: f64) -> Cx {
    let mis = u_b.abs2() - 1.0;
    let proj = u_b.dot(g_b) - cos_alpha;
    u_b.scale(2.0 * mis) + g_b.scale(2.0 * proj)
}

/// Compensated accumulator; keeps the energy reproducible to near machine
/// precision so central differences of the total stay clean.
#[derive(Clone, Copy, Default)]
struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    #[inline]
    fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnergyBreakdown {
    pub dirichlet: f64,
    pub potential: f64,
    pub anchoring: f64,
    pub total: f64,
}

impl EnergyBreakdown {
    fn new(dirichlet: f64, potential: f64, anchoring: f64) -> EnergyBreakdown {
        EnergyBreakdown {
            dirichlet,
            potential,
            anchoring,
            total: dirichlet + potential + anchoring,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.total.is_finite()
    }
}

/// Edge coefficients of the discrete quadratic forms.
struct Weights {
    /// Radial edge (i, i+1): face radius over dr times dtheta.
    k_r: Vec<f64>,
    /// Angular edge on ring i.
    k_a: Vec<f64>,
    /// Half-edge from the outer ring to the trace at r = 1.
    k_b: f64,
    /// Anchoring node weight upsilon * dtheta / 2.
    k_w: f64,
}

fn weights(grid: &PolarGrid, params: &ModelParams) -> Weights {
    let k_r = (0..grid.n_r - 1)
        .map(|i| (i as f64 + 1.0) * grid.dtheta)
        .collect();
    let k_a = (0..grid.n_r)
        .map(|i| grid.dr / (grid.radii[i] * grid.dtheta))
        .collect();
    let k_b = 2.0 * (1.0 - 0.25 * grid.dr) * grid.dtheta / grid.dr;
    let k_w = 0.5 * params.upsilon() * grid.dtheta;
    Weights { k_r, k_a, k_b, k_w }
}

fn check_inputs(field: &ComplexField, grid: &PolarGrid, bd: &BoundaryData) -> Result<()> {
    field.check_shape(grid)?;
    if bd.n_theta() != grid.n_theta {
        return Err(Error::shape(format!(
            "boundary data has {} nodes, grid has {}",
            bd.n_theta(),
            grid.n_theta
        )));
    }
    Ok(())
}

/// Total energy of the field, split into its three contributions.
pub fn total_energy(
    field: &ComplexField,
    params: &ModelParams,
    grid: &PolarGrid,
    bd: &BoundaryData,
) -> Result<EnergyBreakdown> {
    check_inputs(field, grid, bd)?;
    if !field.all_finite() {
        return Err(Error::NonFinite {
            context: "total_energy input field",
            step: None,
        });
    }
    let w = weights(grid, params);
    let n_t = grid.n_theta;
    let inv_4eps2 = 0.25 / (params.epsilon * params.epsilon);
    let u = &field.values;

    // Per-ring partials, folded in ring order for determinism.
    let partials: Vec<(f64, f64)> = par::map_rows(grid.n_r, |i| {
        let row = &u[i * n_t..(i + 1) * n_t];
        let mut dir = KahanSum::default();
        let mut pot = KahanSum::default();
        let ka = w.k_a[i];
        let m = grid.cell_measure(i);
        for j in 0..n_t {
            let here = row[j];
            let right = row[(j + 1) % n_t];
            dir.add(0.5 * ka * (right - here).abs2());
            let mis = here.abs2() - 1.0;
            pot.add(inv_4eps2 * mis * mis * m);
        }
        if i + 1 < grid.n_r {
            let up = &u[(i + 1) * n_t..(i + 2) * n_t];
            let kr = w.k_r[i];
            for j in 0..n_t {
                dir.add(0.5 * kr * (up[j] - row[j]).abs2());
            }
        }
        (dir.value(), pot.value())
    });
    let mut dirichlet = KahanSum::default();
    let mut potential = KahanSum::default();
    for (d, p) in partials {
        dirichlet.add(d);
        potential.add(p);
    }

    // Boundary half-edge and anchoring on the extrapolated trace.
    let outer = (grid.n_r - 1) * n_t;
    let inner = (grid.n_r - 2) * n_t;
    let cos_alpha = params.alpha.cos();
    let mut anchoring = KahanSum::default();
    for j in 0..n_t {
        let t = extrapolate_trace(u[outer + j], u[inner + j]);
        dirichlet.add(0.5 * w.k_b * (t - u[outer + j]).abs2());
        let mis = t.abs2() - 1.0;
        let proj = t.dot(bd.g[j]) - cos_alpha;
        anchoring.add(w.k_w * (0.5 * mis * mis + proj * proj));
    }

    Ok(EnergyBreakdown::new(
        dirichlet.value(),
        potential.value(),
        anchoring.value(),
    ))
}

fn gradient_rows(
    u: &[Cx],
    params: &ModelParams,
    grid: &PolarGrid,
    bd: &BoundaryData,
    out: &mut [Cx],
    serial: bool,
) {
    let w = weights(grid, params);
    let n_r = grid.n_r;
    let n_t = grid.n_theta;
    let inv_eps2 = 1.0 / (params.epsilon * params.epsilon);
    let cos_alpha = params.alpha.cos();
    let outer = (n_r - 1) * n_t;
    let inner = (n_r - 2) * n_t;

    let body = |i: usize, row_out: &mut [Cx]| {
        let ka = w.k_a[i];
        let inv_m = 1.0 / grid.cell_measure(i);
        let row = &u[i * n_t..(i + 1) * n_t];
        for j in 0..n_t {
            let here = row[j];
            let left = row[(j + n_t - 1) % n_t];
            let right = row[(j + 1) % n_t];
            let mut acc = (here - left + (here - right)).scale(ka);
            if i > 0 {
                acc += (here - u[(i - 1) * n_t + j]).scale(w.k_r[i - 1]);
            }
            if i + 1 < n_r {
                acc += (here - u[(i + 1) * n_t + j]).scale(w.k_r[i]);
            }
            let mis = here.abs2() - 1.0;
            acc += here.scale(inv_eps2 * mis * grid.cell_measure(i));
            if i + 2 >= n_r {
                let t = extrapolate_trace(u[outer + j], u[inner + j]);
                let d = t - u[outer + j];
                let anch = anchoring_density_grad(t, bd.g[j], cos_alpha).scale(w.k_w);
                // chain rule through t = 1.5 u_outer - 0.5 u_inner
                let (half_factor, chain) = if i + 1 == n_r { (0.5, 1.5) } else { (-0.5, -0.5) };
                acc += d.scale(w.k_b * half_factor) + anch.scale(chain);
            }
            row_out[j] = acc.scale(inv_m);
        }
    };

    if serial {
        par::for_each_row_mut_serial(out, n_t, body);
    } else {
        par::for_each_row_mut(out, n_t, body);
    }
}

/// Gradient of the discrete energy per unit cell measure, written into `out`.
pub fn energy_gradient_into(
    field: &ComplexField,
    params: &ModelParams,
    grid: &PolarGrid,
    bd: &BoundaryData,
    out: &mut [Cx],
) -> Result<()> {
    check_inputs(field, grid, bd)?;
    if out.len() != grid.cells() {
        return Err(Error::shape("gradient buffer size mismatch"));
    }
    gradient_rows(&field.values, params, grid, bd, out, false);
    Ok(())
}

/// Gradient of the discrete energy as a field (trace extrapolated).
pub fn energy_gradient(
    field: &ComplexField,
    params: &ModelParams,
    grid: &PolarGrid,
    bd: &BoundaryData,
) -> Result<ComplexField> {
    let mut out = ComplexField::constant(grid, Cx::ZERO);
    energy_gradient_into(field, params, grid, bd, &mut out.values)?;
    out.sync_trace();
    Ok(out)
}

/// Sequential reference implementation of [`energy_gradient`]; the benches
/// and the determinism tests compare against it.
pub fn energy_gradient_serial(
    field: &ComplexField,
    params: &ModelParams,
    grid: &PolarGrid,
    bd: &BoundaryData,
) -> Result<ComplexField> {
    check_inputs(field, grid, bd)?;
    let mut out = ComplexField::constant(grid, Cx::ZERO);
    gradient_rows(&field.values, params, grid, bd, &mut out.values, true);
    out.sync_trace();
    Ok(out)
}

/// Max-norm of the energy gradient; the convergence metric of the flow.
pub fn el_residual(
    field: &ComplexField,
    params: &ModelParams,
    grid: &PolarGrid,
    bd: &BoundaryData,
) -> Result<f64> {
    let g = energy_gradient(field, params, grid, bd)?;
    Ok(g.max_modulus())
}

/// Measure-weighted inner product sum_ij (a_ij, b_ij) r_i dr dtheta.
pub fn inner_product(a: &ComplexField, b: &ComplexField, grid: &PolarGrid) -> f64 {
    let n_t = grid.n_theta;
    let mut total = 0.0;
    for i in 0..grid.n_r {
        let m = grid.cell_measure(i);
        let mut row = 0.0;
        for j in 0..n_t {
            row += a.values[i * n_t + j].dot(b.values[i * n_t + j]);
        }
        total += m * row;
    }
    total
}
