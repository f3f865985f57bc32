//! Director line-field export and deterministic portable-pixmap rendering.
//!
//! The director angle is half the phase of the order parameter (a line field,
//! defined modulo pi); cells with |u| below 0.1 are flagged isotropic.

use std::io::Write;

use crate::complex::Cx;
use crate::error::Result;
use crate::field::ComplexField;
use crate::grid::PolarGrid;

pub const ISOTROPIC_THRESHOLD: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderMode {
    Modulus,
    Phase,
    Director,
}

/// Director angle in [0, pi) and scalar order |u|; None when isotropic.
pub fn director_angle(u: Cx) -> Option<f64> {
    if u.abs() < ISOTROPIC_THRESHOLD {
        return None;
    }
    Some((0.5 * u.arg()).rem_euclid(std::f64::consts::PI))
}

/// Write the per-cell line field as CSV:
/// `r,theta,director_angle,order,isotropic` (angle empty when isotropic).
pub fn export_director<W: Write>(field: &ComplexField, grid: &PolarGrid, mut w: W) -> Result<()> {
    field.check_shape(grid)?;
    writeln!(w, "r,theta,director_angle,order,isotropic")?;
    for i in 0..grid.n_r {
        for j in 0..grid.n_theta {
            let (r, th) = grid.cell_center(i, j);
            let u = field.at(i, j);
            match director_angle(u) {
                Some(angle) => writeln!(w, "{},{},{},{},0", r, th, angle, u.abs())?,
                None => writeln!(w, "{},{},,{},1", r, th, u.abs())?,
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Pixmap {
    pub width: usize,
    pub height: usize,
    /// RGB triplets, row-major from the top-left pixel.
    pub data: Vec<u8>,
}

impl Pixmap {
    fn filled(width: usize, height: usize, rgb: [u8; 3]) -> Pixmap {
        let mut data = Vec::with_capacity(3 * width * height);
        for _ in 0..width * height {
            data.extend_from_slice(&rgb);
        }
        Pixmap {
            width,
            height,
            data,
        }
    }

    fn put(&mut self, x: usize, y: usize, rgb: [u8; 3]) {
        if x < self.width && y < self.height {
            let k = 3 * (y * self.width + x);
            self.data[k..k + 3].copy_from_slice(&rgb);
        }
    }

    /// Binary P6 encoding; byte-for-byte deterministic.
    pub fn write_ppm<W: Write>(&self, mut w: W) -> Result<()> {
        write!(w, "P6\n{} {}\n255\n", self.width, self.height)?;
        w.write_all(&self.data)?;
        Ok(())
    }
}

fn hue_wheel(phase: f64) -> [u8; 3] {
    // phase in (-pi, pi] -> hue in [0, 1)
    let h = (phase / std::f64::consts::TAU).rem_euclid(1.0) * 6.0;
    let sector = h.floor() as usize % 6;
    let f = h - h.floor();
    let q = ((1.0 - f) * 255.0).round() as u8;
    let t = (f * 255.0).round() as u8;
    match sector {
        0 => [255, t, 0],
        1 => [q, 255, 0],
        2 => [0, 255, t],
        3 => [0, q, 255],
        4 => [t, 0, 255],
        _ => [255, 0, q],
    }
}

fn gray(level: f64) -> [u8; 3] {
    let v = (level.clamp(0.0, 1.0) * 255.0).round() as u8;
    [v, v, v]
}

/// Deterministic rendering of a field on a size x size pixmap: modulus as
/// grayscale (0 black, >= 1 white), phase as a hue wheel, director as short
/// line glyphs on a subsampled grid over a modulus backdrop.
pub fn render_field(
    field: &ComplexField,
    grid: &PolarGrid,
    mode: RenderMode,
    size: usize,
) -> Result<Pixmap> {
    field.check_shape(grid)?;
    let size = size.max(64);
    let mut img = Pixmap::filled(size, size, [24, 24, 32]);
    let scale = 2.0 / size as f64;
    for py in 0..size {
        for px in 0..size {
            let x = (px as f64 + 0.5) * scale - 1.0;
            let y = 1.0 - (py as f64 + 0.5) * scale;
            let Some((i, j)) = grid.nearest_cell(x, y) else {
                continue;
            };
            let u = field.at(i, j);
            let rgb = match mode {
                RenderMode::Modulus => gray(u.abs()),
                RenderMode::Phase => hue_wheel(u.arg()),
                RenderMode::Director => gray(0.35 + 0.65 * u.abs()),
            };
            img.put(px, py, rgb);
        }
    }
    if mode == RenderMode::Director {
        // Line glyphs on a coarse lattice of pixel anchors.
        let stride = (size / 48).max(6);
        let half = (stride as f64 * 0.45) as isize;
        for ay in (stride / 2..size).step_by(stride) {
            for ax in (stride / 2..size).step_by(stride) {
                let x = (ax as f64 + 0.5) * scale - 1.0;
                let y = 1.0 - (ay as f64 + 0.5) * scale;
                let Some((i, j)) = grid.nearest_cell(x, y) else {
                    continue;
                };
                let u = field.at(i, j);
                match director_angle(u) {
                    Some(angle) => {
                        let (c, s) = (angle.cos(), angle.sin());
                        for step in -half..=half {
                            let px = ax as isize + (step as f64 * c).round() as isize;
                            let py = ay as isize - (step as f64 * s).round() as isize;
                            if px >= 0 && py >= 0 {
                                img.put(px as usize, py as usize, [0, 0, 0]);
                            }
                        }
                    }
                    None => {
                        img.put(ax, ay, [220, 40, 40]);
                    }
                }
            }
        }
    }
    Ok(img)
}
