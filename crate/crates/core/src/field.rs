//! The discrete complex order parameter on a polar grid, plus its CSV form.
//!
//! `boundary_trace` holds the field value at r = 1 per angular node. Seed
//! constructors set it from their closed forms; the energy and the flow
//! maintain it as the second-order extrapolation from the outer two rings
//! (the ghost-resolved value).

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::complex::Cx;
use crate::error::{Error, Result};
use crate::grid::PolarGrid;
use crate::params::ModelParams;

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexField {
    pub n_r: usize,
    pub n_theta: usize,
    /// Cell values, row-major with the radius as the outer index.
    pub values: Vec<Cx>,
    /// Field value at r = 1 per boundary angular node.
    pub boundary_trace: Vec<Cx>,
}

/// Trace value at r = 1 extrapolated from the outer two rings.
#[inline]
pub(crate) fn extrapolate_trace(outer: Cx, inner: Cx) -> Cx {
    outer.scale(1.5) - inner.scale(0.5)
}

impl ComplexField {
    pub fn constant(grid: &PolarGrid, value: Cx) -> ComplexField {
        ComplexField {
            n_r: grid.n_r,
            n_theta: grid.n_theta,
            values: vec![value; grid.cells()],
            boundary_trace: vec![value; grid.n_theta],
        }
    }

    /// Build from a closed form u(r, theta); the trace is the closed form at r = 1.
    pub fn from_fn(grid: &PolarGrid, f: impl Fn(f64, f64) -> Cx) -> ComplexField {
        let mut values = Vec::with_capacity(grid.cells());
        for i in 0..grid.n_r {
            for j in 0..grid.n_theta {
                let (r, th) = grid.cell_center(i, j);
                values.push(f(r, th));
            }
        }
        let boundary_trace = (0..grid.n_theta).map(|j| f(1.0, grid.theta(j))).collect();
        ComplexField {
            n_r: grid.n_r,
            n_theta: grid.n_theta,
            values,
            boundary_trace,
        }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Cx {
        self.values[i * self.n_theta + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Cx) {
        self.values[i * self.n_theta + j] = v;
    }

    pub fn matches(&self, grid: &PolarGrid) -> bool {
        self.n_r == grid.n_r && self.n_theta == grid.n_theta
    }

    pub fn check_shape(&self, grid: &PolarGrid) -> Result<()> {
        if !self.matches(grid) {
            return Err(Error::shape(format!(
                "field is {}x{}, grid is {}x{}",
                self.n_r, self.n_theta, grid.n_r, grid.n_theta
            )));
        }
        Ok(())
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn min_modulus(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()))
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
            && self.boundary_trace.iter().all(|v| v.is_finite())
    }

    /// Refresh the trace from the outer two rings.
    pub fn sync_trace(&mut self) {
        let n = self.n_theta;
        let outer = (self.n_r - 1) * n;
        let inner = (self.n_r - 2) * n;
        for j in 0..n {
            self.boundary_trace[j] =
                extrapolate_trace(self.values[outer + j], self.values[inner + j]);
        }
    }

    /// Maximum pointwise difference against another field of the same shape.
    pub fn max_diff(&self, other: &ComplexField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0f64, |m, (a, b)| m.max((*a - *b).abs()))
    }

    /// Write the CSV form: header `r,theta,re_u,im_u`, cells row-major with
    /// the radius as the outer loop, then the boundary trace rows at r = 1.
    pub fn write_csv<W: Write>(&self, grid: &PolarGrid, mut w: W) -> Result<()> {
        self.check_shape(grid)?;
        writeln!(w, "r,theta,re_u,im_u")?;
        for i in 0..self.n_r {
            for j in 0..self.n_theta {
                let (r, th) = grid.cell_center(i, j);
                let v = self.at(i, j);
                writeln!(w, "{},{},{},{}", r, th, v.re, v.im)?;
            }
        }
        for j in 0..self.n_theta {
            let v = self.boundary_trace[j];
            writeln!(w, "{},{},{},{}", 1.0, grid.theta(j), v.re, v.im)?;
        }
        Ok(())
    }

    /// Inverse of [`write_csv`]; bit-exact for files produced by it.
    pub fn read_csv<R: BufRead>(r: R) -> Result<(ComplexField, PolarGrid)> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty field CSV".into()))??;
        if header.trim() != "r,theta,re_u,im_u" {
            return Err(Error::Parse(format!("unexpected field CSV header: {header}")));
        }
        let mut rows: Vec<(f64, f64, Cx)> = Vec::new();
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split(',');
            let mut next = || -> Result<f64> {
                it.next()
                    .ok_or_else(|| Error::Parse(format!("short row: {line}")))?
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("bad number in '{line}': {e}")))
            };
            let r = next()?;
            let th = next()?;
            let re = next()?;
            let im = next()?;
            rows.push((r, th, Cx::new(re, im)));
        }
        let n_theta = rows.iter().filter(|(r, _, _)| *r == rows[0].0).count();
        if n_theta == 0 || rows.len() % n_theta != 0 {
            return Err(Error::Parse("field CSV rows do not form a grid".into()));
        }
        let total_rows = rows.len() / n_theta;
        if total_rows < 3 {
            return Err(Error::Parse("field CSV too small".into()));
        }
        let n_r = total_rows - 1; // trailing block is the boundary trace
        if rows[n_r * n_theta].0 != 1.0 {
            return Err(Error::Parse("missing boundary trace rows at r = 1".into()));
        }
        let grid = crate::grid::make_polar_grid(n_r, n_theta)?;
        let values = rows[..n_r * n_theta].iter().map(|(_, _, v)| *v).collect();
        let boundary_trace = rows[n_r * n_theta..].iter().map(|(_, _, v)| *v).collect();
        Ok((
            ComplexField {
                n_r,
                n_theta,
                values,
                boundary_trace,
            },
            grid,
        ))
    }

    /// Write `<base>.csv` and the `<base>.params.json` sidecar.
    pub fn save(&self, grid: &PolarGrid, params: &ModelParams, base: &Path) -> Result<()> {
        let csv_path = base.with_extension("csv");
        let f = fs::File::create(&csv_path)?;
        self.write_csv(grid, BufWriter::new(f))?;
        let sidecar = base.with_extension("params.json");
        let json = serde_json::to_string_pretty(params)?;
        fs::write(sidecar, json)?;
        Ok(())
    }

    /// Load a field written by [`save`], given the path of the CSV file.
    pub fn load(csv_path: &Path) -> Result<(ComplexField, PolarGrid, ModelParams)> {
        let f = fs::File::open(csv_path)?;
        let (field, grid) = Self::read_csv(BufReader::new(f))?;
        let sidecar = csv_path.with_extension("params.json");
        let params: ModelParams = serde_json::from_str(&fs::read_to_string(sidecar)?)?;
        params.validate()?;
        Ok((field, grid, params))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_polar_grid;
    use std::f64::consts::PI;

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let grid = make_polar_grid(8, 16).unwrap();
        let field = ComplexField::from_fn(&grid, |r, th| {
            Cx::from_polar(r.sqrt() + 0.1, 3.0 * th + 0.7 * r)
        });
        let mut buf = Vec::new();
        field.write_csv(&grid, &mut buf).unwrap();
        let (back, grid2) = ComplexField::read_csv(buf.as_slice()).unwrap();
        assert_eq!(grid, grid2);
        assert_eq!(field, back);

        // Second serialization is byte-identical.
        let mut buf2 = Vec::new();
        back.write_csv(&grid2, &mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn sidecar_round_trip() {
        let dir = std::env::temp_dir().join("boojum_field_test");
        fs::create_dir_all(&dir).unwrap();
        let grid = make_polar_grid(8, 16).unwrap();
        let params = ModelParams::new(0.05, 0.9, PI / 3.0, 1).unwrap();
        let field = ComplexField::constant(&grid, Cx::unit(0.3));
        let base = dir.join("field");
        field.save(&grid, &params, &base).unwrap();
        let (back, grid2, params2) = ComplexField::load(&base.with_extension("csv")).unwrap();
        assert_eq!(field, back);
        assert_eq!(grid, grid2);
        assert_eq!(params, params2);
    }

    #[test]
    fn trace_extrapolation_is_linear() {
        let grid = make_polar_grid(8, 16).unwrap();
        // Field linear in r: extrapolation to r = 1 is exact.
        let mut field = ComplexField::from_fn(&grid, |r, _| Cx::new(2.0 * r - 0.3, 0.0));
        field.sync_trace();
        for j in 0..grid.n_theta {
            assert!((field.boundary_trace[j].re - 1.7).abs() < 1e-14);
        }
    }
}
