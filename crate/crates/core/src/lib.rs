//! Numerical laboratory for a two-dimensional Ginzburg-Landau model of a thin
//! nematic film with weak oblique anchoring on the boundary of the unit disk.
//!
//! The crate covers the full pipeline: polar-grid discretization of the energy,
//! gradient-flow relaxation, seeding of competitor configurations, detection and
//! classification of interior vortices and boundary boojums, exact degree
//! combinatorics, the ball-growth lower-bound bookkeeping, and the renormalized
//! energy that predicts boojum placement.

pub mod ballgrowth;
pub mod boundary;
pub mod combinatorics;
pub mod complex;
pub mod defects;
pub mod energy;
pub mod error;
pub mod field;
pub mod flow;
pub mod grid;
pub mod params;
pub(crate) mod par;
pub mod render;
pub mod renorm;
pub mod seeds;

pub use boundary::BoundaryData;
pub use complex::Cx;
pub use error::{Error, Result};
pub use field::ComplexField;
pub use grid::PolarGrid;
pub use params::ModelParams;
