//! Ground states of two-dimensional Schrödinger operators with an attractive
//! δ-interaction on a closed loop, computed through the Birman–Schwinger
//! reduction, together with the mean-chord inequalities that control how the
//! ground-state energy depends on the shape of the loop.
//!
//! * [`geometry`] builds arc-length sampled loops (circle, curvature
//!   perturbations, lens/apple, paperclip, ellipse) and equilateral polygons.
//! * [`specfun`] evaluates the Macdonald function K₀.
//! * [`spectral`] assembles the Nyström discretisation of the
//!   Birman–Schwinger operator and solves for the ground state.
//! * [`chords`] evaluates mean-chord functionals and inequality verdicts.
//! * [`perturb`] holds the second-order expansion around the circle.
//! * [`io`] reads and writes the JSON/CSV file formats.

pub mod chords;
pub mod error;
pub mod geometry;
pub mod io;
pub mod perturb;
pub mod quadrature;
pub mod specfun;
pub mod spectral;

pub use error::{Error, Result};
