//! Numerical toolkit for Cauchy-type integrals and their relatives: contour
//! quadrature in the complex plane, Clifford algebra and the Dirac operator,
//! surface Cauchy integrals, geometric diagnostics for discrete measures,
//! potential operators on Ahlfors-regular point sets, and the linear algebra
//! of real planes in `C^m`.

pub mod clifford;
pub mod contours;
pub mod clifford_analysis;
pub mod complex_planes;
pub mod error;
pub mod fixtures;
pub mod measures;
pub mod numeric;
pub mod potentials;
pub mod quadrature;

pub use error::{Error, Result};
