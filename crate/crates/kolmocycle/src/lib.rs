//! Polycycle cyclicity analysis for planar polynomial Kolmogorov systems
//! `x' = x f(x, y)`, `y' = y g(x, y)`.
//!
//! The crate computes the test functions `d1`, `d2`, `d3` attached to the
//! triangle polycycle formed by the two positive semi-axes and the arc at
//! infinity, and cross-checks them against direct integration of the flow.

pub mod algebra;
pub mod corner;
pub mod error;
pub mod families;
pub mod flow;
pub mod invariants;
pub mod quadrature;
pub mod tolerances;

pub use error::{Error, Result};
pub use invariants::KolmogorovSystem;
pub use tolerances::Tolerances;
