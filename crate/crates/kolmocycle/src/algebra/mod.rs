//! Polynomial and truncated power series arithmetic.

mod bivariate;
mod series;
pub mod sturm;
mod univariate;

pub use bivariate::{Axis, BivariatePolynomial, Chart, DenseBivariate};
pub use series::{TruncatedPowerSeries, DEFAULT_ORDER};
pub use univariate::UnivariatePolynomial;
