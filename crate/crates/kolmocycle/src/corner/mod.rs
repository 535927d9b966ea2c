//! Quantities attached to one hyperbolic saddle corner of the polycycle.

mod dulac;
mod handle;
mod integrals;
mod mellin;

pub use dulac::{dulac_coefficients, saddle_functions, DulacCoefficients, SaddleFunctions};
pub use handle::{build_m, AnalyticFunctionHandle, Corner};
pub use integrals::{exp_integral_series, l_integrand, l_series, log_l, LIndex};
pub use mellin::{compensator, mellin_hat};
