//! Adaptive quadrature, the regularized corner integral, and bracketing root refinement.

mod brent;
mod corner_integral;
mod gauss_kronrod;

pub use brent::brent_root;
pub use corner_integral::{corner_integral, CornerIntegrand};
pub use gauss_kronrod::{integrate_adaptive, integrate_adaptive_with_budget, QuadratureResult, DEFAULT_PANEL_BUDGET};
