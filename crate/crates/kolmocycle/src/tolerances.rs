use serde::{Deserialize, Serialize};

/// Every numerical tolerance used by the pipeline, in one record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Mixed absolute/relative target for adaptive quadrature.
    pub quad: f64,
    /// Absolute and relative target for the Runge-Kutta integrator.
    pub ode: f64,
    /// Zero test for the d-functions, scaled by `max(1, |l1 l2 l3|)`.
    pub zero: f64,
    /// Minimum distance of a Mellin exponent from an integer.
    pub pole: f64,
    /// Truncation order of Taylor series.
    pub series_order: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { quad: 1e-11, ode: 1e-11, zero: 1e-9, pole: 1e-6, series_order: 16 }
    }
}

impl Tolerances {
    pub fn validate(&self) -> crate::Result<()> {
        for (name, v) in [("quad", self.quad), ("ode", self.ode), ("zero", self.zero), ("pole", self.pole)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(crate::Error::Domain(format!("tolerance {name} must be positive, got {v}")));
            }
        }
        if self.series_order < 2 {
            return Err(crate::Error::Domain("series_order must be at least 2".into()));
        }
        Ok(())
    }
}
