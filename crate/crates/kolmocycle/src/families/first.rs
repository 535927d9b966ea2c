use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::invariants::{HyperbolicityRatios, KolmogorovSystem};
use crate::{Error, Result};

pub const FAMILY1_KEYS: [&str; 3] = ["a", "p", "q"];

/// `f = 1 + x + x² + a x y + p y²`, `g = -1 - y + q x² + a x y - y²` with `p < -1 < 1 < q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Family1Params {
    pub a: f64,
    pub p: f64,
    pub q: f64,
}

impl Family1Params {
    pub fn new(a: f64, p: f64, q: f64) -> Result<Self> {
        let bad = |reason: &str| Err(Error::Inadmissible { family: "ex1".into(), reason: reason.into() });
        if ![a, p, q].iter().all(|v| v.is_finite()) {
            return bad("parameters must be finite");
        }
        if !(p < -1.0) {
            return bad("p < -1 is required");
        }
        if !(q > 1.0) {
            return bad("q > 1 is required");
        }
        Ok(Self { a, p, q })
    }

    pub fn to_vec(self) -> Vec<f64> {
        vec![self.a, self.p, self.q]
    }
}

pub fn family1_build(params: Family1Params) -> Result<KolmogorovSystem> {
    let Family1Params { a, p, q } = Family1Params::new(params.a, params.p, params.q)?;
    KolmogorovSystem::from_terms(
        2,
        &[(0, 0, 1.0), (1, 0, 1.0), (2, 0, 1.0), (1, 1, a), (0, 2, p)],
        &[(0, 0, -1.0), (0, 1, -1.0), (2, 0, q), (1, 1, a), (0, 2, -1.0)],
    )
}

/// Closed-form results for the first family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Family1Oracle {
    pub params: Family1Params,
    pub lambdas: HyperbolicityRatios,
    pub d1_closed: f64,
    /// Value of `d2` on `p + q = 0`.
    pub d2_on_variety: f64,
    /// Both coordinates of the equilibrium, which lies on the diagonal when `p + q = 0`.
    pub center_point: f64,
    /// Discriminant of the linearization at `(0, -2, 2)` as printed with the closed forms.
    pub discriminant_sample: f64,
}

impl Family1Oracle {
    /// Trace of the linearization at an equilibrium `(u1, u2)`.
    pub fn trace_at(&self, u1: f64, u2: f64) -> f64 {
        u1 + 2.0 * u1 * u1 + 2.0 * self.params.a * u1 * u2 - u2 - 2.0 * u2 * u2
    }

    /// Third Lyapunov quantity on the zero-trace slice in the coordinates
    /// `ρ = (u1 - u2)/2`, `σ = (u1 + u2)/2`.
    pub fn eta3_at_tau0(rho: f64, sigma: f64) -> f64 {
        PI * 2.0 * rho * (rho - sigma) * (sigma + 1.0) * Self::eta3_bracket(rho, sigma) / Self::eta3_denominator(rho, sigma)
    }

    pub fn eta3_bracket(rho: f64, sigma: f64) -> f64 {
        4.0 + 34.0 * sigma + 29.0 * sigma * sigma + 8.0 * sigma.powi(3) - 3.0 * rho * rho
    }

    pub fn eta3_denominator(rho: f64, sigma: f64) -> f64 {
        3.0 * (rho + sigma).powi(3) * (rho + 2.0 * sigma + 2.0 * sigma * sigma + 2.0 * rho * rho + 2.0).powi(2)
    }
}

pub fn family1_oracle(params: Family1Params) -> Result<Family1Oracle> {
    let Family1Params { a, p, q } = Family1Params::new(params.a, params.p, params.q)?;
    Ok(Family1Oracle {
        params,
        lambdas: HyperbolicityRatios { lambda1: 1.0 / (q - 1.0), lambda2: -(p + 1.0), lambda3: 1.0 },
        d1_closed: (p + q) / (q - 1.0),
        d2_on_variety: -a * PI / 2.0,
        center_point: -(1.0 + (-3.0 - 4.0 * p).sqrt()) / (2.0 * (1.0 + p)),
        discriminant_sample: -(67.0 + 25.0 * 5f64.sqrt()) / 2.0,
    })
}
