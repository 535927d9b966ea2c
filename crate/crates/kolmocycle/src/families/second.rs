use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::invariants::{HyperbolicityRatios, KolmogorovSystem};
use crate::quadrature::integrate_adaptive;
use crate::{Error, Result};

pub const FAMILY2_KEYS: [&str; 5] = ["a", "b", "c", "p", "q"];

/// `f = c + x² + a x y - (p+1) y²`, `g = -1 + (q+1) x² + (a-b) x y - y²`
/// with `c, p, q > 0` and `b < 2 √(pq)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Family2Params {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub p: f64,
    pub q: f64,
}

impl Family2Params {
    pub fn new(a: f64, b: f64, c: f64, p: f64, q: f64) -> Result<Self> {
        let bad = |reason: &str| Err(Error::Inadmissible { family: "ex2".into(), reason: reason.into() });
        if ![a, b, c, p, q].iter().all(|v| v.is_finite()) {
            return bad("parameters must be finite");
        }
        if !(c > 0.0) {
            return bad("c > 0 is required");
        }
        if !(p > 0.0) {
            return bad("p > 0 is required");
        }
        if !(q > 0.0) {
            return bad("q > 0 is required");
        }
        if !(b < 2.0 * (p * q).sqrt()) {
            return bad("b < 2 sqrt(pq) is required");
        }
        Ok(Self { a, b, c, p, q })
    }

    pub fn to_vec(self) -> Vec<f64> {
        vec![self.a, self.b, self.c, self.p, self.q]
    }
}

pub fn family2_build(params: Family2Params) -> Result<KolmogorovSystem> {
    let Family2Params { a, b, c, p, q } = Family2Params::new(params.a, params.b, params.c, params.p, params.q)?;
    KolmogorovSystem::from_terms(
        2,
        &[(0, 0, c), (2, 0, 1.0), (1, 1, a), (0, 2, -(p + 1.0))],
        &[(0, 0, -1.0), (2, 0, q + 1.0), (1, 1, a - b), (0, 2, -1.0)],
    )
}

/// Closed-form results for the second family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Family2Oracle {
    pub params: Family2Params,
    pub lambdas: HyperbolicityRatios,
    pub d1_closed: f64,
    pub log_l11: f64,
    pub log_l31: f64,
    pub log_l22: f64,
    pub log_l32: f64,
    pub phi: f64,
    /// `d2` for arbitrary admissible parameters.
    pub d2_closed: f64,
    /// `cq² (2cqa - (cq-c+1) b) Φ`, the value of `d2` on `p = cq`.
    pub d2_on_variety: f64,
    pub center_condition: bool,
}

impl Family2Oracle {
    /// First integral on the center variety.
    pub fn first_integral(&self, x: f64, y: f64) -> f64 {
        let Family2Params { b, c, q, .. } = self.params;
        (q * (x * x + c * (y * y + 1.0)) - b * x * y) / (x * y.powf(c)).powf(2.0 / (c * q + c + 1.0))
    }

    /// The factor of `d2` on `p = cq` that vanishes on the center variety.
    pub fn d2_factor(&self) -> f64 {
        let Family2Params { a, b, c, q, .. } = self.params;
        2.0 * c * q * a - (c * q - c + 1.0) * b
    }
}

/// `Φ = (1/(2pq)) ∫_0^1 [1/(-pz² + bz - q) + 1/(-qz² + bz - p)] dz`.
pub fn phi(params: Family2Params, tol: f64) -> Result<f64> {
    let Family2Params { b, p, q, .. } = params;
    let r = integrate_adaptive(
        |z| 1.0 / (-p * z * z + b * z - q) + 1.0 / (-q * z * z + b * z - p),
        0.0,
        1.0,
        tol,
    )?;
    Ok(r.value / (2.0 * p * q))
}

pub fn family2_oracle(params: Family2Params, tol: f64) -> Result<Family2Oracle> {
    let Family2Params { a, b, c, p, q } = Family2Params::new(params.a, params.b, params.c, params.p, params.q)?;
    let e = (1.0 + c * (q + 1.0)) / (2.0 * c);
    let phi = phi(params, tol)?;
    let d2_closed = (p * q + p + q) / (2.0 * q) * (p / q).ln() + p * (2.0 * p * q * a - (p * q - p + q) * b) * phi
        - p * (1.0 + c + c * q) / (2.0 * q * c) * c.ln();
    let factor = 2.0 * c * q * a - (c * q - c + 1.0) * b;
    let scale = 1.0 + (c * q).abs() + (2.0 * c * q * a).abs() + ((c * q - c + 1.0) * b).abs();
    Ok(Family2Oracle {
        params,
        lambdas: HyperbolicityRatios { lambda1: 1.0 / q, lambda2: p, lambda3: 1.0 / c },
        d1_closed: (c * q - p) / (c * q),
        log_l11: e * (c + 1.0).ln(),
        log_l31: e * (1.0 / c + 1.0).ln(),
        log_l22: LN_2 / 2.0 * (p + c + 1.0),
        log_l32: LN_2 / 2.0 * (p + c + 1.0),
        phi,
        d2_closed,
        d2_on_variety: c * q * q * factor * phi,
        center_condition: (p - c * q).abs() <= 1e-12 * scale && factor.abs() <= 1e-12 * scale,
    })
}
