use serde::{Deserialize, Serialize};

use super::{mellin_hat, AnalyticFunctionHandle};
use crate::algebra::{Axis, BivariatePolynomial};
use crate::quadrature::{corner_integral, CornerIntegrand};
use crate::{Error, Result};

/// Leading coefficients of the Dulac map `D(s) = s^λ (Δ0 + Δ1 s + Δ2 s^λ + ...)` of the saddle
/// `x1 P1 ∂1 + x2 P2 ∂2` from `{x2 = 1}` (point `(s, 1)`) to `{x1 = 1}` (point `(1, D)`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DulacCoefficients {
    pub lambda: f64,
    pub delta0: f64,
    pub delta1: f64,
    pub delta2: f64,
}

/// `L1, L2, M1, M2` of a saddle in normal form.
#[derive(Debug, Clone)]
pub struct SaddleFunctions {
    pub lambda: f64,
    pub l1: CornerIntegrand,
    pub l2: CornerIntegrand,
    pub m1: AnalyticFunctionHandle,
    pub m2: AnalyticFunctionHandle,
}

pub fn saddle_functions(
    p1: &BivariatePolynomial,
    p2: &BivariatePolynomial,
    order: usize,
    tol: f64,
) -> Result<SaddleFunctions> {
    let (a, b) = (p1.eval(0.0, 0.0), p2.eval(0.0, 0.0));
    if !(a > 0.0 && b < 0.0) {
        return Err(Error::H2(format!("not a saddle in normal form: P1(0,0) = {a}, P2(0,0) = {b}")));
    }
    let lambda = -b / a;

    let p1_y = p1.axis_restrict(Axis::Y);
    let p2_y = p2.axis_restrict(Axis::Y);
    let l1 = CornerIntegrand::new("L1", &p1_y + &p2_y.scale(1.0 / lambda), p2_y.clone())?;
    let p1_x = p1.axis_restrict(Axis::X);
    let p2_x = p2.axis_restrict(Axis::X);
    let l2 = CornerIntegrand::new("L2", &p2_x + &p1_x.scale(lambda), p1_x.clone())?;

    // ∂1(P1/P2) on the x2-axis and ∂2(P2/P1) on the x1-axis
    let w1 = &(&p1.partial_derivative(Axis::X) * p2) - &(p1 * &p2.partial_derivative(Axis::X));
    let w2 = &(&p2.partial_derivative(Axis::Y) * p1) - &(p2 * &p1.partial_derivative(Axis::Y));
    let m1 = AnalyticFunctionHandle::corner_product(l1.clone(), w1.axis_restrict(Axis::Y), p2_y, 1.0, order, tol)?;
    let m2 = AnalyticFunctionHandle::corner_product(l2.clone(), w2.axis_restrict(Axis::X), p1_x, 1.0, order, tol)?;
    Ok(SaddleFunctions { lambda, l1, l2, m1, m2 })
}

/// `Δ0 = L2(1)/L1(1)^λ`, `Δ1 = λ Δ0 S1`, `Δ2 = -Δ0² S2` with
/// `S1 = -M̂1(1/λ, 1)/L1(1)` and `S2 = -M̂2(λ, 1)/L2(1)`.
pub fn dulac_coefficients(
    p1: &BivariatePolynomial,
    p2: &BivariatePolynomial,
    order: usize,
    tol: f64,
    tol_pole: f64,
) -> Result<DulacCoefficients> {
    let sf = saddle_functions(p1, p2, order, tol)?;
    let lambda = sf.lambda;
    let log_l1 = corner_integral(&sf.l1, 1.0, tol)?;
    let log_l2 = corner_integral(&sf.l2, 1.0, tol)?;
    let delta0 = (log_l2 - lambda * log_l1).exp();
    assert!(delta0 > 0.0, "Dulac leading coefficient must be positive");
    let s1 = -mellin_hat(&sf.m1, 1.0 / lambda, 1.0, tol, tol_pole)? / log_l1.exp();
    let s2 = -mellin_hat(&sf.m2, lambda, 1.0, tol, tol_pole)? / log_l2.exp();
    Ok(DulacCoefficients { lambda, delta0, delta1: delta0 * lambda * s1, delta2: -delta0 * delta0 * s2 })
}
