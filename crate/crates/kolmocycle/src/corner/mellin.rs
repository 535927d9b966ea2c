use std::cell::RefCell;

use super::AnalyticFunctionHandle;
use crate::quadrature::integrate_adaptive;
use crate::{Error, Result};

/// The compensator `ω(s; α) = (s^-α - 1)/α`, `-ln s` at `α = 0`.
pub fn compensator(s: f64, alpha: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::Domain(format!("compensator needs s > 0, got {s}")));
    }
    let ls = s.ln();
    Ok(if alpha == 0.0 { -ls } else { (-alpha * ls).exp_m1() / alpha })
}

/// Smallest split point that the Taylor data covers below; the quadrature handles `[split, x]`.
const MIN_SPLIT: f64 = 1e-4;

/// Incomplete Mellin transform: the solution `ĥ` of `x ĥ' - α ĥ = h` that is analytic at 0
/// after removing the `x^α` part.
///
/// `ĥ(α, x) = Σ_{i<k} c_i x^i / (i - α) + x^α ∫_0^x (h - T_{k-1})(s) s^{-α-1} ds`, `k = ⌊α⌋ + 1`.
/// Near 0 the integral is taken term by term from the Taylor data; the split point is the
/// largest `s0 <= x` at which the truncated tail is below `tol`, never below `1e-4`.
pub fn mellin_hat(h: &AnalyticFunctionHandle, alpha: f64, x: f64, tol: f64, tol_pole: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::Domain(format!("Mellin transform evaluated at x = {x}, outside (0, 1]")));
    }
    if h.is_identically_zero() {
        return Ok(0.0);
    }
    let nearest = alpha.round();
    if nearest >= 0.0 && (alpha - nearest).abs() <= tol_pole {
        return Err(Error::MellinPole { alpha, integer: nearest as i64, tol: tol_pole });
    }
    let k = if alpha < 0.0 { 0 } else { alpha.floor() as usize + 1 };
    let series = h.taylor();
    let order = series.order();
    if k > order {
        return Err(Error::TaylorOrder { needed: k, available: order });
    }
    let c = series.coeffs();

    let head: f64 = (0..k).map(|i| c[i] * x.powi(i as i32) / (i as f64 - alpha)).sum();

    let tail_at = |s: f64| -> f64 { (k..=order).map(|j| c[j] * s.powf(j as f64 - alpha) / (j as f64 - alpha)).sum() };
    let truncation = |s: f64| -> f64 {
        let last = (c[order].abs() + c[order.saturating_sub(1)].abs()) * s.powf(order as f64 - alpha);
        last / (order as f64 - alpha).abs().max(1.0)
    };
    let mut split = x;
    while split > MIN_SPLIT && truncation(split) > tol {
        split *= 0.5;
    }
    let split = split.max(MIN_SPLIT.min(x));

    let mut integral = tail_at(split);
    if split < x {
        let failure = RefCell::new(None);
        let integrand = |s: f64| -> f64 {
            match h.eval(s) {
                Ok(v) => (v - series.eval_terms(s, k)) * s.powf(-alpha - 1.0),
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    0.0
                }
            }
        };
        let r = integrate_adaptive(integrand, split, x, tol);
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        integral += r?.value;
    }
    Ok(head + x.powf(alpha) * integral)
}
