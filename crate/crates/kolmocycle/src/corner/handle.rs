use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::integrals::{exp_integral_series, l_integrand, LIndex};
use crate::algebra::{Axis, TruncatedPowerSeries, UnivariatePolynomial};
use crate::invariants::CheckedSystem;
use crate::quadrature::{corner_integral, CornerIntegrand};
use crate::{Error, Result};

type Evaluator = Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>;

/// A real-analytic function on `[0, 1]` known both pointwise and by its Taylor data at 0.
#[derive(Clone)]
pub struct AnalyticFunctionHandle {
    eval: Evaluator,
    taylor: TruncatedPowerSeries,
    domain: (f64, f64),
    zero: bool,
}

impl fmt::Debug for AnalyticFunctionHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticFunctionHandle").field("taylor", &self.taylor).field("domain", &self.domain).finish()
    }
}

impl AnalyticFunctionHandle {
    pub fn new(eval: impl Fn(f64) -> Result<f64> + Send + Sync + 'static, taylor: TruncatedPowerSeries) -> Self {
        Self { eval: Arc::new(eval), taylor, domain: (0.0, 1.0), zero: false }
    }

    /// The zero function, whose Mellin transform vanishes for every exponent.
    pub fn zero(order: usize) -> Self {
        let mut h = Self::new(|_| Ok(0.0), TruncatedPowerSeries::new(vec![], order));
        h.zero = true;
        h
    }

    pub fn is_identically_zero(&self) -> bool {
        self.zero
    }

    pub fn from_polynomial(p: &UnivariatePolynomial, order: usize) -> Self {
        let q = p.clone();
        Self::new(move |u| Ok(q.eval(u)), TruncatedPowerSeries::from_poly(p, order))
    }

    /// `sign · exp(∫_0^u φ dz/z) · num(u) / den(u)^2`.
    pub fn corner_product(
        l: CornerIntegrand,
        num: UnivariatePolynomial,
        den: UnivariatePolynomial,
        sign: f64,
        order: usize,
        tol: f64,
    ) -> Result<Self> {
        if num.is_zero() {
            return Ok(Self::zero(order));
        }
        let series = {
            let l_ser = exp_integral_series(&l, order)?;
            let n = TruncatedPowerSeries::from_poly(&num, order);
            let d = TruncatedPowerSeries::from_poly(&den, order);
            l_ser.mul(&n).div(&d.mul(&d))?.scale(sign)
        };
        let eval = move |u: f64| -> Result<f64> {
            let log_l = corner_integral(&l, u, tol)?;
            let d = den.eval(u);
            Ok(sign * log_l.exp() * num.eval(u) / (d * d))
        };
        Ok(Self::new(eval, series))
    }

    pub fn eval(&self, u: f64) -> Result<f64> {
        (self.eval)(u)
    }

    pub fn taylor(&self) -> &TruncatedPowerSeries {
        &self.taylor
    }

    pub fn domain_hint(&self) -> (f64, f64) {
        self.domain
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Corner {
    /// Saddle at infinity on the x-axis.
    First,
    /// Saddle at the origin.
    Third,
}

/// `M1(u) = -(L11(u)/u) ∂_y(g/f)(1/u, 0)` or `M3(u) = L31(u) ∂_y(g/f)(u, 0)`.
pub fn build_m(sys: &CheckedSystem, corner: Corner, order: usize, tol: f64) -> Result<AnalyticFunctionHandle> {
    let s = sys.system();
    let n = s.degree();
    let (f, g) = (s.f(), s.g());
    // numerator of ∂_y(g/f)
    let wronskian = &(&g.partial_derivative(Axis::Y) * f) - &(g * &f.partial_derivative(Axis::Y));
    match corner {
        Corner::First => {
            let num = wronskian.axis_restrict_reversed(Axis::X, 2 * n - 1)?;
            let den = f.axis_restrict_reversed(Axis::X, n)?;
            check_denominator("M1", &den)?;
            AnalyticFunctionHandle::corner_product(l_integrand(sys, LIndex::L11)?, num, den, -1.0, order, tol)
        }
        Corner::Third => {
            let num = wronskian.axis_restrict(Axis::X);
            let den = f.axis_restrict(Axis::X);
            check_denominator("M3", &den)?;
            AnalyticFunctionHandle::corner_product(l_integrand(sys, LIndex::L31)?, num, den, 1.0, order, tol)
        }
    }
}

fn check_denominator(name: &str, den: &UnivariatePolynomial) -> Result<()> {
    match crate::algebra::sturm::first_root_in(den, 0.0, 1.0) {
        Some(z) => Err(Error::DenominatorVanishing { integrand: name.to_string(), z }),
        None => Ok(()),
    }
}
