use serde::{Deserialize, Serialize};

use super::integrate_adaptive;
use crate::algebra::{sturm, UnivariatePolynomial};
use crate::{Error, Result};

/// Integrand `N(z) / (z D(z))` on `[0, 1]` with `N(0) = 0`.
///
/// Only `Ñ = N / z` is stored, so the singularity at `z = 0` never appears.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CornerIntegrand {
    numerator: UnivariatePolynomial,
    reduced: UnivariatePolynomial,
    denominator: UnivariatePolynomial,
}

impl CornerIntegrand {
    /// `name` labels errors. The constant term of `numerator` must be zero up to rounding.
    pub fn new(name: &str, numerator: UnivariatePolynomial, denominator: UnivariatePolynomial) -> Result<Self> {
        let c0 = numerator.coeff(0);
        let scale = numerator.max_abs_coeff().max(denominator.max_abs_coeff());
        if c0.abs() > 1e3 * f64::EPSILON * scale {
            return Err(Error::ConstantTerm { value: c0 });
        }
        let numerator = numerator.with_constant(0.0);
        if let Some(z) = sturm::first_root_in(&denominator, 0.0, 1.0) {
            return Err(Error::DenominatorVanishing { integrand: name.to_string(), z });
        }
        let reduced = numerator.shift_down();
        Ok(Self { numerator, reduced, denominator })
    }

    pub fn numerator(&self) -> &UnivariatePolynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &UnivariatePolynomial {
        &self.denominator
    }

    /// `Ñ(z) / D(z)`, the regularized integrand.
    pub fn eval_reduced(&self, z: f64) -> f64 {
        self.reduced.eval(z) / self.denominator.eval(z)
    }
}

/// `∫_0^u N(z) / (z D(z)) dz` for `0 < u <= 1`.
pub fn corner_integral(ci: &CornerIntegrand, u: f64, tol: f64) -> Result<f64> {
    if !(u > 0.0 && u <= 1.0) {
        if u == 0.0 {
            return Ok(0.0);
        }
        return Err(Error::Domain(format!("corner integral upper limit {u} outside (0, 1]")));
    }
    Ok(integrate_adaptive(|z| ci.eval_reduced(z), 0.0, u, tol)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[f64]) -> UnivariatePolynomial {
        UnivariatePolynomial::new(c.to_vec())
    }

    #[test]
    fn simple_values() {
        let one = CornerIntegrand::new("t", p(&[0.0, 1.0]), p(&[1.0])).unwrap();
        assert!((corner_integral(&one, 1.0, 1e-12).unwrap() - 1.0).abs() < 1e-15);
        let half = CornerIntegrand::new("t", p(&[0.0, 0.0, 1.0]), p(&[1.0])).unwrap();
        assert!((corner_integral(&half, 1.0, 1e-12).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_vanishing_denominator() {
        let r = CornerIntegrand::new("bad", p(&[0.0, 1.0]), p(&[-0.5, 1.0]));
        match r {
            Err(Error::DenominatorVanishing { z, .. }) => assert!((z - 0.5).abs() < 1e-10),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn clamps_rounding_in_constant_term() {
        let ci = CornerIntegrand::new("t", p(&[1e-17, 1.0]), p(&[1.0])).unwrap();
        assert_eq!(ci.numerator().coeff(0), 0.0);
        assert!(matches!(CornerIntegrand::new("t", p(&[1e-6, 1.0]), p(&[1.0])), Err(Error::ConstantTerm { .. })));
    }

    #[test]
    fn vanishes_linearly_at_zero() {
        let ci = CornerIntegrand::new("t", p(&[0.0, 2.0, 1.0]), p(&[1.0, 0.5])).unwrap();
        for u in [1e-3, 1e-4, 1e-5] {
            let v = corner_integral(&ci, u, 1e-14).unwrap();
            assert!((v / u - 2.0).abs() < 2.0 * u);
        }
    }
}
