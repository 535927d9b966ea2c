use serde::{Deserialize, Serialize};

use super::KolmogorovSystem;
use crate::algebra::{sturm, Axis, UnivariatePolynomial};
use crate::{Error, Result};

/// Hyperbolicity ratios of the three corner saddles: origin side (`lambda3`),
/// the saddle at infinity on the x-axis (`lambda1`) and on the y-axis (`lambda2`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicityRatios {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
}

impl HyperbolicityRatios {
    pub fn product(&self) -> f64 {
        self.lambda1 * self.lambda2 * self.lambda3
    }

    /// Branch on which the third test function is defined.
    pub fn third_branch(&self) -> bool {
        self.lambda1 < 1.0 && self.lambda2 > 1.0 && self.lambda3 > 1.0
    }
}

/// A system whose hypotheses have been verified, with its ratios.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckedSystem {
    system: KolmogorovSystem,
    lambdas: HyperbolicityRatios,
}

impl CheckedSystem {
    pub fn new(system: KolmogorovSystem) -> Result<Self> {
        let lambdas = check_hypotheses(&system)?;
        Ok(Self { system, lambdas })
    }

    pub fn system(&self) -> &KolmogorovSystem {
        &self.system
    }

    pub fn lambdas(&self) -> HyperbolicityRatios {
        self.lambdas
    }
}

/// Sign condition on a univariate polynomial for all `z > 0`.
fn check_sign_on_positive_axis(p: &UnivariatePolynomial, positive: bool, name: &str) -> Result<()> {
    let violation = |z: f64| Error::H1 { inequality: name.to_string(), z };
    if p.is_zero() {
        return Err(violation(1.0));
    }
    let ok = |v: f64| if positive { v > 0.0 } else { v < 0.0 };
    if !ok(p.eval(1.0)) {
        return Err(violation(1.0));
    }
    if !ok(p.leading()) {
        return Err(violation(f64::INFINITY));
    }
    if p.degree() == Some(0) {
        return Ok(());
    }
    let bound = sturm::cauchy_bound(p);
    let roots = sturm::isolate_roots(p, 0.0, bound);
    if let Some(&(lo, hi)) = roots.first() {
        return Err(violation(sturm::refine_root(p, lo, hi)));
    }
    Ok(())
}

fn ratio(num: f64, den: f64, name: &str) -> Result<f64> {
    if den == 0.0 {
        return Err(Error::H2(format!("{name} has a zero denominator")));
    }
    let r = num / den;
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::H2(format!("{name} = {r} is not strictly positive")));
    }
    Ok(r)
}

/// Positivity of the ratios, then `f(z,0) > 0`, `g(0,z) < 0`, `(f_n - g_n)(1,z) < 0` for `z > 0`.
pub fn check_hypotheses(sys: &KolmogorovSystem) -> Result<HyperbolicityRatios> {
    let (fn_, gn) = (sys.f_top(), sys.g_top());
    let lambda1 = ratio(fn_.eval(1.0, 0.0), gn.eval(1.0, 0.0) - fn_.eval(1.0, 0.0), "lambda1")?;
    let lambda2 = ratio(fn_.eval(0.0, 1.0) - gn.eval(0.0, 1.0), gn.eval(0.0, 1.0), "lambda2")?;
    let lambda3 = ratio(-sys.g().eval(0.0, 0.0), sys.f().eval(0.0, 0.0), "lambda3")?;

    let f_axis = sys.f().axis_restrict(Axis::X);
    let g_axis = sys.g().axis_restrict(Axis::Y);
    let top_diff = (&fn_ - &gn).substitute_x(1.0);
    check_sign_on_positive_axis(&f_axis, true, "f(z,0) > 0")?;
    check_sign_on_positive_axis(&g_axis, false, "g(0,z) < 0")?;
    check_sign_on_positive_axis(&top_diff, false, "(f_n - g_n)(1,z) < 0")?;
    Ok(HyperbolicityRatios { lambda1, lambda2, lambda3 })
}
