use serde::{Deserialize, Serialize};

use super::{CheckedSystem, HyperbolicityRatios};
use crate::corner::{build_m, log_l, mellin_hat, Corner, LIndex};
use crate::{Error, Result, Tolerances};

/// `log L_ij(1)` for all six corner functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogLValues {
    pub l11: f64,
    pub l12: f64,
    pub l21: f64,
    pub l22: f64,
    pub l31: f64,
    pub l32: f64,
}

impl LogLValues {
    pub fn compute(sys: &CheckedSystem, tol: f64) -> Result<Self> {
        Ok(Self {
            l11: log_l(sys, LIndex::L11, tol)?,
            l12: log_l(sys, LIndex::L12, tol)?,
            l21: log_l(sys, LIndex::L21, tol)?,
            l22: log_l(sys, LIndex::L22, tol)?,
            l31: log_l(sys, LIndex::L31, tol)?,
            l32: log_l(sys, LIndex::L32, tol)?,
        })
    }
}

/// Leading coefficients of the three Dulac maps and of the displacement map
/// `𝒟(s) = a1 s^(l1 l2) - a2 s^(1/l3) + ...`, in the compensator form
/// `s^(1/l3) (b1 ω(s; α) + b2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrincipalPart {
    pub delta10: f64,
    pub delta20: f64,
    pub delta30: f64,
    pub a1: f64,
    pub a2: f64,
    pub alpha: f64,
    pub b1: f64,
    pub b2: f64,
}

impl PrincipalPart {
    pub fn new(lam: HyperbolicityRatios, l: &LogLValues) -> Self {
        let delta10 = (l.l12 - lam.lambda1 * l.l11).exp();
        let delta20 = (l.l22 - lam.lambda2 * l.l21).exp();
        let delta30 = (l.l32 - l.l31 / lam.lambda3).exp();
        let a1 = delta20 * delta10.powf(lam.lambda2);
        let a2 = delta30;
        let alpha = 1.0 / lam.lambda3 - lam.lambda1 * lam.lambda2;
        Self { delta10, delta20, delta30, a1, a2, alpha, b1: alpha * a1, b2: a1 - a2 }
    }
}

pub fn d1(sys: &CheckedSystem) -> f64 {
    1.0 - sys.lambdas().product()
}

pub fn d2_from(lam: HyperbolicityRatios, l: &LogLValues) -> f64 {
    let (l1, l2) = (lam.lambda1, lam.lambda2);
    l2 * (l.l12 - l.l21) + l1 * l2 * (l.l31 - l.l11) + l.l22 - l.l32
}

pub fn d2(sys: &CheckedSystem, tol: &Tolerances) -> Result<f64> {
    Ok(d2_from(sys.lambdas(), &LogLValues::compute(sys, tol.quad)?))
}

/// `M̂3(λ3, 1) L11(1) - M̂1(1/λ1, 1) L31(1)`, defined for `λ1 < 1 < λ2, λ3`.
pub fn d3(sys: &CheckedSystem, tol: &Tolerances) -> Result<f64> {
    let lam = sys.lambdas();
    if !lam.third_branch() {
        return Err(Error::Branch(lam.lambda1, lam.lambda2, lam.lambda3));
    }
    let m1 = build_m(sys, Corner::First, tol.series_order, tol.quad)?;
    let m3 = build_m(sys, Corner::Third, tol.series_order, tol.quad)?;
    let m3_hat = mellin_hat(&m3, lam.lambda3, 1.0, tol.quad, tol.pole)?;
    let m1_hat = mellin_hat(&m1, 1.0 / lam.lambda1, 1.0, tol.quad, tol.pole)?;
    let l11 = log_l(sys, LIndex::L11, tol.quad)?.exp();
    let l31 = log_l(sys, LIndex::L31, tol.quad)?.exp();
    Ok(m3_hat * l11 - m1_hat * l31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Stable,
    Unstable,
    Undetermined,
}

/// Values of the test functions at one parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestValues {
    pub d1: f64,
    pub d2: f64,
    pub d3: Option<f64>,
    pub d3_branch_ok: bool,
    pub d3_unavailable: Option<String>,
    pub pole_guard_fired: bool,
}

impl TestValues {
    pub fn compute(sys: &CheckedSystem, tol: &Tolerances) -> Result<Self> {
        let lam = sys.lambdas();
        let d1 = d1(sys);
        let d2 = d2(sys, tol)?;
        let branch = lam.third_branch();
        let (d3, unavailable, pole) = if branch {
            match d3(sys, tol) {
                Ok(v) => (Some(v), None, false),
                Err(e @ Error::MellinPole { .. }) => (None, Some(e.to_string()), true),
                Err(e) => return Err(e),
            }
        } else {
            let note = format!(
                "d3 is defined for lambda1 < 1, lambda2 > 1, lambda3 > 1 (here {:.6}, {:.6}, {:.6}); \
                 a projective permutation of the saddles reaches that branch and was not performed",
                lam.lambda1, lam.lambda2, lam.lambda3
            );
            (None, Some(note), false)
        };
        Ok(Self { d1, d2, d3, d3_branch_ok: branch, d3_unavailable: unavailable, pole_guard_fired: pole })
    }
}

/// Evidence for the lower bounds: rank of the gradients of the leading test functions and a
/// displacement sample showing the return map is not the identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundEvidence {
    pub gradient_rank: usize,
    pub displacement_witness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CyclicityVerdict {
    pub upper_bound: Option<u32>,
    pub lower_bound_hint: Option<u32>,
    pub identity_suspected: bool,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub lambdas: HyperbolicityRatios,
    pub d1: f64,
    pub d2: f64,
    pub d3: Option<f64>,
    pub d3_branch_ok: bool,
    pub stability: Stability,
    pub verdict: CyclicityVerdict,
    pub tol_zero: f64,
}

/// Zero threshold actually applied to the d-functions.
pub fn zero_threshold(lam: HyperbolicityRatios, tol_zero: f64) -> f64 {
    tol_zero * lam.product().abs().max(1.0)
}

fn sign_stability(v: f64) -> Stability {
    if v < 0.0 {
        Stability::Stable
    } else {
        Stability::Unstable
    }
}

pub fn stability_from(values: &TestValues, threshold: f64) -> Stability {
    if values.d1.abs() > threshold {
        return sign_stability(values.d1);
    }
    if values.d2.abs() > threshold {
        return sign_stability(values.d2);
    }
    match values.d3 {
        Some(d3) if values.d3_branch_ok && d3.abs() > threshold => sign_stability(d3),
        _ => Stability::Undetermined,
    }
}

pub fn verdict_from(values: &TestValues, threshold: f64, evidence: Option<LowerBoundEvidence>) -> CyclicityVerdict {
    let mut notes = Vec::new();
    let z1 = values.d1.abs() <= threshold;
    let z2 = values.d2.abs() <= threshold;
    let z3 = values.d3.map(|d| d.abs() <= threshold);
    let upper_bound = if !z1 {
        Some(0)
    } else if !z2 {
        Some(1)
    } else if z3 == Some(false) {
        Some(2)
    } else {
        None
    };
    let identity_suspected = z1 && z2 && z3 != Some(false);
    if z1 && z2 {
        if let Some(why) = &values.d3_unavailable {
            notes.push(why.clone());
        }
    }
    if identity_suspected {
        notes.push("every available test function vanishes; the return map may be the identity".into());
    }
    let vanishing = if !z1 {
        0
    } else if !z2 {
        1
    } else if z3 != Some(true) {
        2
    } else {
        3
    };
    let lower_bound_hint = match evidence {
        None => None,
        Some(ev) => {
            notes.push(format!(
                "lower bound evidence: gradient rank {} (sufficient condition for independence only), displacement witness {:e}",
                ev.gradient_rank, ev.displacement_witness
            ));
            let m = vanishing.min(ev.gradient_rank);
            (m > 0 && ev.displacement_witness != 0.0 && ev.displacement_witness.is_finite()).then_some(m as u32)
        }
    };
    CyclicityVerdict { upper_bound, lower_bound_hint, identity_suspected, notes }
}

pub fn stability(sys: &CheckedSystem, tol: &Tolerances) -> Result<Stability> {
    let values = TestValues::compute(sys, tol)?;
    Ok(stability_from(&values, zero_threshold(sys.lambdas(), tol.zero)))
}

pub fn cyclicity_verdict(
    sys: &CheckedSystem,
    tol: &Tolerances,
    evidence: Option<LowerBoundEvidence>,
) -> Result<CyclicityVerdict> {
    let values = TestValues::compute(sys, tol)?;
    Ok(verdict_from(&values, zero_threshold(sys.lambdas(), tol.zero), evidence))
}

/// Test functions, stability and verdict in one pass.
pub fn invariant_report(
    sys: &CheckedSystem,
    tol: &Tolerances,
    evidence: Option<LowerBoundEvidence>,
) -> Result<(InvariantReport, TestValues)> {
    let values = TestValues::compute(sys, tol)?;
    let threshold = zero_threshold(sys.lambdas(), tol.zero);
    let report = InvariantReport {
        lambdas: sys.lambdas(),
        d1: values.d1,
        d2: values.d2,
        d3: values.d3,
        d3_branch_ok: values.d3_branch_ok,
        stability: stability_from(&values, threshold),
        verdict: verdict_from(&values, threshold, evidence),
        tol_zero: tol.zero,
    };
    Ok((report, values))
}
