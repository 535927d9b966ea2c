use serde::{Deserialize, Serialize};

use crate::algebra::{Axis, TruncatedPowerSeries};
use crate::invariants::CheckedSystem;
use crate::quadrature::{corner_integral, CornerIntegrand};
use crate::{Error, Result};

/// The six corner functions `L_ij(u) = exp ∫_0^u φ_ij(z) dz / z`.
///
/// The first digit names the saddle (1: infinity on the x-axis, 2: infinity on the y-axis,
/// 3: origin), the second digit the separatrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LIndex {
    L11,
    L12,
    L21,
    L22,
    L31,
    L32,
}

impl LIndex {
    pub const ALL: [LIndex; 6] = [LIndex::L11, LIndex::L12, LIndex::L21, LIndex::L22, LIndex::L31, LIndex::L32];

    pub fn name(self) -> &'static str {
        match self {
            LIndex::L11 => "L11",
            LIndex::L12 => "L12",
            LIndex::L21 => "L21",
            LIndex::L22 => "L22",
            LIndex::L31 => "L31",
            LIndex::L32 => "L32",
        }
    }
}

/// Numerator and denominator of `φ_ij` as polynomials in `z`, arguments `1/z` reversed away.
pub fn l_integrand(sys: &CheckedSystem, index: LIndex) -> Result<CornerIntegrand> {
    let s = sys.system();
    let lam = sys.lambdas();
    let n = s.degree();
    let (f, g) = (s.f(), s.g());
    let (fn_, gn) = (s.f_top(), s.g_top());
    let (num, den) = match index {
        LIndex::L11 => {
            let den = f.axis_restrict_reversed(Axis::X, n)?;
            let num = &(f - g).axis_restrict_reversed(Axis::X, n)? + &den.scale(1.0 / lam.lambda1);
            (num, den)
        }
        LIndex::L12 => {
            let den = (&fn_ - &gn).substitute_x(1.0);
            (&fn_.substitute_x(1.0) + &den.scale(lam.lambda1), den)
        }
        LIndex::L21 => {
            let den = (&gn - &fn_).substitute_y(1.0);
            (&gn.substitute_y(1.0) + &den.scale(1.0 / lam.lambda2), den)
        }
        LIndex::L22 => {
            let den = g.axis_restrict_reversed(Axis::Y, n)?;
            let num = &(g - f).axis_restrict_reversed(Axis::Y, n)? + &den.scale(lam.lambda2);
            (num, den)
        }
        LIndex::L31 => {
            let den = f.axis_restrict(Axis::X);
            (&g.axis_restrict(Axis::X) + &den.scale(lam.lambda3), den)
        }
        LIndex::L32 => {
            let den = g.axis_restrict(Axis::Y);
            (&f.axis_restrict(Axis::Y) + &den.scale(1.0 / lam.lambda3), den)
        }
    };
    CornerIntegrand::new(index.name(), num, den)
}

/// `log L_ij(1)`.
pub fn log_l(sys: &CheckedSystem, index: LIndex, tol: f64) -> Result<f64> {
    corner_integral(&l_integrand(sys, index)?, 1.0, tol)
}

/// Taylor series at 0 of `exp ∫_0^u N(z)/(z D(z)) dz`.
pub fn exp_integral_series(ci: &CornerIntegrand, order: usize) -> Result<TruncatedPowerSeries> {
    let num = TruncatedPowerSeries::from_poly(ci.numerator(), order);
    let den = TruncatedPowerSeries::from_poly(ci.denominator(), order);
    Ok(num.div(&den)?.integrate_scaled()?.exp())
}

/// Taylor series of `L_11` or `L_31`.
pub fn l_series(sys: &CheckedSystem, index: LIndex, order: usize) -> Result<TruncatedPowerSeries> {
    if !matches!(index, LIndex::L11 | LIndex::L31) {
        return Err(Error::Domain(format!("Taylor data is only built for L11 and L31, not {}", index.name())));
    }
    exp_integral_series(&l_integrand(sys, index)?, order)
}
