use serde::{Deserialize, Serialize};

use crate::algebra::{BivariatePolynomial, Chart, DenseBivariate};
use crate::invariants::KolmogorovSystem;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChartKind {
    /// `x1 = y/x`, `x2 = 1/x`: the saddle at infinity on the x-axis.
    U1,
    /// `x1 = 1/y`, `x2 = x/y`: the saddle at infinity on the y-axis.
    U2,
    /// `x1 = y`, `x2 = x` with time reversed: the saddle at the origin.
    SwapReversed,
    Affine,
}

/// The field `x1 P1 ∂1 + x2 P2 ∂2` in chart coordinates.
///
/// At infinity the field is multiplied by `x2^n` (U1) or `x1^n` (U2), which keeps the
/// time direction. In the three corner charts the saddle at the origin has
/// `P1(0,0) > 0 > P2(0,0)`, so orbits enter along the x2-axis and leave along the x1-axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartField {
    pub chart: ChartKind,
    pub p1: BivariatePolynomial,
    pub p2: BivariatePolynomial,
}

pub fn chart_field(sys: &KolmogorovSystem, chart: ChartKind) -> Result<ChartField> {
    let n = sys.degree();
    let (f, g) = (sys.f(), sys.g());
    let (p1, p2) = match chart {
        ChartKind::U1 => ((g - f).chart_transform(Chart::U1, n)?, (-f).chart_transform(Chart::U1, n)?),
        ChartKind::U2 => ((-g).chart_transform(Chart::U2, n)?, (f - g).chart_transform(Chart::U2, n)?),
        ChartKind::SwapReversed => ((-g).swap_variables(), (-f).swap_variables()),
        ChartKind::Affine => (f.clone(), g.clone()),
    };
    Ok(ChartField { chart, p1, p2 })
}

impl ChartField {
    /// `-P2(0,0)/P1(0,0)`, the hyperbolicity ratio of the saddle at the chart origin.
    pub fn origin_ratio(&self) -> f64 {
        -self.p2.eval(0.0, 0.0) / self.p1.eval(0.0, 0.0)
    }

    pub fn eval(&self, x1: f64, x2: f64) -> (f64, f64) {
        (x1 * self.p1.eval(x1, x2), x2 * self.p2.eval(x1, x2))
    }
}

/// The same field in logarithmic coordinates `ξ = ln x1`, `η = ln x2`:
/// `ξ' = P1(e^ξ, e^η)`, `η' = P2(e^ξ, e^η)`, optionally slowed by `(1 + x1² + x2²)^(n/2)`.
#[derive(Debug, Clone)]
pub struct LogField {
    p1: DenseBivariate,
    p2: DenseBivariate,
    damping: Option<i32>,
}

impl LogField {
    pub fn new(field: &ChartField) -> Self {
        Self { p1: (&field.p1).into(), p2: (&field.p2).into(), damping: None }
    }

    /// The affine field with Poincaré damping, bounded along orbits that pass near infinity.
    pub fn compactified_affine(sys: &KolmogorovSystem) -> Self {
        Self { p1: sys.f().into(), p2: sys.g().into(), damping: Some(sys.degree() as i32) }
    }

    pub fn eval(&self, s: &[f64; 2]) -> [f64; 2] {
        let (x1, x2) = (s[0].exp(), s[1].exp());
        let (a, b) = (self.p1.eval(x1, x2), self.p2.eval(x1, x2));
        match self.damping {
            None => [a, b],
            Some(n) => {
                let w = (1.0 + x1 * x1 + x2 * x2).sqrt().powi(n);
                [a / w, b / w]
            }
        }
    }
}
