use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::chart::{chart_field, ChartKind, LogField};
use super::transit::{integrate_to_section, Direction, Section, TransitOptions};
use crate::invariants::CheckedSystem;
use crate::quadrature::brent_root;
use crate::{Error, Result};

/// The three transition maps around the polycycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DulacMap {
    /// From `{x = 1}` to the diagonal, past the saddle at infinity on the x-axis.
    First,
    /// From the diagonal to `{y = 1}`, past the saddle at infinity on the y-axis.
    Second,
    /// From `{x = 1}` to `{y = 1}` backwards in time, past the origin.
    Third,
}

impl DulacMap {
    pub fn chart(self) -> ChartKind {
        match self {
            DulacMap::First => ChartKind::U1,
            DulacMap::Second => ChartKind::U2,
            DulacMap::Third => ChartKind::SwapReversed,
        }
    }
}

/// `𝒟(s) = D2(D1(s)) - D3(s)` at one point.
///
/// `log_ratio = ln D2(D1(s)) - ln D3(s)` has the sign of `𝒟` and stays finite when `s`
/// underflows, so `ln_s` is the primary coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisplacementSample {
    pub s: f64,
    pub ln_s: f64,
    pub value: f64,
    pub est_error: f64,
    pub ln_d3: f64,
    pub log_ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitCycle {
    /// Position on the section `{x = 1}`, i.e. the point `(1, s)`.
    pub s: f64,
    pub ln_s: f64,
    pub bracket: (f64, f64),
}

/// Chart fields of one system, ready for repeated transitions.
#[derive(Debug, Clone)]
pub struct PolycycleFlow {
    fields: [LogField; 3],
    affine: LogField,
    tol: f64,
}

impl PolycycleFlow {
    pub fn new(sys: &CheckedSystem, tol: f64) -> Result<Self> {
        let s = sys.system();
        let mk = |m: DulacMap| chart_field(s, m.chart()).map(|cf| LogField::new(&cf));
        Ok(Self {
            fields: [mk(DulacMap::First)?, mk(DulacMap::Second)?, mk(DulacMap::Third)?],
            affine: LogField::new(&chart_field(s, ChartKind::Affine)?),
            tol,
        })
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn with_tol(&self, tol: f64) -> Self {
        Self { fields: self.fields.clone(), affine: self.affine.clone(), tol }
    }

    /// `ln D(s)` from `ln s`; start `(s, 1)`, target `{x1 = 1}` in the map's chart.
    pub fn log_dulac(&self, map: DulacMap, ln_s: f64) -> Result<f64> {
        let field = &self.fields[map as usize];
        let opts = TransitOptions::new(self.tol).direction(Direction::Increasing);
        Ok(integrate_to_section(field, [ln_s, 0.0], &Section::X1_ONE, &opts)?.log_point[1])
    }

    pub fn dulac(&self, map: DulacMap, s: f64) -> Result<f64> {
        check_s(s)?;
        Ok(self.log_dulac(map, s.ln())?.exp())
    }

    /// `(ln D2(D1(s)), ln D3(s))`.
    pub fn log_halves(&self, ln_s: f64) -> Result<(f64, f64)> {
        let d1 = self.log_dulac(DulacMap::First, ln_s)?;
        let d21 = self.log_dulac(DulacMap::Second, d1)?;
        let d3 = self.log_dulac(DulacMap::Third, ln_s)?;
        Ok((d21, d3))
    }

    pub fn log_ratio(&self, ln_s: f64) -> Result<f64> {
        let (a, b) = self.log_halves(ln_s)?;
        Ok(a - b)
    }

    /// Displacement at `ln s`, with the error estimated by rerunning at half the tolerance.
    pub fn displacement_log(&self, ln_s: f64) -> Result<DisplacementSample> {
        let (d21, d3) = self.log_halves(ln_s)?;
        let (e21, e3) = self.with_tol(0.5 * self.tol).log_halves(ln_s)?;
        let value = d21.exp() - d3.exp();
        let finer = e21.exp() - e3.exp();
        Ok(DisplacementSample {
            s: ln_s.exp(),
            ln_s,
            value,
            est_error: (value - finer).abs(),
            ln_d3: d3,
            log_ratio: d21 - d3,
        })
    }

    pub fn displacement(&self, s: f64) -> Result<DisplacementSample> {
        check_s(s)?;
        self.displacement_log(s.ln())
    }

    /// `ℛ(s) = D3⁻¹(D2(D1(s)))`, by bracketing `ln D3` around `ln s` and widening by decades.
    /// When the return lands beyond `s = 1`, where `D3` is not defined, the orbit is followed
    /// from `{y = 1}` to `{x = 1}` in the affine chart instead.
    pub fn return_map(&self, s: f64) -> Result<f64> {
        check_s(s)?;
        Ok(self.return_map_log(s.ln())?.exp())
    }

    pub fn return_map_log(&self, ln_s: f64) -> Result<f64> {
        let d1 = self.log_dulac(DulacMap::First, ln_s)?;
        let target = self.log_dulac(DulacMap::Second, d1)?;
        let g = |ln_r: f64| self.log_dulac(DulacMap::Third, ln_r).map(|v| v - target);
        let decade = std::f64::consts::LN_10;
        let (mut lo, mut hi) = (ln_s - decade, (ln_s + decade).min(0.0));
        let (mut glo, mut ghi) = (g(lo)?, g(hi)?);
        for _ in 0..60 {
            if glo <= 0.0 && ghi >= 0.0 {
                break;
            }
            if glo > 0.0 {
                hi = lo;
                ghi = glo;
                lo -= decade;
                glo = g(lo)?;
            } else if hi < 0.0 {
                lo = hi;
                glo = ghi;
                hi = (hi + decade).min(0.0);
                ghi = g(hi)?;
            } else {
                break;
            }
        }
        if hi == 0.0 && ghi < 0.0 {
            return self.forward_to_first_section(target);
        }
        if !(glo <= 0.0 && ghi >= 0.0) {
            return Err(Error::Bracket { lo, hi, flo: glo, fhi: ghi });
        }
        let tol = 1e-13 * (1.0 + ln_s.abs());
        brent_root(|r| g(r).unwrap_or(f64::NAN), lo, hi, tol)
    }

    /// `ln y` where the orbit through `(e^ln_x, 1)` next meets `{x = 1}`.
    fn forward_to_first_section(&self, ln_x: f64) -> Result<f64> {
        let opts = TransitOptions::new(self.tol).direction(Direction::Increasing);
        Ok(integrate_to_section(&self.affine, [ln_x, 0.0], &Section::X1_ONE, &opts)?.log_point[1])
    }

    /// Samples `𝒟` on a log-spaced grid of `ln s` and refines every sign change.
    ///
    /// Samples with `|ln(ℛ/s)| ≤ 1000·tol` are integration noise and never open a bracket,
    /// so an identically zero displacement reports no cycles. Brackets span runs of such samples.
    pub fn find_limit_cycles(&self, ln_s_min: f64, ln_s_max: f64, grid_n: usize) -> Result<Vec<LimitCycle>> {
        if !(ln_s_min < ln_s_max) || grid_n < 2 {
            return Err(Error::Domain("limit cycle search needs s_min < s_max and at least two grid points".into()));
        }
        let grid: Vec<f64> =
            (0..grid_n).map(|k| ln_s_min + (ln_s_max - ln_s_min) * k as f64 / (grid_n - 1) as f64).collect();
        let floor = 1e3 * self.tol;
        let values: Vec<f64> = grid
            .par_iter()
            .map(|&l| self.log_ratio(l).map(|v| if v.abs() <= floor { 0.0 } else { v }))
            .collect::<Result<_>>()?;
        let mut cycles = Vec::new();
        let mut last: Option<usize> = None;
        for (k, &v) in values.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            if let Some(j) = last {
                if (values[j] > 0.0) != (v > 0.0) {
                    let tol = 1e-12 * (1.0 + grid[j].abs());
                    let r = brent_root(|l| self.log_ratio(l).unwrap_or(f64::NAN), grid[j], grid[k], tol)?;
                    cycles.push(LimitCycle { s: r.exp(), ln_s: r, bracket: (grid[j], grid[k]) });
                }
            }
            last = Some(k);
        }
        Ok(cycles)
    }
}

fn check_s(s: f64) -> Result<()> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::Domain(format!("section coordinate s = {s} must be positive")));
    }
    Ok(())
}

pub fn dulac_numeric(sys: &CheckedSystem, map: DulacMap, s: f64, tol: f64) -> Result<f64> {
    PolycycleFlow::new(sys, tol)?.dulac(map, s)
}

pub fn displacement_numeric(sys: &CheckedSystem, s: f64, tol: f64) -> Result<DisplacementSample> {
    PolycycleFlow::new(sys, tol)?.displacement(s)
}

pub fn return_map(sys: &CheckedSystem, s: f64, tol: f64) -> Result<f64> {
    PolycycleFlow::new(sys, tol)?.return_map(s)
}

pub fn find_limit_cycles(sys: &CheckedSystem, s_min: f64, s_max: f64, grid_n: usize, tol: f64) -> Result<Vec<LimitCycle>> {
    check_s(s_min)?;
    check_s(s_max)?;
    PolycycleFlow::new(sys, tol)?.find_limit_cycles(s_min.ln(), s_max.ln(), grid_n)
}

/// `ln D2(D1(s))` along one orbit of the damped affine field from `(1, s)` down to `{y = 1}`,
/// without charts at infinity.
pub fn composed_transit_affine(sys: &CheckedSystem, ln_s: f64, tol: f64) -> Result<f64> {
    let field = LogField::compactified_affine(sys.system());
    let opts = TransitOptions::new(tol).direction(Direction::Decreasing);
    Ok(integrate_to_section(&field, [0.0, ln_s], &Section::X2_ONE, &opts)?.log_point[0])
}
