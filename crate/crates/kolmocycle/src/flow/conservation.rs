use serde::{Deserialize, Serialize};

use super::chart::{chart_field, ChartKind, LogField};
use super::ode::{integrate, Control, OdeOptions, State};
use super::transit::{integrate_to_section, Section, TransitOptions};
use crate::invariants::KolmogorovSystem;
use crate::quadrature::brent_root;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConservationReport {
    /// `max |H - H0| / |H0|` along the dense output of one revolution.
    pub max_drift: f64,
    pub period: f64,
    pub steps: usize,
}

const SUBSAMPLES: usize = 8;

/// Follows the orbit through `start` (on the diagonal) until it next crosses the diagonal in the
/// same direction, monitoring `h`.
pub fn conservation_check(
    sys: &KolmogorovSystem,
    h: impl Fn(f64, f64) -> f64,
    start: (f64, f64),
    tol: f64,
) -> Result<ConservationReport> {
    if !(start.0 > 0.0 && start.1 > 0.0) {
        return Err(Error::Domain("start must lie in the open first quadrant".into()));
    }
    let field = LogField::new(&chart_field(sys, ChartKind::Affine)?);
    let y0: State = [start.0.ln(), start.1.ln()];
    let h_at = |y: &State| h(y[0].exp(), y[1].exp());
    let h0 = h_at(&y0);
    if !h0.is_finite() || h0 == 0.0 {
        return Err(Error::Domain(format!("first integral is {h0} at the start")));
    }
    let section = Section::DIAGONAL;
    let v0 = field.eval(&y0);
    let rising = section.a * v0[0] + section.b * v0[1] > 0.0;
    let mut drift: f64 = 0.0;
    let mut last = section.value(&y0);
    let mut left = false;
    let mut period = None;
    let summary = integrate(|y| field.eval(y), 0.0, y0, f64::INFINITY, &OdeOptions::with_tol(tol), |step| {
        let v1 = section.value(&step.y1);
        let crossed = left && (if rising { last < 0.0 && v1 >= 0.0 } else { last > 0.0 && v1 <= 0.0 });
        let t_end = if crossed {
            let tol_t = 1e-15 * step.t1().abs().max(1.0);
            brent_root(|t| section.value(&step.eval(t)), step.t0, step.t1(), tol_t)?
        } else {
            step.t1()
        };
        for k in 1..=SUBSAMPLES {
            let t = step.t0 + (t_end - step.t0) * k as f64 / SUBSAMPLES as f64;
            drift = drift.max(((h_at(&step.eval(t)) - h0) / h0).abs());
        }
        if v1 != 0.0 {
            left = true;
            last = v1;
        }
        if crossed {
            period = Some(t_end);
            return Ok(Control::Stop);
        }
        Ok(Control::Continue)
    })?;
    match period {
        Some(period) => Ok(ConservationReport { max_drift: drift, period, steps: summary.steps }),
        None => Err(Error::NotFound("orbit did not return to the diagonal".into())),
    }
}

/// For a field reversible under `(x, y) -> (y, x)`: the orbit through `start` reaches the diagonal
/// at time `t1` and must sit at the mirror image of `start` at time `2 t1`. Returns the distance
/// in logarithmic coordinates, i.e. the relative error.
pub fn reversibility_check(sys: &KolmogorovSystem, start: (f64, f64), tol: f64) -> Result<f64> {
    if !(start.0 > 0.0 && start.1 > 0.0) {
        return Err(Error::Domain("start must lie in the open first quadrant".into()));
    }
    let field = LogField::new(&chart_field(sys, ChartKind::Affine)?);
    let y0: State = [start.0.ln(), start.1.ln()];
    let hit = integrate_to_section(&field, y0, &Section::DIAGONAL, &TransitOptions::new(tol))?;
    let opts = OdeOptions::with_tol(tol);
    let end = integrate(|y| field.eval(y), 0.0, y0, 2.0 * hit.time, &opts, |_| Ok(Control::Continue))?;
    Ok((end.y[0] - y0[1]).abs().max((end.y[1] - y0[0]).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lotka_volterra() -> KolmogorovSystem {
        KolmogorovSystem::from_terms(1, &[(0, 0, 1.0), (0, 1, -1.0)], &[(0, 0, -1.0), (1, 0, 1.0)]).unwrap()
    }

    #[test]
    fn lotka_volterra_integral_is_conserved() {
        let h = |x: f64, y: f64| x - x.ln() + y - y.ln();
        let coarse = conservation_check(&lotka_volterra(), h, (2.0, 2.0), 1e-8).unwrap();
        let fine = conservation_check(&lotka_volterra(), h, (2.0, 2.0), 1e-11).unwrap();
        assert!(fine.max_drift < 1e-9, "{fine:?}");
        assert!(fine.max_drift < coarse.max_drift);
        assert!(fine.period > 2.0 * std::f64::consts::PI);
    }

    #[test]
    fn lotka_volterra_is_reversible() {
        let d = reversibility_check(&lotka_volterra(), (0.5, 0.8), 1e-11).unwrap();
        assert!(d < 1e-8, "{d}");
    }
}
