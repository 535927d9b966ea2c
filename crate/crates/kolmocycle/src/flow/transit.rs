use serde::{Deserialize, Serialize};

use super::chart::LogField;
use super::ode::{integrate, Control, OdeOptions, State};
use crate::quadrature::brent_root;
use crate::{Error, Result};

/// Line `a ξ + b η = c` in logarithmic chart coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Section {
    /// `{x1 = 1}`.
    pub const X1_ONE: Section = Section { a: 1.0, b: 0.0, c: 0.0 };
    /// `{x2 = 1}`.
    pub const X2_ONE: Section = Section { a: 0.0, b: 1.0, c: 0.0 };
    /// `{x1 = x2}`.
    pub const DIAGONAL: Section = Section { a: -1.0, b: 1.0, c: 0.0 };

    pub fn value(&self, s: &State) -> f64 {
        self.a * s[0] + self.b * s[1] - self.c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Any,
    /// Section functional goes from negative to positive.
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone, Copy)]
pub struct TransitOptions {
    pub ode: OdeOptions,
    /// `-1` integrates backwards in time.
    pub time_sign: f64,
    pub direction: Direction,
    /// Bound on `|ξ|, |η|`; beyond it the orbit has left the chart.
    pub log_bound: f64,
}

impl TransitOptions {
    pub fn new(tol: f64) -> Self {
        Self { ode: OdeOptions::with_tol(tol), time_sign: 1.0, direction: Direction::Any, log_bound: 1e5 }
    }

    pub fn direction(mut self, d: Direction) -> Self {
        self.direction = d;
        self
    }

    pub fn backwards(mut self) -> Self {
        self.time_sign = -self.time_sign;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    /// `(ln x1, ln x2)` at the crossing.
    pub log_point: [f64; 2],
    pub time: f64,
    pub steps: usize,
}

impl Crossing {
    pub fn point(&self) -> (f64, f64) {
        (self.log_point[0].exp(), self.log_point[1].exp())
    }
}

/// First crossing of `section` (in the requested direction) by the orbit through `start`,
/// both in logarithmic coordinates.
pub fn integrate_to_section(
    field: &LogField,
    start: [f64; 2],
    section: &Section,
    opts: &TransitOptions,
) -> Result<Crossing> {
    let sign = opts.time_sign;
    let rhs = |y: &State| {
        let v = field.eval(y);
        [sign * v[0], sign * v[1]]
    };
    let mut last_sign = section.value(&start).signum();
    let mut found: Option<(f64, State)> = None;
    let summary = integrate(rhs, 0.0, start, f64::INFINITY, &opts.ode, |step| {
        if step.y1.iter().any(|v| !v.is_finite() || v.abs() > opts.log_bound) {
            return Err(Error::LeftDomain(step.y1[0], step.y1[1]));
        }
        let v1 = section.value(&step.y1);
        let s1 = v1.signum();
        if v1 != 0.0 && last_sign == 0.0 {
            last_sign = s1;
            return Ok(Control::Continue);
        }
        if s1 == last_sign || last_sign == 0.0 {
            return Ok(Control::Continue);
        }
        let wanted = match opts.direction {
            Direction::Any => true,
            Direction::Increasing => last_sign < 0.0,
            Direction::Decreasing => last_sign > 0.0,
        };
        last_sign = if v1 == 0.0 { -last_sign } else { s1 };
        if !wanted {
            return Ok(Control::Continue);
        }
        let t = if v1 == 0.0 {
            step.t1()
        } else {
            let tol = 1e-15 * step.h.abs().max(step.t0.abs());
            brent_root(|t| section.value(&step.eval(t)), step.t0, step.t1(), tol)?
        };
        found = Some((t, step.eval(t)));
        Ok(Control::Stop)
    })?;
    match found {
        Some((t, y)) => Ok(Crossing { log_point: y, time: t, steps: summary.steps }),
        None => Err(Error::NotFound("orbit never reached the target section".into())),
    }
}
