//! Dormand–Prince 5(4) with PI step control and dense output, for autonomous planar fields.

use crate::{Error, Result};

pub type State = [f64; 2];

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
    pub max_steps: usize,
    /// Disables error control and takes steps of exactly this size.
    pub fixed_step: Option<f64>,
}

impl OdeOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { rtol: tol, atol: tol, h_max: f64::INFINITY, max_steps: 100_000, fixed_step: None }
    }
}

/// One accepted step with its continuous extension.
#[derive(Debug, Clone, Copy)]
pub struct DenseStep {
    pub t0: f64,
    pub h: f64,
    pub y0: State,
    pub y1: State,
    rcont: [State; 5],
}

impl DenseStep {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    /// State at time `t` inside the step.
    pub fn eval(&self, t: f64) -> State {
        let theta = (t - self.t0) / self.h;
        let theta1 = 1.0 - theta;
        let r = &self.rcont;
        std::array::from_fn(|i| {
            r[0][i] + theta * (r[1][i] + theta1 * (r[2][i] + theta * (r[3][i] + theta1 * r[4][i])))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

#[derive(Debug, Clone, Copy)]
pub struct Summary {
    pub t: f64,
    pub y: State,
    pub steps: usize,
    pub stopped: bool,
}

fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(c, k)| c * k[i]).sum::<f64>())
}

fn error_norm(err: &State, y0: &State, y1: &State, opts: &OdeOptions) -> f64 {
    let s: f64 = (0..2)
        .map(|i| {
            let sk = opts.atol + opts.rtol * y0[i].abs().max(y1[i].abs());
            (err[i] / sk).powi(2)
        })
        .sum();
    (s / 2.0).sqrt()
}

/// Integrates `y' = f(y)` from `t0` towards `t_end` (which may be infinite), calling
/// `on_step` after every accepted step until it returns `Control::Stop`.
pub fn integrate<F, C>(f: F, t0: f64, y0: State, t_end: f64, opts: &OdeOptions, mut on_step: C) -> Result<Summary>
where
    F: Fn(&State) -> State,
    C: FnMut(&DenseStep) -> Result<Control>,
{
    const SAFE: f64 = 0.9;
    const BETA: f64 = 0.04;
    const EXPO1: f64 = 0.2 - BETA * 0.75;
    const FAC_MIN_INV: f64 = 5.0; // shrink at most 5x
    const FAC_MAX_INV: f64 = 0.1; // grow at most 10x

    let span = t_end - t0;
    if span <= 0.0 {
        return Ok(Summary { t: t0, y: y0, steps: 0, stopped: false });
    }
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(&y);
    let mut h = match opts.fixed_step {
        Some(h) => h,
        None => initial_step(&f, &y, &k1, opts),
    }
    .min(opts.h_max)
    .min(span);
    let mut fac_old: f64 = 1e-4;
    let mut rejected_last = false;
    let mut steps = 0;

    while t < t_end {
        if steps >= opts.max_steps {
            return Err(Error::StepBudget(opts.max_steps));
        }
        if t + 1.01 * h >= t_end {
            h = t_end - t;
        }
        let k2 = f(&axpy(&y, h, &[(A21, &k1)]));
        let k3 = f(&axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(&axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(&axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = f(&axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let y_new = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = f(&y_new);
        steps += 1;

        let finite = y_new.iter().chain(k7.iter()).all(|v| v.is_finite());
        let (accept, h_next) = match opts.fixed_step {
            Some(hf) => {
                if !finite {
                    return Err(Error::LeftDomain(y[0], y[1]));
                }
                (true, hf)
            }
            None if !finite => (false, h * 0.25),
            None => {
                let e: State = std::array::from_fn(|i| {
                    h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i])
                });
                let err = error_norm(&e, &y, &y_new, opts);
                let fac11 = err.powf(EXPO1);
                let fac = (fac11 / fac_old.powf(BETA) / SAFE).clamp(FAC_MAX_INV, FAC_MIN_INV);
                if err <= 1.0 {
                    fac_old = err.max(1e-4);
                    let mut hn = h / fac;
                    if rejected_last {
                        hn = hn.min(h);
                    }
                    (true, hn.min(opts.h_max))
                } else {
                    (false, h / (fac11 / SAFE).min(FAC_MIN_INV))
                }
            }
        };

        if !accept {
            rejected_last = true;
            h = h_next;
            if h.abs() < 1e-14 * t.abs().max(1.0) {
                return Err(Error::NonConvergence { what: "step size underflow in Runge-Kutta".into(), location: t });
            }
            continue;
        }
        rejected_last = false;

        let ydiff: State = std::array::from_fn(|i| y_new[i] - y[i]);
        let bspl: State = std::array::from_fn(|i| h * k1[i] - ydiff[i]);
        let step = DenseStep {
            t0: t,
            h,
            y0: y,
            y1: y_new,
            rcont: [
                y,
                ydiff,
                bspl,
                std::array::from_fn(|i| ydiff[i] - h * k7[i] - bspl[i]),
                std::array::from_fn(|i| {
                    h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i])
                }),
            ],
        };
        t += h;
        y = y_new;
        k1 = k7;
        if on_step(&step)? == Control::Stop {
            return Ok(Summary { t, y, steps, stopped: true });
        }
        h = h_next;
    }
    Ok(Summary { t, y, steps, stopped: false })
}

fn initial_step<F: Fn(&State) -> State>(f: &F, y: &State, k1: &State, opts: &OdeOptions) -> f64 {
    let sk: State = std::array::from_fn(|i| opts.atol + opts.rtol * y[i].abs());
    let norm = |v: &State| ((v[0] / sk[0]).powi(2) / 2.0 + (v[1] / sk[1]).powi(2) / 2.0).sqrt();
    let (d0, d1) = (norm(y), norm(k1));
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let y1 = axpy(y, h0, &[(1.0, k1)]);
    let k2 = f(&y1);
    let diff: State = std::array::from_fn(|i| k2[i] - k1[i]);
    let d2 = norm(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / d1.max(d2)).powf(0.2) };
    (100.0 * h0).min(h1)
}
