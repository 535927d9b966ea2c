use serde::{Deserialize, Serialize};

use crate::algebra::{Axis, BivariatePolynomial};
use crate::invariants::KolmogorovSystem;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquilibriumKind {
    FocusOrCenter,
    Node,
    Saddle,
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    pub point: (f64, f64),
    pub jacobian_trace: f64,
    pub jacobian_det: f64,
    pub discriminant: f64,
    pub kind: EquilibriumKind,
}

impl EquilibriumReport {
    fn at(sys: &KolmogorovSystem, x: f64, y: f64) -> Self {
        let [[a, b], [c, d]] = jacobian(sys, x, y);
        let trace = a + d;
        let det = a * d - b * c;
        let disc = trace * trace - 4.0 * det;
        let scale = (a.abs() + b.abs() + c.abs() + d.abs()).powi(2).max(f64::MIN_POSITIVE);
        let tiny = 1e-12 * scale;
        let kind = if det < -tiny {
            EquilibriumKind::Saddle
        } else if det.abs() <= tiny {
            EquilibriumKind::Degenerate
        } else if disc < -tiny {
            EquilibriumKind::FocusOrCenter
        } else if disc > tiny {
            EquilibriumKind::Node
        } else {
            EquilibriumKind::Degenerate
        };
        Self { point: (x, y), jacobian_trace: trace, jacobian_det: det, discriminant: disc, kind }
    }
}

/// Jacobian of `(x f, y g)` at a zero of `(f, g)`.
fn jacobian(sys: &KolmogorovSystem, x: f64, y: f64) -> [[f64; 2]; 2] {
    let (f, g) = (sys.f(), sys.g());
    let (fx, fy) = (f.partial_derivative(Axis::X), f.partial_derivative(Axis::Y));
    let (gx, gy) = (g.partial_derivative(Axis::X), g.partial_derivative(Axis::Y));
    [[x * fx.eval(x, y), x * fy.eval(x, y)], [y * gx.eval(x, y), y * gy.eval(x, y)]]
}

/// Magnitude of the terms of `p` at `(x, y)`, the natural unit of its value there.
fn term_scale(p: &BivariatePolynomial, x: f64, y: f64) -> f64 {
    p.terms().map(|(i, j, c)| (c * x.powi(i as i32) * y.powi(j as i32)).abs()).sum::<f64>().max(f64::MIN_POSITIVE)
}

/// Newton on `(f/|f|, g/|g|)(e^u, e^v) = 0`, where `|.|` is the term scale frozen at the
/// current iterate, with backtracking on the same merit. Iterates stay in the open quadrant.
fn newton_log(sys: &KolmogorovSystem, mut u: f64, mut v: f64) -> Option<(f64, f64)> {
    let (f, g) = (sys.f(), sys.g());
    let (fx, fy) = (f.partial_derivative(Axis::X), f.partial_derivative(Axis::Y));
    let (gx, gy) = (g.partial_derivative(Axis::X), g.partial_derivative(Axis::Y));
    for _ in 0..200 {
        let (x, y) = (u.exp(), v.exp());
        let (sf, sg) = (term_scale(f, x, y), term_scale(g, x, y));
        let merit = |u: f64, v: f64| {
            let (x, y) = (u.exp(), v.exp());
            (f.eval(x, y) / sf).hypot(g.eval(x, y) / sg)
        };
        let r = (f.eval(x, y) / sf, g.eval(x, y) / sg);
        let (a, b) = (x * fx.eval(x, y) / sf, y * fy.eval(x, y) / sf);
        let (c, d) = (x * gx.eval(x, y) / sg, y * gy.eval(x, y) / sg);
        let det = a * d - b * c;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let mut du = -(d * r.0 - b * r.1) / det;
        let mut dv = -(-c * r.0 + a * r.1) / det;
        let len = du.hypot(dv);
        if len > 1.0 {
            du /= len;
            dv /= len;
        }
        let m0 = r.0.hypot(r.1);
        if m0 == 0.0 {
            break;
        }
        let mut t = 1.0;
        while t > 1e-12 {
            let m = merit(u + t * du, v + t * dv);
            if m.is_finite() && m < (1.0 - 1e-4 * t) * m0 {
                break;
            }
            t *= 0.5;
        }
        if t <= 1e-12 {
            break;
        }
        u += t * du;
        v += t * dv;
        if t * du.hypot(dv) < 1e-15 * (1.0 + u.abs().max(v.abs())) {
            break;
        }
    }
    converged(sys, u, v).then(|| (u.exp(), v.exp()))
}

fn converged(sys: &KolmogorovSystem, u: f64, v: f64) -> bool {
    let (x, y) = (u.exp(), v.exp());
    let (f, g) = (sys.f(), sys.g());
    f.eval(x, y).abs() <= 1e-10 * term_scale(f, x, y) && g.eval(x, y).abs() <= 1e-10 * term_scale(g, x, y)
}

fn newton_grid(sys: &KolmogorovSystem, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
    let grid: Vec<f64> = (0..n).map(|k| lo.ln() + k as f64 * (hi / lo).ln() / (n - 1) as f64).collect();
    let mut found: Vec<(f64, f64)> = Vec::new();
    for &u in &grid {
        for &v in &grid {
            if let Some(p) = newton_log(sys, u, v) {
                let dup = found.iter().any(|q| {
                    (q.0 - p.0).abs() <= 1e-7 * q.0.max(p.0) && (q.1 - p.1).abs() <= 1e-7 * q.1.max(p.1)
                });
                if !dup {
                    found.push(p);
                }
            }
        }
    }
    found
}

/// All equilibria reached from a log-uniform 5×5 grid on `[1e-2, 10]²`, sorted by `x`.
/// Newton basins in log coordinates can be thin bands, so an empty result triggers a
/// 25×25 grid on `[1e-3, 1e3]²`.
pub fn equilibria_first_quadrant(sys: &KolmogorovSystem) -> Vec<EquilibriumReport> {
    let mut found = newton_grid(sys, 1e-2, 10.0, 5);
    if found.is_empty() {
        found = newton_grid(sys, 1e-3, 1e3, 25);
    }
    found.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    found.into_iter().map(|(x, y)| EquilibriumReport::at(sys, x, y)).collect()
}

/// The equilibrium in the open first quadrant; the smallest in `x` if several are found.
pub fn equilibrium_first_quadrant(sys: &KolmogorovSystem) -> Result<EquilibriumReport> {
    equilibria_first_quadrant(sys)
        .into_iter()
        .next()
        .ok_or_else(|| Error::NotFound("no Newton start converged to an equilibrium in the open first quadrant".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lotka_volterra_center() {
        // x' = x(1 - y), y' = y(-1 + x)
        let sys = KolmogorovSystem::from_terms(1, &[(0, 0, 1.0), (0, 1, -1.0)], &[(0, 0, -1.0), (1, 0, 1.0)]).unwrap();
        let e = equilibrium_first_quadrant(&sys).unwrap();
        assert!((e.point.0 - 1.0).abs() < 1e-13 && (e.point.1 - 1.0).abs() < 1e-13);
        assert_eq!(e.kind, EquilibriumKind::FocusOrCenter);
        assert!(e.jacobian_trace.abs() < 1e-13);
        assert!((e.jacobian_det - 1.0).abs() < 1e-13);
    }

    #[test]
    fn competitive_saddle_and_none() {
        // coexistence point (2/3, 2/3) of a competitive system
        let sys = KolmogorovSystem::from_terms(1, &[(0, 0, 2.0), (1, 0, -1.0), (0, 1, -2.0)], &[(0, 0, 2.0), (1, 0, -2.0), (0, 1, -1.0)])
            .unwrap();
        let e = equilibrium_first_quadrant(&sys).unwrap();
        assert_eq!(e.kind, EquilibriumKind::Saddle);
        let none = KolmogorovSystem::from_terms(1, &[(0, 0, 1.0), (1, 0, 1.0)], &[(0, 0, -1.0)]).unwrap();
        assert!(equilibrium_first_quadrant(&none).is_err());
    }
}
