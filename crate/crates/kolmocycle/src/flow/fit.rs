use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::polycycle::DisplacementSample;
use crate::corner::compensator;
use crate::invariants::HyperbolicityRatios;
use crate::{Error, Result};

/// `s^(-1/λ3) 𝒟(s) ≈ b1 ω(s; α) + b2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrincipalPartFit {
    pub alpha: f64,
    pub b1: f64,
    pub b2: f64,
    pub residual: f64,
}

/// Least-squares solution and RMS misfit; fails when the column space is numerically deficient.
pub fn least_squares(columns: &[Vec<f64>], rhs: &[f64]) -> Result<(Vec<f64>, f64)> {
    let m = rhs.len();
    let n = columns.len();
    if n == 0 || m < n || columns.iter().any(|c| c.len() != m) {
        return Err(Error::IllConditioned(format!("{m} samples for {n} unknowns")));
    }
    // Columns are scaled to unit norm so the conditioning test ignores units.
    let norms: Vec<f64> = columns.iter().map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt()).collect();
    if norms.iter().any(|&v| v == 0.0 || !v.is_finite()) {
        return Err(Error::IllConditioned("a regression column vanishes".into()));
    }
    let a = DMatrix::from_fn(m, n, |i, j| columns[j][i] / norms[j]);
    let b = DVector::from_column_slice(rhs);
    let svd = a.clone().svd(true, true);
    let (smax, smin) = (svd.singular_values.max(), svd.singular_values.min());
    if !(smin > 1e-10 * smax) {
        return Err(Error::IllConditioned(format!("singular value ratio {:.3e}", smin / smax)));
    }
    let x = svd.solve(&b, 0.0).map_err(|e| Error::IllConditioned(e.to_string()))?;
    let r = &a * &x - &b;
    let rms = (r.norm_squared() / m as f64).sqrt();
    Ok(((0..n).map(|j| x[j] / norms[j]).collect(), rms))
}

/// `s^(-1/λ3) 𝒟(s)`, evaluated from the logarithmic halves so tiny `s` stays representable.
pub fn scaled_displacement(sample: &DisplacementSample, lambda3: f64) -> f64 {
    (sample.ln_d3 - sample.ln_s / lambda3).exp() * sample.log_ratio.exp_m1()
}

pub fn fit_principal_part(samples: &[DisplacementSample], lambdas: HyperbolicityRatios) -> Result<PrincipalPartFit> {
    if samples.len() < 8 {
        return Err(Error::IllConditioned(format!("{} samples, at least 8 needed", samples.len())));
    }
    let (lo, hi) = samples.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), s| (a.min(s.ln_s), b.max(s.ln_s)));
    if hi - lo < 2.0 * std::f64::consts::LN_10 {
        return Err(Error::IllConditioned("samples span less than two decades".into()));
    }
    let alpha = 1.0 / lambdas.lambda3 - lambdas.lambda1 * lambdas.lambda2;
    let omega: Vec<f64> = samples.iter().map(|s| log_compensator(s.ln_s, alpha)).collect();
    let y: Vec<f64> = samples.iter().map(|s| scaled_displacement(s, lambdas.lambda3)).collect();
    let ones = vec![1.0; samples.len()];
    let (c, residual) = least_squares(&[omega, ones], &y)?;
    Ok(PrincipalPartFit { alpha, b1: c[0], b2: c[1], residual })
}

/// `ω(s; α)` from `ln s`, matching `compensator` where `s` is representable.
fn log_compensator(ln_s: f64, alpha: f64) -> f64 {
    let s = ln_s.exp();
    if s > 0.0 {
        if let Ok(v) = compensator(s, alpha) {
            return v;
        }
    }
    let t = -alpha * ln_s;
    if t.abs() < 1e-8 {
        -ln_s * (1.0 + 0.5 * t)
    } else {
        t.exp_m1() / alpha
    }
}

/// Correction column `s^exponent (ln s)^log_power` in a log-log regression.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correction {
    pub exponent: f64,
    pub log_power: u32,
}

impl Correction {
    pub fn power(exponent: f64) -> Self {
        Self { exponent, log_power: 0 }
    }

    fn column(&self, ln_s: f64) -> f64 {
        (self.exponent * ln_s).exp() * ln_s.powi(self.log_power as i32)
    }
}

/// Relative corrections `s^(i + jλ)` of a Dulac map `s^λ (Δ0 + ...)` up to `max_exponent`.
/// Exponents closer than `merge` collapse into one power with a logarithmic partner, the
/// resonant form of the expansion.
pub fn dulac_corrections(lambda: f64, max_exponent: f64, merge: f64) -> Vec<Correction> {
    let mut exps = Vec::new();
    for i in 0..=max_exponent.floor() as i32 {
        for j in 0.. {
            let e = i as f64 + j as f64 * lambda;
            if e > max_exponent {
                break;
            }
            if i + j > 0 {
                exps.push(e);
            }
        }
    }
    exps.sort_by(f64::total_cmp);
    let mut out: Vec<Correction> = Vec::new();
    let mut k = 0;
    while k < exps.len() {
        let e = exps[k];
        let mut m = k + 1;
        while m < exps.len() && exps[m] - e < merge {
            m += 1;
        }
        out.push(Correction::power(e));
        if m - k > 1 {
            out.push(Correction { exponent: e, log_power: 1 });
        }
        k = m;
    }
    out
}

/// Slope of `ln|v|` against `ln s` with extra columns absorbing known corrections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub corrections: Vec<f64>,
    pub residual: f64,
}

pub fn fit_log_slope(ln_s: &[f64], ln_abs: &[f64], corrections: &[Correction]) -> Result<SlopeFit> {
    let mut cols = vec![ln_s.to_vec(), vec![1.0; ln_s.len()]];
    for c in corrections {
        cols.push(ln_s.iter().map(|&l| c.column(l)).collect());
    }
    let (c, residual) = least_squares(&cols, ln_abs)?;
    Ok(SlopeFit { slope: c[0], intercept: c[1], corrections: c[2..].to_vec(), residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(b1: f64, b2: f64, lam: HyperbolicityRatios) -> Vec<DisplacementSample> {
        let alpha = 1.0 / lam.lambda3 - lam.lambda1 * lam.lambda2;
        (0..12)
            .map(|k| {
                let ln_s = (1e-4f64).ln() + k as f64 * (1e3f64).ln() / 11.0;
                let s = ln_s.exp();
                let value = s.powf(1.0 / lam.lambda3) * (b1 * compensator(s, alpha).unwrap() + b2);
                let d3 = 0.7 * s.powf(1.0 / lam.lambda3);
                DisplacementSample {
                    s,
                    ln_s,
                    value,
                    est_error: 0.0,
                    ln_d3: d3.ln(),
                    log_ratio: ((d3 + value) / d3).ln(),
                }
            })
            .collect()
    }

    #[test]
    fn recovers_synthetic_model() {
        let lam = HyperbolicityRatios { lambda1: 0.5, lambda2: 1.3, lambda3: 1.25 };
        let fit = fit_principal_part(&synthetic(0.031, -0.012, lam), lam).unwrap();
        assert!((fit.b1 - 0.031).abs() < 1e-8, "{fit:?}");
        assert!((fit.b2 + 0.012).abs() < 1e-8, "{fit:?}");
        assert!(fit.residual < 1e-10);
    }

    #[test]
    fn constant_compensator_is_rejected() {
        let cols = vec![vec![2.0; 10], vec![1.0; 10]];
        assert!(matches!(least_squares(&cols, &[0.0; 10]), Err(Error::IllConditioned(_))));
    }

    #[test]
    fn slope_with_correction() {
        let ln_s: Vec<f64> = (0..30).map(|k| -9.0 + 0.17 * k as f64).collect();
        let y: Vec<f64> = ln_s.iter().map(|l| (0.8 * l).exp() * (2.0 + 0.5 * (0.3 * l).exp())).map(f64::ln).collect();
        let fit = fit_log_slope(&ln_s, &y, &[Correction::power(0.3), Correction::power(0.6)]).unwrap();
        assert!((fit.slope - 0.8).abs() < 1e-3, "{fit:?}");
    }

    #[test]
    fn corrections_merge_near_resonance() {
        let c = dulac_corrections(0.98, 1.5, 0.05);
        assert_eq!(c, vec![Correction::power(0.98), Correction { exponent: 0.98, log_power: 1 }]);
        let c = dulac_corrections(0.4, 1.0, 0.05);
        let e: Vec<f64> = c.iter().map(|c| c.exponent).collect();
        assert_eq!(e.len(), 3);
        assert!((e[0] - 0.4).abs() < 1e-15 && (e[1] - 0.8).abs() < 1e-15 && e[2] == 1.0);
    }
}
