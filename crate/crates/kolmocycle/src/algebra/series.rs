use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::UnivariatePolynomial;
use crate::{Error, Result};

pub const DEFAULT_ORDER: usize = 16;

/// Power series `c0 + c1 u + ... + cK u^K + O(u^(K+1))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedPowerSeries {
    coeffs: Vec<f64>,
}

impl TruncatedPowerSeries {
    /// Pads or truncates `coeffs` to exactly `order + 1` entries.
    pub fn new(mut coeffs: Vec<f64>, order: usize) -> Self {
        coeffs.resize(order + 1, 0.0);
        Self { coeffs }
    }

    pub fn from_poly(p: &UnivariatePolynomial, order: usize) -> Self {
        Self::new(p.coeffs().to_vec(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::new(vec![1.0], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    /// Partial sum at `u`.
    pub fn eval(&self, u: f64) -> f64 {
        self.eval_terms(u, self.coeffs.len())
    }

    /// Partial sum of the first `terms` coefficients.
    pub fn eval_terms(&self, u: f64, terms: usize) -> f64 {
        self.coeffs[..terms.min(self.coeffs.len())].iter().rev().fold(0.0, |acc, &c| acc * u + c)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn mul(&self, b: &Self) -> Self {
        let k = self.order().min(b.order());
        let mut c = vec![0.0; k + 1];
        for (i, ci) in c.iter_mut().enumerate() {
            *ci = (0..=i).map(|j| self.coeffs[j] * b.coeffs[i - j]).sum();
        }
        Self { coeffs: c }
    }

    pub fn div(&self, b: &Self) -> Result<Self> {
        let b0 = b.coeffs[0];
        if b0 == 0.0 {
            return Err(Error::SingularDivision);
        }
        let k = self.order().min(b.order());
        let mut q = vec![0.0; k + 1];
        for i in 0..=k {
            let s: f64 = (1..=i).map(|j| b.coeffs[j] * q[i - j]).sum();
            q[i] = (self.coeffs[i] - s) / b0;
        }
        Ok(Self { coeffs: q })
    }

    /// `exp(a)` from the recurrence `(exp a)' = a' exp a`.
    pub fn exp(&self) -> Self {
        let k = self.order();
        let mut e = vec![0.0; k + 1];
        e[0] = self.coeffs[0].exp();
        for n in 1..=k {
            let s: f64 = (1..=n).map(|j| j as f64 * self.coeffs[j] * e[n - j]).sum();
            e[n] = s / n as f64;
        }
        Self { coeffs: e }
    }

    /// Series of `∫_0^u a(z)/z dz`; requires `a(0) = 0`.
    pub fn integrate_scaled(&self) -> Result<Self> {
        if self.coeffs[0] != 0.0 {
            return Err(Error::NonRemovableSingularity(self.coeffs[0]));
        }
        let c = self.coeffs.iter().enumerate().map(|(k, &c)| if k == 0 { 0.0 } else { c / k as f64 }).collect();
        Ok(Self { coeffs: c })
    }

    fn zip(&self, b: &Self, sign: f64) -> Self {
        let k = self.order().min(b.order());
        Self { coeffs: (0..=k).map(|i| self.coeffs[i] + sign * b.coeffs[i]).collect() }
    }
}

impl Add for &TruncatedPowerSeries {
    type Output = TruncatedPowerSeries;
    fn add(self, rhs: Self) -> TruncatedPowerSeries {
        self.zip(rhs, 1.0)
    }
}

impl Sub for &TruncatedPowerSeries {
    type Output = TruncatedPowerSeries;
    fn sub(self, rhs: Self) -> TruncatedPowerSeries {
        self.zip(rhs, -1.0)
    }
}

impl Neg for &TruncatedPowerSeries {
    type Output = TruncatedPowerSeries;
    fn neg(self) -> TruncatedPowerSeries {
        self.scale(-1.0)
    }
}
