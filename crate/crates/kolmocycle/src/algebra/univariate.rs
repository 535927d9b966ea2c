use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

/// Dense real polynomial `c0 + c1 z + ... + cm z^m` with trailing zeros stripped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnivariatePolynomial {
    coeffs: Vec<f64>,
}

impl UnivariatePolynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn eval(&self, z: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| k as f64 * c).collect())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Replaces the constant term.
    pub fn with_constant(&self, c0: f64) -> Self {
        let mut c = self.coeffs.clone();
        if c.is_empty() {
            c.push(0.0);
        }
        c[0] = c0;
        Self::new(c)
    }

    /// `p(z) / z` for a polynomial whose constant term is zero (coefficient shift).
    pub fn shift_down(&self) -> Self {
        debug_assert!(self.coeff(0) == 0.0);
        Self::new(self.coeffs.iter().skip(1).copied().collect())
    }

    /// Euclidean division, returning `(quotient, remainder)`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.leading();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![0.0; r.len() - dd];
        for k in (0..q.len()).rev() {
            let t = r[k + dd] / lead;
            q[k] = t;
            for (i, &dc) in d.coeffs.iter().enumerate() {
                r[k + i] -= t * dc;
            }
            r[k + dd] = 0.0;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    fn zip(&self, other: &Self, sign: f64) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + sign * other.coeff(k)).collect())
    }
}

impl Add for &UnivariatePolynomial {
    type Output = UnivariatePolynomial;
    fn add(self, rhs: Self) -> UnivariatePolynomial {
        self.zip(rhs, 1.0)
    }
}

impl Sub for &UnivariatePolynomial {
    type Output = UnivariatePolynomial;
    fn sub(self, rhs: Self) -> UnivariatePolynomial {
        self.zip(rhs, -1.0)
    }
}

impl Mul for &UnivariatePolynomial {
    type Output = UnivariatePolynomial;
    fn mul(self, rhs: Self) -> UnivariatePolynomial {
        if self.is_zero() || rhs.is_zero() {
            return UnivariatePolynomial::zero();
        }
        let mut c = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UnivariatePolynomial::new(c)
    }
}
