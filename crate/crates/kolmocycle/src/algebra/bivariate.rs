use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::UnivariatePolynomial;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
}

/// Poincaré charts at infinity.
///
/// `U1`: `x1 = y/x`, `x2 = 1/x`. `U2`: `x1 = 1/y`, `x2 = x/y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chart {
    U1,
    U2,
}

/// Sparse real polynomial in `x`, `y` with a declared total degree bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BivariatePolynomial {
    coeffs: BTreeMap<(u32, u32), f64>,
    degree: u32,
}

impl BivariatePolynomial {
    pub fn zero(degree: u32) -> Self {
        Self { coeffs: BTreeMap::new(), degree }
    }

    pub fn constant(c: f64, degree: u32) -> Self {
        let mut p = Self::zero(degree);
        p.insert(0, 0, c);
        p
    }

    /// Builds from `(i, j, c)` triples meaning `c x^i y^j`; repeated exponents accumulate.
    pub fn from_terms(degree: u32, terms: &[(u32, u32, f64)]) -> Result<Self> {
        let mut p = Self::zero(degree);
        for &(i, j, c) in terms {
            if i + j > degree {
                return Err(Error::Degree(format!("term x^{i} y^{j} exceeds declared degree {degree}")));
            }
            if !c.is_finite() {
                return Err(Error::Domain(format!("coefficient of x^{i} y^{j} is not finite")));
            }
            p.insert(i, j, c);
        }
        Ok(p)
    }

    fn insert(&mut self, i: u32, j: u32, c: f64) {
        let v = self.coeffs.entry((i, j)).or_insert(0.0);
        *v += c;
        if *v == 0.0 {
            self.coeffs.remove(&(i, j));
        }
    }

    pub fn declared_degree(&self) -> u32 {
        self.degree
    }

    /// Actual total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|&(i, j)| i + j).max()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> f64 {
        self.coeffs.get(&(i, j)).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, f64)> + '_ {
        self.coeffs.iter().map(|(&(i, j), &c)| (i, j, c))
    }

    pub fn with_degree(mut self, degree: u32) -> Result<Self> {
        if let Some(d) = self.total_degree() {
            if d > degree {
                return Err(Error::Degree(format!("cannot lower declared degree to {degree} below actual degree {d}")));
            }
        }
        self.degree = degree;
        Ok(self)
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        DenseBivariate::from(self).eval(x, y)
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = Self::zero(self.degree);
        for (i, j, c) in self.terms() {
            out.insert(i, j, s * c);
        }
        out
    }

    pub fn homogeneous_part(&self, k: u32) -> Result<Self> {
        if k > self.degree {
            return Err(Error::Degree(format!("homogeneous degree {k} exceeds declared degree {}", self.degree)));
        }
        let mut out = Self::zero(self.degree);
        for (i, j, c) in self.terms().filter(|&(i, j, _)| i + j == k) {
            out.insert(i, j, c);
        }
        Ok(out)
    }

    pub fn partial_derivative(&self, axis: Axis) -> Self {
        let mut out = Self::zero(self.degree);
        for (i, j, c) in self.terms() {
            match axis {
                Axis::X if i > 0 => out.insert(i - 1, j, c * i as f64),
                Axis::Y if j > 0 => out.insert(i, j - 1, c * j as f64),
                _ => {}
            }
        }
        out
    }

    /// `p(z, 0)` for `Axis::X`, `p(0, z)` for `Axis::Y`.
    pub fn axis_restrict(&self, axis: Axis) -> UnivariatePolynomial {
        let mut c = vec![0.0; self.degree as usize + 1];
        for (i, j, v) in self.terms() {
            match axis {
                Axis::X if j == 0 => c[i as usize] += v,
                Axis::Y if i == 0 => c[j as usize] += v,
                _ => {}
            }
        }
        UnivariatePolynomial::new(c)
    }

    /// `z^m p(1/z, 0)` (or `z^m p(0, 1/z)`) as an ordinary polynomial in `z`.
    pub fn axis_restrict_reversed(&self, axis: Axis, m: u32) -> Result<UnivariatePolynomial> {
        let r = self.axis_restrict(axis);
        match r.degree() {
            Some(d) if d > m as usize => {
                Err(Error::Degree(format!("reversal order {m} below restriction degree {d}")))
            }
            _ => {
                let mut c = vec![0.0; m as usize + 1];
                for (i, &v) in r.coeffs().iter().enumerate() {
                    c[m as usize - i] = v;
                }
                Ok(UnivariatePolynomial::new(c))
            }
        }
    }

    /// `p(x0, z)` as a polynomial in `z`.
    pub fn substitute_x(&self, x0: f64) -> UnivariatePolynomial {
        let mut c = vec![0.0; self.degree as usize + 1];
        for (i, j, v) in self.terms() {
            c[j as usize] += v * x0.powi(i as i32);
        }
        UnivariatePolynomial::new(c)
    }

    /// `p(z, y0)` as a polynomial in `z`.
    pub fn substitute_y(&self, y0: f64) -> UnivariatePolynomial {
        let mut c = vec![0.0; self.degree as usize + 1];
        for (i, j, v) in self.terms() {
            c[i as usize] += v * y0.powi(j as i32);
        }
        UnivariatePolynomial::new(c)
    }

    /// Exchanges the roles of `x` and `y`.
    pub fn swap_variables(&self) -> Self {
        let mut out = Self::zero(self.degree);
        for (i, j, c) in self.terms() {
            out.insert(j, i, c);
        }
        out
    }

    /// Rewrites `p` in a chart at infinity, multiplied by `x2^n` (U1) or `x1^n` (U2).
    pub fn chart_transform(&self, chart: Chart, n: u32) -> Result<Self> {
        if n < self.degree {
            return Err(Error::Degree(format!("chart degree {n} below declared degree {}", self.degree)));
        }
        let mut out = Self::zero(n);
        for (i, j, c) in self.terms() {
            let rest = n - i - j;
            match chart {
                Chart::U1 => out.insert(j, rest, c),
                Chart::U2 => out.insert(rest, i, c),
            }
        }
        Ok(out)
    }

    fn combine(&self, other: &Self, sign: f64) -> Self {
        let mut out = Self::zero(self.degree.max(other.degree));
        for (i, j, c) in self.terms() {
            out.insert(i, j, c);
        }
        for (i, j, c) in other.terms() {
            out.insert(i, j, sign * c);
        }
        out
    }
}

impl Add for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn add(self, rhs: Self) -> BivariatePolynomial {
        self.combine(rhs, 1.0)
    }
}

impl Sub for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn sub(self, rhs: Self) -> BivariatePolynomial {
        self.combine(rhs, -1.0)
    }
}

impl Neg for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn neg(self) -> BivariatePolynomial {
        self.scale(-1.0)
    }
}

impl Mul for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn mul(self, rhs: Self) -> BivariatePolynomial {
        let mut out = BivariatePolynomial::zero(self.degree + rhs.degree);
        for (i, j, c) in self.terms() {
            for (k, l, d) in rhs.terms() {
                out.insert(i + k, j + l, c * d);
            }
        }
        out
    }
}

/// Dense coefficient table for repeated evaluation in inner loops.
///
/// Evaluation is Horner in `y` inside Horner in `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseBivariate {
    rows: Vec<Vec<f64>>,
}

impl From<&BivariatePolynomial> for DenseBivariate {
    fn from(p: &BivariatePolynomial) -> Self {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (i, j, c) in p.terms() {
            let (i, j) = (i as usize, j as usize);
            if rows.len() <= i {
                rows.resize(i + 1, Vec::new());
            }
            if rows[i].len() <= j {
                rows[i].resize(j + 1, 0.0);
            }
            rows[i][j] = c;
        }
        Self { rows }
    }
}

impl DenseBivariate {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.rows.iter().rev().fold(0.0, |acc, row| {
            acc * x + row.iter().rev().fold(0.0, |r, &c| r * y + c)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(d: u32, t: &[(u32, u32, f64)]) -> BivariatePolynomial {
        BivariatePolynomial::from_terms(d, t).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(poly(2, &[(2, 0, 1.0), (1, 1, 2.0)]).eval(1.0, 1.0), 3.0);
        assert_eq!(BivariatePolynomial::zero(3).eval(0.3, -2.0), 0.0);
    }

    #[test]
    fn canonical_form_drops_cancelled_terms() {
        let p = poly(2, &[(1, 1, 2.0), (1, 1, -2.0), (0, 0, 1.0)]);
        assert_eq!(p.terms().count(), 1);
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn rejects_terms_above_degree() {
        assert!(matches!(BivariatePolynomial::from_terms(1, &[(1, 1, 1.0)]), Err(Error::Degree(_))));
    }

    #[test]
    fn homogeneous_parts() {
        let a = 0.7;
        let p = poly(2, &[(0, 0, 1.0), (1, 0, 1.0), (2, 0, 1.0), (1, 1, a), (0, 2, -2.0)]);
        assert_eq!(p.homogeneous_part(2).unwrap(), poly(2, &[(2, 0, 1.0), (1, 1, a), (0, 2, -2.0)]));
        assert_eq!(poly(0, &[(0, 0, 1.0)]).homogeneous_part(0).unwrap(), poly(0, &[(0, 0, 1.0)]));
        assert_eq!(poly(2, &[(1, 0, 1.0), (0, 2, 1.0)]).homogeneous_part(1).unwrap(), poly(2, &[(1, 0, 1.0)]));
        assert!(p.homogeneous_part(3).is_err());
    }

    #[test]
    fn derivatives() {
        let p = poly(3, &[(2, 1, 1.0)]);
        assert_eq!(p.partial_derivative(Axis::Y), poly(3, &[(2, 0, 1.0)]));
        assert!(poly(3, &[(0, 0, 4.0)]).partial_derivative(Axis::X).is_zero());
        // g = -1 - y + q x^2 + a x y - y^2 with a = 0
        let g = poly(2, &[(0, 0, -1.0), (0, 1, -1.0), (2, 0, 2.0), (0, 2, -1.0)]);
        assert_eq!(g.partial_derivative(Axis::Y).eval(1.0, 0.0), -1.0);
    }

    #[test]
    fn reversal() {
        let p = poly(2, &[(0, 0, 1.0), (1, 0, 1.0), (2, 0, 1.0)]);
        assert_eq!(p.axis_restrict_reversed(Axis::X, 2).unwrap().coeffs(), &[1.0, 1.0, 1.0]);
        let c = 0.3;
        let q = poly(2, &[(0, 0, c), (2, 0, 1.0)]);
        assert_eq!(q.axis_restrict_reversed(Axis::X, 2).unwrap().coeffs(), &[1.0, 0.0, c]);
        let r = q.axis_restrict_reversed(Axis::X, 3).unwrap();
        assert!((r.eval(2.0) - 8.0 * q.eval(0.5, 0.0)).abs() < 1e-15);
        assert!(q.axis_restrict_reversed(Axis::X, 1).is_err());
    }

    #[test]
    fn charts() {
        let x2 = poly(2, &[(2, 0, 1.0)]).chart_transform(Chart::U1, 2).unwrap();
        assert_eq!(x2, poly(2, &[(0, 0, 1.0)]));
        let y2 = poly(2, &[(0, 2, 1.0)]).chart_transform(Chart::U1, 2).unwrap();
        assert_eq!(y2, poly(2, &[(2, 0, 1.0)]));
        let one = poly(2, &[(0, 0, 1.0)]).chart_transform(Chart::U1, 2).unwrap();
        assert_eq!(one, poly(2, &[(0, 2, 1.0)]));
        assert!(poly(3, &[(3, 0, 1.0)]).chart_transform(Chart::U2, 2).is_err());
    }

    #[test]
    fn chart_u2_identity() {
        let p = poly(3, &[(0, 0, 1.5), (1, 2, -0.5), (3, 0, 2.0), (0, 1, 0.25)]);
        let t = p.chart_transform(Chart::U2, 3).unwrap();
        let (x, y) = (0.7, 1.9);
        let lhs = t.eval(1.0 / y, x / y);
        assert!((lhs - y.powi(-3) * p.eval(x, y)).abs() < 1e-14);
    }
}
