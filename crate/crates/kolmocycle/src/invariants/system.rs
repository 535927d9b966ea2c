use serde::{Deserialize, Serialize};

use crate::algebra::BivariatePolynomial;
use crate::{Error, Result};

/// Planar system `x' = x f(x, y)`, `y' = y g(x, y)` with `deg f, deg g <= n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KolmogorovSystem {
    f: BivariatePolynomial,
    g: BivariatePolynomial,
    n: u32,
}

impl KolmogorovSystem {
    pub fn new(f: BivariatePolynomial, g: BivariatePolynomial, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Degree("system degree must be at least 1".into()));
        }
        let f = f.with_degree(n)?;
        let g = g.with_degree(n)?;
        Ok(Self { f, g, n })
    }

    /// From `(i, j, c)` coefficient triples.
    pub fn from_terms(n: u32, f: &[(u32, u32, f64)], g: &[(u32, u32, f64)]) -> Result<Self> {
        Self::new(BivariatePolynomial::from_terms(n, f)?, BivariatePolynomial::from_terms(n, g)?, n)
    }

    pub fn f(&self) -> &BivariatePolynomial {
        &self.f
    }

    pub fn g(&self) -> &BivariatePolynomial {
        &self.g
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn f_top(&self) -> BivariatePolynomial {
        self.f.homogeneous_part(self.n).expect("n is the declared degree")
    }

    pub fn g_top(&self) -> BivariatePolynomial {
        self.g.homogeneous_part(self.n).expect("n is the declared degree")
    }

    /// The vector field `(x f, y g)`.
    pub fn field(&self, x: f64, y: f64) -> (f64, f64) {
        (x * self.f.eval(x, y), y * self.g.eval(x, y))
    }
}
