//! Real root counting and isolation with Sturm sequences.

use super::UnivariatePolynomial;

/// Remainders smaller than this fraction of their dividend are treated as zero.
const REMAINDER_CUTOFF: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct SturmSequence {
    chain: Vec<UnivariatePolynomial>,
}

impl SturmSequence {
    pub fn new(p: &UnivariatePolynomial) -> Self {
        let mut chain = Vec::new();
        if p.is_zero() {
            return Self { chain };
        }
        chain.push(normalize(p));
        let d = p.derivative();
        if !d.is_zero() {
            chain.push(normalize(&d));
        }
        while chain.len() >= 2 {
            let a = &chain[chain.len() - 2];
            let b = &chain[chain.len() - 1];
            if b.degree() == Some(0) {
                break;
            }
            let (_, r) = a.div_rem(b);
            let scale = a.max_abs_coeff().max(b.max_abs_coeff());
            let r = chop(&r, REMAINDER_CUTOFF * scale);
            if r.is_zero() {
                break;
            }
            chain.push(normalize(&r.scale(-1.0)));
        }
        Self { chain }
    }

    fn sign_changes(&self, x: f64) -> usize {
        let mut count = 0;
        let mut last = 0.0f64;
        for p in &self.chain {
            let v = p.eval(x);
            if v == 0.0 {
                continue;
            }
            if last != 0.0 && (v > 0.0) != (last > 0.0) {
                count += 1;
            }
            last = v;
        }
        count
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count(&self, a: f64, b: f64) -> usize {
        if self.chain.is_empty() {
            return 0;
        }
        self.sign_changes(a).saturating_sub(self.sign_changes(b))
    }
}

fn normalize(p: &UnivariatePolynomial) -> UnivariatePolynomial {
    let m = p.max_abs_coeff();
    if m == 0.0 {
        p.clone()
    } else {
        p.scale(1.0 / m)
    }
}

fn chop(p: &UnivariatePolynomial, cutoff: f64) -> UnivariatePolynomial {
    UnivariatePolynomial::new(p.coeffs().iter().map(|&c| if c.abs() <= cutoff { 0.0 } else { c }).collect())
}

/// Cauchy bound: every real root satisfies `|z| <= 1 + max |c_i / c_m|`.
pub fn cauchy_bound(p: &UnivariatePolynomial) -> f64 {
    let lead = p.leading().abs();
    let d = p.degree().unwrap_or(0);
    1.0 + p.coeffs()[..d].iter().fold(0.0, |m: f64, c| m.max(c.abs() / lead))
}

/// Disjoint intervals `(lo, hi]` inside `(a, b]`, each holding exactly one distinct root.
pub fn isolate_roots(p: &UnivariatePolynomial, a: f64, b: f64) -> Vec<(f64, f64)> {
    let seq = SturmSequence::new(p);
    let mut out = Vec::new();
    let mut stack = vec![(a, b)];
    while let Some((lo, hi)) = stack.pop() {
        let n = seq.count(lo, hi);
        if n == 0 {
            continue;
        }
        if n == 1 || hi - lo <= 1e-14 * (1.0 + hi.abs()) {
            out.push((lo, hi));
            continue;
        }
        let mid = 0.5 * (lo + hi);
        stack.push((mid, hi));
        stack.push((lo, mid));
    }
    out.sort_by(|x, y| x.0.total_cmp(&y.0));
    out
}

/// Approximate location of a root isolated in `(lo, hi]`, by bisection on the Sturm count.
pub fn refine_root(p: &UnivariatePolynomial, lo: f64, hi: f64) -> f64 {
    let seq = SturmSequence::new(p);
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..200 {
        if hi - lo <= 1e-13 * (1.0 + hi.abs()) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if seq.count(lo, mid) > 0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// First real root in `[a, b]` (closed), if any.
pub fn first_root_in(p: &UnivariatePolynomial, a: f64, b: f64) -> Option<f64> {
    if p.is_zero() {
        return Some(a);
    }
    if p.eval(a) == 0.0 {
        return Some(a);
    }
    isolate_roots(p, a, b).first().map(|&(lo, hi)| refine_root(p, lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[f64]) -> UnivariatePolynomial {
        UnivariatePolynomial::new(c.to_vec())
    }

    #[test]
    fn counts_roots_of_cubic() {
        // (z - 1)(z - 2)(z + 3)
        let q = p(&[6.0, -7.0, 0.0, 1.0]);
        let s = SturmSequence::new(&q);
        assert_eq!(s.count(-10.0, 10.0), 3);
        assert_eq!(s.count(0.0, 10.0), 2);
        assert_eq!(s.count(1.5, 10.0), 1);
        assert_eq!(s.count(0.0, 1.0), 1);
    }

    #[test]
    fn no_roots_of_positive_quadratic() {
        let q = p(&[1.0, 1.0, 1.0]);
        assert_eq!(SturmSequence::new(&q).count(-100.0, 100.0), 0);
        assert_eq!(first_root_in(&q, 0.0, 1.0), None);
    }

    #[test]
    fn double_root_counted_once() {
        let q = p(&[1.0, -2.0, 1.0]);
        assert_eq!(SturmSequence::new(&q).count(0.0, 2.0), 1);
    }

    #[test]
    fn isolation_and_refinement() {
        let q = p(&[-2.0, 0.0, 1.0]);
        let iv = isolate_roots(&q, 0.0, cauchy_bound(&q));
        assert_eq!(iv.len(), 1);
        let r = refine_root(&q, iv[0].0, iv[0].1);
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
    }
}
