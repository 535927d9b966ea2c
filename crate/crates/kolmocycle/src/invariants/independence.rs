use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{d1, d2, d3, CheckedSystem, KolmogorovSystem};
use crate::{Result, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TestFunction {
    D1,
    D2,
    D3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndependenceResult {
    /// One row per requested test function, one column per parameter.
    pub jacobian: Vec<Vec<f64>>,
    pub rank: usize,
}

const PIVOT_RELATIVE: f64 = 1e-7;

fn evaluate(sys: KolmogorovSystem, which: &[TestFunction], tol: &Tolerances) -> Result<Vec<f64>> {
    let checked = CheckedSystem::new(sys)?;
    which
        .iter()
        .map(|w| match w {
            TestFunction::D1 => Ok(d1(&checked)),
            TestFunction::D2 => d2(&checked, tol),
            TestFunction::D3 => d3(&checked, tol),
        })
        .collect()
}

/// Central-difference gradients of the requested test functions and their rank.
///
/// Full gradient rank is a sufficient condition for independence, not a characterization.
/// Rows whose norm is below the finite-difference noise floor count as zero.
pub fn independence_jacobian<F>(
    family: F,
    mu0: &[f64],
    which: &[TestFunction],
    tol: &Tolerances,
) -> Result<IndependenceResult>
where
    F: Fn(&[f64]) -> Result<KolmogorovSystem> + Sync,
{
    let steps: Vec<f64> = mu0.iter().map(|m| 1e-5 * m.abs().max(1.0)).collect();
    let stencil: Vec<(usize, f64)> = (0..mu0.len()).flat_map(|i| [(i, 1.0), (i, -1.0)]).collect();
    let values: Vec<Vec<f64>> = stencil
        .par_iter()
        .map(|&(i, sign)| {
            let mut mu = mu0.to_vec();
            mu[i] += sign * steps[i];
            evaluate(family(&mu)?, which, tol)
        })
        .collect::<Result<_>>()?;
    let jacobian: Vec<Vec<f64>> = (0..which.len())
        .map(|r| (0..mu0.len()).map(|i| (values[2 * i][r] - values[2 * i + 1][r]) / (2.0 * steps[i])).collect())
        .collect();
    let h_min = steps.iter().cloned().fold(f64::INFINITY, f64::min);
    let noise = 100.0 * tol.quad.max(f64::EPSILON) / h_min;
    Ok(IndependenceResult { rank: numerical_rank(&jacobian, noise), jacobian })
}

/// Rank by Gaussian elimination with partial pivoting; pivots below
/// `1e-7 · (largest row norm)` or below `floor` are zero.
pub fn numerical_rank(rows: &[Vec<f64>], floor: f64) -> usize {
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    let norm = |r: &Vec<f64>| r.iter().map(|v| v * v).sum::<f64>().sqrt();
    let largest = m.iter().map(norm).fold(0.0, f64::max);
    let threshold = (PIVOT_RELATIVE * largest).max(floor);
    if largest <= floor {
        return 0;
    }
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        if rank == m.len() {
            break;
        }
        let pivot = (rank..m.len()).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs())).unwrap();
        if m[pivot][c].abs() <= threshold {
            continue;
        }
        m.swap(rank, pivot);
        for r in rank + 1..m.len() {
            let factor = m[r][c] / m[rank][c];
            for k in c..cols {
                m[r][k] -= factor * m[rank][k];
            }
        }
        rank += 1;
    }
    rank
}
