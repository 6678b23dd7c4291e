//! Detection through a recovery algorithm, and the ψ statistic that makes the
//! null side of that test work.

use crate::error::{Error, Result};
use crate::gen::Hypothesis;
use crate::recovery::{estimate_z, ZModel};
use nalgebra::{DMatrix, DVector};

/// Residual statistic at or below √5 declares planted.
pub const DETECTION_THRESHOLD: f64 = 2.236_067_977_499_79;

/// Pair evaluations allowed in [`psi_statistic`] by default.
pub const PSI_DEFAULT_BUDGET: u64 = 1_000_000;

/// Candidate signals held in memory at once.
const MAX_CANDIDATES: usize = 1 << 16;

/// n^{−1/2}‖y − (1/σ)Xβ̂₁⊙ẑ − (1/σ)Xβ̂₂⊙(1−ẑ)‖ with ẑ from the detection-normalized labeling.
pub fn detection_statistic(x: &DMatrix<f64>, y: &[f64], beta1: &[f64], beta2: &[f64], sigma: f64) -> Result<f64> {
    let z = estimate_z(x, y, beta1, beta2, sigma, ZModel::Detection)?;
    let f1 = x * DVector::from_column_slice(beta1);
    let f2 = x * DVector::from_column_slice(beta2);
    let n = y.len();
    let ss: f64 = (0..n)
        .map(|i| {
            let fit = if z[i] == 1 { f1[i] } else { f2[i] };
            (y[i] - fit / sigma).powi(2)
        })
        .sum();
    Ok((ss / n as f64).sqrt())
}

/// Runs `recovery` on (X, y) and thresholds the residual statistic at √5.
pub fn detect_via_recovery<F>(x: &DMatrix<f64>, y: &[f64], recovery: F, sigma: f64) -> Result<(Hypothesis, f64)>
where
    F: FnOnce(&DMatrix<f64>, &[f64]) -> Result<(Vec<f64>, Vec<f64>)>,
{
    if sigma == 0.0 {
        return Err(Error::ZeroNoise);
    }
    let (b1, b2) = recovery(x, y)?;
    let stat = detection_statistic(x, y, &b1, &b2, sigma)?;
    let h = if stat <= DETECTION_THRESHOLD { Hypothesis::Planted } else { Hypothesis::Null };
    Ok((h, stat))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsiResult {
    /// Minimum found; an upper bound on ψ unless `exhaustive`.
    pub value: f64,
    pub exhaustive: bool,
    /// Unordered signal pairs evaluated.
    pub evaluated: u64,
}

/// k-sparse ±1 vectors in lexicographic support order, sign patterns innermost.
fn candidates(p: usize, k: usize, limit: usize) -> (Vec<Vec<(usize, f64)>>, bool) {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        for mask in 0u64..(1u64 << k) {
            if out.len() == limit {
                return (out, false);
            }
            out.push(idx.iter().enumerate().map(|(t, &j)| (j, if mask >> t & 1 == 1 { -1.0 } else { 1.0 })).collect());
        }
        // next combination
        let mut t = k;
        while t > 0 && idx[t - 1] == p - k + t - 1 {
            t -= 1;
        }
        if t == 0 {
            return (out, true);
        }
        idx[t - 1] += 1;
        for s in t..k {
            idx[s] = idx[s - 1] + 1;
        }
    }
}

/// min over k-sparse ±1 pairs and labelings of n^{−1/2}‖σy − Xβ₁⊙z − Xβ₂⊙(1−z)‖.
///
/// For a fixed pair the best labeling picks the smaller residual per row, and
/// the pair order does not matter, so unordered pairs are enumerated.
pub fn psi_statistic(x: &DMatrix<f64>, y: &[f64], sigma: f64, k: usize, budget: u64) -> Result<PsiResult> {
    let (n, p) = x.shape();
    if y.len() != n || n == 0 {
        return Err(Error::DimensionMismatch(format!("X has {n} rows, y has {}", y.len())));
    }
    if k == 0 || k > p || k > 62 {
        return Err(Error::InvalidParams(format!("k = {k} with p = {p}")));
    }
    let (cands, complete) = candidates(p, k, MAX_CANDIDATES.min(budget.max(1) as usize));
    let resid: Vec<Vec<f64>> = cands
        .iter()
        .map(|b| (0..n).map(|i| sigma * y[i] - b.iter().map(|&(j, v)| x[(i, j)] * v).sum::<f64>()).collect())
        .collect();
    let nc = resid.len();
    let mut best = f64::INFINITY;
    let mut evaluated = 0u64;
    let mut stopped = false;
    'outer: for a in 0..nc {
        for b in a..nc {
            if evaluated == budget {
                stopped = true;
                break 'outer;
            }
            evaluated += 1;
            let ss: f64 = resid[a].iter().zip(&resid[b]).map(|(u, v)| (u * u).min(v * v)).sum();
            best = best.min(ss);
        }
    }
    Ok(PsiResult { value: (best / n as f64).sqrt(), exhaustive: complete && !stopped, evaluated })
}
