use super::linalg::lstsq_min_norm;
use super::{push_flag, Flag, Pipeline, RecoveryResult};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

fn check_shapes(x: &DMatrix<f64>, y: &[f64], init: (&[f64], &[f64])) -> Result<()> {
    let (n, d) = x.shape();
    if y.len() != n || init.0.len() != d || init.1.len() != d {
        return Err(Error::DimensionMismatch(format!("X is {n}x{d}, y has {}, init has {} and {}", y.len(), init.0.len(), init.1.len())));
    }
    Ok(())
}

/// Σᵢ min_b (yᵢ − ⟨xᵢ, β_b⟩)²
pub fn am_objective(x: &DMatrix<f64>, y: &[f64], beta1: &[f64], beta2: &[f64]) -> f64 {
    let f1 = x * DVector::from_column_slice(beta1);
    let f2 = x * DVector::from_column_slice(beta2);
    y.iter().enumerate().map(|(i, yi)| (yi - f1[i]).powi(2).min((yi - f2[i]).powi(2))).sum()
}

/// One partition-then-refit round on the rows `rows` of (x, y).
fn am_round(x: &DMatrix<f64>, y: &[f64], rows: std::ops::Range<usize>, beta: (&[f64], &[f64]), flags: &mut Vec<Flag>) -> (Vec<f64>, Vec<f64>) {
    let f1 = x.rows_range(rows.clone()) * DVector::from_column_slice(beta.0);
    let f2 = x.rows_range(rows.clone()) * DVector::from_column_slice(beta.1);
    let mut j1 = Vec::new();
    let mut j2 = Vec::new();
    for (t, i) in rows.enumerate() {
        if (y[i] - f1[t]).abs() < (y[i] - f2[t]).abs() {
            j1.push(i);
        } else {
            j2.push(i);
        }
    }
    let mut refit = |idx: &[usize], prev: &[f64]| -> Vec<f64> {
        if idx.is_empty() {
            push_flag(flags, Flag::EmptyCluster);
            return prev.to_vec();
        }
        let a = x.select_rows(idx.iter());
        let b = DVector::from_iterator(idx.len(), idx.iter().map(|&i| y[i]));
        lstsq_min_norm(&a, &b).iter().copied().collect()
    };
    let b1 = refit(&j1, beta.0);
    let b2 = refit(&j2, beta.1);
    (b1, b2)
}

/// t0 rounds of alternating minimization on all samples.
pub fn am(x: &DMatrix<f64>, y: &[f64], init: (&[f64], &[f64]), t0: usize) -> Result<RecoveryResult> {
    check_shapes(x, y, init)?;
    if t0 == 0 {
        return Err(Error::InvalidParams("t0 must be >= 1".into()));
    }
    let n = x.nrows();
    let mut flags = Vec::new();
    let mut cur = (init.0.to_vec(), init.1.to_vec());
    let mut trace = vec![am_objective(x, y, &cur.0, &cur.1)];
    let mut history = Vec::with_capacity(t0);
    for _ in 0..t0 {
        cur = am_round(x, y, 0..n, (&cur.0, &cur.1), &mut flags);
        trace.push(am_objective(x, y, &cur.0, &cur.1));
        history.push(cur.clone());
    }
    Ok(RecoveryResult { beta1_hat: cur.0, beta2_hat: cur.1, rho: None, iterations: t0, pipeline: Pipeline::Am, flags, objective_trace: trace, history })
}

/// One AM round per contiguous block of rows; blocks differ in size by at most one.
pub fn am_resampled(x: &DMatrix<f64>, y: &[f64], init: (&[f64], &[f64]), t0: usize) -> Result<RecoveryResult> {
    check_shapes(x, y, init)?;
    let n = x.nrows();
    if t0 == 0 || n < t0 {
        return Err(Error::TooFewSamples { needed: t0.max(1), got: n });
    }
    let base = n / t0;
    let extra = n % t0;
    let mut flags = Vec::new();
    let mut cur = (init.0.to_vec(), init.1.to_vec());
    let mut trace = vec![am_objective(x, y, &cur.0, &cur.1)];
    let mut history = Vec::with_capacity(t0);
    let mut start = 0;
    for t in 0..t0 {
        let len = base + usize::from(t < extra);
        cur = am_round(x, y, start..start + len, (&cur.0, &cur.1), &mut flags);
        start += len;
        trace.push(am_objective(x, y, &cur.0, &cur.1));
        history.push(cur.clone());
    }
    Ok(RecoveryResult { beta1_hat: cur.0, beta2_hat: cur.1, rho: None, iterations: t0, pipeline: Pipeline::Am, flags, objective_trace: trace, history })
}
