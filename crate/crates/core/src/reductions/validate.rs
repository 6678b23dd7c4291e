//! Two-sample comparison of a transformed source against a direct generator.
//!
//! Each draw is reduced to fixed summaries and every summary gets a
//! two-sample Kolmogorov-Smirnov test, Bonferroni-corrected at level α:
//! - `y_pooled`: all response entries pooled across draws;
//! - `top_eigenvalue`: largest eigenvalue of XᵀX/n;
//! - `corr_mean_sq`: mean of the squared CORR statistics;
//! - `corr_max_abs`: largest absolute CORR statistic.

use crate::corr::corr_statistics;
use crate::error::{Error, Result};
use crate::recovery::linalg::sym_eigen_desc;
use crate::rng;
use crate::stats::ks_two_sample;
use nalgebra::DMatrix;
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq)]
pub struct DrawSummary {
    pub y: Vec<f64>,
    pub top_eigenvalue: f64,
    pub corr_mean_sq: f64,
    pub corr_max_abs: f64,
}

pub fn summarize_draw(x: &DMatrix<f64>, y: &[f64]) -> Result<DrawSummary> {
    let (n, p) = x.shape();
    if y.len() != n {
        return Err(Error::BadDimensions(format!("X has {n} rows, y has {}", y.len())));
    }
    let gram = x.tr_mul(x) / n as f64;
    let top_eigenvalue = sym_eigen_desc(&gram)?.0[0];
    let u = corr_statistics(x, y)?;
    Ok(DrawSummary {
        y: y.to_vec(),
        top_eigenvalue,
        corr_mean_sq: u.iter().map(|v| v * v).sum::<f64>() / p as f64,
        corr_max_abs: u.iter().fold(0.0, |m, v| m.max(v.abs())),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedTest {
    pub name: &'static str,
    pub statistic: f64,
    pub p_value: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub draws: usize,
    pub alpha: f64,
    /// α divided by the number of tests.
    pub per_test_alpha: f64,
    pub tests: Vec<NamedTest>,
    pub pass: bool,
}

const ALPHA: f64 = 0.01;

fn draw_all<F>(gen: &F, n_draws: usize, seed: u64) -> Result<Vec<DrawSummary>>
where
    F: Fn(u64) -> Result<(DMatrix<f64>, Vec<f64>)> + Sync,
{
    (0..n_draws)
        .into_par_iter()
        .map(|i| {
            let (x, y) = gen(rng::derive(seed, i as u64))?;
            summarize_draw(&x, &y)
        })
        .collect()
}

/// Compares `n_draws` outputs of `transformed` against `n_draws` of `target`.
/// Both closures map a per-draw seed to a sample; the two batches use
/// independent seed streams.
pub fn validate_reduction<T, S>(target: T, transformed: S, n_draws: usize, seed: u64) -> Result<ValidationReport>
where
    T: Fn(u64) -> Result<(DMatrix<f64>, Vec<f64>)> + Sync,
    S: Fn(u64) -> Result<(DMatrix<f64>, Vec<f64>)> + Sync,
{
    if n_draws < 2 {
        return Err(Error::InvalidParams("validation needs at least two draws".into()));
    }
    let a = draw_all(&target, n_draws, rng::derive(seed, 1))?;
    let b = draw_all(&transformed, n_draws, rng::derive(seed, 2))?;
    let pooled = |s: &[DrawSummary]| s.iter().flat_map(|d| d.y.iter().copied()).collect::<Vec<f64>>();
    let field = |s: &[DrawSummary], f: fn(&DrawSummary) -> f64| s.iter().map(f).collect::<Vec<f64>>();
    let pairs: [(&'static str, Vec<f64>, Vec<f64>); 4] = [
        ("y_pooled", pooled(&a), pooled(&b)),
        ("top_eigenvalue", field(&a, |d| d.top_eigenvalue), field(&b, |d| d.top_eigenvalue)),
        ("corr_mean_sq", field(&a, |d| d.corr_mean_sq), field(&b, |d| d.corr_mean_sq)),
        ("corr_max_abs", field(&a, |d| d.corr_max_abs), field(&b, |d| d.corr_max_abs)),
    ];
    let per_test_alpha = ALPHA / pairs.len() as f64;
    let tests: Vec<NamedTest> = pairs
        .iter()
        .map(|(name, u, v)| {
            let ks = ks_two_sample(u, v);
            NamedTest { name, statistic: ks.statistic, p_value: ks.p_value, pass: ks.p_value >= per_test_alpha }
        })
        .collect();
    let pass = tests.iter().all(|t| t.pass);
    Ok(ValidationReport { draws: n_draws, alpha: ALPHA, per_test_alpha, tests, pass })
}
