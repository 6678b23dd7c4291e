//! Padding reduction: append Gaussian columns whose coefficients are all +1,
//! fold them into the response and shuffle the columns.

use crate::error::{Error, Result};
use crate::gen::sample_signal_pair;
use crate::model::{ModelParams, SignalPair, ValueSet};
use crate::rng::{self, stream};
use nalgebra::DMatrix;
use rand::seq::SliceRandom;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PadConfig {
    /// Requested fraction in (0, 1]; the padded width is ⌊(1−c)/c · p⌋.
    pub c: f64,
    pub sigma: f64,
    pub permutation_seed: u64,
}

/// Enough to undo one padding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationRecord {
    pub original_p: usize,
    pub padded: usize,
    /// Column t of X̃ is column `perm[t]` of [V X].
    pub perm: Vec<usize>,
}

impl PermutationRecord {
    pub fn total(&self) -> usize {
        self.original_p + self.padded
    }

    /// p / (p + m), the realized version of c.
    pub fn realized_c(&self) -> f64 {
        self.original_p as f64 / self.total() as f64
    }
}

/// ⌊(1−c)/c · p⌋, with a small guard so exact products are not lost to rounding.
pub fn pad_width(c: f64, p: usize) -> Result<usize> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(Error::InvalidParams(format!("c = {c} must lie in (0, 1]")));
    }
    let w = (1.0 - c) / c * p as f64;
    Ok((w + 1e-9 * w.max(1.0)).floor() as usize)
}

/// (X̃, ỹ, record) with ỹ = y + V·1/σ and X̃ a seeded column shuffle of [V X].
pub fn pad_instance(x: &DMatrix<f64>, y: &[f64], config: &PadConfig) -> Result<(DMatrix<f64>, Vec<f64>, PermutationRecord)> {
    let (n, p) = x.shape();
    if y.len() != n || n == 0 || p == 0 {
        return Err(Error::BadDimensions(format!("X is {n}x{p}, y has {}", y.len())));
    }
    if !(config.sigma > 0.0) {
        return Err(Error::ZeroNoise);
    }
    let m = pad_width(config.c, p)?;
    let mut vrng = rng::rng(rng::derive(config.permutation_seed, stream::TRANSFORM));
    // V is drawn column by column.
    let mut v = DMatrix::<f64>::zeros(n, m);
    for j in 0..m {
        for i in 0..n {
            v[(i, j)] = rng::normal(&mut vrng);
        }
    }
    let mut perm: Vec<usize> = (0..m + p).collect();
    perm.shuffle(&mut rng::rng(rng::derive(config.permutation_seed, stream::PERMUTATION)));
    let xt = DMatrix::from_fn(n, m + p, |i, t| {
        let c = perm[t];
        if c < m {
            v[(i, c)]
        } else {
            x[(i, c - m)]
        }
    });
    let yt = (0..n).map(|i| y[i] + v.row(i).sum() / config.sigma).collect();
    Ok((xt, yt, PermutationRecord { original_p: p, padded: m, perm }))
}

fn unshuffle(b: &[f64], record: &PermutationRecord) -> Result<Vec<f64>> {
    if b.len() != record.total() {
        return Err(Error::RecordMismatch { expected: record.total(), got: b.len() });
    }
    let mut stacked = vec![0.0; b.len()];
    for (t, &c) in record.perm.iter().enumerate() {
        stacked[c] = b[t];
    }
    Ok(stacked.split_off(record.padded))
}

/// Inverse shuffle, then drop the padded coordinates.
pub fn unpad_estimates(beta1: &[f64], beta2: &[f64], record: &PermutationRecord) -> Result<(Vec<f64>, Vec<f64>)> {
    Ok((unshuffle(beta1, record)?, unshuffle(beta2, record)?))
}

/// The padded-space signal (1 on V columns, β on X columns) in shuffled order.
pub fn pad_embed(beta: &[f64], record: &PermutationRecord) -> Result<Vec<f64>> {
    if beta.len() != record.original_p {
        return Err(Error::RecordMismatch { expected: record.original_p, got: beta.len() });
    }
    let m = record.padded;
    Ok(record.perm.iter().map(|&c| if c < m { 1.0 } else { beta[c - m] }).collect())
}

/// Law of the padded output when the input is an SBMSLR detection sample:
/// a balanced ±1 pair on p + m coordinates with sparsity k + m, full overlap,
/// m agreeing and k opposing entries.
pub fn pad_target(params: &ModelParams, c: f64, seed: u64) -> Result<(ModelParams, SignalPair)> {
    let m = pad_width(c, params.p)?;
    let (p2, k2) = (params.p + m, params.k + m);
    let tau = (m as f64 - params.k as f64) / k2 as f64;
    let pair = sample_signal_pair(p2, k2, &ValueSet::pm1(), 1.0, tau, seed)?;
    let target = ModelParams::new(p2, params.n, k2, params.sigma, 0.5, ValueSet::pm1())?;
    Ok((target, pair))
}
