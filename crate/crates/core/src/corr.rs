//! Correlation thresholding: u_j = ⟨X_j, y⟩/‖y‖, keep |u_j| ≥ τ.
//!
//! Inner products accumulate sequentially over rows for every column, in both
//! the in-memory and the streaming paths, so the two agree bit for bit.

use crate::error::{Error, Result};
use crate::gen::{Hypothesis, RowSampler};
use nalgebra::DMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrConfig {
    pub eps: f64,
}

impl CorrConfig {
    pub fn new(eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidParams(format!("eps = {eps} must lie in (0, 1)")));
        }
        Ok(CorrConfig { eps })
    }
}

impl Default for CorrConfig {
    fn default() -> Self {
        CorrConfig { eps: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupportEstimate {
    /// Sorted; exactly {j : |u_j| ≥ threshold}.
    pub indices: Vec<usize>,
    pub statistics: Vec<f64>,
    pub threshold: f64,
}

impl SupportEstimate {
    pub fn from_statistics(statistics: Vec<f64>, threshold: f64) -> Self {
        let indices = statistics.iter().enumerate().filter(|(_, u)| u.abs() >= threshold).map(|(j, _)| j).collect();
        SupportEstimate { indices, statistics, threshold }
    }

    /// 1{|u_j| ≥ τ}·sign(u_j) with sign(0) = 0.
    pub fn signed(&self) -> Vec<i8> {
        self.statistics.iter().map(|&u| if u.abs() >= self.threshold { sign(u) } else { 0 }).collect()
    }

    pub fn detect(&self) -> Hypothesis {
        if self.indices.is_empty() {
            Hypothesis::Null
        } else {
            Hypothesis::Planted
        }
    }
}

fn sign(u: f64) -> i8 {
    if u > 0.0 {
        1
    } else if u < 0.0 {
        -1
    } else {
        0
    }
}

/// √(2(1+ε/2)·ln 2p) for a real-valued dimension.
pub fn threshold_real(p: f64, eps: f64) -> f64 {
    (2.0 * (1.0 + eps / 2.0) * (2.0 * p).ln()).sqrt()
}

pub fn corr_threshold(p: usize, config: &CorrConfig) -> f64 {
    threshold_real(p as f64, config.eps)
}

pub fn corr_statistics(x: &DMatrix<f64>, y: &[f64]) -> Result<Vec<f64>> {
    let n = x.nrows();
    if y.len() != n {
        return Err(Error::DimensionMismatch(format!("X has {n} rows, y has length {}", y.len())));
    }
    let mut yy = 0.0;
    for v in y {
        yy += v * v;
    }
    if yy == 0.0 {
        return Err(Error::ZeroResponse);
    }
    let norm = yy.sqrt();
    let data = x.as_slice();
    let u = (0..x.ncols())
        .map(|j| {
            let col = &data[j * n..(j + 1) * n];
            let mut acc = 0.0;
            for (a, b) in col.iter().zip(y) {
                acc += a * b;
            }
            acc / norm
        })
        .collect();
    Ok(u)
}

pub fn corr_support(x: &DMatrix<f64>, y: &[f64], config: &CorrConfig) -> Result<SupportEstimate> {
    let u = corr_statistics(x, y)?;
    Ok(SupportEstimate::from_statistics(u, corr_threshold(x.ncols(), config)))
}

pub fn corr_detect(x: &DMatrix<f64>, y: &[f64], config: &CorrConfig) -> Result<Hypothesis> {
    Ok(corr_support(x, y, config)?.detect())
}

pub fn corr_signed_support(x: &DMatrix<f64>, y: &[f64], config: &CorrConfig) -> Result<Vec<i8>> {
    Ok(corr_support(x, y, config)?.signed())
}

/// Row-at-a-time accumulation of Xᵀy and ‖y‖².
#[derive(Debug, Clone)]
pub struct CorrAccumulator {
    xty: Vec<f64>,
    yy: f64,
}

impl CorrAccumulator {
    pub fn new(p: usize) -> Self {
        CorrAccumulator { xty: vec![0.0; p], yy: 0.0 }
    }

    #[inline]
    pub fn push(&mut self, row: &[f64], y: f64) {
        for (acc, a) in self.xty.iter_mut().zip(row) {
            *acc += a * y;
        }
        self.yy += y * y;
    }

    pub fn statistics(&self) -> Result<Vec<f64>> {
        if self.yy == 0.0 {
            return Err(Error::ZeroResponse);
        }
        let norm = self.yy.sqrt();
        Ok(self.xty.iter().map(|v| v / norm).collect())
    }

    pub fn support(&self, config: &CorrConfig) -> Result<SupportEstimate> {
        Ok(SupportEstimate::from_statistics(self.statistics()?, corr_threshold(self.xty.len(), config)))
    }
}

/// Runs CORR on `n` streamed rows; also returns the latent labels.
pub fn corr_streaming(sampler: &mut RowSampler, n: usize, p: usize, config: &CorrConfig) -> Result<(SupportEstimate, Vec<u8>)> {
    let mut acc = CorrAccumulator::new(p);
    let mut row = vec![0.0; p];
    let mut z = Vec::with_capacity(n);
    for _ in 0..n {
        let (y, zi) = sampler.next_row(&mut row);
        acc.push(&row, y);
        z.push(zi);
    }
    Ok((acc.support(config)?, z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{sample_instance, sample_signal_pair, ResponseModel};
    use crate::model::{ModelParams, ValueSet};

    #[test]
    fn threshold_values() {
        // √(2.5 ln 2000) by direct evaluation
        let t = corr_threshold(1000, &CorrConfig::default());
        assert!((t - (2.5f64 * 2000f64.ln()).sqrt()).abs() < 1e-14);
        assert!((t - 4.35916).abs() < 1e-5);
        let e = std::f64::consts::E;
        assert!((threshold_real(e / 2.0, 1e-12) - 2f64.sqrt()).abs() < 1e-9);
        assert!(corr_threshold(2000, &CorrConfig::default()) > t);
        assert!(corr_threshold(1000, &CorrConfig::new(0.6).unwrap()) > t);
    }

    #[test]
    fn orthogonal_columns() {
        // columns: e-like vectors so y = X_1 is orthogonal to X_2, X_3
        let x = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 1.0, 1.0]);
        let y = [1.0, 2.0, 0.0];
        let u = corr_statistics(&x, &y).unwrap();
        assert!((u[0] - 5f64.sqrt()).abs() < 1e-15);
        assert_eq!(u[1], 0.0);
        assert_eq!(u[2], 0.0);
    }

    #[test]
    fn zero_response() {
        let x = DMatrix::from_element(2, 2, 1.0);
        assert_eq!(corr_statistics(&x, &[0.0, 0.0]).unwrap_err(), Error::ZeroResponse);
    }

    #[test]
    fn sign_of_zero_statistic() {
        let est = SupportEstimate::from_statistics(vec![0.0, 5.0, -5.0, 1.0], 0.0);
        assert_eq!(est.signed(), vec![0, 1, -1, 1]);
        assert_eq!(est.indices, vec![0, 1, 2, 3]);
    }

    #[test]
    fn ties_included() {
        let est = SupportEstimate::from_statistics(vec![2.0, -2.0, 1.999], 2.0);
        assert_eq!(est.indices, vec![0, 1]);
    }

    #[test]
    fn streaming_matches_matrix_bitwise() {
        let s = sample_signal_pair(40, 3, &ValueSet::pm1(), 0.5, 1.0, 3).unwrap();
        let params = ModelParams::new(40, 200, 3, 0.7, 0.3, ValueSet::pm1()).unwrap();
        let inst = sample_instance(&params, &s, 77).unwrap();
        let direct = corr_support(&inst.x, &inst.y, &CorrConfig::default()).unwrap();
        let mut sampler = RowSampler::new(&params, &s, ResponseModel::Recovery, 77).unwrap();
        let (streamed, z) = corr_streaming(&mut sampler, 200, 40, &CorrConfig::default()).unwrap();
        assert_eq!(z, inst.z);
        for (a, b) in direct.statistics.iter().zip(&streamed.statistics) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn noiseless_slr_support() {
        let p = 100;
        let mut b = vec![0.0; p];
        for j in [3, 40, 77] {
            b[j] = 1.0;
        }
        let s = crate::model::SignalPair::from_vectors(b.clone(), b).unwrap();
        let params = ModelParams::new(p, 5000, 3, 0.0, 0.5, ValueSet::p1()).unwrap();
        let inst = sample_instance(&params, &s, 5).unwrap();
        let est = corr_support(&inst.x, &inst.y, &CorrConfig::default()).unwrap();
        assert_eq!(est.indices, vec![3, 40, 77]);
    }
}
