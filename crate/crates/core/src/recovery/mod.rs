//! Signal recovery: error metric, AM, spectral initialization, the convex
//! program for balanced mixtures, and the end-to-end pipelines.

mod am;
mod convex;
pub mod linalg;
mod pipeline;
mod spectral;

pub use am::{am, am_objective, am_resampled};
pub use convex::{convex_balanced, default_lambda, ConvexOptions};
pub use pipeline::{recover_balanced, recover_noiseless, Proportions};
pub use spectral::{spectral_init, SpectralInit, SpectralMoments};

use crate::error::{Error, Result};
use crate::model::SignalPair;
use nalgebra::{DMatrix, DVector};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pipeline {
    Am,
    Convex,
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pipeline::Am => "AM",
            Pipeline::Convex => "CONVEX",
        })
    }
}

/// Non-fatal conditions met along the way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flag {
    EmptyCluster,
    ClampedDelta,
    DegenerateInit,
    NonConvergence,
    NegativeTopEigenvalue,
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flag::EmptyCluster => "EmptyCluster",
            Flag::ClampedDelta => "ClampedDelta",
            Flag::DegenerateInit => "DegenerateInit",
            Flag::NonConvergence => "NonConvergence",
            Flag::NegativeTopEigenvalue => "NegativeTopEigenvalue",
        })
    }
}

pub(crate) fn push_flag(flags: &mut Vec<Flag>, f: Flag) {
    if !flags.contains(&f) {
        flags.push(f);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryResult {
    pub beta1_hat: Vec<f64>,
    pub beta2_hat: Vec<f64>,
    /// Set by [`RecoveryResult::with_truth`].
    pub rho: Option<f64>,
    pub iterations: usize,
    pub pipeline: Pipeline,
    pub flags: Vec<Flag>,
    /// Objective after initialization and after every round or step.
    pub objective_trace: Vec<f64>,
    /// Estimates after every AM round or stage (empty for the convex program).
    pub history: Vec<(Vec<f64>, Vec<f64>)>,
}

impl RecoveryResult {
    pub fn with_truth(mut self, truth: &SignalPair) -> Result<Self> {
        self.rho = Some(rho_error((&self.beta1_hat, &self.beta2_hat), (&truth.beta1, &truth.beta2))?);
        Ok(self)
    }

    /// ρ below `rel_tol`·(‖β₁‖+‖β₂‖), the floating-point reading of ρ = 0.
    pub fn exact_recovery(&self, truth: &SignalPair, rel_tol: f64) -> bool {
        match rho_error((&self.beta1_hat, &self.beta2_hat), (&truth.beta1, &truth.beta2)) {
            Ok(r) => r <= rel_tol * (2.0 * truth.norm).max(1.0),
            Err(_) => false,
        }
    }
}

/// Tolerance used for "ρ = 0" throughout.
pub const EXACT_RHO_TOL: f64 = 1e-8;

/// min over the two labelings of ‖β̂₁ − β₁‖ + ‖β̂₂ − β₂‖.
pub fn rho_error(est: (&[f64], &[f64]), truth: (&[f64], &[f64])) -> Result<f64> {
    let p = est.0.len();
    if est.1.len() != p || truth.0.len() != p || truth.1.len() != p {
        return Err(Error::DimensionMismatch("rho_error needs four vectors of equal length".into()));
    }
    let dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    let straight = dist(est.0, truth.0) + dist(est.1, truth.1);
    let swapped = dist(est.0, truth.1) + dist(est.1, truth.0);
    Ok(straight.min(swapped))
}

/// Columns of `x` at the sorted, deduplicated `s`, plus the map back to ambient indices.
pub fn restrict_support(x: &DMatrix<f64>, s: &[usize]) -> Result<(DMatrix<f64>, Vec<usize>)> {
    let p = x.ncols();
    let mut idx = s.to_vec();
    idx.sort_unstable();
    idx.dedup();
    if let Some(&bad) = idx.iter().find(|&&j| j >= p) {
        return Err(Error::IndexOutOfRange { index: bad, dim: p });
    }
    Ok((x.select_columns(idx.iter()), idx))
}

/// Places a restricted vector back into dimension p.
pub fn embed(v: &[f64], map: &[usize], p: usize) -> Vec<f64> {
    let mut out = vec![0.0; p];
    for (val, &j) in v.iter().zip(map) {
        out[j] = *val;
    }
    out
}

/// Scaling applied to ⟨x_i, β̂⟩ before comparing with y_i.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZModel {
    /// Detection normalization: compare y with (1/σ)⟨x, β̂⟩.
    Detection,
    /// Recovery model: compare y with ⟨x, β̂⟩.
    Raw,
}

/// ẑ_i = 1 iff the β̂₁ residual is strictly smaller; ties give 0.
pub fn estimate_z(x: &DMatrix<f64>, y: &[f64], beta1_hat: &[f64], beta2_hat: &[f64], sigma: f64, model: ZModel) -> Result<Vec<u8>> {
    let (n, p) = x.shape();
    if y.len() != n || beta1_hat.len() != p || beta2_hat.len() != p {
        return Err(Error::DimensionMismatch("estimate_z shapes disagree".into()));
    }
    let scale = match model {
        ZModel::Detection => {
            if sigma == 0.0 {
                return Err(Error::ZeroNoise);
            }
            1.0 / sigma
        }
        ZModel::Raw => 1.0,
    };
    let f1 = x * DVector::from_column_slice(beta1_hat);
    let f2 = x * DVector::from_column_slice(beta2_hat);
    Ok((0..n).map(|i| u8::from((y[i] - scale * f1[i]).abs() < (y[i] - scale * f2[i]).abs())).collect())
}
