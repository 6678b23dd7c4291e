//! Seeded generation of signal pairs, MSLR instances and detection samples.
//!
//! Rows are produced in a fixed draw order: the p entries of `x_i`, then one
//! uniform deciding `z_i` (`z_i = 1` iff it falls below φ), then one standard
//! normal for the noise. The order is the same for every response model, so
//! a planted and a null sample built from one seed share their design matrix.

use crate::error::{Error, Result};
use crate::model::{ModelParams, SignalPair, ValueSet};
use crate::rng::{self, Rng};
use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng as _;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hypothesis {
    Planted,
    Null,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hypothesis::Planted => "planted",
            Hypothesis::Null => "null",
        })
    }
}

impl std::str::FromStr for Hypothesis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "planted" => Ok(Hypothesis::Planted),
            "null" => Ok(Hypothesis::Null),
            other => Err(Error::Parse(format!("unknown hypothesis {other:?}"))),
        }
    }
}

/// How a row's response is assembled from `(x_i, z_i, g_i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResponseModel {
    /// y = ⟨x, β_z⟩ + σ g
    Recovery,
    /// y = ⟨x, β_z⟩ / σ + g
    Planted,
    /// y = √(‖β‖²/σ² + 1) g
    Null,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    /// n × p design.
    pub x: DMatrix<f64>,
    pub y: Vec<f64>,
    /// Latent labels in {0, 1}; 1 selects β₁.
    pub z: Vec<u8>,
    pub params: ModelParams,
    pub signals: SignalPair,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionSample {
    pub x: DMatrix<f64>,
    pub y: Vec<f64>,
    pub hypothesis: Hypothesis,
    pub params: ModelParams,
    pub seed: u64,
    /// Ground truth kept for evaluation only; detectors never read it.
    pub signals: SignalPair,
    pub latent_z: Vec<u8>,
}

/// Draws a signal pair with |S₁∩S₂| = round(ξk) and signed overlap as close to τ as the value set allows.
pub fn sample_signal_pair(p: usize, k: usize, value_set: &ValueSet, xi_target: f64, tau_target: f64, seed: u64) -> Result<SignalPair> {
    if k == 0 || k > p {
        return Err(Error::InvalidParams(format!("need 1 <= k <= p, got k = {k}, p = {p}")));
    }
    if !(0.0..=1.0).contains(&xi_target) || !(-1.0..=1.0).contains(&tau_target) {
        return Err(Error::InvalidParams("xi must lie in [0,1] and tau in [-1,1]".into()));
    }
    let m = (xi_target * k as f64).round() as usize;
    if m > k || 2 * k - m > p {
        return Err(Error::UnachievableOverlap { intersection: m, k, p });
    }
    let mut rng = rng::rng(seed);
    let mut union: Vec<usize> = rand::seq::index::sample(&mut rng, p, 2 * k - m).into_vec();
    union.shuffle(&mut rng);
    let (shared, rest) = union.split_at(m);
    let (only1, only2) = rest.split_at(k - m);

    let vals = value_set.values();
    let mut beta1 = vec![0.0; p];
    let mut beta2 = vec![0.0; p];
    for &j in shared.iter().chain(only1) {
        beta1[j] = vals[rng.random_range(0..vals.len())];
    }

    // Intersection: same magnitude, a agreeing signs. Ties in the target count go to fewer agreements.
    let ideal = (tau_target + 1.0) * m as f64 / 2.0;
    let mut agree = ideal.floor() as usize;
    if ideal - agree as f64 > 0.5 {
        agree += 1;
    }
    let agree = agree.min(m);
    let mut order: Vec<usize> = shared.to_vec();
    order.shuffle(&mut rng);
    for (pos, &j) in order.iter().enumerate() {
        let v = beta1[j];
        beta2[j] = if pos < agree || !value_set.contains(-v) { v } else { -v };
    }

    // Off-intersection: a permutation of β₁'s exclusive magnitudes keeps the norms equal.
    let mut mags: Vec<f64> = only1.iter().map(|&j| beta1[j].abs()).collect();
    mags.shuffle(&mut rng);
    for (&j, mag) in only2.iter().zip(mags) {
        let choices: Vec<f64> = vals.iter().copied().filter(|v| v.abs() == mag).collect();
        beta2[j] = choices[rng.random_range(0..choices.len())];
    }

    let mut pair = SignalPair::from_vectors(beta1, beta2)?;
    pair.tau_target = Some(tau_target);
    pair.tau_exact = m == 0 || (pair.tau - tau_target).abs() <= 1e-12;
    Ok(pair)
}

/// Streams rows of one sample without materializing the design.
pub struct RowSampler {
    rng: Rng,
    p: usize,
    phi: f64,
    sigma: f64,
    model: ResponseModel,
    null_scale: f64,
    sparse1: Vec<(usize, f64)>,
    sparse2: Vec<(usize, f64)>,
}

impl RowSampler {
    pub fn new(params: &ModelParams, signals: &SignalPair, model: ResponseModel, seed: u64) -> Result<Self> {
        if signals.p() != params.p {
            return Err(Error::DimensionMismatch(format!("signals have dimension {}, params.p = {}", signals.p(), params.p)));
        }
        if model != ResponseModel::Recovery && params.sigma == 0.0 {
            return Err(Error::ZeroNoise);
        }
        let sparse = |b: &[f64]| b.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(j, v)| (j, *v)).collect::<Vec<_>>();
        let null_scale = if params.sigma > 0.0 { (signals.norm_sq() / (params.sigma * params.sigma) + 1.0).sqrt() } else { 0.0 };
        Ok(RowSampler {
            rng: rng::rng(seed),
            p: params.p,
            phi: params.phi,
            sigma: params.sigma,
            model,
            null_scale,
            sparse1: sparse(&signals.beta1),
            sparse2: sparse(&signals.beta2),
        })
    }

    /// Fills `x_row` (length p) and returns `(y_i, z_i)`.
    #[inline]
    pub fn next_row(&mut self, x_row: &mut [f64]) -> (f64, u8) {
        debug_assert_eq!(x_row.len(), self.p);
        for v in x_row.iter_mut() {
            *v = rng::normal(&mut self.rng);
        }
        let z = u8::from(self.rng.random::<f64>() < self.phi);
        let g = rng::normal(&mut self.rng);
        let beta = if z == 1 { &self.sparse1 } else { &self.sparse2 };
        let signal: f64 = beta.iter().map(|&(j, b)| x_row[j] * b).sum();
        let y = match self.model {
            ResponseModel::Recovery => signal + self.sigma * g,
            ResponseModel::Planted => signal / self.sigma + g,
            ResponseModel::Null => self.null_scale * g,
        };
        (y, z)
    }
}

/// Materializes n rows into (X, y, z).
fn collect_rows(sampler: &mut RowSampler, n: usize, p: usize) -> (DMatrix<f64>, Vec<f64>, Vec<u8>) {
    let mut x = DMatrix::<f64>::zeros(n, p);
    let mut y = Vec::with_capacity(n);
    let mut z = Vec::with_capacity(n);
    let mut row = vec![0.0; p];
    for i in 0..n {
        let (yi, zi) = sampler.next_row(&mut row);
        for (j, v) in row.iter().enumerate() {
            x[(i, j)] = *v;
        }
        y.push(yi);
        z.push(zi);
    }
    (x, y, z)
}

/// One MSLR instance: y = Xβ₁⊙z + Xβ₂⊙(1−z) + w.
pub fn sample_instance(params: &ModelParams, signals: &SignalPair, seed: u64) -> Result<Instance> {
    params.validate()?;
    let mut s = RowSampler::new(params, signals, ResponseModel::Recovery, seed)?;
    let (x, y, z) = collect_rows(&mut s, params.n, params.p);
    Ok(Instance { x, y, z, params: params.clone(), signals: signals.clone(), seed })
}

/// One detection sample under the requested hypothesis.
pub fn sample_detection(params: &ModelParams, signals: &SignalPair, hypothesis: Hypothesis, seed: u64) -> Result<DetectionSample> {
    params.validate()?;
    let model = match hypothesis {
        Hypothesis::Planted => ResponseModel::Planted,
        Hypothesis::Null => ResponseModel::Null,
    };
    let mut s = RowSampler::new(params, signals, model, seed)?;
    let (x, y, z) = collect_rows(&mut s, params.n, params.p);
    Ok(DetectionSample { x, y, hypothesis, params: params.clone(), seed, signals: signals.clone(), latent_z: z })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{classify_regime, RegimeTag};

    #[test]
    fn sbmslr_construction() {
        for seed in 0..20 {
            let s = sample_signal_pair(6, 2, &ValueSet::pm1(), 1.0, -1.0, seed).unwrap();
            assert_eq!(s.beta2, s.beta1.iter().map(|v| -v).collect::<Vec<_>>());
            assert_eq!(s.joint_support().len(), 2);
            assert_eq!(classify_regime(&s, 0.5, 1.0).tag, RegimeTag::Sbmslr);
        }
    }

    #[test]
    fn disjoint_supports() {
        let s = sample_signal_pair(6, 2, &ValueSet::p1(), 0.0, 0.0, 3).unwrap();
        assert_eq!(s.joint_support().len(), 4);
        assert_eq!(crate::model::dot(&s.beta1, &s.beta2), 0.0);
    }

    #[test]
    fn tau_zero_on_two_shared() {
        for seed in 0..20 {
            let s = sample_signal_pair(8, 4, &ValueSet::pm1(), 0.5, 0.0, seed).unwrap();
            let shared: Vec<usize> = s.support1.iter().copied().filter(|j| s.support2.contains(j)).collect();
            assert_eq!(shared.len(), 2);
            let agree = shared.iter().filter(|&&j| s.beta1[j] == s.beta2[j]).count();
            assert_eq!(agree, 1);
            assert_eq!(s.tau, 0.0);
            assert!(s.tau_exact);
        }
    }

    #[test]
    fn odd_intersection_flags_tau() {
        let s = sample_signal_pair(1000, 10, &ValueSet::pm1(), 0.5, 0.0, 1).unwrap();
        assert!(!s.tau_exact);
        assert!((s.tau + 0.2).abs() < 1e-12);
    }

    #[test]
    fn overlap_errors() {
        assert!(matches!(sample_signal_pair(5, 3, &ValueSet::pm1(), 0.0, 0.0, 1), Err(Error::UnachievableOverlap { .. })));
        assert!(sample_signal_pair(6, 3, &ValueSet::pm1(), 0.0, 0.0, 1).is_ok());
    }

    #[test]
    fn noiseless_single_component() {
        let s = sample_signal_pair(5, 2, &ValueSet::pm1(), 0.0, 0.0, 9).unwrap();
        let params = ModelParams::new(5, 30, 2, 0.0, 1.0, ValueSet::pm1()).unwrap();
        let inst = sample_instance(&params, &s, 4).unwrap();
        for i in 0..30 {
            let expect: f64 = (0..5).map(|j| inst.x[(i, j)] * s.beta1[j]).sum();
            assert!((inst.y[i] - expect).abs() < 1e-12);
            assert_eq!(inst.z[i], 1);
        }
    }

    #[test]
    fn one_by_one() {
        let s = SignalPair::from_vectors(vec![1.0], vec![1.0]).unwrap();
        let params = ModelParams::new(1, 1, 1, 0.0, 0.5, ValueSet::p1()).unwrap();
        let inst = sample_instance(&params, &s, 11).unwrap();
        assert_eq!(inst.y[0], inst.x[(0, 0)]);
    }

    #[test]
    fn deterministic() {
        let s = sample_signal_pair(20, 3, &ValueSet::pm1(), 0.5, 1.0, 42).unwrap();
        let params = ModelParams::new(20, 50, 3, 0.5, 0.3, ValueSet::pm1()).unwrap();
        assert_eq!(sample_instance(&params, &s, 42).unwrap(), sample_instance(&params, &s, 42).unwrap());
        assert_eq!(s, sample_signal_pair(20, 3, &ValueSet::pm1(), 0.5, 1.0, 42).unwrap());
    }

    #[test]
    fn zero_noise_detection() {
        let s = sample_signal_pair(5, 2, &ValueSet::pm1(), 0.0, 0.0, 9).unwrap();
        let params = ModelParams::new(5, 3, 2, 0.0, 0.5, ValueSet::pm1()).unwrap();
        assert_eq!(sample_detection(&params, &s, Hypothesis::Planted, 1).unwrap_err(), Error::ZeroNoise);
    }

    #[test]
    fn hypotheses_share_design() {
        let s = sample_signal_pair(10, 2, &ValueSet::pm1(), 0.0, 0.0, 9).unwrap();
        let params = ModelParams::new(10, 20, 2, 1.0, 0.5, ValueSet::pm1()).unwrap();
        let a = sample_detection(&params, &s, Hypothesis::Planted, 5).unwrap();
        let b = sample_detection(&params, &s, Hypothesis::Null, 5).unwrap();
        assert_eq!(a.x, b.x);
    }
}
