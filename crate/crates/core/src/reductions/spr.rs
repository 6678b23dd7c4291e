//! Sparse phase retrieval from noiseless SBMSLR: an even map of the response
//! plus fresh unit noise removes the label, since g(−y) = g(y).

use crate::error::{Error, Result};
use crate::gen::{Hypothesis, RowSampler, ResponseModel};
use crate::model::{ModelParams, SignalPair};
use crate::rng::{self, stream};
use nalgebra::DMatrix;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SprMode {
    /// g(y) = |y|
    Abs,
    /// g(y) = y²
    Square,
}

impl SprMode {
    fn apply(self, v: f64) -> f64 {
        match self {
            SprMode::Abs => v.abs(),
            SprMode::Square => v * v,
        }
    }
}

impl fmt::Display for SprMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SprMode::Abs => "abs",
            SprMode::Square => "square",
        })
    }
}

impl std::str::FromStr for SprMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "abs" => Ok(SprMode::Abs),
            "square" | "sq" => Ok(SprMode::Square),
            other => Err(Error::Parse(format!("unknown SPR mode {other:?}"))),
        }
    }
}

/// ỹ = g(y) + w with w standard normal from `seed`; X passes through.
pub fn spr_transform(x: &DMatrix<f64>, y: &[f64], mode: SprMode, seed: u64) -> (DMatrix<f64>, Vec<f64>) {
    let mut g = rng::rng(seed);
    let yt = y.iter().map(|&v| mode.apply(v) + rng::normal(&mut g)).collect();
    (x.clone(), yt)
}

/// Null responses: g(√snr · w₁) + w₂, i.e. √snr|w₁| + w₂ in abs mode.
pub fn spr_null(n: usize, snr: f64, mode: SprMode, seed: u64) -> Vec<f64> {
    let mut g = rng::rng(seed);
    let scale = snr.sqrt();
    (0..n)
        .map(|_| {
            let w1 = rng::normal(&mut g);
            let w2 = rng::normal(&mut g);
            mode.apply(scale * w1) + w2
        })
        .collect()
}

/// One SPR detection sample: the planted side transforms a noiseless
/// y = Xβ_z/σ, the null side draws fresh responses; both share X.
pub fn spr_sample(params: &ModelParams, signals: &SignalPair, mode: SprMode, hypothesis: Hypothesis, seed: u64) -> Result<(DMatrix<f64>, Vec<f64>)> {
    params.validate()?;
    if params.sigma == 0.0 {
        return Err(Error::ZeroNoise);
    }
    let noiseless = ModelParams { sigma: 0.0, ..params.clone() };
    let mut sampler = RowSampler::new(&noiseless, signals, ResponseModel::Recovery, rng::derive(seed, stream::INSTANCE))?;
    let (n, p) = (params.n, params.p);
    let mut x = DMatrix::<f64>::zeros(n, p);
    let mut y = Vec::with_capacity(n);
    let mut row = vec![0.0; p];
    for i in 0..n {
        let (yi, _) = sampler.next_row(&mut row);
        for (j, v) in row.iter().enumerate() {
            x[(i, j)] = *v;
        }
        y.push(yi / params.sigma);
    }
    match hypothesis {
        Hypothesis::Planted => Ok(spr_transform(&x, &y, mode, rng::derive(seed, stream::TRANSFORM))),
        Hypothesis::Null => {
            let snr = signals.norm_sq() / (params.sigma * params.sigma);
            Ok((x, spr_null(n, snr, mode, rng::derive(seed, stream::NULL))))
        }
    }
}
