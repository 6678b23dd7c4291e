//! CORR screening: compute the sample bound for a noisy SLR instance, stream
//! that many rows without materializing X, and check the recovered signed
//! support and the detection decision.
//!
//! cargo run --release --example corr_screening

use mslr::corr::{corr_streaming, corr_threshold, CorrConfig};
use mslr::gen::{sample_signal_pair, ResponseModel, RowSampler};
use mslr::model::{classify_regime, corr_sample_bound, ModelParams, ValueSet};

fn main() -> mslr::Result<()> {
    let (p, k, snr) = (1000, 10, 10.0);
    let sigma = (k as f64 / snr).sqrt();
    let cfg = CorrConfig::new(0.5)?;
    let signals = sample_signal_pair(p, k, &ValueSet::pm1(), 1.0, 1.0, 1)?;
    let regime = classify_regime(&signals, 0.5, sigma);
    let params = ModelParams::new(p, 1, k, sigma, 0.5, ValueSet::pm1())?;
    let n = corr_sample_bound(&regime, &params, cfg.eps)?;
    println!("regime {}, snr {snr}, sample bound n = {n}, threshold {:.3}", regime.tag, corr_threshold(p, &cfg));

    let mut exact = 0;
    let trials = 20;
    for t in 0..trials {
        let mut sampler = RowSampler::new(&params.with_n(n), &signals, ResponseModel::Planted, 100 + t)?;
        let (est, _) = corr_streaming(&mut sampler, n, p, &cfg)?;
        let truth: Vec<i8> = signals.beta1.iter().map(|&b| if b > 0.0 { 1 } else if b < 0.0 { -1 } else { 0 }).collect();
        exact += usize::from(est.signed() == truth);
        if t == 0 {
            println!("trial 0: {} indices selected, decision {}", est.indices.len(), est.detect());
        }
    }
    println!("exact signed support in {exact}/{trials} trials");

    let mut null = RowSampler::new(&params.with_n(n), &signals, ResponseModel::Null, 999)?;
    let (est, _) = corr_streaming(&mut null, n, p, &cfg)?;
    println!("null sample: {} indices selected, decision {}", est.indices.len(), est.detect());
    Ok(())
}
