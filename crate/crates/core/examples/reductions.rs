//! Average-case reductions: padding, sign-phase retrieval, and detection via
//! recovery, plus a distributional check that the padding map lands on its
//! target law.
//!
//! cargo run --release --example reductions

use mslr::gen::{sample_detection, sample_signal_pair, Hypothesis};
use mslr::model::{ModelParams, SignalPair, ValueSet};
use mslr::reductions::{detect_via_recovery, pad_instance, pad_target, spr_null, spr_sample, unpad_estimates, validate_reduction, PadConfig, SprMode};

fn main() -> mslr::Result<()> {
    // Padding: an SBMSLR source becomes a planted-support instance of width p + m.
    let (p, k, n, sigma, c) = (10, 2, 20, 1.0, 0.5);
    let b = vec![1.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
    let source = SignalPair::from_vectors(b.clone(), b.iter().map(|v| -v).collect())?;
    let params = ModelParams::new(p, n, k, sigma, 0.5, ValueSet::pm1())?;
    let s = sample_detection(&params, &source, Hypothesis::Planted, 1)?;
    let (xp, _, rec) = pad_instance(&s.x, &s.y, &PadConfig { c, sigma, permutation_seed: 2 })?;
    println!("padded {}x{} -> {}x{}, realized c = {:.3}", n, p, xp.nrows(), xp.ncols(), rec.realized_c());
    let (u1, u2) = unpad_estimates(&vec![0.5; rec.total()], &vec![-0.5; rec.total()], &rec)?;
    println!("unpadded estimate lengths: {} and {}", u1.len(), u2.len());

    let (tparams, tsignals) = pad_target(&params, c, 3)?;
    let report = validate_reduction(
        |seed| sample_detection(&tparams, &tsignals, Hypothesis::Planted, seed).map(|d| (d.x, d.y)),
        |seed| {
            let d = sample_detection(&params, &source, Hypothesis::Planted, seed)?;
            let (x, y, _) = pad_instance(&d.x, &d.y, &PadConfig { c, sigma, permutation_seed: seed ^ 0xabc })?;
            Ok((x, y))
        },
        2000,
        4,
    )?;
    for t in &report.tests {
        println!("  KS {:<16} D = {:.4}, p = {:.3}, pass = {}", t.name, t.statistic, t.p_value, t.pass);
    }
    println!("padding matches its target law: {}", report.pass);

    // Sign-phase retrieval folds the sign of the response away.
    let sig = sample_signal_pair(50, 5, &ValueSet::pm1(), 1.0, 1.0, 5)?;
    let sp = ModelParams::new(50, 4000, 5, 1.0, 0.5, ValueSet::pm1())?;
    let (_, y) = spr_sample(&sp, &sig, SprMode::Abs, Hypothesis::Planted, 6)?;
    let null = spr_null(4000, 5.0, SprMode::Abs, 7);
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    println!("SPR abs: planted mean {:.3}, null mean {:.3}, sqrt(2 snr / pi) = {:.3}", mean(&y), mean(&null), (2.0 * 5.0 / std::f64::consts::PI).sqrt());

    // Detection via an oracle recovery: the residual statistic separates the hypotheses.
    let (p, k, snr) = (200, 10, 100.0);
    let sigma = (k as f64 / snr).sqrt();
    let n = (4.0 * k as f64 * ((p as f64).ln() + 1.0) / (1.0 + snr).ln()).ceil() as usize;
    let sig = sample_signal_pair(p, k, &ValueSet::pm1(), 0.0, 0.0, 8)?;
    let params = ModelParams::new(p, n, k, sigma, 0.5, ValueSet::pm1())?;
    for h in [Hypothesis::Planted, Hypothesis::Null] {
        let d = sample_detection(&params, &sig, h, 9)?;
        let (decision, stat) = detect_via_recovery(&d.x, &d.y, |_, _| Ok((sig.beta1.clone(), sig.beta2.clone())), sigma)?;
        println!("{h:>7} sample (n = {n}): statistic {stat:.3}, decision {decision}");
    }
    Ok(())
}
