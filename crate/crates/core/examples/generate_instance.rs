//! Draw a signal pair and a recovery instance, inspect the overlap and the
//! regime, and round-trip the instance through the MSLR1 text format.
//!
//! cargo run --example generate_instance

use mslr::gen::{sample_detection, sample_instance, sample_signal_pair, Hypothesis};
use mslr::io::InstanceFile;
use mslr::model::{classify_regime, ModelParams, ValueSet};

fn main() -> mslr::Result<()> {
    let (p, n, k, sigma, phi) = (40, 200, 6, 0.5, 0.3);
    let values = ValueSet::pm1();
    let signals = sample_signal_pair(p, k, &values, 0.5, 0.0, 11)?;
    println!("supports S1 = {:?}, S2 = {:?}", signals.support1, signals.support2);
    println!("xi = {}, tau = {} (requested 0, exact: {})", signals.xi, signals.tau, signals.tau_exact);

    let regime = classify_regime(&signals, phi, sigma);
    println!("regime {} with snr {:.1}", regime.tag, regime.snr);

    let params = ModelParams::new(p, n, k, sigma, phi, values)?;
    let inst = sample_instance(&params, &signals, 12)?;
    let ones = inst.z.iter().filter(|z| **z == 1).count();
    println!("{ones} of {n} rows follow beta1 (phi = {phi})");

    let mut buf = Vec::new();
    InstanceFile::from_instance(&inst).write_to(&mut buf)?;
    let back = InstanceFile::read_from(buf.as_slice())?;
    assert_eq!(back.y, inst.y);
    println!("MSLR1 file: {} bytes, header: {}", buf.len(), String::from_utf8_lossy(&buf).lines().next().unwrap_or("")[..80].to_owned() + "...");

    // Planted and null detection samples from one seed share their design.
    let planted = sample_detection(&params, &signals, Hypothesis::Planted, 13)?;
    let null = sample_detection(&params, &signals, Hypothesis::Null, 13)?;
    assert_eq!(planted.x, null.x);
    let var = |y: &[f64]| y.iter().map(|v| v * v).sum::<f64>() / y.len() as f64;
    println!("mean y^2: planted {:.2}, null {:.2}, expected {:.2}", var(&planted.y), var(&null.y), signals.norm_sq() / (sigma * sigma) + 1.0);
    Ok(())
}
