//! Balanced noisy recovery with the nuclear-norm moment program, comparing the
//! default penalty against hand-picked values.
//!
//! cargo run --release --example recovery_convex

use mslr::corr::CorrConfig;
use mslr::gen::{sample_instance, sample_signal_pair};
use mslr::model::{ModelParams, ValueSet};
use mslr::recovery::{recover_balanced, ConvexOptions};

fn main() -> mslr::Result<()> {
    let (p, n, k, sigma) = (30, 2000, 2, 0.1);
    // Disjoint supports keep every coordinate visible to CORR at phi = 1/2.
    let signals = sample_signal_pair(p, k, &ValueSet::pm1(), 0.0, 0.0, 3)?;
    let params = ModelParams::new(p, n, k, sigma, 0.5, ValueSet::pm1())?;
    let inst = sample_instance(&params, &signals, 4)?;
    // The default penalty follows the asymptotic rule; at this n it shrinks K to
    // zero and both estimates collapse onto the mean signal.
    for lambda in [None, Some(10.0), Some(1.0), Some(0.1)] {
        let opts = ConvexOptions { lambda, ..ConvexOptions::default() };
        let r = recover_balanced(&inst.x, &inst.y, &CorrConfig::default(), sigma, &opts)?.with_truth(&signals)?;
        let name = lambda.map_or("default".to_string(), |l| l.to_string());
        println!("lambda {name:>7}: rho = {:.4}, steps = {}, flags = {:?}", r.rho.unwrap_or(f64::NAN), r.iterations, r.flags);
    }
    Ok(())
}
