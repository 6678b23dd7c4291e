//! Noiseless recovery of an unbalanced mixture: CORR support, spectral
//! initialization, then alternating minimization with resampling.
//!
//! cargo run --release --example recovery_am

use mslr::corr::CorrConfig;
use mslr::gen::{sample_instance, sample_signal_pair};
use mslr::model::{ModelParams, ValueSet};
use mslr::recovery::{recover_noiseless, Proportions, EXACT_RHO_TOL};

fn main() -> mslr::Result<()> {
    let (p, n, k, phi) = (100, 3000, 4, 0.3);
    let signals = sample_signal_pair(p, k, &ValueSet::pm1(), 0.5, 0.0, 5)?;
    let params = ModelParams::new(p, n, k, 0.0, phi, ValueSet::pm1())?;
    let inst = sample_instance(&params, &signals, 6)?;
    let n1 = inst.z.iter().filter(|z| **z == 1).count();

    for (label, props) in [("estimated", Proportions::Estimated), ("known", Proportions::Known { n1, n2: n - n1 })] {
        let r = recover_noiseless(&inst.x, &inst.y, &CorrConfig::default(), 10, props)?.with_truth(&signals)?;
        println!(
            "{label:>9} proportions: rho = {:.3e}, exact = {}, AM rounds = {}, flags = {:?}",
            r.rho.unwrap_or(f64::NAN),
            r.exact_recovery(&signals, EXACT_RHO_TOL),
            r.iterations,
            r.flags
        );
        let trace: Vec<String> = r.objective_trace.iter().map(|v| format!("{v:.2e}")).collect();
        println!("          objective trace: {}", trace.join(" -> "));
    }
    Ok(())
}
