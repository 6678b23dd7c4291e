//! Exact low-degree chi-square: cumulative values by degree for the sparse
//! linear regression and symmetric mixture regimes, in rational and float
//! arithmetic, next to the sample-size thresholds they are compared with.
//!
//! cargo run --release --example chi2_lowdeg

use mslr::lowdeg::exact::rat;
use mslr::lowdeg::{chi2, ChiRegime, ChiSqConfig, UnitValues};
use mslr::model::{lowdeg_sample_thresholds, ModelParams, ValueSet};

fn main() -> mslr::Result<()> {
    let (p, k, degree) = (200, 4, 8);
    let params = ModelParams::new(p, 1, k, 1.0, 0.5, ValueSet::pm1())?;
    let th = lowdeg_sample_thresholds(&params);
    println!("thresholds: alg SBMSLR {:.1}, alg SLR {:.1}, IT SLR {:.1}", th.n_alg_sbmslr, th.n_alg_slr, th.n_it_slr);

    for regime in [ChiRegime::Slrd, ChiRegime::Sbmslrd] {
        for n in [2, 8, 32] {
            let cfg = ChiSqConfig::new(p, n, k, rat(1), degree, regime.clone(), UnitValues::Pm1);
            let r = chi2(&cfg)?;
            let exact = r.exact.as_ref().map(|e| e.value.to_string()).unwrap_or_default();
            let shown = if exact.len() > 40 { format!("{}...", &exact[..40]) } else { exact };
            println!("{regime:>8} n = {n:>2}: chi2_{degree} = {:.6e} (exact {shown})", r.value);
        }
    }

    // Floating arithmetic reaches sizes where exact rationals get large.
    let cfg = ChiSqConfig::new(10_000, 400, 20, rat(1), 12, ChiRegime::Sbmslrd, UnitValues::Pm1).float();
    let r = chi2(&cfg)?;
    let cum: Vec<String> = r.cumulative().iter().step_by(2).map(|v| format!("{v:.3e}")).collect();
    println!("SBMSLR p = 10000, n = 400, k = 20, even degrees: {}", cum.join(", "));
    Ok(())
}
