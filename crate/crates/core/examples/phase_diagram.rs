//! A small phase diagram from a flat key=value spec: exact support recovery
//! rate of CORR over (k, n / bound), written as CSV with gnuplot and SVG plots.
//!
//! cargo run --release --example phase_diagram [output-dir]

use mslr::harness::{emit_plots, run_experiment, ExperimentSpec, PlotKind};
use std::path::PathBuf;

const SPEC: &str = "
# CORR support recovery around its sample bound
experiment = phase
algorithm = support
p = 200
k = 2, 4
n_base = corr
n_mult = 0.25, 0.5, 1
snr = 10
phi = 0.5
trials = 40
seed = 7
";

fn main() -> mslr::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    let spec = ExperimentSpec::parse(SPEC)?;
    let csv = dir.join("mslr_phase.csv");
    let summary = run_experiment(&spec, std::fs::File::create(&csv)?)?;
    println!("{} rows ({} failed) -> {}", summary.rows, summary.failed_rows, csv.display());
    print!("{}", std::fs::read_to_string(&csv)?);
    let (gp, svg) = emit_plots(&csv, PlotKind::Phase)?;
    println!("plots: {} and {}", gp.display(), svg.display());
    Ok(())
}
