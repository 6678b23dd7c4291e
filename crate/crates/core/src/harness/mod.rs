//! Monte-Carlo experiments over parameter grids, their CSV outputs and plots.

mod plot;
mod run;
mod spec;

pub use plot::{emit_plots, render_plots, PlotArtifacts, PlotKind};
pub use run::{
    failed_rows, grid_cells, run_chi2_sweep, run_experiment, run_phase, run_recovery_curve, run_roc, write_csv, Cell, Chi2Row, CsvRow, ResultRow, RocRow, RunSummary, CHI2_HEADER, RESULT_HEADER, ROC_HEADER,
};
pub use spec::{Algorithm, ChiRegimeKind, ExperimentKind, ExperimentSpec, NBase, Noise, SampleSizes};
