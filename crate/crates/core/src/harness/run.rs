//! Monte-Carlo experiment engine.
//!
//! Every (cell, trial) pair gets its seed from `trial_seed(master, cell, trial)`
//! and its own streams below that, so results do not depend on scheduling.
//! Trials run on the rayon pool and are collected in (cell, trial) order
//! before any reduction, which keeps the CSV byte-identical for any worker
//! count.

use super::spec::{Algorithm, ChiRegimeKind, ExperimentKind, ExperimentSpec, NBase, Noise, SampleSizes};
use crate::corr::{corr_streaming, corr_threshold, CorrConfig};
use crate::error::{Error, Result};
use crate::gen::{sample_instance, sample_signal_pair, ResponseModel, RowSampler};
use crate::lowdeg::{chi2, ChiRegime, ChiSqConfig, UnitValues};
use crate::model::{classify_regime, corr_sample_bound, lowdeg_sample_thresholds, ModelParams, SignalPair};
use crate::recovery::{recover_balanced, recover_noiseless, rho_error, ConvexOptions, Proportions};
use crate::rng::{derive, stream, trial_seed};
use crate::stats::{mean, rate_se, std_error};
use num_traits::Zero;
use rayon::prelude::*;
use std::io::Write;
use std::time::Instant;

/// One CSV line of an experiment output.
pub trait CsvRow {
    fn header() -> &'static [&'static str];
    fn record(&self) -> Vec<String>;
    /// False for rows that record a failed cell.
    fn ok(&self) -> bool;
}

fn num(v: f64) -> String {
    format!("{v}")
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn status_of(e: &Error) -> String {
    format!("error: {e}")
}

pub fn write_csv<R: CsvRow>(rows: &[R], w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    out.write_record(R::header()).map_err(csv_err)?;
    for r in rows {
        out.write_record(r.record()).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// Rows recording a failed cell.
pub fn failed_rows<R: CsvRow>(rows: &[R]) -> usize {
    rows.iter().filter(|r| !r.ok()).count()
}

/// One resolved grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub index: usize,
    pub p: usize,
    pub k: usize,
    /// `Err` when the sample size could not be derived (for instance a
    /// degenerate regime); the cell then yields a failed row.
    pub n: std::result::Result<usize, Error>,
    pub n_mult: Option<f64>,
    pub sigma: f64,
    pub snr: f64,
    pub phi: f64,
    pub xi: f64,
    pub tau: f64,
    pub eps: f64,
}

impl Cell {
    fn params(&self, spec: &ExperimentSpec) -> Result<ModelParams> {
        let n = self.n.clone()?;
        ModelParams::new(self.p, n, self.k, self.sigma, self.phi, spec.values.clone())
    }

    fn signals(&self, spec: &ExperimentSpec, seed: u64) -> Result<SignalPair> {
        sample_signal_pair(self.p, self.k, &spec.values, self.xi, self.tau, seed)
    }
}

fn resolve_n(spec: &ExperimentSpec, cell: &Cell, base: NBase, factor: f64) -> Result<usize> {
    let params = ModelParams::new(cell.p, 1, cell.k, cell.sigma, cell.phi, spec.values.clone())?;
    let b = match base {
        NBase::Corr => {
            let reference = cell.signals(spec, derive(derive(spec.master_seed, cell.index as u64), stream::SIGNALS))?;
            let regime = classify_regime(&reference, cell.phi, cell.sigma);
            corr_sample_bound(&regime, &params, cell.eps)? as f64
        }
        NBase::LowdegAlgSbmslr => lowdeg_sample_thresholds(&params).n_alg_sbmslr,
        NBase::LowdegAlgSlr => lowdeg_sample_thresholds(&params).n_alg_slr,
        NBase::LowdegItSlr => lowdeg_sample_thresholds(&params).n_it_slr,
    };
    let n = (factor * b).ceil();
    if !n.is_finite() || n < 1.0 {
        return Err(Error::InvalidParams(format!("derived sample size {n} from base {b}")));
    }
    Ok(n as usize)
}

/// Grid cells in row-major order over (p, k, n, noise, φ, ξ, τ, ε).
pub fn grid_cells(spec: &ExperimentSpec) -> Vec<Cell> {
    let n_axis: Vec<(Option<usize>, Option<f64>)> = match &spec.n {
        SampleSizes::Absolute(v) => v.iter().map(|&n| (Some(n), None)).collect(),
        SampleSizes::Multiples { factors, .. } => factors.iter().map(|&f| (None, Some(f))).collect(),
    };
    let mut cells = Vec::new();
    for &p in &spec.p {
        for &k in &spec.k {
            for &(n_abs, n_mult) in &n_axis {
                for &noise in spec.noise_values() {
                    for &phi in &spec.phi {
                        for &xi in &spec.xi {
                            for &tau in &spec.tau {
                                for &eps in &spec.eps {
                                    let nominal = k as f64 * spec.values.mean_sq();
                                    let (sigma, snr) = match spec.noise {
                                        Noise::Sigma(_) => (noise, if noise == 0.0 { f64::INFINITY } else { nominal / (noise * noise) }),
                                        Noise::Snr(_) => ((nominal / noise).sqrt(), noise),
                                    };
                                    let mut cell = Cell { index: cells.len(), p, k, n: Err(Error::InvalidParams("unresolved".into())), n_mult, sigma, snr, phi, xi, tau, eps };
                                    cell.n = match (&spec.n, n_abs) {
                                        (_, Some(n)) => Ok(n),
                                        (SampleSizes::Multiples { base, .. }, None) => resolve_n(spec, &cell, *base, n_mult.unwrap_or(1.0)),
                                        (SampleSizes::Absolute(_), None) => unreachable!(),
                                    };
                                    cells.push(cell);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    cells
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub cell: usize,
    pub p: usize,
    pub n: Option<usize>,
    pub n_mult: Option<f64>,
    pub k: usize,
    pub sigma: f64,
    pub snr: f64,
    pub phi: f64,
    pub xi: f64,
    pub tau: f64,
    pub eps: f64,
    pub algorithm: Algorithm,
    pub metric: String,
    pub value: Option<f64>,
    pub std_error: Option<f64>,
    pub trials: usize,
    /// Seconds summed over trials; zero unless timing is enabled.
    pub wall_time: f64,
    /// `ok` or `error: ...`.
    pub status: String,
}

pub const RESULT_HEADER: &[&str] = &["cell", "p", "n", "n_mult", "k", "sigma", "snr", "phi", "xi", "tau", "eps", "algorithm", "metric", "value", "std_error", "trials", "wall_time", "status"];

impl CsvRow for ResultRow {
    fn header() -> &'static [&'static str] {
        RESULT_HEADER
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.cell.to_string(),
            self.p.to_string(),
            opt(self.n),
            opt(self.n_mult),
            self.k.to_string(),
            num(self.sigma),
            num(self.snr),
            num(self.phi),
            num(self.xi),
            num(self.tau),
            num(self.eps),
            self.algorithm.to_string(),
            self.metric.clone(),
            opt(self.value),
            opt(self.std_error),
            self.trials.to_string(),
            num(self.wall_time),
            self.status.clone(),
        ]
    }

    fn ok(&self) -> bool {
        self.status == "ok"
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Outcome {
    Hit(bool),
    Detect { planted_ok: bool, null_ok: bool },
    Recovery { success: bool, rho: f64 },
}

fn metric_names(alg: Algorithm) -> &'static [&'static str] {
    match alg {
        Algorithm::Support => &["exact_support_rate"],
        Algorithm::Signed => &["exact_signed_rate"],
        Algorithm::Detect => &["type1_error", "type2_error", "error_sum", "accuracy"],
        Algorithm::RecoverAm | Algorithm::RecoverConvex => &["exact_rate", "mean_rho"],
    }
}

/// sign(φβ₁ + (1−φ)β₂), the sign pattern of the population correlation.
fn signed_truth(s: &SignalPair, phi: f64) -> Vec<i8> {
    s.beta1
        .iter()
        .zip(&s.beta2)
        .map(|(a, b)| {
            let m = phi * a + (1.0 - phi) * b;
            if m > 0.0 {
                1
            } else if m < 0.0 {
                -1
            } else {
                0
            }
        })
        .collect()
}

fn run_trial(spec: &ExperimentSpec, cell: &Cell, params: &ModelParams, trial: usize) -> Result<Outcome> {
    let ts = trial_seed(spec.master_seed, cell.index as u64, trial as u64);
    let signals = cell.signals(spec, derive(ts, stream::SIGNALS))?;
    let config = CorrConfig::new(cell.eps)?;
    let (n, p) = (params.n, params.p);
    match spec.algorithm {
        Algorithm::Support | Algorithm::Signed => {
            let mut s = RowSampler::new(params, &signals, ResponseModel::Recovery, derive(ts, stream::INSTANCE))?;
            let (est, _) = corr_streaming(&mut s, n, p, &config)?;
            Ok(Outcome::Hit(if spec.algorithm == Algorithm::Support {
                est.indices == signals.joint_support()
            } else {
                est.signed() == signed_truth(&signals, cell.phi)
            }))
        }
        Algorithm::Detect => {
            let mut planted = RowSampler::new(params, &signals, ResponseModel::Planted, derive(ts, stream::INSTANCE))?;
            let mut null = RowSampler::new(params, &signals, ResponseModel::Null, derive(ts, stream::NULL))?;
            let (a, _) = corr_streaming(&mut planted, n, p, &config)?;
            let (b, _) = corr_streaming(&mut null, n, p, &config)?;
            Ok(Outcome::Detect { planted_ok: a.detect() == crate::gen::Hypothesis::Planted, null_ok: b.detect() == crate::gen::Hypothesis::Null })
        }
        Algorithm::RecoverAm | Algorithm::RecoverConvex => {
            let inst = sample_instance(params, &signals, derive(ts, stream::INSTANCE))?;
            let result = if spec.algorithm == Algorithm::RecoverAm {
                let n1 = inst.z.iter().filter(|&&z| z == 1).count();
                let proportions = if spec.known_proportions && 2 * n1 != n { Proportions::Known { n1, n2: n - n1 } } else { Proportions::Estimated };
                recover_noiseless(&inst.x, &inst.y, &config, spec.t0, proportions)
            } else {
                let options = ConvexOptions { lambda: spec.lambda, ..ConvexOptions::default() };
                recover_balanced(&inst.x, &inst.y, &config, cell.sigma, &options)
            };
            match result {
                Ok(r) => {
                    let rho = rho_error((&r.beta1_hat, &r.beta2_hat), (&signals.beta1, &signals.beta2))?;
                    Ok(Outcome::Recovery { success: r.exact_recovery(&signals, spec.rho_tol), rho })
                }
                // The pipeline gave up on this draw: score the all-zero estimate.
                Err(Error::SupportEmpty | Error::TooFewSamples { .. } | Error::BalancedProportions) => Ok(Outcome::Recovery { success: false, rho: 2.0 * signals.norm }),
                Err(e) => Err(e),
            }
        }
    }
}

fn row_template(spec: &ExperimentSpec, cell: &Cell, trials: usize) -> ResultRow {
    ResultRow {
        cell: cell.index,
        p: cell.p,
        n: cell.n.clone().ok(),
        n_mult: cell.n_mult,
        k: cell.k,
        sigma: cell.sigma,
        snr: cell.snr,
        phi: cell.phi,
        xi: cell.xi,
        tau: cell.tau,
        eps: cell.eps,
        algorithm: spec.algorithm,
        metric: String::new(),
        value: None,
        std_error: None,
        trials,
        wall_time: 0.0,
        status: "ok".into(),
    }
}

fn summarize(spec: &ExperimentSpec, cell: &Cell, outcomes: &[Outcome], wall: f64) -> Vec<ResultRow> {
    let t = outcomes.len();
    let base = ResultRow { wall_time: wall, ..row_template(spec, cell, t) };
    let rate = |f: &dyn Fn(&Outcome) -> bool| outcomes.iter().filter(|o| f(o)).count() as f64 / t as f64;
    let mk = |metric: &str, value: f64, se: f64| ResultRow { metric: metric.into(), value: Some(value), std_error: Some(se), ..base.clone() };
    match spec.algorithm {
        Algorithm::Support | Algorithm::Signed => {
            let r = rate(&|o| matches!(o, Outcome::Hit(true)));
            vec![mk(metric_names(spec.algorithm)[0], r, rate_se(r, t))]
        }
        Algorithm::Detect => {
            let t1 = rate(&|o| matches!(o, Outcome::Detect { null_ok: false, .. }));
            let t2 = rate(&|o| matches!(o, Outcome::Detect { planted_ok: false, .. }));
            let (s1, s2) = (rate_se(t1, t), rate_se(t2, t));
            let acc = 1.0 - (t1 + t2) / 2.0;
            vec![
                mk("type1_error", t1, s1),
                mk("type2_error", t2, s2),
                mk("error_sum", t1 + t2, (s1 * s1 + s2 * s2).sqrt()),
                mk("accuracy", acc, rate_se(acc, 2 * t)),
            ]
        }
        Algorithm::RecoverAm | Algorithm::RecoverConvex => {
            let r = rate(&|o| matches!(o, Outcome::Recovery { success: true, .. }));
            let rhos: Vec<f64> = outcomes.iter().filter_map(|o| if let Outcome::Recovery { rho, .. } = o { Some(*rho) } else { None }).collect();
            vec![mk("exact_rate", r, rate_se(r, t)), mk("mean_rho", mean(&rhos), if t > 1 { std_error(&rhos) } else { 0.0 })]
        }
    }
}

fn failed(spec: &ExperimentSpec, cell: &Cell, e: &Error) -> Vec<ResultRow> {
    metric_names(spec.algorithm).iter().map(|m| ResultRow { metric: (*m).into(), status: status_of(e), ..row_template(spec, cell, spec.trials) }).collect()
}


/// Runs every (cell, trial) and returns the per-trial results in grid order.
fn run_trials<T: Send>(spec: &ExperimentSpec, cells: &[Cell], f: impl Fn(&Cell, &ModelParams, usize) -> Result<T> + Sync) -> Vec<(Result<Vec<(T, f64)>>, usize)> {
    let tasks: Vec<(usize, usize)> = cells.iter().flat_map(|c| (0..spec.trials).map(move |t| (c.index, t))).collect();
    let params: Vec<Result<ModelParams>> = cells.iter().map(|c| c.params(spec)).collect();
    let results: Vec<(Result<T>, f64)> = tasks
        .par_iter()
        .map(|&(ci, t)| {
            let start = spec.timing.then(Instant::now);
            let r = match &params[ci] {
                Ok(pr) => f(&cells[ci], pr, t),
                Err(e) => Err(e.clone()),
            };
            (r, start.map(|s| s.elapsed().as_secs_f64()).unwrap_or(0.0))
        })
        .collect();
    let mut out = Vec::with_capacity(cells.len());
    let mut it = results.into_iter();
    for c in cells {
        let chunk: Vec<(Result<T>, f64)> = it.by_ref().take(spec.trials).collect();
        let collected: Result<Vec<(T, f64)>> = chunk.into_iter().map(|(r, w)| r.map(|v| (v, w))).collect();
        out.push((collected, c.index));
    }
    out
}

/// Success rates per grid cell for the configured algorithm.
pub fn run_phase(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    let cells = grid_cells(spec);
    let per_cell = run_trials(spec, &cells, |c, pr, t| run_trial(spec, c, pr, t));
    let mut rows = Vec::new();
    for (res, ci) in per_cell {
        let cell = &cells[ci];
        match res {
            Ok(v) => {
                let wall: f64 = v.iter().map(|(_, w)| w).sum();
                let outcomes: Vec<Outcome> = v.into_iter().map(|(o, _)| o).collect();
                rows.extend(summarize(spec, cell, &outcomes, wall));
            }
            Err(e) => rows.extend(failed(spec, cell, &e)),
        }
    }
    Ok(rows)
}

/// Exact-recovery rate and mean ρ along the grid, for a recover-* algorithm.
pub fn run_recovery_curve(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    if !matches!(spec.algorithm, Algorithm::RecoverAm | Algorithm::RecoverConvex) {
        return Err(Error::InvalidParams("recovery-curve needs a recover-* algorithm".into()));
    }
    run_phase(spec)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RocRow {
    pub cell: usize,
    pub p: usize,
    pub n: Option<usize>,
    pub k: usize,
    pub sigma: f64,
    pub phi: f64,
    pub xi: f64,
    pub tau: f64,
    pub eps: f64,
    pub threshold: Option<f64>,
    pub tpr: Option<f64>,
    pub fpr: Option<f64>,
    pub trials: usize,
    pub status: String,
}

pub const ROC_HEADER: &[&str] = &["cell", "p", "n", "k", "sigma", "phi", "xi", "tau", "eps", "threshold", "tpr", "fpr", "trials", "status"];

impl CsvRow for RocRow {
    fn header() -> &'static [&'static str] {
        ROC_HEADER
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.cell.to_string(),
            self.p.to_string(),
            opt(self.n),
            self.k.to_string(),
            num(self.sigma),
            num(self.phi),
            num(self.xi),
            num(self.tau),
            num(self.eps),
            opt(self.threshold),
            opt(self.tpr),
            opt(self.fpr),
            self.trials.to_string(),
            self.status.clone(),
        ]
    }

    fn ok(&self) -> bool {
        self.status == "ok"
    }
}

/// max_j |u_j| under planted and null for one trial.
fn roc_trial(spec: &ExperimentSpec, cell: &Cell, params: &ModelParams, trial: usize) -> Result<(f64, f64)> {
    let ts = trial_seed(spec.master_seed, cell.index as u64, trial as u64);
    let signals = cell.signals(spec, derive(ts, stream::SIGNALS))?;
    let config = CorrConfig::new(cell.eps)?;
    let stat = |model, seed| -> Result<f64> {
        let mut s = RowSampler::new(params, &signals, model, seed)?;
        let (est, _) = corr_streaming(&mut s, params.n, params.p, &config)?;
        Ok(est.statistics.iter().fold(0.0, |m, v| m.max(v.abs())))
    };
    Ok((stat(ResponseModel::Planted, derive(ts, stream::INSTANCE))?, stat(ResponseModel::Null, derive(ts, stream::NULL))?))
}

/// ROC of the CORR detection statistic max_j |u_j|; the CORR threshold is
/// always one of the operating points.
pub fn run_roc(spec: &ExperimentSpec) -> Result<Vec<RocRow>> {
    spec.validate()?;
    let cells = grid_cells(spec);
    let per_cell = run_trials(spec, &cells, |c, pr, t| roc_trial(spec, c, pr, t));
    let mut rows = Vec::new();
    for (res, ci) in per_cell {
        let cell = &cells[ci];
        let base = RocRow {
            cell: cell.index,
            p: cell.p,
            n: cell.n.clone().ok(),
            k: cell.k,
            sigma: cell.sigma,
            phi: cell.phi,
            xi: cell.xi,
            tau: cell.tau,
            eps: cell.eps,
            threshold: None,
            tpr: None,
            fpr: None,
            trials: spec.trials,
            status: "ok".into(),
        };
        match res {
            Ok(v) => {
                let planted: Vec<f64> = v.iter().map(|((a, _), _)| *a).collect();
                let null: Vec<f64> = v.iter().map(|((_, b), _)| *b).collect();
                let mut thresholds: Vec<f64> = planted.iter().chain(&null).copied().collect();
                thresholds.push(corr_threshold(cell.p, &CorrConfig::new(cell.eps)?));
                thresholds.push(f64::INFINITY);
                thresholds.sort_by(|a, b| b.total_cmp(a));
                thresholds.dedup();
                let t = spec.trials as f64;
                for thr in thresholds {
                    let tpr = planted.iter().filter(|&&s| s >= thr).count() as f64 / t;
                    let fpr = null.iter().filter(|&&s| s >= thr).count() as f64 / t;
                    rows.push(RocRow { threshold: Some(thr), tpr: Some(tpr), fpr: Some(fpr), ..base.clone() });
                }
            }
            Err(e) => rows.push(RocRow { status: status_of(&e), ..base }),
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chi2Row {
    pub regime: ChiRegimeKind,
    /// Mixture weight, for the symmetric regime only.
    pub phi: Option<String>,
    pub p: usize,
    pub n: usize,
    pub k: usize,
    pub sigma2: String,
    pub degree: usize,
    pub chi2: Option<f64>,
    /// Exact rational in rational mode.
    pub chi2_exact: Option<String>,
    pub arithmetic: &'static str,
    pub status: String,
}

pub const CHI2_HEADER: &[&str] = &["regime", "phi", "p", "n", "k", "sigma2", "degree", "chi2", "chi2_exact", "arithmetic", "status"];

impl CsvRow for Chi2Row {
    fn header() -> &'static [&'static str] {
        CHI2_HEADER
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.regime.to_string(),
            opt(self.phi.clone()),
            self.p.to_string(),
            self.n.to_string(),
            self.k.to_string(),
            self.sigma2.clone(),
            self.degree.to_string(),
            opt(self.chi2),
            opt(self.chi2_exact.clone()),
            self.arithmetic.into(),
            self.status.clone(),
        ]
    }

    fn ok(&self) -> bool {
        self.status == "ok"
    }
}

/// χ²_{≤D} over the grid of (regime, φ, p, k, n, σ², D). One evaluation at
/// the largest D serves every smaller degree through cumulative sums.
pub fn run_chi2_sweep(spec: &ExperimentSpec) -> Result<Vec<Chi2Row>> {
    spec.validate()?;
    let SampleSizes::Absolute(ns) = &spec.n else {
        return Err(Error::InvalidParams("chi2sweep takes absolute n values".into()));
    };
    let max_d = *spec.degrees.iter().max().expect("validated nonempty");
    let arithmetic = if spec.float_arithmetic { "float" } else { "rational" };
    let mut jobs = Vec::new();
    for &kind in &spec.regimes {
        let phis: Vec<Option<&num_rational::BigRational>> = if kind == ChiRegimeKind::Sym { spec.phi_exact.iter().map(Some).collect() } else { vec![None] };
        for phi in phis {
            for &p in &spec.p {
                for &k in &spec.k {
                    for &n in ns {
                        for s2 in &spec.sigma2 {
                            jobs.push((kind, phi.cloned(), p, k, n, s2.clone()));
                        }
                    }
                }
            }
        }
    }
    let evaluated: Vec<Result<(Vec<f64>, Option<Vec<num_rational::BigRational>>)>> = jobs
        .par_iter()
        .map(|(kind, phi, p, k, n, s2)| {
            let values = UnitValues::from_value_set(&spec.values)?;
            let regime = match kind {
                ChiRegimeKind::Slrd => ChiRegime::Slrd,
                ChiRegimeKind::Sbmslrd => ChiRegime::Sbmslrd,
                ChiRegimeKind::Sym => ChiRegime::SymUnbalanced { phi: phi.clone().expect("sym carries phi") },
            };
            let mut cfg = ChiSqConfig::new(*p, *n, *k, s2.clone(), max_d, regime, values);
            if spec.float_arithmetic {
                cfg = cfg.float();
            }
            let r = chi2(&cfg)?;
            let exact = r.exact.as_ref().map(|e| {
                e.terms
                    .iter()
                    .scan(num_rational::BigRational::zero(), |acc, t| {
                        *acc += t;
                        Some(acc.clone())
                    })
                    .collect()
            });
            Ok((r.cumulative(), exact))
        })
        .collect();
    let mut rows = Vec::new();
    for ((kind, phi, p, k, n, s2), res) in jobs.into_iter().zip(evaluated) {
        for &d in &spec.degrees {
            let base = Chi2Row {
                regime: kind,
                phi: phi.as_ref().map(|v| v.to_string()),
                p,
                n,
                k,
                sigma2: s2.to_string(),
                degree: d,
                chi2: None,
                chi2_exact: None,
                arithmetic,
                status: "ok".into(),
            };
            rows.push(match &res {
                Ok((cum, exact)) => Chi2Row { chi2: Some(cum[d]), chi2_exact: exact.as_ref().map(|e| e[d].to_string()), ..base },
                Err(e) => Chi2Row { status: status_of(e), ..base },
            });
        }
    }
    Ok(rows)
}

/// Rows written and failed cells, for exit-code selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunSummary {
    pub rows: usize,
    pub failed_rows: usize,
}

/// Runs the experiment named by the spec and writes its CSV.
pub fn run_experiment(spec: &ExperimentSpec, w: impl Write) -> Result<RunSummary> {
    fn done<R: CsvRow>(rows: Vec<R>, w: impl Write) -> Result<RunSummary> {
        write_csv(&rows, w)?;
        Ok(RunSummary { rows: rows.len(), failed_rows: failed_rows(&rows) })
    }
    match spec.experiment {
        ExperimentKind::Phase => done(run_phase(spec)?, w),
        ExperimentKind::RecoveryCurve => done(run_recovery_curve(spec)?, w),
        ExperimentKind::Roc => done(run_roc(spec)?, w),
        ExperimentKind::Chi2Sweep => done(run_chi2_sweep(spec)?, w),
    }
}
