//! Command-line front end. Exit codes: 0 success, 2 when some experiment cells
//! failed, 1 on a fatal error.

use clap::{Parser, Subcommand, ValueEnum};
use mslr::corr::{corr_statistics, corr_threshold, CorrConfig, SupportEstimate};
use mslr::gen::{sample_detection, sample_instance, sample_signal_pair, Hypothesis};
use mslr::harness::{emit_plots, run_experiment, ExperimentKind, ExperimentSpec, PlotKind};
use mslr::io::{InstanceFile, Metadata};
use mslr::lowdeg::exact::parse_rational;
use mslr::lowdeg::{chi2, ChiRegime, ChiSqConfig, UnitValues};
use mslr::model::{ModelParams, ValueSet};
use mslr::recovery::{recover_balanced, recover_noiseless, ConvexOptions, Proportions, RecoveryResult};
use mslr::reductions::{detect_via_recovery, pad_embed, pad_instance, spr_transform, PadConfig, SprMode};
use mslr::{Error, Result};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "mslr", version, about = "Mixed sparse linear regression toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Recovery,
    Planted,
    Null,
}

#[derive(Clone, Copy, ValueEnum)]
enum CorrMode {
    Detect,
    Support,
    Signed,
}

#[derive(Clone, Copy, ValueEnum)]
enum PipelineArg {
    Am,
    Convex,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    Slrd,
    Sbmslrd,
    Sym,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReduceOp {
    Pad,
    SprAbs,
    SprSq,
    DetectViaRecovery,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file.
    Gen {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 0.5)]
        phi: f64,
        #[arg(long, default_value_t = 1.0)]
        xi: f64,
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        #[arg(long, default_value = "pm1")]
        values: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Model::Recovery)]
        model: Model,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CORR screening on an instance file.
    Corr {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = CorrMode::Support)]
        mode: CorrMode,
    },
    /// Full recovery on an instance file.
    Recover {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = PipelineArg::Am)]
        pipeline: PipelineArg,
        #[arg(long, default_value_t = 5)]
        t0: usize,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
    },
    /// Low-degree chi-square by degree.
    Chi2 {
        #[arg(long, value_enum)]
        regime: RegimeArg,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Rational, e.g. `1`, `1/2` or `0.25`.
        #[arg(long)]
        sigma2: String,
        #[arg(long = "D")]
        degree: usize,
        #[arg(long)]
        phi: Option<String>,
        #[arg(long, default_value = "pm1")]
        values: String,
        /// Rational arithmetic with exact columns.
        #[arg(long)]
        exact: bool,
    },
    /// Apply a reduction to an instance file.
    Reduce {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        op: ReduceOp,
        #[arg(long, default_value_t = 0.5)]
        c: f64,
        /// Overrides the noise level recorded in the file.
        #[arg(long)]
        sigma: Option<f64>,
        /// Transform seed; defaults to the file seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Phase-diagram or recovery-curve experiment.
    Phase(ExperimentArgs),
    /// ROC experiment.
    Roc(ExperimentArgs),
    /// Chi-square sweep.
    Sweep(ExperimentArgs),
    /// Gnuplot script and SVG from an experiment CSV.
    Plot {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        kind: String,
    },
}

#[derive(clap::Args)]
struct ExperimentArgs {
    #[arg(long)]
    spec: PathBuf,
    /// Overrides the spec's `output` key; stdout when neither is given.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Writes to `path` or stdout.
fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn csv_writer(w: Box<dyn Write>) -> csv::Writer<Box<dyn Write>> {
    csv::Writer::from_writer(w)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(";")
}

fn gen(cmd: Command) -> Result<()> {
    let Command::Gen { p, n, k, sigma, phi, xi, tau, values, seed, model, out } = cmd else { unreachable!() };
    let values: ValueSet = values.parse()?;
    let params = ModelParams::new(p, n, k, sigma, phi, values.clone())?;
    let signals = sample_signal_pair(p, k, &values, xi, tau, seed)?;
    let mut file = match model {
        Model::Recovery => InstanceFile::from_instance(&sample_instance(&params, &signals, seed)?),
        Model::Planted => InstanceFile::from_detection(&sample_detection(&params, &signals, Hypothesis::Planted, seed)?),
        Model::Null => InstanceFile::from_detection(&sample_detection(&params, &signals, Hypothesis::Null, seed)?),
    };
    file.meta.xi = xi;
    file.meta.tau = tau;
    file.write_to(sink(out.as_deref())?)
}

fn corr(input: &Path, eps: f64, mode: CorrMode) -> Result<()> {
    let file = InstanceFile::read_path(input)?;
    let cfg = CorrConfig::new(eps)?;
    let est = SupportEstimate::from_statistics(corr_statistics(&file.x, &file.y)?, corr_threshold(file.meta.p, &cfg));
    let mut out = std::io::stdout().lock();
    match mode {
        CorrMode::Detect => writeln!(out, "{}", est.detect())?,
        CorrMode::Support => {
            let idx: Vec<String> = est.indices.iter().map(|i| i.to_string()).collect();
            writeln!(out, "{}", idx.join(","))?;
        }
        CorrMode::Signed => {
            let s: Vec<String> = est.signed().iter().map(|v| v.to_string()).collect();
            writeln!(out, "{}", s.join(","))?;
        }
    }
    Ok(())
}

fn recover(input: &Path, pipeline: PipelineArg, t0: usize, lambda: Option<f64>, eps: f64) -> Result<()> {
    let file = InstanceFile::read_path(input)?;
    let cfg = CorrConfig::new(eps)?;
    let mut res: RecoveryResult = match pipeline {
        PipelineArg::Am => recover_noiseless(&file.x, &file.y, &cfg, t0, Proportions::Estimated)?,
        PipelineArg::Convex => recover_balanced(&file.x, &file.y, &cfg, file.meta.sigma, &ConvexOptions { lambda, ..ConvexOptions::default() })?,
    };
    if let Some(truth) = file.meta.signals() {
        res = res.with_truth(&truth)?;
    }
    let mut w = csv_writer(sink(None)?);
    w.write_record(["pipeline", "iterations", "rho", "flags", "beta1_hat", "beta2_hat"]).map_err(csv_err)?;
    let flags: Vec<String> = res.flags.iter().map(|f| f.to_string()).collect();
    let rho = res.rho.map(|r| r.to_string()).unwrap_or_default();
    w.write_record([res.pipeline.to_string(), res.iterations.to_string(), rho, flags.join(";"), join(&res.beta1_hat), join(&res.beta2_hat)]).map_err(csv_err)?;
    w.flush()?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn chi2_cmd(regime: RegimeArg, p: usize, n: usize, k: usize, sigma2: &str, degree: usize, phi: Option<String>, values: &str, exact: bool) -> Result<()> {
    let regime = match regime {
        RegimeArg::Slrd => ChiRegime::Slrd,
        RegimeArg::Sbmslrd => ChiRegime::Sbmslrd,
        RegimeArg::Sym => {
            let phi = phi.ok_or_else(|| Error::InvalidParams("--phi is required for the sym regime".into()))?;
            ChiRegime::SymUnbalanced { phi: parse_rational(&phi)? }
        }
    };
    let values = UnitValues::from_value_set(&values.parse()?)?;
    let mut cfg = ChiSqConfig::new(p, n, k, parse_rational(sigma2)?, degree, regime, values);
    cfg = if exact { cfg.rational() } else { cfg.float() };
    let r = chi2(&cfg)?;
    let cumulative = r.cumulative();
    let mut w = csv_writer(sink(None)?);
    let mut header = vec!["degree", "term", "cumulative"];
    if exact {
        header.extend(["term_exact", "cumulative_exact"]);
    }
    w.write_record(&header).map_err(csv_err)?;
    let mut acc = num_rational::BigRational::from_integer(0.into());
    for (d, (t, c)) in r.terms.iter().zip(&cumulative).enumerate() {
        let mut rec = vec![d.to_string(), t.to_string(), c.to_string()];
        if let Some(e) = &r.exact {
            acc += &e.terms[d];
            rec.push(e.terms[d].to_string());
            rec.push(acc.to_string());
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn reduce(input: &Path, op: ReduceOp, c: f64, sigma: Option<f64>, seed: Option<u64>, out: Option<&Path>) -> Result<()> {
    let file = InstanceFile::read_path(input)?;
    let sigma = sigma.unwrap_or(file.meta.sigma);
    let seed = seed.unwrap_or(file.meta.seed);
    match op {
        ReduceOp::Pad => {
            let (x, y, rec) = pad_instance(&file.x, &file.y, &PadConfig { c, sigma, permutation_seed: seed })?;
            let embed = |b: &Option<Vec<f64>>| b.as_ref().map(|b| pad_embed(b, &rec)).transpose();
            let meta = Metadata {
                p: rec.total(),
                k: file.meta.k + rec.padded,
                phi: 0.5,
                beta1: embed(&file.meta.beta1)?,
                beta2: embed(&file.meta.beta2)?,
                ..file.meta.clone()
            };
            InstanceFile { meta, x, y, z: vec![-1; file.y.len()] }.write_to(sink(out)?)
        }
        ReduceOp::SprAbs | ReduceOp::SprSq => {
            let mode = if matches!(op, ReduceOp::SprAbs) { SprMode::Abs } else { SprMode::Square };
            let (x, y) = spr_transform(&file.x, &file.y, mode, seed);
            InstanceFile { x, y, ..file }.write_to(sink(out)?)
        }
        ReduceOp::DetectViaRecovery => {
            // Oracle recovery when the file carries the signals; otherwise the
            // AM pipeline on σy, which follows the recovery model with noise σ.
            let truth = file.meta.signals();
            let (h, stat) = detect_via_recovery(
                &file.x,
                &file.y,
                |x, y| match truth {
                    Some(t) => Ok((t.beta1.clone(), t.beta2.clone())),
                    None => {
                        let scaled: Vec<f64> = y.iter().map(|v| v * sigma).collect();
                        let r = recover_noiseless(x, &scaled, &CorrConfig::new(0.5)?, 5, Proportions::Estimated)?;
                        Ok((r.beta1_hat, r.beta2_hat))
                    }
                },
                sigma,
            )?;
            let mut w = sink(out)?;
            writeln!(w, "{h},{stat}")?;
            Ok(())
        }
    }
}

fn experiment(args: &ExperimentArgs, allowed: &[ExperimentKind]) -> Result<u8> {
    let spec = ExperimentSpec::parse(&std::fs::read_to_string(&args.spec)?)?;
    if !allowed.contains(&spec.experiment) {
        return Err(Error::InvalidParams(format!("experiment {} is not handled by this subcommand", spec.experiment)));
    }
    let out = args.out.clone().or(spec.output.clone());
    let summary = run_experiment(&spec, sink(out.as_deref())?)?;
    if summary.failed_rows > 0 {
        eprintln!("{} of {} rows failed", summary.failed_rows, summary.rows);
        return Ok(2);
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        cmd @ Command::Gen { .. } => gen(cmd)?,
        Command::Corr { input, eps, mode } => corr(&input, eps, mode)?,
        Command::Recover { input, pipeline, t0, lambda, eps } => recover(&input, pipeline, t0, lambda, eps)?,
        Command::Chi2 { regime, p, n, k, sigma2, degree, phi, values, exact } => chi2_cmd(regime, p, n, k, &sigma2, degree, phi, &values, exact)?,
        Command::Reduce { input, op, c, sigma, seed, out } => reduce(&input, op, c, sigma, seed, out.as_deref())?,
        Command::Phase(a) => return experiment(&a, &[ExperimentKind::Phase, ExperimentKind::RecoveryCurve]),
        Command::Roc(a) => return experiment(&a, &[ExperimentKind::Roc]),
        Command::Sweep(a) => return experiment(&a, &[ExperimentKind::Chi2Sweep]),
        Command::Plot { csv, kind } => {
            let (gp, svg) = emit_plots(&csv, kind.parse::<PlotKind>()?)?;
            println!("{}\n{}", gp.display(), svg.display());
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
