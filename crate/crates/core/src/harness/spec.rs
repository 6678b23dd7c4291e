//! Experiment spec files: flat `key = value` lines, `#` comments, list values
//! separated by commas.
//!
//! | key | meaning | default |
//! |---|---|---|
//! | `experiment` | `phase`, `roc`, `chi2sweep` or `recovery-curve` | required |
//! | `algorithm` | `support`, `signed`, `detect`, `recover-am`, `recover-convex` | `support` (`recover-am` for recovery-curve) |
//! | `p`, `k` | dimensions | required |
//! | `n` | absolute sample sizes | one of `n`, `n_mult` |
//! | `n_mult`, `n_base` | multipliers of `corr`, `lowdeg-alg-sbmslr`, `lowdeg-alg-slr` or `lowdeg-it-slr` | `n_base = corr` |
//! | `sigma` or `snr` | noise level, or ‖β‖²/σ² with the nominal norm | `sigma = 1` |
//! | `phi`, `xi`, `tau`, `eps` | mixture weight, overlap targets, CORR slack | `0.5`, `1`, `1`, `0.5` |
//! | `values` | `pm1`, `p1` or a `;`-separated list | `pm1` |
//! | `trials`, `seed` | Monte-Carlo size and master seed | `100`, `0` |
//! | `t0`, `proportions`, `lambda`, `rho_tol` | recovery settings | `5`, `estimated`, default rule, `1e-8` |
//! | `regime`, `sigma2`, `degree`, `arithmetic` | chi-square sweep (`phi` is read as an exact rational there) | `slrd`, `1`, `0,2,4`, `rational` |
//! | `timing` | fill the wall-time column | `false` |
//! | `output` | default CSV path | none |

use crate::error::{Error, Result};
use crate::lowdeg::exact::{parse_rational, to_f64};
use crate::model::ValueSet;
use num_rational::BigRational;
use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Phase,
    Roc,
    Chi2Sweep,
    RecoveryCurve,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// Exact joint support by CORR.
    Support,
    /// Exact signed support by signed CORR.
    Signed,
    /// CORR planted-vs-null decision.
    Detect,
    RecoverAm,
    RecoverConvex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NBase {
    Corr,
    LowdegAlgSbmslr,
    LowdegAlgSlr,
    LowdegItSlr,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SampleSizes {
    Absolute(Vec<usize>),
    Multiples { base: NBase, factors: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Noise {
    Sigma(Vec<f64>),
    Snr(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChiRegimeKind {
    Slrd,
    Sbmslrd,
    Sym,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub experiment: ExperimentKind,
    pub algorithm: Algorithm,
    pub p: Vec<usize>,
    pub k: Vec<usize>,
    pub n: SampleSizes,
    pub noise: Noise,
    pub phi: Vec<f64>,
    pub xi: Vec<f64>,
    pub tau: Vec<f64>,
    pub eps: Vec<f64>,
    pub values: ValueSet,
    pub trials: usize,
    pub master_seed: u64,
    pub t0: usize,
    pub known_proportions: bool,
    pub lambda: Option<f64>,
    pub rho_tol: f64,
    pub regimes: Vec<ChiRegimeKind>,
    /// `phi` as exact rationals, for the symmetric chi-square regime.
    pub phi_exact: Vec<BigRational>,
    pub sigma2: Vec<BigRational>,
    pub degrees: Vec<usize>,
    pub float_arithmetic: bool,
    pub timing: bool,
    pub output: Option<PathBuf>,
}

macro_rules! named_enum {
    ($ty:ty, $what:literal, $($name:literal => $v:expr),+ $(,)?) => {
        impl std::str::FromStr for $ty {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s.trim() {
                    $($name => Ok($v),)+
                    other => Err(Error::Parse(format!(concat!("unknown ", $what, " {:?}"), other))),
                }
            }
        }
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                $(if *self == $v { return f.write_str($name); })+
                unreachable!()
            }
        }
    };
}

named_enum!(ExperimentKind, "experiment", "phase" => ExperimentKind::Phase, "roc" => ExperimentKind::Roc, "chi2sweep" => ExperimentKind::Chi2Sweep, "recovery-curve" => ExperimentKind::RecoveryCurve);
named_enum!(Algorithm, "algorithm", "support" => Algorithm::Support, "signed" => Algorithm::Signed, "detect" => Algorithm::Detect, "recover-am" => Algorithm::RecoverAm, "recover-convex" => Algorithm::RecoverConvex);
named_enum!(NBase, "n_base", "corr" => NBase::Corr, "lowdeg-alg-sbmslr" => NBase::LowdegAlgSbmslr, "lowdeg-alg-slr" => NBase::LowdegAlgSlr, "lowdeg-it-slr" => NBase::LowdegItSlr);
named_enum!(ChiRegimeKind, "regime", "slrd" => ChiRegimeKind::Slrd, "sbmslrd" => ChiRegimeKind::Sbmslrd, "sym" => ChiRegimeKind::Sym);

const KEYS: &[&str] = &[
    "experiment", "algorithm", "p", "k", "n", "n_mult", "n_base", "sigma", "snr", "phi", "xi", "tau", "eps", "values", "trials", "seed", "t0", "proportions", "lambda", "rho_tol", "regime",
    "sigma2", "degree", "arithmetic", "timing", "output",
];

fn list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>>
where
    T::Err: fmt::Display,
{
    v.split(',').map(|t| t.trim().parse::<T>().map_err(|e| Error::Parse(format!("{key}: {t:?}: {e}")))).collect()
}

fn one<T: std::str::FromStr>(key: &str, v: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    v.trim().parse::<T>().map_err(|e| Error::Parse(format!("{key}: {v:?}: {e}")))
}

impl ExperimentSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let mut kv: BTreeMap<String, String> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse(format!("line {}: expected key = value", lineno + 1)))?;
            let k = k.trim().to_string();
            if !KEYS.contains(&k.as_str()) {
                return Err(Error::Parse(format!("line {}: unknown key {k:?}", lineno + 1)));
            }
            if kv.insert(k.clone(), v.trim().to_string()).is_some() {
                return Err(Error::Parse(format!("line {}: duplicate key {k:?}", lineno + 1)));
            }
        }
        Self::from_map(&kv)
    }

    pub fn from_map(kv: &BTreeMap<String, String>) -> Result<Self> {
        let get = |k: &str| kv.get(k).map(String::as_str);
        let experiment: ExperimentKind = one("experiment", get("experiment").ok_or_else(|| Error::Parse("missing key \"experiment\"".into()))?)?;
        let default_alg = if experiment == ExperimentKind::RecoveryCurve { "recover-am" } else { "support" };
        let algorithm: Algorithm = one("algorithm", get("algorithm").unwrap_or(default_alg))?;
        let p = list::<usize>("p", get("p").ok_or_else(|| Error::Parse("missing key \"p\"".into()))?)?;
        let k = list::<usize>("k", get("k").ok_or_else(|| Error::Parse("missing key \"k\"".into()))?)?;
        let n = match (get("n"), get("n_mult")) {
            (Some(v), None) => SampleSizes::Absolute(list("n", v)?),
            (None, Some(v)) => SampleSizes::Multiples { base: one("n_base", get("n_base").unwrap_or("corr"))?, factors: list("n_mult", v)? },
            (Some(_), Some(_)) => return Err(Error::Parse("give either n or n_mult, not both".into())),
            (None, None) => return Err(Error::Parse("missing key \"n\" or \"n_mult\"".into())),
        };
        let noise = match (get("sigma"), get("snr")) {
            (Some(_), Some(_)) => return Err(Error::Parse("give either sigma or snr, not both".into())),
            (None, Some(v)) => Noise::Snr(list("snr", v)?),
            (s, None) => Noise::Sigma(list("sigma", s.unwrap_or("1"))?),
        };
        let phi_text = get("phi").unwrap_or("0.5");
        let proportions = get("proportions").unwrap_or("estimated");
        let known_proportions = match proportions {
            "known" => true,
            "estimated" => false,
            other => return Err(Error::Parse(format!("proportions: {other:?} is neither known nor estimated"))),
        };
        let arithmetic = get("arithmetic").unwrap_or("rational");
        let float_arithmetic = match arithmetic {
            "rational" => false,
            "float" => true,
            other => return Err(Error::Parse(format!("arithmetic: {other:?} is neither rational nor float"))),
        };
        let phi_exact: Vec<BigRational> = phi_text.split(',').map(parse_rational).collect::<Result<_>>()?;
        let spec = ExperimentSpec {
            experiment,
            algorithm,
            p,
            k,
            n,
            noise,
            phi: phi_exact.iter().map(to_f64).collect(),
            xi: list("xi", get("xi").unwrap_or("1"))?,
            tau: list("tau", get("tau").unwrap_or("1"))?,
            eps: list("eps", get("eps").unwrap_or("0.5"))?,
            values: one("values", get("values").unwrap_or("pm1"))?,
            trials: one("trials", get("trials").unwrap_or("100"))?,
            master_seed: one("seed", get("seed").unwrap_or("0"))?,
            t0: one("t0", get("t0").unwrap_or("5"))?,
            known_proportions,
            lambda: get("lambda").map(|v| one("lambda", v)).transpose()?,
            rho_tol: one("rho_tol", get("rho_tol").unwrap_or("1e-8"))?,
            regimes: list("regime", get("regime").unwrap_or("slrd"))?,
            phi_exact,
            sigma2: get("sigma2").unwrap_or("1").split(',').map(parse_rational).collect::<Result<_>>()?,
            degrees: list("degree", get("degree").unwrap_or("0,2,4"))?,
            float_arithmetic,
            timing: one("timing", get("timing").unwrap_or("false"))?,
            output: get("output").map(PathBuf::from),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParams("trials must be >= 1".into()));
        }
        let n_empty = match &self.n {
            SampleSizes::Absolute(v) => v.is_empty(),
            SampleSizes::Multiples { factors, .. } => factors.is_empty(),
        };
        if self.p.is_empty() || self.k.is_empty() || n_empty || self.phi.is_empty() || self.xi.is_empty() || self.tau.is_empty() || self.eps.is_empty() {
            return Err(Error::InvalidParams("every grid axis needs at least one value".into()));
        }
        for &p in &self.p {
            for &k in &self.k {
                if k > p {
                    return Err(Error::InvalidParams(format!("grid point k = {k} exceeds p = {p}")));
                }
            }
        }
        if self.experiment == ExperimentKind::RecoveryCurve && !matches!(self.algorithm, Algorithm::RecoverAm | Algorithm::RecoverConvex) {
            return Err(Error::InvalidParams("recovery-curve needs a recover-* algorithm".into()));
        }
        if self.experiment == ExperimentKind::Chi2Sweep && (self.regimes.is_empty() || self.degrees.is_empty()) {
            return Err(Error::InvalidParams("chi2sweep needs regime and degree values".into()));
        }
        if self.experiment == ExperimentKind::Chi2Sweep && !matches!(self.n, SampleSizes::Absolute(_)) {
            return Err(Error::InvalidParams("chi2sweep takes absolute n values".into()));
        }
        Ok(())
    }

    /// The σ or snr axis, whichever was given.
    pub fn noise_values(&self) -> &[f64] {
        match &self.noise {
            Noise::Sigma(v) | Noise::Snr(v) => v,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_phase_spec() {
        let s = ExperimentSpec::parse(
            "# SLR phase diagram\nexperiment = phase\nalgorithm = signed\np = 100, 200\nk = 5\nn_mult = 0.25,0.5,1,2\nsnr = 10\nxi = 1\ntau = 1\ntrials = 20\nseed = 7\n",
        )
        .unwrap();
        assert_eq!(s.experiment, ExperimentKind::Phase);
        assert_eq!(s.algorithm, Algorithm::Signed);
        assert_eq!(s.p, vec![100, 200]);
        assert_eq!(s.n, SampleSizes::Multiples { base: NBase::Corr, factors: vec![0.25, 0.5, 1.0, 2.0] });
        assert_eq!(s.noise, Noise::Snr(vec![10.0]));
        assert_eq!(s.master_seed, 7);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(ExperimentSpec::parse("experiment = phase\np = 3\nk = 5\nn = 10\n").is_err());
        assert!(ExperimentSpec::parse("experiment = phase\np = 10\nk = 5\nn = 10\ntrials = 0\n").is_err());
        assert!(ExperimentSpec::parse("experiment = phase\np = 10\nk = 5\nn = 10\nbogus = 1\n").is_err());
        assert!(ExperimentSpec::parse("experiment = phase\np = 10\nk = 5\n").is_err());
        assert!(ExperimentSpec::parse("experiment = warp\np = 10\nk = 5\nn = 1\n").is_err());
        assert!(ExperimentSpec::parse("experiment = phase\np = 10\np = 11\nk = 5\nn = 1\n").is_err());
    }

    #[test]
    fn chi2_defaults() {
        let s = ExperimentSpec::parse("experiment = chi2sweep\nregime = slrd,sym\nphi = 3/10\np = 4\nk = 2\nn = 1,2\nsigma2 = 2\ndegree = 0,2,4\n").unwrap();
        assert_eq!(s.regimes, vec![ChiRegimeKind::Slrd, ChiRegimeKind::Sym]);
        assert_eq!(s.phi_exact[0], BigRational::new(3.into(), 10.into()));
        assert_eq!(s.phi, vec![0.3]);
        assert!(!s.float_arithmetic);
        assert_eq!(Algorithm::RecoverConvex.to_string(), "recover-convex");
    }
}
