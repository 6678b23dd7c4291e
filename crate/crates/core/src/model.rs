//! Domain types, regime classification and closed-form sample-size helpers.

use crate::error::{Error, Result};
use std::fmt;

/// Finite set of allowed nonzero signal entries, stored sorted and deduplicated.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueSet(Vec<f64>);

impl ValueSet {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParams("value set is empty".into()));
        }
        if values.iter().any(|v| *v == 0.0 || !v.is_finite()) {
            return Err(Error::InvalidParams("value set entries must be finite and nonzero".into()));
        }
        values.sort_by(|a, b| a.total_cmp(b));
        values.dedup();
        Ok(ValueSet(values))
    }

    /// {-1, +1}
    pub fn pm1() -> Self {
        ValueSet(vec![-1.0, 1.0])
    }

    /// {+1}
    pub fn p1() -> Self {
        ValueSet(vec![1.0])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn b_min(&self) -> f64 {
        self.0.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min)
    }

    pub fn b_max(&self) -> f64 {
        self.0.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub fn is_pm1(&self) -> bool {
        self.0 == [-1.0, 1.0]
    }

    pub fn is_p1(&self) -> bool {
        self.0 == [1.0]
    }

    pub fn contains(&self, v: f64) -> bool {
        self.0.contains(&v)
    }

    /// Mean of v² over the set; equals ‖β‖²/k for unit-magnitude sets.
    pub fn mean_sq(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>() / self.0.len() as f64
    }
}

impl fmt::Display for ValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_pm1() {
            return write!(f, "pm1");
        }
        if self.is_p1() {
            return write!(f, "p1");
        }
        let parts: Vec<String> = self.0.iter().map(|v| format!("{v}")).collect();
        write!(f, "{}", parts.join(";"))
    }
}

impl std::str::FromStr for ValueSet {
    type Err = Error;

    /// Accepts `pm1`, `p1`, or a `;`-separated list of reals.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "pm1" => Ok(ValueSet::pm1()),
            "p1" => Ok(ValueSet::p1()),
            other => {
                let vals = other
                    .split(';')
                    .map(|t| t.trim().parse::<f64>().map_err(|e| Error::Parse(format!("value set entry {t:?}: {e}"))))
                    .collect::<Result<Vec<f64>>>()?;
                ValueSet::new(vals)
            }
        }
    }
}

/// The (p, n, k, σ, φ, 𝒟) tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub p: usize,
    pub n: usize,
    pub k: usize,
    pub sigma: f64,
    pub phi: f64,
    pub value_set: ValueSet,
}

impl ModelParams {
    pub fn new(p: usize, n: usize, k: usize, sigma: f64, phi: f64, value_set: ValueSet) -> Result<Self> {
        let m = ModelParams { p, n, k, sigma, phi, value_set };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p == 0 || self.n == 0 || self.k == 0 {
            return Err(Error::InvalidParams("p, n, k must be positive".into()));
        }
        if self.k > self.p {
            return Err(Error::InvalidParams(format!("k = {} exceeds p = {}", self.k, self.p)));
        }
        if !(self.sigma >= 0.0) || !self.sigma.is_finite() {
            return Err(Error::InvalidParams("sigma must be finite and >= 0".into()));
        }
        if !(0.0..=1.0).contains(&self.phi) {
            return Err(Error::InvalidParams("phi must lie in [0, 1]".into()));
        }
        Ok(())
    }

    pub fn with_n(&self, n: usize) -> Self {
        ModelParams { n, ..self.clone() }
    }

    /// ‖β‖² implied by the value set: k·mean(v²), exact for unit-magnitude sets.
    pub fn nominal_norm_sq(&self) -> f64 {
        self.k as f64 * self.value_set.mean_sq()
    }
}

/// Two k-sparse signals with their overlap coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalPair {
    pub beta1: Vec<f64>,
    pub beta2: Vec<f64>,
    pub support1: Vec<usize>,
    pub support2: Vec<usize>,
    /// |S₁ ∩ S₂| / k
    pub xi: f64,
    /// ⟨β₁, β₂⟩ / |S₁ ∩ S₂|, zero for disjoint supports.
    pub tau: f64,
    pub norm: f64,
    /// Requested tau, when the pair came from the generator.
    pub tau_target: Option<f64>,
    /// False when the requested tau could not be met exactly.
    pub tau_exact: bool,
}

impl SignalPair {
    /// Builds a pair from explicit vectors, deriving supports, ξ, τ and the norm.
    pub fn from_vectors(beta1: Vec<f64>, beta2: Vec<f64>) -> Result<Self> {
        if beta1.len() != beta2.len() {
            return Err(Error::DimensionMismatch(format!("beta1 has length {}, beta2 has {}", beta1.len(), beta2.len())));
        }
        let support1 = support_of(&beta1);
        let support2 = support_of(&beta2);
        if support1.len() != support2.len() {
            return Err(Error::InvalidParams("signals must share the sparsity level".into()));
        }
        let n1 = norm2(&beta1);
        let n2 = norm2(&beta2);
        if (n1 - n2).abs() > 1e-12 * n1.max(1.0) {
            return Err(Error::InvalidParams(format!("signal norms differ: {n1} vs {n2}")));
        }
        let inter = intersection_len(&support1, &support2);
        let k = support1.len();
        let xi = if k == 0 { 0.0 } else { inter as f64 / k as f64 };
        let tau = if inter == 0 { 0.0 } else { dot(&beta1, &beta2) / inter as f64 };
        Ok(SignalPair { beta1, beta2, support1, support2, xi, tau, norm: n1, tau_target: None, tau_exact: true })
    }

    pub fn p(&self) -> usize {
        self.beta1.len()
    }

    pub fn k(&self) -> usize {
        self.support1.len()
    }

    /// Sorted S₁ ∪ S₂.
    pub fn joint_support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.support1.iter().chain(self.support2.iter()).copied().collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn norm_sq(&self) -> f64 {
        self.norm * self.norm
    }
}

pub(crate) fn support_of(v: &[f64]) -> Vec<usize> {
    v.iter().enumerate().filter(|(_, x)| **x != 0.0).map(|(i, _)| i).collect()
}

pub(crate) fn intersection_len(a: &[usize], b: &[usize]) -> usize {
    a.iter().filter(|i| b.binary_search(i).is_ok()).count()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeTag {
    Slr,
    Sbmslr,
    Psbmslr,
    General,
}

impl fmt::Display for RegimeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RegimeTag::Slr => "SLR",
            RegimeTag::Sbmslr => "SBMSLR",
            RegimeTag::Psbmslr => "PSBMSLR",
            RegimeTag::General => "GENERAL",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Regime {
    pub tag: RegimeTag,
    /// min over S₁∪S₂ of (φβ₁ⱼ + (1−φ)β₂ⱼ)²
    pub beta_avg_min_sq: f64,
    /// Same minimum over indices where the combination is strictly positive.
    pub beta_pos_min_sq: Option<f64>,
    /// ‖β‖²/σ²; infinite when σ = 0.
    pub snr: f64,
    pub norm_sq: f64,
    pub phi: f64,
}

/// Exact float comparison is intended: generators emit exact value-set members.
pub fn classify_regime(signals: &SignalPair, phi: f64, sigma: f64) -> Regime {
    let b1 = &signals.beta1;
    let b2 = &signals.beta2;
    let joint = signals.joint_support();
    let is_slr = b1 == b2;
    let is_sb = phi == 0.5 && !joint.is_empty() && b1.iter().zip(b2).all(|(a, b)| *a == -*b);
    let has_opposed = joint.iter().any(|&j| b1[j] != 0.0 && b1[j] == -b2[j]);
    let tag = if is_slr {
        RegimeTag::Slr
    } else if is_sb {
        RegimeTag::Sbmslr
    } else if phi == 0.5 && has_opposed {
        RegimeTag::Psbmslr
    } else {
        RegimeTag::General
    };
    let mut avg_min = f64::INFINITY;
    let mut pos_min: Option<f64> = None;
    for &j in &joint {
        let c = phi * b1[j] + (1.0 - phi) * b2[j];
        let sq = c * c;
        avg_min = avg_min.min(sq);
        if c > 0.0 {
            pos_min = Some(pos_min.map_or(sq, |m: f64| m.min(sq)));
        }
    }
    if joint.is_empty() {
        avg_min = 0.0;
    }
    let norm_sq = signals.norm_sq();
    let snr = if sigma == 0.0 { f64::INFINITY } else { norm_sq / (sigma * sigma) };
    Regime { tag, beta_avg_min_sq: avg_min, beta_pos_min_sq: pos_min, snr, norm_sq, phi }
}

/// (snr+1)/snr with the noiseless limit 1.
pub fn snr_factor(snr: f64) -> f64 {
    if snr.is_infinite() {
        1.0
    } else {
        (snr + 1.0) / snr
    }
}

/// Sample size at which CORR recovers the joint support (signed support for SLR).
pub fn corr_sample_bound(regime: &Regime, params: &ModelParams, eps: f64) -> Result<usize> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParams(format!("eps = {eps} must lie in (0, 1)")));
    }
    let b2 = params.value_set.b_min().powi(2);
    let phi = regime.phi;
    let (constant, denom) = if regime.tag == RegimeTag::Slr {
        (8.0, b2)
    } else {
        let d = (phi * phi * b2).min((1.0 - phi) * (1.0 - phi) * b2).min(regime.beta_avg_min_sq);
        (32.0, d)
    };
    if !(denom > 0.0) {
        return Err(Error::DegenerateRegime);
    }
    let n = constant * (1.0 + eps) / denom * regime.norm_sq * snr_factor(regime.snr) * (2.0 * params.p as f64).ln();
    Ok(n.ceil() as usize)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowDegThresholds {
    pub n_alg_sbmslr: f64,
    pub n_alg_slr: f64,
    pub n_it_slr: f64,
}

/// Threshold formulas used as experiment axes; ‖β‖² is taken as [`ModelParams::nominal_norm_sq`].
pub fn lowdeg_sample_thresholds(params: &ModelParams) -> LowDegThresholds {
    let k = params.k as f64;
    let p = params.p as f64;
    let norm_sq = params.nominal_norm_sq();
    let snr = if params.sigma == 0.0 { f64::INFINITY } else { norm_sq / (params.sigma * params.sigma) };
    let f = snr_factor(snr);
    LowDegThresholds {
        n_alg_sbmslr: k * k * f * f / p.ln(),
        n_alg_slr: k * f * p.ln(),
        n_it_slr: 2.0 * k * (p / k).ln() / (1.0 + snr).log2(),
    }
}
