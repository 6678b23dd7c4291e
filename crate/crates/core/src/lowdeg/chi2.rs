//! Degree-D chi-square divergence between planted and null detection models.
//!
//! With h = half the total degree, every regime reduces to
//!
//! ```text
//! χ²_{≤D} + 1 = Σ_{h=0}^{⌊D/2⌋} (k+σ²)^{−h} · W(h, n) · E⟨β⁽¹⁾, β⁽²⁾⟩^h
//! ```
//!
//! where W(h, n) = [x^h] (Σ_a w(a) x^a)^n and w(a) = (φ + (1−φ)c^a)² for the
//! coupling β₂ = cβ₁. SLRD has w ≡ 1, SBMSLRD has w(a) = 1{a even}, and the
//! symmetric unbalanced family uses c = −φ/(1−φ). The h-th term is reported
//! at degree 2h; `terms[0]` is zero because the constant term cancels the 1.

use super::exact::{binomial, pow, rat, rat_int, to_f64};
use super::overlap::{compositions_exact, inner_moment_exact, ln_compositions, ln_inner_moment, UnitValues};
use crate::error::{Error, Result};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum ChiRegime {
    Slrd,
    Sbmslrd,
    /// β₂ = −(φ/(1−φ))β₁ with mixture weight φ.
    SymUnbalanced { phi: BigRational },
}

impl fmt::Display for ChiRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChiRegime::Slrd => f.write_str("slrd"),
            ChiRegime::Sbmslrd => f.write_str("sbmslrd"),
            ChiRegime::SymUnbalanced { phi } => write!(f, "sym(phi={phi})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arithmetic {
    Rational,
    Float,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChiSqConfig {
    pub p: usize,
    pub n: usize,
    pub k: usize,
    pub sigma2: BigRational,
    pub degree: usize,
    pub regime: ChiRegime,
    pub values: UnitValues,
    pub arithmetic: Arithmetic,
    /// Cap on (⌊D/2⌋+1)², the size of one truncated series product.
    pub max_table: usize,
}

impl ChiSqConfig {
    pub fn new(p: usize, n: usize, k: usize, sigma2: BigRational, degree: usize, regime: ChiRegime, values: UnitValues) -> Self {
        ChiSqConfig { p, n, k, sigma2, degree, regime, values, arithmetic: Arithmetic::Rational, max_table: 1_000_000 }
    }

    pub fn float(mut self) -> Self {
        self.arithmetic = Arithmetic::Float;
        self
    }

    pub fn rational(mut self) -> Self {
        self.arithmetic = Arithmetic::Rational;
        self
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn with_degree(mut self, degree: usize) -> Self {
        self.degree = degree;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.p == 0 || self.n == 0 || self.k == 0 || self.k > self.p {
            return Err(Error::InvalidParams(format!("need p, n >= 1 and 1 <= k <= p (p={}, n={}, k={})", self.p, self.n, self.k)));
        }
        if self.sigma2 < BigRational::zero() {
            return Err(Error::InvalidParams("sigma2 must be >= 0".into()));
        }
        if let ChiRegime::SymUnbalanced { phi } = &self.regime {
            if *phi < BigRational::zero() || *phi > BigRational::one() {
                return Err(Error::InvalidParams("phi must lie in [0, 1]".into()));
            }
        }
        let h = self.degree / 2 + 1;
        if h.saturating_mul(h) > self.max_table {
            return Err(Error::DegreeTooLarge { degree: self.degree, limit: self.max_table });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactChi {
    pub value: BigRational,
    pub terms: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChiSqResult {
    pub value: f64,
    /// Contribution of each total degree 0..=D.
    pub terms: Vec<f64>,
    /// Present in rational mode.
    pub exact: Option<ExactChi>,
    pub config: ChiSqConfig,
}

impl ChiSqResult {
    pub fn cumulative(&self) -> Vec<f64> {
        self.terms
            .iter()
            .scan(0.0, |acc, t| {
                *acc += t;
                Some(*acc)
            })
            .collect()
    }
}

/// Per-part weights w(0..=h_max) as exact rationals.
fn part_weights_exact(regime: &ChiRegime, h_max: usize) -> Vec<BigRational> {
    match regime {
        ChiRegime::Slrd => vec![BigRational::one(); h_max + 1],
        ChiRegime::Sbmslrd => (0..=h_max).map(|a| if a % 2 == 0 { BigRational::one() } else { BigRational::zero() }).collect(),
        ChiRegime::SymUnbalanced { phi } => {
            let one = BigRational::one();
            let c = -phi.clone() / (one.clone() - phi);
            (0..=h_max)
                .map(|a| {
                    let v = phi.clone() + (one.clone() - phi) * pow(&c, a);
                    v.clone() * v
                })
                .collect()
        }
    }
}

fn truncated_mul<T>(a: &[T], b: &[T], zero: T) -> Vec<T>
where
    T: Clone + std::ops::Add<Output = T> + for<'x> std::ops::Mul<&'x T, Output = T>,
{
    let len = a.len();
    let mut out = vec![zero; len];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate().take(len - i) {
            out[i + j] = out[i + j].clone() + ai.clone() * bj;
        }
    }
    out
}

/// Coefficients of (Σ_a w(a) x^a)^n up to x^{h_max}, by binary exponentiation.
fn series_power<T>(w: &[T], n: usize, one: T, zero: T) -> Vec<T>
where
    T: Clone + std::ops::Add<Output = T> + for<'x> std::ops::Mul<&'x T, Output = T>,
{
    let mut result = vec![zero.clone(); w.len()];
    result[0] = one;
    let mut base = w.to_vec();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result = truncated_mul(&result, &base, zero.clone());
        }
        e >>= 1;
        if e > 0 {
            base = truncated_mul(&base, &base, zero.clone());
        }
    }
    result
}

fn weights_exact(config: &ChiSqConfig, h_max: usize) -> Result<Vec<BigRational>> {
    let n = config.n;
    Ok(match &config.regime {
        ChiRegime::Slrd => (0..=h_max).map(|h| compositions_exact(h, n).map(rat_int)).collect::<Result<_>>()?,
        ChiRegime::Sbmslrd => (0..=h_max)
            .map(|h| if h % 2 == 0 { rat_int(binomial(h / 2 + n - 1, n - 1)) } else { BigRational::zero() })
            .collect(),
        ChiRegime::SymUnbalanced { .. } => {
            let w = part_weights_exact(&config.regime, h_max);
            series_power(&w, n, BigRational::one(), BigRational::zero())
        }
    })
}

/// ln W(h, n) per h; `None` for exact zeros.
fn ln_weights(config: &ChiSqConfig, h_max: usize) -> Vec<Option<f64>> {
    let n = config.n;
    match &config.regime {
        ChiRegime::Slrd => (0..=h_max).map(|h| Some(ln_compositions(h, n))).collect(),
        ChiRegime::Sbmslrd => (0..=h_max).map(|h| (h % 2 == 0).then(|| ln_compositions(h / 2, n))).collect(),
        ChiRegime::SymUnbalanced { .. } => {
            // Substituting x → x/n keeps the coefficients of order one.
            let nf = n as f64;
            let w: Vec<f64> = part_weights_exact(&config.regime, h_max).iter().enumerate().map(|(a, v)| to_f64(v) / nf.powi(a as i32)).collect();
            let coef = series_power(&w, n, 1.0, 0.0);
            coef.iter().enumerate().map(|(h, c)| (*c > 0.0).then(|| c.ln() + h as f64 * nf.ln())).collect()
        }
    }
}

fn phi_is_one(regime: &ChiRegime) -> bool {
    matches!(regime, ChiRegime::SymUnbalanced { phi } if phi.is_one())
}

fn evaluate(config: &ChiSqConfig) -> Result<ChiSqResult> {
    config.validate()?;
    let h_max = config.degree / 2;
    let mut terms = vec![0.0; config.degree + 1];
    match config.arithmetic {
        Arithmetic::Rational => {
            let base = BigRational::one() / (rat(config.k as i64) + &config.sigma2);
            let w = weights_exact(config, h_max)?;
            let mut exact_terms = vec![BigRational::zero(); config.degree + 1];
            for h in 1..=h_max {
                if w[h].is_zero() {
                    continue;
                }
                let m = inner_moment_exact(config.p, config.k, h, config.values)?;
                exact_terms[2 * h] = pow(&base, h) * &w[h] * m;
            }
            let value: BigRational = exact_terms.iter().cloned().sum();
            for (t, e) in terms.iter_mut().zip(&exact_terms) {
                *t = to_f64(e);
            }
            Ok(ChiSqResult { value: to_f64(&value), terms, exact: Some(ExactChi { value, terms: exact_terms }), config: config.clone() })
        }
        Arithmetic::Float => {
            let ln_base = -(config.k as f64 + config.sigma2.to_f64().unwrap_or(f64::NAN)).ln();
            let lw = ln_weights(config, h_max);
            for h in 1..=h_max {
                let Some(lw) = lw[h] else { continue };
                let Some(lm) = ln_inner_moment(config.p, config.k, h, config.values)? else { continue };
                terms[2 * h] = (h as f64 * ln_base + lw + lm).exp();
            }
            let value = terms.iter().sum();
            Ok(ChiSqResult { value, terms, exact: None, config: config.clone() })
        }
    }
}

pub fn chi2_slrd(config: &ChiSqConfig) -> Result<ChiSqResult> {
    if config.regime != ChiRegime::Slrd {
        return Err(Error::InvalidParams("chi2_slrd needs regime = SLRD".into()));
    }
    evaluate(config)
}

pub fn chi2_sbmslrd(config: &ChiSqConfig) -> Result<ChiSqResult> {
    if config.regime != ChiRegime::Sbmslrd {
        return Err(Error::InvalidParams("chi2_sbmslrd needs regime = SBMSLRD".into()));
    }
    evaluate(config)
}

/// φ = 1 is the single-component model and is evaluated as SLRD.
pub fn chi2_sym_unbalanced(config: &ChiSqConfig) -> Result<ChiSqResult> {
    if !matches!(config.regime, ChiRegime::SymUnbalanced { .. }) {
        return Err(Error::InvalidParams("chi2_sym_unbalanced needs regime = SYM_UNBALANCED".into()));
    }
    if phi_is_one(&config.regime) {
        let slr = ChiSqConfig { regime: ChiRegime::Slrd, ..config.clone() };
        let mut r = evaluate(&slr)?;
        r.config = config.clone();
        return Ok(r);
    }
    evaluate(config)
}

/// Dispatches on the configured regime.
pub fn chi2(config: &ChiSqConfig) -> Result<ChiSqResult> {
    match config.regime {
        ChiRegime::Slrd => chi2_slrd(config),
        ChiRegime::Sbmslrd => chi2_sbmslrd(config),
        ChiRegime::SymUnbalanced { .. } => chi2_sym_unbalanced(config),
    }
}
