//! First-principles χ²_{≤D} by enumerating every Hermite multi-index.
//!
//! For α on the n × (p+1) grid (column p holds the response), the projection
//! of the likelihood ratio is nonzero only if every row satisfies
//! α_{i,p+1} = Σ_j α_{ij}; then, with h = Σ_i α_{i,p+1},
//!
//! ```text
//! ⟨L, H̃_α⟩ = (‖β‖²+σ²)^{−h/2} · Π_i α_{i,p+1}! · E_β Π_i (φ β₁^{α_i} + (1−φ) β₂^{α_i})
//! ```
//!
//! and χ²_{≤D} + 1 = Σ_{|α|≤D} ⟨L, H̃_α⟩² / α!. The expectation runs over every
//! support and every value pattern of the prior, with β₂ built from β₁ by the
//! regime's coupling.

use super::chi2::{ChiRegime, ChiSqConfig, ExactChi};
use super::exact::{binomial, factorial, pow, rat, rat_int, to_f64};
use super::overlap::UnitValues;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Enumeration caps.
pub const MAX_MULTI_INDICES: u64 = 20_000_000;
pub const MAX_PRIOR_DRAWS: u64 = 100_000;

fn prior_draws(p: usize, k: usize, values: UnitValues) -> Vec<Vec<i64>> {
    let vals: &[i64] = match values {
        UnitValues::Pm1 => &[-1, 1],
        UnitValues::P1 => &[1],
    };
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << p) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let support: Vec<usize> = (0..p).filter(|j| mask >> j & 1 == 1).collect();
        let combos = vals.len().pow(k as u32);
        for mut code in 0..combos {
            let mut b = vec![0i64; p];
            for &j in &support {
                b[j] = vals[code % vals.len()];
                code /= vals.len();
            }
            out.push(b);
        }
    }
    out
}

/// (φ, c) with β₂ = cβ₁.
fn coupling(regime: &ChiRegime) -> (BigRational, BigRational) {
    match regime {
        ChiRegime::Slrd => (BigRational::one(), BigRational::one()),
        ChiRegime::Sbmslrd => (BigRational::new(1.into(), 2.into()), rat(-1)),
        ChiRegime::SymUnbalanced { phi } => {
            if phi.is_one() {
                (phi.clone(), BigRational::one())
            } else {
                (phi.clone(), -phi.clone() / (BigRational::one() - phi))
            }
        }
    }
}

fn monomial(beta: &[BigRational], a: &[usize]) -> BigRational {
    let mut acc = BigRational::one();
    for (b, &e) in beta.iter().zip(a) {
        if e > 0 {
            acc *= pow(b, e);
        }
    }
    acc
}

/// Exact χ²_{≤D} for a tiny configuration.
pub fn chi2_bruteforce_oracle(config: &ChiSqConfig) -> Result<ExactChi> {
    let (p, n, k, d) = (config.p, config.n, config.k, config.degree);
    if k == 0 || k > p || n == 0 {
        return Err(Error::InvalidParams("need 1 <= k <= p and n >= 1".into()));
    }
    let cells = n * (p + 1);
    let count = binomial(cells + d, d);
    if count > BigInt::from(MAX_MULTI_INDICES) || p > 20 {
        return Err(Error::TooLarge(format!("{count} multi-indices")));
    }
    let draws_count = binomial(p, k) * BigInt::from(2u64.pow(k as u32));
    if draws_count > BigInt::from(MAX_PRIOR_DRAWS) {
        return Err(Error::TooLarge(format!("{draws_count} prior draws")));
    }
    let (phi, c) = coupling(&config.regime);
    let one_minus_phi = BigRational::one() - &phi;
    let draws: Vec<(Vec<BigRational>, Vec<BigRational>)> = prior_draws(p, k, config.values)
        .into_iter()
        .map(|b| {
            let b1: Vec<BigRational> = b.iter().map(|&v| rat(v)).collect();
            let b2: Vec<BigRational> = b1.iter().map(|v| v * &c).collect();
            (b1, b2)
        })
        .collect();
    let norm_sq: i64 = prior_draws(p, k, config.values)[0].iter().map(|v| v * v).sum();
    let scale = BigRational::one() / (rat(norm_sq) + &config.sigma2);
    let n_draws = rat(draws.len() as i64);
    let facts: Vec<BigInt> = (0..=d).map(factorial).collect();

    let mut terms = vec![BigRational::zero(); d + 1];
    let mut alpha = vec![0usize; cells];
    enumerate(&mut alpha, 0, d, &mut |alpha: &[usize]| {
        let rows: Vec<&[usize]> = alpha.chunks(p + 1).collect();
        if !rows.iter().all(|r| r[p] == r[..p].iter().sum::<usize>()) {
            return;
        }
        let total: usize = alpha.iter().sum();
        let h: usize = rows.iter().map(|r| r[p]).sum();
        let mut expectation = BigRational::zero();
        for (b1, b2) in &draws {
            let mut prod = BigRational::one();
            for r in &rows {
                let a = &r[..p];
                prod *= &phi * monomial(b1, a) + &one_minus_phi * monomial(b2, a);
                if prod.is_zero() {
                    break;
                }
            }
            expectation += prod;
        }
        if expectation.is_zero() {
            return;
        }
        expectation /= &n_draws;
        let y_fact: BigInt = rows.iter().map(|r| facts[r[p]].clone()).product();
        let alpha_fact: BigInt = alpha.iter().map(|&a| facts[a].clone()).product();
        // ⟨L,H̃_α⟩² / α!
        let proj_sq = pow(&scale, h) * rat_int(y_fact.clone() * y_fact) * &expectation * &expectation;
        terms[total] += proj_sq / rat_int(alpha_fact);
    });
    terms[0] -= BigRational::one();
    let value = terms.iter().cloned().sum();
    Ok(ExactChi { value, terms })
}

fn enumerate(alpha: &mut Vec<usize>, pos: usize, left: usize, f: &mut dyn FnMut(&[usize])) {
    if pos == alpha.len() {
        f(alpha);
        return;
    }
    for a in 0..=left {
        alpha[pos] = a;
        enumerate(alpha, pos + 1, left - a, f);
    }
    alpha[pos] = 0;
}

/// Float view of the oracle value.
pub fn chi2_bruteforce_oracle_f64(config: &ChiSqConfig) -> Result<f64> {
    let r = chi2_bruteforce_oracle(config)?;
    Ok(r.value.to_f64().unwrap_or_else(|| to_f64(&r.value)))
}
