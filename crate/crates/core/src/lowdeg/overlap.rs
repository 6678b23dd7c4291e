//! Overlap law of two independent k-subsets, overlap moments, weak compositions.

use super::exact::{binomial, pow, rat, rat_int};
use crate::error::{Error, Result};
use crate::model::ValueSet;
use num_rational::BigRational;
use num_traits::Zero;
use statrs::function::factorial::ln_binomial;

/// The two value sets with closed-form overlap moments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnitValues {
    /// {−1, +1}
    Pm1,
    /// {+1}
    P1,
}

impl UnitValues {
    pub fn from_value_set(vs: &ValueSet) -> Result<Self> {
        if vs.is_pm1() {
            Ok(UnitValues::Pm1)
        } else if vs.is_p1() {
            Ok(UnitValues::P1)
        } else {
            Err(Error::UnsupportedValueSet(vs.values().to_vec()))
        }
    }

    pub fn value_set(self) -> ValueSet {
        match self {
            UnitValues::Pm1 => ValueSet::pm1(),
            UnitValues::P1 => ValueSet::p1(),
        }
    }
}

fn overlap_range(p: usize, k: usize) -> std::ops::RangeInclusive<usize> {
    (2 * k).saturating_sub(p)..=k
}

/// P(|S⁽¹⁾ ∩ S⁽²⁾| = l), l = 0..=k, exactly.
pub fn overlap_pmf_exact(p: usize, k: usize) -> Result<Vec<BigRational>> {
    if k > p {
        return Err(Error::InvalidParams(format!("k = {k} exceeds p = {p}")));
    }
    let total = binomial(p, k);
    Ok((0..=k)
        .map(|l| {
            if overlap_range(p, k).contains(&l) {
                BigRational::new(binomial(k, l) * binomial(p - k, k - l), total.clone())
            } else {
                BigRational::zero()
            }
        })
        .collect())
}

/// ln P(overlap = l), −∞ outside the support.
pub fn ln_overlap_pmf(p: usize, k: usize, l: usize) -> f64 {
    if !overlap_range(p, k).contains(&l) {
        return f64::NEG_INFINITY;
    }
    let (p, k, l) = (p as u64, k as u64, l as u64);
    ln_binomial(k, l) + ln_binomial(p - k, k - l) - ln_binomial(p, k)
}

pub fn overlap_pmf(p: usize, k: usize) -> Result<Vec<f64>> {
    if k > p {
        return Err(Error::InvalidParams(format!("k = {k} exceeds p = {p}")));
    }
    Ok((0..=k).map(|l| ln_overlap_pmf(p, k, l).exp()).collect())
}

/// E[⟨β⁽¹⁾, β⁽²⁾⟩^m] for two independent prior draws, exactly.
pub fn inner_moment_exact(p: usize, k: usize, m: usize, values: UnitValues) -> Result<BigRational> {
    let pmf = overlap_pmf_exact(p, k)?;
    let mut total = BigRational::zero();
    for (l, w) in pmf.iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        total += w * conditional_moment_exact(l, m, values);
    }
    Ok(total)
}

/// E[S_l^m] where S_l sums l sign products (Pm1) or equals l (P1).
fn conditional_moment_exact(l: usize, m: usize, values: UnitValues) -> BigRational {
    match values {
        UnitValues::P1 => pow(&rat(l as i64), m),
        UnitValues::Pm1 => {
            if m % 2 == 1 {
                return BigRational::zero();
            }
            let mut s = BigRational::zero();
            for j in 0..=l {
                let v = l as i64 - 2 * j as i64;
                s += rat_int(binomial(l, j)) * pow(&rat(v), m);
            }
            s / rat_int(num_traits::pow(num_bigint::BigInt::from(2), l))
        }
    }
}

/// ln E[⟨β⁽¹⁾, β⁽²⁾⟩^m]; `None` when the moment is exactly zero.
pub fn ln_inner_moment(p: usize, k: usize, m: usize, values: UnitValues) -> Result<Option<f64>> {
    if k > p {
        return Err(Error::InvalidParams(format!("k = {k} exceeds p = {p}")));
    }
    if values == UnitValues::Pm1 && m % 2 == 1 {
        return Ok(None);
    }
    let mut logs = Vec::new();
    for l in overlap_range(p, k) {
        let lp = ln_overlap_pmf(p, k, l);
        match values {
            UnitValues::P1 => {
                if m == 0 {
                    logs.push(lp);
                } else if l > 0 {
                    logs.push(lp + m as f64 * (l as f64).ln());
                }
            }
            UnitValues::Pm1 => {
                for j in 0..=l {
                    let v = (l as i64 - 2 * j as i64).unsigned_abs();
                    let base = lp + ln_binomial(l as u64, j as u64) - l as f64 * std::f64::consts::LN_2;
                    if m == 0 {
                        logs.push(base);
                    } else if v > 0 {
                        logs.push(base + m as f64 * (v as f64).ln());
                    }
                }
            }
        }
    }
    Ok(log_sum_exp(&logs))
}

pub fn inner_moment(p: usize, k: usize, m: usize, values: UnitValues) -> Result<f64> {
    Ok(ln_inner_moment(p, k, m, values)?.map_or(0.0, f64::exp))
}

pub(crate) fn log_sum_exp(logs: &[f64]) -> Option<f64> {
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return None;
    }
    Some(max + logs.iter().map(|v| (v - max).exp()).sum::<f64>().ln())
}

/// Number of weak compositions of m into n parts, C(m+n−1, n−1).
pub fn compositions_exact(m: usize, n: usize) -> Result<num_bigint::BigInt> {
    if n == 0 {
        return Err(Error::InvalidParams("compositions need n >= 1".into()));
    }
    Ok(binomial(m + n - 1, n - 1))
}

pub fn ln_compositions(m: usize, n: usize) -> f64 {
    ln_binomial((m + n - 1) as u64, (n - 1) as u64)
}

/// Float count; `Overflow` past the f64 range.
pub fn compositions(m: usize, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParams("compositions need n >= 1".into()));
    }
    if m + n - 1 <= 60 {
        return Ok(super::exact::to_f64(&rat_int(binomial(m + n - 1, n - 1))));
    }
    let v = ln_compositions(m, n).exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow(format!("compositions({m}, {n})")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// All k-subsets of 0..p.
    fn subsets(p: usize, k: usize) -> Vec<Vec<usize>> {
        (0u32..(1 << p)).filter(|m| m.count_ones() as usize == k).map(|m| (0..p).filter(|i| m >> i & 1 == 1).collect()).collect()
    }

    #[test]
    fn pmf_p4_k2_matches_enumeration() {
        let subs = subsets(4, 2);
        let mut counts = [0i64; 3];
        for a in &subs {
            for b in &subs {
                counts[a.iter().filter(|i| b.contains(i)).count()] += 1;
            }
        }
        let total = (subs.len() * subs.len()) as i64;
        let pmf = overlap_pmf_exact(4, 2).unwrap();
        for l in 0..3 {
            assert_eq!(pmf[l], q(counts[l], total));
        }
        assert_eq!(pmf, vec![q(1, 6), q(4, 6), q(1, 6)]);
    }

    #[test]
    fn pmf_point_mass_and_sum() {
        let pmf = overlap_pmf_exact(5, 5).unwrap();
        assert_eq!(pmf[5], q(1, 1));
        let s: BigRational = overlap_pmf_exact(9, 4).unwrap().into_iter().sum();
        assert_eq!(s, q(1, 1));
    }

    #[test]
    fn moment_p4_k2_pm1_by_enumeration() {
        // brute force over supports and signs
        let subs = subsets(4, 2);
        let mut vecs = Vec::new();
        for s in &subs {
            for signs in 0..4 {
                let mut v = [0i64; 4];
                for (t, &j) in s.iter().enumerate() {
                    v[j] = if signs >> t & 1 == 1 { 1 } else { -1 };
                }
                vecs.push(v);
            }
        }
        let mut acc = 0i64;
        for a in &vecs {
            for b in &vecs {
                let d: i64 = (0..4).map(|j| a[j] * b[j]).sum();
                acc += d * d;
            }
        }
        let brute = q(acc, (vecs.len() * vecs.len()) as i64);
        assert_eq!(brute, q(1, 1));
        assert_eq!(inner_moment_exact(4, 2, 2, UnitValues::Pm1).unwrap(), brute);
        assert!((inner_moment(4, 2, 2, UnitValues::Pm1).unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn moment_edge_cases() {
        assert_eq!(inner_moment_exact(7, 3, 0, UnitValues::Pm1).unwrap(), q(1, 1));
        assert_eq!(inner_moment_exact(7, 3, 5, UnitValues::Pm1).unwrap(), q(0, 1));
        assert_eq!(inner_moment(7, 3, 5, UnitValues::Pm1).unwrap(), 0.0);
        assert!(UnitValues::from_value_set(&ValueSet::new(vec![2.0]).unwrap()).is_err());
    }

    #[test]
    fn compositions_values() {
        assert_eq!(compositions_exact(0, 5).unwrap(), BigInt::from(1));
        assert_eq!(compositions_exact(2, 2).unwrap(), BigInt::from(3));
        assert_eq!(compositions_exact(3, 4).unwrap(), BigInt::from(20));
        assert_eq!(compositions(3, 4).unwrap(), 20.0);
        assert!(compositions(400, 1_000_000).is_err());
    }
}
