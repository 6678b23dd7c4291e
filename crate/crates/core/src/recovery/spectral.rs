//! Spectral initialization from the weighted second moment M = (1/n) Σ yᵢ² xᵢxᵢᵀ.
//!
//! Responses are rescaled to unit second moment before forming M, and the
//! estimates are scaled back afterwards; for unit-norm noiseless signals this
//! is the plain algorithm. M is blind to the sign of each signal separately and
//! eigenvectors carry arbitrary signs, so the eight resulting sign patterns are
//! scored by the AM objective and the best one is kept.

use super::am::am_objective;
use super::linalg::sym_eigen_desc;
use super::{push_flag, Flag};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralInit {
    pub beta1: Vec<f64>,
    pub beta2: Vec<f64>,
    pub flags: Vec<Flag>,
}

/// Top-two eigenpairs of (M − I)/2, computed once and reusable across proportions.
#[derive(Debug, Clone)]
pub struct SpectralMoments {
    pub lambda: (f64, f64),
    pub v1: DVector<f64>,
    pub v2: DVector<f64>,
    /// √mean(y²)
    pub scale: f64,
    pub degenerate: bool,
}

impl SpectralMoments {
    pub fn new(x: &DMatrix<f64>, y: &[f64]) -> Result<Self> {
        let (n, d) = x.shape();
        if y.len() != n {
            return Err(Error::DimensionMismatch(format!("X has {n} rows, y has {}", y.len())));
        }
        if d < 2 {
            return Err(Error::InvalidParams("spectral initialization needs dimension >= 2".into()));
        }
        let ms = y.iter().map(|v| v * v).sum::<f64>() / n as f64;
        let scale = if ms > 0.0 { ms.sqrt() } else { 1.0 };
        let mut m = DMatrix::<f64>::zeros(d, d);
        let mut weighted = x.clone();
        for i in 0..n {
            let w = y[i] / scale;
            for j in 0..d {
                weighted[(i, j)] *= w;
            }
        }
        m.gemm_tr(1.0 / n as f64, &weighted, &weighted, 0.0);
        let a = (m - DMatrix::identity(d, d)) * 0.5;
        let (vals, vecs) = sym_eigen_desc(&a)?;
        let degenerate = (vals[0] - vals[1]).abs() <= 1e-12 * vals[0].abs().max(1.0);
        let (v1, v2) = if degenerate {
            let mut e0 = DVector::zeros(d);
            let mut e1 = DVector::zeros(d);
            e0[0] = 1.0;
            e1[1] = 1.0;
            (e0, e1)
        } else {
            (vecs.column(0).into_owned(), vecs.column(1).into_owned())
        };
        Ok(SpectralMoments { lambda: (vals[0], vals[1]), v1, v2, scale, degenerate })
    }

    /// The two candidate signals for proportions (π₁, π₂), before sign selection.
    pub fn unsigned_candidates(&self, pi1: f64, pi2: f64, flags: &mut Vec<Flag>) -> (DVector<f64>, DVector<f64>) {
        let (l1, l2) = self.lambda;
        let mut delta = |lb: f64, lo: f64, pb: f64, po: f64| -> f64 {
            let den = 2.0 * (lo - lb) * pb;
            let raw = if den == 0.0 { 0.0 } else { ((lb - lo).powi(2) + pb * pb - po * po) / den };
            if !(-1.0..=1.0).contains(&raw) || !raw.is_finite() {
                push_flag(flags, Flag::ClampedDelta);
            }
            if raw.is_finite() {
                raw.clamp(-1.0, 1.0)
            } else {
                0.0
            }
        };
        let d1 = delta(l1, l2, pi1, pi2);
        let d2 = delta(l2, l1, pi2, pi1);
        let b1 = &self.v1 * ((1.0 - d1) / 2.0).sqrt() + &self.v2 * ((1.0 + d1) / 2.0).sqrt();
        let b2 = &self.v2 * ((1.0 - d2) / 2.0).sqrt() - &self.v1 * ((1.0 + d2) / 2.0).sqrt();
        (b1 * self.scale, b2 * self.scale)
    }

    /// Candidates with the eigenvector signs chosen to minimize the AM objective.
    pub fn init(&self, x: &DMatrix<f64>, y: &[f64], pi1: f64, pi2: f64) -> SpectralInit {
        let mut flags = Vec::new();
        if self.degenerate {
            push_flag(&mut flags, Flag::DegenerateInit);
        }
        let (l1, l2) = self.lambda;
        let signed = |s1: f64, s2: f64, flags: &mut Vec<Flag>| {
            let m = SpectralMoments { lambda: (l1, l2), v1: &self.v1 * s1, v2: &self.v2 * s2, scale: self.scale, degenerate: self.degenerate };
            m.unsigned_candidates(pi1, pi2, flags)
        };
        let mut best: Option<(f64, Vec<f64>, Vec<f64>)> = None;
        for s2 in [1.0, -1.0] {
            let (b1, b2) = signed(1.0, s2, &mut flags);
            for (t1, t2) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let c1: Vec<f64> = b1.iter().map(|v| t1 * v).collect();
                let c2: Vec<f64> = b2.iter().map(|v| t2 * v).collect();
                let obj = am_objective(x, y, &c1, &c2);
                if best.as_ref().is_none_or(|(o, _, _)| obj < *o) {
                    best = Some((obj, c1, c2));
                }
            }
        }
        let (_, beta1, beta2) = best.expect("four candidates");
        SpectralInit { beta1, beta2, flags }
    }
}

/// Initialization with known cluster sizes n₁ ≠ n₂.
pub fn spectral_init(x: &DMatrix<f64>, y: &[f64], n1: usize, n2: usize) -> Result<SpectralInit> {
    let n = x.nrows();
    if n1 + n2 != n {
        return Err(Error::InvalidParams(format!("n1 + n2 = {} but n = {n}", n1 + n2)));
    }
    if n1 == n2 {
        return Err(Error::BalancedProportions);
    }
    let m = SpectralMoments::new(x, y)?;
    Ok(m.init(x, y, n1 as f64 / n as f64, n2 as f64 / n as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recovery::rho_error;

    /// Population moment Σ_b π_b β_b β_bᵀ for unit signals.
    fn population(b1: &[f64], b2: &[f64], pi1: f64) -> SpectralMoments {
        let d = b1.len();
        let v1 = DVector::from_column_slice(b1);
        let v2 = DVector::from_column_slice(b2);
        let a = &v1 * v1.transpose() * pi1 + &v2 * v2.transpose() * (1.0 - pi1);
        let (vals, vecs) = sym_eigen_desc(&a).unwrap();
        let _ = d;
        SpectralMoments { lambda: (vals[0], vals[1]), v1: vecs.column(0).into_owned(), v2: vecs.column(1).into_owned(), scale: 1.0, degenerate: false }
    }

    fn best_over_signs(m: &SpectralMoments, pi1: f64, b1: &[f64], b2: &[f64]) -> f64 {
        let mut best = f64::INFINITY;
        for s2 in [1.0, -1.0] {
            let mm = SpectralMoments { v2: &m.v2 * s2, ..m.clone() };
            let mut flags = Vec::new();
            let (c1, c2) = mm.unsigned_candidates(pi1, 1.0 - pi1, &mut flags);
            for (t1, t2) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let c1: Vec<f64> = c1.iter().map(|v| t1 * v).collect();
                let c2: Vec<f64> = c2.iter().map(|v| t2 * v).collect();
                best = best.min(rho_error((&c1, &c2), (b1, b2)).unwrap());
            }
        }
        best
    }

    #[test]
    fn exact_on_population_moment() {
        let angle = 1.1f64;
        let b1 = [1.0, 0.0, 0.0];
        let b2 = [angle.cos(), angle.sin(), 0.0];
        for pi1 in [0.7, 0.3, 0.8, 0.15] {
            let m = population(&b1, &b2, pi1);
            assert!(best_over_signs(&m, pi1, &b1, &b2) < 1e-9, "pi1 = {pi1}");
        }
        let m = population(&[1.0, 0.0], &[0.0, 1.0], 0.7);
        assert!(best_over_signs(&m, 0.7, &[1.0, 0.0], &[0.0, 1.0]) < 1e-9);
    }

    #[test]
    fn balanced_rejected() {
        let x = DMatrix::from_element(4, 2, 1.0);
        assert_eq!(spectral_init(&x, &[1.0; 4], 2, 2).unwrap_err(), Error::BalancedProportions);
    }

    #[test]
    fn zero_response_is_flagged_and_deterministic() {
        let x = DMatrix::from_fn(6, 3, |i, j| (i * 3 + j) as f64 * 0.1);
        let a = spectral_init(&x, &[0.0; 6], 4, 2).unwrap();
        assert!(a.flags.contains(&Flag::DegenerateInit));
        assert_eq!(a, spectral_init(&x, &[0.0; 6], 4, 2).unwrap());
    }
}
