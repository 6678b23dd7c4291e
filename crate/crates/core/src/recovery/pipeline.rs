use super::am::{am, am_objective, am_resampled};
use super::convex::{convex_balanced, default_lambda, ConvexOptions};
use super::spectral::SpectralMoments;
use super::{embed, push_flag, restrict_support, RecoveryResult};
use crate::corr::{corr_support, CorrConfig};
use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Cluster sizes handed to the spectral initialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Proportions {
    Known { n1: usize, n2: usize },
    /// Chosen by a labeling pass over a grid of candidate proportions.
    Estimated,
}

/// Candidate π₁ values scanned in estimated mode.
const PROPORTION_GRID: [f64; 16] = [0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9];

fn is_zero_response(y: &[f64]) -> bool {
    y.iter().all(|v| *v == 0.0)
}

/// (n₁, n₂) from the best single AM labeling pass over the proportion grid.
fn estimate_sizes(x: &DMatrix<f64>, y: &[f64], moments: &SpectralMoments) -> Result<(usize, usize)> {
    let n = x.nrows();
    let mut best: Option<(f64, usize)> = None;
    for &pi in &PROPORTION_GRID {
        let init = moments.init(x, y, pi, 1.0 - pi);
        let pass = am(x, y, (&init.beta1, &init.beta2), 1)?;
        let obj = am_objective(x, y, &pass.beta1_hat, &pass.beta2_hat);
        let f1 = x * nalgebra::DVector::from_column_slice(&init.beta1);
        let f2 = x * nalgebra::DVector::from_column_slice(&init.beta2);
        let n1 = (0..n).filter(|&i| (y[i] - f1[i]).abs() < (y[i] - f2[i]).abs()).count();
        if best.is_none_or(|(o, _)| obj < o) {
            best = Some((obj, n1));
        }
    }
    let (_, mut n1) = best.expect("nonempty grid");
    if 2 * n1 == n {
        n1 += 1;
    }
    let n1 = n1.clamp(1, n - 1);
    Ok((n1, n - n1))
}

/// CORR support → restriction → spectral initialization → AM with resampling → embedding.
pub fn recover_noiseless(x: &DMatrix<f64>, y: &[f64], config: &CorrConfig, t0: usize, proportions: Proportions) -> Result<RecoveryResult> {
    let (n, p) = x.shape();
    if is_zero_response(y) {
        return Err(Error::SupportEmpty);
    }
    let support = corr_support(x, y, config)?;
    if support.indices.is_empty() {
        return Err(Error::SupportEmpty);
    }
    let (xs, map) = restrict_support(x, &support.indices)?;
    let d = map.len();
    let mut flags = Vec::new();
    let init = if d == 1 {
        // One coordinate: start from the two signs of the response scale.
        let s = (y.iter().map(|v| v * v).sum::<f64>() / n as f64).sqrt();
        (vec![s], vec![-s])
    } else {
        let moments = SpectralMoments::new(&xs, y)?;
        let (n1, n2) = match proportions {
            Proportions::Known { n1, n2 } => {
                if n1 + n2 != n {
                    return Err(Error::InvalidParams(format!("n1 + n2 = {} but n = {n}", n1 + n2)));
                }
                if n1 == n2 {
                    return Err(Error::BalancedProportions);
                }
                (n1, n2)
            }
            Proportions::Estimated => estimate_sizes(&xs, y, &moments)?,
        };
        let si = moments.init(&xs, y, n1 as f64 / n as f64, n2 as f64 / n as f64);
        for f in si.flags {
            push_flag(&mut flags, f);
        }
        (si.beta1, si.beta2)
    };
    let mut r = am_resampled(&xs, y, (&init.0, &init.1), t0)?;
    for f in std::mem::take(&mut r.flags) {
        push_flag(&mut flags, f);
    }
    r.flags = flags;
    r.beta1_hat = embed(&r.beta1_hat, &map, p);
    r.beta2_hat = embed(&r.beta2_hat, &map, p);
    r.history = r.history.into_iter().map(|(a, b)| (embed(&a, &map, p), embed(&b, &map, p))).collect();
    Ok(r)
}

/// CORR support → restriction → convex program → embedding.
pub fn recover_balanced(x: &DMatrix<f64>, y: &[f64], config: &CorrConfig, sigma: f64, options: &ConvexOptions) -> Result<RecoveryResult> {
    let p = x.ncols();
    if is_zero_response(y) {
        return Err(Error::SupportEmpty);
    }
    let support = corr_support(x, y, config)?;
    if support.indices.is_empty() {
        return Err(Error::SupportEmpty);
    }
    let (xs, map) = restrict_support(x, &support.indices)?;
    let lambda = match options.lambda {
        Some(l) => l,
        None => default_lambda(&xs, y, sigma, 1.0)?,
    };
    let mut r = convex_balanced(&xs, y, sigma, lambda, options.max_iter, options.tol)?;
    r.beta1_hat = embed(&r.beta1_hat, &map, p);
    r.beta2_hat = embed(&r.beta2_hat, &map, p);
    Ok(r)
}
