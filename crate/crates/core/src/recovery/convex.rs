//! Nuclear-norm regularized moment program for balanced mixtures.
//!
//! The residual rᵢ = −⟨xᵢxᵢᵀ, K⟩ + 2yᵢ⟨xᵢ, g⟩ − yᵢ² + σ² is linear in θ = (vec K, g),
//! so the smooth part is the quadratic θᵀGθ − 2bᵀθ + c with a (d²+d)-square Gram
//! matrix G built once. Each proximal step then costs O((d²+d)²) plus a d × d
//! eigendecomposition, independent of n.

use super::linalg::{pinv_solve_psd, sym_eigen_desc};
use super::{push_flag, Flag, Pipeline, RecoveryResult};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexOptions {
    /// Penalty; `None` selects [`default_lambda`] with constant 1.
    pub lambda: Option<f64>,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for ConvexOptions {
    fn default() -> Self {
        ConvexOptions { lambda: None, max_iter: 20_000, tol: 1e-12 }
    }
}

struct Quadratic {
    d: usize,
    g: DMatrix<f64>,
    b: DVector<f64>,
    c: f64,
}

impl Quadratic {
    fn new(x: &DMatrix<f64>, y: &[f64], sigma: f64) -> Self {
        let (n, d) = x.shape();
        let q = d * d + d;
        let mut f = DMatrix::<f64>::zeros(n, q);
        let mut target = DVector::<f64>::zeros(n);
        for i in 0..n {
            for l in 0..d {
                for j in 0..d {
                    f[(i, j + l * d)] = -x[(i, j)] * x[(i, l)];
                }
                f[(i, d * d + l)] = 2.0 * y[i] * x[(i, l)];
            }
            target[i] = y[i] * y[i] - sigma * sigma;
        }
        let g = f.tr_mul(&f);
        let b = f.tr_mul(&target);
        let c = target.dot(&target);
        Quadratic { d, g, b, c }
    }

    fn smooth(&self, theta: &DVector<f64>) -> f64 {
        (theta.dot(&(&self.g * theta)) - 2.0 * self.b.dot(theta) + self.c).max(0.0)
    }

    fn grad(&self, theta: &DVector<f64>) -> DVector<f64> {
        (&self.g * theta - &self.b) * 2.0
    }

    fn split(&self, theta: &DVector<f64>) -> (DMatrix<f64>, DVector<f64>) {
        let d = self.d;
        let k = DMatrix::from_column_slice(d, d, &theta.as_slice()[..d * d]);
        let g = DVector::from_column_slice(&theta.as_slice()[d * d..]);
        (k, g)
    }

    fn join(&self, k: &DMatrix<f64>, g: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(self.d * self.d + self.d, k.iter().chain(g.iter()).copied())
    }
}

fn nuclear(k: &DMatrix<f64>) -> Result<f64> {
    Ok(sym_eigen_desc(k)?.0.iter().map(|v| v.abs()).sum())
}

/// Eigenvalue soft-thresholding of the symmetric part of K.
fn prox_nuclear(k: &DMatrix<f64>, threshold: f64) -> Result<DMatrix<f64>> {
    let (vals, vecs) = sym_eigen_desc(k)?;
    let shrunk: Vec<f64> = vals.iter().map(|v| v.signum() * (v.abs() - threshold).max(0.0)).collect();
    let d = k.nrows();
    let mut out = DMatrix::zeros(d, d);
    for (i, s) in shrunk.iter().enumerate() {
        if *s != 0.0 {
            let v = vecs.column(i);
            out += v * v.transpose() * *s;
        }
    }
    Ok(out)
}

fn split_estimates(k: &DMatrix<f64>, g: &DVector<f64>, flags: &mut Vec<Flag>) -> Result<(Vec<f64>, Vec<f64>)> {
    let j = g * g.transpose() - k;
    let (vals, vecs) = sym_eigen_desc(&j)?;
    let mut top = vals[0];
    if top < 0.0 {
        push_flag(flags, Flag::NegativeTopEigenvalue);
        top = 0.0;
    }
    let shift = vecs.column(0) * top.sqrt();
    let b1 = g + &shift;
    let b2 = g - &shift;
    Ok((b1.iter().copied().collect(), b2.iter().copied().collect()))
}

fn unpenalized(quad: &Quadratic) -> Result<DVector<f64>> {
    pinv_solve_psd(&quad.g, &quad.b)
}

/// σ(‖β̂₁‖+‖β̂₂‖+σ)·√(n·d)·ln³n·constant, with β̂ from the unpenalized program.
pub fn default_lambda(x: &DMatrix<f64>, y: &[f64], sigma: f64, constant: f64) -> Result<f64> {
    let (n, d) = x.shape();
    if y.len() != n || d == 0 {
        return Err(Error::DimensionMismatch("default_lambda shapes".into()));
    }
    let quad = Quadratic::new(x, y, sigma);
    let theta = unpenalized(&quad)?;
    let (k, g) = quad.split(&theta);
    let (b1, b2) = split_estimates(&k, &g, &mut Vec::new())?;
    let norm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let ln = (n as f64).ln();
    Ok(constant * sigma * (norm(&b1) + norm(&b2) + sigma) * ((n * d) as f64).sqrt() * ln * ln * ln)
}

/// Proximal gradient with backtracking on the penalized program, then the eigen split of ĝĝᵀ − K̂.
pub fn convex_balanced(x: &DMatrix<f64>, y: &[f64], sigma: f64, lambda: f64, max_iter: usize, tol: f64) -> Result<RecoveryResult> {
    let (n, d) = x.shape();
    if y.len() != n {
        return Err(Error::DimensionMismatch(format!("X has {n} rows, y has {}", y.len())));
    }
    if d == 0 {
        return Err(Error::SupportEmpty);
    }
    if !(lambda >= 0.0) || !(sigma >= 0.0) {
        return Err(Error::InvalidParams("lambda and sigma must be >= 0".into()));
    }
    let quad = Quadratic::new(x, y, sigma);
    let lip = 2.0 * sym_eigen_desc(&quad.g)?.0[0].max(f64::MIN_POSITIVE);
    let mut flags = Vec::new();

    let start = unpenalized(&quad)?;
    let (k0, g0) = quad.split(&start);
    let mut theta = quad.join(&((&k0 + k0.transpose()) * 0.5), &g0);
    let objective = |t: &DVector<f64>| -> Result<f64> {
        let (k, _) = quad.split(t);
        Ok(quad.smooth(t) + lambda * nuclear(&k)?)
    };
    let mut obj = objective(&theta)?;
    let mut trace = vec![obj];
    let mut step = 1.0 / lip;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        let f_cur = quad.smooth(&theta);
        let grad = quad.grad(&theta);
        let mut t = step;
        let candidate = loop {
            let moved = &theta - &grad * t;
            let (k, g) = quad.split(&moved);
            let cand = quad.join(&prox_nuclear(&k, t * lambda)?, &g);
            let diff = &cand - &theta;
            let bound = f_cur + grad.dot(&diff) + diff.norm_squared() / (2.0 * t);
            if quad.smooth(&cand) <= bound * (1.0 + 1e-12) + 1e-12 || t < 1e-30 {
                break cand;
            }
            t *= 0.5;
        };
        step = t;
        let new_obj = objective(&candidate)?;
        if new_obj > obj {
            // accepted steps must not increase the objective
            converged = true;
            break;
        }
        let change = (obj - new_obj).abs();
        theta = candidate;
        obj = new_obj;
        trace.push(obj);
        if change <= tol * obj.abs().max(1.0) {
            converged = true;
            break;
        }
    }
    if !converged {
        push_flag(&mut flags, Flag::NonConvergence);
    }
    let (k, g) = quad.split(&theta);
    let (b1, b2) = split_estimates(&k, &g, &mut flags)?;
    Ok(RecoveryResult { beta1_hat: b1, beta2_hat: b2, rho: None, iterations, pipeline: Pipeline::Convex, flags, objective_trace: trace, history: Vec::new() })
}

#[cfg(test)]
fn solve_kg(x: &DMatrix<f64>, y: &[f64], sigma: f64, lambda: f64, max_iter: usize) -> Result<(DMatrix<f64>, DVector<f64>)> {
    let quad = Quadratic::new(x, y, sigma);
    let lip = 2.0 * sym_eigen_desc(&quad.g)?.0[0].max(f64::MIN_POSITIVE);
    let mut theta = unpenalized(&quad)?;
    for _ in 0..max_iter {
        let grad = quad.grad(&theta);
        let moved = &theta - &grad / lip;
        let (k, g) = quad.split(&moved);
        theta = quad.join(&prox_nuclear(&k, lambda / lip)?, &g);
    }
    Ok(quad.split(&theta))
}
