//! Probabilists' Hermite polynomials and a Monte-Carlo orthonormality check.

use crate::rng;

/// He_k(x) from He_{k+1} = x·He_k − k·He_{k−1}, the same recursion as x·He_k − He_k'.
pub fn hermite_eval(order: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if order == 0 {
        return prev;
    }
    for k in 1..order {
        let next = x * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// He_0..=He_max at x.
pub fn hermite_all(max: usize, x: f64, out: &mut Vec<f64>) {
    out.clear();
    out.push(1.0);
    if max >= 1 {
        out.push(x);
    }
    for k in 1..max {
        let next = x * out[k] - k as f64 * out[k - 1];
        out.push(next);
    }
}

/// Multi-indices over `cells` variables with total order ≤ `max_order`, graded then lexicographic.
pub fn multi_indices(cells: usize, max_order: usize) -> Vec<Vec<usize>> {
    fn rec(cells: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == cells {
            out.push(cur.clone());
            return;
        }
        for a in 0..=left {
            cur.push(a);
            rec(cells, left - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(cells, max_order, &mut Vec::new(), &mut out);
    out.sort_by_key(|a| (a.iter().sum::<usize>(), a.iter().map(|v| usize::MAX - v).collect::<Vec<_>>()));
    out
}

#[derive(Debug, Clone)]
pub struct OrthonormalityReport {
    /// Rows of X, columns of X; each multi-index has n·(p+1) entries (the last of each row is y).
    pub n: usize,
    pub p: usize,
    pub indices: Vec<Vec<usize>>,
    /// Estimates of E[H̃_α H̃_β]/√(α!β!), row-major over `indices`.
    pub estimate: Vec<Vec<f64>>,
    pub std_error: Vec<Vec<f64>>,
    pub samples: usize,
    /// max |estimate − δ|
    pub max_abs_deviation: f64,
    /// max |estimate − δ|/SE over entries with SE > 0
    pub max_z: f64,
}

impl OrthonormalityReport {
    pub fn within(&self, z: f64) -> bool {
        self.max_z <= z
    }
}

/// Gram-matrix check on the (n = 1, p = 1) grid.
pub fn hermite_orthonormality_check(max_order: usize, mc_samples: usize, seed: u64) -> OrthonormalityReport {
    hermite_orthonormality_grid(1, 1, max_order, mc_samples, seed)
}

/// Gram-matrix check on an n × (p+1) grid of null-model variables.
///
/// Under the null, X has i.i.d. standard entries and y = s·w with s = √(‖β‖²/σ²+1);
/// the basis uses y/s. The draw here uses s = √2 (k = 1, σ = 1).
pub fn hermite_orthonormality_grid(n: usize, p: usize, max_order: usize, mc_samples: usize, seed: u64) -> OrthonormalityReport {
    let cells = n * (p + 1);
    let indices = multi_indices(cells, max_order);
    let m = indices.len();
    let norms: Vec<f64> = indices.iter().map(|a| a.iter().map(|&v| (1..=v).map(|i| i as f64).product::<f64>()).product::<f64>().sqrt()).collect();
    let scale = 2f64.sqrt();
    let mut r = rng::rng(seed);
    let mut sum = vec![vec![0.0; m]; m];
    let mut sum_sq = vec![vec![0.0; m]; m];
    let mut h = vec![Vec::new(); cells];
    let mut vals = vec![0.0; m];
    let mut u = vec![0.0; cells];
    for _ in 0..mc_samples {
        for i in 0..n {
            for j in 0..p {
                u[i * (p + 1) + j] = rng::normal(&mut r);
            }
            let y = scale * rng::normal(&mut r);
            u[i * (p + 1) + p] = y / scale;
        }
        for (c, hc) in h.iter_mut().enumerate() {
            hermite_all(max_order, u[c], hc);
        }
        for (a, alpha) in indices.iter().enumerate() {
            vals[a] = alpha.iter().enumerate().map(|(c, &o)| h[c][o]).product::<f64>() / norms[a];
        }
        for a in 0..m {
            for b in a..m {
                let v = vals[a] * vals[b];
                sum[a][b] += v;
                sum_sq[a][b] += v * v;
            }
        }
    }
    let nf = mc_samples as f64;
    let mut estimate = vec![vec![0.0; m]; m];
    let mut std_error = vec![vec![0.0; m]; m];
    let mut max_abs: f64 = 0.0;
    let mut max_z: f64 = 0.0;
    for a in 0..m {
        for b in a..m {
            let mean = sum[a][b] / nf;
            let var = (sum_sq[a][b] / nf - mean * mean).max(0.0) * nf / (nf - 1.0).max(1.0);
            let se = (var / nf).sqrt();
            let target = if a == b { 1.0 } else { 0.0 };
            let dev = (mean - target).abs();
            max_abs = max_abs.max(dev);
            if se > 0.0 {
                max_z = max_z.max(dev / se);
            } else if dev > 1e-12 {
                max_z = f64::INFINITY;
            }
            estimate[a][b] = mean;
            estimate[b][a] = mean;
            std_error[a][b] = se;
            std_error[b][a] = se;
        }
    }
    OrthonormalityReport { n, p, indices, estimate, std_error, samples: mc_samples, max_abs_deviation: max_abs, max_z }
}
