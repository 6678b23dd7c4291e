use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Minimum-norm least-squares solution of min ‖a β − b‖.
pub fn lstsq_min_norm(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let (n, d) = a.shape();
    if n == 0 || d == 0 {
        return DVector::zeros(d);
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let tol = smax * n.max(d) as f64 * f64::EPSILON;
    svd.solve(b, tol).unwrap_or_else(|_| DVector::zeros(d))
}

/// Eigenpairs of a symmetric matrix, eigenvalues descending; equal eigenvalues keep solver order.
pub fn sym_eigen_desc(m: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let d = m.nrows();
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::try_new(sym, 1e-14, 10_000).ok_or(Error::EigenFailure)?;
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(d, d);
    for (c, &i) in order.iter().enumerate() {
        vectors.set_column(c, &eig.eigenvectors.column(i));
    }
    Ok((values, vectors))
}

/// G⁺ b for symmetric positive semidefinite G.
pub fn pinv_solve_psd(g: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    let (vals, vecs) = sym_eigen_desc(g)?;
    let top = vals.first().copied().unwrap_or(0.0).abs();
    let tol = top * g.nrows() as f64 * 1e-12;
    let mut out = DVector::zeros(g.nrows());
    for (i, &l) in vals.iter().enumerate() {
        if l > tol {
            let v = vecs.column(i);
            out += v * (v.dot(b) / l);
        }
    }
    Ok(out)
}
