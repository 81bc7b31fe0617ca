//! Small dense complex linear algebra shared by the fiber and ambient code paths.

use faer::{c64, Mat, MatRef};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Relative rank cutoff shared by range functions, frame bounds and ambient spans.
pub const RANK_TOL: f64 = 1e-9;

pub type CMatrix = DMatrix<Complex64>;

/// `sum a_i conj(b_i)`.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

pub fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Removes the components of `v` along the orthonormal `basis`, one vector at a
/// time (modified Gram-Schmidt order).
fn subtract_projections(basis: &[Vec<Complex64>], v: &mut [Complex64]) {
    for q in basis {
        let c = inner(v, q);
        for (vi, qi) in v.iter_mut().zip(q) {
            *vi -= c * qi;
        }
    }
}

/// Modified Gram-Schmidt with one reorthogonalization pass.
///
/// Vectors are processed in order; a vector is kept when its residual norm
/// exceeds `abs_tol`.
pub fn orthonormal_basis(vectors: &[Vec<Complex64>], abs_tol: f64) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        subtract_projections(&basis, &mut w);
        subtract_projections(&basis, &mut w);
        let n = norm(&w);
        if n > abs_tol {
            for wi in &mut w {
                *wi /= n;
            }
            basis.push(w);
        }
    }
    basis
}

/// Orthogonal projection of `v` onto the span of an orthonormal basis.
pub fn project(basis: &[Vec<Complex64>], v: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    for q in basis {
        let c = inner(v, q);
        for (o, qi) in out.iter_mut().zip(q) {
            *o += c * qi;
        }
    }
    out
}

/// `|| v - P v ||`.
pub fn residual(basis: &[Vec<Complex64>], v: &[Complex64]) -> f64 {
    let p = project(basis, v);
    v.iter().zip(&p).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
}

/// Matrix with the given vectors as columns.
pub fn columns_to_matrix(dim: usize, cols: &[Vec<Complex64>]) -> CMatrix {
    CMatrix::from_fn(dim, cols.len(), |i, j| cols[j][i])
}

/// `Q Q^*` for a column-orthonormal `Q` given by its columns.
pub fn projection_matrix(dim: usize, basis: &[Vec<Complex64>]) -> CMatrix {
    let q = columns_to_matrix(dim, basis);
    &q * q.adjoint()
}

fn to_faer(m: &CMatrix) -> Mat<c64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| {
        let v = m[(i, j)];
        c64::new(v.re, v.im)
    })
}

fn from_faer(m: MatRef<'_, c64>) -> CMatrix {
    CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
        let v = m[(i, j)];
        Complex64::new(v.re, v.im)
    })
}

/// Thin SVD as `(U, sigma)`; singular values are not assumed sorted.
fn thin_svd(m: &CMatrix) -> (CMatrix, Vec<f64>) {
    let svd = to_faer(m).thin_svd().expect("SVD did not converge");
    let sigma = svd.S().column_vector().iter().map(|v| v.re).collect();
    (from_faer(svd.U()), sigma)
}

/// Singular values in decreasing order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s = to_faer(m).singular_values().expect("SVD did not converge");
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Largest singular value; 0 for empty matrices.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Orthonormal basis of the column space via SVD, keeping singular values above
/// `rel_tol * sigma_max`. Independent of the Gram-Schmidt path.
pub fn svd_column_space(m: &CMatrix, rel_tol: f64) -> CMatrix {
    if m.ncols() == 0 || m.nrows() == 0 {
        return CMatrix::zeros(m.nrows(), 0);
    }
    let (u, sigma) = thin_svd(m);
    let smax = sigma.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..sigma.len())
        .filter(|&i| smax > 0.0 && sigma[i] > rel_tol * smax)
        .collect();
    CMatrix::from_fn(m.nrows(), keep.len(), |i, j| u[(i, keep[j])])
}

/// Eigenvalues of a Hermitian matrix, decreasing.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    hermitian_eigen(m).0
}

/// Eigenpairs of a Hermitian matrix, eigenvalues decreasing; eigenvectors are
/// the matching columns. Only the lower triangle is read.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let evd = to_faer(m)
        .self_adjoint_eigen(faer::Side::Lower)
        .expect("eigensolver did not converge");
    let values: Vec<f64> = evd.S().column_vector().iter().map(|v| v.re).collect();
    let vectors = from_faer(evd.U());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    (
        order.iter().map(|&k| values[k]).collect(),
        CMatrix::from_fn(n, n, |i, j| vectors[(i, order[j])]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gram_schmidt_drops_dependent_vectors() {
        let vs = vec![
            vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(2.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0), c(1.0, 0.0)],
        ];
        let b = orthonormal_basis(&vs, 1e-12);
        assert_eq!(b.len(), 2);
        for (i, u) in b.iter().enumerate() {
            for (j, v) in b.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((inner(u, v) - c(want, 0.0)).norm() < 1e-14);
            }
        }
        assert!(residual(&b, &vs[1]) < 1e-14);
    }

    #[test]
    fn gram_schmidt_keeps_residual_small_on_ill_conditioned_input() {
        // nearly parallel columns stress the reorthogonalization pass
        let eps = 1e-7;
        let vs: Vec<Vec<Complex64>> = (0..6)
            .map(|k| {
                (0..8)
                    .map(|i| c(1.0 + eps * ((i * k) as f64).sin(), eps * (i + k) as f64))
                    .collect()
            })
            .collect();
        let b = orthonormal_basis(&vs, 1e-14);
        let q = columns_to_matrix(8, &b);
        let gram = q.adjoint() * &q;
        let err = (gram - CMatrix::identity(b.len(), b.len())).norm();
        assert!(err < 1e-10, "gram residual {err}");
    }

    #[test]
    fn spectral_norm_of_projection_difference() {
        let e1 = vec![c(1.0, 0.0), c(0.0, 0.0)];
        let e2 = vec![c(0.0, 0.0), c(1.0, 0.0)];
        let p = projection_matrix(2, std::slice::from_ref(&e1));
        let q = projection_matrix(2, &[e2]);
        assert!((spectral_norm(&(p.clone() - q)) - 1.0).abs() < 1e-14);
        assert!(spectral_norm(&(p.clone() - p)) < 1e-15);
    }

    #[test]
    fn svd_column_space_rank() {
        let m = CMatrix::from_fn(4, 3, |i, j| c((i + j) as f64, 0.0));
        assert_eq!(svd_column_space(&m, RANK_TOL).ncols(), 2);
        assert_eq!(svd_column_space(&CMatrix::zeros(4, 2), RANK_TOL).ncols(), 0);
    }

    #[test]
    fn column_space_of_tall_rank_deficient_complex_matrix() {
        // third column is a combination of the first two
        let m = CMatrix::from_fn(64, 3, |i, j| {
            let (x, y) = (i as f64, j as f64);
            let a = c((0.3 * x).sin(), (0.7 * x + 1.0).cos());
            let b = c((1.1 * x).cos(), (0.2 * x * x).sin());
            match j {
                0 => a,
                1 => b,
                _ => a * c(0.4, -1.3) + b * c(y - 1.5, 0.25),
            }
        });
        let q = svd_column_space(&m, RANK_TOL);
        assert_eq!(q.ncols(), 2);
        let p = &q * q.adjoint();
        assert!((&p * &m - &m).norm() < 1e-12 * m.norm());
        let (vals, vecs) = hermitian_eigen(&(&m * m.adjoint()));
        assert!(vals.windows(2).all(|w| w[0] >= w[1]));
        let top = vecs.column(0).into_owned();
        assert!((&m * m.adjoint() * &top - &top * Complex64::new(vals[0], 0.0)).norm() < 1e-10 * vals[0]);
        let sv = singular_values(&m);
        assert!((sv[0] * sv[0] - vals[0]).abs() < 1e-10 * vals[0]);
    }
}
