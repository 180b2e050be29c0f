//! Small dense linear-algebra helpers shared by the simulation modules.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::C64;

/// Largest elementwise deviation of `m` from its conjugate transpose.
pub fn hermiticity_error(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Eigen-decomposition of a Hermitian matrix. Eigenvalues come back in
/// ascending order with the matching eigenvectors as columns.
///
/// The input is symmetrised first so rounding noise in the lower triangle
/// cannot leak into the spectrum.
pub fn eigh(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn eigvalsh(m: &DMatrix<C64>) -> Vec<f64> {
    eigh(m).0
}

/// V diag(f(λ)) V† for a Hermitian matrix.
pub fn hermitian_function(m: &DMatrix<C64>, f: impl Fn(f64) -> C64) -> DMatrix<C64> {
    let (values, vectors) = eigh(m);
    let n = values.len();
    let mut scaled = vectors.clone();
    for (c, &lambda) in values.iter().enumerate() {
        let w = f(lambda);
        for r in 0..n {
            scaled[(r, c)] *= w;
        }
    }
    scaled * vectors.adjoint()
}

/// Trace norm of a Hermitian matrix: sum of absolute eigenvalues.
pub fn trace_norm_hermitian(m: &DMatrix<C64>) -> f64 {
    eigvalsh(m).iter().map(|v| v.abs()).sum()
}
