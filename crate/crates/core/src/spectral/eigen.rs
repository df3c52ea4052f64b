use nalgebra::{DMatrix, SymmetricEigen};

use super::matrix::BsMatrix;
use crate::error::{Error, Result};

/// Stopping rule and budget for [`max_eigenpair_with`].
#[derive(Debug, Clone, Copy)]
pub struct EigenOptions {
    /// Stop once `‖Mx - θx‖ ≤ tolerance · |θ|`.
    pub tolerance: f64,
    /// Krylov subspace size per restart.
    pub krylov_dim: usize,
    pub max_restarts: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            krylov_dim: 40,
            max_restarts: 200,
        }
    }
}

/// Dominant eigenpair of a Birman–Schwinger matrix.
#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: f64,
    /// Normalised so that `Σ v_i² · L/N = 1`, sign chosen with positive sum.
    pub vector: Vec<f64>,
    pub residual: f64,
    pub matvecs: usize,
}

impl Eigenpair {
    /// Whether every entry is strictly positive (the discrete Perron property).
    pub fn is_positive(&self) -> bool {
        self.vector.iter().all(|&v| v > 0.0)
    }
}

pub fn max_eigenpair(matrix: &BsMatrix) -> Result<Eigenpair> {
    max_eigenpair_with(matrix, &EigenOptions::default(), None)
}

/// Largest eigenvalue by explicitly restarted Lanczos with full
/// reorthogonalisation.
///
/// Each restart begins from the current Ritz vector; `start` seeds the first
/// cycle (all-ones when absent, which is the exact eigenvector on a circle).
pub fn max_eigenpair_with(matrix: &BsMatrix, options: &EigenOptions, start: Option<&[f64]>) -> Result<Eigenpair> {
    let n = matrix.size();
    let dim = options.krylov_dim.clamp(2, n);
    let mut x: Vec<f64> = match start {
        Some(v) if v.len() == n && v.iter().any(|e| *e != 0.0) => v.to_vec(),
        _ => vec![1.0; n],
    };
    normalize(&mut x);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(dim);
    let mut w = vec![0.0; n];
    let mut matvecs = 0;
    let mut residual = f64::INFINITY;

    for _ in 0..options.max_restarts {
        basis.clear();
        basis.push(x.clone());
        let mut alphas = Vec::with_capacity(dim);
        let mut betas: Vec<f64> = Vec::with_capacity(dim);
        for j in 0..dim {
            matrix.apply(&basis[j], &mut w);
            matvecs += 1;
            let a = dot(&w, &basis[j]);
            alphas.push(a);
            // two passes of classical Gram–Schmidt against the whole basis
            for _ in 0..2 {
                for q in &basis {
                    let c = dot(&w, q);
                    axpy(-c, q, &mut w);
                }
            }
            let b = norm(&w);
            if j + 1 == dim || b <= 1e-14 * a.abs().max(1e-300) {
                break;
            }
            betas.push(b);
            basis.push(w.iter().map(|v| v / b).collect());
        }
        let k = alphas.len();
        let mut t = DMatrix::<f64>::zeros(k, k);
        for i in 0..k {
            t[(i, i)] = alphas[i];
            if i + 1 < k {
                t[(i, i + 1)] = betas[i];
                t[(i + 1, i)] = betas[i];
            }
        }
        let eig = SymmetricEigen::new(t);
        let (top, _) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        let theta = eig.eigenvalues[top];
        let y = eig.eigenvectors.column(top);
        x.iter_mut().for_each(|v| *v = 0.0);
        for (q, coef) in basis.iter().zip(y.iter()) {
            axpy(*coef, q, &mut x);
        }
        normalize(&mut x);
        matrix.apply(&x, &mut w);
        matvecs += 1;
        let rq = dot(&w, &x);
        residual = w.iter().zip(&x).map(|(a, b)| (a - rq * b).powi(2)).sum::<f64>().sqrt();
        if residual <= options.tolerance * rq.abs() || residual <= 1e-15 * theta.abs() {
            if x.iter().sum::<f64>() < 0.0 {
                x.iter_mut().for_each(|v| *v = -*v);
            }
            let scale = (matrix.length() / n as f64).sqrt();
            x.iter_mut().for_each(|v| *v /= scale);
            return Ok(Eigenpair {
                value: rq,
                vector: x,
                residual,
                matvecs,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: matvecs,
        residual,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(a: &mut [f64]) {
    let n = norm(a);
    a.iter_mut().for_each(|v| *v /= n);
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_circle, build_ellipse};
    use crate::spectral::assemble_bs_matrix;
    use std::f64::consts::PI;

    fn dense_max(m: &BsMatrix) -> f64 {
        let n = m.size();
        let d = DMatrix::from_fn(n, n, |i, j| m.get(i, j));
        SymmetricEigen::new(d).eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn agrees_with_dense_solver() {
        let e = build_ellipse(1.7, 2.0 * PI, 128).unwrap();
        for kappa in [0.2, 1.0, 5.0, 20.0] {
            let m = assemble_bs_matrix(&e, 1.0, kappa).unwrap();
            let pair = max_eigenpair(&m).unwrap();
            let dense = dense_max(&m);
            assert!((pair.value - dense).abs() <= 1e-12 * dense, "kappa {kappa}: {} vs {dense}", pair.value);
            assert!(pair.is_positive());
        }
    }

    #[test]
    fn circle_vector_is_constant() {
        let c = build_circle(2.0 * PI, 128).unwrap();
        let m = assemble_bs_matrix(&c, 1.0, 0.8).unwrap();
        let pair = max_eigenpair(&m).unwrap();
        let expected = (2.0 * PI).powf(-0.5);
        for v in &pair.vector {
            assert!((v - expected).abs() < 1e-10);
        }
    }
}
