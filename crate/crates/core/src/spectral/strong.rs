use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use rustfft::num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::geometry::CurvatureSpec;

/// Lowest eigenvalue of `-d²/ds² - ¼γ(s)²` on `[0, L]` with periodic
/// boundary conditions, by Fourier–Galerkin truncation to the `2M + 1`
/// exponentials `exp(2πiks/L)`, `|k| ≤ M`.
///
/// The Fourier coefficients of `γ²` are exact (a discrete convolution of
/// those of `γ`), and the Hermitian Galerkin matrix is diagonalised through
/// its real symmetric embedding.
pub fn strong_coupling_reference(spec: &CurvatureSpec, modes: usize) -> Result<f64> {
    if modes == 0 {
        return Err(invalid("mode cutoff must be at least 1"));
    }
    let length = spec.length();
    let gamma = spec.curvature_coefficients();
    let top = spec.max_mode() as i64;
    // potential coefficients V_m for |m| ≤ 2·top
    let mut potential = vec![Complex64::new(0.0, 0.0); (4 * top + 1) as usize];
    for &(j, cj) in &gamma {
        for &(k, ck) in &gamma {
            potential[(j + k + 2 * top) as usize] += cj * ck;
        }
    }
    let size = 2 * modes + 1;
    let m = modes as i64;
    let mut embedded = DMatrix::<f64>::zeros(2 * size, 2 * size);
    for row in 0..size {
        let j = row as i64 - m;
        for col in 0..size {
            let k = col as i64 - m;
            let mut h = Complex64::new(0.0, 0.0);
            if j == k {
                h.re += (2.0 * PI * j as f64 / length).powi(2);
            }
            let d = j - k;
            if d.abs() <= 2 * top {
                h -= 0.25 * potential[(d + 2 * top) as usize];
            }
            embedded[(row, col)] = h.re;
            embedded[(row + size, col + size)] = h.re;
            embedded[(row, col + size)] = -h.im;
            embedded[(row + size, col)] = h.im;
        }
    }
    Ok(SymmetricEigen::new(embedded).eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min))
}
