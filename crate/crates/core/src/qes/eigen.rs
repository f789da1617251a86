//! Eigenpairs of small dense nonsymmetric real matrices.
//!
//! Eigenvalues come from the real Schur form; each eigenvector from a few
//! steps of complex inverse iteration with a slightly perturbed shift.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest dimension accepted by [`matrix_eigenpairs`].
pub const MAX_DIMENSION: usize = 64;

const INVERSE_STEPS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixEigenPair {
    pub eigenvalue: Complex64,
    /// First component of magnitude above `1e-10 * max` equals one.
    pub vector: Vec<Complex64>,
    /// `|M v - lambda v|_inf / (|M|_inf |v|_inf)`.
    pub residual: f64,
}

fn inf_norm(m: &[Vec<f64>]) -> f64 {
    m.iter().map(|row| row.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

fn vec_inf(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Relative residual of `(lambda, v)` for `m`.
pub fn pair_residual(m: &[Vec<f64>], lambda: Complex64, v: &[Complex64]) -> f64 {
    let denom = inf_norm(m).max(lambda.norm()) * vec_inf(v);
    if denom == 0.0 {
        return 0.0;
    }
    m.iter()
        .zip(v)
        .map(|(row, vi)| {
            let mv: Complex64 = row.iter().zip(v).map(|(a, x)| x * *a).sum();
            (mv - lambda * vi).norm()
        })
        .fold(0.0, f64::max)
        / denom
}

/// Scales `v` so that its first non-negligible component is one.
pub fn normalize_first(v: &mut [Complex64]) {
    let big = vec_inf(v);
    if big == 0.0 {
        return;
    }
    if let Some(pivot) = v.iter().copied().find(|z| z.norm() > 1e-10 * big) {
        for z in v.iter_mut() {
            *z /= pivot;
        }
    }
}

fn check_square(m: &[Vec<f64>]) -> Result<usize> {
    let n = m.len();
    if n == 0 || n > MAX_DIMENSION {
        return Err(Error::InvalidParams(format!(
            "matrix dimension must be in 1..={MAX_DIMENSION}, got {n}"
        )));
    }
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidParams("matrix must be square".into()));
    }
    if m.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParams("matrix entries must be finite".into()));
    }
    Ok(n)
}

fn eigenvector(m: &[Vec<f64>], lambda: Complex64, max_residual: f64) -> Result<(Vec<Complex64>, f64)> {
    let n = m.len();
    let scale = inf_norm(m).max(lambda.norm()).max(f64::MIN_POSITIVE);
    let shift = lambda + Complex64::new(1.0, 0.5) * (1e-10 * scale);
    let a = DMatrix::from_fn(n, n, |i, j| {
        let d = if i == j { shift } else { Complex64::new(0.0, 0.0) };
        Complex64::new(m[i][j], 0.0) - d
    });
    let lu = a.lu();
    let mut v = nalgebra::DVector::from_fn(n, |i, _| Complex64::new(1.0 + 0.1 * i as f64, 0.0));
    let mut best: Option<(Vec<Complex64>, f64)> = None;
    for _ in 0..INVERSE_STEPS {
        let Some(next) = lu.solve(&v) else {
            break;
        };
        let norm = next.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !(norm.is_finite() && norm > 0.0) {
            break;
        }
        v = next / Complex64::new(norm, 0.0);
        let mut cand: Vec<Complex64> = v.iter().copied().collect();
        normalize_first(&mut cand);
        let r = pair_residual(m, lambda, &cand);
        if best.as_ref().is_none_or(|(_, b)| r < *b) {
            best = Some((cand, r));
        }
        if r <= 1e-3 * max_residual {
            break;
        }
    }
    match best {
        Some((vec, r)) if r <= max_residual => Ok((vec, r)),
        Some((_, r)) => Err(Error::ConvergenceFailure(format!(
            "eigenvector residual {r:e} for eigenvalue {lambda} exceeds {max_residual:e}"
        ))),
        None => Err(Error::ConvergenceFailure(format!(
            "inverse iteration broke down for eigenvalue {lambda}"
        ))),
    }
}

/// All eigenpairs of `m`, counted with algebraic multiplicity and sorted by
/// real then imaginary part.
pub fn matrix_eigenpairs(m: &[Vec<f64>], max_residual: f64) -> Result<Vec<MatrixEigenPair>> {
    let n = check_square(m)?;
    let mat = DMatrix::from_fn(n, n, |i, j| m[i][j]);
    let mut values: Vec<Complex64> = mat.complex_eigenvalues().iter().copied().collect();
    if values.len() != n || values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::ConvergenceFailure("Schur iteration did not converge".into()));
    }
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    values
        .into_iter()
        .map(|lambda| {
            let (vector, residual) = eigenvector(m, lambda, max_residual)?;
            Ok(MatrixEigenPair {
                eigenvalue: lambda,
                vector,
                residual,
            })
        })
        .collect()
}
