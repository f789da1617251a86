//! Quasi-exact solvability: finite-dimensional spaces of monomials
//! `x^lambda, ..., x^(lambda+n)` preserved by the operator, and the exact
//! eigenfunctions they carry.
//!
//! The lower end closes because `lambda` is an exponent at `x = 0`. The
//! upper end closes when `lambda + n = -alpha` (A4) or `lambda + n = 1/2`
//! (A3, A2), where the upward d-coefficients vanish.

mod eigen;

pub use eigen::{matrix_eigenpairs, normalize_first, pair_residual, MatrixEigenPair, MAX_DIMENSION};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::operator::{apply_with_scale, build_equation, d_coefficient, exponent_formulas};
use crate::params::{Family, ModelParams};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantSubspace {
    pub family: Family,
    /// Lowest power of the basis.
    pub lambda: f64,
    /// For A4, the exponent `alpha` at infinity that closes the top end.
    pub alpha: Option<f64>,
    /// The basis is `x^(lambda+k)` for `k = 0..=n`.
    pub n: usize,
    /// `matrix[row][col]` is the coefficient of `x^(lambda+row)` in
    /// `A x^(lambda+col)`.
    pub matrix: Vec<Vec<f64>>,
    /// Largest relative out-of-space coefficient found by direct
    /// application of the operator to the basis.
    pub closure: f64,
}

impl InvariantSubspace {
    pub fn dimension(&self) -> usize {
        self.n + 1
    }

    pub fn trace(&self) -> f64 {
        (0..=self.n).map(|k| self.matrix[k][k]).sum()
    }
}

/// Candidate `(lambda, alpha, n)` triples whose integrality condition holds.
pub fn subspace_conditions(params: &ModelParams, tol: &Tolerances) -> Result<Vec<(f64, Option<f64>, usize)>> {
    params.validate()?;
    let f = exponent_formulas(params);
    let mut lambdas = vec![f.zero[0]];
    if params.family != Family::A2 && f.zero[1] != f.zero[0] {
        lambdas.push(f.zero[1]);
    }
    let mut out = Vec::new();
    for &lambda in &lambdas {
        match params.family {
            Family::A4 => {
                let mut alphas = vec![params.alpha1];
                if params.alpha2 != params.alpha1 {
                    alphas.push(params.alpha2);
                }
                for alpha in alphas {
                    if let Some(n) = tol.as_integer(-lambda - alpha).filter(|&n| n >= 0) {
                        out.push((lambda, Some(alpha), n as usize));
                    }
                }
            }
            Family::A3 | Family::A2 => {
                if let Some(n) = tol.as_integer(0.5 - lambda).filter(|&n| n >= 0) {
                    out.push((lambda, None, n as usize));
                }
            }
        }
    }
    Ok(out)
}

/// Matrix of the operator on `x^(lambda+k)`, `k = 0..=n`, from the closed
/// d-coefficients; closure is certified by applying the polynomial-form
/// equation to each basis monomial.
pub fn operator_matrix(params: &ModelParams, lambda: f64, n: usize, tol: &Tolerances) -> Result<(Vec<Vec<f64>>, f64)> {
    let eq = build_equation(&params.with_energy(0.0))?;
    let norm = params.family.normalization();
    let dim = n + 1;
    let mut matrix = vec![vec![0.0; dim]; dim];
    let mut closure: f64 = 0.0;
    for col in 0..dim {
        let mu = lambda + col as f64;
        for &s in params.family.shifts() {
            let row = col as i64 + s;
            if (0..dim as i64).contains(&row) {
                matrix[row as usize][col] = d_coefficient(params, s, mu);
            }
        }
        let (r, scale) = apply_with_scale(&eq, mu, &LaurentPoly::one());
        let big = scale.max_abs();
        for (deg, c) in r.iter() {
            let row = deg - norm + col as i64;
            if !(0..dim as i64).contains(&row) && big > 0.0 {
                closure = closure.max(c.abs() / big);
            }
        }
    }
    if closure > tol.vanish {
        return Err(Error::ClosureViolation { magnitude: closure });
    }
    Ok((matrix, closure))
}

/// Every invariant monomial subspace of the stated families.
pub fn find_subspaces(params: &ModelParams, tol: &Tolerances) -> Result<Vec<InvariantSubspace>> {
    subspace_conditions(params, tol)?
        .into_iter()
        .map(|(lambda, alpha, n)| {
            let (matrix, closure) = operator_matrix(params, lambda, n, tol)?;
            Ok(InvariantSubspace {
                family: params.family,
                lambda,
                alpha,
                n,
                matrix,
                closure,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    pub eigenvalue: Complex64,
    /// `c_0..c_n` in the basis `x^(lambda+k)`.
    pub coefficients: Vec<Complex64>,
    /// Residual of the finite matrix problem.
    pub matrix_residual: f64,
    /// Largest coefficient of `(A - E) g` for `g = sum c_k x^(lambda+k)`,
    /// relative to the largest contribution, over all orders.
    pub residual: f64,
}

/// Residual of the full q-difference equation for a complex combination of
/// basis monomials.
pub fn eigenfunction_residual(params: &ModelParams, sub: &InvariantSubspace, energy: Complex64, coeffs: &[Complex64]) -> Result<f64> {
    let eq = build_equation(&params.with_energy(0.0))?;
    let norm = params.family.normalization();
    let re = LaurentPoly::from_dense(0, &coeffs.iter().map(|c| c.re).collect::<Vec<_>>());
    let im = LaurentPoly::from_dense(0, &coeffs.iter().map(|c| c.im).collect::<Vec<_>>());
    let (ar, sr) = apply_with_scale(&eq, sub.lambda, &re);
    let (ai, si) = apply_with_scale(&eq, sub.lambda, &im);
    let lo = -2;
    let hi = sub.n as i64 + 2 * norm + 2;
    let (mut worst, mut big): (f64, f64) = (0.0, 0.0);
    for k in lo..=hi {
        let g = Complex64::new(re.coeff(k - norm), im.coeff(k - norm));
        let r = Complex64::new(ar.coeff(k), ai.coeff(k)) - energy * g;
        worst = worst.max(r.norm());
        big = big.max(sr.coeff(k) + si.coeff(k) + energy.norm() * g.norm());
    }
    Ok(if big == 0.0 { 0.0 } else { worst / big })
}

/// Eigenpairs of the subspace matrix, each certified against the full
/// equation.
pub fn eigenpairs(params: &ModelParams, sub: &InvariantSubspace, tol: &Tolerances) -> Result<Vec<EigenPair>> {
    let pairs = matrix_eigenpairs(&sub.matrix, tol.eigen_residual)?;
    pairs
        .into_iter()
        .map(|p| {
            let residual = eigenfunction_residual(params, sub, p.eigenvalue, &p.vector)?;
            if residual > tol.eigen_residual {
                return Err(Error::ConvergenceFailure(format!(
                    "eigenfunction residual {residual:e} for eigenvalue {} exceeds {:e}",
                    p.eigenvalue, tol.eigen_residual
                )));
            }
            Ok(EigenPair {
                eigenvalue: p.eigenvalue,
                coefficients: p.vector,
                matrix_residual: p.residual,
                residual,
            })
        })
        .collect()
}

/// Closed-form eigenvalue on a one-dimensional subspace.
pub fn one_dimensional_eigenvalue(params: &ModelParams, sub: &InvariantSubspace) -> Option<f64> {
    if sub.n != 0 {
        return None;
    }
    let q = params.q;
    let (h, l, t) = (&params.h, &params.l, &params.t);
    match params.family {
        Family::A4 => {
            let alpha = sub.alpha?;
            let up: f64 = (0..2).map(|i| q.powf(h[i] + 0.5) * t[i]).sum();
            let down: f64 = (0..2).map(|i| q.powf(l[i] - 0.5) * t[i]).sum();
            Some(-up * q.powf(alpha) - down * q.powf(params.alpha1 + params.alpha2 - alpha))
        }
        Family::A3 | Family::A2 => {
            let m = h.len();
            let mut acc = 0.0;
            for i in 0..m {
                for j in i + 1..m {
                    acc += (q.powf(h[i] + h[j] + 0.5) + q.powf(l[i] + l[j] - 0.5)) * t[i] * t[j];
                }
            }
            Some(acc)
        }
    }
}

/// Adjusts one parameter so that a subspace of dimension `n + 1` exists:
/// `alpha1` for A4, `beta` for A3 and `h1` for A2.
pub fn tune_for_dimension(params: &ModelParams, n: usize) -> ModelParams {
    let mut p = params.clone();
    let n = n as f64;
    let diff = p.sum_h() - p.sum_l();
    match p.family {
        Family::A4 => p.alpha1 = -2.0 * n - (diff - p.alpha2 - p.beta + 2.0),
        Family::A3 => p.beta = diff + 2.0 + 2.0 * n,
        Family::A2 => p.h[0] += -2.0 - 2.0 * n - diff,
    }
    p
}
