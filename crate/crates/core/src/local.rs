//! Local analysis at the regular singularities `x = 0` and `x = inf`:
//! characteristic exponents, Frobenius-type series and apparency.
//!
//! About `x = 0` a solution is sought as `x^lambda sum_n c_n x^n`; about
//! `x = inf` as `sum_n c_n x^(-lambda - n)`. With `M` the lowest degree of
//! `u` (resp. `N` the highest) the coefficients obey
//!
//! ```text
//! sum_{l=0}^{n} (q^(-lambda-l) u_{M+n-l} + v_{M+n-l} + q^(lambda+l) w_{M+n-l}) c_l = 0   (x = 0)
//! sum_{l=0}^{n} (q^(lambda+l) u_{N+l-n} + v_{N+l-n} + q^(-lambda-l) w_{N+l-n}) c_l = 0   (x = inf)
//! ```
//!
//! The `n = 0` equation is the characteristic equation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::operator::{apply_with_scale, QDiffEquation};
use crate::params::qpow;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasePoint {
    Zero,
    Infinity,
}

impl BasePoint {
    fn name(self) -> &'static str {
        match self {
            BasePoint::Zero => "x=0",
            BasePoint::Infinity => "x=inf",
        }
    }
}

impl fmt::Display for BasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BasePoint {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "0" | "zero" => Ok(BasePoint::Zero),
            "inf" | "infinity" => Ok(BasePoint::Infinity),
            other => Err(Error::InvalidParams(format!(
                "unknown point '{other}' (expected zero or inf)"
            ))),
        }
    }
}

/// The two exponents at a regular singularity, `lambda1 <= lambda2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentPair {
    pub lambda1: f64,
    pub lambda2: f64,
    pub difference: f64,
    /// The difference is a positive integer.
    pub resonant: bool,
}

impl ExponentPair {
    pub fn resonance_index(&self, tol: &Tolerances) -> Option<usize> {
        match tol.as_integer(self.difference) {
            Some(n) if n >= 1 => Some(n as usize),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeriesStatus {
    Generic,
    ApparentResonance,
    LogarithmicNeeded,
}

/// Consistency sum evaluated at a resonance index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonanceCheck {
    pub index: usize,
    pub sum: f64,
    /// Sum of magnitudes of the terms entering `sum`.
    pub scale: f64,
    pub passed: bool,
}

impl ResonanceCheck {
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            0.0
        } else {
            self.sum.abs() / self.scale
        }
    }
}

/// Truncated series solution about a regular singularity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalExpansion {
    pub point: BasePoint,
    pub lambda: f64,
    /// `c_0 = 1, c_1, ..., c_order`.
    pub coeffs: Vec<f64>,
    pub order: usize,
    pub status: SeriesStatus,
    pub resonance: Option<ResonanceCheck>,
}

impl LocalExpansion {
    /// The truncated solution as `(offset, poly)` meaning `x^offset poly(x)`.
    pub fn as_laurent(&self) -> (f64, LaurentPoly) {
        match self.point {
            BasePoint::Zero => (self.lambda, LaurentPoly::from_dense(0, &self.coeffs)),
            BasePoint::Infinity => (
                -self.lambda,
                LaurentPoly::from_pairs(self.coeffs.iter().enumerate().map(|(n, &c)| (-(n as i64), c))),
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularityReport {
    pub point: BasePoint,
    pub is_regular: bool,
    pub exponents: Option<ExponentPair>,
    pub apparent: Option<bool>,
}

/// Degree bookkeeping for the chosen base point: the coefficient entering
/// at distance `j` from the extremal degree is `p_{base + sign * j}`.
#[derive(Debug, Clone, Copy)]
struct Chart {
    base: i64,
    sign: i64,
}

impl Chart {
    fn new(eq: &QDiffEquation, point: BasePoint) -> Chart {
        match point {
            BasePoint::Zero => Chart {
                base: eq.u.low_degree().expect("u is nonzero"),
                sign: 1,
            },
            BasePoint::Infinity => Chart {
                base: eq.u.high_degree().expect("u is nonzero"),
                sign: -1,
            },
        }
    }

    /// `(value, magnitude)` of `q^(-s mu) u_j + v_j + q^(s mu) w_j` where `s`
    /// is the chart sign and `mu = lambda + l`.
    fn factor(&self, eq: &QDiffEquation, mu: f64, j: usize) -> (f64, f64) {
        let k = self.base + self.sign * j as i64;
        let s = self.sign as f64;
        let tu = qpow(eq.q, -s * mu) * eq.u.coeff(k);
        let tv = eq.v.coeff(k);
        let tw = qpow(eq.q, s * mu) * eq.w.coeff(k);
        (tu + tv + tw, tu.abs() + tv.abs() + tw.abs())
    }

    /// Coefficients `(A, B, C)` of the characteristic quadratic
    /// `A tau^2 + B tau + C = 0` in `tau = q^lambda`.
    fn quadratic(&self, eq: &QDiffEquation) -> (f64, f64, f64) {
        let k = self.base;
        match self.sign {
            1 => (eq.w.coeff(k), eq.v.coeff(k), eq.u.coeff(k)),
            _ => (eq.u.coeff(k), eq.v.coeff(k), eq.w.coeff(k)),
        }
    }
}

/// Whether `point` is a regular singularity: `M = M'' <= M'` at zero,
/// `N = N'' >= N'` at infinity. A zero `v` imposes no condition.
pub fn classify(eq: &QDiffEquation, point: BasePoint) -> bool {
    match point {
        BasePoint::Zero => {
            let m = eq.u.low_degree();
            m.is_some() && m == eq.w.low_degree() && eq.v.low_degree().is_none_or(|mv| m.unwrap() <= mv)
        }
        BasePoint::Infinity => {
            let n = eq.u.high_degree();
            n.is_some() && n == eq.w.high_degree() && eq.v.high_degree().is_none_or(|nv| n.unwrap() >= nv)
        }
    }
}

/// Roots `tau` of `a tau^2 + b tau + c = 0`, larger-magnitude root first.
fn real_quadratic_roots(a: f64, b: f64, c: f64) -> Option<(f64, f64)> {
    let mut disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        if -disc <= 1e-12 * (b * b + (4.0 * a * c).abs()) {
            disc = 0.0;
        } else {
            return None;
        }
    }
    let sq = disc.sqrt();
    let big = -0.5 * (b + if b >= 0.0 { sq } else { -sq });
    if big == 0.0 {
        return None;
    }
    Some((big / a, c / big))
}

/// Characteristic exponents at a regular singularity.
pub fn exponents(eq: &QDiffEquation, point: BasePoint, tol: &Tolerances) -> Result<ExponentPair> {
    if !classify(eq, point) {
        return Err(Error::IrregularPoint(point.name()));
    }
    let (a, b, c) = Chart::new(eq, point).quadratic(eq);
    let (r1, r2) = real_quadratic_roots(a, b, c).ok_or_else(|| Error::NonRealExponent {
        point: point.name(),
        root: format!("complex pair for {a} tau^2 + {b} tau + {c}"),
    })?;
    let ln_q = eq.q.ln();
    let mut lambdas = [0.0; 2];
    for (slot, r) in lambdas.iter_mut().zip([r1, r2]) {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::NonRealExponent {
                point: point.name(),
                root: r.to_string(),
            });
        }
        *slot = r.ln() / ln_q;
    }
    lambdas.sort_by(f64::total_cmp);
    let difference = lambdas[1] - lambdas[0];
    let resonant = matches!(tol.as_integer(difference), Some(n) if n >= 1);
    Ok(ExponentPair {
        lambda1: lambdas[0],
        lambda2: lambdas[1],
        difference,
        resonant,
    })
}

/// Residual of the characteristic equation at `lambda`, relative to the
/// magnitude of its terms.
pub fn characteristic_residual(eq: &QDiffEquation, point: BasePoint, lambda: f64) -> f64 {
    let (value, scale) = Chart::new(eq, point).factor(eq, lambda, 0);
    if scale == 0.0 {
        0.0
    } else {
        value.abs() / scale
    }
}

/// Frobenius-type series with `order + 1` coefficients.
///
/// At a resonance whose consistency sum vanishes the free coefficient is set
/// to zero; otherwise the series is truncated just before the resonance and
/// marked [`SeriesStatus::LogarithmicNeeded`].
pub fn frobenius_series(
    eq: &QDiffEquation,
    point: BasePoint,
    lambda: f64,
    order: usize,
    tol: &Tolerances,
) -> Result<LocalExpansion> {
    if !classify(eq, point) {
        return Err(Error::IrregularPoint(point.name()));
    }
    let residual = characteristic_residual(eq, point, lambda);
    if residual > tol.exponent_match {
        return Err(Error::ExponentMismatch { lambda, residual });
    }
    let chart = Chart::new(eq, point);

    // Partner exponent from the product of the characteristic roots.
    let (a, _, c) = chart.quadratic(eq);
    let resonance_at = if c / a > 0.0 {
        let partner = (c / a).ln() / eq.q.ln() - lambda;
        match tol.as_integer(partner - lambda) {
            Some(n) if n >= 1 && (n as usize) <= order => Some(n as usize),
            _ => None,
        }
    } else {
        None
    };

    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(1.0);
    let mut status = SeriesStatus::Generic;
    let mut resonance = None;
    for n in 1..=order {
        let (mut sum, mut scale) = (0.0, 0.0);
        for (l, &cl) in coeffs.iter().enumerate() {
            let (f, m) = chart.factor(eq, lambda + l as f64, n - l);
            sum += f * cl;
            scale += m * cl.abs();
        }
        if resonance_at == Some(n) {
            let passed = sum.abs() <= tol.vanish * scale;
            resonance = Some(ResonanceCheck {
                index: n,
                sum,
                scale,
                passed,
            });
            if passed {
                status = SeriesStatus::ApparentResonance;
                coeffs.push(0.0);
                continue;
            }
            status = SeriesStatus::LogarithmicNeeded;
            break;
        }
        let (lead, _) = chart.factor(eq, lambda + n as f64, 0);
        coeffs.push(-sum / lead);
    }
    let order = coeffs.len() - 1;
    Ok(LocalExpansion {
        point,
        lambda,
        coeffs,
        order,
        status,
        resonance,
    })
}

/// Evaluates the consistency sum at the resonance of the smaller exponent.
/// `None` when the exponent difference is not a positive integer.
pub fn apparency_check(eq: &QDiffEquation, point: BasePoint, tol: &Tolerances) -> Result<Option<ResonanceCheck>> {
    let pair = exponents(eq, point, tol)?;
    let Some(n) = pair.resonance_index(tol) else {
        return Ok(None);
    };
    let series = frobenius_series(eq, point, pair.lambda1, n, tol)?;
    Ok(series.resonance)
}

/// `Some(true)` if the resonant singularity is apparent (non-logarithmic),
/// `Some(false)` if logarithmic, `None` if not resonant.
pub fn apparency(eq: &QDiffEquation, point: BasePoint, tol: &Tolerances) -> Result<Option<bool>> {
    Ok(apparency_check(eq, point, tol)?.map(|r| r.passed))
}

pub fn analyze(eq: &QDiffEquation, point: BasePoint, tol: &Tolerances) -> Result<SingularityReport> {
    if !classify(eq, point) {
        return Ok(SingularityReport {
            point,
            is_regular: false,
            exponents: None,
            apparent: None,
        });
    }
    Ok(SingularityReport {
        point,
        is_regular: true,
        exponents: Some(exponents(eq, point, tol)?),
        apparent: apparency(eq, point, tol)?,
    })
}

/// Order-by-order residual of a truncated expansion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualProfile {
    /// `|r_n|` for orders `n = 0, 1, ...` counted from the characteristic order.
    pub absolute: Vec<f64>,
    /// Sum of magnitudes of the contributions to each order.
    pub scale: Vec<f64>,
}

impl ResidualProfile {
    pub fn relative(&self, n: usize) -> f64 {
        match (self.absolute.get(n), self.scale.get(n)) {
            (Some(&r), Some(&s)) if s > 0.0 => r / s,
            _ => 0.0,
        }
    }

    /// Largest relative residual over orders `0..=n`.
    pub fn max_relative_through(&self, n: usize) -> f64 {
        (0..=n.min(self.absolute.len().saturating_sub(1)))
            .map(|k| self.relative(k))
            .fold(0.0, f64::max)
    }
}

/// Substitutes the truncated expansion into the equation by direct Laurent
/// multiplication.
pub fn residual_profile(eq: &QDiffEquation, exp: &LocalExpansion) -> ResidualProfile {
    let (offset, g) = exp.as_laurent();
    let (r, scale) = apply_with_scale(eq, offset, &g);
    let degrees: Vec<i64> = match exp.point {
        BasePoint::Zero => {
            let lo = eq.u.low_degree().unwrap_or(0);
            let hi = r.high_degree().unwrap_or(lo).max(scale.high_degree().unwrap_or(lo));
            (lo..=hi).collect()
        }
        BasePoint::Infinity => {
            let hi = eq.u.high_degree().unwrap_or(0);
            let lo = r.low_degree().unwrap_or(hi).min(scale.low_degree().unwrap_or(hi));
            (lo..=hi).rev().collect()
        }
    };
    ResidualProfile {
        absolute: degrees.iter().map(|&k| r.coeff(k).abs()).collect(),
        scale: degrees.iter().map(|&k| scale.coeff(k)).collect(),
    }
}
