//! The q-hypergeometric special case of the q-Heun equation.

use serde::{Deserialize, Serialize};

use super::{build_equation, exponent_formulas, gauge_transform, QDiffEquation};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::params::{qpow, Family, ModelParams};
use crate::tolerance::Tolerances;

/// `(x; q)_n = prod_{i<n} (1 - x q^i)`.
pub fn q_pochhammer(x: f64, q: f64, n: usize) -> f64 {
    let mut acc = 1.0;
    let mut qi = 1.0;
    for _ in 0..n {
        acc *= 1.0 - x * qi;
        qi *= q;
    }
    acc
}

/// Truncated `2phi1(a, b; c; x)` with `terms` coefficients (degrees
/// `0..terms`).
pub fn q_hypergeometric_series(a: f64, b: f64, c: f64, q: f64, terms: usize) -> Result<LaurentPoly> {
    let mut out = LaurentPoly::zero();
    let mut coeff = 1.0;
    let mut qn = 1.0;
    for n in 0..terms {
        out.set(n as i64, coeff);
        let den = (1.0 - q * qn) * (1.0 - c * qn);
        let den_scale = (1.0 + (q * qn).abs()) * (1.0 + (c * qn).abs());
        if n + 1 < terms && den.abs() <= 1e-10 * den_scale {
            return Err(Error::PochhammerPole { index: n });
        }
        coeff *= (1.0 - a * qn) * (1.0 - b * qn) / den;
        qn *= q;
    }
    Ok(out)
}

/// Result of dividing out the common linear factor of the q-Heun equation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QHypergeometricReduction {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// The common zero `q^(h2+1/2) t2` of `u`, `v`, `w`.
    pub common_root: f64,
    /// Division remainders of `u`, `v`, `w`, each relative to the largest
    /// coefficient of the polynomial divided.
    pub remainders: [f64; 3],
    /// First-degree equation left after the division.
    pub reduced: QDiffEquation,
    /// Gauge exponent: solutions of `reduced` are `x^nu f(x / kappa)`.
    pub nu: f64,
    pub kappa: f64,
    /// `(x - q) f(x/q) - ((a+b)x - q - c) f(x) + (a b x - c) f(qx) = 0`.
    pub equation: QDiffEquation,
}

/// Reduces an A4 equation with `l2 = h2 + 1` and the matching `E` to the
/// standard q-hypergeometric equation.
pub fn reduce_to_q_hypergeometric(params: &ModelParams, tol: &Tolerances) -> Result<QHypergeometricReduction> {
    if params.family != Family::A4 {
        return Err(Error::InvalidParams(
            "q-hypergeometric reduction applies to family A4 only".into(),
        ));
    }
    let eq = build_equation(params)?;
    let q = params.q;
    let root = qpow(q, params.h[1] + 0.5) * params.t[1];

    let mut parts = Vec::with_capacity(3);
    let mut remainders = [0.0; 3];
    for (i, (name, poly)) in [("u", &eq.u), ("v", &eq.v), ("w", &eq.w)].into_iter().enumerate() {
        let (quot, rem) = poly.div_linear(root);
        remainders[i] = rem.abs() / poly.max_abs().max(f64::MIN_POSITIVE);
        if remainders[i] > tol.vanish {
            return Err(Error::NotReducible(format!(
                "{name}(x) is not divisible by (x - {root}): relative remainder {:e}",
                remainders[i]
            )));
        }
        parts.push(quot);
    }
    let w = parts.pop().expect("three quotients");
    let v = parts.pop().expect("three quotients");
    let u = parts.pop().expect("three quotients");
    let reduced = QDiffEquation {
        u,
        v,
        w,
        q,
        normalization: 0,
    };

    // The divided factor is a nonzero constant at x = 0, so the exponents
    // there are those of the full equation.
    let nu = exponent_formulas(params).zero[0];
    let kappa = qpow(q, params.h[0] - 0.5) * params.t[0];
    let scaled = gauge_transform(&reduced, nu).dilate(kappa);
    let equation = scaled.scale(1.0 / scaled.u.coeff(1));

    let (a1, a2) = (params.alpha1, params.alpha2);
    Ok(QHypergeometricReduction {
        a: qpow(q, nu + a1),
        b: qpow(q, nu + a2),
        c: qpow(q, 2.0 * nu + a1 + a2 + params.l[0] - params.h[0]),
        common_root: root,
        remainders,
        reduced,
        nu,
        kappa,
        equation,
    })
}

/// Accessory value for which the A4 equation with `l2 = h2 + 1` factorizes.
pub fn reducible_energy(params: &ModelParams) -> f64 {
    let q = params.q;
    let (h, l, t) = (&params.h, &params.l, &params.t);
    let (a1, a2) = (params.alpha1, params.alpha2);
    -(qpow(q, a1) + qpow(q, a2)) * qpow(q, h[1] + 0.5) * t[1]
        - qpow(q, (h[0] - h[1] + l[0] + l[1] + a1 + a2 - 1.0) / 2.0)
            * (qpow(q, params.beta / 2.0) + qpow(q, -params.beta / 2.0))
            * t[0]
}
