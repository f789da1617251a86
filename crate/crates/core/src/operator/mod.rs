//! The degenerate Ruijsenaars-van Diejen operators as three-term
//! q-difference equations `u(x) g(x/q) + v(x) g(x) + w(x) g(qx) = 0`.

mod dcoeff;
mod hypergeometric;

pub use dcoeff::{d_coefficient, d_coefficients};
pub use hypergeometric::{
    q_hypergeometric_series, q_pochhammer, reduce_to_q_hypergeometric, reducible_energy,
    QHypergeometricReduction,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::params::{qpow, Family, ModelParams};

/// `u(x) g(x/q) + v(x) g(x) + w(x) g(qx) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QDiffEquation {
    pub u: LaurentPoly,
    pub v: LaurentPoly,
    pub w: LaurentPoly,
    pub q: f64,
    /// Power of `x` by which `(A - E)` was multiplied to obtain polynomial
    /// coefficients; zero for equations not produced by [`build_equation`].
    pub normalization: i64,
}

impl QDiffEquation {
    pub fn new(u: LaurentPoly, v: LaurentPoly, w: LaurentPoly, q: f64) -> Result<Self> {
        if !q.is_finite() || q <= 0.0 || q == 1.0 {
            return Err(Error::InvalidParams("q > 0 and q ≠ 1 required".into()));
        }
        if u.is_zero() || w.is_zero() {
            return Err(Error::InvalidParams(
                "u and w must be nonzero for a second-order equation".into(),
            ));
        }
        Ok(QDiffEquation {
            u,
            v,
            w,
            q,
            normalization: 0,
        })
    }

    /// Substitutes `x -> s x` in all three coefficients.
    pub fn dilate(&self, s: f64) -> QDiffEquation {
        QDiffEquation {
            u: self.u.dilate(s),
            v: self.v.dilate(s),
            w: self.w.dilate(s),
            ..self.clone()
        }
    }

    /// Multiplies the whole equation by a constant.
    pub fn scale(&self, s: f64) -> QDiffEquation {
        QDiffEquation {
            u: self.u.scale(s),
            v: self.v.scale(s),
            w: self.w.scale(s),
            ..self.clone()
        }
    }

    /// Largest coefficient magnitude among `u`, `v`, `w`.
    pub fn max_abs(&self) -> f64 {
        self.u.max_abs().max(self.v.max_abs()).max(self.w.max_abs())
    }
}

/// Closed-form coefficients of `v(x)` other than the accessory slot, as
/// `(degree, value)` pairs in the polynomial form.
pub fn v_coefficients(params: &ModelParams) -> Vec<(i64, f64)> {
    let q = params.q;
    let half = qpow(q, 0.5) + qpow(q, -0.5);
    let hl_sum = params.sum_h() + params.sum_l();
    let t = &params.t;
    let linear: f64 = params
        .h
        .iter()
        .zip(&params.l)
        .zip(t)
        .map(|((&h, &l), &ti)| (qpow(q, h) + qpow(q, l)) * ti)
        .sum();
    match params.family {
        Family::A4 => {
            let (a1, a2) = (params.alpha1, params.alpha2);
            let b2 = -(qpow(q, a1) + qpow(q, a2));
            let b0 = -qpow(q, (hl_sum + a1 + a2) / 2.0)
                * (qpow(q, params.beta / 2.0) + qpow(q, -params.beta / 2.0))
                * params.prod_t();
            vec![(2, b2), (0, b0)]
        }
        Family::A3 => {
            let b0 = qpow(q, hl_sum / 2.0)
                * (qpow(q, params.beta / 2.0) + qpow(q, -params.beta / 2.0))
                * params.prod_t();
            vec![(3, -half), (2, linear), (0, b0)]
        }
        Family::A2 => {
            let pref = qpow(q, hl_sum / 2.0) * params.prod_t();
            let recip: f64 = params
                .h
                .iter()
                .zip(&params.l)
                .zip(t)
                .map(|((&h, &l), &ti)| (qpow(q, -h) + qpow(q, -l)) / ti)
                .sum();
            vec![(4, -half), (3, linear), (1, pref * recip), (0, -pref * half)]
        }
    }
}

/// Polynomial form `x^k (A<k> - E) g = 0` of the eigenvalue equation.
///
/// `u` and `w` are the products of the linear factors `(x - q^(h+1/2) t)`
/// and `(x - q^(l-1/2) t)` (the latter times `q^(alpha1+alpha2)` for A4),
/// and the accessory slot of `v` holds `-E`.
pub fn build_equation(params: &ModelParams) -> Result<QDiffEquation> {
    params.validate()?;
    let q = params.q;
    let u = LaurentPoly::from_roots(&params.upper_roots());
    let mut w = LaurentPoly::from_roots(&params.lower_roots());
    if params.family == Family::A4 {
        w = w.scale(qpow(q, params.alpha1 + params.alpha2));
    }
    let mut v = LaurentPoly::from_pairs(v_coefficients(params));
    v.add_to(params.family.accessory_degree(), -params.energy);
    Ok(QDiffEquation {
        u,
        v,
        w,
        q,
        normalization: params.family.normalization(),
    })
}

/// Exponents at `x = 0` and `x = inf` as closed forms in the parameters.
///
/// Each pair is sorted ascending. At infinity the convention is
/// `g ~ (1/x)^lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentFormulas {
    pub zero: [f64; 2],
    pub infinity: [f64; 2],
}

pub fn exponent_formulas(params: &ModelParams) -> ExponentFormulas {
    let diff = params.sum_h() - params.sum_l();
    let sorted = |a: f64, b: f64| if a <= b { [a, b] } else { [b, a] };
    match params.family {
        Family::A4 => {
            let base = (diff - params.alpha1 - params.alpha2 + 2.0) / 2.0;
            ExponentFormulas {
                zero: sorted(base - params.beta / 2.0, base + params.beta / 2.0),
                infinity: sorted(params.alpha1, params.alpha2),
            }
        }
        Family::A3 => {
            let base = (diff + 3.0) / 2.0;
            ExponentFormulas {
                zero: sorted(base - params.beta / 2.0, base + params.beta / 2.0),
                infinity: [-0.5, 0.5],
            }
        }
        Family::A2 => {
            let l1 = (diff + 3.0) / 2.0;
            ExponentFormulas {
                zero: [l1, l1 + 1.0],
                infinity: [-0.5, 0.5],
            }
        }
    }
}

/// `u(x) g(x/q) + v(x) g(x) + w(x) g(qx)` for a Laurent polynomial `g`.
pub fn apply_equation(eq: &QDiffEquation, g: &LaurentPoly) -> LaurentPoly {
    apply_equation_offset(eq, 0.0, g)
}

/// Applies the equation to `x^offset g(x)`; the result carries the same
/// offset, i.e. the returned `r` stands for `x^offset r(x)`.
pub fn apply_equation_offset(eq: &QDiffEquation, offset: f64, g: &LaurentPoly) -> LaurentPoly {
    apply_with_scale(eq, offset, g).0
}

/// Like [`apply_equation_offset`], also returning for every degree the sum
/// of absolute values of the contributions to that degree.
pub fn apply_with_scale(
    eq: &QDiffEquation,
    offset: f64,
    g: &LaurentPoly,
) -> (LaurentPoly, LaurentPoly) {
    let q = eq.q;
    let back = g.dilate(1.0 / q).scale(qpow(q, -offset));
    let fwd = g.dilate(q).scale(qpow(q, offset));
    let value = &(&(&eq.u * &back) + &(&eq.v * g)) + &(&eq.w * &fwd);
    let scale = &(&(&eq.u.abs() * &back.abs()) + &(&eq.v.abs() * &g.abs()))
        + &(&eq.w.abs() * &fwd.abs());
    (value, scale)
}

/// Equation satisfied by `h` where `g = x^nu h`.
pub fn gauge_transform(eq: &QDiffEquation, nu: f64) -> QDiffEquation {
    QDiffEquation {
        u: eq.u.scale(qpow(eq.q, -nu)),
        v: eq.v.clone(),
        w: eq.w.scale(qpow(eq.q, nu)),
        ..eq.clone()
    }
}
