//! Action of `A<k>` on a single power `x^mu`:
//! `A<k> x^mu = sum_s d_s(mu) x^(mu + s)`.

use crate::error::Result;
use crate::params::{qpow, Family, ModelParams};

/// All `(shift, d_shift(mu))` pairs for the family, highest shift first.
pub fn d_coefficients(params: &ModelParams, mu: f64) -> Result<Vec<(i64, f64)>> {
    params.validate()?;
    Ok(params
        .family
        .shifts()
        .iter()
        .map(|&s| (s, d_coefficient(params, s, mu)))
        .collect())
}

/// Single coefficient `d_shift(mu)`; zero for shifts outside the family's band.
pub fn d_coefficient(params: &ModelParams, shift: i64, mu: f64) -> f64 {
    match params.family {
        Family::A4 => d4(params, shift, mu),
        Family::A3 => d3(params, shift, mu),
        Family::A2 => d2(params, shift, mu),
    }
}

fn d4(p: &ModelParams, shift: i64, mu: f64) -> f64 {
    let q = p.q;
    let (a1, a2) = (p.alpha1, p.alpha2);
    let (h, l, t) = (&p.h, &p.l, &p.t);
    match shift {
        1 => qpow(q, a1 + a2) * qpow(q, mu) - (qpow(q, a1) + qpow(q, a2)) + qpow(q, -mu),
        0 => {
            -(qpow(q, h[0] + 0.5) * t[0] + qpow(q, h[1] + 0.5) * t[1]) * qpow(q, -mu)
                - (qpow(q, l[0] - 0.5) * t[0] + qpow(q, l[1] - 0.5) * t[1]) * qpow(q, a1 + a2 + mu)
        }
        -1 => {
            (qpow(q, h[0] + h[1] + 1.0) * qpow(q, -mu)
                - qpow(q, (h[0] + h[1] + l[0] + l[1] + a1 + a2) / 2.0)
                    * (qpow(q, p.beta / 2.0) + qpow(q, -p.beta / 2.0))
                + qpow(q, l[0] + l[1] + a1 + a2 - 1.0) * qpow(q, mu))
                * t[0]
                * t[1]
        }
        _ => 0.0,
    }
}

/// Shared `++`, `+` and `0` coefficients of A3 and A2 (they differ only in
/// how many `(h, l, t)` triples are summed).
fn upper_band(p: &ModelParams, shift: i64, mu: f64) -> f64 {
    let q = p.q;
    let n = p.family.arity();
    match shift {
        2 => qpow(q, -mu) + qpow(q, mu) - qpow(q, 0.5) - qpow(q, -0.5),
        1 => (0..n)
            .map(|i| {
                (qpow(q, p.h[i]) + qpow(q, p.l[i])
                    - qpow(q, p.h[i] + 0.5 - mu)
                    - qpow(q, p.l[i] - 0.5 + mu))
                    * p.t[i]
            })
            .sum(),
        0 => {
            let mut acc = 0.0;
            for i in 0..n {
                for j in i + 1..n {
                    acc += (qpow(q, p.h[i] + p.h[j] + 1.0 - mu) + qpow(q, p.l[i] + p.l[j] - 1.0 + mu))
                        * p.t[i]
                        * p.t[j];
                }
            }
            acc
        }
        _ => 0.0,
    }
}

fn d3(p: &ModelParams, shift: i64, mu: f64) -> f64 {
    let q = p.q;
    match shift {
        0..=2 => upper_band(p, shift, mu),
        -1 => {
            let (sh, sl) = (p.sum_h(), p.sum_l());
            (-qpow(q, sh + 1.5 - mu) - qpow(q, sl - 1.5 + mu)
                + qpow(q, (sl + sh) / 2.0) * (qpow(q, p.beta / 2.0) + qpow(q, -p.beta / 2.0)))
                * p.prod_t()
        }
        _ => 0.0,
    }
}

fn d2(p: &ModelParams, shift: i64, mu: f64) -> f64 {
    let q = p.q;
    let (sh, sl) = (p.sum_h(), p.sum_l());
    match shift {
        0..=2 => upper_band(p, shift, mu),
        -1 => {
            let mid = qpow(q, (sh + sl) / 2.0);
            let s: f64 = (0..4)
                .map(|i| {
                    (mid * (qpow(q, -p.h[i]) + qpow(q, -p.l[i]))
                        - qpow(q, sh + 1.5 - mu) * qpow(q, -p.h[i])
                        - qpow(q, sl - 1.5 + mu) * qpow(q, -p.l[i]))
                        / p.t[i]
                })
                .sum();
            p.prod_t() * s
        }
        -2 => {
            (qpow(q, sh + 2.0 - mu) + qpow(q, sl - 2.0 + mu)
                - qpow(q, (sl + sh) / 2.0) * (qpow(q, 0.5) + qpow(q, -0.5)))
                * p.prod_t()
        }
        _ => 0.0,
    }
}
