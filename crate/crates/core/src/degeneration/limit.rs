//! Numerical check that q-series solutions tend to the limit equation's
//! series solutions as `q -> 1`.

use serde::{Deserialize, Serialize};

use super::{limit_ode, ode_frobenius, LimitFamily, LimitSetup, OdePoint};
use crate::error::{Error, Result};
use crate::local::{frobenius_series, BasePoint};
use crate::operator::{build_equation, exponent_formulas};
use crate::tolerance::Tolerances;

/// `E = 2 e2(t) + eps E1 + eps^2 E~` with
/// `E1 = sum_{i<j} (h_i + h_j + l_i + l_j) t_i t_j`.
pub fn limit_energy(setup: &LimitSetup, eps: f64) -> f64 {
    let (h, l, t) = (&setup.h, &setup.l, &setup.t);
    let (mut e2, mut e1) = (0.0, 0.0);
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            e2 += t[i] * t[j];
            e1 += (h[i] + h[j] + l[i] + l[j]) * t[i] * t[j];
        }
    }
    2.0 * e2 + eps * e1 + eps * eps * setup.e_tilde
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonRow {
    pub epsilon: f64,
    pub q: f64,
    pub energy: f64,
    /// `B~ - E~` that matches the first accessory-dependent coefficient at
    /// this `eps`.
    pub fitted_constant: f64,
    /// `|c_n(q-series) - c_n(limit series)|` for `n = 1..=order`, with the
    /// limit series taken at the extrapolated constant.
    pub differences: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitReport {
    pub family: LimitFamily,
    /// Exponent at `x = 0` used for both series (the larger one).
    pub exponent: f64,
    /// Distance from `exponent` to the nearest indicial root of the limit
    /// equation at `x = 0`.
    pub exponent_gap: f64,
    /// Index of the first coefficient that depends on `B~`.
    pub accessory_index: usize,
    pub rows: Vec<EpsilonRow>,
    /// `B~ - E~` extrapolated to `eps = 0` through all rows.
    pub constant: f64,
    /// `max |fitted_constant - constant|` over the rows.
    pub constant_spread: f64,
    /// `max |fitted_constant - constant| / eps`; bounded when the constant
    /// converges at first order.
    pub constant_drift: f64,
    /// Least-squares slope of `log |difference|` against `log eps` per
    /// coefficient `n = 1..=order`; `None` if a difference vanished.
    pub slopes: Vec<Option<f64>>,
}

/// Value at `0` of the interpolating polynomial through `(xs, ys)`.
fn extrapolate_to_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..xs.len() {
        let mut w = 1.0;
        for j in 0..xs.len() {
            if i != j {
                w *= -xs[j] / (xs[i] - xs[j]);
            }
        }
        acc += w * ys[i];
    }
    acc
}

fn loglog_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() < 2 || ys.iter().any(|&y| !(y > 0.0 && y.is_finite())) {
        return None;
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    Some(sxy / sxx)
}

/// Compares the q-series at `x = 0` for each `eps` with the series of the
/// limit equation, fitting the additive constant in `B~ = E~ + const`.
pub fn verify_limit(setup: &LimitSetup, epsilons: &[f64], order: usize, tol: &Tolerances) -> Result<LimitReport> {
    setup.validate()?;
    if epsilons.is_empty() {
        return Err(Error::InvalidParams("at least one epsilon required".into()));
    }
    if epsilons.iter().any(|&e| !(e > 0.0 && e <= 0.1)) {
        return Err(Error::InvalidParams("epsilon values must lie in (0, 0.1]".into()));
    }
    if epsilons.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParams("epsilon values must be strictly descending".into()));
    }
    let accessory_index = match setup.family {
        LimitFamily::FromA3 => 1,
        LimitFamily::FromA2 => 2,
    };
    if order < accessory_index {
        return Err(Error::InvalidParams(format!("order must be at least {accessory_index}")));
    }

    let exponent = exponent_formulas(&setup.q_params(epsilons[0])).zero[1];
    let probe = limit_ode(setup, setup.e_tilde)?;
    let roots = super::indicial_exponents(&probe, OdePoint::Finite(0.0))?;
    let exponent_gap = roots.iter().map(|r| (r - exponent).abs()).fold(f64::INFINITY, f64::min);

    // c_k of the limit series is affine in B~.
    let ode_coeffs = |b: f64| -> Result<Vec<f64>> {
        ode_frobenius(&limit_ode(setup, b)?, OdePoint::Finite(0.0), exponent, order)
    };
    let at0 = ode_coeffs(0.0)?[accessory_index];
    let slope = ode_coeffs(1.0)?[accessory_index] - at0;
    if slope == 0.0 {
        return Err(Error::InvalidParams("accessory coefficient does not enter the series".into()));
    }

    let mut q_series = Vec::with_capacity(epsilons.len());
    let mut fitted = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let params = setup.q_params(eps);
        let eq = build_equation(&params)?;
        let s = frobenius_series(&eq, BasePoint::Zero, exponent, order, tol)?;
        if s.coeffs.len() <= order {
            return Err(Error::ResonantLogarithmic {
                index: s.coeffs.len(),
                sum: s.resonance.map_or(f64::NAN, |r| r.sum),
            });
        }
        fitted.push((s.coeffs[accessory_index] - at0) / slope - setup.e_tilde);
        q_series.push((params, s.coeffs));
    }

    let constant = extrapolate_to_zero(epsilons, &fitted);
    let reference = ode_coeffs(setup.e_tilde + constant)?;
    let rows: Vec<EpsilonRow> = epsilons
        .iter()
        .zip(&fitted)
        .zip(&q_series)
        .map(|((&epsilon, &fitted_constant), (params, coeffs))| EpsilonRow {
            epsilon,
            q: params.q,
            energy: params.energy,
            fitted_constant,
            differences: (1..=order).map(|n| (coeffs[n] - reference[n]).abs()).collect(),
        })
        .collect();

    let constant_spread = fitted.iter().map(|c| (c - constant).abs()).fold(0.0, f64::max);
    let constant_drift = fitted
        .iter()
        .zip(epsilons)
        .map(|(c, e)| (c - constant).abs() / e)
        .fold(0.0, f64::max);
    let slopes = (0..order)
        .map(|k| {
            let ys: Vec<f64> = rows.iter().map(|r| r.differences[k]).collect();
            loglog_slope(epsilons, &ys)
        })
        .collect();

    Ok(LimitReport {
        family: setup.family,
        exponent,
        exponent_gap,
        accessory_index,
        rows,
        constant,
        constant_spread,
        constant_drift,
        slopes,
    })
}

#[cfg(test)]
mod tests {
    use super::super::tests::setup3;
    use super::*;

    /// `B~ - E~` from the second-order Taylor terms of the `u` and `w`
    /// coefficients at the accessory degree:
    /// `-sum_{i<j} t_i t_j [H (H + 1) / 2 + (L - 1)(L - 2) / 2]` with
    /// `H = h_i + h_j`, `L = l_i + l_j`.
    fn taylor_constant(s: &LimitSetup) -> f64 {
        let mut acc = 0.0;
        for i in 0..s.t.len() {
            for j in i + 1..s.t.len() {
                let hh = s.h[i] + s.h[j];
                let ll = s.l[i] + s.l[j];
                acc += s.t[i] * s.t[j] * (hh * (hh + 1.0) / 2.0 + (ll - 1.0) * (ll - 2.0) / 2.0);
            }
        }
        -acc
    }

    fn setup2() -> LimitSetup {
        LimitSetup {
            family: LimitFamily::FromA2,
            h: vec![0.3, -0.2, 0.15, 0.05],
            l: vec![0.1, 0.4, -0.3, 0.2],
            t: vec![1.2, -0.8, 2.1, 0.6],
            beta: 0.0,
            e_tilde: -0.4,
        }
    }

    #[test]
    fn energy_scaling() {
        let s = setup3();
        let e = limit_energy(&s, 0.0);
        let t = &s.t;
        assert!((e - 2.0 * (t[0] * t[1] + t[1] * t[2] + t[0] * t[2])).abs() < 1e-14);
    }

    #[test]
    fn first_order_convergence() {
        let eps: Vec<f64> = [-1.5f64, -2.0, -2.5].iter().map(|p| 10f64.powf(*p)).collect();
        for s in [setup3(), setup2()] {
            let r = verify_limit(&s, &eps, 5, &Tolerances::default()).unwrap();
            assert!(r.exponent_gap < 1e-12);
            for (n, slope) in r.slopes.iter().enumerate() {
                let slope = slope.expect("nonzero differences");
                assert!((slope - 1.0).abs() < 0.3, "{} c{}: slope {slope}", s.family, n + 1);
            }
        }
    }

    #[test]
    fn fitted_constant_matches_taylor_expansion() {
        for s in [setup3(), setup2()] {
            let r = verify_limit(&s, &[1e-2, 1e-3, 1e-4], 5, &Tolerances::default()).unwrap();
            let want = taylor_constant(&s);
            assert!((r.constant - want).abs() < 1e-5 * want.abs().max(1.0), "{} vs {want}", r.constant);
            assert!(r.constant_drift < 100.0);
        }
    }

    #[test]
    fn rejects_bad_epsilons() {
        let s = setup3();
        let tol = Tolerances::default();
        assert!(verify_limit(&s, &[], 5, &tol).is_err());
        assert!(verify_limit(&s, &[0.2], 5, &tol).is_err());
        assert!(verify_limit(&s, &[1e-3, 1e-2], 5, &tol).is_err());
    }
}
