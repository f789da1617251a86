//! Local analysis of the limit equation: indicial equations, Riemann
//! scheme and Frobenius series about finite points and infinity.

use serde::{Deserialize, Serialize};

use super::{FuchsianODE, LimitFamily};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum OdePoint {
    /// `x = x0`; a singular point must be passed bit-exactly.
    Finite(f64),
    Infinity,
}

impl std::fmt::Display for OdePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OdePoint::Finite(x) => write!(f, "x={x}"),
            OdePoint::Infinity => f.write_str("x=inf"),
        }
    }
}

/// The equation in a local variable `y` (`x = x0 + y`, or `x = 1/y`), as
/// polynomials `(P2, P1, P0)` and the order `m` of `P2` at `y = 0`.
struct LocalForm {
    p2: LaurentPoly,
    p1: LaurentPoly,
    p0: LaurentPoly,
    m: i64,
}

impl LocalForm {
    fn new(ode: &FuchsianODE, point: OdePoint) -> Result<LocalForm> {
        let (p2, p1, p0) = match point {
            OdePoint::Finite(x0) => {
                // Built from the roots so that a zero at x0 is exact.
                let mut roots = vec![0.0, 0.0];
                roots.extend(&ode.t);
                let shifted: Vec<f64> = roots.iter().map(|r| r - x0).collect();
                (
                    LaurentPoly::from_roots(&shifted),
                    ode.p1.taylor_shift(x0),
                    ode.p0.taylor_shift(x0),
                )
            }
            OdePoint::Infinity => {
                // g(x) = G(1/x): g' = -y^2 G', g'' = y^4 G'' + 2 y^3 G'.
                let a = ode.p2.invert();
                let b = ode.p1.invert();
                let c = ode.p0.invert();
                let p2 = a.shift(4);
                let p1 = &a.shift(3).scale(2.0) - &b.shift(2);
                let low = [&p2, &p1, &c]
                    .iter()
                    .filter_map(|p| p.low_degree())
                    .min()
                    .unwrap_or(0);
                (p2.shift(-low), p1.shift(-low), c.shift(-low))
            }
        };
        let m = p2.low_degree().ok_or_else(|| Error::InvalidParams("vanishing leading coefficient".into()))?;
        let regular = p1.low_degree().is_none_or(|d| d >= m - 1) && p0.low_degree().is_none_or(|d| d >= m - 2);
        if !regular {
            return Err(Error::IrregularPoint("limit equation point"));
        }
        Ok(LocalForm { p2, p1, p0, m })
    }

    /// Coefficients of `rho (rho - 1) P2_{m+j} + rho P1_{m-1+j} + P0_{m-2+j}`.
    fn band(&self, j: i64) -> (f64, f64, f64) {
        (
            self.p2.coeff(self.m + j),
            self.p1.coeff(self.m - 1 + j),
            self.p0.coeff(self.m - 2 + j),
        )
    }

    fn term(&self, j: i64, rho: f64) -> (f64, f64) {
        let (a, b, e) = self.band(j);
        let (ta, tb) = (a * rho * (rho - 1.0), b * rho);
        (ta + tb + e, ta.abs() + tb.abs() + e.abs())
    }
}

/// Indicial polynomial `a rho^2 + (b - a) rho + e` as `[a, b - a, e]`.
pub fn indicial_polynomial(ode: &FuchsianODE, point: OdePoint) -> Result<[f64; 3]> {
    let f = LocalForm::new(ode, point)?;
    let (a, b, e) = f.band(0);
    Ok([a, b - a, e])
}

/// Roots of the indicial polynomial, ascending.
pub fn indicial_exponents(ode: &FuchsianODE, point: OdePoint) -> Result<[f64; 2]> {
    let [a, b, c] = indicial_polynomial(ode, point)?;
    let disc = b * b - 4.0 * a * c;
    let disc = if disc < 0.0 && -disc <= 1e-12 * (b * b).max((4.0 * a * c).abs()) { 0.0 } else { disc };
    if disc < 0.0 {
        return Err(Error::NonRealExponent {
            point: "limit equation",
            root: format!("complex indicial roots at {point}"),
        });
    }
    let sq = disc.sqrt();
    let big = -0.5 * (b + if b >= 0.0 { sq } else { -sq });
    let (r1, r2) = if big == 0.0 { (0.0, 0.0) } else { (big / a, c / big) };
    Ok(if r1 <= r2 { [r1, r2] } else { [r2, r1] })
}

/// One column of the Riemann scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeColumn {
    pub point: OdePoint,
    pub exponents: [f64; 2],
}

/// Riemann scheme predicted from the parameters, exponents ascending.
pub fn riemann_scheme(ode: &FuchsianODE) -> Vec<SchemeColumn> {
    let sorted = |a: f64, b: f64| if a <= b { [a, b] } else { [b, a] };
    let lt = ode.l_tilde;
    let zero = match ode.family {
        LimitFamily::FromA3 => sorted(lt + 0.5 - ode.beta / 2.0, lt + 0.5 + ode.beta / 2.0),
        LimitFamily::FromA2 => [lt, lt + 1.0],
    };
    let mut cols = vec![SchemeColumn {
        point: OdePoint::Finite(0.0),
        exponents: zero,
    }];
    for i in 0..ode.t.len() {
        cols.push(SchemeColumn {
            point: OdePoint::Finite(ode.t[i]),
            exponents: sorted(0.0, ode.l[i] - ode.h[i]),
        });
    }
    cols.push(SchemeColumn {
        point: OdePoint::Infinity,
        exponents: [-0.5, 0.5],
    });
    cols
}

/// Frobenius series `(x - x0)^rho sum c_n (x - x0)^n` (or
/// `x^(-rho) sum c_n x^(-n)` at infinity) with `c_0 = 1`.
///
/// At a resonance the consistency sum must vanish to `1e-10` relative; the
/// free coefficient is then set to zero.
pub fn ode_frobenius(ode: &FuchsianODE, point: OdePoint, rho: f64, order: usize) -> Result<Vec<f64>> {
    let f = LocalForm::new(ode, point)?;
    let (i0, s0) = f.term(0, rho);
    if i0.abs() > 1e-8 * s0.max(f64::MIN_POSITIVE) {
        return Err(Error::ExponentMismatch {
            lambda: rho,
            residual: i0.abs() / s0,
        });
    }
    let [a, b, _] = indicial_polynomial(ode, point)?;
    // partner root from the root sum -b/a
    let partner = -b / a - rho;
    let gap = partner - rho;
    let resonance = {
        let r = gap.round();
        if (gap - r).abs() < 1e-8 && r >= 1.0 { Some(r as usize) } else { None }
    };
    let mut c = vec![1.0];
    for n in 1..=order {
        let (mut sum, mut scale) = (0.0, 0.0);
        for j in 1..=n {
            let (v, s) = f.term(j as i64, rho + (n - j) as f64);
            sum += v * c[n - j];
            scale += s * c[n - j].abs();
        }
        if resonance == Some(n) {
            if sum.abs() > 1e-10 * scale {
                return Err(Error::ResonantLogarithmic { index: n, sum });
            }
            c.push(0.0);
            continue;
        }
        let (lead, _) = f.term(0, rho + n as f64);
        c.push(-sum / lead);
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::super::{limit_ode, tests::setup3, LimitFamily, LimitSetup};
    use super::*;

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

    /// Evaluates `p2 g'' + p1 g' + p0 g` at `x0 + y` directly from the
    /// original coefficients, with the common factor `y^rho` removed, and
    /// returns it relative to the size of the three terms.
    fn pointwise_residual(ode: &FuchsianODE, x0: f64, rho: f64, c: &[f64], y: f64) -> f64 {
        let (mut s, mut s1, mut s2) = (0.0, 0.0, 0.0);
        for (n, &cn) in c.iter().enumerate() {
            let n = n as f64;
            s += cn * y.powf(n);
            if n >= 1.0 {
                s1 += cn * n * y.powf(n - 1.0);
            }
            if n >= 2.0 {
                s2 += cn * n * (n - 1.0) * y.powf(n - 2.0);
            }
        }
        let g = s;
        let g1 = rho * s / y + s1;
        let g2 = rho * (rho - 1.0) * s / (y * y) + 2.0 * rho * s1 / y + s2;
        let x = x0 + y;
        let terms = [ode.p2.eval(x) * g2, ode.p1.eval(x) * g1, ode.p0.eval(x) * g];
        terms.iter().sum::<f64>().abs() / terms.iter().map(|v| v.abs()).sum::<f64>()
    }

    fn series_residual(ode: &FuchsianODE, x0: f64, rho: f64, c: &[f64]) -> f64 {
        pointwise_residual(ode, x0, rho, c, 0.02)
    }

    #[test]
    fn schemes_match_indicial_roots() {
        for s in [setup3(), setup2()] {
            let ode = limit_ode(&s, 1.7).unwrap();
            for col in riemann_scheme(&ode) {
                let got = indicial_exponents(&ode, col.point).unwrap();
                for k in 0..2 {
                    assert!((got[k] - col.exponents[k]).abs() < 1e-10, "{} {:?} vs {:?}", col.point, got, col.exponents);
                }
            }
        }
    }

    #[test]
    fn ordinary_point_has_taylor_solutions() {
        let ode = limit_ode(&setup3(), 0.2).unwrap();
        assert_eq!(indicial_exponents(&ode, OdePoint::Finite(0.5)).unwrap(), [0.0, 1.0]);
        for rho in [0.0, 1.0] {
            let c = ode_frobenius(&ode, OdePoint::Finite(0.5), rho, 12).unwrap();
            assert!(series_residual(&ode, 0.5, rho, &c) < 1e-12);
        }
    }

    #[test]
    fn infinity_is_apparent() {
        for s in [setup3(), setup2()] {
            let ode = limit_ode(&s, -0.9).unwrap();
            let c = ode_frobenius(&ode, OdePoint::Infinity, -0.5, 10).unwrap();
            assert_eq!(c[1], 0.0);
        }
    }

    #[test]
    fn zero_is_apparent_for_second_variant() {
        let ode = limit_ode(&setup2(), 2.3).unwrap();
        let lt = ode.l_tilde;
        let c = ode_frobenius(&ode, OdePoint::Finite(0.0), lt, 10).unwrap();
        assert_eq!(c[1], 0.0);
        assert!(series_residual(&ode, 0.0, lt, &c) < 1e-12);
    }

    #[test]
    fn logarithmic_resonance_reported() {
        let mut ode = limit_ode(&setup2(), 2.3).unwrap();
        ode.p0.add_to(1, 0.3);
        let err = ode_frobenius(&ode, OdePoint::Finite(0.0), ode.l_tilde, 4).unwrap_err();
        assert!(matches!(err, Error::ResonantLogarithmic { index: 1, .. }));
    }

    #[test]
    fn singular_point_series() {
        let ode = limit_ode(&setup3(), 0.2).unwrap();
        let t1 = ode.t[0];
        let rho = ode.l[0] - ode.h[0];
        let c = ode_frobenius(&ode, OdePoint::Finite(t1), rho, 10).unwrap();
        assert!(series_residual(&ode, t1, rho, &c) < 1e-12);
        assert!(matches!(
            ode_frobenius(&ode, OdePoint::Finite(t1), 0.37, 3),
            Err(Error::ExponentMismatch { .. })
        ));
    }
}
