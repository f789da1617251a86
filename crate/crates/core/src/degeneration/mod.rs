//! The `q -> 1` limit of the variant equations.
//!
//! With `q = 1 + eps` and the accessory parameter scaled as
//! `E = 2 e2(t) + eps E1 + eps^2 E~`, the variant equations divided by
//! `eps^2` tend to second-order Fuchsian equations
//! `p2(x) g'' + p1(x) g' + p0(x) g = 0` with singularities at `0`, the `t_i`
//! and infinity. The accessory coefficient `B~` of the limit differs from
//! `E~` by an additive constant, which [`verify_limit`] recovers numerically.

mod heun;
mod limit;
mod ode;

pub use heun::{to_heun_form, HeunForm};
pub use limit::{limit_energy, verify_limit, EpsilonRow, LimitReport};
pub use ode::{indicial_exponents, indicial_polynomial, ode_frobenius, riemann_scheme, OdePoint, SchemeColumn};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::params::{Family, ModelParams};

/// Which variant equation the limit is taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LimitFamily {
    FromA3,
    FromA2,
}

impl LimitFamily {
    pub fn family(self) -> Family {
        match self {
            LimitFamily::FromA3 => Family::A3,
            LimitFamily::FromA2 => Family::A2,
        }
    }

    pub fn from_family(f: Family) -> Result<Self> {
        match f {
            Family::A3 => Ok(LimitFamily::FromA3),
            Family::A2 => Ok(LimitFamily::FromA2),
            Family::A4 => Err(Error::InvalidParams(
                "the q -> 1 limit is provided for families A3 and A2 only".into(),
            )),
        }
    }

    pub fn arity(self) -> usize {
        self.family().arity()
    }
}

impl fmt::Display for LimitFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LimitFamily::FromA3 => "fromA3",
            LimitFamily::FromA2 => "fromA2",
        })
    }
}

impl FromStr for LimitFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "froma3" | "a3" => Ok(LimitFamily::FromA3),
            "froma2" | "a2" => Ok(LimitFamily::FromA2),
            other => Err(Error::InvalidParams(format!(
                "unknown limit family '{other}' (expected fromA3 or fromA2)"
            ))),
        }
    }
}

/// Parameters of a limit study; `q` is not among them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitSetup {
    pub family: LimitFamily,
    pub h: Vec<f64>,
    pub l: Vec<f64>,
    pub t: Vec<f64>,
    /// Exponent difference at `x = 0` (fromA3 only).
    pub beta: f64,
    /// Rescaled accessory parameter `E~`.
    pub e_tilde: f64,
}

impl LimitSetup {
    pub fn validate(&self) -> Result<()> {
        let n = self.family.arity();
        for (name, v) in [("h", &self.h), ("l", &self.l), ("t", &self.t)] {
            if v.len() != n {
                return Err(Error::InvalidParams(format!(
                    "vector {name} must have length {n} for {}, got {}",
                    self.family,
                    v.len()
                )));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidParams(format!("vector {name} must be finite")));
            }
        }
        if !self.beta.is_finite() || !self.e_tilde.is_finite() {
            return Err(Error::InvalidParams("beta and E~ must be finite".into()));
        }
        for (i, &ti) in self.t.iter().enumerate() {
            if ti == 0.0 {
                return Err(Error::CoincidentSingularities(format!("t{} = 0 coincides with x = 0", i + 1)));
            }
            for (j, &tj) in self.t.iter().enumerate().skip(i + 1) {
                if ti == tj {
                    return Err(Error::CoincidentSingularities(format!("t{} = t{} = {ti}", i + 1, j + 1)));
                }
            }
        }
        Ok(())
    }

    /// `l~`: half the sum `h - l` over all triples plus `1` (fromA3) or
    /// `3/2` (fromA2).
    pub fn l_tilde(&self) -> f64 {
        let d: f64 = self.h.iter().sum::<f64>() - self.l.iter().sum::<f64>();
        match self.family {
            LimitFamily::FromA3 => (d + 2.0) / 2.0,
            LimitFamily::FromA2 => (d + 3.0) / 2.0,
        }
    }

    /// The q-difference parameters at `q = 1 + eps`.
    pub fn q_params(&self, eps: f64) -> ModelParams {
        let q = 1.0 + eps;
        ModelParams {
            family: self.family.family(),
            q,
            h: self.h.clone(),
            l: self.l.clone(),
            t: self.t.clone(),
            alpha1: 0.0,
            alpha2: 0.0,
            beta: if self.family == LimitFamily::FromA3 { self.beta } else { 0.0 },
            energy: limit_energy(self, eps),
        }
    }
}

/// `p2 g'' + p1 g' + p0 g = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuchsianODE {
    pub family: LimitFamily,
    pub t: Vec<f64>,
    pub h: Vec<f64>,
    pub l: Vec<f64>,
    pub beta: f64,
    pub l_tilde: f64,
    pub b_tilde: f64,
    pub p2: LaurentPoly,
    pub p1: LaurentPoly,
    pub p0: LaurentPoly,
}

/// Assembles the limit equation for a given accessory coefficient `B~`.
pub fn limit_ode(setup: &LimitSetup, b_tilde: f64) -> Result<FuchsianODE> {
    setup.validate()?;
    if !b_tilde.is_finite() {
        return Err(Error::InvalidParams("B~ must be finite".into()));
    }
    let (h, l, t) = (&setup.h, &setup.l, &setup.t);
    let n = t.len();
    let lt = setup.l_tilde();
    let p = LaurentPoly::from_roots(t);
    let x = LaurentPoly::monomial(1, 1.0);
    let tprod: f64 = t.iter().product();

    let p2 = p.shift(2);

    // x [ x sum_i kappa_i prod_{j != i} (x - t_j) - 2 l~ P ],  kappa_i = h_i - l_i + 1
    let mut inner = p.scale(-2.0 * lt);
    for i in 0..n {
        let others: Vec<f64> = t.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
        inner = &inner + &(&x * &LaurentPoly::from_roots(&others)).scale(h[i] - l[i] + 1.0);
    }
    let p1 = inner.shift(1);

    let top: f64 = (0..n).map(|i| (2.0 * h[i] - 2.0 * l[i] + 1.0) * t[i]).sum::<f64>() / 4.0;
    let bracket = match setup.family {
        LimitFamily::FromA3 => {
            let b = setup.beta / 2.0;
            LaurentPoly::from_pairs([
                (3, 0.25),
                (2, top),
                (1, b_tilde),
                (0, tprod * (lt + 0.5 + b) * (lt + 0.5 - b)),
            ])
        }
        LimitFamily::FromA2 => {
            let s: f64 = (0..n).map(|i| (lt - h[i] + l[i]) / t[i]).sum();
            LaurentPoly::from_pairs([
                (4, 0.25),
                (3, top),
                (2, b_tilde),
                (1, tprod * lt * s),
                (0, -tprod * lt * (lt + 1.0)),
            ])
        }
    };
    Ok(FuchsianODE {
        family: setup.family,
        t: t.clone(),
        h: h.clone(),
        l: l.clone(),
        beta: setup.beta,
        l_tilde: lt,
        b_tilde,
        p2,
        p1,
        p0: -&bracket,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(super) fn setup3() -> LimitSetup {
        LimitSetup {
            family: LimitFamily::FromA3,
            h: vec![0.3, -0.2, 0.15],
            l: vec![0.1, 0.4, -0.3],
            t: vec![1.2, -0.8, 2.1],
            beta: 0.63,
            e_tilde: 0.7,
        }
    }

    #[test]
    fn coefficient_shapes() {
        let ode = limit_ode(&setup3(), 0.4).unwrap();
        assert_eq!(ode.p2.low_degree(), Some(2));
        assert_eq!(ode.p2.high_degree(), Some(5));
        assert_eq!(ode.p1.low_degree(), Some(1));
        assert_eq!(ode.p1.high_degree(), Some(4));
        assert_eq!(ode.p0.high_degree(), Some(3));
        assert_eq!(ode.p0.coeff(1), -0.4);
        // leading p1 coefficient is sum kappa - 2 l~ = 1
        assert!((ode.p1.coeff(4) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn coincident_points_rejected() {
        let mut s = setup3();
        s.t[2] = s.t[0];
        assert!(matches!(limit_ode(&s, 0.0), Err(Error::CoincidentSingularities(_))));
        s.t[2] = 0.0;
        assert!(matches!(limit_ode(&s, 0.0), Err(Error::CoincidentSingularities(_))));
    }

    #[test]
    fn family_names_parse() {
        assert_eq!("fromA3".parse::<LimitFamily>().unwrap(), LimitFamily::FromA3);
        assert_eq!("A2".parse::<LimitFamily>().unwrap(), LimitFamily::FromA2);
        assert!("A4".parse::<LimitFamily>().is_err());
    }
}
