//! Physical parameters of the three degenerate operators.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `q^h` for real `h`, computed as `exp(h ln q)`.
#[inline]
pub fn qpow(q: f64, h: f64) -> f64 {
    (h * q.ln()).exp()
}

/// Which degeneration of the one-variable Ruijsenaars-van Diejen operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// Fourth degeneration: the q-Heun operator.
    A4,
    /// Third degeneration.
    A3,
    /// Second degeneration.
    A2,
}

impl Family {
    /// Number of `(h, l, t)` triples.
    pub fn arity(self) -> usize {
        match self {
            Family::A4 => 2,
            Family::A3 => 3,
            Family::A2 => 4,
        }
    }

    /// Power of `x` multiplying `(A - E)` in the stored polynomial form.
    pub fn normalization(self) -> i64 {
        match self {
            Family::A4 | Family::A3 => 1,
            Family::A2 => 2,
        }
    }

    /// Shifts `s` with `A x^mu = sum_s d_s(mu) x^(mu+s)`, highest first.
    pub fn shifts(self) -> &'static [i64] {
        match self {
            Family::A4 => &[1, 0, -1],
            Family::A3 => &[2, 1, 0, -1],
            Family::A2 => &[2, 1, 0, -1, -2],
        }
    }

    /// Degree of `x` at which the accessory parameter enters `v(x)`.
    pub fn accessory_degree(self) -> i64 {
        self.normalization()
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A4 => "A4",
            Family::A3 => "A3",
            Family::A2 => "A2",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A4" => Ok(Family::A4),
            "A3" => Ok(Family::A3),
            "A2" => Ok(Family::A2),
            other => Err(Error::InvalidParams(format!(
                "unknown family '{other}' (expected A4, A3 or A2)"
            ))),
        }
    }
}

/// Parameters of `A<k>` together with the eigenvalue `E`.
///
/// `alpha1`, `alpha2` are only read for [`Family::A4`]; `beta` for
/// [`Family::A4`] and [`Family::A3`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub family: Family,
    pub q: f64,
    pub h: Vec<f64>,
    pub l: Vec<f64>,
    pub t: Vec<f64>,
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta: f64,
    pub energy: f64,
}

impl ModelParams {
    #[allow(clippy::too_many_arguments)]
    pub fn a4(
        q: f64,
        h: [f64; 2],
        l: [f64; 2],
        t: [f64; 2],
        alpha: [f64; 2],
        beta: f64,
        energy: f64,
    ) -> Self {
        ModelParams {
            family: Family::A4,
            q,
            h: h.to_vec(),
            l: l.to_vec(),
            t: t.to_vec(),
            alpha1: alpha[0],
            alpha2: alpha[1],
            beta,
            energy,
        }
    }

    pub fn a3(q: f64, h: [f64; 3], l: [f64; 3], t: [f64; 3], beta: f64, energy: f64) -> Self {
        ModelParams {
            family: Family::A3,
            q,
            h: h.to_vec(),
            l: l.to_vec(),
            t: t.to_vec(),
            alpha1: 0.0,
            alpha2: 0.0,
            beta,
            energy,
        }
    }

    pub fn a2(q: f64, h: [f64; 4], l: [f64; 4], t: [f64; 4], energy: f64) -> Self {
        ModelParams {
            family: Family::A2,
            q,
            h: h.to_vec(),
            l: l.to_vec(),
            t: t.to_vec(),
            alpha1: 0.0,
            alpha2: 0.0,
            beta: 0.0,
            energy,
        }
    }

    pub fn with_energy(&self, energy: f64) -> Self {
        ModelParams {
            energy,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        validate_common(self.family, self.q, &self.h, &self.l, &self.t)?;
        let extra = [
            ("alpha1", self.alpha1),
            ("alpha2", self.alpha2),
            ("beta", self.beta),
            ("E", self.energy),
        ];
        for (name, v) in extra {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be finite")));
            }
        }
        Ok(())
    }

    /// `sum h`.
    pub fn sum_h(&self) -> f64 {
        self.h.iter().sum()
    }

    /// `sum l`.
    pub fn sum_l(&self) -> f64 {
        self.l.iter().sum()
    }

    /// `prod t`.
    pub fn prod_t(&self) -> f64 {
        self.t.iter().product()
    }

    /// Zeros `q^(h_i + 1/2) t_i` of the `g(x/q)` coefficient.
    pub fn upper_roots(&self) -> Vec<f64> {
        self.h
            .iter()
            .zip(&self.t)
            .map(|(&h, &t)| qpow(self.q, h + 0.5) * t)
            .collect()
    }

    /// Zeros `q^(l_i - 1/2) t_i` of the `g(qx)` coefficient.
    pub fn lower_roots(&self) -> Vec<f64> {
        self.l
            .iter()
            .zip(&self.t)
            .map(|(&l, &t)| qpow(self.q, l - 0.5) * t)
            .collect()
    }
}

pub(crate) fn validate_common(family: Family, q: f64, h: &[f64], l: &[f64], t: &[f64]) -> Result<()> {
    if !q.is_finite() || q <= 0.0 {
        return Err(Error::InvalidParams("q > 0 required".into()));
    }
    if q == 1.0 {
        return Err(Error::InvalidParams("q ≠ 1 required".into()));
    }
    let n = family.arity();
    for (name, v) in [("h", h), ("l", l), ("t", t)] {
        if v.len() != n {
            return Err(Error::InvalidParams(format!(
                "vector {name} must have length {n} for family {family}, got {}",
                v.len()
            )));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParams(format!("vector {name} must be finite")));
        }
    }
    if let Some(i) = t.iter().position(|&x| x == 0.0) {
        return Err(Error::InvalidParams(format!(
            "nonzero t required: t{} = 0",
            i + 1
        )));
    }
    Ok(())
}
