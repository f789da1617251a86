//! Sparse Laurent polynomials with real coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Finite map from integer degree to coefficient.
///
/// Exact zeros are never stored, so the lowest and highest stored degrees
/// always carry nonzero coefficients. The zero polynomial is the empty map.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, f64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(0, 1.0)
    }

    pub fn monomial(degree: i64, coeff: f64) -> Self {
        let mut p = LaurentPoly::zero();
        p.set(degree, coeff);
        p
    }

    /// Dense constructor: `coeffs[i]` is the coefficient of `x^(lowest + i)`.
    pub fn from_dense(lowest: i64, coeffs: &[f64]) -> Self {
        let mut p = LaurentPoly::zero();
        for (i, &c) in coeffs.iter().enumerate() {
            p.set(lowest + i as i64, c);
        }
        p
    }

    pub fn from_pairs<I: IntoIterator<Item = (i64, f64)>>(pairs: I) -> Self {
        let mut p = LaurentPoly::zero();
        for (k, c) in pairs {
            p.add_to(k, c);
        }
        p
    }

    /// Monic polynomial with the given roots, `prod (x - r)`.
    pub fn from_roots(roots: &[f64]) -> Self {
        roots.iter().fold(LaurentPoly::one(), |acc, &r| {
            &acc * &LaurentPoly::from_dense(0, &[-r, 1.0])
        })
    }

    pub fn set(&mut self, degree: i64, coeff: f64) {
        if coeff == 0.0 {
            self.coeffs.remove(&degree);
        } else {
            self.coeffs.insert(degree, coeff);
        }
    }

    pub fn add_to(&mut self, degree: i64, coeff: f64) {
        let c = self.coeff(degree) + coeff;
        self.set(degree, c);
    }

    pub fn coeff(&self, degree: i64) -> f64 {
        self.coeffs.get(&degree).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn low_degree(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn high_degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Coefficient-wise absolute value.
    pub fn abs(&self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&k, c)| (k, c.abs())).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> LaurentPoly {
        LaurentPoly::from_pairs(self.iter().map(|(k, c)| (k, c * s)))
    }

    /// Multiplies by `x^shift`.
    pub fn shift(&self, shift: i64) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&k, &c)| (k + shift, c)).collect(),
        }
    }

    /// The polynomial `p(s x)`, i.e. coefficients `p_k s^k`.
    pub fn dilate(&self, s: f64) -> LaurentPoly {
        LaurentPoly::from_pairs(self.iter().map(|(k, c)| (k, c * s.powi(k as i32))))
    }

    /// The polynomial `p(1/x)`.
    pub fn invert(&self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&k, &c)| (-k, c)).collect(),
        }
    }

    pub fn derivative(&self) -> LaurentPoly {
        LaurentPoly::from_pairs(self.iter().map(|(k, c)| (k - 1, c * k as f64)))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.iter().map(|(k, c)| c * x.powi(k as i32)).sum()
    }

    /// Taylor shift `p(x0 + z)` as a polynomial in `z`.
    ///
    /// Only defined for ordinary polynomials (no negative degrees).
    pub fn taylor_shift(&self, x0: f64) -> LaurentPoly {
        let Some(high) = self.high_degree() else {
            return LaurentPoly::zero();
        };
        assert!(
            self.low_degree().unwrap_or(0) >= 0,
            "taylor_shift requires a polynomial without negative powers"
        );
        // Horner in the variable z: p(x0 + z) = (...((a_n)(x0+z) + a_{n-1})(x0+z) ...)
        let lin = LaurentPoly::from_dense(0, &[x0, 1.0]);
        let mut acc = LaurentPoly::zero();
        for k in (0..=high).rev() {
            acc = &(&acc * &lin) + &LaurentPoly::monomial(0, self.coeff(k));
        }
        acc
    }

    /// Division by `(x - root)`: returns `(quotient, remainder)`.
    ///
    /// Only defined for ordinary polynomials (no negative degrees).
    pub fn div_linear(&self, root: f64) -> (LaurentPoly, f64) {
        let Some(high) = self.high_degree() else {
            return (LaurentPoly::zero(), 0.0);
        };
        assert!(
            self.low_degree().unwrap_or(0) >= 0,
            "div_linear requires a polynomial without negative powers"
        );
        let mut quotient = LaurentPoly::zero();
        let mut carry = 0.0;
        for k in (0..=high).rev() {
            carry = self.coeff(k) + carry * root;
            if k > 0 {
                quotient.set(k - 1, carry);
            }
        }
        (quotient, carry)
    }

    /// Drops coefficients below `rel * max_abs()`.
    pub fn trimmed(&self, rel: f64) -> LaurentPoly {
        let cut = rel * self.max_abs();
        LaurentPoly {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(_, c)| c.abs() > cut)
                .map(|(&k, &c)| (k, c))
                .collect(),
        }
    }

    /// Dense coefficient vector over `low..=high`.
    pub fn to_dense(&self, low: i64, high: i64) -> Vec<f64> {
        (low..=high).map(|k| self.coeff(k)).collect()
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (k, c) in rhs.iter() {
            out.add_to(k, c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (k, c) in rhs.iter() {
            out.add_to(k, -c);
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1.0)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut acc: BTreeMap<i64, f64> = BTreeMap::new();
        for (i, a) in self.iter() {
            for (j, b) in rhs.iter() {
                *acc.entry(i + j).or_insert(0.0) += a * b;
            }
        }
        LaurentPoly::from_pairs(acc)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_has_no_degrees() {
        let z = LaurentPoly::zero();
        assert!(z.is_zero());
        assert_eq!(z.low_degree(), None);
        assert_eq!(z.high_degree(), None);
        let p = LaurentPoly::from_dense(-1, &[0.0, 2.0, 0.0]);
        assert_eq!(p.low_degree(), Some(0));
        assert_eq!(p.high_degree(), Some(0));
    }

    #[test]
    fn roots_and_division() {
        let p = LaurentPoly::from_roots(&[1.0, 2.0, -3.0]);
        assert_eq!(p.to_dense(0, 3), vec![6.0, -7.0, 0.0, 1.0]);
        let (quot, rem) = p.div_linear(2.0);
        assert_eq!(rem, 0.0);
        assert_eq!(quot, LaurentPoly::from_roots(&[1.0, -3.0]));
        let (_, rem) = p.div_linear(0.0);
        assert_eq!(rem, 6.0);
    }

    #[test]
    fn taylor_shift_matches_evaluation() {
        let p = LaurentPoly::from_dense(0, &[1.0, -2.0, 0.5, 3.0]);
        let s = p.taylor_shift(1.5);
        for z in [-1.0, 0.0, 0.25, 2.0] {
            assert!((s.eval(z) - p.eval(1.5 + z)).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn product_evaluates_pointwise(
            a in proptest::collection::vec(-3.0f64..3.0, 1..6),
            b in proptest::collection::vec(-3.0f64..3.0, 1..6),
            la in -3i64..3, lb in -3i64..3,
            x in 0.3f64..1.7,
        ) {
            let pa = LaurentPoly::from_dense(la, &a);
            let pb = LaurentPoly::from_dense(lb, &b);
            let lhs = (&pa * &pb).eval(x);
            let rhs = pa.eval(x) * pb.eval(x);
            prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()) * 100.0);
        }

        #[test]
        fn dilate_composes(
            a in proptest::collection::vec(-3.0f64..3.0, 1..6),
            s in 0.5f64..2.0, x in 0.3f64..1.7,
        ) {
            let p = LaurentPoly::from_dense(-2, &a);
            prop_assert!((p.dilate(s).eval(x) - p.eval(s * x)).abs() < 1e-9 * (1.0 + p.abs().eval(s * x)));
        }
    }
}
