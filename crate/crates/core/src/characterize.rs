//! The variants of the q-Heun equation as the equations singled out by
//! their local data.
//!
//! Fix `u` and `w` (monic products of the factored roots) and leave `v`
//! unknown apart from the accessory slot. For the third degeneration the
//! conditions are: exponent difference `beta` at `x = 0`, exponent
//! difference `1` at `x = inf` and apparency there. For the second: exponent
//! difference `1` and apparency at both points. Each condition fixes one
//! coefficient of `v`, and `E` stays free.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::local::{apparency_check, exponents, BasePoint};
use crate::operator::QDiffEquation;
use crate::params::{qpow, validate_common, Family, ModelParams};
use crate::tolerance::Tolerances;

/// Data of a variant equation with `v` left undetermined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantSkeleton {
    pub family: Family,
    pub q: f64,
    pub h: Vec<f64>,
    pub l: Vec<f64>,
    pub t: Vec<f64>,
    /// Exponent difference at `x = 0`; ignored for [`Family::A2`].
    pub beta: f64,
    pub energy: f64,
}

impl VariantSkeleton {
    pub fn validate(&self) -> Result<()> {
        if self.family == Family::A4 {
            return Err(Error::InvalidParams(
                "characterization applies to families A3 and A2 only".into(),
            ));
        }
        validate_common(self.family, self.q, &self.h, &self.l, &self.t)?;
        if !self.beta.is_finite() || !self.energy.is_finite() {
            return Err(Error::InvalidParams("beta and E must be finite".into()));
        }
        Ok(())
    }

    pub fn to_params(&self) -> ModelParams {
        ModelParams {
            family: self.family,
            q: self.q,
            h: self.h.clone(),
            l: self.l.clone(),
            t: self.t.clone(),
            alpha1: 0.0,
            alpha2: 0.0,
            beta: self.beta,
            energy: self.energy,
        }
    }

    pub fn from_params(p: &ModelParams) -> Self {
        VariantSkeleton {
            family: p.family,
            q: p.q,
            h: p.h.clone(),
            l: p.l.clone(),
            t: p.t.clone(),
            beta: p.beta,
            energy: p.energy,
        }
    }

    fn target_difference(&self) -> f64 {
        match self.family {
            Family::A3 => self.beta,
            _ => 1.0,
        }
    }

    /// Equation with the given `v` coefficients (the accessory slot is
    /// filled from `energy`).
    fn equation(&self, v: &[(i64, f64)]) -> QDiffEquation {
        let p = self.to_params();
        let mut v = LaurentPoly::from_pairs(v.iter().copied());
        v.add_to(self.family.accessory_degree(), -self.energy);
        QDiffEquation {
            u: LaurentPoly::from_roots(&p.upper_roots()),
            v,
            w: LaurentPoly::from_roots(&p.lower_roots()),
            q: self.q,
            normalization: self.family.normalization(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct A3Coefficients {
    pub b3: f64,
    pub b2: f64,
    pub b0: f64,
    /// Smaller exponent at `x = 0`.
    pub lambda: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct A2Coefficients {
    pub b4: f64,
    pub b3: f64,
    pub b1: f64,
    pub b0: f64,
    /// Smaller exponent at `x = 0`.
    pub lambda: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DerivedCoefficients {
    A3(A3Coefficients),
    A2(A2Coefficients),
}

impl DerivedCoefficients {
    /// `(degree, value)` pairs of `v` other than the accessory slot.
    pub fn v_pairs(&self) -> Vec<(i64, f64)> {
        match *self {
            DerivedCoefficients::A3(c) => vec![(3, c.b3), (2, c.b2), (0, c.b0)],
            DerivedCoefficients::A2(c) => vec![(4, c.b4), (3, c.b3), (1, c.b1), (0, c.b0)],
        }
    }

    pub fn lambda(&self) -> f64 {
        match *self {
            DerivedCoefficients::A3(c) => c.lambda,
            DerivedCoefficients::A2(c) => c.lambda,
        }
    }
}

/// Extremal-degree coefficient of `v` forced by an exponent difference `d`
/// at `point`, together with the smaller exponent.
///
/// The characteristic roots satisfy `tau1 tau2 = C / A` and
/// `tau2 = q^d tau1`, so `tau1` follows and `B = -A (tau1 + tau2)`.
fn forced_extremal(eq: &QDiffEquation, point: BasePoint, d: f64) -> Result<(f64, f64)> {
    let (a, c) = match point {
        BasePoint::Zero => {
            let k = eq.u.low_degree().expect("u is nonzero");
            (eq.w.coeff(k), eq.u.coeff(k))
        }
        BasePoint::Infinity => {
            let k = eq.u.high_degree().expect("u is nonzero");
            (eq.u.coeff(k), eq.w.coeff(k))
        }
    };
    let ratio = c / a;
    if ratio <= 0.0 || !ratio.is_finite() {
        return Err(Error::NonRealExponent {
            point: match point {
                BasePoint::Zero => "x=0",
                BasePoint::Infinity => "x=inf",
            },
            root: format!("root product {ratio}"),
        });
    }
    let lambda = (ratio.ln() / eq.q.ln() - d) / 2.0;
    let tau = qpow(eq.q, lambda);
    Ok((-a * tau * (1.0 + qpow(eq.q, d)), lambda))
}

/// Coefficient that makes the resonance at `point` apparent. The
/// consistency sum at index 1 is `v_k + (terms from u, w)`, so with the slot
/// set to zero the required value is minus the sum.
fn forced_by_apparency(eq: &QDiffEquation, point: BasePoint, tol: &Tolerances) -> Result<f64> {
    let check = apparency_check(eq, point, tol)?.ok_or_else(|| {
        Error::InvalidParams(format!("no resonance at {point} to impose apparency"))
    })?;
    if check.index != 1 {
        return Err(Error::InvalidParams(format!(
            "expected resonance at index 1 at {point}, found {}",
            check.index
        )));
    }
    Ok(-check.sum)
}

/// Coefficients `b3, b2, b0` of the third-degeneration variant, obtained
/// from the exponents at `x = 0` first, then the exponents at infinity, then
/// apparency at infinity.
pub fn derive_b_a3(sk: &VariantSkeleton, tol: &Tolerances) -> Result<A3Coefficients> {
    if sk.family != Family::A3 {
        return Err(Error::InvalidParams("derive_b_a3 needs an A3 skeleton".into()));
    }
    sk.validate()?;
    if sk.beta == 0.0 {
        return Err(Error::DegenerateBeta);
    }
    let probe = sk.equation(&[]);
    let (b0, lambda) = forced_extremal(&probe, BasePoint::Zero, sk.beta)?;
    let (b3, _) = forced_extremal(&probe, BasePoint::Infinity, 1.0)?;
    let probe = sk.equation(&[(3, b3), (0, b0)]);
    let b2 = forced_by_apparency(&probe, BasePoint::Infinity, tol)?;
    Ok(A3Coefficients { b3, b2, b0, lambda })
}

/// Coefficients `b4, b3, b1, b0` of the second-degeneration variant from
/// exponent difference `1` and apparency at both points.
pub fn derive_b_a2(sk: &VariantSkeleton, tol: &Tolerances) -> Result<A2Coefficients> {
    if sk.family != Family::A2 {
        return Err(Error::InvalidParams("derive_b_a2 needs an A2 skeleton".into()));
    }
    sk.validate()?;
    let probe = sk.equation(&[]);
    let (b0, lambda) = forced_extremal(&probe, BasePoint::Zero, 1.0)?;
    let (b4, _) = forced_extremal(&probe, BasePoint::Infinity, 1.0)?;
    let probe = sk.equation(&[(4, b4), (0, b0)]);
    let b1 = forced_by_apparency(&probe, BasePoint::Zero, tol)?;
    let b3 = forced_by_apparency(&probe, BasePoint::Infinity, tol)?;
    Ok(A2Coefficients { b4, b3, b1, b0, lambda })
}

pub fn derive(sk: &VariantSkeleton, tol: &Tolerances) -> Result<DerivedCoefficients> {
    match sk.family {
        Family::A3 => derive_b_a3(sk, tol).map(DerivedCoefficients::A3),
        Family::A2 => derive_b_a2(sk, tol).map(DerivedCoefficients::A2),
        Family::A4 => Err(Error::InvalidParams(
            "characterization applies to families A3 and A2 only".into(),
        )),
    }
}

/// The full equation with derived coefficients and the skeleton's `E`.
pub fn assemble(sk: &VariantSkeleton, coeffs: &DerivedCoefficients) -> QDiffEquation {
    sk.equation(&coeffs.v_pairs())
}

/// One checked condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub name: String,
    pub passed: bool,
    /// Observed value (exponent difference or relative consistency sum).
    pub value: Option<f64>,
    pub target: f64,
    pub residual: Option<f64>,
    /// Why the check could not be evaluated, if it could not.
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterizationReport {
    pub family: Family,
    pub coefficients: DerivedCoefficients,
    pub exponents_zero: Option<[f64; 2]>,
    pub exponents_infinity: Option<[f64; 2]>,
    pub conditions: Vec<ConditionCheck>,
    pub all_passed: bool,
}

fn difference_check(
    eq: &QDiffEquation,
    point: BasePoint,
    target: f64,
    tol: &Tolerances,
) -> (ConditionCheck, Option<[f64; 2]>) {
    let name = format!("exponent difference at {point}");
    match exponents(eq, point, tol) {
        Ok(pair) => {
            let residual = (pair.difference - target).abs();
            (
                ConditionCheck {
                    name,
                    passed: residual < tol.integrality,
                    value: Some(pair.difference),
                    target,
                    residual: Some(residual),
                    note: None,
                },
                Some([pair.lambda1, pair.lambda2]),
            )
        }
        Err(e) => (
            ConditionCheck {
                name,
                passed: false,
                value: None,
                target,
                residual: None,
                note: Some(e.to_string()),
            },
            None,
        ),
    }
}

fn apparency_condition(eq: &QDiffEquation, point: BasePoint, tol: &Tolerances) -> ConditionCheck {
    let name = format!("apparent at {point}");
    let failed = |note: String| ConditionCheck {
        name: name.clone(),
        passed: false,
        value: None,
        target: 0.0,
        residual: None,
        note: Some(note),
    };
    match apparency_check(eq, point, tol) {
        Ok(Some(check)) => ConditionCheck {
            name: name.clone(),
            passed: check.passed,
            value: Some(check.relative()),
            target: 0.0,
            residual: Some(check.relative()),
            note: None,
        },
        Ok(None) => failed("exponent difference is not a positive integer".into()),
        Err(e) => failed(e.to_string()),
    }
}

/// Checks the local conditions of the family on an arbitrary equation.
/// `beta` is the expected exponent difference at `x = 0` (A3 only).
pub fn check_conditions(
    family: Family,
    eq: &QDiffEquation,
    beta: f64,
    tol: &Tolerances,
) -> (Vec<ConditionCheck>, Option<[f64; 2]>, Option<[f64; 2]>) {
    let target_zero = if family == Family::A3 { beta.abs() } else { 1.0 };
    let (zero, ez) = difference_check(eq, BasePoint::Zero, target_zero, tol);
    let (inf, ei) = difference_check(eq, BasePoint::Infinity, 1.0, tol);
    let mut conditions = vec![zero, inf];
    if family == Family::A2 {
        conditions.push(apparency_condition(eq, BasePoint::Zero, tol));
    }
    conditions.push(apparency_condition(eq, BasePoint::Infinity, tol));
    (conditions, ez, ei)
}

/// Derives the coefficients, assembles the equation and checks every
/// condition of the family on it.
pub fn verify_characterization(sk: &VariantSkeleton, tol: &Tolerances) -> Result<CharacterizationReport> {
    let coefficients = derive(sk, tol)?;
    let eq = assemble(sk, &coefficients);
    let (conditions, exponents_zero, exponents_infinity) =
        check_conditions(sk.family, &eq, sk.target_difference(), tol);
    let all_passed = conditions.iter().all(|c| c.passed);
    Ok(CharacterizationReport {
        family: sk.family,
        coefficients,
        exponents_zero,
        exponents_infinity,
        conditions,
        all_passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{build_equation, v_coefficients};

    fn sk3(energy: f64) -> VariantSkeleton {
        VariantSkeleton::from_params(&ModelParams::a3(
            1.3,
            [0.3, -0.2, 0.15],
            [0.1, 0.4, -0.3],
            [1.2, -0.8, 2.1],
            0.63,
            energy,
        ))
    }

    fn sk2(energy: f64) -> VariantSkeleton {
        VariantSkeleton::from_params(&ModelParams::a2(
            0.65,
            [0.3, -0.2, 0.15, 0.05],
            [0.1, 0.4, -0.3, 0.2],
            [1.2, -0.8, 2.1, 0.6],
            energy,
        ))
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn a3_matches_closed_forms() {
        let sk = sk3(0.4);
        let c = derive_b_a3(&sk, &Tolerances::default()).unwrap();
        let q = sk.q;
        assert!(close(c.b3, -(q.sqrt() + 1.0 / q.sqrt())));
        let closed = v_coefficients(&sk.to_params());
        assert!(close(c.b2, closed[1].1));
        assert!(close(c.b0, closed[2].1));
        let sh: f64 = sk.h.iter().sum();
        let sl: f64 = sk.l.iter().sum();
        assert!(close(c.lambda, (sh - sl + 3.0 - sk.beta) / 2.0));
    }

    #[test]
    fn a2_matches_closed_forms() {
        let sk = sk2(-1.1);
        let c = derive_b_a2(&sk, &Tolerances::default()).unwrap();
        let closed = v_coefficients(&sk.to_params());
        for ((_, want), got) in closed.iter().zip([c.b4, c.b3, c.b1, c.b0]) {
            assert!(close(got, *want), "{got} vs {want}");
        }
        let built = build_equation(&sk.to_params()).unwrap();
        let eq = assemble(&sk, &DerivedCoefficients::A2(c));
        for k in 0..=4 {
            assert!(close(eq.v.coeff(k), built.v.coeff(k)));
        }
    }

    #[test]
    fn zero_beta_rejected() {
        let mut sk = sk3(0.0);
        sk.beta = 0.0;
        assert_eq!(derive_b_a3(&sk, &Tolerances::default()), Err(Error::DegenerateBeta));
    }

    #[test]
    fn wrong_family_rejected() {
        let sk = sk2(0.0);
        assert!(matches!(derive_b_a3(&sk, &Tolerances::default()), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn derived_equations_pass() {
        let tol = Tolerances::default();
        let r = verify_characterization(&sk3(17.3), &tol).unwrap();
        assert!(r.all_passed, "{r:?}");
        assert_eq!(r.conditions.len(), 3);
        let r = verify_characterization(&sk2(17.3), &tol).unwrap();
        assert!(r.all_passed, "{r:?}");
        assert_eq!(r.conditions.len(), 4);
    }

    #[test]
    fn perturbed_b2_breaks_apparency() {
        let tol = Tolerances::default();
        let sk = sk3(2.0);
        let c = derive(&sk, &tol).unwrap();
        let mut eq = assemble(&sk, &c);
        eq.v.add_to(2, 0.1);
        let (conds, _, _) = check_conditions(Family::A3, &eq, sk.beta, &tol);
        assert!(conds[0].passed && conds[1].passed);
        assert!(!conds[2].passed);
    }

    #[test]
    fn energy_does_not_enter() {
        let tol = Tolerances::default();
        let a = verify_characterization(&sk2(0.0), &tol).unwrap();
        let b = verify_characterization(&sk2(123.0), &tol).unwrap();
        assert_eq!(a.coefficients, b.coefficients);
        assert_eq!(a.exponents_zero, b.exponents_zero);
    }
}
