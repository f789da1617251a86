//! One library call per operation, with residual certificates attached.

use serde_json::{json, Value};

use qheun::characterize::verify_characterization;
use qheun::degeneration::{limit_ode, riemann_scheme, to_heun_form, verify_limit};
use qheun::local::{
    analyze, apparency_check, characteristic_residual, exponents, frobenius_series, residual_profile,
};
use qheun::operator::{apply_with_scale, q_hypergeometric_series, reduce_to_q_hypergeometric};
use qheun::qes::{eigenpairs, find_subspaces, subspace_conditions};
use qheun::{build_equation, BasePoint, LaurentPoly, QDiffEquation};

use crate::{CliError, Operation, ParamSet, RunConfig};

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn points(config: &RunConfig) -> Vec<BasePoint> {
    match config.point {
        Some(p) => vec![p],
        None => vec![BasePoint::Zero, BasePoint::Infinity],
    }
}

/// Runs `config.operation` on `params`; returns `(inputs, result)`.
pub fn execute(config: &RunConfig, params: &ParamSet) -> Result<(Value, Value), CliError> {
    let tol = &config.tolerances;
    match config.operation {
        Operation::Exponents => {
            let p = params.model_params(false)?;
            let eq = build_equation(&p)?;
            let mut out = serde_json::Map::new();
            for point in points(config) {
                let pair = exponents(&eq, point, tol)?;
                let mut v = to_value(&pair);
                v["residuals"] = json!([
                    characteristic_residual(&eq, point, pair.lambda1),
                    characteristic_residual(&eq, point, pair.lambda2),
                ]);
                out.insert(point_key(point).into(), v);
            }
            let result = match config.point {
                Some(point) => out.remove(point_key(point)).expect("computed above"),
                None => Value::Object(out),
            };
            Ok((json!({ "params": p }), result))
        }
        Operation::Series => {
            let p = params.model_params(false)?;
            let eq = build_equation(&p)?;
            let point = config.point.unwrap_or(BasePoint::Zero);
            let lambdas = match config.lambda {
                Some(l) => vec![l],
                None => {
                    let pair = exponents(&eq, point, tol)?;
                    vec![pair.lambda1, pair.lambda2]
                }
            };
            let mut expansions = Vec::new();
            for lambda in lambdas {
                let s = frobenius_series(&eq, point, lambda, config.order, tol)?;
                let profile = residual_profile(&eq, &s);
                let mut v = to_value(&s);
                v["max_relative_residual"] = json!(profile.max_relative_through(s.order));
                expansions.push(v);
            }
            Ok((json!({ "params": p }), json!({ "expansions": expansions })))
        }
        Operation::Apparency => {
            let p = params.model_params(false)?;
            let eq = build_equation(&p)?;
            let mut out = Vec::new();
            for point in points(config) {
                let report = analyze(&eq, point, tol)?;
                let mut v = to_value(&report);
                if report.is_regular {
                    v["check"] = to_value(&apparency_check(&eq, point, tol)?);
                }
                out.push(v);
            }
            Ok((json!({ "params": p }), json!({ "points": out })))
        }
        Operation::Characterize => {
            let sk = params.skeleton()?;
            let report = verify_characterization(&sk, tol)?;
            Ok((json!({ "params": sk }), to_value(&report)))
        }
        Operation::Qes => {
            let p = params.model_params(false)?;
            let conditions: Vec<Value> = subspace_conditions(&p, tol)?
                .into_iter()
                .map(|(lambda, alpha, n)| json!({ "lambda": lambda, "alpha": alpha, "n": n }))
                .collect();
            let mut subspaces = Vec::new();
            for sub in find_subspaces(&p, tol)? {
                let pairs = eigenpairs(&p, &sub, tol)?;
                subspaces.push(json!({ "subspace": sub, "eigenpairs": pairs }));
            }
            Ok((
                json!({ "params": p }),
                json!({ "conditions": conditions, "subspaces": subspaces }),
            ))
        }
        Operation::Limit => {
            let setup = params.limit_setup()?;
            let report = verify_limit(&setup, &config.epsilons, config.order, tol)?;
            let ode = limit_ode(&setup, setup.e_tilde + report.constant)?;
            let heun = to_heun_form(&ode)?;
            Ok((
                json!({ "params": setup }),
                json!({
                    "report": report,
                    "ode": ode,
                    "riemann_scheme": riemann_scheme(&ode),
                    "heun": heun,
                    "fuchs_defect": heun.fuchs_defect(),
                }),
            ))
        }
        Operation::Hypergeom => {
            let p = params.model_params(true)?;
            let red = reduce_to_q_hypergeometric(&p, tol)?;
            let phi = q_hypergeometric_series(red.a, red.b, red.c, p.q, config.order + 1)?;
            let residual = series_residual(&red.equation, &phi, config.order);
            Ok((
                json!({ "params": p }),
                json!({
                    "reduction": red,
                    "series": phi,
                    "max_relative_residual": residual,
                }),
            ))
        }
    }
}

fn point_key(point: BasePoint) -> &'static str {
    match point {
        BasePoint::Zero => "zero",
        BasePoint::Infinity => "infinity",
    }
}

/// Largest relative residual of a power series at degrees `0..=order`.
fn series_residual(eq: &QDiffEquation, phi: &LaurentPoly, order: usize) -> f64 {
    let (r, scale) = apply_with_scale(eq, 0.0, phi);
    (0..=order as i64)
        .map(|k| match scale.coeff(k) {
            s if s > 0.0 => r.coeff(k).abs() / s,
            _ => 0.0,
        })
        .fold(0.0, f64::max)
}
