//! End-to-end runs of the `qheun` binary.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use qheun::characterize::VariantSkeleton;
use qheun::degeneration::LimitSetup;
use qheun::ModelParams;
use serde_json::Value;

const A3: &str = "\
# third degeneration
family = A3
q = 1.7
h = 0.2, 0.1, -0.3
l = 0.4, 0.0, 0.1
t = 1.0, 2.0, -0.5
beta = 0.8
energy = 0.25
";

const A4_QES: &str = "\
family = A4
q = 2
h = 1, 1
l = 0, 0
t = 1, 2
alpha1 = -1
alpha2 = 5
";

fn qheun(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qheun"))
        .args(args)
        .env_remove("QHEUN_TOLERANCE")
        .output()
        .expect("binary runs")
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qheun"))
        .args(args)
        .env_remove("QHEUN_TOLERANCE")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn param_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn error(out: &Output) -> (i32, Value) {
    let err: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    (out.status.code().unwrap(), err["error"].clone())
}

#[test]
fn variant_exponent_at_infinity() {
    let f = param_file(A3);
    let r = json(&qheun(&["exponents", f.path().to_str().unwrap(), "--point", "inf"]));
    let res = &r["result"];
    assert!((res["lambda1"].as_f64().unwrap() + 0.5).abs() < 1e-12);
    assert!((res["lambda2"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(res["resonant"], Value::Bool(true));
    assert_eq!(r["version"], qheun::VERSION);
}

#[test]
fn reports_are_deterministic() {
    let f = param_file(A3);
    let path = f.path().to_str().unwrap();
    for cmd in ["exponents", "series", "apparency", "characterize", "qes"] {
        let a = qheun(&[cmd, path, "--order", "12"]);
        let b = qheun(&[cmd, path, "--order", "12"]);
        assert!(a.status.success(), "{cmd}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
}

#[test]
fn reports_round_trip() {
    let f = param_file(A3);
    let path = f.path().to_str().unwrap();
    for cmd in ["exponents", "series", "apparency", "qes"] {
        let r = json(&qheun(&[cmd, path]));
        let p: ModelParams = serde_json::from_value(r["inputs"]["params"].clone()).unwrap();
        p.validate().unwrap();
        assert_eq!(p.energy, 0.25);
    }
    let r = json(&qheun(&["characterize", path]));
    let sk: VariantSkeleton = serde_json::from_value(r["inputs"]["params"].clone()).unwrap();
    sk.validate().unwrap();
    assert_eq!(r["result"]["all_passed"], Value::Bool(true));

    let limit = param_file("family = fromA3\nh = 0.2,0.1,-0.3\nl = 0.4,0,0.1\nt = 1,2,-0.5\nbeta = 0.8\ne_tilde = 0.3\n");
    let r = json(&qheun(&["limit", limit.path().to_str().unwrap(), "--order", "5"]));
    let s: LimitSetup = serde_json::from_value(r["inputs"]["params"].clone()).unwrap();
    s.validate().unwrap();
    assert!(r["result"]["fuchs_defect"].as_f64().unwrap().abs() < 1e-12);
    let reparsed: Value = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(reparsed, r);
    assert_eq!(s.h, vec![0.2, 0.1, -0.3]);
}

#[test]
fn series_of_order_zero() {
    let f = param_file(A3);
    let r = json(&qheun(&["series", f.path().to_str().unwrap(), "--order", "0"]));
    for e in r["result"]["expansions"].as_array().unwrap() {
        assert_eq!(e["coeffs"], serde_json::json!([1.0]));
    }
}

#[test]
fn stdin_and_inline_flags() {
    let out = with_stdin(&["exponents", "-", "--energy", "-3.5"], &A3.replace("energy = 0.25\n", ""));
    let r = json(&out);
    assert_eq!(r["inputs"]["params"]["energy"].as_f64(), Some(-3.5));

    let out = qheun(&[
        "exponents", "--family", "A2", "--q", "0.6", "--h", "0.1,0.2,-0.3,0.4", "--l", "0,0,0,0", "--t",
        "1,-2,3,0.5",
    ]);
    json(&out);
}

#[test]
fn validation_errors_exit_two() {
    let f = param_file(&A3.replace("q = 1.7", "q = 1"));
    let (code, err) = error(&qheun(&["exponents", f.path().to_str().unwrap()]));
    assert_eq!(code, 2);
    assert!(err["message"].as_str().unwrap().contains("q ≠ 1"));

    let f = param_file(&A3.replace("t = 1.0, 2.0, -0.5", "t = 1.0, 0, -0.5"));
    let (code, err) = error(&qheun(&["exponents", f.path().to_str().unwrap()]));
    assert_eq!(code, 2);
    assert!(err["message"].as_str().unwrap().contains("nonzero t"));

    let f = param_file(&format!("{A3}q = 2\n"));
    let path = f.path().to_str().unwrap().to_string();
    let (code, err) = error(&qheun(&["exponents", &path]));
    assert_eq!(code, 2);
    assert_eq!(err["kind"], "ParseError");
    assert_eq!(err["location"], Value::String(format!("{path}:9")));

    let f = param_file(A3);
    let (code, err) = error(&qheun(&["exponents", f.path().to_str().unwrap(), "--beta", "1"]));
    assert_eq!(code, 2);
    assert_eq!(err["location"], "--beta");

    let (code, _) = error(&qheun(&["exponents", f.path().to_str().unwrap(), "--tol", "vanish=-1"]));
    assert_eq!(code, 2);
    let (code, _) = error(&qheun(&["qes", f.path().to_str().unwrap(), "--order", "0"]));
    assert_eq!(code, 2);
}

#[test]
fn missing_file_exits_one() {
    let (code, err) = error(&qheun(&["exponents", "/nonexistent/params.txt"]));
    assert_eq!(code, 1);
    assert_eq!(err["kind"], "IoError");
}

#[test]
fn numerical_failure_exits_three() {
    // With integrality loosened, a beta off by 1e-3 passes the subspace
    // condition but the operator does not close on it.
    let f = param_file(A4_QES);
    let out = qheun(&["qes", f.path().to_str().unwrap(), "--beta", "2.001", "--tol", "integrality=0.01"]);
    let (code, err) = error(&out);
    assert_eq!(code, 3);
    assert_eq!(err["kind"], "ClosureViolation");
    assert_eq!(err["category"], "numerical");
}

#[test]
fn global_tolerance_from_environment() {
    let f = param_file(A4_QES);
    let out = Command::new(env!("CARGO_BIN_EXE_qheun"))
        .args(["qes", f.path().to_str().unwrap(), "--beta", "2", "--tol", "vanish=1e-11"])
        .env("QHEUN_TOLERANCE", "1e-9")
        .output()
        .unwrap();
    let tol = &json(&out)["tolerances"];
    assert_eq!(tol["vanish"].as_f64(), Some(1e-11));
    assert_eq!(tol["integrality"].as_f64(), Some(1e-9));
    assert_eq!(tol["eigen_residual"].as_f64(), Some(1e-9));
    let out = Command::new(env!("CARGO_BIN_EXE_qheun"))
        .args(["qes", f.path().to_str().unwrap(), "--beta", "2"])
        .env("QHEUN_TOLERANCE", "abc")
        .output()
        .unwrap();
    assert_eq!(error(&out).1["location"], "QHEUN_TOLERANCE");
}

/// Subspace conditions `-lambda - alpha = n >= 0` enumerated from the
/// exponents `(D - alpha1 - alpha2 -+ beta + 2)/2` at zero, with
/// `D = sum h - sum l = 2` and `alpha = (-1, 5)`.
fn hand_enumeration(beta: f64) -> Vec<(f64, f64, usize)> {
    let base = (2.0 - (-1.0 + 5.0) + 2.0) / 2.0;
    let mut lambdas = vec![base - beta / 2.0];
    if beta != 0.0 {
        lambdas.push(base + beta / 2.0);
    }
    let mut hits = Vec::new();
    for lambda in lambdas {
        for alpha in [-1.0, 5.0] {
            let n = -lambda - alpha;
            if n >= 0.0 && n.fract() == 0.0 {
                hits.push((lambda, alpha, n as usize));
            }
        }
    }
    hits
}

#[test]
fn qes_sweep_matches_hand_enumeration() {
    let f = param_file(A4_QES);
    let path = f.path().to_str().unwrap();
    let r = json(&qheun(&["qes", path, "--sweep", "beta=0:4:0.5"]));
    let rows = r["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    let mut hit_betas = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row["index"].as_u64(), Some(i as u64));
        assert_eq!(row["status"], "ok");
        let beta = row["values"]["beta"].as_f64().unwrap();
        assert_eq!(beta, 0.5 * i as f64);
        let got: Vec<(f64, f64, usize)> = row["result"]["conditions"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| {
                (
                    c["lambda"].as_f64().unwrap(),
                    c["alpha"].as_f64().unwrap(),
                    c["n"].as_u64().unwrap() as usize,
                )
            })
            .collect();
        let want = hand_enumeration(beta);
        assert_eq!(got.len(), want.len(), "beta = {beta}");
        for (g, w) in got.iter().zip(&want) {
            assert!((g.0 - w.0).abs() < 1e-12 && g.1 == w.1 && g.2 == w.2, "beta = {beta}: {g:?} vs {w:?}");
        }
        for sub in row["result"]["subspaces"].as_array().unwrap() {
            assert!(sub["subspace"]["closure"].as_f64().unwrap() < 1e-10);
            for e in sub["eigenpairs"].as_array().unwrap() {
                assert!(e["residual"].as_f64().unwrap() < 1e-8);
            }
        }
        if !want.is_empty() {
            hit_betas.push(beta);
        }
    }
    assert_eq!(hit_betas, vec![0.0, 2.0, 4.0]);

    let sweep = qheun(&["sweep", "--command", "qes", path, "--sweep", "beta=0:4:0.5"]);
    assert_eq!(json(&sweep)["result"], r["result"]);
}

#[test]
fn csv_and_human_formats() {
    let f = param_file(A3);
    let path = f.path().to_str().unwrap();
    let out = qheun(&["exponents", path, "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("key,value\n"));
    assert!(text.contains("result.infinity.resonant,true"));

    let out = qheun(&["sweep", "--command", "exponents", path, "--sweep", "t2=1:3:1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);

    let out = qheun(&["apparency", path, "--format", "human"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("qheun apparency"));
}

#[test]
fn output_file() {
    let f = param_file(A3);
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.json");
    let out = qheun(&["characterize", f.path().to_str().unwrap(), "--output", target.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(r["command"], "characterize");
}

#[test]
fn sweep_rows_record_errors() {
    let f = param_file(A3);
    let out = qheun(&["sweep", "--command", "exponents", f.path().to_str().unwrap(), "--sweep", "q=0:2:0.5"]);
    let r = json(&out);
    let rows = r["result"]["rows"].as_array().unwrap();
    let status: Vec<&str> = rows.iter().map(|r| r["status"].as_str().unwrap()).collect();
    assert_eq!(status, vec!["error", "ok", "error", "ok", "ok"]);
    assert_eq!(rows[2]["error"]["kind"], "InvalidParams");
}

#[test]
fn hypergeometric_reduction() {
    let text = "family = A4\nq = 1.6\nh = 0.3, -0.2\nl = 0.1, 0.8\nt = 1.2, -0.7\nalpha1 = 0.35\nalpha2 = -0.45\nbeta = 0.6\n";
    let f = param_file(text);
    let r = json(&qheun(&["hypergeom", f.path().to_str().unwrap(), "--order", "25"]));
    assert!(r["result"]["max_relative_residual"].as_f64().unwrap() < 1e-10);
    let f = param_file(&text.replace("l = 0.1, 0.8", "l = 0.1, 0.7"));
    let (code, err) = error(&qheun(&["hypergeom", f.path().to_str().unwrap()]));
    assert_eq!(code, 2);
    assert_eq!(err["kind"], "NotReducible");
}
