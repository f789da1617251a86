//! Parameter input.
//!
//! Parameters arrive as flat `key = value` text (one pair per line, `#`
//! starts a comment, vectors are comma lists) and as command-line flags.
//! Every key may be given once across all sources. Values are plain
//! decimal numbers; nothing is evaluated.

use std::collections::BTreeMap;
use std::str::FromStr;

use qheun::characterize::VariantSkeleton;
use qheun::degeneration::{LimitFamily, LimitSetup};
use qheun::operator::reducible_energy;
use qheun::{Family, ModelParams};

use crate::CliError;

const SCALAR_KEYS: [&str; 7] = ["q", "alpha1", "alpha2", "beta", "energy", "e_tilde", "family"];
const VECTOR_KEYS: [&str; 3] = ["h", "l", "t"];

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    value: String,
    origin: String,
}

/// Raw parameters keyed by name, each remembering where it came from.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParamSet {
    entries: BTreeMap<String, Entry>,
}

fn parse_error(origin: &str, message: impl Into<String>) -> CliError {
    CliError::Parse {
        location: origin.to_string(),
        message: message.into(),
    }
}

fn parse_number(text: &str, origin: &str, key: &str) -> Result<f64, CliError> {
    f64::from_str(text.trim()).map_err(|_| parse_error(origin, format!("{key}: '{}' is not a decimal number", text.trim())))
}

/// Splits `h2` into `("h", 1)`.
fn component(key: &str) -> Option<(&'static str, usize)> {
    let (head, tail) = (key.get(..1)?, key.get(1..)?);
    let name = VECTOR_KEYS.into_iter().find(|&k| k == head)?;
    let index: usize = tail.parse().ok()?;
    (index >= 1).then_some((name, index - 1))
}

impl ParamSet {
    pub fn new() -> Self {
        ParamSet::default()
    }

    /// Parses `key = value` lines; `name` labels error locations.
    pub fn parse_text(text: &str, name: &str) -> Result<Self, CliError> {
        let mut set = ParamSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let origin = format!("{name}:{}", i + 1);
            let Some((key, value)) = line.split_once('=') else {
                return Err(parse_error(&origin, format!("expected 'key = value', got '{line}'")));
            };
            set.insert(key.trim(), value.trim(), &origin)?;
        }
        Ok(set)
    }

    /// Adds one parameter. Rejects unknown and repeated keys.
    pub fn insert(&mut self, key: &str, value: &str, origin: &str) -> Result<(), CliError> {
        let key = if key == "E" { "energy" } else { key };
        if !SCALAR_KEYS.contains(&key) && !VECTOR_KEYS.contains(&key) {
            return Err(parse_error(origin, format!("unknown parameter '{key}'")));
        }
        if value.is_empty() {
            return Err(parse_error(origin, format!("{key}: empty value")));
        }
        if let Some(prev) = self.entries.get(key) {
            return Err(parse_error(
                origin,
                format!("duplicate parameter '{key}' (first given at {})", prev.origin),
            ));
        }
        self.entries.insert(
            key.to_string(),
            Entry {
                value: value.to_string(),
                origin: origin.to_string(),
            },
        );
        Ok(())
    }

    /// Moves every entry of `other` into `self`, rejecting repeats.
    pub fn merge(&mut self, other: ParamSet) -> Result<(), CliError> {
        for (key, e) in other.entries {
            self.insert(&key, &e.value, &e.origin)?;
        }
        Ok(())
    }

    /// Overrides a scalar (`beta`) or a vector component (`t2`).
    pub fn set(&mut self, key: &str, value: f64, origin: &str) -> Result<(), CliError> {
        if let Some((name, index)) = component(key) {
            let mut v = self.vector(name)?.ok_or_else(|| parse_error(origin, format!("'{key}' needs '{name}' to be given")))?;
            if index >= v.len() {
                return Err(parse_error(origin, format!("'{key}' is out of range: '{name}' has {} entries", v.len())));
            }
            v[index] = value;
            let text = v.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
            self.replace(name, text, origin);
            return Ok(());
        }
        if key == "family" || !SCALAR_KEYS.contains(&key) {
            return Err(parse_error(origin, format!("'{key}' cannot be swept")));
        }
        self.replace(key, value.to_string(), origin);
        Ok(())
    }

    fn replace(&mut self, key: &str, value: String, origin: &str) {
        self.entries.insert(
            key.to_string(),
            Entry {
                value,
                origin: origin.to_string(),
            },
        );
    }

    /// The raw values, for echoing into reports.
    pub fn raw(&self) -> BTreeMap<String, String> {
        self.entries.iter().map(|(k, e)| (k.clone(), e.value.clone())).collect()
    }

    fn entry(&self, key: &str) -> Option<&Entry> {
        self.entries.get(key)
    }

    fn scalar(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.entry(key).map(|e| parse_number(&e.value, &e.origin, key)).transpose()
    }

    fn required(&self, key: &str) -> Result<f64, CliError> {
        self.scalar(key)?.ok_or_else(|| parse_error("parameters", format!("missing parameter '{key}'")))
    }

    fn vector(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        self.entry(key)
            .map(|e| e.value.split(',').map(|x| parse_number(x, &e.origin, key)).collect())
            .transpose()
    }

    fn required_vector(&self, key: &str) -> Result<Vec<f64>, CliError> {
        self.vector(key)?.ok_or_else(|| parse_error("parameters", format!("missing parameter '{key}'")))
    }

    fn family_text(&self) -> Result<&Entry, CliError> {
        self.entry("family").ok_or_else(|| parse_error("parameters", "missing parameter 'family'"))
    }

    pub fn family(&self) -> Result<Family, CliError> {
        let e = self.family_text()?;
        Family::from_str(&e.value).map_err(|err| parse_error(&e.origin, err.to_string()))
    }

    /// Model parameters. `energy` defaults to 0; `hypergeom` instead
    /// defaults it to the reducible value.
    pub fn model_params(&self, reducible_default: bool) -> Result<ModelParams, CliError> {
        let family = self.family()?;
        let mut p = ModelParams {
            family,
            q: self.required("q")?,
            h: self.required_vector("h")?,
            l: self.required_vector("l")?,
            t: self.required_vector("t")?,
            alpha1: 0.0,
            alpha2: 0.0,
            beta: 0.0,
            energy: 0.0,
        };
        if family == Family::A4 {
            p.alpha1 = self.required("alpha1")?;
            p.alpha2 = self.required("alpha2")?;
        }
        if family != Family::A2 {
            p.beta = self.required("beta")?;
        }
        p.validate()?;
        p.energy = match self.scalar("energy")? {
            Some(e) => e,
            None if reducible_default && family == Family::A4 => reducible_energy(&p),
            None => 0.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn skeleton(&self) -> Result<VariantSkeleton, CliError> {
        let p = self.model_params(false)?;
        let sk = VariantSkeleton::from_params(&p);
        sk.validate()?;
        Ok(sk)
    }

    pub fn limit_setup(&self) -> Result<LimitSetup, CliError> {
        let e = self.family_text()?;
        let family = LimitFamily::from_str(&e.value).map_err(|err| parse_error(&e.origin, err.to_string()))?;
        let setup = LimitSetup {
            family,
            h: self.required_vector("h")?,
            l: self.required_vector("l")?,
            t: self.required_vector("t")?,
            beta: if family == LimitFamily::FromA3 { self.required("beta")? } else { 0.0 },
            e_tilde: self.scalar("e_tilde")?.unwrap_or(0.0),
        };
        setup.validate()?;
        Ok(setup)
    }
}

/// One axis of a sweep grid: `key=start:stop:step`, both ends included.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SweepAxis {
    pub key: String,
    pub values: Vec<f64>,
}

impl SweepAxis {
    pub fn parse(spec: &str) -> Result<Self, CliError> {
        let origin = format!("--sweep {spec}");
        let (key, range) = spec
            .split_once('=')
            .ok_or_else(|| parse_error(&origin, "expected key=start:stop:step"))?;
        let parts: Vec<&str> = range.split(':').collect();
        let [a, b, step] = parts.as_slice() else {
            return Err(parse_error(&origin, "expected key=start:stop:step"));
        };
        let (a, b, step) = (
            parse_number(a, &origin, key)?,
            parse_number(b, &origin, key)?,
            parse_number(step, &origin, key)?,
        );
        if !(a.is_finite() && b.is_finite() && step.is_finite()) || step <= 0.0 || b < a {
            return Err(parse_error(&origin, "need finite start <= stop and step > 0"));
        }
        // Grid points are start + i*step, so no rounding accumulates.
        let count = ((b - a) / step + 1e-9).floor() as usize + 1;
        if count > 100_000 {
            return Err(parse_error(&origin, format!("{count} grid points exceed the limit of 100000")));
        }
        let key = key.trim();
        if !(SCALAR_KEYS.contains(&key) && key != "family") && component(key).is_none() {
            return Err(parse_error(&origin, format!("'{key}' cannot be swept")));
        }
        Ok(SweepAxis {
            key: key.to_string(),
            values: (0..count).map(|i| a + i as f64 * step).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A3: &str = "family = A3\nq = 2\nh = 0.1, 0.2, 0.3\nl = 0, 0, 0 # comment\nt = 1,2,3\nbeta = 0.5\n";

    #[test]
    fn parses_a_file() {
        let set = ParamSet::parse_text(A3, "f").unwrap();
        let p = set.model_params(false).unwrap();
        assert_eq!(p.family, Family::A3);
        assert_eq!(p.h, vec![0.1, 0.2, 0.3]);
        assert_eq!(p.energy, 0.0);
    }

    #[test]
    fn duplicate_key_names_both_lines() {
        let err = ParamSet::parse_text("q = 2\n\nq = 3\n", "f").unwrap_err();
        let text = err.to_string();
        assert!(text.contains("f:3") && text.contains("f:1"), "{text}");
    }

    #[test]
    fn duplicate_across_sources() {
        let mut set = ParamSet::parse_text("beta = 1\n", "f").unwrap();
        let mut flags = ParamSet::new();
        flags.insert("beta", "2", "--beta").unwrap();
        assert!(set.merge(flags).unwrap_err().to_string().contains("--beta"));
    }

    #[test]
    fn rejects_expressions_and_unknown_keys() {
        let set = ParamSet::parse_text("family = A3\nq = 1/2\n", "f").unwrap();
        assert!(matches!(set.model_params(false), Err(CliError::Parse { .. })));
        assert!(ParamSet::parse_text("gamma = 1\n", "f").is_err());
        assert!(ParamSet::parse_text("q 2\n", "f").is_err());
    }

    #[test]
    fn invariant_violations_are_validation_errors() {
        let set = ParamSet::parse_text(&A3.replace("q = 2", "q = 1"), "f").unwrap();
        let err = set.model_params(false).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("q ≠ 1"));
        let set = ParamSet::parse_text(&A3.replace("t = 1,2,3", "t = 1,0,3"), "f").unwrap();
        assert!(set.model_params(false).unwrap_err().to_string().contains("nonzero t"));
    }

    #[test]
    fn component_override() {
        let mut set = ParamSet::parse_text(A3, "f").unwrap();
        set.set("t2", -4.5, "sweep").unwrap();
        set.set("beta", 1.5, "sweep").unwrap();
        let p = set.model_params(false).unwrap();
        assert_eq!(p.t, vec![1.0, -4.5, 3.0]);
        assert_eq!(p.beta, 1.5);
        assert!(set.set("t4", 1.0, "sweep").is_err());
    }

    #[test]
    fn sweep_axis_includes_both_ends() {
        let ax = SweepAxis::parse("beta=0:4:0.5").unwrap();
        assert_eq!(ax.values.len(), 9);
        assert_eq!(ax.values[8], 4.0);
        assert!(SweepAxis::parse("beta=1:0:0.5").is_err());
        assert!(SweepAxis::parse("family=0:1:1").is_err());
        assert_eq!(SweepAxis::parse("h1=0:1:0.25").unwrap().values.len(), 5);
    }
}
