//! Random parameter generators shared by the integration tests.

#![allow(dead_code)]

use qheun::degeneration::{LimitFamily, LimitSetup};
use qheun::{Family, ModelParams};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_q(r: &mut ChaCha8Rng) -> f64 {
    if r.gen_bool(0.5) {
        r.gen_range(0.3..0.9)
    } else {
        r.gen_range(1.1..3.0)
    }
}

pub fn nonzero(r: &mut ChaCha8Rng) -> f64 {
    let m = r.gen_range(0.5..2.0);
    if r.gen_bool(0.5) {
        m
    } else {
        -m
    }
}

fn vec_in(r: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| r.gen_range(lo..hi)).collect()
}

/// Distinct nonzero positions with pairwise gaps of at least 0.3.
pub fn distinct_points(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let t: Vec<f64> = (0..n).map(|_| nonzero(r)).collect();
        let ok = (0..n).all(|i| (i + 1..n).all(|j| (t[i] - t[j]).abs() > 0.3));
        if ok {
            return t;
        }
    }
}

pub fn random_params(r: &mut ChaCha8Rng, family: Family) -> ModelParams {
    let n = family.arity();
    ModelParams {
        family,
        q: random_q(r),
        h: vec_in(r, n, -1.0, 1.0),
        l: vec_in(r, n, -1.0, 1.0),
        t: (0..n).map(|_| nonzero(r)).collect(),
        alpha1: if family == Family::A4 { r.gen_range(-1.0..1.0) } else { 0.0 },
        alpha2: if family == Family::A4 { r.gen_range(-1.0..1.0) } else { 0.0 },
        beta: if family == Family::A2 { 0.0 } else { r.gen_range(0.1..2.0) },
        energy: r.gen_range(-3.0..3.0),
    }
}

pub fn random_setup(r: &mut ChaCha8Rng, family: LimitFamily) -> LimitSetup {
    let n = family.arity();
    LimitSetup {
        family,
        h: vec_in(r, n, -0.5, 0.5),
        l: vec_in(r, n, -0.5, 0.5),
        t: distinct_points(r, n),
        beta: if family == LimitFamily::FromA3 { r.gen_range(0.2..1.5) } else { 0.0 },
        e_tilde: r.gen_range(-2.0..2.0),
    }
}

pub const FAMILIES: [Family; 3] = [Family::A4, Family::A3, Family::A2];

/// `|a - b| <= rel * max(1, |b|)`.
pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(1.0)
}
