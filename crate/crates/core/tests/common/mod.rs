#![allow(dead_code)]

use std::collections::BTreeMap;

use orthodecomp::{from_csv, from_expression, FunctionHandle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Member {
    pub name: String,
    pub f: FunctionHandle,
    /// Continuously differentiable on [0, 1].
    pub smooth: bool,
}

pub fn expr(src: &str) -> FunctionHandle {
    from_expression(src, &BTreeMap::new()).unwrap_or_else(|e| panic!("{src}: {e}"))
}

fn member(src: String, smooth: bool) -> Member {
    Member {
        f: expr(&src),
        name: src,
        smooth,
    }
}

pub fn polynomial_source(coeffs: &[f64]) -> String {
    coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| match k {
            0 => format!("({c})"),
            1 => format!("({c})*x"),
            _ => format!("({c})*x^{k}"),
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn step_function() -> FunctionHandle {
    from_csv(&[(0.0, 1.0), (0.5, 1.0), (0.5001, -1.0), (1.0, -1.0)]).unwrap()
}

/// Random polynomials of degree <= 6, e^{γx} with γ in [-3, 3], cos γx, |x - c| and
/// (x - c)^{2/3} with c in (0.1, 0.9), plus one sampled step function.
pub fn family(seed: u64) -> Vec<Member> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..5 {
        let degree = rng.gen_range(1..=6);
        let coeffs: Vec<f64> = (0..=degree).map(|_| rng.gen_range(-3.0..3.0)).collect();
        out.push(member(polynomial_source(&coeffs), true));
    }
    for _ in 0..4 {
        let g: f64 = rng.gen_range(-3.0..3.0);
        out.push(member(format!("exp(({g})*x)"), true));
    }
    for _ in 0..4 {
        let g: f64 = rng.gen_range(0.5..10.0);
        out.push(member(format!("cos(({g})*x)"), true));
    }
    for _ in 0..3 {
        let c: f64 = rng.gen_range(0.1..0.9);
        out.push(member(format!("abs(x - {c})"), false));
    }
    for _ in 0..3 {
        let c: f64 = rng.gen_range(0.1..0.9);
        out.push(member(format!("(x - {c})^(2/3)"), false));
    }
    out.push(Member {
        name: "csv step".into(),
        f: step_function(),
        smooth: false,
    });
    out
}
