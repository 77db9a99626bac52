mod common;

use std::f64::consts::PI;

use common::{expr, family, polynomial_source};
use orthodecomp::{
    angle, collinearity_angle, decompose, from_csv, inner_product, integrate, l1_norm, l2_norm,
    project_fluctuation, project_mean, zero_crossings, Expr, FunctionHandle, QuadratureConfig,
    RealFunction,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn light() -> ProptestConfig {
    ProptestConfig::with_cases(24)
}

fn source() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("x".to_string()),
        Just("e".to_string()),
        Just("pi".to_string()),
        (0u32..1000, 0u32..100).prop_map(|(a, b)| format!("{a}.{b}")),
    ];
    leaf.prop_recursive(4, 32, 2, |inner| {
        let binary = (inner.clone(), inner.clone(), 0usize..5).prop_map(|(a, b, op)| {
            let op = ["+", "-", "*", "/", "^"][op];
            format!("({a}){op}({b})")
        });
        let call = (
            inner.clone(),
            prop::sample::select(vec![
                "exp", "ln", "sin", "cos", "tan", "abs", "sqrt", "cbrt",
            ]),
        )
            .prop_map(|(a, f)| format!("{f}({a})"));
        let neg = inner.clone().prop_map(|a| format!("-({a})"));
        let rational = (inner, -5i32..6, 1i32..6).prop_map(|(a, p, q)| format!("({a})^({p}/{q})"));
        prop_oneof![binary, call, neg, rational]
    })
}

proptest! {
    #[test]
    fn display_round_trips(src in source()) {
        let parsed = Expr::parse(&src).unwrap();
        let printed = parsed.to_string();
        prop_assert_eq!(Expr::parse(&printed).unwrap(), parsed, "{}", printed);
    }

    #[test]
    fn evaluation_is_deterministic(src in source(), x in 0.0..=1.0f64) {
        let e = Expr::parse(&src).unwrap();
        match (e.eval(x), e.eval(x)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a.to_bits(), b.to_bits()),
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "outcome differs between calls"),
        }
    }

    #[test]
    fn product_binds_tighter_than_sum(a in -10.0..10.0f64, b in -10.0..10.0f64, x in 0.0..=1.0f64) {
        let e = Expr::parse(&format!("({a})+({b})*x")).unwrap();
        prop_assert_eq!(e.eval(x).unwrap(), a + b * x);
    }

    #[test]
    fn rational_power_takes_real_root(c in 0.1..0.9f64, x in 0.0..=1.0f64) {
        let signed = Expr::parse(&format!("(x - {c})^(2/3)")).unwrap();
        let folded = Expr::parse(&format!("abs(x - {c})^(2/3)")).unwrap();
        let (a, b) = (signed.eval(x).unwrap(), folded.eval(x).unwrap());
        prop_assert!((a - b).abs() <= 1e-15 * b.abs().max(1.0));
    }

    #[test]
    fn shifted_matches_pointwise(seed in any::<u64>(), offset in -5.0..5.0f64, x in 0.0..=1.0f64) {
        for m in family(seed).iter().take(4) {
            let shifted = m.f.shifted(offset);
            prop_assert_eq!(shifted.value_at(x).unwrap(), m.f.value_at(x).unwrap() + offset);
        }
    }

    #[test]
    fn sampled_grid_is_exact_at_knots(ys in prop::collection::vec(-100.0..100.0f64, 2..40)) {
        let n = ys.len() - 1;
        let rows: Vec<(f64, f64)> = ys.iter().enumerate().map(|(i, &y)| (i as f64 / n as f64, y)).collect();
        let f = from_csv(&rows).unwrap();
        for &(x, y) in &rows {
            prop_assert_eq!(f.value_at(x).unwrap(), y);
        }
    }

    #[test]
    fn merged_breakpoints_are_normalized(cs in prop::collection::vec(0.01..0.99f64, 1..6), extra in prop::collection::vec(0.01..0.99f64, 0..4)) {
        let src = cs.iter().map(|c| format!("abs(x - {c})")).collect::<Vec<_>>().join(" + ");
        let points = expr(&src).merged_breakpoints(&extra).unwrap();
        prop_assert!(points.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(points.iter().all(|&p| p > 0.0 && p < 1.0));
    }
}

proptest! {
    #![proptest_config(light())]

    #[test]
    fn integral_is_additive(seed in any::<u64>(), c in 0.05..0.95f64) {
        let q = cfg();
        for m in family(seed) {
            let whole = integrate(&m.f, 0.0, 1.0, &q).unwrap().value;
            let left = integrate(&m.f, 0.0, c, &q).unwrap().value;
            let right = integrate(&m.f, c, 1.0, &q).unwrap().value;
            let tol = 2.0 * q.abs_tol;
            prop_assert!((left + right - whole).abs() <= tol, "{}: {}", m.name, left + right - whole);
        }
    }

    #[test]
    fn integral_is_linear(seed in any::<u64>(), alpha in -10.0..10.0f64, beta in -10.0..10.0f64) {
        let q = cfg();
        let members = family(seed);
        let (f, g) = (&members[0].f, &members[15].f);
        let combo = f.scaled(alpha).sum(&g.scaled(beta));
        let lhs = integrate(&combo, 0.0, 1.0, &q).unwrap().value;
        let rhs = alpha * integrate(f, 0.0, 1.0, &q).unwrap().value
            + beta * integrate(g, 0.0, 1.0, &q).unwrap().value;
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()), "{lhs} vs {rhs}");
    }

    #[test]
    fn polynomials_integrate_exactly(coeffs in prop::collection::vec(-3.0..3.0f64, 11)) {
        let f = expr(&polynomial_source(&coeffs));
        let exact: f64 = coeffs.iter().enumerate().map(|(k, c)| c / (k as f64 + 1.0)).sum();
        let got = integrate(&f, 0.0, 1.0, &cfg()).unwrap().value;
        prop_assert!((got - exact).abs() <= 1e-12, "{got} vs {exact}");
    }

    #[test]
    fn l1_is_bounded_by_l2(seed in any::<u64>()) {
        let q = cfg();
        for m in family(seed) {
            let l1 = l1_norm(&m.f, &q).unwrap();
            let l2 = l2_norm(&m.f, &q).unwrap();
            prop_assert!(l1 <= l2 + 1e-9, "{}: {l1} > {l2}", m.name);
        }
    }

    #[test]
    fn inner_product_is_symmetric_and_bounded(seed in any::<u64>()) {
        let q = cfg();
        let members = family(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..6 {
            let f = &members[rng.gen_range(0..members.len())].f;
            let g = &members[rng.gen_range(0..members.len())].f;
            let fg = inner_product(f, g, &q).unwrap();
            let gf = inner_product(g, f, &q).unwrap();
            prop_assert!((fg - gf).abs() <= 2.0 * q.abs_tol);
            let bound = l2_norm(f, &q).unwrap() * l2_norm(g, &q).unwrap();
            prop_assert!(fg.abs() <= bound + 4.0 * q.abs_tol, "{fg} > {bound}");
        }
    }

    #[test]
    fn collinear_angle_is_zero_or_pi(seed in any::<u64>(), magnitude in 0.1..10.0f64, negative in any::<bool>()) {
        let q = cfg();
        let lambda = if negative { -magnitude } else { magnitude };
        let want = collinearity_angle(lambda).unwrap();
        for m in family(seed).iter().step_by(3) {
            let theta = angle(&m.f, &m.f.scaled(lambda), &q).unwrap().theta_radians;
            prop_assert!((theta - want).abs() <= 1e-6, "{}: {theta}", m.name);
        }
    }

    #[test]
    fn mean_and_fluctuation_are_perpendicular(seed in any::<u64>()) {
        let q = cfg();
        for m in family(seed).iter().step_by(2) {
            let mean = project_mean(&m.f, &q).unwrap();
            let fluct = project_fluctuation(&m.f, &q).unwrap();
            if mean.abs() < 1e-6 || l2_norm(&fluct, &q).unwrap() < 1e-6 {
                continue;
            }
            let theta = angle(&FunctionHandle::constant(mean), &fluct, &q).unwrap().theta_radians;
            prop_assert!((theta - PI / 2.0).abs() <= 1e-6, "{}: {theta}", m.name);
        }
    }

    #[test]
    fn reconstruction_is_bit_exact(seed in any::<u64>()) {
        let q = cfg();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for m in family(seed).iter().step_by(4) {
            let d = decompose(&m.f, &q).unwrap();
            for _ in 0..200 {
                let x: f64 = rng.gen_range(0.0..=1.0);
                let f = m.f.value_at(x).unwrap();
                prop_assert_eq!(d.fluctuation.value_at(x).unwrap(), f - d.mean);
            }
        }
    }

    #[test]
    fn smooth_fluctuations_cross_zero(seed in any::<u64>()) {
        let q = cfg();
        for m in family(seed).iter().filter(|m| m.smooth) {
            let fluct = project_fluctuation(&m.f, &q).unwrap();
            if l2_norm(&fluct, &q).unwrap() < 1e-9 {
                continue;
            }
            let zeros = zero_crossings(&m.f, &q, 1024).unwrap();
            prop_assert!(!zeros.zeros.is_empty(), "{}", m.name);
        }
    }
}
