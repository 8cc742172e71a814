use std::collections::BTreeMap;

use nncalc::bell::{HiddenVariableModel, Outcome};
use nncalc::bijection::cantor_value;
use nncalc::{
    chsh, nn_add, nn_expectation, nn_mul, nn_sub, quasi_arithmetic_mean, Bijection, ChshSettings, Distribution,
};
use proptest::prelude::*;

fn smooth_catalog() -> Vec<Bijection> {
    Bijection::catalog().into_iter().filter(|f| f.is_strictly_increasing()).collect()
}

/// Maps `u` in (0, 1) to a point well inside `f`'s domain.
fn inside(f: &Bijection, u: f64) -> f64 {
    match f.name() {
        "arctanh" => -0.99 + 1.98 * u,
        "log" | "reciprocal" => 0.01 + 20.0 * u,
        _ => -5.0 + 10.0 * u,
    }
}

proptest! {
    #[test]
    fn strictly_increasing(u in 0.0..1.0f64, v in 0.0..1.0f64) {
        prop_assume!((u - v).abs() > 1e-6);
        for f in smooth_catalog() {
            let (x, y) = (inside(&f, u.min(v)), inside(&f, u.max(v)));
            prop_assert!(f.forward(x).unwrap() < f.forward(y).unwrap(), "{} at {} {}", f, x, y);
        }
    }

    #[test]
    fn round_trip(u in 0.0..1.0f64) {
        for f in smooth_catalog() {
            let x = inside(&f, u);
            let back = f.inverse(f.forward(x).unwrap()).unwrap();
            prop_assert!((back - x).abs() < 1e-10 * x.abs().max(1.0), "{}: {} -> {}", f, x, back);
        }
    }

    #[test]
    fn cantor_symmetry_and_scaling(x in 0.0..=1.0f64, depth in 8u32..=48) {
        let tol = 2f64.powi(-(depth as i32) + 2);
        let c = |t: f64| cantor_value(t, depth).unwrap();
        prop_assert!((c(x) + c(1.0 - x) - 1.0).abs() <= tol);
        prop_assert!((c(x / 3.0) - c(x) / 2.0).abs() <= tol);
    }

    #[test]
    fn cantor_monotone(x in 0.0..1.0f64, dx in 0.0..0.1f64) {
        let y = (x + dx).min(1.0);
        prop_assert!(cantor_value(x, 48).unwrap() <= cantor_value(y, 48).unwrap());
    }

    #[test]
    fn induced_addition_commutes_and_subtracts(a in -0.95..0.95f64, b in -0.95..0.95f64) {
        let f: Bijection = "arctanh".parse().unwrap();
        let s = nn_add(a, b, &f).unwrap();
        prop_assert_eq!(s, nn_add(b, a, &f).unwrap());
        prop_assert!(s.abs() < 1.0);
        prop_assert!((nn_sub(s, b, &f).unwrap() - a).abs() < 1e-9);
    }

    #[test]
    fn quasi_mean_is_between_extremes(values in prop::collection::vec(0.1..50.0f64, 1..8)) {
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for text in ["identity", "log", "reciprocal", "exp", "power:n=3"] {
            let f: Bijection = text.parse().unwrap();
            let m = quasi_arithmetic_mean(&f, &values, None).unwrap();
            prop_assert!(m >= lo * (1.0 - 1e-12) && m <= hi * (1.0 + 1e-12), "{}: {} not in [{}, {}]", text, m, lo, hi);
        }
    }

    #[test]
    fn identity_entropy_is_shannon(raw in prop::collection::vec(0.01..1.0f64, 2..8)) {
        let total: f64 = raw.iter().sum();
        let d = Distribution::normalized(raw.iter().map(|w| w / total).collect()).unwrap();
        let s = nncalc::nn_entropy(&d, &Bijection::identity()).unwrap();
        let shannon: f64 = d.probabilities().iter().map(|&p| -p * p.ln()).sum();
        prop_assert!((s - shannon).abs() < 1e-12);
        prop_assert!(s <= (d.len() as f64).ln() + 1e-12);
    }

    #[test]
    fn spec_text_round_trips(n in 0u32..6, a in 0.1..10.0f64, b in -5.0..5.0f64, depth in 1u32..200) {
        for text in [format!("power:n={}", 2 * n + 1), format!("linear:a={a},b={b}"), format!("cantor:depth={depth}")] {
            let f: Bijection = text.parse().unwrap();
            let again: Bijection = f.to_string().parse().unwrap();
            prop_assert_eq!(f, again);
        }
    }

    #[test]
    fn odd_powers_fix_plus_minus_one(n in 0u32..5, a in prop::bool::ANY, b in prop::bool::ANY) {
        let f = Bijection::power(2 * n + 1).unwrap();
        let s = |t: bool| if t { 1.0 } else { -1.0 };
        prop_assert_eq!(nn_mul(s(a), s(b), &f).unwrap(), s(a) * s(b));
    }

    #[test]
    fn setting_independent_models_obey_chsh(
        raw in prop::collection::vec(0.01..1.0f64, 4),
        signs in prop::collection::vec(prop::bool::ANY, 16),
    ) {
        let total: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let sum: f64 = weights.iter().sum();
        let mut weights = weights;
        weights[0] += 1.0 - sum;
        let outcome = |i: usize| if signs[i] { Outcome::Plus } else { Outcome::Minus };
        let row = |k: usize| (0..4).map(|l| outcome(4 * k + l)).collect::<Vec<_>>();
        let names = ["a", "a_prime", "b", "b_prime"].map(String::from);
        let outcomes_a = BTreeMap::from([(names[0].clone(), row(0)), (names[1].clone(), row(1))]);
        let outcomes_b = BTreeMap::from([(names[2].clone(), row(2)), (names[3].clone(), row(3))]);
        let mut rho = BTreeMap::new();
        for a in &names[..2] {
            for b in &names[2..] {
                rho.insert((a.clone(), b.clone()), weights.clone());
            }
        }
        let lambdas = (0..4).map(|l| format!("l{l}")).collect();
        let model = HiddenVariableModel::new(lambdas, outcomes_a, outcomes_b, rho).unwrap();
        let s = ChshSettings::default();
        let identity = Bijection::identity();
        let cubic = Bijection::power(3).unwrap();
        let value = chsh(&model, &s, &identity).unwrap();
        prop_assert!(value.abs() <= 2.0 + 1e-12);
        prop_assert_eq!(value, chsh(&model, &s, &cubic).unwrap());
        prop_assert!(nn_expectation(&model, "a", "b", &identity).unwrap().abs() <= 1.0 + 1e-12);
    }
}

#[test]
fn closure_witnesses_reproduce() {
    let unit = nncalc::Interval::symmetric_unit();
    for f in Bijection::catalog() {
        let finding = nncalc::audit::closure_probe(&f, &unit, 200, 9);
        if finding.verdict != nncalc::Verdict::Fail {
            continue;
        }
        let a = finding.witness_value("a").unwrap();
        let b = finding.witness_value("b").unwrap();
        match nn_add(a, b, &f) {
            Ok(v) => assert!(!unit.contains(v), "{f}: {a} (+) {b} = {v}"),
            Err(e) => assert!(matches!(e, nncalc::Error::Closure { .. }), "{f}: {e}"),
        }
    }
}
