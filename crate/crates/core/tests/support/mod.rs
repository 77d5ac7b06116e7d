//! Strategies and property bodies shared by the property and acceptance suites.
#![allow(dead_code)]

use std::f64::consts::PI;
use std::path::Path;

use partition_harmonics::quadrature::{exact_mean_half_pi, trapezoid_mean};
use partition_harmonics::{build_kernel, evaluate_kernel_direct, Basis, Dyadic, TrigPoly};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const CASES: u32 = 1000;
pub const EVALUATOR_TOLERANCE: f64 = 1e-8;
pub const TRAPEZOID_RELATIVE_TOLERANCE: f64 = 1e-10;
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;

fn arb_coeff() -> impl Strategy<Value = Dyadic> {
    (-1000i64..=1000, 0u32..4).prop_map(|(n, e)| Dyadic::new(n.into(), e))
}

fn arb_basis() -> impl Strategy<Value = Basis> {
    prop_oneof![Just(Basis::Cos), Just(Basis::Sin)]
}

/// Mixed sine/cosine polynomial with up to 6 terms and frequencies below 24.
pub fn arb_poly() -> impl Strategy<Value = TrigPoly> {
    prop::collection::vec((arb_basis(), 0u64..24, arb_coeff()), 0..6).prop_map(TrigPoly::from_terms)
}

pub fn arb_cos_poly() -> impl Strategy<Value = TrigPoly> {
    prop::collection::vec((0u64..40, arb_coeff()), 0..10)
        .prop_map(|t| TrigPoly::from_terms(t.into_iter().map(|(n, c)| (Basis::Cos, n, c))))
}

/// Cosine polynomial with even frequencies only, up to 120.
pub fn arb_even_cos_poly() -> impl Strategy<Value = TrigPoly> {
    prop::collection::vec((0u64..=60, arb_coeff()), 1..12)
        .prop_map(|t| TrigPoly::from_terms(t.into_iter().map(|(n, c)| (Basis::Cos, 2 * n, c))))
}

pub fn ring_laws(a: &TrigPoly, b: &TrigPoly, c: &TrigPoly) -> Result<(), TestCaseError> {
    prop_assert_eq!(a.mul(b), b.mul(a));
    prop_assert_eq!(a.mul(b).mul(c), a.mul(&b.mul(c)));
    prop_assert_eq!(a.mul(&b.add(c)), a.mul(b).add(&a.mul(c)));
    prop_assert_eq!(a.add(b), b.add(a));
    prop_assert!(a.sub(a).is_zero());
    prop_assert_eq!(a.mul(&TrigPoly::constant(1)), a.clone());
    Ok(())
}

pub fn divide_round_trip(q: &TrigPoly, m: u64) -> Result<(), TestCaseError> {
    let product = q.mul(&TrigPoly::sin_term(m, 1));
    let back = product
        .divide_by_sin(m)
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(&back, q);
    Ok(())
}

/// Direct product of sine ratios against the exact series at `x`.
pub fn evaluator_agreement(s: u32, x: f64) -> Result<(), TestCaseError> {
    let kernel = build_kernel(s).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let series = kernel.series().eval(x);
    let direct = evaluate_kernel_direct(s, x, 1e-9);
    prop_assert!(
        (series - direct).abs() < EVALUATOR_TOLERANCE,
        "s={} x={} series={} direct={}",
        s,
        x,
        series,
        direct
    );
    Ok(())
}

/// Trapezoid mean with `F/2 + 2` nodes equals the exact constant term; the
/// integrand is π-periodic and symmetric about π/2 at every sample.
pub fn trapezoid_exactness(p: &TrigPoly, samples: &[f64]) -> Result<(), TestCaseError> {
    let f = p.max_frequency().unwrap_or(0);
    let nodes = (f / 2 + 2) as usize;
    let quad = trapezoid_mean(|x| p.eval(x), nodes);
    let exact = exact_mean_half_pi(p)
        .expect("even cosine polynomial")
        .to_f64();
    let scale: f64 = p
        .cos_terms()
        .map(|(_, c)| c.to_f64().abs())
        .sum::<f64>()
        .max(1.0);
    prop_assert!(
        (quad - exact).abs() <= TRAPEZOID_RELATIVE_TOLERANCE * scale,
        "quad={} exact={} nodes={}",
        quad,
        exact,
        nodes
    );
    for &x in samples {
        let v = p.eval(x);
        let tol = SYMMETRY_TOLERANCE * scale;
        prop_assert!(
            (p.eval(PI - x) - v).abs() <= tol,
            "f(pi - x) != f(x) at {}",
            x
        );
        prop_assert!(
            (p.eval(x + PI) - v).abs() <= tol,
            "f(x + pi) != f(x) at {}",
            x
        );
    }
    Ok(())
}

pub fn samples() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..PI, 100)
}

/// Reference halved kernel coefficients, one order per line: `s: n:c n:c …`.
pub fn golden_kernels() -> Vec<(u32, Vec<(u64, i64)>)> {
    let path =
        Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/kernel_halved_coefficients.txt");
    let text = std::fs::read_to_string(path).expect("fixture");
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let (s, rest) = line.split_once(':').unwrap();
            let terms = rest
                .split_whitespace()
                .map(|t| {
                    let (n, c) = t.split_once(':').unwrap();
                    (n.parse().unwrap(), c.parse().unwrap())
                })
                .collect();
            (s.trim().parse().unwrap(), terms)
        })
        .collect()
}
