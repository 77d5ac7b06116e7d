//! Acceptance criteria 1–11. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

mod support;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use partition_harmonics::partitions::THIRD_TERM_ROWS;
use partition_harmonics::{
    build_kernel, build_kernels, central_binomial, expected_term_count, extract_tail, integrate,
    integrate_full, integrate_general, integrate_reduced, kernel_at_half_pi, kernel_at_zero,
    partitions_enumerate, partitions_euler, term_count, third_term_coefficient,
    third_term_row_check, vanishing_moment, verify_decomposition, verify_leading_product,
    Evaluator, Form, QuadratureSpec,
};
use proptest::strategy::Strategy;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use support::*;

const RESIDUAL: f64 = 1e-6;
const AVERAGE: f64 = 1e-8;
const MOMENT: f64 = 1e-8;

type Outcome = Result<(), String>;
type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Outcome {
    ensure(elapsed < limit, || {
        format!("took {elapsed:?}, limit {limit:?}")
    })
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let start = Instant::now();
    let r = f();
    let elapsed = start.elapsed();
    let r = r.and_then(|()| limit.map_or(Ok(()), |l| within(elapsed, l)));
    (r, elapsed)
}

fn c1_partition_values() -> Outcome {
    let expected = [1u32, 2, 3, 5, 7, 11, 15, 22, 30, 42];
    let table = partitions_euler(10);
    for (i, &p) in expected.iter().enumerate() {
        let n = i + 1;
        ensure(table.values[n] == BigInt::from(p), || {
            format!("euler p{n} = {}", table.values[n])
        })?;
        let e = partitions_enumerate(n as u32).map_err(|e| e.to_string())?;
        ensure(e == u64::from(p), || format!("enumerated p{n} = {e}"))?;
    }
    Ok(())
}

fn c2_kernel_golden() -> Outcome {
    let golden = golden_kernels();
    ensure(golden.len() == 10, || {
        format!("fixture has {} orders", golden.len())
    })?;
    for (s, terms) in golden {
        let k = build_kernel(s).map_err(|e| e.to_string())?;
        let got: Vec<(u64, i64)> = k
            .coefficients()
            .into_iter()
            .map(|(n, c)| (n, i64::try_from(c).unwrap() / 2))
            .collect();
        ensure(got == terms, || format!("s={s}: got {got:?}"))?;
        ensure(
            k.coefficients()
                .iter()
                .all(|(_, c)| c % 2 == BigInt::from(0)),
            || format!("s={s}: odd coefficient"),
        )?;
    }
    Ok(())
}

fn c3_endpoints() -> Outcome {
    for k in build_kernels(30).map_err(|e| e.to_string())? {
        let s = k.order();
        ensure(kernel_at_zero(&k) == central_binomial(s), || {
            format!("s={s}: D(0)")
        })?;
        let half = if s % 2 == 0 {
            central_binomial(s / 2)
        } else {
            BigInt::from(0)
        };
        ensure(kernel_at_half_pi(&k) == half, || {
            format!("s={s}: D(pi/2) = {}", kernel_at_half_pi(&k))
        })?;
        ensure(term_count(&k) == expected_term_count(s), || {
            format!("s={s}: term count {}", term_count(&k))
        })?;
    }
    Ok(())
}

fn c4_tail() -> Outcome {
    let table = partitions_euler(40);
    for k in build_kernels(40).map_err(|e| e.to_string())?.iter().skip(2) {
        let s = k.order() as usize;
        let tail = extract_tail(k).map_err(|e| e.to_string())?;
        ensure(tail.coeffs == table.values[..=s], || {
            format!("s={s}: tail {:?}", tail.coeffs)
        })?;
    }
    Ok(())
}

fn c5_reduced_and_forms() -> Outcome {
    let table = partitions_euler(12);
    for evaluator in [Evaluator::Direct, Evaluator::Series] {
        let spec = QuadratureSpec::default().with_evaluator(evaluator);
        for s in 1..=12u32 {
            let p = i64::try_from(&table.values[s as usize]).unwrap();
            let r = integrate_reduced(s, &spec).map_err(|e| e.to_string())?;
            ensure(r.rounded == p && r.residual < RESIDUAL, || {
                format!(
                    "{evaluator} reduced s={s}: {} (residual {:e})",
                    r.raw, r.residual
                )
            })?;
            let sin = integrate(Form::Sin, s, &spec).map_err(|e| e.to_string())?;
            let cos = integrate(Form::Cos, s, &spec).map_err(|e| e.to_string())?;
            ensure(sin.rounded == p && cos.rounded == p, || {
                format!("{evaluator} s={s}: sin {} cos {}", sin.raw, cos.raw)
            })?;
            let gap = ((sin.raw + cos.raw) / 2.0 - r.raw).abs();
            ensure(gap < AVERAGE, || {
                format!("{evaluator} s={s}: average gap {gap:e}")
            })?;
        }
    }
    Ok(())
}

fn c6_general_grid() -> Outcome {
    let table = partitions_euler(8);
    let spec = QuadratureSpec::default();
    for s in 1..=8u32 {
        let p = i64::try_from(&table.values[s as usize]).unwrap();
        for m in 0..=5 {
            let r = integrate_general(s, m, &spec).map_err(|e| e.to_string())?;
            ensure(r.rounded == p && r.residual < RESIDUAL, || {
                format!("s={s} m={m}: {} (residual {:e})", r.raw, r.residual)
            })?;
        }
    }
    Ok(())
}

fn c7_full() -> Outcome {
    let table = partitions_euler(8);
    let spec = QuadratureSpec::default();
    for s in 1..=8u32 {
        let p = i64::try_from(&table.values[s as usize]).unwrap();
        let r = integrate_full(s, &spec).map_err(|e| e.to_string())?;
        ensure(r.rounded == p && r.residual < RESIDUAL, || {
            format!("s={s}: {} (residual {:e})", r.raw, r.residual)
        })?;
    }
    Ok(())
}

fn c8_moments() -> Outcome {
    let spec = QuadratureSpec::default();
    for s in 1..=10u32 {
        for offset in (2..=20u64).step_by(2) {
            let v = vanishing_moment(s, offset, &spec).map_err(|e| e.to_string())?;
            ensure(v.abs() < MOMENT, || format!("s={s} offset={offset}: {v:e}"))?;
        }
    }
    Ok(())
}

fn c9_section4() -> Outcome {
    for s in 3..=20 {
        for r in [verify_decomposition(s), verify_leading_product(s)] {
            let r = r.map_err(|e| e.to_string())?;
            ensure(r.passed, || {
                let first = r
                    .failures()
                    .next()
                    .map(|w| format!("{w:?}"))
                    .unwrap_or_default();
                format!("{r}: {first}")
            })?;
        }
    }
    for (lo, hi, _) in THIRD_TERM_ROWS {
        for s in lo..=hi {
            let r = third_term_row_check(s).map_err(|e| e.to_string())?;
            ensure(r.passed, || format!("{r}"))?;
        }
    }
    for k in 2..=60 {
        let v = third_term_coefficient(k).map_err(|e| e.to_string())?;
        ensure(v == BigInt::from(1), || format!("k={k}: {v}"))?;
    }
    Ok(())
}

fn c10_oracles() -> Outcome {
    let table = partitions_euler(30);
    for n in 0..=30u32 {
        let e = partitions_enumerate(n).map_err(|e| e.to_string())?;
        ensure(table.values[n as usize] == BigInt::from(e), || {
            format!("n={n}: {e}")
        })?;
    }
    Ok(())
}

fn property<S: Strategy>(
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Outcome {
    let config = Config {
        failure_persistence: None,
        ..Config::with_cases(CASES)
    };
    TestRunner::new(config)
        .run(&strategy, test)
        .map_err(|e| format!("{name}: {e}"))
}

fn c11_properties() -> Outcome {
    property(
        "ring laws",
        (arb_poly(), arb_poly(), arb_poly()),
        |(a, b, c)| ring_laws(&a, &b, &c),
    )?;
    property("divide round trip", (arb_cos_poly(), 1u64..30), |(q, m)| {
        divide_round_trip(&q, m)
    })?;
    property("evaluator agreement", (1u32..=12, 0.0..PI), |(s, x)| {
        evaluator_agreement(s, x)
    })?;
    property(
        "trapezoid exactness",
        (arb_even_cos_poly(), samples()),
        |(p, xs)| trapezoid_exactness(&p, &xs),
    )
}

fn main() {
    let secs = Duration::from_secs_f64;
    let criteria: [Criterion; 11] = [
        (
            "partition values p1..p10",
            Some(secs(0.1)),
            c1_partition_values,
        ),
        (
            "kernel coefficient vectors s=1..10",
            Some(secs(1.0)),
            c2_kernel_golden,
        ),
        (
            "kernel endpoints and term counts s=1..30",
            Some(secs(10.0)),
            c3_endpoints,
        ),
        ("tail equals p0..ps for s=3..40", Some(secs(60.0)), c4_tail),
        (
            "reduced, sin and cos integrals s=1..12",
            None,
            c5_reduced_and_forms,
        ),
        ("generalized integral s<=8, m<=5", None, c6_general_grid),
        ("full representation s=1..8", None, c7_full),
        (
            "vanishing moments s<=10, even offsets 2..20",
            None,
            c8_moments,
        ),
        (
            "numerator/denominator identities s=3..20",
            Some(secs(60.0)),
            c9_section4,
        ),
        (
            "enumeration equals Euler recurrence n=0..30",
            None,
            c10_oracles,
        ),
        ("property suites at 1000 cases each", None, c11_properties),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let (outcome, elapsed) = timed(limit, run);
        match outcome {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({elapsed:.2?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!(
                    "criterion {:>2}: FAIL  {name} ({elapsed:.2?}): {msg}",
                    i + 1
                );
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
