//! Verification suites run by `verify` and the acceptance tests.
//!
//! Each suite returns one [`VerificationReport`] per subject. Work is spread
//! over rayon; results keep their input order.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{
    build_kernel, build_kernels, central_binomial, expected_term_count, KernelSeries,
};
use crate::partitions::{
    partitions_enumerate, partitions_euler, third_term_coefficient, third_term_row_check,
    THIRD_TERM_ROWS,
};
use crate::quadrature::{
    exact_value, integrate, vanishing_moment, Evaluator, Form, QuadratureSpec, Rule,
};
use crate::report::VerificationReport;
use crate::tail::{verify_decomposition, verify_leading_product};

pub const KERNEL_SUITE_MAX: u32 = 30;
pub const TAIL_SUITE_MAX: u32 = 40;
pub const SECTION4_SUITE_MAX: u32 = 20;
pub const QUADRATURE_SUITE_MAX: u32 = 12;
pub const FULL_FORM_MAX: u32 = 8;
pub const GRID_MAX_S: u32 = 8;
pub const GRID_MAX_M: u32 = 5;
pub const MOMENT_SUITE_MAX: u32 = 10;
pub const MOMENT_MAX_OFFSET: u64 = 20;
pub const ORACLE_MAX_N: u32 = 30;
pub const THIRD_TERM_MAX_INDEX: usize = 60;

/// Residual bound for a quadrature value to count as `p_s`.
pub const RESIDUAL_TOLERANCE: f64 = 1e-6;
/// Bound on `|mean(sin, cos) − reduced|`.
pub const AVERAGE_TOLERANCE: f64 = 1e-8;
/// Bound on a vanishing moment.
pub const MOMENT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Kernel,
    Tail,
    Section4,
    Quadrature,
    Grid,
    Moments,
    Oracles,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Kernel,
        Suite::Tail,
        Suite::Section4,
        Suite::Quadrature,
        Suite::Grid,
        Suite::Moments,
        Suite::Oracles,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Kernel => "kernel",
            Suite::Tail => "tail",
            Suite::Section4 => "section4",
            Suite::Quadrature => "quadrature",
            Suite::Grid => "grid",
            Suite::Moments => "moments",
            Suite::Oracles => "oracles",
        }
    }

    /// Largest order the suite visits when uncapped.
    pub fn default_max(self) -> u32 {
        match self {
            Suite::Kernel => KERNEL_SUITE_MAX,
            Suite::Tail => TAIL_SUITE_MAX,
            Suite::Section4 => SECTION4_SUITE_MAX,
            Suite::Quadrature => QUADRATURE_SUITE_MAX,
            Suite::Grid => GRID_MAX_S,
            Suite::Moments => MOMENT_SUITE_MAX,
            Suite::Oracles => ORACLE_MAX_N,
        }
    }

    /// Runs the suite up to `min(max_s, default_max)`.
    pub fn run(self, max_s: Option<u32>, spec: &QuadratureSpec) -> Result<Vec<VerificationReport>> {
        let cap = max_s.map_or(self.default_max(), |m| m.min(self.default_max()));
        match self {
            Suite::Kernel => kernel_suite(cap),
            Suite::Tail => tail_suite(cap),
            Suite::Section4 => section4_suite(cap),
            Suite::Quadrature => quadrature_suite(cap, spec),
            Suite::Grid => grid_suite(cap, GRID_MAX_M, spec),
            Suite::Moments => moment_suite(cap, spec),
            Suite::Oracles => oracle_suite(self.default_max()),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite '{s}'")))
    }
}

/// Every suite in order.
pub fn run_all(max_s: Option<u32>, spec: &QuadratureSpec) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for suite in Suite::ALL {
        out.extend(suite.run(max_s, spec)?);
    }
    Ok(out)
}

pub fn all_passed(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.passed)
}

/// Structural checks on `D_1 … D_max`.
pub fn kernel_suite(max: u32) -> Result<Vec<VerificationReport>> {
    let kernels = build_kernels(max)?;
    Ok(kernels.par_iter().map(kernel_report).collect())
}

fn kernel_report(k: &KernelSeries) -> VerificationReport {
    let s = k.order();
    let mut r = VerificationReport::new("kernel-invariants", format!("s={s}"));
    match k.check_invariants() {
        Ok(()) => r.check("structure", None, "ok", "ok", true),
        Err(e) => r.check("structure", None, "ok", e, false),
    };
    r.check_eq("value at 0", None, &central_binomial(s), &k.at_zero());
    let half = if s.is_multiple_of(2) {
        central_binomial(s / 2)
    } else {
        BigInt::from(0)
    };
    r.check_eq("value at pi/2", None, &half, &k.at_half_pi());
    r.check_eq("term count", None, &expected_term_count(s), &k.term_count());
    r
}

/// Halved top coefficients of `D_s` against `p_0 … p_s`, for `3 ≤ s ≤ max`.
pub fn tail_suite(max: u32) -> Result<Vec<VerificationReport>> {
    if max < 3 {
        return Ok(Vec::new());
    }
    let table = partitions_euler(max);
    let kernels = build_kernels(max)?;
    kernels[2..]
        .par_iter()
        .map(|k| {
            let s = k.order();
            let tail = k.tail()?;
            let mut r = VerificationReport::new("tail-partitions", format!("s={s}"));
            let top = u64::from(s).pow(2);
            for (j, c) in tail.coeffs.iter().enumerate() {
                r.check_eq(
                    format!("p{j}"),
                    Some(top - 2 * j as u64),
                    &table.values[j],
                    c,
                );
            }
            Ok(r)
        })
        .collect()
}

/// Factorisation, leading products and the third-coefficient identities.
pub fn section4_suite(max: u32) -> Result<Vec<VerificationReport>> {
    let orders: Vec<u32> = (3..=max).collect();
    let mut out: Vec<VerificationReport> = orders
        .par_iter()
        .map(|&s| Ok(vec![verify_decomposition(s)?, verify_leading_product(s)?]))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    for (lo, hi, _) in THIRD_TERM_ROWS {
        for s in lo..=hi.min(max) {
            out.push(third_term_row_check(s)?);
        }
    }
    out.push(third_term_report(THIRD_TERM_MAX_INDEX)?);
    Ok(out)
}

/// `(Δ_k − Δ_{k−1}) + p_0 = 1` for `2 ≤ k ≤ max_index`.
pub fn third_term_report(max_index: usize) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("third-term-coefficient", format!("k=2..{max_index}"));
    for k in 2..=max_index {
        let v = third_term_coefficient(k)?;
        r.check_eq(format!("k={k}"), None, &BigInt::from(1), &v);
    }
    Ok(r)
}

fn quadrature_check(
    r: &mut VerificationReport,
    label: String,
    form: Form,
    s: u32,
    expected: i64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let q = integrate(form, s, spec)?;
    r.record_deviation(q.residual);
    r.check(
        label,
        None,
        expected,
        format!("{:.12} (residual {:.2e})", q.raw, q.residual),
        q.rounded == expected && q.residual < RESIDUAL_TOLERANCE,
    );
    Ok(q.raw)
}

fn to_i64(v: &BigInt) -> i64 {
    i64::try_from(v).expect("partition number fits in i64 for quadrature orders")
}

/// Every integral representation for `1 ≤ s ≤ max`, under both evaluators
/// and both rules, plus the exact path.
pub fn quadrature_suite(max: u32, spec: &QuadratureSpec) -> Result<Vec<VerificationReport>> {
    let table = partitions_euler(max);
    let orders: Vec<u32> = (1..=max).collect();
    orders
        .par_iter()
        .map(|&s| {
            let p = to_i64(&table.values[s as usize]);
            let mut r = VerificationReport::new("integral-forms", format!("s={s}"));
            for evaluator in [Evaluator::Direct, Evaluator::Series] {
                for rule in [Rule::UniformTrapezoid, Rule::GaussLegendre] {
                    let spec = spec.with_evaluator(evaluator).with_rule(rule);
                    let tag = format!("{evaluator}/{rule}");
                    let reduced = quadrature_check(
                        &mut r,
                        format!("reduced {tag}"),
                        Form::Reduced,
                        s,
                        p,
                        &spec,
                    )?;
                    let sin =
                        quadrature_check(&mut r, format!("sin {tag}"), Form::Sin, s, p, &spec)?;
                    let cos =
                        quadrature_check(&mut r, format!("cos {tag}"), Form::Cos, s, p, &spec)?;
                    let gap = ((sin + cos) / 2.0 - reduced).abs();
                    r.check(
                        format!("average of sin/cos {tag}"),
                        None,
                        format!("{reduced:.12}"),
                        format!("{:.12}", (sin + cos) / 2.0),
                        gap < AVERAGE_TOLERANCE,
                    );
                }
            }
            if s <= FULL_FORM_MAX {
                let direct = spec.with_evaluator(Evaluator::Direct);
                quadrature_check(&mut r, "full direct".into(), Form::Full, s, p, &direct)?;
            }
            for form in [Form::Reduced, Form::Sin, Form::Cos] {
                let exact = exact_value(form, s)?;
                r.check_eq(
                    format!("{} exact", form.name()),
                    None,
                    &table.values[s as usize].to_string(),
                    &exact.to_string(),
                );
            }
            Ok(r)
        })
        .collect()
}

/// `D_{s+m}` against `cos[((s+m)² − 2s)x]` for `1 ≤ s ≤ max_s`, `0 ≤ m ≤ max_m`.
pub fn grid_suite(
    max_s: u32,
    max_m: u32,
    spec: &QuadratureSpec,
) -> Result<Vec<VerificationReport>> {
    let table = partitions_euler(max_s);
    let orders: Vec<u32> = (1..=max_s).collect();
    orders
        .par_iter()
        .map(|&s| {
            let p = to_i64(&table.values[s as usize]);
            let mut r = VerificationReport::new("general-integral", format!("s={s}"));
            for m in 0..=max_m {
                quadrature_check(&mut r, format!("m={m}"), Form::General { m }, s, p, spec)?;
            }
            Ok(r)
        })
        .collect()
}

/// `∫₀^{π/2} D_s cos[(s²+offset)x] = 0` for even offsets 2..=20.
pub fn moment_suite(max: u32, spec: &QuadratureSpec) -> Result<Vec<VerificationReport>> {
    let orders: Vec<u32> = (1..=max).collect();
    orders
        .par_iter()
        .map(|&s| {
            let mut r = VerificationReport::new("vanishing-moments", format!("s={s}"));
            for offset in (2..=MOMENT_MAX_OFFSET).step_by(2) {
                let v = vanishing_moment(s, offset, spec)?;
                r.record_deviation(v.abs());
                r.check(
                    format!("offset {offset}"),
                    None,
                    0,
                    format!("{v:.3e}"),
                    v.abs() < MOMENT_TOLERANCE,
                );
            }
            Ok(r)
        })
        .collect()
}

/// Enumeration against the Euler recurrence for `0 ≤ n ≤ max_n`.
pub fn oracle_suite(max_n: u32) -> Result<Vec<VerificationReport>> {
    let euler = partitions_euler(max_n);
    let mut r = VerificationReport::new("partition-oracles", format!("n=0..{max_n}"));
    for n in 0..=max_n {
        let count = partitions_enumerate(n)?;
        r.check_eq(
            format!("n={n}"),
            None,
            &euler.values[n as usize],
            &BigInt::from(count),
        );
    }
    Ok(vec![r])
}

/// Convenience for one order: builds the kernel and returns its structural report.
pub fn kernel_report_for(s: u32) -> Result<VerificationReport> {
    Ok(kernel_report(&build_kernel(s)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for suite in Suite::ALL {
            assert_eq!(suite.name().parse::<Suite>().unwrap(), suite);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_run_passes() {
        let reports = run_all(Some(6), &QuadratureSpec::default()).unwrap();
        for r in &reports {
            assert!(r.passed, "{r}");
        }
        assert!(reports.iter().any(|r| r.identity == "tail-leading-product"));
    }

    #[test]
    fn caps_apply() {
        let spec = QuadratureSpec::default();
        assert_eq!(Suite::Quadrature.run(Some(3), &spec).unwrap().len(), 3);
        assert_eq!(Suite::Grid.run(Some(20), &spec).unwrap().len(), 8);
        assert!(Suite::Tail.run(Some(2), &spec).unwrap().is_empty());
    }
}
