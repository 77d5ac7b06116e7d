use std::time::Instant;

use partition_harmonics::partitions::MAX_ENUMERATION;
use partition_harmonics::verify::{all_passed, Suite};
use partition_harmonics::{
    build_kernel, exact_value, integrate, integrate_reduced, partitions_enumerate,
    partitions_euler, run_all, Error, Evaluator, Form, QuadratureSpec, Rule, VerificationReport,
    MAX_KERNEL_ORDER,
};
use serde_json::{json, Value};

use crate::args::{
    BenchArgs, EvaluatorArg, FormArg, KernelCommand, Oracle, PartitionsCommand, QuadratureArgs,
    SuiteArg, VerifyArgs,
};
use crate::output::{csv, integer, table};

/// Largest `--max` accepted by the Euler table.
pub const MAX_TABLE: u32 = 100_000;

#[derive(Debug)]
pub enum CliError {
    /// Bad flag or flag combination; exit code 2.
    Usage(String),
    /// Failure while running; exit code 1.
    Runtime(String),
}

pub type CliResult<T> = Result<T, CliError>;

/// Maps a library error to a usage error when it stems from a flag value.
fn classify(e: Error, flag: &str) -> CliError {
    match e {
        Error::OrderTooSmall { .. } | Error::TooLarge { .. } | Error::InvalidArgument(_) => {
            CliError::Usage(format!("{flag}: {e}"))
        }
        Error::InsufficientNodes { .. } => CliError::Usage(format!("--nodes: {e}")),
        Error::CancellationRisk { .. } => CliError::Runtime(format!("{e} via --exact")),
        other => CliError::Runtime(other.to_string()),
    }
}

/// Rendered command output in every format plus its pass/fail status.
pub struct Rendered {
    pub text: String,
    pub csv: String,
    pub json: Value,
    pub warnings: Vec<String>,
    pub passed: bool,
}

impl Rendered {
    fn ok(text: String, csv: String, json: Value) -> Self {
        Rendered {
            text,
            csv,
            json,
            warnings: Vec::new(),
            passed: true,
        }
    }
}

pub fn partitions(cmd: &PartitionsCommand) -> CliResult<Rendered> {
    let PartitionsCommand::Table { max, oracle } = *cmd;
    if oracle != Oracle::Euler && max > MAX_ENUMERATION {
        return Err(CliError::Usage(format!(
            "--max {max} exceeds {MAX_ENUMERATION}, the limit for --oracle enumerate/both"
        )));
    }
    if max > MAX_TABLE {
        return Err(CliError::Usage(format!("--max {max} exceeds {MAX_TABLE}")));
    }
    let euler = (oracle != Oracle::Enumerate).then(|| partitions_euler(max));
    let enumerated: Option<Vec<u64>> = if oracle == Oracle::Euler {
        None
    } else {
        Some(
            (0..=max)
                .map(partitions_enumerate)
                .collect::<Result<_, _>>()
                .map_err(|e| classify(e, "--max"))?,
        )
    };
    let mut header = vec!["n"];
    if euler.is_some() {
        header.push("euler");
    }
    if enumerated.is_some() {
        header.push("enumerate");
    }
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    let mut mismatches = Vec::new();
    for n in 0..=max as usize {
        let mut row = vec![n.to_string()];
        let mut obj = serde_json::Map::new();
        obj.insert("n".into(), json!(n));
        if let Some(t) = &euler {
            row.push(t.values[n].to_string());
            obj.insert("euler".into(), integer(&t.values[n]));
        }
        if let Some(e) = &enumerated {
            row.push(e[n].to_string());
            obj.insert("enumerate".into(), json!(e[n]));
        }
        if let (Some(t), Some(e)) = (&euler, &enumerated) {
            if t.values[n] != e[n].into() {
                mismatches.push(n);
            }
        }
        rows.push(row);
        json_rows.push(Value::Object(obj));
    }
    let passed = mismatches.is_empty();
    let oracle_name = match oracle {
        Oracle::Euler => "euler",
        Oracle::Enumerate => "enumerate",
        Oracle::Both => "both",
    };
    let json = json!({
        "oracle": oracle_name,
        "max": max,
        "agree": passed,
        "rows": json_rows,
    });
    let mut text = table(&header, &rows);
    if !passed {
        text.push_str(&format!("oracles disagree at n = {mismatches:?}\n"));
    }
    Ok(Rendered {
        passed,
        ..Rendered::ok(text, csv(&header, rows), json)
    })
}

pub fn kernel(cmd: &KernelCommand) -> CliResult<Rendered> {
    match *cmd {
        KernelCommand::Expand { s } => {
            let k = build_kernel(s).map_err(|e| classify(e, "--s"))?;
            let rows: Vec<Vec<String>> = k
                .coefficients()
                .into_iter()
                .map(|(n, c)| vec![n.to_string(), c.to_string()])
                .collect();
            let json = json!({
                "s": s,
                "max_frequency": k.max_frequency(),
                "term_count": k.term_count(),
                "at_zero": integer(k.at_zero()),
                "at_half_pi": integer(k.at_half_pi()),
                "series": k.series(),
            });
            let mut text = k.to_halved_text();
            text.push('\n');
            Ok(Rendered::ok(
                text,
                csv(&["frequency", "coefficient"], rows),
                json,
            ))
        }
        KernelCommand::Tail { s } => {
            let k = build_kernel(s).map_err(|e| classify(e, "--s"))?;
            let tail = k.tail().map_err(|e| classify(e, "--s"))?;
            let top = u64::from(s).pow(2);
            let rows: Vec<Vec<String>> = tail
                .coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| {
                    vec![
                        j.to_string(),
                        (top - 2 * j as u64).to_string(),
                        c.to_string(),
                    ]
                })
                .collect();
            let json = json!({
                "s": s,
                "tail": tail.coeffs.iter().map(integer).collect::<Vec<_>>(),
            });
            let text = table(&["j", "frequency", "halved"], &rows);
            Ok(Rendered::ok(
                text,
                csv(&["j", "frequency", "halved"], rows),
                json,
            ))
        }
    }
}

fn form_of(args: &QuadratureArgs) -> CliResult<Form> {
    if args.m.is_some() && args.form != FormArg::General {
        return Err(CliError::Usage("--m applies only to --form general".into()));
    }
    Ok(match args.form {
        FormArg::Reduced => Form::Reduced,
        FormArg::Sin => Form::Sin,
        FormArg::Cos => Form::Cos,
        FormArg::Full => Form::Full,
        FormArg::General => Form::General {
            m: args.m.unwrap_or(0),
        },
    })
}

pub fn quadrature(args: &QuadratureArgs) -> CliResult<Rendered> {
    let form = form_of(args)?;
    if args.form == FormArg::Full && args.evaluator == EvaluatorArg::Series {
        return Err(CliError::Usage(
            "--evaluator series is unavailable for --form full; it has no maintained series".into(),
        ));
    }
    if args.form == FormArg::Full && args.exact {
        return Err(CliError::Usage(
            "--exact is unavailable for --form full".into(),
        ));
    }
    if args.nodes == Some(0) {
        return Err(CliError::Usage("--nodes must be at least 1".into()));
    }
    let mut spec = QuadratureSpec::default()
        .with_rule(args.rule.into())
        .with_evaluator(args.evaluator.into());
    spec.nodes = args.nodes;
    let exact = if args.exact {
        Some(exact_value(form, args.s).map_err(|e| classify(e, "--s"))?)
    } else {
        None
    };
    let mut warnings = Vec::new();
    let numeric = match integrate(form, args.s, &spec) {
        Ok(r) => Some(r),
        Err(e @ Error::CancellationRisk { .. }) if exact.is_some() => {
            warnings.push(format!("quadrature skipped: {e}"));
            None
        }
        Err(e) => return Err(classify(e, "--s")),
    };
    if let Some(r) = &numeric {
        if !r.trusted {
            warnings.push(format!("untrusted result: residual {:.3e}", r.residual));
        }
    }
    let m = args.m.unwrap_or(0);
    let exact_text = exact.as_ref().map(|d| d.to_string());
    let exact_json = exact.as_ref().map(|d| match d.to_integer() {
        Some(v) => integer(v),
        None => json!(d.to_string()),
    });
    let mut text = String::new();
    if let Some(r) = &numeric {
        text.push_str(&format!(
            "{} s={} m={m}: {:.12} (rounded {}, residual {:.3e}, {} nodes, {}, {})\n",
            form.name(),
            args.s,
            r.raw,
            r.rounded,
            r.residual,
            r.nodes,
            r.spec.rule,
            r.spec.evaluator
        ));
    }
    if let Some(e) = &exact_text {
        text.push_str(&format!("exact: {e}\n"));
    }
    let cell = |o: Option<String>| o.unwrap_or_default();
    let row = vec![
        args.s.to_string(),
        m.to_string(),
        form.name().to_string(),
        spec.rule.to_string(),
        spec.evaluator.to_string(),
        cell(numeric.as_ref().map(|r| r.nodes.to_string())),
        cell(numeric.as_ref().map(|r| format!("{:.12}", r.raw))),
        cell(numeric.as_ref().map(|r| r.rounded.to_string())),
        cell(numeric.as_ref().map(|r| format!("{:.3e}", r.residual))),
        cell(numeric.as_ref().map(|r| r.trusted.to_string())),
        cell(exact_text.clone()),
    ];
    let header = [
        "s",
        "m",
        "form",
        "rule",
        "evaluator",
        "nodes",
        "raw",
        "rounded",
        "residual",
        "trusted",
        "exact",
    ];
    let json = json!({
        "s": args.s,
        "m": m,
        "form": form.name(),
        "rule": spec.rule.to_string(),
        "evaluator": spec.evaluator.to_string(),
        "result": numeric.as_ref().map(|r| json!({
            "raw": r.raw,
            "rounded": r.rounded,
            "residual": r.residual,
            "trusted": r.trusted,
            "nodes": r.nodes,
            "max_frequency": r.max_frequency,
        })),
        "exact": exact_json,
    });
    let passed = numeric.as_ref().is_none_or(|r| r.trusted);
    Ok(Rendered {
        warnings,
        passed,
        ..Rendered::ok(text, csv(&header, vec![row]), json)
    })
}

pub fn verify(args: &VerifyArgs) -> CliResult<Rendered> {
    let spec = QuadratureSpec::default();
    let (name, reports) = match args.suite {
        SuiteArg::All => ("all", run_all(args.max_s, &spec)),
        other => {
            let suite = match other {
                SuiteArg::Kernel => Suite::Kernel,
                SuiteArg::Tail => Suite::Tail,
                SuiteArg::Section4 => Suite::Section4,
                SuiteArg::Quadrature => Suite::Quadrature,
                SuiteArg::Grid => Suite::Grid,
                SuiteArg::Moments => Suite::Moments,
                SuiteArg::Oracles => Suite::Oracles,
                SuiteArg::All => unreachable!(),
            };
            (suite.name(), suite.run(args.max_s, &spec))
        }
    };
    let reports = reports.map_err(|e| classify(e, "--max-s"))?;
    let passed = all_passed(&reports);
    Ok(Rendered {
        passed,
        ..Rendered::ok(
            verify_text(&reports),
            verify_csv(&reports),
            json!({
                "suite": name,
                "max_s": args.max_s,
                "passed": passed,
                "reports": reports,
            }),
        )
    })
}

fn verify_text(reports: &[VerificationReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&format!("{r}\n"));
        for w in r.failures() {
            let at = w.frequency.map(|f| format!(" @ {f}")).unwrap_or_default();
            out.push_str(&format!(
                "    {}{at}: expected {}, got {}\n",
                w.label, w.expected, w.actual
            ));
        }
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    out.push_str(&format!("{} reports, {failed} failed\n", reports.len()));
    out
}

fn verify_csv(reports: &[VerificationReport]) -> String {
    let rows = reports.iter().map(|r| {
        vec![
            r.identity.clone(),
            r.subject.replace(',', ";"),
            r.passed.to_string(),
            r.witnesses.len().to_string(),
            r.failures().count().to_string(),
            r.max_deviation
                .map(|d| format!("{d:.3e}"))
                .unwrap_or_default(),
        ]
    });
    csv(
        &[
            "identity",
            "subject",
            "passed",
            "checks",
            "failed_checks",
            "max_deviation",
        ],
        rows,
    )
}

const BENCH_HEADER: [&str; 6] = [
    "s",
    "build_kernel_us",
    "direct_trapezoid_us",
    "series_trapezoid_us",
    "direct_gauss_us",
    "series_gauss_us",
];

pub fn bench(args: &BenchArgs) -> CliResult<Rendered> {
    if args.max_s == 0 || args.max_s > MAX_KERNEL_ORDER {
        return Err(CliError::Usage(format!(
            "--max-s must be in 1..={MAX_KERNEL_ORDER}, got {}",
            args.max_s
        )));
    }
    let micros = |start: Instant| format!("{:.1}", start.elapsed().as_secs_f64() * 1e6);
    let mut rows = Vec::new();
    let mut skipped_from: Option<u32> = None;
    for s in 1..=args.max_s {
        let start = Instant::now();
        build_kernel(s).map_err(|e| classify(e, "--max-s"))?;
        let mut row = vec![s.to_string(), micros(start)];
        for rule in [Rule::UniformTrapezoid, Rule::GaussLegendre] {
            for evaluator in [Evaluator::Direct, Evaluator::Series] {
                let spec = QuadratureSpec::default()
                    .with_rule(rule)
                    .with_evaluator(evaluator);
                let start = Instant::now();
                match integrate_reduced(s, &spec) {
                    Ok(_) => row.push(micros(start)),
                    Err(Error::CancellationRisk { .. }) => {
                        skipped_from.get_or_insert(s);
                        row.push("skipped".into());
                    }
                    Err(e) => return Err(classify(e, "--max-s")),
                }
            }
        }
        rows.push(row);
    }
    let mut warnings = Vec::new();
    if let Some(s) = skipped_from {
        warnings.push(format!(
            "quadrature columns skipped from s = {s}: beyond the cancellation envelope"
        ));
    }
    let json_rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            let obj: serde_json::Map<String, Value> = BENCH_HEADER
                .iter()
                .zip(r)
                .map(|(h, v)| {
                    let value = v.parse::<f64>().map_or_else(|_| json!(v), |x| json!(x));
                    (h.to_string(), value)
                })
                .collect();
            Value::Object(obj)
        })
        .collect();
    Ok(Rendered {
        warnings,
        ..Rendered::ok(
            table(&BENCH_HEADER, &rows),
            csv(&BENCH_HEADER, rows.clone()),
            json!({ "max_s": args.max_s, "rows": json_rows }),
        )
    })
}
