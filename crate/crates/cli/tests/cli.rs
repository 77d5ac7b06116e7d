use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_partition-harmonics"))
        .args(args)
        .env_remove("PH_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = run(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn partitions_table_csv() {
    let o = run(&[
        "partitions",
        "table",
        "--max",
        "10",
        "--oracle",
        "both",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,euler,enumerate");
    assert_eq!(lines.len(), 12);
    assert_eq!(*lines.last().unwrap(), "10,42,42");
    let values: Vec<&str> = lines[2..]
        .iter()
        .map(|l| l.rsplit(',').next().unwrap())
        .collect();
    assert_eq!(
        values,
        ["1", "2", "3", "5", "7", "11", "15", "22", "30", "42"]
    );
}

#[test]
fn partitions_json_is_exact_for_large_n() {
    let doc = json(&["partitions", "table", "--max", "200", "--json"]);
    assert_eq!(doc["schema"], 1);
    let p200 = &doc["rows"][200]["euler"];
    assert_eq!(p200.to_string(), "3972999029388");
}

#[test]
fn kernel_expand_text() {
    let o = run(&["kernel", "expand", "--s", "2", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2(1 + cos 2x + cos 4x)\n");
}

#[test]
fn kernel_expand_json_round_trips() {
    let doc = json(&["kernel", "expand", "--s", "3", "--format", "json"]);
    let series: partition_harmonics::TrigPoly =
        serde_json::from_value(doc["series"].clone()).unwrap();
    assert_eq!(
        series,
        partition_harmonics::build_kernel(3).unwrap().into_series()
    );
    assert_eq!(doc["at_zero"], 20);
    assert!(doc["manifest"]["version"].is_string());
}

#[test]
fn kernel_tail_csv() {
    let o = run(&["kernel", "tail", "--s", "5", "--format", "csv"]);
    assert_eq!(
        stdout(&o),
        "j,frequency,halved\n0,25,1\n1,23,1\n2,21,2\n3,19,3\n4,17,5\n5,15,7\n"
    );
}

#[test]
fn verify_all_passes() {
    let o = run(&["verify", "all", "--max-s", "12"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("0 failed\n"));
}

#[test]
fn verify_section4_json() {
    let doc = json(&["verify", "section4", "--max-s", "8", "--json"]);
    assert_eq!(doc["passed"], true);
    let reports = doc["reports"].as_array().unwrap();
    assert!(reports.iter().any(|r| r["subject"] == "s=8 class=4k"));
}

#[test]
fn quadrature_reports_rounded_value() {
    let doc = json(&["quadrature", "--s", "12", "--form", "reduced", "--json"]);
    assert_eq!(doc["result"]["rounded"], 77);
    let doc = json(&[
        "quadrature",
        "--s",
        "3",
        "--m",
        "2",
        "--form",
        "general",
        "--rule",
        "gauss",
        "--json",
    ]);
    assert_eq!(doc["result"]["rounded"], 3);
    let doc = json(&["quadrature", "--s", "8", "--form", "full", "--json"]);
    assert_eq!(doc["result"]["rounded"], 22);
}

#[test]
fn quadrature_beyond_envelope() {
    let o = run(&["quadrature", "--s", "20"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--exact"));
    let doc = json(&["quadrature", "--s", "20", "--exact", "--json"]);
    assert_eq!(doc["exact"], 627);
    assert!(doc["result"].is_null());
    assert_eq!(doc["manifest"]["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn usage_errors_exit_two() {
    let cases: [&[&str]; 7] = [
        &[
            "quadrature",
            "--s",
            "4",
            "--form",
            "full",
            "--evaluator",
            "series",
        ],
        &["quadrature", "--s", "4", "--m", "1"],
        &["quadrature", "--s", "4", "--nodes", "3"],
        &[
            "partitions",
            "table",
            "--max",
            "50",
            "--oracle",
            "enumerate",
        ],
        &["kernel", "expand", "--s", "0"],
        &["kernel", "expand", "--s", "2", "--bogus"],
        &["frobnicate"],
    ];
    for args in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["verify", "all", "--max-s", "8", "--threads", "3"][..],
        &["kernel", "expand", "--s", "9", "--format", "csv"][..],
        &[
            "partitions",
            "table",
            "--max",
            "30",
            "--oracle",
            "both",
            "--format",
            "csv",
        ][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let strip = |mut v: Value| {
        v["manifest"]
            .as_object_mut()
            .unwrap()
            .remove("wall_time_ms");
        v
    };
    let args = ["verify", "section4", "--max-s", "10", "--json"];
    assert_eq!(strip(json(&args)), strip(json(&args)));
}

#[test]
fn thread_counts_do_not_change_results() {
    let one = run(&[
        "verify",
        "quadrature",
        "--max-s",
        "10",
        "--threads",
        "1",
        "--format",
        "csv",
    ]);
    let four = run(&[
        "verify",
        "quadrature",
        "--max-s",
        "10",
        "--threads",
        "4",
        "--format",
        "csv",
    ]);
    assert_eq!(one.stdout, four.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_partition-harmonics"))
        .args([
            "verify",
            "quadrature",
            "--max-s",
            "10",
            "--threads",
            "4",
            "--format",
            "csv",
        ])
        .env("PH_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(env.stdout, one.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_partition-harmonics"))
        .args(["verify", "oracles"])
        .env("PH_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("ph-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.csv");
    let o = run(&[
        "partitions",
        "table",
        "--max",
        "5",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        "n,euler\n0,1\n1,1\n2,2\n3,3\n4,5\n5,7\n"
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bench_marks_skipped_columns() {
    let o = run(&["bench", "--max-s", "16", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "s,build_kernel_us,direct_trapezoid_us,series_trapezoid_us,direct_gauss_us,series_gauss_us"
    );
    assert_eq!(lines.len(), 17);
    assert!(!lines[12].contains("skipped"));
    assert!(lines[16].ends_with("skipped,skipped,skipped,skipped"));
}
