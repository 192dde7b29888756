use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use proptest::prelude::*;
use serde_json::Value;
use skewrate::commands::{report_status, summary_status};
use skewrate::{Status, CSV_HEADER};
use skewrate_core::fixtures::G2;
use skewrate_core::fuzz::{FuzzFailure, FuzzSummary};
use skewrate_core::poly::Resource;
use skewrate_core::rational::ratio;
use skewrate_core::verify::{verify_germ, ResourceStop, VerifyOptions};
use skewrate_core::{parse_poly, Monomial, PolyError, SparsePoly2};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_skewrate"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Compares parsed JSON so formatting changes do not matter.
/// Set SKEWRATE_BLESS=1 to rewrite the files.
fn check_golden(name: &str, args: &[&str]) {
    let out = run(args);
    assert_eq!(code(&out), 0, "{:?}: {}", args, String::from_utf8_lossy(&out.stderr));
    let got: Value = serde_json::from_slice(&out.stdout).unwrap();
    let path = golden_path(name);
    if std::env::var_os("SKEWRATE_BLESS").is_some() {
        fs::write(&path, serde_json::to_string_pretty(&got).unwrap() + "\n").unwrap();
        return;
    }
    let want: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(got, want, "{} differs from {}", name, path.display());
}

#[test]
fn golden_json_for_fixtures() {
    for g in ["g1", "g2", "g3", "g4", "g5"] {
        let germ = data(&format!("{}.germ", g));
        check_golden(
            &format!("{}.classify.json", g),
            &["classify", "--germ", &germ, "--format", "json"],
        );
        check_golden(
            &format!("{}.iterate.json", g),
            &["iterate", "--germ", &germ, "--n", "2", "--format", "json"],
        );
        check_golden(
            &format!("{}.predict.json", g),
            &["predict", "--germ", &germ, "--n", "2", "--format", "json"],
        );
    }
}

#[test]
fn classify_g2_fields() {
    let out = run(&["classify", "--germ", &data("g2.germ"), "--format", "json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["case"], "Case2");
    assert_eq!(v["gamma"], 3);
    assert_eq!(v["d"], 1);
    assert_eq!(v["l1"], "2");
    assert_eq!(v["l2"], "inf");
    assert_eq!(v["interval"], serde_json::json!(["2", "3"]));
}

#[test]
fn iterate_g1_text() {
    let out = run(&["iterate", "--germ", &data("g1.germ"), "--n", "2"]);
    assert_eq!(code(&out), 0);
    assert!(
        stdout(&out).lines().any(|l| l == "p^2 = z^4; Q^2 = z^3*w"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn predict_g3_extra_weight() {
    let out = run(&[
        "predict",
        "--germ",
        &data("g3.germ"),
        "--n",
        "2",
        "--l",
        "1",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let p = &v["readings"][0]["prediction"];
    let w = p["weights"].as_array().unwrap().iter().find(|w| w["l"] == "1").unwrap();
    assert_eq!((&w["value"], &w["exact"]), (&Value::from("4"), &Value::from(true)));
    assert_eq!(p["c_qn"]["exact"], "4");
}

/// No float may appear anywhere in a report.
fn no_floats(v: &Value) -> bool {
    match v {
        Value::Number(n) => n.is_u64() || n.is_i64(),
        Value::Array(a) => a.iter().all(no_floats),
        Value::Object(o) => o.values().all(no_floats),
        _ => true,
    }
}

#[test]
fn reports_are_float_free() {
    for g in ["g2", "g5"] {
        let out = run(&[
            "verify",
            "--germ",
            &data(&format!("{}.germ", g)),
            "--n-max",
            "3",
            "--format",
            "json",
        ]);
        assert_eq!(code(&out), 0);
        assert!(no_floats(&serde_json::from_slice(&out.stdout).unwrap()));
    }
    let out = run(&["fuzz", "--count", "5", "--format", "json"]);
    assert_eq!(code(&out), 0);
    assert!(no_floats(&serde_json::from_slice(&out.stdout).unwrap()));
}

fn write_germ(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.display().to_string()
}

#[test]
fn exit_status_table() {
    let dir = tempfile::tempdir().unwrap();
    let g2 = data("g2.germ");
    assert_eq!(code(&run(&["classify", "--germ", &g2])), 0);
    assert_eq!(code(&run(&["verify", "--germ", &g2, "--n-max", "2"])), 0);
    assert_eq!(code(&run(&["--help"])), 0);

    // usage
    assert_eq!(code(&run(&[])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["iterate", "--germ", &g2])), 2);
    assert_eq!(code(&run(&["iterate", "--germ", &g2, "--n", "0"])), 2);
    assert_eq!(code(&run(&["predict", "--germ", &g2, "--n", "2", "--l", "-1"])), 2);
    assert_eq!(code(&run(&["predict", "--germ", &g2, "--n", "2", "--l", "x"])), 2);
    assert_eq!(code(&run(&["fuzz", "--coeff-min", "2", "--coeff-max", "1"])), 2);
    assert_eq!(code(&run(&["fuzz", "--boundary-bias", "101"])), 2);

    // parse
    let missing = dir.path().join("absent.germ").display().to_string();
    assert_eq!(code(&run(&["classify", "--germ", &missing])), 2);
    for (name, body) in [
        ("syntax.germ", "p = z^2\nq = z*w +\n"),
        ("novar.germ", "p = z^2\nq = x*w\n"),
        ("noq.germ", "p = z^2\n"),
        ("twice.germ", "p = z^2\np = z^3\nq = z*w\n"),
        ("constant.germ", "p = z^2\nq = 1 + z*w\n"),
        ("pw.germ", "p = z^2 + w\nq = z*w\n"),
        ("zero.germ", "p = 0\nq = z*w\n"),
    ] {
        let path = write_germ(dir.path(), name, body);
        let out = run(&["classify", "--germ", &path]);
        assert_eq!(code(&out), 2, "{}", name);
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"), "{}", name);
    }

    // resource
    assert_eq!(
        code(&run(&["iterate", "--germ", &g2, "--n", "4", "--max-terms", "3"])),
        3
    );
    let out = run(&[
        "verify",
        "--germ",
        &g2,
        "--n-max",
        "4",
        "--max-degree",
        "40",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 3);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!v["resource_stop"].is_null());
    assert!(!v["oracle"].as_array().unwrap().is_empty());
}

#[test]
fn failures_take_precedence_over_resource_stops() {
    let mut report = verify_germ(&G2.germ(), &VerifyOptions::new(2));
    assert_eq!(report_status(&report), Status::Ok);
    report.resource_stop = Some(ResourceStop {
        n: 3,
        error: PolyError::ResourceExceeded {
            resource: Resource::TermCount,
            limit: 1,
        },
    });
    assert_eq!(report_status(&report), Status::Resource);
    report.steps[0].outcomes[0].passed = false;
    assert_eq!(report_status(&report), Status::CheckFailures);
    assert_eq!(Status::CheckFailures.code(), 1);
    assert_eq!(Status::Resource.code(), 3);

    let mut summary = FuzzSummary::default();
    assert_eq!(summary_status(&summary), Status::Ok);
    summary.failures.push(FuzzFailure {
        index: 0,
        p: "z".into(),
        q: "w".into(),
        n: 1,
        reading: 0,
        tag: "t".into(),
        claim: "c".into(),
        observed: "o".into(),
    });
    assert_eq!(summary_status(&summary), Status::CheckFailures);
}

fn read_csv(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_path(path).unwrap();
    r.records()
        .map(|rec| rec.unwrap().iter().map(str::to_string).collect())
        .collect()
}

#[test]
fn csv_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g2.csv");
    let p = path.display().to_string();
    assert_eq!(
        code(&run(&[
            "verify",
            "--germ",
            &data("g2.germ"),
            "--n-max",
            "3",
            "--csv",
            &p
        ])),
        0
    );
    let rows = read_csv(&path);
    assert_eq!(rows[0], CSV_HEADER);
    assert_eq!(rows.len(), 4);
    // n = 2: γ_2 = 9, d² = 1, oracle 8 within (11/2, 10)
    assert_eq!(rows[2][..6], ["2", "9", "1", "8", "11/2", "10"]);

    let path = dir.path().join("g3.csv");
    let p = path.display().to_string();
    assert_eq!(
        code(&run(&["predict", "--germ", &data("g3.germ"), "--n", "3", "--csv", &p])),
        0
    );
    let rows = read_csv(&path);
    assert_eq!(rows[0], CSV_HEADER);
    assert_eq!(
        rows.iter().skip(1).map(|r| r[0].as_str()).collect::<Vec<_>>(),
        ["1", "2", "3"]
    );
    assert_eq!(rows[2][3], "4");
}

fn arb_q() -> impl Strategy<Value = SparsePoly2> {
    prop::collection::vec((0u64..=7, 0u64..=7, -9i64..=9, 1i64..=5), 1..=7).prop_filter_map(
        "q must be nonzero without a constant term",
        |terms| {
            let q = SparsePoly2::from_terms(
                terms
                    .into_iter()
                    .filter(|t| t.0 + t.1 > 0)
                    .map(|(i, j, n, d)| (Monomial::new(i, j), ratio(n, d))),
            );
            (!q.is_zero()).then_some(q)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// Print a polynomial into a germ file, read it back through the binary, parse what it prints.
    #[test]
    fn round_trip_through_the_binary(q in arb_q()) {
        let dir = tempfile::tempdir().unwrap();
        let path = write_germ(dir.path(), "r.germ", &format!("p = z^2\nq = {}\n", q));
        let out = run(&["iterate", "--germ", &path, "--n", "1", "--format", "json"]);
        prop_assert_eq!(code(&out), 0);
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        let printed = v["q_n"].as_str().unwrap();
        prop_assert_eq!(printed, q.to_string());
        prop_assert_eq!(parse_poly(printed, skewrate_core::parse::ALL_VARS).unwrap(), q.clone());
        prop_assert_eq!(v["q_terms"].as_array().unwrap().len(), q.len());
    }
}
