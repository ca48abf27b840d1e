use std::process::{Command, Output};

use geopoly_core::exact::parse_rational;
use serde_json::Value;

fn geopoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geopoly"))
        .args(args)
        .env_remove("GEOPOLY_BITS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn collect_strings(v: &Value, acc: &mut Vec<String>) {
    match v {
        Value::String(s) => acc.push(s.clone()),
        Value::Array(a) => a.iter().for_each(|x| collect_strings(x, acc)),
        Value::Object(o) => o.values().for_each(|x| collect_strings(x, acc)),
        _ => {}
    }
}

#[test]
fn stirling_second_kind_row() {
    let out = geopoly(&[
        "stirling", "--alpha", "0", "--beta", "1", "--r", "0", "--nmax", "4",
    ]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["command"], "stirling");
    assert_eq!(doc["status"], "ok");
    assert!(doc["timing_ms"].is_number());
    assert_eq!(
        doc["result"]["rows"][4],
        serde_json::json!(["0", "1", "7", "6", "1"])
    );
}

#[test]
fn stirling_rejects_zero_triple_and_bad_rationals() {
    assert_eq!(
        code(&geopoly(&[
            "stirling", "--alpha", "0", "--beta", "0", "--r", "0", "--nmax", "3"
        ])),
        2
    );
    let bad = geopoly(&["stirling", "--alpha", "0.5", "--nmax", "3"]);
    assert_eq!(code(&bad), 2);
    assert!(!bad.stderr.is_empty());
    assert_eq!(
        code(&geopoly(&["stirling", "--alpha", "1/0", "--nmax", "3"])),
        2
    );
}

#[test]
fn stirling_entry_with_negative_r() {
    let out = geopoly(&[
        "stirling", "--alpha", "1/2", "--beta", "3", "--r", "-2", "--nmax", "2",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["result"]["rows"][2][1], "-3/2");
}

#[test]
fn stirling_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let out = geopoly(&[
        "stirling",
        "--alpha",
        "1/2",
        "--beta",
        "3",
        "--r",
        "-2",
        "--nmax",
        "2",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some("n,k,value"));
    assert!(text.lines().any(|l| l == "2,1,-3/2"));
}

#[test]
fn poly_examples() {
    let fubini = geopoly(&[
        "poly",
        "--family",
        "geom",
        "--n",
        "3",
        "--order-m",
        "1",
        "--alpha",
        "0",
        "--beta",
        "1",
        "--r",
        "0",
        "--at",
        "1",
    ]);
    assert_eq!(code(&fubini), 0);
    assert_eq!(json(&fubini)["result"]["value"], "13");

    let constant = geopoly(&[
        "poly", "--family", "exp", "--n", "0", "--alpha", "1/3", "--beta", "2", "--r", "5", "--at",
        "7/2",
    ]);
    assert_eq!(json(&constant)["result"]["value"], "1");

    // w_2^(-2)(0) = S(2, 0) = (r | alpha)_2 = r (r - alpha)
    let out = geopoly(&[
        "poly",
        "--family",
        "geom",
        "--n",
        "2",
        "--order-m",
        "-2",
        "--alpha",
        "1/2",
        "--beta",
        "3",
        "--r",
        "-2",
        "--at",
        "0",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["result"]["value"], "5");
}

#[test]
fn series_examples() {
    let out = geopoly(&["series", "--id", "zeta2k", "--n", "0", "--bits", "256"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["result"]["pass"], true);
    let diff: f64 = doc["result"]["abs_diff"].as_str().unwrap().parse().unwrap();
    assert!(diff < 1e-30);

    let out = geopoly(&[
        "series", "--id", "theorem5", "--n", "0", "--x", "1/3", "--alpha", "0", "--beta", "1",
        "--r", "0",
    ]);
    assert_eq!(code(&out), 0);

    let out = geopoly(&[
        "series", "--id", "eq17", "--n", "1", "--alpha", "1", "--beta", "2", "--r", "3",
    ]);
    assert_eq!(code(&out), 0);
    let lhs: f64 = json(&out)["result"]["lhs"]
        .as_str()
        .unwrap()
        .parse()
        .unwrap();
    assert!((lhs - 3.0).abs() < 1e-12);

    let printed = geopoly(&[
        "series",
        "--id",
        "eq17",
        "--n",
        "1",
        "--alpha",
        "1",
        "--beta",
        "2",
        "--r",
        "3",
        "--start-index",
        "paper-j1",
    ]);
    assert_eq!(code(&printed), 1);

    for id in ["eq18", "dobinski"] {
        let out = geopoly(&[
            "series", "--id", id, "--n", "3", "--x", "3/2", "--alpha", "1/2", "--beta", "2", "--r",
            "1",
        ]);
        assert_eq!(code(&out), 0, "{id}");
    }
}

#[test]
fn series_input_errors() {
    assert_eq!(
        code(&geopoly(&["series", "--id", "theorem5", "--n", "2"])),
        2
    );
    assert_eq!(
        code(&geopoly(&[
            "series", "--id", "theorem5", "--n", "2", "--x", "1"
        ])),
        2
    );
    assert_eq!(
        code(&geopoly(&[
            "series", "--id", "dobinski", "--n", "2", "--x", "1", "--beta", "-1"
        ])),
        2
    );
    assert_eq!(
        code(&geopoly(&[
            "series", "--id", "zeta2k", "--n", "1", "--bits", "8"
        ])),
        2
    );
}

#[test]
fn bits_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_geopoly"))
        .args(["series", "--id", "zeta2k", "--n", "1"])
        .env("GEOPOLY_BITS", "128")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["params"]["bits"], 128);
    assert_eq!(json(&out)["result"]["tolerance"]["precision_bits"], 128);
}

#[test]
fn verify_examples() {
    let all = geopoly(&["verify", "--id", "all", "--profile", "quick", "--seed", "1"]);
    assert_eq!(code(&all), 0);
    let doc = json(&all);
    assert_eq!(doc["status"], "pass");
    assert_eq!(doc["result"]["counts"]["fail"], 0);

    let printed = geopoly(&["verify", "--id", "EQ37_PRINTED", "--seed", "1"]);
    assert_eq!(code(&printed), 0);
    let doc = json(&printed);
    assert_eq!(doc["status"], "expected_fail_confirmed");
    let witness = &doc["result"]["reports"][0]["witness"];
    assert_eq!(witness["expected"], "-1");
    assert_eq!(witness["actual"], "-1/2");

    assert_eq!(code(&geopoly(&["verify", "--id", "NOPE"])), 2);
    assert_eq!(
        code(&geopoly(&["verify", "--id", "EQ14", "--profile", "slow"])),
        2
    );
}

#[test]
fn no_timing_output_is_byte_identical() {
    let args = [
        "--no-timing",
        "verify",
        "--id",
        "EQ26",
        "--seed",
        "3",
        "--samples",
        "2",
    ];
    let a = geopoly(&args);
    let b = geopoly(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(json(&a).get("timing_ms").is_none());
    let seq = geopoly(&[
        "--no-timing",
        "verify",
        "--id",
        "EQ26",
        "--seed",
        "3",
        "--samples",
        "2",
        "--sequential",
    ]);
    assert_eq!(a.stdout, seq.stdout);
}

#[test]
fn emitted_rationals_round_trip() {
    let out = geopoly(&[
        "stirling", "--alpha", "-3/4", "--beta", "5/3", "--r", "7/2", "--nmax", "8",
    ]);
    let mut values = Vec::new();
    collect_strings(&json(&out)["result"], &mut values);
    assert_eq!(values.len(), 45);
    let table = geopoly_core::build_table(
        &geopoly_core::HsuShiueParams::new(
            parse_rational("-3/4").unwrap(),
            parse_rational("5/3").unwrap(),
            parse_rational("7/2").unwrap(),
        )
        .unwrap(),
        8,
    );
    let expected: Vec<_> = (0..=8).flat_map(|n| table.row(n).to_vec()).collect();
    let parsed: Vec<_> = values.iter().map(|s| parse_rational(s).unwrap()).collect();
    assert_eq!(parsed, expected);
    for (s, q) in values.iter().zip(&parsed) {
        assert_eq!(&geopoly_core::exact::format_rational(q), s);
    }
}
