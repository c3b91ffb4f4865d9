//! End-to-end runs of the `etatheta` binary.

use std::process::{Command, Output};

use etatheta::evaluator::{eval_naive_oracle, EvalRequest, Function, Method};
use serde_json::Value;

fn etatheta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_etatheta"))
        .args(args)
        .env_remove("ETATHETA_MINIMA_DIR")
        .output()
        .expect("binary runs")
}

fn json_stdout(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn json_stderr(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is JSON")
}

#[test]
fn eval_eta_at_i_matches_oracle() {
    let out = etatheta(&[
        "eval", "--func", "eta", "--tau", "0", "1", "--prec", "256", "--report",
    ]);
    let v = json_stdout(&out);
    let report = &v["report"];
    assert!(report["counts"]["complex_mul"].as_u64().unwrap() > 0);
    assert_eq!(report["method"], "optimized");

    let req = EvalRequest::tau(Function::Eta, "0", "1", 256, Method::Optimized).unwrap();
    let oracle = &eval_naive_oracle(&req).unwrap()[0].1;
    let re = v["values"]["eta"]["re"].as_str().unwrap();
    let im = v["values"]["eta"]["im"].as_str().unwrap();
    let got = etatheta::arb::ArbComplex::parse(re, im, 320).unwrap();
    assert!(got.log2_dist(oracle) < -240.0);
}

#[test]
fn eval_is_deterministic_and_hex_round_trips() {
    let args = [
        "eval",
        "--func",
        "theta-all",
        "--tau",
        "0.125",
        "1.5",
        "--prec",
        "200",
        "--method",
        "bsgs",
    ];
    let a = etatheta(&args);
    let b = etatheta(&args);
    assert_eq!(a.stdout, b.stdout);
    let v = json_stdout(&a);
    for name in ["theta0", "theta1", "theta2"] {
        let hex = v["values"][name]["re_hex"].as_str().unwrap();
        assert!(rug::Float::parse_radix(hex, 16).is_ok(), "{hex}");
    }
}

#[test]
fn eval_from_q() {
    let out = etatheta(&[
        "eval", "--func", "theta0", "--q", "0.01", "-0.02", "--prec", "64", "--format", "plain",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    // 1 + 2q + 2q^4 + O(q^9) with q^4 = -7e-8 + 2.4e-7 i
    let fields: Vec<&str> = text.trim().split('\t').collect();
    assert_eq!(fields[0], "theta0");
    let re: f64 = fields[1].parse().unwrap();
    let im: f64 = fields[2].parse().unwrap();
    assert!(
        (re - 1.019_999_86).abs() < 1e-13 && (im + 0.039_999_52).abs() < 1e-13,
        "{text}"
    );
}

#[test]
fn minima_prefix_matches_printed_rows() {
    let out = etatheta(&["minima", "--kind", "square", "--limit", "10000"]);
    let v = json_stdout(&out);
    let rows: Vec<(u64, u64)> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["m"].as_u64().unwrap(), e["count"].as_u64().unwrap()))
        .collect();
    assert_eq!(&rows[..5], &[(2, 2), (3, 2), (4, 2), (8, 3), (12, 4)]);
    assert!(rows.contains(&(4032, 192)));
    assert!(rows.iter().all(|&(m, _)| m <= 10_000));
}

#[test]
fn addseq_emit_revalidates() {
    let dir = std::env::temp_dir().join(format!("etatheta-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for (format, file) in [("plain", "seq.txt"), ("json", "seq.json")] {
        let out = etatheta(&[
            "addseq",
            "--kind",
            "pentagonal",
            "--terms",
            "300",
            "--emit",
            "--format",
            format,
        ]);
        assert!(out.status.success());
        let path = dir.join(file);
        std::fs::write(&path, &out.stdout).unwrap();
        let v = json_stdout(&etatheta(&["addseq", "--check", path.to_str().unwrap()]));
        assert_eq!(v["valid"], true);
    }
    // A broken step is caught.
    let path = dir.join("broken.txt");
    std::fs::write(&path, "# targets: 1 2 5\n1 leaf\n2 double 1\n5 add 2 2\n").unwrap();
    let out = etatheta(&["addseq", "--check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn addseq_summary_costs() {
    let v = json_stdout(&etatheta(&[
        "addseq",
        "--kind",
        "pentagonal",
        "--terms",
        "1000",
        "--algo",
        "classical",
    ]));
    let c = v["normalized_cost"].as_f64().unwrap();
    assert!((c - 2.0).abs() < 0.05, "{c}");
    assert_eq!(v["valid"], true);
}

#[test]
fn verify_reports_json() {
    let v = json_stdout(&etatheta(&[
        "verify",
        "--statement",
        "pentagonal-double-add",
        "--limit",
        "100000",
    ]));
    assert_eq!(v["statement"], "pentagonal-double-add");
    assert_eq!(v["counterexamples"].as_array().unwrap().len(), 0);
}

#[test]
fn bench_outputs() {
    let out = etatheta(&["bench", "--curve", "--ns", "100,1000", "--format", "tsv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "N\tT\tclassical\toptimized\tbsgs\tm");
    let classical: f64 = lines[2].split('\t').nth(2).unwrap().parse().unwrap();
    assert!((classical - 2.0).abs() < 0.05);

    let v = json_stdout(&etatheta(&[
        "bench", "--tables", "--table", "eta", "--bits", "10000",
    ]));
    assert_eq!(v[0]["t"], 1080);
}

#[test]
fn exit_codes_and_error_objects() {
    let usage = etatheta(&["eval", "--func", "eta", "--prec", "64"]);
    assert_eq!(usage.status.code(), Some(2));
    assert_eq!(json_stderr(&usage)["error"]["code"], "usage");

    let numeric = etatheta(&["eval", "--func", "eta", "--q", "1.5", "0", "--prec", "64"]);
    assert_eq!(numeric.status.code(), Some(1));
    assert_eq!(json_stderr(&numeric)["error"]["code"], "q-too-large");

    let parse = etatheta(&["eval", "--func", "eta", "--tau", "abc", "1", "--prec", "64"]);
    assert_eq!(parse.status.code(), Some(1));
    assert_eq!(json_stderr(&parse)["error"]["code"], "invalid");
}

#[test]
fn minima_dir_override() {
    let dir = std::env::temp_dir().join(format!("etatheta-minima-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for kind in ["square", "trigonal", "pentagonal"] {
        std::fs::write(dir.join(format!("{kind}.tsv")), format!("# {kind}\n")).unwrap();
    }
    let out = Command::new(env!("CARGO_BIN_EXE_etatheta"))
        .args([
            "eval", "--func", "eta", "--tau", "0", "1", "--prec", "64", "--method", "bsgs",
        ])
        .env("ETATHETA_MINIMA_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_stderr(&out)["error"]["code"], "empty-table");
    std::fs::remove_dir_all(&dir).unwrap();
}
