use std::process::Command;

use gvf::field::{FieldElem, FieldKind};
use serde_json::Value;

fn gvf(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_gvf")).args(args).output().expect("binary runs");
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().expect("exit code"), v)
}

#[test]
fn height_of_two_three() {
    let (code, v) = gvf(&["height", "--field", "Q", "--structure", "r=1", "2", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["height"]["text"], "1*log(3)");
    assert!((v["height"]["approx"].as_f64().unwrap() - 1.0986).abs() < 1e-4);
}

#[test]
fn qz_prodcheck_contains_zero() {
    let (code, v) = gvf(&["prodcheck", "--field", "Qz", "z-2"]);
    assert_eq!(code, 0);
    assert_eq!(v["holds"], true);
}

#[test]
fn positivity_of_zero_divisor() {
    let (code, v) = gvf(&["positivity", "--field", "Q", "max(x1,0) - max(x1,x2,0)", "6", "2", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["isZero"], true);
}

#[test]
fn negative_verdict_exits_one() {
    let (code, v) = gvf(&["positivity", "-x1", "2"]);
    assert_eq!(code, 1);
    assert_eq!(v["isPositive"], false);
    assert!(v["witness"].is_object());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(gvf(&["height"]).0, 2);
    assert_eq!(gvf(&["height", "1/0"]).0, 2);
    assert_eq!(gvf(&["height", "--field", "Fp", "1"]).0, 2);
    assert_eq!(gvf(&["positivity", "--field", "Qz", "x1", "z"]).0, 2);
    let (code, v) = gvf(&["localterm", "max(x1,", "2"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "parse");
}

#[test]
fn output_is_deterministic() {
    let args = ["axioms", "--trials", "20", "--seed", "7", "--field", "Fp", "--p", "5"];
    let a = Command::new(env!("CARGO_BIN_EXE_gvf")).args(args).output().unwrap();
    let b = Command::new(env!("CARGO_BIN_EXE_gvf")).args(args).output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));
}

#[test]
fn printed_elements_reparse() {
    let cases: [(&[&str], FieldKind, &str); 4] = [
        (&["--field", "Q"], FieldKind::Q, "-6/4"),
        (&["--field", "Fp", "--p", "5"], FieldKind::Fp(5), "(t^2 + 4)/(2*t)"),
        (&["--field", "Qsqrt", "--d", "2"], FieldKind::Quad(2), "1/2 - 3*sqrt(2)"),
        (&["--field", "Qz"], FieldKind::Qz, "(z^2 - 1/4)/(2*z + 1)"),
    ];
    for (flags, kind, text) in cases {
        let mut args = vec!["height"];
        args.extend_from_slice(flags);
        args.push("--");
        args.push(text);
        let (code, v) = gvf(&args);
        assert_eq!(code, 0, "{text}");
        let printed = v["elements"][0].as_str().unwrap();
        assert_eq!(FieldElem::parse(kind, printed).unwrap(), FieldElem::parse(kind, text).unwrap());
    }
}

#[test]
fn certificate_file_round_trip() {
    let (code, v) = gvf(&["certificate", "search", "--epsilon", "2", "--degree", "2", "--coeff", "4", "1/2"]);
    assert_eq!(code, 0);
    let path = std::env::temp_dir().join(format!("gvf-cert-{}.json", std::process::id()));
    std::fs::write(&path, v["certificate"].to_string()).unwrap();
    let (code, v) = gvf(&["certificate", "verify", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code, 0);
    assert_eq!(v["valid"], true);
    let bad = r#"{"a":["1/2"],"epsilon":"2","coefficients":[{"s":[0],"m":5}]}"#;
    assert_eq!(gvf(&["certificate", "verify", bad]).0, 1);
}

#[test]
fn remaining_subcommands() {
    assert_eq!(gvf(&["extend", "--field", "Qsqrt", "--d", "-1", "2+i"]).0, 0);
    assert_eq!(gvf(&["extend", "2"]).0, 2);
    assert_eq!(gvf(&["measures", "12", "18"]).0, 0);
    assert_eq!(gvf(&["renorm-test", "--trials", "10", "--field", "Fp", "--p", "3"]).0, 0);
    let (code, v) = gvf(&["uniqueness", "--d", "-1", "--bound", "20"]);
    assert_eq!(code, 0);
    assert_eq!(v["kernelDimension"], 1);
    assert_eq!(gvf(&["localterm", "--field", "Qz", "max(x1, x2)", "z", "2"]).0, 0);
}
