use std::process::Command;

use picman::Error;
use picman_cli::{exit_code, run};
use serde_json::Value;

fn json(args: &[&str]) -> Value {
    let mut full = vec!["picman"];
    full.extend_from_slice(args);
    let (code, out, err) = run(full);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn constants_for_degree_two() {
    let v = json(&["constants", "--degree", "2"]);
    assert_eq!(v["k"], 86611);
    assert_eq!(v["intermediates"]["c1"], 60034);
    assert_eq!(v["intermediates"]["c2"], 10234);
    assert_eq!(v["margins"]["epsilon0"]["holds"], true);
    assert!(v["theta"].as_str().unwrap().contains('±'));
    assert_eq!(json(&["constants", "--length", "2"])["k"], 30017);
    assert_eq!(json(&["constants", "--length", "10234"])["k"], 375);
}

#[test]
fn coble_record() {
    let v = json(&["coble"]);
    assert_eq!(v["lambda"], "7 + 4*sqrt(3)");
    assert_eq!(v["intersections"]["D1.D2"], 4);
    assert_eq!(v["intersections"]["D1.K"], 0);
    assert_eq!(v["mod2"]["adapted_sublattice"], true);
    assert_eq!(v["ample_in_W"]["D1"], true);
    assert_eq!(v["lattice"]["signature"], serde_json::json!([1, 10]));
}

#[test]
fn analyze_de_jonquieres() {
    let v = json(&["analyze", "dejonquieres d=4", "--iterates", "6"]);
    assert_eq!(v["degree_sequence"], serde_json::json!([4, 16, 64, 256, 1024, 4096]));
    assert_eq!(v["dynamical_degree"]["exact"], "4");
    assert_eq!(v["axis"]["p_dot_h"], "sqrt(2)");
    assert_eq!(v["stability"]["stable"], true);
    let s = json(&["analyze", "monomial -1,0;0,-1", "--iterates", "4"]);
    assert_eq!(s["degree_sequence"], serde_json::json!([2, 1, 2, 1]));
    assert_eq!(s["stability"]["stable"], false);
}

#[test]
fn kummer_and_pell() {
    let v = json(&["kummer", "--matrix", "2,1;1,1"]);
    assert_eq!(v["lambda"], "7/2 + 3/2*sqrt(5)");
    assert_eq!(v["expected"]["charpoly_has_factor"], true);
    assert!(v["fixed_rank"].as_u64().unwrap() >= 2);
    let p = json(&["pell", "--form", "1,0,-2"]);
    assert_eq!(p["matrix"], serde_json::json!([[3, 4], [2, 3]]));
    assert_eq!(p["lambda"], "3 + 2*sqrt(2)");
}

#[test]
fn hypcheck_is_reproducible() {
    let a = run(["picman", "hypcheck", "--samples", "20", "--seed", "7"]);
    let b = run(["picman", "hypcheck", "--samples", "20", "--seed", "7"]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    let v: Value = serde_json::from_str(&a.1).unwrap();
    assert_eq!(v["approximation_trees"]["within"], true);
    assert_eq!(v["canoeing"]["passed"], true);
}

#[test]
fn errors_and_exit_codes() {
    let (code, out, err) = run(["picman", "analyze", "monomial 2,2;1,1"]);
    assert_eq!((code, out.as_str()), (1, ""));
    assert!(err.contains("determinant 0"));
    assert_eq!(run(["picman", "kummer", "--matrix", "2,0;0,1"]).0, 1);
    assert_eq!(run(["picman", "pell", "--form", "1,0,-1"]).0, 1);
    assert_eq!(run(["picman", "nonsense"]).0, 1);
    let (code, _, err) = run(["picman", "analyze", "quadratic a,b / c,d,e"]);
    assert_eq!(code, 1);
    assert!(err.contains("Parse"));
    assert_eq!(exit_code(&Error::PrecisionFailure("x".into())), 2);
    assert_eq!(run(["picman", "--help"]).0, 0);
}

#[test]
fn text_format_and_sorted_keys() {
    let (_, out, _) = run(["picman", "pell", "--form", "1,0,-2", "--format", "text"]);
    let keys: Vec<&str> = out.lines().map(|l| l.split_whitespace().next().unwrap()).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(out.contains("lambda          3 + 2*sqrt(2)"));
}

#[test]
fn binary_honours_precision_env() {
    let bin = env!("CARGO_BIN_EXE_picman");
    let low = Command::new(bin).args(["pell", "--form", "1,0,-2"]).env("PICMAN_PRECISION", "64").output().unwrap();
    let high = Command::new(bin).args(["pell", "--form", "1,0,-2", "--precision", "256"]).env("PICMAN_PRECISION", "64").output().unwrap();
    assert!(low.status.success() && high.status.success());
    let approx = |o: &[u8]| serde_json::from_slice::<Value>(o).unwrap()["lambda_approx"].as_str().unwrap().len();
    assert!(approx(&high.stdout) > approx(&low.stdout));
    let bad = Command::new(bin).args(["analyze", "monomial 2,2;1,1"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
