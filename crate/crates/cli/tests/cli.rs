use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn liesplit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liesplit")).args(args).env("LIESPLIT_LOG", "off").output().expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = liesplit(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing");
    v
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("liesplit-cli-{}-{name}", std::process::id()))
}

#[test]
fn witt_twelve_on_two_generators() {
    let v = json_ok(&["witt", "--n", "12", "--m", "2"]);
    assert_eq!(v["dim"], 335);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["config"]["seed"], 0);
    assert!(v["timing"]["elapsed_ms"].is_number());
}

#[test]
fn lie_basis_in_degree_two() {
    let v = json_ok(&["lie-basis", "--n", "2", "--m", "2", "--p", "2"]);
    let basis = v["basis"].as_array().unwrap();
    assert_eq!(basis.len(), 1);
    assert_eq!(basis[0]["text"], "x1x2+x2x1");
    assert_eq!(v["field"]["p"], 2);
}

#[test]
fn split_base_case() {
    let v = json_ok(&["split", "--p", "2", "--gens", "3", "--cap", "3", "--m", "3"]);
    assert_eq!(v["verdict"], true);
}

#[test]
fn split_rejects_lie_square_in_characteristic_two() {
    let v = json_ok(&["split", "--p", "2", "--gens", "2", "--cap", "2", "--m", "2"]);
    assert_eq!(v["verdict"], false);
}

#[test]
fn config_errors_exit_two() {
    for args in [
        &["witt", "--n", "0", "--m", "2"][..],
        &["lie-basis", "--n", "2", "--m", "2", "--p", "4"],
        &["split", "--p", "2", "--gens", "3,6,12", "--m", "2", "--cap", "12"],
        &["block", "--p", "2", "--cap", "7"],
        &["hilton", "--p", "2", "--M", "2", "--target", "4"],
        &["lie-basis", "--n", "2", "--m", "2", "--p", "2", "--format", "csv"],
        &["witt", "--bogus"],
    ] {
        let out = liesplit(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    let out = liesplit(&["witt", "--n", "0", "--m", "2"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "config");
}

#[test]
fn module_errors_exit_one() {
    let out = liesplit(&["hilton", "--p", "2", "--M", "3", "--target", "12", "--vdim", "5000"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "module");
    assert!(v["error"]["message"].as_str().unwrap().contains("cap exceeded"));
}

#[test]
fn dry_run_validates_without_computing() {
    let v = json_ok(&["block", "--p", "3", "--cap", "6", "--dry-run"]);
    assert_eq!(v["valid"], true);
    assert!(v.get("report").is_none());
    assert_eq!(v["field"]["e"], 4);
    let out = liesplit(&["block", "--p", "2", "--cap", "7", "--dry-run"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_tables() {
    let out = liesplit(&["witt", "--n", "6", "--m", "2", "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "n,m,dim\n6,2,9\n");
    let out = liesplit(&["hilton", "--p", "2", "--M", "3", "--f", "3", "--target", "12", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let dims: u128 = text.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse::<u128>().unwrap()).sum();
    assert_eq!(dims, 335);
}

#[test]
fn hilton_report_lists_summands() {
    let v =
        json_ok(&["hilton", "--p", "2", "--M", "3", "--f", "3", "--target", "12", "--vdim", "2", "--mode", "explicit"]);
    assert_eq!(v["verdict"], true);
    let summands = v["report"]["summands"].as_array().unwrap();
    let mut terms: Vec<(&str, u64)> =
        summands.iter().map(|s| (s["term"].as_str().unwrap(), s["dim"].as_u64().unwrap())).collect();
    terms.sort_unstable();
    assert_eq!(terms, vec![("D12", 272), ("L2(D6)", 28), ("L4(D3)", 3), ("[[D6,D3],D3]", 32)]);
    assert_eq!(v["report"]["explicit"]["equals_lie_power"], true);
}

#[test]
fn reports_are_deterministic() {
    for args in [
        &["block", "--p", "2", "--cap", "5"][..],
        &["gamma", "--functor", "L", "--n", "4", "--p", "2", "--decompose", "--seed", "7"],
        &["report-1-1", "--p", "2", "--M", "3", "--f", "3", "--cap", "6"],
    ] {
        let a = without_timing(json_ok(args));
        let mut single = args.to_vec();
        single.extend(["--jobs", "1"]);
        let b = without_timing(json_ok(&single));
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap(), "{args:?}");
    }
}

#[test]
fn gamma_then_projective() {
    let path = scratch("gamma.json");
    let p = path.to_str().unwrap();
    let out = liesplit(&["gamma", "--functor", "L", "--n", "3", "--p", "3", "--out", p]);
    assert!(out.status.success());
    let g: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(g["dim"], 2);
    let v = json_ok(&["projective", "--module", p]);
    assert_eq!(v["verdict"], false);
    let v = json_ok(&["projective", "--functor", "L", "--n", "3", "--p", "5"]);
    assert_eq!(v["verdict"], true);
    std::fs::remove_file(path).ok();
}
