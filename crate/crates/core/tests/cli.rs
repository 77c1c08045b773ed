use std::io::Write;
use std::process::{Command, Stdio};

use pervchow::cli::{emit_schema, run, COMMANDS};
use serde_json::{json, Value};

fn call(args: &[&str]) -> (i32, Value) {
    let out = run(args.iter().copied());
    let v = serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout));
    (out.code, v)
}

const LINE_N: &str = r#"{"dim":1,"incidence":{"1":0,"2":0,"3":0}}"#;

#[test]
fn report_shape() {
    let (code, v) = call(&["check-cycle", "--strata", "vertex3", "--pattern", LINE_N, "--perversity", "top"]);
    assert_eq!(code, 0);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["command", "schema", "values", "verdicts"]);
    assert_eq!(v["command"], "check-cycle");
    for verdict in v["verdicts"].as_array().unwrap() {
        assert!(verdict["check"].is_string() && verdict["ok"].is_boolean() && verdict["explanation"].is_string());
    }
}

#[test]
fn failing_verdict_exits_one() {
    let (code, v) = call(&["check-cycle", "--strata", "vertex3", "--pattern", LINE_N, "--perversity", "[0,1,1]"]);
    assert_eq!(code, 1);
    let e = v["verdicts"][0]["explanation"].as_str().unwrap();
    assert!(e.contains("X^3: dim 0 ≤ r-i+p_i = 1-3+1 = -1 fails"), "{e}");
}

#[test]
fn errors_exit_two() {
    for args in [
        vec!["groups", "--cone", "zobel", "--r", "7", "--p", "0"],
        vec!["intersect", "--cone", "zobel", "--a", "allowed:2:2:(1,0)", "--b", "N"],
        vec!["check-cycle", "--strata", "vertex3", "--pattern", LINE_N, "--perversity", "[0,0]"],
        vec!["compare", "--cone", "zobel", "--r", "1", "--from", "2", "--to", "0"],
        vec!["schema", "bogus"],
    ] {
        let (code, v) = call(&args);
        assert_eq!(code, 2, "{args:?}");
        assert!(v["error"]["kind"].is_string() && v["error"]["message"].is_string(), "{args:?}: {v}");
        assert_eq!(v["schema"], 1);
    }
}

#[test]
fn deterministic_output() {
    for args in [
        vec!["catalog", "P2"],
        vec!["groups", "--cone", "zobel"],
        vec!["check-star", "--cone", "zobel", "--a", "D", "--b", "M"],
        vec!["--pretty", "catalog", "zobel"],
    ] {
        assert_eq!(run(args.clone()), run(args));
    }
}

#[test]
fn validate_round_trip() {
    let (code, v) = call(&["validate", "--strata", "vertex3", "--pattern", r#"{"dim":2,"incidence":{"3":"empty","1":1,"2":0}}"#]);
    assert_eq!(code, 0);
    let normal = v["values"]["pattern"].to_string();
    let strata = v["values"]["strata"].to_string();
    let (code, again) = call(&["validate", "--strata", &strata, "--pattern", &normal]);
    assert_eq!(code, 0);
    assert_eq!(again["values"], v["values"]);
}

#[test]
fn cone_products() {
    let (code, v) = call(&["intersect", "--cone", "zobel", "--a", "Q", "--b", "Q"]);
    assert_eq!(code, 0);
    assert_eq!(v["values"]["case"], 3);
    assert_eq!(v["values"]["class"], json!({"mode": "disallowed", "p": 0, "payload": [1, 1], "r": 1}));
    let (_, v) = call(&["intersect", "--cone", "zobel", "--a", "D", "--b", "L"]);
    assert_eq!(v["values"]["case"], 2);
    assert_eq!(v["values"]["class"]["payload"], json!([0]));
    let (code, v) = call(&["pairing", "--cone", "zobel", "--a", "allowed:2:(2,3)", "--b", "allowed:2:(5,7)"]);
    assert_eq!((code, &v["values"]["degree"]), (0, &json!(29)));
}

#[test]
fn groups_and_comparisons() {
    let (code, v) = call(&["groups", "--cone", "zobel", "--r", "2", "--p", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["values"]["group"]["factors"], "Z");
    let (code, v) = call(&["compare", "--cone", "zobel", "--r", "2", "--from", "0", "--to", "1", "--class", "Q"]);
    assert_eq!(code, 0);
    assert_eq!(v["values"]["map"]["matrix"], json!([[1], [1]]));
    assert_eq!(v["values"]["class"]["payload"], json!([1, 1]));
}

#[test]
fn cocycle_commands() {
    let a = r#"{"t":1,"targetDim":1,"excess":{"1":0,"2":0,"3":1}}"#;
    let b = r#"{"t":1,"targetDim":1,"excess":{"1":0,"2":1,"3":1}}"#;
    let (code, v) = call(&["join", "--strata", "vertex3", "--a", a, "--b", b, "--p", "[0,0,1]", "--q", "[0,1,1]"]);
    assert_eq!(code, 0);
    assert_eq!(v["values"]["cocycle"]["excess"], json!({"1": 0, "2": 1, "3": 2}));
    let (code, v) = call(&["slice", "--strata", "vertex3", "--cocycle", a]);
    assert_eq!(code, 0);
    assert_eq!(v["values"]["pattern"]["dim"], 2);
    assert_eq!(v["values"]["pattern"]["incidence"], json!({"1": 1, "2": 0, "3": 0}));
    let (code, v) = call(&["cap", "--strata", "vertex3", "--cocycle", a, "--pattern", r#"{"dim":2,"incidence":{"1":"empty","2":"empty","3":"empty"}}"#]);
    assert_eq!(code, 0);
    assert_eq!(v["values"]["pattern"]["dim"], 1);
    let (code, _) = call(&["check-cocycle", "--strata", "vertex3", "--fibers", "[1,1,1]", "--source-dim", "3", "--perversity", "zero"]);
    assert_eq!(code, 1);
    let (code, _) = call(&["check-cocycle", "--strata", "vertex3", "--fibers", "[1,1,1]", "--source-dim", "3", "--perversity", "[0,1,1]"]);
    assert_eq!(code, 1);
    let (code, _) = call(&["check-cocycle", "--strata", "vertex3", "--fibers", "[1,1,1]", "--source-dim", "3", "--perversity", "[1,1,1]"]);
    assert_eq!(code, 0);
}

#[test]
fn pattern_transforms() {
    let (code, v) = call(&["pull", "--strata", "vertex3", "--pattern", LINE_N, "--e", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["values"]["pattern"]["incidence"], json!({"1": 2, "2": 2, "3": 2}));
    let (code, v) = call(&["suspend", "--strata", "vertex3", "--pattern", LINE_N, "--perversity", "top"]);
    assert_eq!(code, 0);
    assert_eq!(v["values"]["pattern"]["dim"], 2);
    let (code, v) = call(&["push", "--strata", "vertex3", "--pattern", LINE_N, "--c", "[0,1,1]", "--perversity", "top"]);
    assert_eq!(code, 0);
    assert_eq!(v["values"]["outputBound"], json!([0, 1, 2]));
}

#[test]
fn snf_and_exactness() {
    let (code, v) = call(&["snf", "--matrix", "[[0,0],[0,6],[4,0]]"]);
    assert_eq!(code, 0);
    assert_eq!(v["values"]["diagonal"], json!([2, 12]));
    let z = r#"{"rank":1}"#;
    let z2 = r#"{"rank":1,"relations":[[2]]}"#;
    let f = format!(r#"{{"source":{z},"target":{z},"matrix":[[2]]}}"#);
    let g = format!(r#"{{"source":{z},"target":{z2},"matrix":[[1]]}}"#);
    let (code, v) = call(&["exact", "--f", &f, "--g", &g]);
    assert_eq!(code, 0, "{v}");
    let f3 = format!(r#"{{"source":{z},"target":{z},"matrix":[[4]]}}"#);
    let (code, _) = call(&["exact", "--f", &f3, "--g", &g]);
    assert_eq!(code, 1);
}

#[test]
fn every_schema_parses() {
    for c in COMMANDS {
        let (code, v) = call(&["schema", c]);
        assert_eq!(code, 0);
        let direct: Value = serde_json::from_str(&emit_schema(c).unwrap()).unwrap();
        assert_eq!(v, direct);
        assert_eq!(v["schema"], 1);
    }
}

#[test]
fn file_and_stdin_inputs() {
    let path = std::env::temp_dir().join(format!("pervchow-cli-{}.json", std::process::id()));
    std::fs::write(&path, LINE_N).unwrap();
    let (code, _) = call(&["check-cycle", "--strata", "vertex3", "--pattern", path.to_str().unwrap(), "--perversity", "top"]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(code, 0);

    let mut child = Command::new(env!("CARGO_BIN_EXE_pervchow"))
        .args(["check-cycle", "--strata", "vertex3", "--pattern", "-", "--perversity", "zero"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(LINE_N.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdicts"][0]["ok"], false);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_pervchow");
    let ok = Command::new(bin).args(["catalog", "zobel", "--verify"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(ok.stdout.ends_with(b"\n"));
    let bad = Command::new(bin).args(["snf", "--matrix", "nope"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let help = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}
