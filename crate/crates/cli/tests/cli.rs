use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures")
}

fn yulkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_yulkit")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn source(text: &str, suffix: &str) -> NamedTempFile {
    let mut file = tempfile::Builder::new().suffix(suffix).tempfile().unwrap();
    file.write_all(text.as_bytes()).unwrap();
    file
}

fn path(file: &NamedTempFile) -> &str {
    file.path().to_str().unwrap()
}

fn fixture(rel: &str) -> String {
    fixtures().join(rel).to_str().unwrap().to_string()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn parse_prints_the_canonical_form() {
    let file = source("{ let x }", ".yul");
    let out = yulkit(&["parse", path(&file)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "{ let x }\n");

    let messy = source("{let   x:=0x1F  // comment\n}", ".yul");
    assert_eq!(stdout(&yulkit(&["parse", path(&messy)])), "{ let x := 0x1F }\n");
}

#[test]
fn parse_errors_exit_2() {
    let file = source("{ let }", ".yul");
    let out = yulkit(&["parse", path(&file)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    assert_eq!(yulkit(&["parse", "/nonexistent/file.yul"]).status.code(), Some(2));
}

#[test]
fn check_reports_safety() {
    let out = yulkit(&["check", &fixture("yul/scoping.yul")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "safe\n");
    let bad = source("{ x := 1 }", ".yul");
    let out = yulkit(&["check", path(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("unsafe: "));
    let builtin = source("{ let x := add(1, 2) }", ".yul");
    assert_eq!(yulkit(&["check", path(&builtin)]).status.code(), Some(0));
    assert_eq!(yulkit(&["check", "--dialect", "none", path(&builtin)]).status.code(), Some(1));
}

#[test]
fn run_prints_locals_and_mode() {
    let out = yulkit(&["run", "--fuel", "100", &fixture("yul/scoping.yul")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "x=0\nmode=regular\n");

    let out = yulkit(&["run", "--fuel", "0", &fixture("yul/scoping.yul")]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "error=limit\n");

    let unsafe_program = source("{ let x := y }", ".yul");
    let out = yulkit(&["run", path(&unsafe_program)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout(&out), "error=safety:unknown-var\n");
}

#[test]
fn run_with_initial_variables() {
    let program = source("{ let c := add(a, b) b := 0x10 }", ".yul");
    let out = yulkit(&["run", "--var", "a=5", "--var", "b=0xff", path(&program)]);
    assert_eq!(stdout(&out), "a=5\nb=16\nc=260\nmode=regular\n");
    let out = yulkit(&["run", "--var", "a=5", "--var", "a=6", path(&program)]);
    assert_eq!(out.status.code(), Some(2));
    let out = yulkit(&["run", "--var", "a=z", path(&program)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn run_string_alignment() {
    let program = source("{ let s := \"a\" }", ".yul");
    assert_eq!(stdout(&yulkit(&["run", path(&program)])), "s=97\nmode=regular\n");
    let left = stdout(&yulkit(&["run", "--string-alignment", "left-aligned", path(&program)]));
    let expected = format!("s={}\nmode=regular\n", a_left_aligned());
    assert_eq!(left, expected);
}

/// 0x61 followed by 31 zero bytes, in decimal (python: `0x61 << 248`).
fn a_left_aligned() -> String {
    "43874346312576839672212443538448152585028080127215369968075725190498334277632".to_string()
}

#[test]
fn transform_passes() {
    let program = source("{ for { let i := 0 } lt(i, 3) { i := add(i, 1) } { break i := 5 } }", ".yul");
    let out = yulkit(&["transform", "--pass", "dead-code", path(&program)]);
    assert_eq!(stdout(&out), "{ for { let i := 0 } lt(i, 3) { i := add(i, 1) } { break } }\n");
    let out = yulkit(&["transform", "--pass", "loop-init-rewrite", path(&program)]);
    assert_eq!(
        stdout(&out),
        "{ { let i := 0 for { } lt(i, 3) { i := add(i, 1) } { break i := 5 } } }\n"
    );
}

#[test]
fn import_json_prints_yul() {
    let out = yulkit(&["import-json", &fixture("solc/scoping.json")]);
    assert_eq!(out.status.code(), Some(0));
    let expected = yulkit(&["parse", &fixture("solc/scoping.yul")]);
    assert_eq!(stdout(&out), stdout(&expected));
    let bad = source("{\"nodeType\": \"YulWhatever\"}", ".json");
    assert_eq!(yulkit(&["import-json", path(&bad)]).status.code(), Some(2));
}

#[test]
fn json_is_detected_without_extension() {
    let file = source(&std::fs::read_to_string(fixtures().join("solc/loops.json")).unwrap(), ".txt");
    let out = yulkit(&["parse", path(&file)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), stdout(&yulkit(&["parse", &fixture("solc/loops.yul")])));
    let empty = source("{}", "");
    assert_eq!(stdout(&yulkit(&["parse", path(&empty)])), "{ }\n");
}

#[test]
fn validate_disambiguation_certificate() {
    let old = fixture("yul/scoping.yul");
    let new = fixture("yul/scoping_disambiguated.yul");
    let out = yulkit(&["validate", "--transform", "disambiguate", &old, &new]);
    assert_eq!(out.status.code(), Some(0));
    let cert = json(&out);
    assert_eq!(cert["schema"], "yulkit-certificate/1");
    assert_eq!(cert["result"], "accepted");
    assert_eq!(cert["transform"], "disambiguate");
    assert_eq!(cert["inputs"]["old"]["sha256"].as_str().unwrap().len(), 64);
    assert!(cert["note"].as_str().unwrap().contains("not a proof"));
    let vars = &cert["detail"]["renamings"]["variables"];
    assert_eq!(vars[1], serde_json::json!(["y", "y1"]));
    assert!(cert.get("differential").is_none());

    let out = yulkit(&["validate", "--transform", "disambiguate", &new, &old]);
    assert_eq!(out.status.code(), Some(1));
    let cert = json(&out);
    assert_eq!(cert["result"], "rejected");
    assert_eq!(cert["detail"]["error"]["kind"], "not-unique");
}

#[test]
fn validate_rename_matches_validate() {
    let old = fixture("yul/scoping.yul");
    let new = fixture("yul/scoping_disambiguated.yul");
    let out = yulkit(&["validate-rename", &old, &new]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"], "accepted");
    assert_eq!(yulkit(&["validate-rename", &new, &old]).status.code(), Some(1));
}

#[test]
fn validate_solc_optimizer_output() {
    let before = fixture("solc/dead_code_before.json");
    let after = fixture("solc/dead_code_after.json");
    let out = yulkit(&["validate", "--transform", "loop-init-rewrite,dead-code", &before, &after, "--differential", "40"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let cert = json(&out);
    assert_eq!(cert["result"], "accepted");
    assert!(cert["detail"].is_null());
    assert_eq!(cert["differential"]["runs"], 40);
    assert_eq!(cert["differential"]["mismatches"], 0);
    assert_eq!(cert["inputs"]["old"]["format"], "solc-json");

    // Dead code elimination alone does not explain the output.
    let out = yulkit(&["validate", "--transform", "dead-code", &before, &after]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["detail"]["error"]["kind"], "structural-mismatch");
    assert_eq!(yulkit(&["validate", "--transform", "inline", &before, &after]).status.code(), Some(2));
}

#[test]
fn differential_runs_only_follow_an_accepted_check() {
    let old = source("{ let x := 1 }", ".yul");
    let new = source("{ let x := 2 }", ".yul");
    let out = yulkit(&["validate", "--transform", "dead-code", path(&old), path(&new), "--differential", "5"]);
    assert_eq!(out.status.code(), Some(1));
    let cert = json(&out);
    assert_eq!(cert["result"], "rejected");
    assert!(cert.get("differential").is_none());
}

#[test]
fn suite_command() {
    let out = yulkit(&["suite", "dead-code", "--n", "20", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("suite dead-code: 20 cases, 0 failures: PASS"));

    let out = yulkit(&["suite", "static-soundness", "--n", "60", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    let seed: u64 = text
        .lines()
        .find_map(|l| l.strip_prefix("failure at seed "))
        .and_then(|rest| rest.split(':').next())
        .unwrap()
        .parse()
        .unwrap();
    let replay = yulkit(&["suite", "static-soundness", "--inject-fault", "--replay", &seed.to_string()]);
    assert_eq!(replay.status.code(), Some(1));
    assert!(stdout(&replay).contains(&format!("seed {seed}")));
    assert!(stdout(&replay).trim_end().ends_with("FAIL"));

    let out = yulkit(&["suite", "fuel-monotonicity", "--n", "5", "--fuel", "4,8,16"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(yulkit(&["suite", "nope"]).status.code(), Some(2));
}
