//! End-to-end tests of the `qmdt` binary.

use std::io::Write;
use std::process::{Command, Output, Stdio};

const HEIGHT_ONE: &str = r#"{"dim":6,"r":2,"s":2,"pattern":[0,2]}"#;
const PFISTER: &str = r#"{"dim":8,"r":4,"s":0,"pattern":[0,4]}"#;

fn qmdt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmdt"))
        .args(args)
        .output()
        .expect("qmdt runs")
}

fn stdout(args: &[&str]) -> String {
    let out = qmdt(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn error(args: &[&str]) -> (i32, serde_json::Value) {
    let out = qmdt(args);
    assert!(out.stdout.is_empty());
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).expect("stderr is one JSON object");
    (out.status.code().unwrap(), err)
}

#[test]
fn pattern_enum() {
    assert_eq!(stdout(&["pattern-enum", "-r", "2", "-s", "2"]), "[[0,1,2],[0,2]]\n");
    assert_eq!(stdout(&["pattern-enum", "-r", "1", "-s", "7"]), "[[0,1]]\n");
    assert_eq!(
        stdout(&["pattern-enum", "-r", "3", "-s", "2", "--rules", "base,singular"]),
        "[[0,1,2,3],[0,1,3]]\n"
    );
}

#[test]
fn mdt_solve() {
    assert_eq!(
        stdout(&["mdt-solve", HEIGHT_ONE]),
        "[{\"blocks\":[[{\"kind\":\"lo\",\"i\":0},{\"kind\":\"up\",\"i\":3}],[{\"kind\":\"lo\",\"i\":1},{\"kind\":\"up\",\"i\":4}]]}]\n"
    );
    assert_eq!(
        stdout(&["mdt-solve", HEIGHT_ONE, "--format", "text"]),
        "{{0_lo,3^up}, {1_lo,4^up}}\n"
    );
    assert_eq!(stdout(&["mdt-solve", PFISTER, "--count"]), "1\n");
    assert_eq!(
        stdout(&["mdt-solve", HEIGHT_ONE, "--rules", "R-PARITY", "--count"]),
        "4\n"
    );
}

#[test]
fn invalid_profile_is_a_validation_error() {
    let (code, err) = error(&["mdt-solve", r#"{"dim":7,"r":2,"s":3,"pattern":[0,2]}"#]);
    assert_eq!(code, 2);
    assert_eq!(err["error"], "StepViolatesI1Bound");
    let (code, err) = error(&["mdt-solve", "{not json"]);
    assert_eq!((code, err["error"].as_str()), (2, Some("InvalidInput")));
}

#[test]
fn bound_exceeded_exits_3() {
    let (code, err) = error(&["mdt-solve", PFISTER, "--max-r", "3"]);
    assert_eq!(code, 3);
    assert_eq!(err["error"], "BoundExceeded");
}

#[test]
fn unknown_rules_are_rejected() {
    let (code, err) = error(&["mdt-solve", HEIGHT_ONE, "--rules", "proven,R-BOGUS"]);
    assert_eq!((code, err["error"].as_str()), (2, Some("UnknownRule")));
    let (code, err) = error(&["i1-bounds", "-r", "3", "-s", "6", "--rules", "base,bogus"]);
    assert_eq!((code, err["error"].as_str()), (2, Some("UnknownRule")));
}

#[test]
fn usage_errors_are_json() {
    let (code, err) = error(&["no-such-command"]);
    assert_eq!((code, err["error"].as_str()), (2, Some("Usage")));
    let (code, err) = error(&["pattern-enum", "-r", "2", "-s", "2", "--format", "svg"]);
    assert_eq!((code, err["error"].as_str()), (2, Some("Usage")));
}

#[test]
fn diagram() {
    let golden = include_str!("../../core/tests/golden/shell_0_2_8_12.txt");
    assert_eq!(stdout(&["diagram", r#"{"pattern":[0,2,8,12]}"#]), golden);
    assert_eq!(
        stdout(&["diagram", PFISTER]),
        "   o         o\n  o o       o o\n o o o     o o o\no o o o   o o o o\n   0         0\n"
    );
    let svg = stdout(&["diagram", PFISTER, "--format", "svg"]);
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg, stdout(&["diagram", PFISTER, "--format", "svg"]));
}

#[test]
fn steenrod_compose_i1_and_pairs() {
    let p = r#"{"dim":8,"r":3,"s":2,"pattern":[0,1,2,3]}"#;
    assert_eq!(stdout(&["steenrod", "-j", "1", "h1", "--profile", p]), "h2\n");
    assert_eq!(
        stdout(&["steenrod", "-j", "0", "h0*l2 + h1*l1", "--profile", p]),
        "h0*l2 + h1*l1\n"
    );
    assert_eq!(
        stdout(&[
            "i1-bounds",
            "-r",
            "3",
            "-s",
            "6",
            "--rules",
            "base,singular,conjectural"
        ]),
        "[1]\n"
    );
    assert_eq!(
        stdout(&["excellent-pairs", r#"{"dim":10,"r":3,"s":4,"pattern":[0,1,3]}"#]),
        "[[0,7],[1,8]]\n"
    );

    let ctx = format!("[{HEIGHT_ONE},{HEIGHT_ONE}]");
    let f = format!(r#"{{"context":{ctx},"support":[[{{"kind":"H","i":0}},{{"kind":"L","i":0}}]],"split":1}}"#);
    let diag = format!(
        r#"{{"context":{ctx},"support":[[{{"kind":"H","i":0}},{{"kind":"L","i":0}}],[{{"kind":"L","i":0}},{{"kind":"H","i":0}}],[{{"kind":"H","i":1}},{{"kind":"L","i":1}}],[{{"kind":"L","i":1}},{{"kind":"H","i":1}}]],"split":1}}"#
    );
    assert_eq!(stdout(&["compose", &f, &diag, "--format", "text"]), "h0*l0\n");
}

#[test]
fn check_lists_violations() {
    let good = r#"{"blocks":[[{"kind":"lo","i":0},{"kind":"up","i":3}],[{"kind":"lo","i":1},{"kind":"up","i":4}]]}"#;
    assert_eq!(stdout(&["check", HEIGHT_ONE, good]), "[]\n");
    let bad = r#"{"blocks":[[{"kind":"lo","i":0},{"kind":"up","i":4}],[{"kind":"lo","i":1},{"kind":"up","i":3}]]}"#;
    let v: serde_json::Value = serde_json::from_str(&stdout(&["check", HEIGHT_ONE, bad])).unwrap();
    assert!(v.as_array().unwrap().iter().any(|x| x["rule"] == "R-DUAL"));
    let (code, err) = error(&["check", HEIGHT_ONE, r#"{"blocks":[[{"kind":"lo","i":0}]]}"#]);
    assert_eq!((code, err["error"].as_str()), (2, Some("NotAPartition")));
}

#[test]
fn file_stdin_and_output() {
    let dir = std::env::temp_dir().join(format!("qmdt-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("profile.json");
    std::fs::write(&input, PFISTER).unwrap();
    let from_file = stdout(&["mdt-solve", &format!("@{}", input.display()), "--count"]);
    assert_eq!(from_file, "1\n");

    let mut child = Command::new(env!("CARGO_BIN_EXE_qmdt"))
        .args(["excellent-pairs", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(PFISTER.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "[[0,3],[1,4],[2,5],[3,6]]\n");

    let target = dir.join("out.txt");
    assert_eq!(stdout(&["diagram", PFISTER, "--output", target.to_str().unwrap()]), "");
    assert!(std::fs::read_to_string(&target).unwrap().ends_with("0         0\n"));
    std::fs::remove_dir_all(&dir).unwrap();
}
