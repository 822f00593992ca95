use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.wr"))
        .to_string_lossy()
        .into_owned()
}

fn wordrel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wordrel")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--report", "json"];
    all.extend_from_slice(args);
    let out = wordrel(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (v, out.status.code().unwrap())
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn regularity_exit_codes_and_json() {
    let (v, code) = json(&["check-regular", &fixture("cr")]);
    assert_eq!(code, 0);
    assert_eq!(v["holds"], true);
    assert_eq!(v["property"], "regular");
    assert!(v["elapsed_ms"].is_number());

    let (v, code) = json(&["check-regular", &fixture("crx")]);
    assert_eq!(code, 1);
    assert_eq!(v["holds"], false);
    assert!(!v["witness"].is_null());
}

#[test]
fn recognizability_verdicts() {
    assert_eq!(wordrel(&["check-recognizable", &fixture("tot2")]).status.code(), Some(0));
    assert_eq!(wordrel(&["check-recognizable", &fixture("len1")]).status.code(), Some(1));
    assert_eq!(wordrel(&["check-omega-recognizable", &fixture("eq-omega")]).status.code(), Some(1));
    assert_eq!(wordrel(&["check-omega-recognizable", &fixture("head-omega")]).status.code(), Some(0));
}

#[test]
fn slender_witness_words() {
    let (v, code) = json(&["slender", &fixture("astar-hash-bstar")]);
    assert_eq!(code, 1);
    let words = v["witness"]["words"].as_array().unwrap();
    assert!(words.len() >= 3);
    let len = words[0].as_str().unwrap().len();
    assert!(words.iter().all(|w| w.as_str().unwrap().len() == len));
    assert_eq!(wordrel(&["slender", &fixture("astar-b")]).status.code(), Some(0));
}

#[test]
fn run_and_run_lasso() {
    let o = wordrel(&["run", &fixture("gr"), "--input", "a", "--input", "b"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("accepted"));
    assert_eq!(wordrel(&["run", &fixture("gr"), "--input", "aa", "--input", "b"]).status.code(), Some(1));

    let h = fixture("head-omega");
    assert_eq!(wordrel(&["run-lasso", &h, "--left", "a(b)^w", "--right", "(a)^w"]).status.code(), Some(0));
    assert_eq!(wordrel(&["run-lasso", &h, "--left", "(a)^w", "--right", "(b)^w"]).status.code(), Some(1));
}

#[test]
fn gadget_files_round_trip_through_run_lasso() {
    let dir = std::env::temp_dir().join(format!("wordrel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let prefix = dir.join("gr").to_string_lossy().into_owned();
    let o = wordrel(&["equiv-gadget", &fixture("gr"), &fixture("gr"), "-o", &prefix]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let b_r = format!("{prefix}.b_r.wr");
    let b_s = format!("{prefix}.b_s.wr");
    assert_eq!(wordrel(&["run-lasso", &b_r, "--left", "(a#)^w", "--right", "(b#)^w"]).status.code(), Some(0));
    assert_eq!(wordrel(&["run-lasso", &b_s, "--left", "(a#)^w", "--right", "(b#)^w"]).status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn input_errors_exit_two() {
    let o = wordrel(&["check-regular", "/nonexistent/file.wr"]);
    assert_eq!(o.status.code(), Some(2));

    let dir = std::env::temp_dir().join(format!("wordrel-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.wr");
    std::fs::write(&bad, "machine nfa x\nalphabet: a\nstates: p\ninitial: q\n").unwrap();
    let (v, code) = json(&["slender", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(v["error"].as_str().unwrap().contains("line 4"));
    std::fs::remove_dir_all(&dir).unwrap();

    // Wrong machine kind for the command.
    assert_eq!(wordrel(&["slender", &fixture("cr")]).status.code(), Some(2));
    assert_eq!(wordrel(&["run-lasso", &fixture("head-omega"), "--left", "a", "--right", "b"]).status.code(), Some(2));
}

#[test]
fn budget_exhaustion_exits_three() {
    let o = Command::new(env!("CARGO_BIN_EXE_wordrel"))
        .env("WORDREL_STATE_BUDGET", "5")
        .args(["--report", "json", "check-recognizable", &fixture("rn3")])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["error"].as_str().unwrap().contains("budget"));
}

#[test]
fn fixtures_and_oracles() {
    let list = stdout(&wordrel(&["fixtures", "list"]));
    for name in ["cr", "crx", "eq2", "gr", "gs", "eq-omega"] {
        assert!(list.lines().any(|l| l == name), "{name} missing");
    }
    let printed = stdout(&wordrel(&["fixtures", "cr"]));
    assert_eq!(printed, std::fs::read_to_string(fixture("cr")).unwrap());
    assert_eq!(wordrel(&["fixtures", "nope"]).status.code(), Some(2));

    assert_eq!(wordrel(&["oracle", "slender", &fixture("astar-b")]).status.code(), Some(0));
    assert_eq!(wordrel(&["oracle", "recognizable", &fixture("tot2")]).status.code(), Some(0));
    let rn = stdout(&wordrel(&["oracle", "rn", "2"]));
    assert!(rn.starts_with("machine sync"));
}
