use std::path::PathBuf;

use wordrel::format::{parse, serialize, FormatError};

fn corpus() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .expect("fixtures directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "wr"))
        .collect();
    files.sort();
    files
}

#[test]
fn corpus_parses_and_round_trips() {
    let files = corpus();
    assert!(files.len() >= 10);
    for f in files {
        let text = std::fs::read_to_string(&f).unwrap();
        let m = parse(&text).unwrap_or_else(|e| panic!("{}: {e}", f.display()));
        let again = serialize(&m).unwrap();
        assert_eq!(again, text, "{} is not in canonical form", f.display());
        let m2 = parse(&again).unwrap();
        assert_eq!(serialize(&m2).unwrap(), again);
    }
}

fn err(text: &str) -> FormatError {
    parse(text).expect_err("should be rejected")
}

fn check(text: &str, line: usize, needle: &str) {
    let e = err(text);
    assert_eq!(e.line, line, "{e}");
    assert!(e.message.contains(needle), "`{}` lacks `{needle}`", e.message);
}

#[test]
fn unknown_state() {
    check("machine nfa x\nalphabet: a\nstates: p\ninitial: p\np a -> q\n", 5, "unknown state");
}

#[test]
fn unknown_letter() {
    check("machine nfa x\nalphabet: a\nstates: p\ninitial: p\np b -> p\n", 5, "unknown letter");
}

#[test]
fn duplicate_state_and_letter() {
    check("machine nfa x\nalphabet: a\nstates: p p\ninitial: p\n", 3, "declared twice");
    check("machine nfa x\nalphabet: a a\nstates: p\ninitial: p\n", 2, "duplicate letter");
}

#[test]
fn reserved_letters() {
    check("machine nfa x\nalphabet: eps\nstates: p\ninitial: p\n", 2, "reserved");
    check("machine sync x\nalphabet1: _\nalphabet2: a\nstates: p\ninitial: p\n", 2, "reserved");
}

#[test]
fn dfa_must_be_deterministic_and_complete() {
    check("machine dfa x\nalphabet: a\nstates: p q\ninitial: p\np a -> p\np a -> q\nq a -> q\n", 6, "");
    let e = err("machine dfa x\nalphabet: a b\nstates: p\ninitial: p\np a -> p\n");
    assert!(e.message.contains('b') || e.message.contains("complete"), "{e}");
}

#[test]
fn sync_padding() {
    // Once the first tape has ended it cannot resume.
    check(
        "machine sync x\nalphabet1: a\nalphabet2: a\nstates: p q\ninitial: p\naccepting: q\n\np _|a -> q\nq a|a -> q\n",
        9,
        "",
    );
    check("machine sync x\nalphabet1: a\nalphabet2: a\nstates: p\ninitial: p\n\np _|_ -> p\n", 7, "all-pad");
    check("machine sync x\nalphabet1: a\nalphabet2: a\nstates: p\ninitial: p\n\np a -> p\n", 7, "components");
}

#[test]
fn det_needs_partition() {
    let e = err("machine det x\nalphabet1: a\nalphabet2: b\nstates: p\ninitial: p\n\np a -> p\n");
    assert!(e.message.contains("tape") || e.message.contains("partition"), "{e}");
    check("machine det x\nalphabet1: a\nalphabet2: b\nstates: p\ninitial: p\npartition: p:3\n", 6, "does not exist");
}

#[test]
fn parity_needs_priorities() {
    let e = err("machine parity x\nalphabet1: a\nstates: p q\ninitial: p\npriorities: p=0\n\np a -> q\n");
    assert!(e.message.contains("priorit"), "{e}");
    check("machine parity x\nalphabet1: a\nstates: p\ninitial: p\npriorities: p=z\n", 5, "not a priority");
}

#[test]
fn dvpa_checks() {
    let head = "machine dvpa x\ncalls: c\nreturns: r\nstack: g\nstates: p\ninitial: p\n\n";
    check(&format!("{head}p pop r h -> p\n"), 8, "stack symbol");
    let two = head.replace("states: p\n", "states: p q\n");
    check(&format!("{two}p push c -> p g\np push c -> q g\n"), 9, "");
    check("machine dvpa x\ncalls: c\nreturns: c\nstack: g\nstates: p\ninitial: p\n", 3, "two parts");
}

#[test]
fn structure_errors() {
    check("machine nfb x\n", 1, "unknown machine kind");
    check("machine nfa x\nalphabet: a\nalphabet: a\n", 3, "declared twice");
    check("machine nfa x\nalphabet: a\nstates: p\ninitial: p\np a p\n", 5, "expected");
    check("machine nfa x\npriorities: p=1\n", 2, "not a declaration");
}
