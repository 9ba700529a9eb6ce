mod common;

use std::path::Path;

use mumall::cli::main_with_args;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["mumall"];
    argv.extend_from_slice(args);
    let code = main_with_args(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn corpus(name: &str) -> String {
    common::corpus_path(name).display().to_string()
}

fn s(p: &Path) -> String {
    p.display().to_string()
}

#[test]
fn prove_graph_goals_in_order() {
    let (code, out, _) = run(&["prove", &corpus("graph.mu")]);
    assert_eq!(code, 0);
    let names: Vec<&str> = out.lines().map(|l| l.split(':').next().unwrap()).collect();
    assert_eq!(names, ["not_adjacent", "reach", "unreachable"]);
    assert!(out.lines().all(|l| l.contains("PROVED")));
}

#[test]
fn single_goal_selection() {
    let (code, out, _) = run(&["prove", &corpus("graph.mu"), "--goal", "reach"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 1);
    let (code, _, err) = run(&["prove", &corpus("graph.mu"), "--goal", "nope"]);
    assert_eq!(code, 2);
    assert!(err.contains("nope"));
}

#[test]
fn nat_identity_depends_on_init() {
    let (code, out, _) = run(&["prove", &corpus("nat.mu"), "--budget", "16"]);
    assert_eq!(code, 1);
    assert!(out.contains("BUDGET-EXCEEDED"));
    let (code, out, _) = run(&["prove", &corpus("nat.mu"), "--enable-init"]);
    assert_eq!(code, 0);
    assert!(out.contains("PROVED"));
}

#[test]
fn json_summary() {
    let (code, out, _) = run(&["prove", &corpus("graph.mu"), "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let records = v.as_array().unwrap();
    assert_eq!(records.len(), 3);
    assert_eq!(records[2]["goal"], "unreachable");
    assert_eq!(records[2]["outcome"], "PROVED");
    assert_eq!(records[2]["inductions"], 1);
}

#[test]
fn emitted_certificates_check() {
    let dir = tempfile::tempdir().unwrap();
    for file in ["subset.mu", "graph.mu", "bisim.mu"] {
        let (code, _, _) = run(&["prove", &corpus(file), "--emit-cert", &s(dir.path())]);
        assert_eq!(code, 0, "{file}");
    }
    for (goal, file) in [("subset", "subset.mu"), ("reach", "graph.mu"), ("unreachable", "graph.mu"), ("same", "bisim.mu")] {
        let cert = dir.path().join(format!("{goal}.muproof"));
        let (code, out, err) = run(&["check", &s(&cert), &corpus(file)]);
        assert_eq!(code, 0, "{goal}: {err}");
        assert!(out.contains("OK"));
    }
}

#[test]
fn check_failures() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = run(&["prove", &corpus("graph.mu"), "--emit-cert", &s(dir.path())]);
    assert_eq!(code, 0);
    let cert = dir.path().join("reach.muproof");
    let text = std::fs::read_to_string(&cert).unwrap();

    // Same goals, different file contents.
    let edited = dir.path().join("edited.mu");
    std::fs::write(&edited, std::fs::read_to_string(corpus("graph.mu")).unwrap() + "% edited\n").unwrap();
    let (code, _, err) = run(&["check", &s(&cert), &s(&edited)]);
    assert_eq!(code, 1);
    assert!(err.contains("hash"));

    // A rule tag swapped for another on the same side.
    let mutated = dir.path().join("mutated.muproof");
    std::fs::write(&mutated, text.replacen("rule OrR2", "rule OrR1", 1)).unwrap();
    let (code, _, err) = run(&["check", &s(&mutated), &corpus("graph.mu")]);
    assert_eq!(code, 1);
    assert!(err.contains("node root/0"), "{err}");

    // Not a certificate at all.
    std::fs::write(&mutated, "muproof 2\n").unwrap();
    let (code, _, err) = run(&["check", &s(&mutated), &corpus("graph.mu")]);
    assert_eq!(code, 2);
    assert!(err.contains("byte"));

    let (code, _, _) = run(&["check", &s(&dir.path().join("missing")), &corpus("graph.mu")]);
    assert_eq!(code, 2);
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.mu");
    std::fs::write(&bad, "signature a/0.\ngoal g: |- a = .\n").unwrap();
    let (code, _, err) = run(&["prove", &s(&bad)]);
    assert_eq!(code, 2);
    assert!(err.contains(":2:"), "{err}");
    let (code, _, _) = run(&["prove"]);
    assert_eq!(code, 2);
}
