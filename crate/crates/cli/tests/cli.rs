use std::path::Path;
use std::process::Command;

use netperturb_cli::{run, Outcome};
use netperturb_core::Cost;
use serde_json::Value;

const STEM: &str = r#"{"n":2,"q":1,"a_edges":[{"from":0,"to":1}],"b_edges":[{"from":0,"to":0}]}"#;
const K5: &str = r#"{"n":5,"edges":[[0,1],[0,2],[0,3],[0,4],[1,2],[1,3],[1,4],[2,3],[2,4],[3,4]]}"#;

fn go(args: &[&str]) -> Outcome {
    run(std::iter::once("netperturb").chain(args.iter().copied()))
}

fn json(o: &Outcome) -> Value {
    serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", o.stdout))
}

fn error_json(o: &Outcome) -> Value {
    assert_eq!(o.stderr.lines().count(), 1, "{}", o.stderr);
    serde_json::from_str(&o.stderr).unwrap()
}

fn file(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn value(o: &Outcome) -> Cost {
    json(o)["value"].as_str().unwrap().parse().unwrap()
}

#[test]
fn check_reports_status() {
    let d = tempfile::tempdir().unwrap();
    let o = go(&["check", &file(d.path(), "stem.json", STEM)]);
    assert_eq!(o.code, 0);
    let v = json(&o);
    assert_eq!(v["command"], "check");
    assert_eq!(v["status"], "controllable");
    let split = r#"{"n":3,"q":1,"a_edges":[{"from":0,"to":1},{"from":0,"to":2}],"b_edges":[{"from":0,"to":0}]}"#;
    let o = go(&["check", &file(d.path(), "split.json", split)]);
    assert_eq!(o.code, 0);
    assert_eq!(json(&o)["status"], "uncontrollable");
    assert_eq!(json(&o)["details"]["rank_deficiency"], 1);
}

#[test]
fn insert_fig2() {
    let d = tempfile::tempdir().unwrap();
    let gen = go(&["gen", "fig2", "-n", "5"]);
    assert_eq!(gen.code, 0);
    let f = file(d.path(), "fig2_n5.json", &gen.stdout);
    let exact = go(&["insert", &f, "--exact"]);
    assert_eq!(exact.code, 0);
    assert_eq!(json(&exact)["value"], "5");
    assert_eq!(json(&exact)["method"], "exact");
    assert_eq!(json(&exact)["witness_edges"].as_array().unwrap().len(), 5);
    let approx = value(&go(&["insert", &f]));
    assert!(approx >= Cost::from_integer(5) && approx <= Cost::from_integer(8));
    let improved = go(&["insert", &f, "--improve", "10"]);
    assert_eq!(json(&improved)["value"], "5");
}

#[test]
fn infeasible_insertion_exits_2() {
    let d = tempfile::tempdir().unwrap();
    let p = r#"{"n":2,"q":1,"a_edges":[],"b_edges":[],"a_candidates":[{"from":0,"to":1}]}"#;
    let o = go(&["insert", &file(d.path(), "p.json", p)]);
    assert_eq!(o.code, 2);
    assert_eq!(json(&o)["status"], "infeasible");
    assert_eq!(json(&o)["value"], Value::Null);
}

#[test]
fn clique_gadget_pipeline() {
    let d = tempfile::tempdir().unwrap();
    let src = file(d.path(), "k5.json", K5);
    let g = d.path().join("k5_gadget.json").display().to_string();
    let inst = d.path().join("k5_instance.json").display().to_string();
    let o = go(&["reduce", "clique", &src, "-k", "5", "-o", &g, "--instance", &inst]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(json(&o)["value"], "10");
    let o = go(&["delete-actuators", &g, "--exact"]);
    assert_eq!(json(&o)["value"], "10");
    let removed: Vec<u64> = json(&o)["witness_inputs"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    assert!(!removed.contains(&10));
    let o = go(&["verify", &inst]);
    assert_eq!(o.code, 0);
    assert_eq!(json(&o)["status"], "pass");
    // No directory entries besides the three files: writes leave no temporaries.
    assert_eq!(std::fs::read_dir(d.path()).unwrap().count(), 3);
}

#[test]
fn ham_and_preclusion_pipelines() {
    let d = tempfile::tempdir().unwrap();
    let path = file(d.path(), "g.json", r#"{"n":3,"edges":[[0,1],[1,2]]}"#);
    let bip = file(d.path(), "b.json", r#"{"n":2,"edges":[[0,0],[0,1],[1,0],[1,1]]}"#);
    for (kind, src, extra) in [("ham", &path, None), ("ham-fixed", &path, None), ("preclusion", &bip, Some("2"))] {
        let out = d.path().join(format!("{kind}.json")).display().to_string();
        let inst = d.path().join(format!("{kind}_i.json")).display().to_string();
        let mut args = vec!["reduce", kind, src.as_str(), "-o", &out, "--instance", &inst];
        if let Some(r) = extra {
            args.extend(["-r", r]);
        }
        let o = go(&args);
        assert_eq!(o.code, 0, "{}", o.stderr);
        let v = go(&["verify", &inst]);
        assert_eq!(json(&v)["status"], "pass", "{kind}");
    }
    let o = go(&["insert", &d.path().join("ham.json").display().to_string(), "--exact"]);
    assert_eq!(json(&o)["value"], "6");
    let o = go(&["delete-links", &d.path().join("preclusion.json").display().to_string(), "--exact-blocker"]);
    assert_eq!(json(&o)["value"], "2");
}

#[test]
fn tampered_instance_is_rejected() {
    let d = tempfile::tempdir().unwrap();
    let src = file(d.path(), "g.json", r#"{"n":2,"edges":[[0,1]]}"#);
    let out = d.path().join("p.json").display().to_string();
    let inst = d.path().join("i.json").display().to_string();
    assert_eq!(go(&["reduce", "ham", &src, "-o", &out, "--instance", &inst]).code, 0);
    let text = std::fs::read_to_string(&inst).unwrap().replace("\"threshold\": \"4\"", "\"threshold\": \"3\"");
    std::fs::write(&inst, text).unwrap();
    let o = go(&["verify", &inst]);
    assert_eq!(o.code, 1);
    error_json(&o);
}

#[test]
fn delete_links_modes() {
    let d = tempfile::tempdir().unwrap();
    let sys = r#"{"n":2,"q":1,"a_edges":[{"from":0,"to":1,"cost":"1/2"},{"from":1,"to":1}],"b_edges":[{"from":0,"to":0,"cost":"3"},{"from":0,"to":1,"cost":"2"}]}"#;
    let f = file(d.path(), "s.json", sys);
    let heuristic = go(&["delete-links", &f]);
    let exact = go(&["delete-links", &f, "--exact-blocker"]);
    assert_eq!(exact.code, 0);
    assert!(value(&heuristic) >= value(&exact));
    assert_eq!(json(&exact)["value"], "1.5");
    let inputs_only = go(&["delete-links", &f, "--input-links-only"]);
    for e in json(&inputs_only)["witness_edges"].as_array().unwrap() {
        assert_eq!(e["kind"], "input");
    }
    assert_eq!(json(&inputs_only)["value"], "3");
}

#[test]
fn delete_actuators_modes() {
    let d = tempfile::tempdir().unwrap();
    let sys = r#"{"n":2,"q":2,"a_edges":[{"from":0,"to":0},{"from":1,"to":1},{"from":0,"to":1}],"b_edges":[{"from":0,"to":0},{"from":1,"to":0}],"input_costs":["3","1"]}"#;
    let f = file(d.path(), "s.json", sys);
    for flag in [None, Some("--exact"), Some("--fastpath")] {
        let mut args = vec!["delete-actuators", f.as_str()];
        args.extend(flag);
        let o = go(&args);
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert_eq!(json(&o)["value"], "4");
    }
    assert_eq!(json(&go(&["delete-actuators", &f]))["method"], "formula");
    let no_loops = file(d.path(), "t.json", STEM);
    let o = go(&["delete-actuators", &no_loops, "--fastpath"]);
    assert_eq!(o.code, 1);
    assert!(error_json(&o)["error"].as_str().unwrap().contains("self-loop fast path inapplicable"));
    assert_eq!(json(&go(&["delete-actuators", &no_loops]))["value"], "1");
}

#[test]
fn parse_errors_are_single_line_json_with_position() {
    let d = tempfile::tempdir().unwrap();
    let o = go(&["check", &file(d.path(), "bad.json", "{\"n\": 2,\n  \"q\": 1,\n  oops}")]);
    assert_eq!(o.code, 1);
    let e = error_json(&o);
    assert_eq!(e["line"], 3);
    assert!(e["column"].as_u64().is_some());
    let o = go(&["check", &file(d.path(), "range.json", r#"{"n":1,"q":1,"b_edges":[{"from":0,"to":4}]}"#)]);
    let e = error_json(&o);
    assert!(e["path"].as_str().unwrap().contains("b_edges"), "{e}");
    let o = go(&["check", &d.path().join("missing.json").display().to_string()]);
    assert_eq!(o.code, 1);
    error_json(&o);
}

#[test]
fn usage_errors_exit_1() {
    for args in [&["insert"][..], &["frobnicate"], &["insert", "x", "--exact", "--improve", "2"], &["gen", "fig2", "-n", "2"]] {
        let o = go(args);
        assert_eq!(o.code, 1, "{args:?}");
        error_json(&o);
    }
    assert_eq!(go(&["--help"]).code, 0);
}

#[test]
fn text_output() {
    let d = tempfile::tempdir().unwrap();
    let o = go(&["check", &file(d.path(), "stem.json", STEM), "--out", "text"]);
    assert_eq!(o.stdout, "check: controllable\nvalue: 2\nmethod: exact\n");
}

#[test]
fn generators_are_seeded() {
    let a = go(&["gen", "random", "problem", "-n", "4", "-q", "2", "--seed", "3"]);
    let b = go(&["gen", "random", "problem", "-n", "4", "-q", "2", "--seed", "3"]);
    assert_eq!(a, b);
    let c = go(&["gen", "random", "system", "-n", "4", "-q", "2", "--seed", "3"]);
    let d = tempfile::tempdir().unwrap();
    let f = file(d.path(), "s.json", &c.stdout);
    assert_eq!(json(&go(&["check", &f]))["status"], "controllable");
    let s = go(&["gen", "random", "selfloop", "-n", "5", "-q", "3", "--seed", "1"]);
    let f = file(d.path(), "l.json", &s.stdout);
    assert_eq!(json(&go(&["delete-actuators", &f]))["method"], "formula");
}

#[test]
fn cap_override_from_environment() {
    let d = tempfile::tempdir().unwrap();
    let f = file(d.path(), "f.json", &go(&["gen", "fig2", "-n", "8"]).stdout);
    let bin = env!("CARGO_BIN_EXE_netperturb");
    let small = Command::new(bin).args(["insert", &f, "--exact"]).env("NETPERTURB_CAP", "5").output().unwrap();
    assert_eq!(small.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&small.stderr).contains("exceeds cap 5"));
    let bad = Command::new(bin).args(["insert", &f, "--exact"]).env("NETPERTURB_CAP", "zero").output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let ok = Command::new(bin).args(["insert", &f, "--exact"]).env_remove("NETPERTURB_CAP").output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["value"], "8");
}
