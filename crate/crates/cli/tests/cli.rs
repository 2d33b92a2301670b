use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn ptaut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptaut")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

/// Runs `args` and saves stdout under the test temp dir.
fn save(name: &str, args: &[&str]) -> String {
    let o = ptaut(args);
    assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    let path: PathBuf = [env!("CARGO_TARGET_TMPDIR"), name].iter().collect();
    std::fs::write(&path, &o.stdout).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn classify_confluent_sample() {
    let o = ptaut(&["classify", &fixture("confluent.json")]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("confluent: true"));
    assert!(text.contains("ums: false"));
    assert!(text.contains("ptnfa: false"));

    let o = ptaut(&["--json", "classify", &fixture("confluent.json")]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["confluent"], true);
    assert_eq!(v["ums"], false);
    assert_eq!(v["self_loop_deterministic"], false);
    assert_eq!(v["depth"], 2);
}

#[test]
fn decide_universal_and_inclusion() {
    let o = ptaut(&["decide", "universal", &fixture("all_ab.json")]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "holds\n"));

    let o = ptaut(&["decide", "universal", &fixture("ends_in_a.json")]);
    assert_eq!((code(&o), stdout(&o).as_str()), (1, "fails\n\n"));

    let o = ptaut(&["decide", "includes", &fixture("ends_in_a.json"), &fixture("all_ab.json")]);
    assert_eq!(code(&o), 0);
    let o = ptaut(&["--json", "decide", "includes", &fixture("all_ab.json"), &fixture("ends_in_a.json")]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["witness"], "");

    let o = ptaut(&["decide", "equiv", &fixture("confluent.json"), &fixture("confluent.json")]);
    assert_eq!(code(&o), 0);
    // Both accept exactly the words ending in `a`.
    let o = ptaut(&["decide", "equiv", &fixture("confluent.json"), &fixture("ends_in_a.json")]);
    assert_eq!(code(&o), 0);
    let o = ptaut(&["decide", "equiv", &fixture("confluent.json"), &fixture("all_ab.json")]);
    assert_eq!((code(&o), stdout(&o).as_str()), (1, "fails\n\n"));
}

#[test]
fn decide_piecewise() {
    let o = ptaut(&["decide", "pt", &fixture("confluent.json")]);
    assert_eq!(code(&o), 1);
    let o = ptaut(&["--json", "decide", "pt", &fixture("all_ab.json")]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["minimal_dfa_states"], 1);

    let mk = save("mk_all.json", &["gen", "mk", &fixture("all_ab.json"), "-k", "1"]);
    assert_eq!(code(&ptaut(&["decide", "kpt", &mk, "-k", "1"])), 0);

    let mk = save("mk_ends.json", &["gen", "mk", &fixture("ends_in_a.json"), "-k", "1"]);
    let o = ptaut(&["decide", "kpt", &mk, "-k", "1"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o).lines().count(), 3);

    let o = ptaut(&["decide", "mink", &fixture("all_ab.json")]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "0\n"));
    let o = ptaut(&["--json", "decide", "mink", &fixture("even_a.json")]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["k"], serde_json::Value::Null);
}

#[test]
fn gen_words_and_automata() {
    let o = ptaut(&["gen", "wword", "-k", "2", "-n", "2"]);
    assert_eq!(stdout(&o), "a1 a1 a2 a1 a2\n");

    let a = save("a22.json", &["gen", "aknn", "-k", "2", "-n", "2"]);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&a).unwrap()).unwrap();
    assert_eq!(v["states"].as_array().unwrap().len(), 11);
    let o = ptaut(&["--json", "classify", &a]);
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["ptnfa"], true);

    let s = save("a22s.json", &["gen", "aknn", "-k", "2", "-n", "2", "--strip"]);
    assert_eq!(code(&ptaut(&["decide", "equiv", &a, &s])), 0);
    let o = ptaut(&["decide", "universal", &a]);
    assert_eq!(stdout(&o), "fails\na1 a1 a2 a1 a2\n");

    let d = save("dag.json", &["gen", "dag", &fixture("dag.json")]);
    let o = ptaut(&["decide", "universal", &d]);
    assert_eq!(stdout(&o), "fails\na a\n");

    let p = save("dnf_pt.json", &["gen", "dnf-ptnfa", &fixture("dnf.json")]);
    assert_eq!(code(&ptaut(&["decide", "universal", &p])), 1);

    let o = ptaut(&["gen", "dnf-podfas", &fixture("dnf.json")]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);

    let c = save("cnf.json", &["gen", "cnf3-unary", &fixture("cnf.json")]);
    assert_eq!(code(&ptaut(&["decide", "universal", &c])), 1);

    let h = save("pth.json", &["gen", "pt-hardness", &fixture("all_ab.json")]);
    assert_eq!(code(&ptaut(&["decide", "pt", &h])), 0);
    let o = ptaut(&["gen", "pt-hardness", &fixture("even_a.json")]);
    assert_eq!(code(&o), 2);

    let r = save("dnf_rpo.json", &["gen", "dnf-rponfa", &fixture("dnf.json")]);
    assert_eq!(code(&ptaut(&["decide", "pt", &r])), 1);
}

#[test]
fn gen_tm() {
    let t = save("tm.json", &["gen", "tm", &fixture("tm_accept.json"), "--word", "1"]);
    let o = ptaut(&["--json", "classify", &t]);
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["ptnfa"], true);

    let o = ptaut(&["gen", "tm", &fixture("tm_accept.json"), "--word", "1", "--emit-run"]);
    assert_eq!(code(&o), 0);
    let run = stdout(&o);
    assert_eq!(run.split_whitespace().count(), 19);
    assert!(run.starts_with("a1:# a1:1@q0 a1:# a2:1@qf"));

    let o = ptaut(&["gen", "tm", &fixture("tm_reject.json"), "--word", "1", "--emit-run"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o), "");

    let o = ptaut(&["gen", "tm", &fixture("tm_accept.json"), "--word", "1", "--max-states", "10"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn gen_random_is_seeded() {
    let a = ptaut(&["gen", "random", "--kind", "ponfa", "--seed", "5", "--size", "5"]);
    let b = ptaut(&["gen", "random", "--kind", "ponfa", "--seed", "5", "--size", "5"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = ptaut(&["gen", "random", "--kind", "ponfa", "--seed", "6", "--size", "5"]);
    assert_ne!(a.stdout, c.stdout);
    for kind in ["nfa", "dfa", "rponfa", "podfa", "dnf", "cnf3", "dag"] {
        let o = ptaut(&["gen", "random", "--kind", kind]);
        assert_eq!(code(&o), 0, "{kind}");
        serde_json::from_slice::<serde_json::Value>(&o.stdout).unwrap();
    }
}

#[test]
fn oracles() {
    let o = ptaut(&["oracle", "universal", &fixture("confluent.json"), "--max-len", "3"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (1, "fails\n\n"));
    let o = ptaut(&["oracle", "universal", &fixture("all_ab.json"), "--max-len", "4"]);
    assert_eq!(code(&o), 0);
    let o = ptaut(&["oracle", "equiv", &fixture("confluent.json"), &fixture("ends_in_a.json"), "--max-len", "4"]);
    assert_eq!(code(&o), 0);
    let o = ptaut(&["oracle", "equiv", &fixture("ends_in_a.json"), &fixture("even_a.json"), "--max-len", "4"]);
    assert_eq!(code(&o), 1);
    let o = ptaut(&["--json", "oracle", "kpt", &fixture("even_a.json"), "-k", "1", "--max-len", "4"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["witness"]["u"], "a");
    assert_eq!(v["witness"]["v"], "a a");
}

#[test]
fn export_dot_is_stable() {
    let a = ptaut(&["export", "dot", &fixture("confluent.json")]);
    let b = ptaut(&["export", "dot", &fixture("confluent.json")]);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("digraph \"confluent\" {"));
    assert_eq!(text.lines().filter(|l| l.contains("label=")).count(), 5);
    let o = ptaut(&["export", "dot", &fixture("single.json")]);
    assert_eq!(stdout(&o).lines().count(), 6);
}

#[test]
fn errors_and_budgets() {
    let o = ptaut(&["classify", &fixture("broken.json")]);
    assert_eq!(code(&o), 2);
    let o = ptaut(&["classify", &fixture("missing.json")]);
    assert_eq!(code(&o), 2);
    let o = ptaut(&["classify", "--bogus", &fixture("confluent.json")]);
    assert_eq!(code(&o), 2);
    let o = ptaut(&["--max-macrostates", "1", "decide", "universal", &fixture("even_a.json")]);
    assert_eq!(code(&o), 3);
}
