use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_teamltl"));
    cmd.args(args).env_remove("TEAMLTL_LIMITS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = run(&full);
    (code(&o), serde_json::from_str(&stdout(&o)).expect("valid JSON"))
}

#[test]
fn example_team_fails_globally_bor() {
    let team = fixture("ex1.team");
    let o = run(&["eval", "--semantics", "lax", "--team", &team, "-f", "G (p or q)"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o), "false\n");
    let o = run(&["eval", "--semantics", "strict", "--team", &team, "-f", "G (p | q)"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "true\n");
}

#[test]
fn dnf_of_globally_bor() {
    let o = run(&["dnf", "-f", "G (p or q)"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "[0] G p\n[1] G q\n");
    let (c, v) = json(&["dnf", "-f", "G (p or q)"]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["bor_count"], 1);
    assert_eq!(v["result"]["disjuncts"], serde_json::json!(["G p", "G q"]));
    assert_eq!(v["verdict"], Value::Null);
}

#[test]
fn dedupe_drops_repeated_disjuncts() {
    let (_, plain) = json(&["dnf", "-f", "(p or p) & G q"]);
    let (_, dedup) = json(&["dnf", "-f", "(p or p) & G q", "--dedupe"]);
    assert_eq!(plain["result"]["disjuncts"].as_array().unwrap().len(), 2);
    assert_eq!(dedup["result"]["disjuncts"].as_array().unwrap().len(), 1);
}

#[test]
fn model_checking_picks_first_disjunct() {
    let k = fixture("single_p.kripke");
    let (c, v) = json(&["mc", "--kripke", &k, "-f", "G p or G q", "--mode", "dnf"]);
    assert_eq!(c, 0);
    assert_eq!(v["verdict"], true);
    assert_eq!(v["disjunct_index"], 0);
}

#[test]
fn model_checking_failure_reports_counterexamples() {
    let k = fixture("two_state.kripke");
    let (c, v) = json(&["mc", "--kripke", &k, "-f", "G p or G q"]);
    assert_eq!(c, 1);
    assert_eq!(v["verdict"], false);
    assert_eq!(v["witness"], serde_json::json!(["{p} / {q}"]));
    let o = run(&["mc", "--kripke", &k, "-f", "G p | G q", "--mode", "ltl"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o), "verdict: false\nwitness: {p} / {q}\n");
}

#[test]
fn quasiflat_model_checking_lists_existential_parts() {
    let k = fixture("two_state.kripke");
    let o = run(&["mc", "--kripke", &k, "-f", "E F q & p", "--mode", "quasiflat"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("verdict: true\ndisjunct_index: 0\n"), "{text}");
    assert!(text.contains("[0] beta 0 holds: top U q ({p} / {q})"), "{text}");
}

#[test]
fn satisfiability_modes() {
    let (c, v) = json(&["sat", "-f", "E p & E q & G (p | q)", "--mode", "quasiflat"]);
    assert_eq!(c, 0);
    assert_eq!(v["witness"].as_array().unwrap().len(), 2);
    let (c, v) = json(&["sat", "-f", "G p & F !p", "--mode", "ltl"]);
    assert_eq!(c, 1);
    assert_eq!(v["witness"], Value::Null);
    let (c, v) = json(&["sat", "-f", "(G p & F !p) or X q"]);
    assert_eq!(c, 0);
    assert_eq!(v["disjunct_index"], 1);
}

#[test]
fn translation_and_tef_evaluation() {
    let o = run(&["translate", "-f", "q ME p", "--direction", "to-ltl"]);
    assert_eq!(stdout(&o), "p U (p & q)\n");
    let o = run(&["translate", "-f", "G p & q M p", "--direction", "to-ctl"]);
    assert_eq!(stdout(&o), "GA p & q ME p\n");
    let o = run(&["translate", "-f", "p U q", "--direction", "to-ctl"]);
    assert_eq!(code(&o), 2);

    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "trace a = {{p}} / {{q}}\ntrace b = {{p}} {{p}} / {{q}}").unwrap();
    let team = f.path().to_str().unwrap();
    let o = run(&["tefeval", "--team", team, "-f", "p UE q"]);
    assert_eq!((code(&o), stdout(&o)), (0, "true\n".into()));
    let o = run(&["tefeval", "--team", team, "-f", "p UA q"]);
    assert_eq!((code(&o), stdout(&o)), (1, "false\n".into()));
}

#[test]
fn classify_reports_every_field() {
    let (c, v) = json(&["classify", "-f", "G (p or q)"]);
    assert_eq!(c, 0);
    let info = &v["result"];
    assert_eq!(info["bor_count"], 1);
    assert_eq!(info["is_left_flat"], false);
    assert_eq!(info["is_left_dc"], true);
    let o = run(&["classify", "-f", "G (p or q)"]);
    assert_eq!(stdout(&o).lines().count(), 8);
}

#[test]
fn audit_bound_keeps_verdicts() {
    let team = fixture("ex1.team");
    for f in ["p U q", "G (p or q)", "(E q) U !p", "F (p or q)"] {
        let auto = run(&["eval", "--semantics", "lax", "--team", &team, "-f", f]);
        let audit = run(&["eval", "--semantics", "lax", "--team", &team, "-f", f, "--audit-bound", "2"]);
        assert_eq!(stdout(&auto), stdout(&audit), "{f}");
    }
    assert_eq!(code(&run(&["eval", "--semantics", "lax", "--team", &team, "-f", "p", "--audit-bound", "0"])), 2);
}

#[test]
fn exit_codes_for_errors() {
    let team = fixture("ex1.team");
    let o = run(&["eval", "--semantics", "lax", "--team", &team, "-f", "G (p"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("syntax error"));
    assert_eq!(code(&run(&["quasiflat", "-f", "G ~p"])), 2);
    assert_eq!(code(&run(&["eval", "--semantics", "lax", "--team", "/nonexistent.team", "-f", "p"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["eval", "--team", &team, "-f", "p"])), 2);

    let deep = run_env(&["eval", "--semantics", "lax", "--team", &team, "-f", "G p"], &[("TEAMLTL_LIMITS", "depth=1")]);
    assert_eq!(code(&deep), 3);
    let bad = run_env(&["eval", "--semantics", "lax", "--team", &team, "-f", "p"], &[("TEAMLTL_LIMITS", "depth=x")]);
    assert_eq!(code(&bad), 2);

    let (c, v) = json(&["dnf", "-f", "p &"]);
    assert_eq!(c, 2);
    assert_eq!(v["kind"], "syntax");
}

fn without_timings(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timings");
    v
}

fn invocations() -> Vec<Vec<String>> {
    let team = fixture("ex1.team");
    let k = fixture("two_state.kripke");
    let cmds: Vec<Vec<&str>> = vec![
        vec!["classify", "-f", "G (p or q) & E r"],
        vec!["dnf", "-f", "G (p or q) & (X r or s)"],
        vec!["quasiflat", "-f", "~(G p & E q) & (r or G s)"],
        vec!["eval", "--semantics", "lax", "--team", &team, "-f", "G (p or q)"],
        vec!["eval", "--semantics", "strict", "--team", &team, "-f", "p U q"],
        vec!["mc", "--kripke", &k, "-f", "G p or G q or F q"],
        vec!["mc", "--kripke", &k, "-f", "E G p & G (p | q)", "--mode", "quasiflat"],
        vec!["mc", "--kripke", &k, "-f", "G p", "--mode", "ltl"],
        vec!["sat", "-f", "E p & E q & G !r", "--mode", "quasiflat"],
        vec!["sat", "-f", "~(G p) & G (p | q)", "--mode", "quasiflat"],
        vec!["translate", "-f", "X (p or GA q)", "--direction", "to-ltl"],
        vec!["tefeval", "--team", &team, "-f", "XA q"],
    ];
    cmds.into_iter().map(|c| c.into_iter().map(String::from).collect()).collect()
}

#[test]
fn reports_are_deterministic() {
    for args in invocations() {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = run(&args);
        let b = run(&args);
        assert!(code(&a) <= 1, "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        let (ca, ja) = json(&args);
        let (cb, jb) = json(&args);
        assert_eq!(ca, code(&a));
        assert_eq!(ca, cb);
        assert_eq!(without_timings(ja), without_timings(jb), "{args:?}");
    }
}

#[test]
fn json_reports_round_trip() {
    for args in invocations() {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let mut full = vec!["--json"];
        full.extend_from_slice(&args);
        let text = stdout(&run(&full));
        let v: Value = serde_json::from_str(&text).unwrap();
        for key in ["verdict", "witness", "disjunct_index", "timings"] {
            assert!(v.get(key).is_some(), "{key} missing from {text}");
        }
        assert!(v["timings"]["run_ms"].as_f64().unwrap() >= 0.0);
        let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(v, again);
    }
}

#[test]
fn jobs_do_not_change_reports() {
    let k = fixture("two_state.kripke");
    // Only `G (p | q)` holds on both traces of the structure.
    let f = "G q or F q or X G p or G (p | q) or G p";
    let base = without_timings(json(&["mc", "--kripke", &k, "-f", f]).1);
    for j in ["2", "4", "8"] {
        let v = without_timings(json(&["--jobs", j, "mc", "--kripke", &k, "-f", f]).1);
        assert_eq!(v, base, "jobs {j}");
    }
    assert_eq!(base["verdict"], true);
    let listing = json(&["dnf", "-f", f]).1["result"]["disjuncts"].clone();
    let first = listing.as_array().unwrap().iter().position(|d| d == "G (p | q)").unwrap();
    assert_eq!(base["disjunct_index"], first);
}
