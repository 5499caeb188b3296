use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_listlogic"));
    for var in [
        "LISTLOGIC_STEP_BUDGET",
        "LISTLOGIC_EXPANSION_BUDGET",
        "LISTLOGIC_MAX_SIZE",
    ] {
        c.env_remove(var);
    }
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn check_true_formula() {
    let d = TempDir::new().unwrap();
    let f = write(d.path(), "f.ll", "exists $x in ['a] . $x='a");
    let o = run(&["check", "--formula", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("true"));
}

#[test]
fn check_false_formula_exits_one() {
    let d = TempDir::new().unwrap();
    let f = write(d.path(), "f.ll", "forall $x in ['a, 'b] . $x = 'a");
    let s = write(d.path(), "s.json", r#"{"urelements": ["a", "b"], "predicates": {}}"#);
    let o = run(&[
        "check",
        "--formula",
        f.to_str().unwrap(),
        "--structure",
        s.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("false\n"));
}

#[test]
fn unsat_exits_one() {
    let d = TempDir::new().unwrap();
    let f = write(d.path(), "f.ll", "P(['a]) & !P(['a])");
    let o = run(&["sat", "--formula", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).lines().next(), Some("UNSAT"));
}

#[test]
fn sat_witness_file_satisfies_the_formula() {
    let d = TempDir::new().unwrap();
    let f = write(d.path(), "f.ll", "exists $x in ['a,'b] . P($x) & !P('a)");
    let w = d.path().join("w.json");
    let o = run(&[
        "sat",
        "--formula",
        f.to_str().unwrap(),
        "--witness",
        w.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let witness: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&w).unwrap()).unwrap();
    assert_eq!(witness["predicates"]["P"]["tuples"], serde_json::json!([["'b"]]));
    let o = run(&[
        "check",
        "--formula",
        f.to_str().unwrap(),
        "--structure",
        w.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn generated_inequality_checks_true_when_languages_differ() {
    let d = TempDir::new().unwrap();
    let o = run(&["gen", "regex-ineq", "--e1", "a", "--e2", "(a|b)"]);
    assert_eq!(o.status.code(), Some(0));
    let f = write(d.path(), "f.ll", &stdout(&o));
    let o = run(&["check", "--formula", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));

    let o = run(&["gen", "regex-ineq", "--e1", "(a.(b|a))", "--e2", "((a.a)|(a.b))"]);
    let f = write(d.path(), "g.ll", &stdout(&o));
    let o = run(&["check", "--formula", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn parse_reports_metrics() {
    let d = TempDir::new().unwrap();
    let t = write(d.path(), "t.ll", "rec(nil;$g,$b. cons($g,$b); ['a])  # a comment");
    let o = run(&["parse", t.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("rec(nil; $g, $b. cons($g, $b); ['a])"));
    assert!(lines.next().unwrap().contains("kind=term rank=1"));

    let o = run(&["parse", t.to_str().unwrap(), "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["rank"], 1);
    assert_eq!(v["flat"], true);
    assert_eq!(v["explicit"], true);
}

#[test]
fn eval_with_bindings() {
    let d = TempDir::new().unwrap();
    let t = write(d.path(), "t.ll", "cons($v, head($w))");
    let o = run(&[
        "eval",
        "--term",
        t.to_str().unwrap(),
        "--env",
        "v=['a]",
        "--env",
        "$w=['b, 'c]",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("['a, 'c]"));
}

#[test]
fn unfold_prints_standard_term_and_sizes() {
    let d = TempDir::new().unwrap();
    let t = write(d.path(), "t.ll", "iter<2,u>(nil; $y. cons($y, 'a))");
    let o = run(&["unfold", "--term", t.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["output"], "cons(cons(nil, 'a), 'a)");
    assert_eq!(v["input_rank"], 1);
}

#[test]
fn explist_metadata() {
    let o = run(&[
        "gen", "explist", "--k", "1", "--n", "3", "--flavor", "iter_b", "--format", "json",
    ]);
    let v = json(&o);
    assert_eq!(v["length"], 8);
    assert_eq!(v["flavor"], "iter_b");
    assert!(v["calibration"].as_str().unwrap().contains("binary"));
    let o = run(&["gen", "explist", "--k", "3", "--n", "1", "--flavor", "iter_u"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn domino_commands() {
    let d = TempDir::new().unwrap();
    let sys = write(
        d.path(),
        "d.json",
        r#"{"tiles": 2, "H": [[1,2],[2,1]], "V": [[1,2],[2,1]], "init": [1]}"#,
    );
    let o = run(&["oracle", "tiling", "--system", sys.to_str().unwrap(), "--side", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1 2\n2 1\n");

    let o = run(&["gen", "domino", "--system", sys.to_str().unwrap(), "--side", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let axioms = stdout(&o);
    assert!(axioms.lines().count() > 1);
    let theory = axioms.lines().map(|l| format!("({l})")).collect::<Vec<_>>().join(" & ");
    let f = write(d.path(), "theory.ll", &theory);
    let o = run(&["sat", "--formula", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));

    let stuck = write(d.path(), "e.json", r#"{"tiles": 1, "H": [[1,1]], "V": [], "init": []}"#);
    let o = run(&["oracle", "tiling", "--system", stuck.to_str().unwrap(), "--side", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "none");
}

#[test]
fn regex_language_listing() {
    let o = run(&["oracle", "regex-lang", "((a|b)^2)"]);
    assert_eq!(stdout(&o), "aa\nab\nba\nbb\n");
    let o = run(&["oracle", "regex-lang", "((a|b)^^1,3)", "--max-words", "10"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn budgets_are_reported_distinctly() {
    let d = TempDir::new().unwrap();
    let f = write(
        d.path(),
        "f.ll",
        "forall $x in iter<10,u>(['a]; $y. conc($y, $y)) . $x = 'a",
    );
    let o = bin()
        .args(["check", "--formula", f.to_str().unwrap(), "--format", "json"])
        .env("LISTLOGIC_STEP_BUDGET", "50")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let v = json(&o);
    assert_eq!(v["status"], "error");
    assert_eq!(v["error"]["kind"], "budget");
    assert_eq!(v["error"]["budget_exceeded"], true);
    assert_eq!(v["budgets"]["step_budget"], 50);
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));

    let o = bin()
        .args(["sat", "--formula", f.to_str().unwrap(), "--expansion-budget", "3"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn errors_exit_two() {
    let d = TempDir::new().unwrap();
    let bad = write(d.path(), "bad.ll", "exists $x in . true");
    assert_eq!(
        run(&["check", "--formula", bad.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["check", "--formula", "/nonexistent/file"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let open = write(d.path(), "open.ll", "P($v)");
    let o = run(&["sat", "--formula", open.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["error"]["budget_exceeded"], false);
}

#[test]
fn json_records_are_stable() {
    let d = TempDir::new().unwrap();
    let f = write(
        d.path(),
        "f.ll",
        "forall $x sub ['a, 'b, 'c] . exists $y in $x . $y = 'a",
    );
    let a = run(&["check", "--formula", f.to_str().unwrap(), "--format", "json"]);
    let b = run(&[
        "check",
        "--formula",
        f.to_str().unwrap(),
        "--format",
        "json",
        "--sequential",
    ]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["counters"]["substitutions"], 6);
}
