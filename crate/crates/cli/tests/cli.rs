use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn tgraded(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tgraded")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn exported_operator_checks_as_rota_baxter() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("a.bundle");
    assert_eq!(code(&tgraded(&["paper", "export", "15.15(a)", "-o", path(&file)])), 0);
    let o = tgraded(&["check", "--law", "rota-baxter", path(&file)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = tgraded(&["check", "--law", "rota-baxter", "--weight", "3/2", path(&file)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn failing_law_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("h.bundle");
    assert_eq!(code(&tgraded(&["paper", "export", "15.17(h)", "-o", path(&file)])), 0);
    let o = tgraded(&["check", "--law", "rota-baxter", path(&file)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("fail"), "{}", stdout(&o));
}

#[test]
fn lie_on_noncommutative_grading_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("nc.bundle");
    fs::write(
        &file,
        "tgraded-bundle 1\nkind lie-t-algebra\nfield rational\ngrades a b\ncayley\n0 0\n1 1\ndims 1 1\nbilinear bracket\nend\n",
    )
    .unwrap();
    let o = tgraded(&["check", "--law", "lie", path(&file)]);
    assert_eq!(code(&o), 2, "{}{}", stdout(&o), stderr(&o));
    assert!(stderr(&o).contains("commutative"), "{}", stderr(&o));
}

#[test]
fn malformed_bundle_reports_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.bundle");
    fs::write(&file, "tgraded-bundle 1\nkind t-algebra\nfield rational\ngrades e\ncayley\n0\ndims 2\nbilinear mul\n0 0 1 1 3 1\nend\n").unwrap();
    let o = tgraded(&["check", "--law", "t-algebra", path(&file)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("bad.bundle:9"), "{}", stderr(&o));
}

#[test]
fn derive_then_dualize_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (a, d, co) = (dir.path().join("a"), dir.path().join("d"), dir.path().join("co"));
    assert_eq!(code(&tgraded(&["paper", "export", "15.15(a)", "-o", path(&a)])), 0);
    let o = tgraded(&["derive", "--construction", "rb-to-dendriform", "--weight", "1", path(&a), "-o", path(&d)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(code(&tgraded(&["check", "--law", "dendriform", path(&d)])), 0);
    assert_eq!(code(&tgraded(&["dualize", path(&d), "-o", path(&co)])), 0);
    let o = tgraded(&["check", "--law", "dendriform-t-coalgebra", path(&co)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    // a symbolic weight cannot be pushed through a construction
    assert_eq!(code(&tgraded(&["derive", "--construction", "rb-to-dendriform", path(&a)])), 2);
}

#[test]
fn search_over_f3_matches_listing() {
    let o = tgraded(&["search", "--field", "fp:3", "--weight", "1"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("operators: 12"), "{}", stdout(&o));
}

#[test]
fn search_refuses_over_budget() {
    let o = tgraded(&["search", "--field", "fp:3", "--weight", "1", "--algebra", "taft"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("budget"), "{}", stderr(&o));
    assert_eq!(code(&tgraded(&["search", "--field", "rational", "--weight", "1"])), 2);
}

#[test]
fn single_table_flags_the_unit_grade_entry() {
    let o = tgraded(&["paper", "verify", "--example", "15.12.1"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("u1·1_π ≺ u1·q"), "{}", stdout(&o));
}

#[test]
fn unknown_example_is_a_usage_error() {
    assert_eq!(code(&tgraded(&["paper", "verify", "--example", "99.9"])), 2);
    assert_eq!(code(&tgraded(&["check", "--law", "no-such-law", "x"])), 2);
}

#[test]
fn full_corpus_matches_annotations() {
    let o = tgraded(&["paper", "verify"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("summary:"));
}
