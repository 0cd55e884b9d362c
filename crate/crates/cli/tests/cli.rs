use std::fs;
use std::process::{Command, Output};

fn frankl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frankl"))
        .args(args)
        .env_remove("FRANKL_CACHE")
        .output()
        .expect("run frankl")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn solve_prints_value() {
    let o = frankl(&["solve", "--model", "f", "--n", "3", "--param", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "value=5\n");
    let o = frankl(&["solve", "--model", "g", "--n", "5", "--param", "24"]);
    assert_eq!(stdout(&o), "value=14\n");
}

#[test]
fn solve_writes_witness() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.txt");
    let o = frankl(&[
        "solve",
        "--model",
        "ft",
        "--n",
        "4",
        "--param",
        "5",
        "--witness",
        w.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = fs::read_to_string(&w).unwrap();
    assert!(text.starts_with("n=4\n"));
    let o = frankl(&["inspect", "--in", w.to_str().unwrap()]);
    let first = stdout(&o).lines().next().unwrap().to_string();
    assert!(first.contains("degree=5"), "{first}");
    assert!(first.ends_with("union_closed=true"), "{first}");
}

#[test]
fn infeasible_and_aborted_exit_one() {
    let o = frankl(&["solve", "--model", "gt", "--n", "3", "--param", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "infeasible\n");
    let o = frankl(&[
        "solve",
        "--model",
        "f",
        "--n",
        "7",
        "--param",
        "20",
        "--budget-nodes",
        "100",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("aborted\n"));
}

#[test]
fn bad_input_exits_two() {
    for args in [
        &["solve", "--model", "f", "--n", "17", "--param", "1"][..],
        &["solve", "--model", "f", "--n", "3", "--param", "0"],
        &["solve", "--model", "h", "--n", "3", "--param", "1"],
        &["grid", "--model", "f", "--n", "5..3", "--param", "1"],
        &["verify", "--grid-spec", "f:1..3"],
    ] {
        let o = frankl(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn grid_tsv() {
    let o = frankl(&["grid", "--model", "f", "--n", "1..3", "--param", "1..3"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "a\\n\t1\t2\t3\n1\t2\t2\t2\n2\t2\t4\t4\n3\t2\t4\t5\n"
    );
}

#[test]
fn grid_uses_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.txt");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_frankl"))
            .args(["grid", "--model", "g", "--n", "2..3", "--param", "1..4"])
            .env("FRANKL_CACHE", &cache)
            .output()
            .unwrap()
    };
    let first = run();
    assert!(cache.exists());
    let lines = fs::read_to_string(&cache).unwrap().lines().count();
    let second = run();
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(fs::read_to_string(&cache).unwrap().lines().count(), lines);
}

#[test]
fn verify_small_grid_passes() {
    let o = frankl(&[
        "verify",
        "--grid-spec",
        "f:1..4:1..8",
        "--grid-spec",
        "g:1..4:1..16",
        "--analytic",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("CHECK ")));
    assert!(!out
        .lines()
        .any(|l| l.starts_with("CHECK ") && l.ends_with(" fail")));
}

#[test]
fn export_lp_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.lp");
    let o = frankl(&[
        "export-lp",
        "--model",
        "f",
        "--n",
        "2",
        "--param",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let golden = include_str!("../../core/tests/golden/f_2_2.lp");
    assert_eq!(fs::read_to_string(&path).unwrap(), golden);
    let o = frankl(&["export-lp", "--model", "f", "--n", "2", "--param", "2"]);
    assert_eq!(stdout(&o), golden);
}

#[test]
fn closure_of_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.txt");
    fs::write(&path, "n=3\n1\n2\n3\n").unwrap();
    let o = frankl(&["closure", "--in", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1 + 7);
}

#[test]
fn inspect_intro_family() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.txt");
    fs::write(&path, "n=3\n{}\n1,2\n1,3\n1,2,3\n").unwrap();
    let o = frankl(&["inspect", "--in", path.to_str().unwrap()]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(
        out.lines().next().unwrap(),
        "m=4 n=3 degree=3 ratio=3/4 union_closed=true"
    );
    assert!(out.contains("frequencies=3,2,2"));
}

#[test]
fn missing_file_is_an_error() {
    let o = frankl(&["inspect", "--in", "/nonexistent/family.txt"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}
