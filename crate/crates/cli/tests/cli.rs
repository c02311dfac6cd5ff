use std::fs;
use std::process::{Command, Output};

fn zeck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zeck"))
        .args(args)
        .output()
        .expect("spawn zeck")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn encode_and_decode() {
    let o = zeck(&["encode", "6"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "1001");
    assert_eq!(stdout(&zeck(&["encode", "0"])).trim(), "0");
    assert_eq!(stdout(&zeck(&["decode", "1001"])).trim(), "6");
    assert_eq!(zeck(&["decode", "0110"]).status.code(), Some(2));
    assert_eq!(zeck(&["decode", "012"]).status.code(), Some(2));
}

#[test]
fn published_table_matches() {
    let o = zeck(&["verify", "oeis", "A385021"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(zeck(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(zeck(&["build", "affine", "0", "0"]).status.code(), Some(2));
}

#[test]
fn export_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    let o = zeck(&["build", "affine", "3", "1", "--out", a.to_str().unwrap()]);
    assert!(o.status.success());
    let o = zeck(&["export", a.to_str().unwrap(), "--out", b.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(
        fs::read_to_string(&a).unwrap(),
        fs::read_to_string(&b).unwrap()
    );
    let o = zeck(&[
        "verify",
        "oracle",
        "affine",
        "3",
        "1",
        "--bound",
        "200",
        "--file",
        b.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn corrupted_file_fails_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let o = zeck(&["build", "add-const", "5", "--out", a.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(&a).unwrap();
    let bad: String = text
        .lines()
        .map(|l| {
            if l.starts_with("accepting") {
                "accepting 0".to_string()
            } else {
                l.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join("\n");
    fs::write(&a, bad + "\n").unwrap();
    let o = zeck(&[
        "verify",
        "oracle",
        "add-const",
        "5",
        "--bound",
        "100",
        "--file",
        a.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("result=fail"));
}

#[test]
fn pipeline_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let r = dir.path().join("report.txt");
    let o = zeck(&[
        "pipeline",
        "subseq",
        "fib-word",
        "2",
        "1",
        "--report",
        r.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let report = fs::read_to_string(&r).unwrap();
    assert!(report.lines().all(|l| l.starts_with("stage=")));
    assert!(report.contains("determinize"));
}

#[test]
fn stats_go_to_stderr() {
    let o = zeck(&["subseq", "shift", "fib-thue-morse", "2", "--stats"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("states="));
    assert!(stdout(&o).starts_with("arity 1"));
}
