//! Integration tests for the command-line interface.

use std::fs;
use std::process::{Command, Output};

fn platbook(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_platbook"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn openbook_figure_eight() {
    let out = platbook(&["openbook", "--closure", "-2 1 -2 1", "--strands", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("page genus=0"));
    assert!(text.contains("all certificates pass"));
    assert!(text.contains("knot"));
}

#[test]
fn verify_is_deterministic() {
    let a = platbook(&["verify", "--closure", "1 1 1", "--strands", "2"]);
    let b = platbook(&["verify", "--closure", "1 1 1", "--strands", "2"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_with_ambient_file() {
    let dir = std::env::temp_dir().join("platbook-cli-ambient");
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ambient.txt");
    fs::write(&path, "-1\n").unwrap();
    let out = platbook(&[
        "verify",
        "--closure",
        "1 1 1",
        "--strands",
        "2",
        "--ambient",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("homology divisors"));
}

#[test]
fn compile_writes_artifacts() {
    let dir = std::env::temp_dir().join("platbook-cli-out");
    let _ = fs::remove_dir_all(&dir);
    let out = platbook(&[
        "compile",
        "--closure",
        "1 1 1",
        "--strands",
        "2",
        "--positive-monodromy",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    for f in ["openbook.txt", "events.txt", "diagram.txt", "moves.txt", "generators.txt", "report.txt"] {
        assert!(dir.join(f).exists(), "missing {f}");
    }
    assert!(fs::read_to_string(dir.join("report.txt"))
        .unwrap()
        .contains("all certificates pass"));
}

#[test]
fn purify_and_comb_print_normal_forms() {
    let out = platbook(&["purify", "--closure", "1", "--strands", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("plat 4 shifted"));

    let out = platbook(&["comb", "1 1", "--strands", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "A 1 2 ^ 1");
}

#[test]
fn legendrian_subcommands() {
    let out = platbook(&[
        "legendrian", "d3", "--sigma", "-2", "--chi", "4", "--csq", "-10", "--q", "2",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "-1");

    let out = platbook(&["legendrian", "expand", "-3/2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "[-3, -2]; stabilizations [2, 0]");

    let out = platbook(&["legendrian", "realize", "--from", "0,1", "--to", "0,3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("S+ (-1, 2)"));
    assert!(text.contains("D- (0, 3)"));

    let out = platbook(&["legendrian", "realize", "--from", "0,1", "--to", "1,1"]);
    assert!(!out.status.success());
}

#[test]
fn bad_input_fails_cleanly() {
    let out = platbook(&["openbook", "--closure", "zebra"]);
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("error"));

    let out = platbook(&["verify"]);
    assert!(!out.status.success());
}
