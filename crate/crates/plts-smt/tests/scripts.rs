//! End-to-end runs of the solver binary over stdin/stdout.

use std::io::Write;
use std::process::{Command, Stdio};

fn run_binary(script: &str) -> (String, bool) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_plts-smt"))
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .expect("solver binary should start");
    child
        .stdin
        .take()
        .expect("stdin piped")
        .write_all(script.as_bytes())
        .expect("write script");
    let output = child.wait_with_output().expect("solver should finish");
    (String::from_utf8(output.stdout).expect("utf-8 output"), output.status.success())
}

#[test]
fn binary_answers_trivial_scripts() {
    let (out, ok) = run_binary("(assert true)(check-sat)(exit)");
    assert!(ok);
    assert_eq!(out, "sat\n");
    let (out, ok) = run_binary("(assert false)(check-sat)");
    assert!(ok);
    assert_eq!(out, "unsat\n");
}

#[test]
fn binary_solves_transition_shaped_instance() {
    // A two-state machine must avoid the letter that loops on state 2
    // while still reaching it: forced choice of both transition values.
    let script = "(set-logic UFLIA)\
        (declare-fun d (Int Int) Int)\
        (declare-fun lab (Int) Bool)\
        (assert (and (<= 1 (d 1 0)) (<= (d 1 0) 2)))\
        (assert (and (<= 1 (d 2 0)) (<= (d 2 0) 2)))\
        (assert (= (d 1 0) 2))\
        (assert (= (d 2 0) 1))\
        (assert (lab (d 1 0)))\
        (assert (not (lab (d 2 0))))\
        (check-sat)\
        (get-value ((d 1 0) (d 2 0) (lab 1) (lab 2)))";
    let (out, ok) = run_binary(script);
    assert!(ok);
    assert_eq!(
        out,
        "sat\n(((d 1 0) 2) ((d 2 0) 1) ((lab 1) false) ((lab 2) true))\n"
    );
}

#[test]
fn binary_output_is_deterministic() {
    let script = "(declare-fun n (Int) Int)\
        (assert (and (<= 0 (n 1)) (<= (n 1) 12) (<= 0 (n 2)) (<= (n 2) 12)))\
        (assert (> (n 2) (n 1)))\
        (assert (>= (n 1) 7))\
        (check-sat)(get-value ((n 1) (n 2)))";
    let (first, _) = run_binary(script);
    let (second, _) = run_binary(script);
    assert_eq!(first, second);
    assert!(first.starts_with("sat\n"));
}
