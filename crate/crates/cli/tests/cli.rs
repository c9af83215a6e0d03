//! End-to-end tests of the binary: exit-status contract, structured-output
//! determinism, and generator round-trips.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rooksum"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().expect("binary finishes")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const GRID: &str = "0 0; 1 0; 0 1; 1 1";
const L_SHAPE: &str = "0 0; 0 1; 1 0";

#[test]
fn analyze_exit_status_matches_decision() {
    let out = run(&["analyze", "--inline", GRID, "--output", "record"]);
    assert_eq!(out.status.code(), Some(1));
    let doc = stdout(&out);
    assert!(doc.contains("discontinuously-basic: no"));
    assert!(doc.contains("kind: closed-array"));
    assert!(doc.contains("cycle: 0,0 1,0 1,1 0,1 0,0"));

    let out = run(&["analyze", "--inline", L_SHAPE, "--output", "record"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("discontinuously-basic: yes"));
}

#[test]
fn malformed_input_is_exit_two_with_position() {
    let out = run(&["analyze", "--inline", "0 0; 1 x"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "stderr: {err}");
}

#[test]
fn structured_output_is_deterministic() {
    let a = run(&["analyze", "--inline", GRID, "--output", "record"]);
    let b = run(&["analyze", "--inline", GRID, "--output", "record"]);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["game", "--inline", "0 0 0; 1 1 0; 0 1 1; 1 0 1", "--output", "record"]);
    let d = run(&["game", "--inline", "0 0 0; 1 1 0; 0 1 1; 1 0 1", "--output", "record"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn decompose_methods_and_obstructions() {
    let out = run_stdin(
        &["decompose", "-", "--output", "record"],
        "0 0 : 0\n1 0 : 1\n0 1 : 1\n1 1 : 2\n",
    );
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout(&out);
    assert!(doc.contains("outcome: decomposed"));
    assert!(doc.contains("residual: 0"));

    let out = run_stdin(
        &["decompose", "-", "--output", "record"],
        "0 0 : 0\n1 0 : 1\n0 1 : 1\n1 1 : 3\n",
    );
    assert_eq!(out.status.code(), Some(1));
    let doc = stdout(&out);
    assert!(doc.contains("outcome: obstructed"));
    assert!(doc.contains("alternating-sum:"));

    // Chebyshev relaxation spreads the unit obstruction as 1/4.
    let out = run_stdin(
        &["decompose", "-", "--approx", "--output", "record"],
        "0 0 : 0\n1 0 : 1\n0 1 : 1\n1 1 : 3\n",
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("residual: 1/4"));

    // Peeling refuses a core.
    let out = run_stdin(
        &["decompose", "-", "--peel", "--output", "record"],
        "0 0 : 0\n1 0 : 1\n0 1 : 1\n1 1 : 2\n",
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("outcome: peel-inapplicable"));
}

#[test]
fn min_norm_objective_on_generated_staircase() {
    let gen = run(&["gen", "alternating", "2"]);
    assert_eq!(gen.status.code(), Some(0));
    let out = run_stdin(
        &["decompose", "-", "--min-norm", "--output", "record"],
        &stdout(&gen),
    );
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout(&out);
    // Optimum 2m + 3 = 7, well above the m + 2 = 4 lower bound.
    assert!(doc.contains("objective: 7"), "{doc}");
}

#[test]
fn layers_roundtrip_through_min_norm() {
    let gen = run(&["gen", "layers", "2"]);
    let out = run_stdin(
        &["decompose", "-", "--min-norm", "--output", "record"],
        &stdout(&gen),
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("residual: 0"));
}

#[test]
fn game_winners_and_certificates() {
    let out = run(&["game", "--inline", GRID, "--output", "record"]);
    assert_eq!(out.status.code(), Some(1));
    let doc = stdout(&out);
    assert!(doc.contains("winner: spoiler"));
    assert!(doc.contains("kind: rook-route"));

    // The algebraic route agrees.
    let out = run(&["game", "--inline", GRID, "--kernel", "--output", "record"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("kind: zero-marginal-vector"));

    let out = run(&["game", "--inline", L_SHAPE, "--output", "record"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("winner: decomposer"));

    // The four-point space set: decomposer wins with a scheme.
    let out = run(&["game", "--inline", "0 0 0; 1 1 0; 0 1 1; 1 0 1", "--output", "record"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout(&out);
    assert!(doc.contains("dimension: 3"));
    assert!(doc.contains("kind: decomposition-scheme"));
}

#[test]
fn graph_checks_and_generators_roundtrip() {
    let t5 = "vertices 6; 0 1; 0 2; 0 3; 0 4; 0 5";
    let out = run(&["graph", "--inline", t5, "--plane", "--output", "record"]);
    assert_eq!(out.status.code(), Some(1));
    let doc = stdout(&out);
    assert!(doc.contains("decision: not-basic"));
    assert!(doc.contains("kind: five-star"));

    let out = run(&["graph", "--inline", t5, "--strip", "3", "--output", "record"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("defect: 3"));

    for (family, n) in [("f", "3"), ("r", "3")] {
        let gen = run(&["gen", family, n]);
        assert_eq!(gen.status.code(), Some(0));
        let out = run_stdin(&["graph", "-", "--plane", "--output", "record"], &stdout(&gen));
        assert_eq!(out.status.code(), Some(0), "{family}_{n} should be basic");
        let out = run_stdin(&["graph", "-", "--defect", "--output", "record"], &stdout(&gen));
        assert_eq!(out.status.code(), Some(0));
    }

    let gen = run(&["gen", "f", "2"]);
    let out = run_stdin(&["graph", "-", "--rn", "3", "--output", "record"], &stdout(&gen));
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("decision: embeds-at 2"));
}

#[test]
fn seq_diagnostics() {
    let out = run(&["seq", "area", "1", "--output", "record"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("area: 1/14"));

    let out = run(&["seq", "area", "1/4", "--output", "record"]);
    assert!(stdout(&out).contains("area: 1/112"));

    let out = run(&[
        "seq", "sums", "--family", "power", "--rule", "alt-harmonic", "--terms", "1000",
        "--output", "record",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("diverging: yes"));

    let out = run(&["seq", "tails", "--family", "geometric", "--output", "record"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("verdict: heuristic-truncated"));

    let out = run(&["seq", "gdecomp", "--rule", "sum", "--output", "record"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("outcome: ok"));

    // The bound holds at 4^-3 and fails at 4^-2; exit status follows.
    let out = run(&["seq", "cross", "1/64", "--output", "record"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("holds: yes"));
    let out = run(&["seq", "cross", "1/16", "--output", "record"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("holds: no"));

    let out = run(&["seq", "area", "3/2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn custom_arrays_feed_the_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("array.txt");
    let mut body = String::new();
    for n in 1..=16usize {
        let x = 0.5f64.powi(((n + 1) / 2) as i32);
        let y = 0.5f64.powi((n / 2) as i32);
        body.push_str(&format!("{n} {x} {y}\n"));
    }
    std::fs::write(&path, body).unwrap();
    let out = run(&[
        "seq", "tails", "--family", "custom", "--array",
        path.to_str().unwrap(), "--k-max", "16", "--terms", "16",
        "--output", "record",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("k-16: 1"));

    // A non-array is rejected as malformed input.
    std::fs::write(&path, "1 0 0\n2 1 1\n").unwrap();
    let out = run(&[
        "seq", "tails", "--family", "custom", "--array",
        path.to_str().unwrap(), "--k-max", "2", "--terms", "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
