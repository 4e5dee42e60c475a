//! The installed binary, end to end: subcommands, report formats, exit
//! codes, the state-budget environment variable, and witness files that
//! replay through `run`.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn svtl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_svtl"))
        .args(args)
        .env_remove("SVTL_MAX_STATES")
        .output()
        .expect("spawn svtl")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn tmp_dir(test: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("svtl-cli-{}-{test}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn run_prints_every_step_and_honors_vars() {
    let out = svtl(&[
        "run",
        &fixture("scheduler_rr.svl"),
        &fixture("traces/rr_six.trace"),
        "--vars",
        "turn,L_1",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(
        text,
        "step 0: turn=1 L_1=0\n\
         step 1 ((sched 1)): turn=2 L_1=0\n\
         step 2 ((sched 2)): turn=1 L_1=1\n\
         step 3 ((sched 1)): turn=2 L_1=0\n\
         step 4 ((sched 2)): turn=1 L_1=1\n\
         step 5 ((sched 1)): turn=2 L_1=0\n\
         step 6 ((sched 2)): turn=1 L_1=1\n"
    );
}

#[test]
fn run_rejects_an_undefined_event_with_exit_two() {
    let out = svtl(&[
        "run",
        &fixture("scheduler_rr.svl"),
        &fixture("traces/rr_bad.trace"),
    ]);
    assert_eq!(code(&out), 2);
    let text = stdout(&out);
    assert!(text.contains("step 1"), "partial replay missing:\n{text}");
    assert!(
        text.contains("error: event 2"),
        "rejection not reported:\n{text}"
    );
}

#[test]
fn run_unknown_variable_is_a_usage_error() {
    let out = svtl(&[
        "run",
        &fixture("scheduler_rr.svl"),
        &fixture("traces/rr_six.trace"),
        "--vars",
        "nope",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("unknown variable `nope`"));
}

#[test]
fn check_reports_holds_with_bounds_and_suprema() {
    let dir = tmp_dir("check-holds");
    let out = svtl(&[
        "check",
        &fixture("scheduler_rr.svl"),
        "--witness-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "live_1: HOLDS bound=1\n\
         wait_1: HOLDS sup=1\n\
         live_2: HOLDS bound=2\n\
         wait_2: HOLDS sup=1\n"
    );
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn check_failure_exits_three_and_the_witness_replays() {
    let dir = tmp_dir("check-fails");
    let out = svtl(&[
        "check",
        &fixture("scheduler_quantum.svl"),
        "--witness-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 3);
    let text = stdout(&out);
    assert!(text.contains("quantum_2_1: HOLDS"), "{text}");
    let witness = dir.join("quantum_4_1.cex.trace");
    assert!(
        text.contains(&format!("quantum_4_1: FAILS witness={}", witness.display())),
        "{text}"
    );
    let replay = svtl(&[
        "run",
        &fixture("scheduler_quantum.svl"),
        witness.to_str().unwrap(),
    ]);
    assert_eq!(code(&replay), 0, "witness rejected:\n{}", stdout(&replay));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn check_prefers_fails_over_unknown() {
    let dir = tmp_dir("check-mixed");
    // Truncated exploration: liveness fails on a lasso, the bound check
    // stays unknown; failure wins the exit code.
    let out = svtl(&[
        "check",
        &fixture("scheduler_free.svl"),
        "--max-states",
        "800",
        "--witness-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 3);
    let text = stdout(&out);
    assert!(text.contains("live_1: FAILS witness="), "{text}");
    assert!(text.contains("wait_1: UNKNOWN depth="), "{text}");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn check_unknown_alone_exits_four() {
    let dir = tmp_dir("check-unknown");
    let out = svtl(&[
        "check",
        &fixture("scheduler_free.svl"),
        "--prop",
        "wait_1",
        "--max-states",
        "800",
        "--witness-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 4);
    assert!(stdout(&out).starts_with("wait_1: UNKNOWN depth="));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn check_unknown_property_name_is_a_usage_error() {
    let out = svtl(&["check", &fixture("scheduler_rr.svl"), "--prop", "nope"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("unknown property `nope`"));
}

#[test]
fn load_errors_cite_the_file_and_position() {
    let out = svtl(&["check", "/definitely/not/there.svl"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).starts_with("error: "));

    let dir = tmp_dir("load-diag");
    let bad = dir.join("bad.svl");
    std::fs::write(&bad, "var x : bool init true {\n  otherwise -> z\n}\n").unwrap();
    let out = svtl(&["check", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(
        text.contains(&format!("error: {}:2:16:", bad.display())),
        "no position in:\n{text}"
    );
    assert!(text.contains("unknown variable `z`"), "{text}");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn explore_summarizes_dumps_and_writes_dot() {
    let out = svtl(&["explore", &fixture("scheduler_rr.svl")]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "nodes: 3\nedges: 3\ncomplete: true\ndead ends: 0\n"
    );

    let out = svtl(&["explore", &fixture("scheduler_rr.svl"), "--dump"]);
    let text = stdout(&out);
    assert!(text.contains("node 0 depth 0: turn=1"), "{text}");
    assert!(text.contains("0 -(sched 1)-> 1"), "{text}");

    let dir = tmp_dir("dot");
    let dot = dir.join("rr.dot");
    let out = svtl(&[
        "explore",
        &fixture("scheduler_rr.svl"),
        "--dot",
        dot.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let written = std::fs::read_to_string(&dot).unwrap();
    assert!(written.starts_with("digraph model {"), "{written}");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn explore_reports_truncation_depth() {
    let out = svtl(&[
        "explore",
        &fixture("scheduler_free.svl"),
        "--max-states",
        "500",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("complete: false"), "{text}");
    assert!(text.contains("frontier depth: "), "{text}");
}

#[test]
fn bound_reports_the_supremum_and_related_verdicts() {
    let out = svtl(&["bound", &fixture("scheduler_rr_n3.svl"), "L_2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "L_2: sup=2 at node 4\nwait_2: HOLDS\n");

    let out = svtl(&[
        "bound",
        &fixture("scheduler_free.svl"),
        "L_1",
        "--max-states",
        "800",
    ]);
    assert_eq!(code(&out), 4);
    let text = stdout(&out);
    assert!(text.contains("L_1: UNKNOWN depth="), "{text}");
    assert!(text.contains("explored sup="), "{text}");
    assert!(text.contains("wait_1: UNKNOWN"), "{text}");
}

#[test]
fn state_budget_env_var_applies_and_flag_wins() {
    let by_flag = svtl(&[
        "explore",
        &fixture("scheduler_free.svl"),
        "--max-states",
        "500",
    ]);
    let by_env = Command::new(env!("CARGO_BIN_EXE_svtl"))
        .args(["explore", &fixture("scheduler_free.svl")])
        .env("SVTL_MAX_STATES", "500")
        .output()
        .unwrap();
    assert_eq!(stdout(&by_flag), String::from_utf8(by_env.stdout).unwrap());

    let flag_beats_env = Command::new(env!("CARGO_BIN_EXE_svtl"))
        .args([
            "explore",
            &fixture("scheduler_free.svl"),
            "--max-states",
            "500",
        ])
        .env("SVTL_MAX_STATES", "10")
        .output()
        .unwrap();
    assert_eq!(stdout(&by_flag), String::from_utf8(flag_beats_env.stdout).unwrap());

    let bad_env = Command::new(env!("CARGO_BIN_EXE_svtl"))
        .args(["explore", &fixture("scheduler_free.svl")])
        .env("SVTL_MAX_STATES", "soon")
        .output()
        .unwrap();
    assert_eq!(bad_env.status.code(), Some(1));
    assert!(String::from_utf8(bad_env.stdout)
        .unwrap()
        .contains("SVTL_MAX_STATES"));
}

#[test]
fn composite_models_check_clean() {
    let dir = tmp_dir("composite");
    let out = svtl(&[
        "check",
        &fixture("inout.svl"),
        "--witness-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("io_happens_1: HOLDS bound=5"), "{text}");

    let out = svtl(&[
        "check",
        &fixture("rendezvous.svl"),
        "--witness-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "mirrored: HOLDS\n");
    let _ = std::fs::remove_dir_all(&dir);
}
