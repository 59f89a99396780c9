//! Golden tests: exit codes and output bytes are stable across runs on
//! the shipped fixture corpus.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpoly"))
        .args(args)
        .output()
        .expect("spawn qpoly")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn report_exit_codes_match_fixture_verdicts() {
    for (name, want) in [
        ("hex1.qp", 0),
        ("conifold.qp", 0),
        ("hex1-cover3.qp", 0),
        ("sphereXYZ.qp", 0),
        ("antiprism.qp", 0),
        ("antiprism-weighted.qp", 0),
        ("badTorus.qp", 1),
    ] {
        let out = run(&["report", &fixture(name)]);
        assert_eq!(out.status.code(), Some(want), "{name}: {}", stdout(&out));
    }
}

#[test]
fn report_output_is_byte_identical_across_runs() {
    for name in [
        "hex1.qp",
        "conifold.qp",
        "hex1-cover3.qp",
        "sphereXYZ.qp",
        "antiprism.qp",
        "antiprism-weighted.qp",
        "badTorus.qp",
    ] {
        let a = run(&["report", &fixture(name)]);
        let b = run(&["report", &fixture(name)]);
        assert_eq!(a.stdout, b.stdout, "{name}");
        assert_eq!(a.status.code(), b.status.code(), "{name}");
    }
}

#[test]
fn report_hex1_all_checks_agree() {
    let out = run(&["report", &fixture("hex1.qp")]);
    let t = stdout(&out);
    assert!(t.contains("condition-Z: passes"), "{t}");
    assert!(t.contains("rcharge-lp: feasible"), "{t}");
    assert!(t.contains("cancellation: holds up to degree 6"), "{t}");
    assert!(t.ends_with("VERDICT: consistent\n"), "{t}");
}

#[test]
fn report_bad_torus_prints_certificate() {
    let out = run(&["report", &fixture("badTorus.qp")]);
    let t = stdout(&out);
    assert!(
        t.contains("condition-Z: fails (rays from arrow a1 meet again: i=1, j=1, offset=(-1,-1))"),
        "{t}"
    );
    assert!(t.ends_with("VERDICT: inconsistent (all checks concur)\n"), "{t}");
}

#[test]
fn chi_prints_formula_value_and_discrepancy_note() {
    let out = run(&["chi", &fixture("antiprism-weighted.qp")]);
    assert_eq!(out.status.code(), Some(0));
    let t = stdout(&out);
    assert!(t.starts_with("-16/3\n"), "{t}");
    assert!(t.contains("recorded expectation chi = -31/6"), "{t}");
    assert!(t.contains("the formula is authoritative"), "{t}");
}

#[test]
fn relations_sphere_xyz() {
    let out = run(&["relations", &fixture("sphereXYZ.qp")]);
    assert_eq!(
        stdout(&out),
        "d/dx: x*x = y*z\nd/dy: y*y = z*x\nd/dz: z*z = x*y\n"
    );
}

#[test]
fn zigzag_check_verdicts() {
    let out = run(&["zigzag", &fixture("hex1.qp"), "--check"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("condition-Z: passes"));

    let out = run(&["zigzag", &fixture("badTorus.qp"), "--check"]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    assert!(stdout(&out).contains("VERDICT: inconsistent (condition Z fails)"));
}

#[test]
fn rcharge_methods_agree_on_conifold() {
    let lp = run(&["rcharge", &fixture("conifold.qp"), "--method", "lp"]);
    let zz = run(&["rcharge", &fixture("conifold.qp"), "--method", "zigzag"]);
    assert_eq!(lp.status.code(), Some(0));
    assert_eq!(zz.status.code(), Some(0));
    // Both methods land on the uniform 1/2 charge here.
    assert_eq!(stdout(&lp), stdout(&zz));
    assert!(stdout(&zz).contains("R(a1) = 1/2"));
}

#[test]
fn rcharge_infeasible_is_exit_1() {
    let out = run(&["rcharge", &fixture("badTorus.qp")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("VERDICT: inconsistent"));
}

#[test]
fn matchings_polygon_conifold() {
    let out = run(&["matchings", &fixture("conifold.qp"), "--polygon"]);
    let t = stdout(&out);
    assert!(t.starts_with("4 perfect matchings\n"), "{t}");
    assert!(t.contains("hull (-1,0) (0,0) (0,1) (-1,1)"), "{t}");
}

#[test]
fn cancel_counterexample_is_exit_1() {
    let out = run(&["cancel", &fixture("badTorus.qp")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("cancellation: counterexample"));
    assert!(stdout(&out).contains("VERDICT: inconsistent (cancellation fails)"));
}

#[test]
fn quotient_by_deck_action_recovers_a_one_vertex_torus() {
    let out = run(&["quotient", &fixture("hex1-cover3.qp"), "--action", "deck"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let t = stdout(&out);
    assert!(t.contains("name = \"hex1-cover3/deck\""), "{t}");
    // One vertex, three arrows: the base hexagonal tiling.
    assert!(t.contains("vertices = [\"v@0\"]"), "{t}");
    assert_eq!(t.matches("[[arrows]]").count(), 3, "{t}");
}

#[test]
fn embed_writes_svg_and_fails_on_inconsistent_input() {
    let dir = std::env::temp_dir();
    let svg_path = dir.join("qpoly-golden-conifold.svg");
    let out = run(&[
        "embed",
        &fixture("conifold.qp"),
        "--out",
        svg_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg"), "{svg}");
    std::fs::remove_file(&svg_path).ok();

    let bad = dir.join("qpoly-golden-bad.svg");
    let out = run(&["embed", &fixture("badTorus.qp"), "--out", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    assert!(!bad.exists());
}

#[test]
fn invalid_input_is_exit_2_and_weighted_zigzag_is_exit_3() {
    let out = run(&["chi", "/nonexistent-qpoly-fixture.qp"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["zigzag", &fixture("sphereXYZ.qp")]);
    assert_eq!(out.status.code(), Some(3));
}
