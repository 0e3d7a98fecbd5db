//! Dispatch contract: exit codes, determinism, artifact round-trips.

use std::fs;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_belyi")
}

fn fixture(name: &str) -> String {
    belyi_cli::fixtures::fixture_path(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

#[test]
fn analyze_degree3_fixture() {
    let out = run(&["analyze", &fixture("deg3.triple")]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("genus: 0"), "{stdout}");
    assert!(stdout.contains("transitive: yes"), "{stdout}");
    assert!(stdout.contains("primitive: yes"), "{stdout}");
    assert!(stdout.contains("order: 6"), "{stdout}");
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reduce_rejects_non_root_residue() {
    // 1 is not a root of the minimal polynomial X mod 5
    let out = run(&["reduce", &fixture("classical_deg2.map"), "--prime", "5", "--root", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reduce_writes_a_finite_map() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("reduced.map");
    let out = run(&[
        "reduce",
        &fixture("classical_deg3.map"),
        "--prime",
        "5",
        "--root",
        "0",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&out_path).unwrap();
    assert!(text.starts_with("prime: 5\n"), "{text}");
    // 3X^2 - 2X^3 mod 5 = 3X^2 + 3X^3
    assert!(text.contains("num:\n0\n0\n3\n3\n"), "{text}");
}

#[test]
fn verify_detects_a_wrong_profile() {
    let out = run(&["verify", &fixture("classical_deg3.map"), "--profile", "3 | 3 | 3"]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("FAIL"), "{stdout}");
}

#[test]
fn verify_passes_the_right_profile() {
    let out = run(&["verify", &fixture("classical_deg3.map"), "--profile", "2.1 | 2.1 | 3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn solve_then_monodromy_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let map_path = dir.path().join("deg3.map");
    let out = run(&[
        "solve",
        &fixture("deg3.triple"),
        "--out",
        map_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&["monodromy", map_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let t = belyi_core::perm::parse_triple(&stdout).unwrap();
    assert_eq!(t.degree(), 3);
    assert_eq!(t.z.cycle_type().parts, vec![3]);
}

#[test]
fn solve_dumps_geometry() {
    let dir = tempfile::tempdir().unwrap();
    let map_path = dir.path().join("deg2.map");
    let dump_path = dir.path().join("deg2.geom");
    let out = run(&[
        "solve",
        &fixture("deg2.triple"),
        "--out",
        map_path.to_str().unwrap(),
        "--dump-geometry",
        dump_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let dump = fs::read_to_string(&dump_path).unwrap();
    assert!(dump.contains("kites: 2"), "{dump}");
    assert!(dump.contains("boundary 0:"), "{dump}");
    assert!(dump.contains("tree over0 0:"), "{dump}");
}

#[test]
fn attest_is_deterministic_given_seed() {
    // X^3 over F_13: prime degree, and the cubing map has a linear factor
    // family ruling out 2-transitivity
    let dir = tempfile::tempdir().unwrap();
    let map_path = dir.path().join("cube.map");
    fs::write(&map_path, "prime: 13\nnum:\n0\n0\n0\n1\nden:\n1\n").unwrap();
    let a = run(&["attest", map_path.to_str().unwrap(), "--seed", "4"]);
    let b = run(&["attest", map_path.to_str().unwrap(), "--seed", "4"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
    let stdout = String::from_utf8(a.stdout).unwrap();
    assert!(stdout.contains("CHECK indecomposable: PASS"), "{stdout}");
    assert!(stdout.contains("CHECK obstruction: PASS"), "{stdout}");
    assert!(stdout.contains("conclusion:"), "{stdout}");
}
