//! End-to-end checks of the command-line interface: exit codes, output
//! shapes, and the documented JSON round trip.

use std::process::Command;

use fgs::{core_of, Alphabet, CoreGraph, WordSet};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fgs"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary must run");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn sandwich_reports_the_layers() {
    let (code, stdout, _) = run(&["sandwich", "--gens", "xy", "--words", "xxyy"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["bestCount"], 0);
    assert_eq!(v["upperRank"], 2);
    assert_eq!(v["lowerLayer"].as_array().unwrap().len(), 0);
}

#[test]
fn subbasis_verdict_drives_the_exit_code() {
    let (code, stdout, _) = run(&["subbasis", "--gens", "xy", "--words", "xxy"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["verdict"], true);
    let basis = v["extendedBasis"].as_array().unwrap();
    assert!(basis.iter().any(|w| w == "xxy"));

    let (code, stdout, _) = run(&["subbasis", "--gens", "xy", "--words", "xxyy"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["verdict"], false);
}

#[test]
fn reduce_drops_identity_words_with_a_warning() {
    let (code, stdout, stderr) = run(&["reduce", "--gens", "xy", "--words", ""]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["initialLength"], 0);
    assert_eq!(v["steps"].as_array().unwrap().len(), 0);
    assert!(stderr.is_empty());

    let (code, _, stderr) = run(&["reduce", "--gens", "xy", "--words", "xX"]);
    assert_eq!(code, 0);
    assert!(stderr.contains("dropped 1 identity word"));
}

#[test]
fn unknown_generators_are_an_input_error() {
    let (code, _, stderr) = run(&["sandwich", "--gens", "xy", "--words", "xz"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("unknown generator"));
}

#[test]
fn node_budget_exhaustion_is_a_resource_error() {
    let (code, _, stderr) = run(&[
        "sandwich",
        "--gens",
        "xy",
        "--words",
        "xx,y",
        "--node-budget",
        "1",
    ]);
    assert_eq!(code, 3);
    assert!(stderr.contains("node budget 1 exceeded"));

    // the environment variable sets the default, the flag wins
    let (code, _, _) = run_env(
        &["sandwich", "--gens", "xy", "--words", "xx,y"],
        &[("FGS_NODE_BUDGET", "1")],
    );
    assert_eq!(code, 3);
    let (code, _, _) = run_env(
        &[
            "sandwich",
            "--gens",
            "xy",
            "--words",
            "xx,y",
            "--node-budget",
            "100000",
        ],
        &[("FGS_NODE_BUDGET", "1")],
    );
    assert_eq!(code, 0);
}

#[test]
fn empty_generators_are_rejected() {
    let (code, _, stderr) = run(&["core", "--gens", "", "--words", ""]);
    assert_eq!(code, 2);
    assert!(stderr.contains("--gens"));
}

#[test]
fn rank_guard_requires_force() {
    let (code, _, stderr) = run(&["explore", "--gens", "abcdef", "--words", ""]);
    assert_eq!(code, 2);
    assert!(stderr.contains("exceeds the safety guard"));
    let (code, _, _) = run(&["explore", "--gens", "abcdef", "--words", "", "--force"]);
    assert_eq!(code, 0);
}

#[test]
fn core_json_round_trips_to_the_same_canonical_key() {
    let (code, stdout, _) = run(&["core", "--gens", "xy", "--words", "xx,y,xyX"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    let a = Alphabet::new("xy").unwrap();
    let reingested = CoreGraph::from_json(&v, &a).unwrap();
    let direct = core_of(&WordSet::parse(&["xx", "y", "xyX"], &a).unwrap(), &a);
    assert_eq!(reingested.canonical_key(), direct.canonical_key());
}

#[test]
fn words_can_come_from_a_file() {
    let dir = std::env::temp_dir().join("fgs-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("words.txt");
    std::fs::write(&path, "# corpus\nxx\ny # trailing comment\n\n").unwrap();
    let arg = format!("@{}", path.display());
    let (code, stdout, _) = run(&["core", "--gens", "xy", "--words", &arg]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["vertices"], 2);
    assert_eq!(v["edges"].as_array().unwrap().len(), 3);
}

#[test]
fn cuts_enumeration_is_listed_with_count() {
    let (code, stdout, _) = run(&["cuts", "--gens", "xy"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["count"], 28);
    assert_eq!(v["cuts"].as_array().unwrap().len(), 28);
}

#[test]
fn boundary_cut_index_is_validated() {
    let (code, _, stderr) = run(&["boundary", "--gens", "xy", "--words", "y", "--cut", "99"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("out of range"));
}

#[test]
fn explore_emits_one_json_line_per_node() {
    let (code, stdout, _) = run(&["explore", "--gens", "xy", "--words", "xx,y"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.lines().count(), 34);
    for line in stdout.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert!(v["key"].is_string());
    }
}

#[test]
fn oracle_flags_report_consistency() {
    let (code, stdout, _) = run(&["sandwich", "--gens", "xy", "--words", "xx,y", "--oracle"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["oracleConsistent"], true);
    assert_eq!(v["oracleMaxOverlap"], 1);

    let (code, stdout, _) = run(&["subbasis", "--gens", "xy", "--words", "xxy", "--oracle"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["oracleVerdict"], true);

    let (code, stdout, _) = run(&["closure", "--gens", "xy", "--words", "xxyy", "--oracle"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["oracleConsistent"], true);
}
