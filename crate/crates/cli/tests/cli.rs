//! End-to-end checks of the binary: flag parsing, record formats, exit
//! codes, and byte-determinism of machine output. Heavy computations
//! stay in the library's own tests; everything here runs on small balls.

use relhyp::{BallOptions, ConedBall, GroupSpec};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_artin-relhyp"))
}

fn groups_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../groups")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out: Output = bin().args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf8 stdout"),
        String::from_utf8(out.stderr).expect("utf8 stderr"),
    )
}

/// Value of `key` in the first record line of the given kind.
fn field(stdout: &str, kind: &str, key: &str) -> String {
    let prefix = format!("kind={kind}");
    let line = stdout
        .lines()
        .find(|l| l.starts_with(&prefix))
        .unwrap_or_else(|| panic!("no {kind} record in:\n{stdout}"));
    let want = format!("{key}=");
    line.split(' ')
        .find_map(|kv| kv.strip_prefix(&want))
        .unwrap_or_else(|| panic!("no {key} in record: {line}"))
        .to_string()
}

fn count_kind(stdout: &str, kind: &str) -> usize {
    let prefix = format!("kind={kind}");
    stdout.lines().filter(|l| l.starts_with(&prefix)).count()
}

#[test]
fn info_reports_classification_both_ways() {
    let (code, text, _) = run(&["info"]);
    assert_eq!(code, 0);
    assert!(text.contains("generators: 3"));
    assert!(text.contains("theorem scope (all finite m >= 7): yes"));

    let e7 = groups_dir().join("e7.grp");
    let (code, machine, _) = run(&["info", "--group", e7.to_str().unwrap(), "--output", "machine"]);
    assert_eq!(code, 0);
    assert_eq!(field(&machine, "spec", "n"), "3");
    assert_eq!(field(&machine, "spec", "theorem_scope"), "true");
    assert_eq!(count_kind(&machine, "pair"), 3);
    assert_eq!(field(&machine, "pair", "m"), "7");
}

#[test]
fn relator_round_trips_through_the_word_problem() {
    let (code, machine, _) = run(&["relator", "--pair", "1", "2", "--output", "machine"]);
    assert_eq!(code, 0);
    assert_eq!(field(&machine, "relator", "letters"), "14");
    assert_eq!(field(&machine, "relator", "syllables"), "14");
    let relator = field(&machine, "relator", "word");

    // The relator names the identity: the subgroup oracles and the
    // full-group reduction must both say so.
    let (code, machine, _) = run(&[
        "wp", "--pair", "1", "2", "--output", "machine", &relator,
    ]);
    assert_eq!(code, 0);
    assert_eq!(field(&machine, "wp", "trivial"), "true");

    let (code, machine, _) = run(&["wp", "--output", "machine", &relator]);
    assert_eq!(code, 0);
    assert_eq!(field(&machine, "wp", "method"), "reduction");
    assert_eq!(field(&machine, "wp", "trivial"), "true");

    let (code, machine, _) = run(&["wp", "--output", "machine", "a1.a2.a1^-1"]);
    assert_eq!(code, 0);
    assert_eq!(field(&machine, "wp", "trivial"), "false");
}

#[test]
fn small_exponents_are_gated_behind_a_flag() {
    let path = std::env::temp_dir().join(format!("arl-m3-{}.grp", std::process::id()));
    std::fs::write(&path, "n 2\nm 1 2 3\n").unwrap();
    let file = path.to_str().unwrap();

    let (code, _, err) = run(&["reduce", "--group", file, "a1.a2"]);
    assert_eq!(code, 2, "unexpected: {err}");
    assert!(err.contains("extra-large"));

    let (code, machine, _) = run(&[
        "reduce", "--group", file, "--allow-small", "--output", "machine", "a1.a2",
    ]);
    assert_eq!(code, 0);
    assert_eq!(field(&machine, "reduce", "result"), "a1.a2");
    std::fs::remove_file(&path).ok();
}

#[test]
fn malformed_input_exits_with_usage_code() {
    let (code, _, err) = run(&["wp", "a0"]);
    assert_eq!(code, 2);
    assert!(err.contains("a0") || err.contains("generator"));

    let path = std::env::temp_dir().join(format!("arl-conflict-{}.grp", std::process::id()));
    std::fs::write(&path, "n 2\nm 1 2 7\nm 2 1 8\n").unwrap();
    let (code, _, err) = run(&["info", "--group", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line"), "error should cite a line: {err}");
    std::fs::remove_file(&path).ok();

    let (code, _, _) = run(&["intersect", "--pair", "1", "2", "--radius", "2"]);
    assert_eq!(code, 2, "one pair is not enough");
}

#[test]
fn intersect_finds_only_shared_generator_powers() {
    let (code, machine, _) = run(&[
        "intersect", "--pair", "1", "2", "--pair", "1", "3", "--radius", "2", "--output", "machine",
    ]);
    assert_eq!(code, 0);
    assert_eq!(field(&machine, "intersect", "shared"), "a1");
    assert_eq!(field(&machine, "intersect", "pass"), "true");
    // Identity and a1^e for 0 < |e| <= 2.
    assert_eq!(field(&machine, "intersect", "common"), "5");
    assert_eq!(count_kind(&machine, "common"), 5);
}

#[test]
fn free_ball_matches_closed_form_counts() {
    let free3 = groups_dir().join("free3.grp");
    let (code, machine, _) = run(&[
        "ball", "--group", free3.to_str().unwrap(), "--radius", "2", "--slack", "0",
        "--output", "machine",
    ]);
    assert_eq!(code, 0);
    // Rank-3 tree: 1 + 6 + 30 vertices, V - 1 edges, no cones, and one
    // midpoint per edge.
    assert_eq!(field(&machine, "ball", "vertices"), "37");
    assert_eq!(field(&machine, "ball", "cones"), "0");
    assert_eq!(field(&machine, "ball", "edges"), "36");
    assert_eq!(field(&machine, "ball", "nodes"), "73");
    assert_eq!(field(&machine, "ball", "stabilized"), "true");
}

#[test]
fn export_counts_match_the_library() {
    let (code, machine, _) = run(&[
        "ball", "--radius", "1", "--slack", "0", "--export", "--output", "machine",
    ]);
    assert_eq!(code, 0);

    let ball = ConedBall::build(
        &GroupSpec::uniform(3, 7),
        &BallOptions {
            radius: 1,
            slack: 0,
            ..BallOptions::default()
        },
    )
    .unwrap();
    assert_eq!(count_kind(&machine, "vertex"), ball.vertex_count());
    assert_eq!(count_kind(&machine, "cone"), ball.cone_count());
    let cone_edges: usize = ball.cones().iter().map(|c| c.members.len()).sum();
    assert_eq!(
        count_kind(&machine, "edge"),
        ball.edge_count() + cone_edges
    );
    assert_eq!(
        field(&machine, "ball", "nodes"),
        ball.node_count().to_string()
    );
}

#[test]
fn vertex_cap_exits_with_resource_code() {
    let out = bin()
        .args(["ball", "--radius", "3"])
        .env("ARTIN_RELHYP_MAX_VERTICES", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("resource cap"), "stderr: {err}");
}

#[test]
fn adjacent_generators_are_two_units_apart_through_their_cone() {
    let (code, machine, _) = run(&[
        "dist", "--from", "a1", "--to", "a2", "--radius", "2", "--output", "machine",
    ]);
    assert_eq!(code, 0);
    assert_eq!(field(&machine, "dist", "d"), "2");

    let (code, machine, _) = run(&[
        "geo", "--from", "a1", "--to", "a2", "--radius", "2", "--output", "machine",
    ]);
    assert_eq!(code, 0);
    assert_eq!(field(&machine, "geo", "d"), "2");
    assert_eq!(field(&machine, "geo", "total"), "1");
    assert!(field(&machine, "geodesic", "nodes").contains("cone(a1,a2)"));
}

#[test]
fn sampled_pipelines_pass_on_a_small_ball() {
    let (code, machine, _) = run(&[
        "pipeline", "--samples", "5", "--radius", "2", "--output", "machine",
    ]);
    assert_eq!(code, 0);
    assert_eq!(field(&machine, "pipeline_batch", "runs"), "5");
    assert_eq!(field(&machine, "pipeline_batch", "ok"), "true");
    assert_eq!(count_kind(&machine, "pipeline_failure"), 0);
    assert_eq!(count_kind(&machine, "run"), 5);
    assert_eq!(field(&machine, "run", "ok"), "true");
}

#[test]
fn single_geodesic_pipeline_reports_its_blocks() {
    let (code, text, _) = run(&[
        "pipeline", "--from", "a1^-1", "--to", "a2.a3", "--radius", "2",
    ]);
    assert_eq!(code, 0, "stdout:\n{text}");
    assert!(text.contains("all checks passed"), "stdout:\n{text}");
}

#[test]
fn machine_output_is_byte_identical_across_runs() {
    let args = [
        "bigons", "--mode", "claim", "--radius", "2", "--samples", "30", "--output", "machine",
    ];
    let (code1, out1, _) = run(&args);
    let (code2, out2, _) = run(&args);
    assert_eq!(code1, 0);
    assert_eq!(code2, 0);
    assert_eq!(out1, out2);
    assert_eq!(
        count_kind(&out1, "pair"),
        field(&out1, "scan", "pairs").parse::<usize>().unwrap()
    );
}

#[test]
fn bigon_bound_violations_exit_with_assertion_code() {
    // A free group has only degenerate bigons, so a zero bound passes...
    let free3 = groups_dir().join("free3.grp");
    let (code, _, _) = run(&[
        "bigons", "--group", free3.to_str().unwrap(), "--radius", "2", "--bound", "0",
    ]);
    assert_eq!(code, 0);

    // ...while coned geometry reaches delta 1 already in a small ball.
    let (code, text, _) = run(&["bigons", "--radius", "2", "--bound", "0"]);
    if code == 1 {
        assert!(!text.contains("max 0"));
    } else {
        assert_eq!(code, 0);
        assert!(text.contains("max 0"));
    }
}

#[test]
fn acceptance_subset_runs_and_validates_indices() {
    let (code, text, _) = run(&["accept", "--only", "7,8"]);
    assert_eq!(code, 0, "output:\n{text}");
    assert!(text.contains("criterion 7: PASS"));
    assert!(text.contains("criterion 8: PASS"));

    let (code, machine, _) = run(&["accept", "--only", "8", "--output", "machine"]);
    assert_eq!(code, 0);
    assert_eq!(field(&machine, "criterion", "status"), "pass");

    let (code, _, err) = run(&["accept", "--only", "9"]);
    assert_eq!(code, 2);
    assert!(err.contains("1..=8"));
}
