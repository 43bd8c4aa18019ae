use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

use wspe::format::{parse_game, parse_witness, profile_to_json};
use wspe::synth::build_profile;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wspe"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn solve_reports_decision_and_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let profile = dir.path().join("profile.json");
    let fig1 = fixture("fig1.json");
    let yes = run(&[
        "solve",
        path(&fig1),
        "--min",
        "00",
        "--max",
        "11",
        "--synth",
        path(&profile),
    ]);
    assert_eq!(yes.status.code(), Some(0));
    let doc = stdout_json(&yes);
    assert_eq!(doc["exists"], true);
    assert_eq!(doc["payoff"], "01");
    assert_eq!(doc["verified"], true);
    assert_eq!(
        run(&["verify", path(&fig1), path(&profile)]).status.code(),
        Some(0)
    );

    let no = run(&["solve", path(&fig1), "--min", "10", "--max", "11"]);
    assert_eq!(no.status.code(), Some(1));
    assert_eq!(stdout_json(&no)["exists"], false);
}

#[test]
fn bad_inputs_exit_with_two() {
    let fig1 = fixture("fig1.json");
    assert_eq!(
        run(&["solve", path(&fig1), "--min", "0", "--max", "11"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["solve", path(&fig1), "--min", "11", "--max", "00"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["fixpoint", "/nonexistent/game.json"]).status.code(),
        Some(2)
    );

    let dir = tempfile::tempdir().unwrap();
    let profile = dir.path().join("profile.json");
    std::fs::write(
        &profile,
        r#"{"format":1,"states":["m"],"initial":"m","update":{},"actions":{"1":{"m":{"nowhere":"v1"}}}}"#,
    )
    .unwrap();
    let out = run(&["verify", path(&fig1), path(&profile)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn synthesized_profile_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let fig1 = fixture("fig1.json");
    let profile = dir.path().join("profile.json");
    let out = run(&[
        "synth",
        path(&fig1),
        path(&fixture("table3_witness.json")),
        "--out",
        path(&profile),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["verify", path(&fig1), path(&profile)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["verified"], true);
}

#[test]
fn corrupted_profile_is_refuted_at_v2() {
    let (game, objectives) = parse_game(&std::fs::read_to_string(fixture("fig1.json")).unwrap()).unwrap();
    let witness = parse_witness(
        &std::fs::read_to_string(fixture("table3_mutated.json")).unwrap(),
        &game,
        &objectives,
    )
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let profile = dir.path().join("profile.json");
    std::fs::write(&profile, profile_to_json(&build_profile(&witness, &game), &game)).unwrap();

    let out = run(&["verify", path(&fixture("fig1.json")), path(&profile)]);
    assert_eq!(out.status.code(), Some(1));
    let cex = &stdout_json(&out)["counterexample"];
    assert_eq!(cex["vertex"], "v2");
    assert_eq!(cex["player"], 1);
    assert_eq!(cex["deviation"], "v1");
    assert_eq!(cex["gain"], 0);
    assert_eq!(cex["deviation_gain"], 1);
}

#[test]
fn witness_check_reports_violation() {
    let fig1 = fixture("fig1.json");
    let good = run(&[
        "witness",
        path(&fig1),
        "--check",
        path(&fixture("table3_witness.json")),
    ]);
    assert_eq!(good.status.code(), Some(0));
    assert_eq!(stdout_json(&good)["good"], true);
    let bad = run(&[
        "witness",
        path(&fig1),
        "--check",
        path(&fixture("table3_mutated.json")),
    ]);
    assert_eq!(bad.status.code(), Some(1));
    let doc = stdout_json(&bad);
    assert_eq!(doc["good"], false);
    assert_eq!(doc["violation"]["vertex"], "v2");
}

#[test]
fn self_loop_fixpoint_is_a_single_row() {
    let dir = tempfile::tempdir().unwrap();
    let game = dir.path().join("loop.json");
    std::fs::write(
        &game,
        r#"{"format":1,"players":1,"vertices":["v0"],"owner":{"v0":1},"edges":[["v0","v0"]],
            "initial":"v0","objective_type":"buchi","objectives":{"1":{"F":["v0"]}}}"#,
    )
    .unwrap();
    let out = run(&["fixpoint", path(&game), "--trace"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8_lossy(&out.stdout);
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("k\t"))
        .collect();
    assert_eq!(rows, ["0\tinit\t{1}", "1\tfixpoint\t{1}"], "{text}");
    assert!(text.contains("# fixpoint reached at step 1"), "{text}");
}

#[test]
fn generated_games_round_trip_and_respect_row_bound() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..10u64 {
        let file = dir.path().join(format!("g{seed}.json"));
        let out = run(&[
            "gen",
            "--seed",
            &seed.to_string(),
            "--vertices",
            "6",
            "--players",
            "2",
            "--kind",
            "parity",
            "--density",
            "0.3",
            "--out",
            path(&file),
        ]);
        assert_eq!(out.status.code(), Some(0));
        let text = std::fs::read_to_string(&file).unwrap();
        let (g, o) = parse_game(&text).unwrap();
        assert_eq!(wspe::format::game_to_json(&g, &o).trim(), text.trim());

        let trace = dir.path().join(format!("t{seed}.json"));
        let out = run(&["fixpoint", path(&file), "--json", path(&trace)]);
        assert_eq!(out.status.code(), Some(0));
        let doc: Value = serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
        let rows = doc["rows"].as_array().unwrap().len();
        assert!(rows <= 2 * g.vertex_count() * (1 << g.player_count()) + 1);
    }
}

#[test]
fn dot_and_batch_outputs() {
    let fig1 = fixture("fig1.json");
    let out = run(&[
        "export-dot",
        path(&fig1),
        "--witness",
        path(&fixture("table3_witness.json")),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let dot = String::from_utf8_lossy(&out.stdout);
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("red"));

    let out = run(&[
        "batch",
        "--seed",
        "1",
        "--count",
        "5",
        "--vertices",
        "5",
        "--players",
        "2",
        "--kind",
        "buchi",
        "--density",
        "0.3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(reader.records().count(), 5);
}
