//! End-to-end checks of the command-line interface.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_featgames"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    binary().args(args).output().expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 output")
}

fn report_without_duration(output: &Output) -> serde_json::Value {
    let mut report: serde_json::Value =
        serde_json::from_str(&stdout_of(output)).expect("report is JSON");
    report.as_object_mut().unwrap().remove("duration_ms").expect("duration present");
    report
}

#[test]
fn solve_energy_table_matches_the_fixture_values() {
    let path = fixture("robot_energy.json");
    let output = run(&[
        "solve",
        "--game",
        path.to_str().unwrap(),
        "--type",
        "energy",
        "--format",
        "table",
    ]);
    assert!(output.status.success());
    let expected = "product          value\n\
                    {}               0\n\
                    {fbrock}         top\n\
                    {fextra}         0\n\
                    {fextra,fbrock}  0\n";
    assert_eq!(stdout_of(&output), expected);
}

#[test]
fn solve_reports_are_reproducible() {
    let path = fixture("coffee_distance.json");
    let args = ["solve", "--game", path.to_str().unwrap(), "--epsilon", "1e-9"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(report_without_duration(&a), report_without_duration(&b));
}

#[test]
fn solve_solution_reloads_to_the_same_table() {
    let path = fixture("robot_energy.json");
    let output = run(&["solve", "--game", path.to_str().unwrap()]);
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();

    let game_text = std::fs::read_to_string(fixture("robot_energy.json")).unwrap();
    let game = featgames::game::format::parse_game(&game_text).unwrap();
    let solution = featgames::featured::report::parse_solution_document(
        &game,
        &report["solution"].to_string(),
    )
    .unwrap();

    let ctx = game.products();
    for row in report["table"].as_array().unwrap() {
        let names: Vec<String> = row["product"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_str().unwrap().to_string())
            .collect();
        let product = featgames::Product::from_names(ctx.features(), &names).unwrap();
        let index = ctx.index_of(product).unwrap();
        let looked_up = serde_json::to_value(solution.value_at(game.initial(), index)).unwrap();
        assert_eq!(looked_up, row["value"], "at {names:?}");
    }
}

#[test]
fn parity_report_includes_winners() {
    let path = fixture("coffee_parity.json");
    let output = run(&["solve", "--game", path.to_str().unwrap(), "--type", "parity"]);
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    let winners = report["winners"].as_array().unwrap();
    assert!(!winners.is_empty());
    // The table lists winners per product: exactly the euro products.
    for row in report["table"].as_array().unwrap() {
        let has_euro = row["product"].as_array().unwrap().iter().any(|v| v == "euro");
        assert_eq!(row["value"].as_bool().unwrap(), has_euro);
    }
}

#[test]
fn product_filter_restricts_the_table() {
    let path = fixture("robot_energy.json");
    let output =
        run(&["solve", "--game", path.to_str().unwrap(), "--product", "fextra,fbrock"]);
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    let table = report["table"].as_array().unwrap();
    assert_eq!(table.len(), 1);
    assert_eq!(table[0]["value"], serde_json::json!(0));
}

#[test]
fn strategy_file_is_written_and_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let strategy_path = dir.path().join("strategy.json");
    let game_path = fixture("robot_energy.json");
    let output = run(&[
        "solve",
        "--game",
        game_path.to_str().unwrap(),
        "--strategy",
        strategy_path.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let strategy: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&strategy_path).unwrap()).unwrap();
    let states = strategy.as_array().unwrap();
    // Player-1 states only: s0, s1, s3.
    assert_eq!(states.len(), 3);
    let s0 = states.iter().find(|s| s["state"] == "s0").unwrap();
    // The s0 choice splits by feature guard.
    assert!(s0["cells"].as_array().unwrap().len() >= 2);
}

#[test]
fn verify_passes_on_all_fixtures() {
    for (name, extra) in [
        ("robot_energy.json", vec![]),
        ("coffee_reach.json", vec![]),
        ("coffee_parity.json", vec![]),
        ("coffee_distance.json", vec!["--epsilon", "1e-9"]),
    ] {
        let mut args = vec!["verify", "--game"];
        let path = fixture(name);
        args.push(path.to_str().unwrap());
        args.extend(extra);
        let output = run(&args);
        assert!(output.status.success(), "{name}: {}", stdout_of(&output));
        let outcome: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
        assert_eq!(outcome["passed"], serde_json::json!(true), "{name}");
    }
}

#[test]
fn verify_jobs_do_not_change_the_outcome() {
    let path = fixture("coffee_parity.json");
    let serial = run(&["verify", "--game", path.to_str().unwrap(), "--jobs", "1"]);
    let parallel = run(&["verify", "--game", path.to_str().unwrap(), "--jobs", "4"]);
    assert_eq!(stdout_of(&serial), stdout_of(&parallel));
}

#[test]
fn verify_detects_a_corrupted_solution() {
    // Take the real solution, corrupt one cell value, and check it.
    let game_path = fixture("robot_energy.json");
    let output = run(&["solve", "--game", game_path.to_str().unwrap()]);
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    let mut solution = report["solution"].clone();
    solution[0]["cells"][0]["value"] = serde_json::json!(3);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("solution.json");
    std::fs::write(&path, solution.to_string()).unwrap();

    let output = run(&[
        "verify",
        "--game",
        game_path.to_str().unwrap(),
        "--solution",
        path.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(4));
    let stderr = String::from_utf8(output.stderr.clone()).unwrap();
    assert!(stderr.contains("mismatch"), "{stderr}");
}

#[test]
fn exit_codes_follow_the_error_classes() {
    // Missing file: validation-level failure.
    let output = run(&["solve", "--game", "no-such-file.json"]);
    assert_eq!(output.status.code(), Some(1));

    // Dangling state reference: parse failure naming the state.
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"features": [], "products": "all", "kind": "reachability",
            "initial": "s0",
            "states": [{"id": "s0", "owner": 1, "accepting": true}],
            "transitions": [{"from": "s0", "to": "s9", "guard": "true"}]}"#,
    )
    .unwrap();
    let output = run(&["solve", "--game", bad.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8(output.stderr).unwrap().contains("s9"));

    // Kind mismatch: parameter failure.
    let robot = fixture("robot_energy.json");
    let output = run(&["solve", "--game", robot.to_str().unwrap(), "--type", "parity"]);
    assert_eq!(output.status.code(), Some(2));

    // Discounted without a discount: parameter failure.
    let no_discount = dir.path().join("disc.json");
    std::fs::write(
        &no_discount,
        r#"{"features": [], "products": "all", "kind": "discounted",
            "initial": "s0",
            "states": [{"id": "s0", "owner": 1}],
            "transitions": [{"from": "s0", "to": "s0", "guard": "true", "weight": 1}]}"#,
    )
    .unwrap();
    let output = run(&["solve", "--game", no_discount.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn products_listing_is_deterministic() {
    let coffee = fixture("coffee_reach.json");
    let output = run(&["products", "--game", coffee.to_str().unwrap()]);
    assert!(output.status.success());
    let listing: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    let rows = listing["products"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["features"], serde_json::json!(["dollar"]));
    assert_eq!(rows[0]["formula"], serde_json::json!("!euro && dollar"));
    assert_eq!(rows[2]["features"], serde_json::json!(["euro", "dollar"]));

    // The robot fixture declares "all" over two features: four products.
    let robot = fixture("robot_energy.json");
    let output = run(&["products", "--game", robot.to_str().unwrap()]);
    let listing: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    assert_eq!(listing["products"].as_array().unwrap().len(), 4);
}

#[test]
fn products_of_a_featureless_game() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("plain.json");
    std::fs::write(
        &path,
        r#"{"features": [], "products": "all", "kind": "reachability",
            "initial": "s0",
            "states": [{"id": "s0", "owner": 1, "accepting": true}],
            "transitions": [{"from": "s0", "to": "s0", "guard": "true"}]}"#,
    )
    .unwrap();
    let output = run(&["products", "--game", path.to_str().unwrap()]);
    let listing: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    let rows = listing["products"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["formula"], serde_json::json!("true"));
}

#[test]
fn translate_mucalc_constant_true() {
    let coffee = fixture("coffee_fts.json");
    let output = run(&["translate", "mucalc", coffee.to_str().unwrap(), "tt"]);
    assert!(output.status.success());
    let game = featgames::game::format::parse_game(&stdout_of(&output)).unwrap();
    assert_eq!(game.state_count(), 1);
    let solved = featgames::featured::solve_parity(&game).unwrap();
    assert!((0..game.products().len()).all(|i| *solved.winners.value_at_index(i)));
}

#[test]
fn translate_distance_records_the_discount() {
    let tolerance = fixture("coffee_tolerance_fts.json");
    let output =
        run(&["translate", "distance", tolerance.to_str().unwrap(), "--lambda", "0.99"]);
    assert!(output.status.success());
    let game = featgames::game::format::parse_game(&stdout_of(&output)).unwrap();
    let discount = game.meta().discount.unwrap();
    assert!((discount - 0.99f64.sqrt()).abs() < 1e-12);
}
