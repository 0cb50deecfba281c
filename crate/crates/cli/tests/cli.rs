use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_congestion"))
}

fn run_ok(args: &[&str]) -> String {
    let out = bin().args(args).output().expect("spawn");
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8")
}

fn run_expect_code(args: &[&str], code: i32) -> Output {
    let out = bin().args(args).output().expect("spawn");
    assert_eq!(
        out.status.code(),
        Some(code),
        "command {args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn has_line(text: &str, prefix: &str) -> bool {
    text.lines().any(|l| l.starts_with(prefix))
}

#[test]
fn generate_then_analyze_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("inst");
    let prefix_str = prefix.to_str().unwrap();
    let stdout = run_ok(&["generate", "poa_general", "--n", "3", "--rho", "1", "--out", prefix_str]);
    assert!(has_line(&stdout, "predicted_ne_cost: 9 + 6*sigma"));
    assert!(has_line(&stdout, "predicted_comparison_cost: 6 + 0*sigma"));

    let game_file = format!("{prefix_str}.game.json");
    assert!(Path::new(&game_file).exists());
    assert!(Path::new(&format!("{prefix_str}.profiles.json")).exists());

    let report = run_ok(&["analyze", &game_file, "--rho", "1", "--sigma", "1"]);
    assert!(has_line(&report, "poa: 5/2 (2.5)"));
    assert!(has_line(&report, "worst_ne_cost: 15 "));
    assert!(has_line(&report, "optimum_cost: 6 "));
    assert!(has_line(&report, "poa_bound: 2.5 (region_ok: true"));
}

#[test]
fn analyze_single_resource_game_is_trivial() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.json");
    fs::write(
        &path,
        r#"{"n": 1, "resources": [{"a": "1", "b": "0"}], "strategies": [[[0]]]}"#,
    )
    .unwrap();
    let report = run_ok(&["analyze", path.to_str().unwrap(), "--rho", "1", "--sigma", "1"]);
    assert!(has_line(&report, "poa: 1 (1)"));
    assert!(has_line(&report, "pos: 1 (1)"));
}

#[test]
fn analyze_two_player_tight_at_two() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("tp");
    let prefix_str = prefix.to_str().unwrap();
    run_ok(&["generate", "two_player_tight", "--rho", "2", "--out", prefix_str]);
    let report = run_ok(&[
        "analyze",
        &format!("{prefix_str}.game.json"),
        "--rho",
        "2",
        "--sigma",
        "1",
    ]);
    assert!(has_line(&report, "poa: 3 (3)"));
}

#[test]
fn analyze_detects_network_files() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("net");
    let prefix_str = prefix.to_str().unwrap();
    run_ok(&["generate", "poa_network", "--n", "2", "--rho", "1", "--out", prefix_str]);
    let net_file = format!("{prefix_str}.network.json");
    assert!(Path::new(&net_file).exists());
    let report = run_ok(&["analyze", &net_file, "--rho", "1", "--sigma", "1"]);
    // finite two-player ratio n((1+2n)n - 2)/ (n((1+1)n+1)) at n=2: 16/10 = 8/5
    assert!(has_line(&report, "poa: 8/5 (1.6)"));
}

#[test]
fn analyze_json_format() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("inst");
    let prefix_str = prefix.to_str().unwrap();
    run_ok(&["generate", "poa_general", "--n", "3", "--rho", "1", "--out", prefix_str]);
    let stdout = run_ok(&[
        "analyze",
        &format!("{prefix_str}.game.json"),
        "--rho",
        "1",
        "--sigma",
        "1",
        "--format",
        "json",
    ]);
    let value: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(value["poa"]["exact"], "5/2");
    assert_eq!(value["ne_count"], 2);
    assert_eq!(value["poa_bound"]["value"], 2.5);
    assert_eq!(value["pos_bound"]["region_ok"], true);
}

#[test]
fn verify_reports_witness_as_json() {
    let stdout = run_ok(&["verify", "smoothness", "--rho", "1", "--sigma", "2/5"]);
    let value: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(value["holds"], false);
    assert_eq!(value["witness"]["x"], 1);
    assert_eq!(value["witness"]["y"], 0);
    assert_eq!(value["region_ok"], false);

    let stdout = run_ok(&[
        "verify", "pos_proof", "--rho", "1", "--sigma", "1", "--grid", "40", "--format", "text",
    ]);
    assert!(has_line(&stdout, "holds: true"));
    assert!(has_line(&stdout, "note: K upper approximation"));
}

#[test]
fn bounds_csv_shape() {
    let stdout = run_ok(&[
        "bounds", "--rho-lo", "1", "--rho-hi", "2", "--rho-step", "1", "--sigma-lo", "1",
        "--sigma-hi", "1", "--sigma-step", "1",
    ]);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(
        lines[0],
        "rho,sigma,poa_bound,poa_region_ok,pos_bound,pos_region_ok,h_sigma,delta_sigma"
    );
    assert_eq!(lines.len(), 3);
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(first[0], "1");
    assert_eq!(first[2], "2.5");
    assert_eq!(first[3], "true");
}

#[test]
fn sweep_rows_sorted_and_exact() {
    let dir = tempfile::tempdir().unwrap();
    let out_file = dir.path().join("sweep.csv");
    run_ok(&[
        "sweep",
        "--construction",
        "two_player_tight",
        "--rho-lo",
        "2",
        "--rho-hi",
        "4",
        "--rho-step",
        "1",
        "--sigma-lo",
        "1",
        "--sigma-hi",
        "1",
        "--sigma-step",
        "1",
        "--out",
        out_file.to_str().unwrap(),
    ]);
    let csv = fs::read_to_string(&out_file).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 4);
    let poa: Vec<&str> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(2).unwrap())
        .collect();
    assert_eq!(poa, vec!["3", "4", "5"]);
    assert!(lines[1..].iter().all(|l| l.ends_with(",ok")));
}

#[test]
fn sweep_marks_budget_exceeded_rows() {
    let stdout = run_ok(&[
        "sweep",
        "--construction",
        "poa_general",
        "--n",
        "4",
        "--rho-lo",
        "1",
        "--rho-hi",
        "1",
        "--rho-step",
        "1",
        "--sigma-lo",
        "1",
        "--sigma-hi",
        "1",
        "--sigma-step",
        "1",
        "--budget",
        "3",
    ]);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[1].ends_with(",budget_exceeded"));
    assert!(lines[1].starts_with("1,1,,,"));
}

#[test]
fn delta_sweep_csv() {
    let stdout = run_ok(&[
        "delta-sweep", "--sigma-lo", "0.5", "--sigma-hi", "0.6", "--step", "0.01",
    ]);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "sigma,delta,holds");
    assert_eq!(lines.len(), 12);
    assert!(lines[1..].iter().all(|l| l.ends_with(",true")));
}

#[test]
fn error_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("inst");
    let prefix_str = prefix.to_str().unwrap();
    run_ok(&["generate", "poa_general", "--n", "3", "--rho", "1", "--out", prefix_str]);
    let game_file = format!("{prefix_str}.game.json");

    let out = run_expect_code(
        &["analyze", &game_file, "--rho", "1", "--sigma", "1", "--budget", "1"],
        2,
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));

    run_expect_code(&["analyze", "/nonexistent.json", "--rho", "1", "--sigma", "1"], 3);
    run_expect_code(&["generate", "mystery", "--rho", "1"], 3);
    run_expect_code(&["verify", "mystery", "--grid", "3"], 3);
    run_expect_code(&["verify", "smoothness", "--sigma", "1", "--grid", "3"], 3);
    run_expect_code(&["analyze", &game_file, "--rho=-1", "--sigma", "1"], 3);
}
