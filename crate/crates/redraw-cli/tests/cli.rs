//! End-to-end checks of the command-line surface.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::tempdir;

fn redraw(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_redraw"))
        .args(args)
        .current_dir(dir)
        .env_remove("REDRAW_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn assert_ok(output: &Output) {
    assert!(
        output.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
}

#[test]
fn generate_writes_spec_dot_and_manifest() {
    let dir = tempdir().unwrap();
    let out = redraw(&["generate", "chain", "--n", "4", "--out", "g"], dir.path());
    assert_ok(&out);
    for file in ["network.json", "network.dot", "edges.csv", "manifest.json"] {
        assert!(dir.path().join("g").join(file).exists(), "{file} missing");
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("g/manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["subcommand"], "generate");
    assert!(manifest["resolved_config"].is_object());
}

#[test]
fn generate_is_deterministic_per_seed() {
    let dir = tempdir().unwrap();
    assert_ok(&redraw(
        &["generate", "er", "--n", "10", "--seed", "7", "--out", "a"],
        dir.path(),
    ));
    assert_ok(&redraw(
        &["generate", "er", "--n", "10", "--seed", "7", "--out", "b"],
        dir.path(),
    ));
    let a = std::fs::read(dir.path().join("a/network.json")).unwrap();
    let b = std::fs::read(dir.path().join("b/network.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn generate_rewired_ring_has_45_edges() {
    let dir = tempdir().unwrap();
    assert_ok(&redraw(&["generate", "rewired-ring", "--out", "r"], dir.path()));
    let spec: redraw::model::NetworkSpec = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("r/network.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(spec.edge_count(), 45);
    // The pinned long-distance edge 19 -> 4.
    assert!(spec.weights[[3, 18]] > 0.0);
}

#[test]
fn simulate_reconstruct_evaluate_round_trip() {
    let dir = tempdir().unwrap();
    assert_ok(&redraw(&["generate", "chain", "--n", "4", "--out", "g"], dir.path()));
    assert_ok(&redraw(
        &[
            "simulate",
            "--spec",
            "g/network.json",
            "-k",
            "5",
            "--seed",
            "3",
            "--out",
            "sim",
        ],
        dir.path(),
    ));
    assert!(dir.path().join("sim/trace_001.csv").exists());
    assert!(dir.path().join("sim/locks.json").exists());

    assert_ok(&redraw(
        &[
            "reconstruct",
            "--traces",
            "sim",
            "--nu",
            "0.9",
            "--mu",
            "0.8",
            "--out",
            "rec",
        ],
        dir.path(),
    ));
    for file in [
        "influence_raw.csv",
        "influence_post_dpi.csv",
        "influence_post_threshold.csv",
        "inferred.dot",
    ] {
        assert!(dir.path().join("rec").join(file).exists(), "{file} missing");
    }

    let out = redraw(
        &[
            "evaluate",
            "--truth",
            "g/network.json",
            "--inferred",
            "rec/influence_post_threshold.csv",
            "--out",
            "eval",
        ],
        dir.path(),
    );
    assert_ok(&out);
    let metrics = std::fs::read_to_string(dir.path().join("eval/metrics.csv")).unwrap();
    assert!(metrics.starts_with("ppv,acc,tpr,fpr\n"));
    assert!(metrics.lines().nth(1).unwrap().starts_with("100,100,100,0"));
}

#[test]
fn pipeline_with_windows_writes_one_file_per_window() {
    let dir = tempdir().unwrap();
    assert_ok(&redraw(&["generate", "star", "--out", "g"], dir.path()));
    assert_ok(&redraw(
        &[
            "pipeline",
            "--spec",
            "g/network.json",
            "-k",
            "3",
            "--seed",
            "2",
            "--window",
            "0.5",
            "--out",
            "p",
        ],
        dir.path(),
    ));
    let windows: Vec<_> = std::fs::read_dir(dir.path().join("p/windows"))
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().starts_with("window_"))
        .collect();
    assert_eq!(windows.len(), 60);
    assert!(dir.path().join("p/windows/index.json").exists());
    assert!(dir.path().join("p/metrics.json").exists());
}

#[test]
fn pipeline_single_experiment_matches_library_path() {
    let dir = tempdir().unwrap();
    assert_ok(&redraw(&["generate", "chain", "--n", "4", "--out", "g"], dir.path()));
    assert_ok(&redraw(
        &[
            "pipeline",
            "--spec",
            "g/network.json",
            "-k",
            "1",
            "--seed",
            "11",
            "--out",
            "p",
        ],
        dir.path(),
    ));
    let cli_raw = std::fs::read_to_string(dir.path().join("p/influence_raw.csv")).unwrap();

    let spec = redraw::io::read_network_json(&dir.path().join("g/network.json")).unwrap();
    let template = redraw::model::SimConfig::template(10.0, 11);
    let batch = redraw::simulator::run_batch(&spec, &template, 1, 11).unwrap();
    let raw = redraw::reconstruct::experiment_average(
        &batch,
        redraw::reconstruct::LockPolicy::WarnAndInclude,
    )
    .unwrap();
    let lib_raw: String = raw
        .values
        .rows()
        .into_iter()
        .map(|row| {
            row.iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",")
                + "\n"
        })
        .collect();
    assert_eq!(cli_raw, lib_raw);
}

#[test]
fn invalid_spec_exits_nonzero() {
    let dir = tempdir().unwrap();
    std::fs::write(
        dir.path().join("bad.json"),
        r#"{"n": 2, "weights": [[0.5, 0.0], [0.0, 0.0]]}"#,
    )
    .unwrap();
    let out = redraw(
        &["simulate", "--spec", "bad.json", "-k", "1", "--out", "s"],
        dir.path(),
    );
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("self-loop"), "stderr: {stderr}");
}

#[test]
fn calibrate_emits_grid_csv_and_suggestion() {
    let dir = tempdir().unwrap();
    let out = redraw(
        &[
            "calibrate",
            "--n",
            "4",
            "--graphs",
            "3",
            "-k",
            "2",
            "--grid-step",
            "0.2",
            "--seed",
            "9",
            "--out",
            "cal",
        ],
        dir.path(),
    );
    assert_ok(&out);
    let csv = std::fs::read_to_string(dir.path().join("cal/calibration.csv")).unwrap();
    assert!(csv.starts_with("nu,mu,ppv,acc,tpr,fpr,satisfied,admissible\n"));
    // 5 grid values per axis at step 0.2 -> 15 points with mu <= nu.
    assert_eq!(csv.lines().count(), 16);
    let suggestion: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("cal/suggestion.json")).unwrap(),
    )
    .unwrap();
    assert!(suggestion["nu"].is_number());
    assert!(suggestion["mu"].is_number());
}

#[test]
fn benchmark_k_sweep_has_one_row_per_k() {
    let dir = tempdir().unwrap();
    let out = redraw(
        &[
            "benchmark",
            "k-sweep",
            "--topology",
            "chain4",
            "--k-values",
            "2,4",
            "--seed",
            "5",
            "--out",
            "kb",
        ],
        dir.path(),
    );
    assert_ok(&out);
    let csv = std::fs::read_to_string(dir.path().join("kb/k-sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.starts_with("k,topology,ppv,acc,tpr,fpr\n"));
}
