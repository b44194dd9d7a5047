//! End-to-end tests driving the compiled `gamma-ratio` binary: the worked
//! examples from the user guide, exit-code contracts, determinism across
//! thread counts, and replay of contract violations.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_gamma-ratio");

fn run(args: &[&str]) -> Output {
    run_in(Path::new("."), args, &[])
}

fn run_in(dir: &Path, args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.current_dir(dir).args(args);
    for (key, value) in env {
        cmd.env(key, value);
    }
    cmd.output().expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

/// A per-test scratch directory under the system temp dir.
fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gamma-ratio-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("create scratch dir");
    dir
}

#[test]
fn eval_tabulates_the_two_block_example() {
    let out = run(&["eval", "--matrix", "[[1,1]]", "--rho", "2", "--grid", "0.1", "10", "5"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout_str(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6, "header plus one row per grid point");
    assert_eq!(lines[0], "config,t,log_f,dlog_f,d2log_f");
    // The middle grid point of 0.1..10 is t = 1, where the 1x2 matrix of
    // ones gives f(1) = binomial(2, 1) = 2.
    let fields: Vec<&str> = lines[3].split(',').collect();
    let t: f64 = fields[1].parse().expect("t parses");
    let log_f: f64 = fields[2].parse().expect("log_f parses");
    assert!((t - 1.0).abs() < 1e-9, "middle grid point should be 1, got {t}");
    assert!(
        (log_f - 2.0_f64.ln()).abs() < 1e-9,
        "ln f(1) should be ln 2, got {log_f}"
    );
}

#[test]
fn ineq_check_sweep_stays_above_the_rounding_floor() {
    let out = run(&["ineq-check", "--dims", "3", "3", "--samples", "1000", "--seed", "42"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert_eq!(text.lines().count(), 1001);
    for line in text.lines().skip(1) {
        let margin: f64 = line
            .rsplit(',')
            .next()
            .expect("margin column")
            .parse()
            .expect("margin parses");
        assert!(margin >= -1e-12, "margin {margin} below the floor");
    }
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("min normalized margin"), "summary on stderr");
}

#[test]
fn sharpness_on_the_single_entry_case_is_exactly_two() {
    let out = run(&["sharpness", "--dims", "1", "1", "--samples", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout_str(&out)).expect("JSON report");
    assert_eq!(doc["best_ratio"].as_f64(), Some(2.0));
    assert_eq!(doc["undercuts_conjectured_floor"].as_bool(), Some(false));
}

#[test]
fn sweeps_are_deterministic_across_reruns_and_thread_counts() {
    let args = ["ineq-check", "--dims", "2", "3", "--samples", "200", "--seed", "9"];
    let single = run_in(Path::new("."), &args, &[("GAMMA_RATIO_THREADS", "1")]);
    let pooled = run_in(Path::new("."), &args, &[("GAMMA_RATIO_THREADS", "4")]);
    let default = run(&args);
    assert_eq!(single.status.code(), Some(0));
    assert_eq!(single.stdout, pooled.stdout, "thread count must not change rows");
    assert_eq!(single.stdout, default.stdout, "reruns must be bit-identical");
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    // --matrix and --dims are mutually exclusive.
    assert_eq!(
        run(&["eval", "--matrix", "[[1]]", "--dims", "2", "2"]).status.code(),
        Some(1)
    );
    // One of them is required.
    assert_eq!(run(&["eval"]).status.code(), Some(1));
    // Unknown flags are rejected by the parser.
    assert_eq!(
        run(&["eval", "--matrix", "[[1]]", "--no-such-flag"]).status.code(),
        Some(1)
    );
    // Malformed matrix JSON.
    assert_eq!(run(&["eval", "--matrix", "[[1,]"]).status.code(), Some(1));
    // A thread override must be a positive integer.
    assert_eq!(
        run_in(
            Path::new("."),
            &["ineq-check", "--dims", "2", "2"],
            &[("GAMMA_RATIO_THREADS", "zero")]
        )
        .status
        .code(),
        Some(1)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["eval", "--help"]).status.code(), Some(0));
}

#[test]
fn contract_violations_exit_two_and_replay_bit_exactly() {
    let dir = scratch_dir("replay");
    let report = dir.join("report.json");
    // At rho = 3 the matrix [[1]] has [ln f]'' < 0, so the CM grid check
    // fails by design: hypotheses demand rho <= 2.
    let out = run_in(
        &dir,
        &[
            "cm-check",
            "--matrix",
            "[[1]]",
            "--rho",
            "3",
            "--output-path",
            report.to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("outside theorem hypotheses"),
        "stderr should flag the out-of-hypothesis rho: {stderr}"
    );
    let first = std::fs::read(&report).expect("report written");
    let violation = dir.join("report.violation.json");
    assert!(violation.exists(), "replay config written next to the report");
    // Replaying the violation config reproduces the report byte for byte.
    let replayed = run_in(&dir, &["--config", violation.to_str().unwrap()], &[]);
    assert_eq!(replayed.status.code(), Some(2));
    let second = std::fs::read(&report).expect("replayed report written");
    assert_eq!(first, second, "replay must reproduce the report bit-for-bit");
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = scratch_dir("config");
    let path = dir.join("run.json");
    std::fs::write(
        &path,
        concat!(
            "{\n",
            "  \"command\": \"eval\",\n",
            "  \"matrix\": [[1.0, 1.0]],\n",
            "  \"rho\": 2.0,\n",
            "  \"grid\": { \"t_min\": 0.1, \"t_max\": 10.0, \"points\": 5 }\n",
            "}\n"
        ),
    )
    .expect("write config");
    let base = run(&["--config", path.to_str().unwrap()]);
    assert_eq!(
        base.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&base.stderr)
    );
    assert_eq!(stdout_str(&base).lines().count(), 6);
    // A flag layered on top of the file narrows the grid.
    let overridden = run(&["--config", path.to_str().unwrap(), "eval", "--points", "3"]);
    assert_eq!(overridden.status.code(), Some(0));
    assert_eq!(stdout_str(&overridden).lines().count(), 4);
    // Unknown config fields are rejected, pointing at the offending key.
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{ \"command\": \"eval\", \"matrx\": [[1.0]] }\n").expect("write config");
    let rejected = run(&["--config", bad.to_str().unwrap()]);
    assert_eq!(rejected.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&rejected.stderr).contains("matrx"));
}

#[test]
fn output_format_flag_switches_eval_to_json() {
    let out = run(&[
        "eval",
        "--matrix",
        "[[2,1],[1,3]]",
        "--output-format",
        "json",
        "--points",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout_str(&out)).expect("JSON report");
    assert_eq!(doc["command"], "eval");
    assert_eq!(doc["rows"].as_array().map(Vec::len), Some(4));
    // The config hash column stays a string even in JSON reports.
    assert!(doc["rows"][0]["config"].is_string());
}

#[test]
fn measure_density_is_nonnegative_within_hypotheses() {
    let out = run(&["measure", "--matrix", "[[1,1]]", "--rho", "2", "--points", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert_eq!(text.lines().count(), 13);
    for line in text.lines().skip(1) {
        let density: f64 = line
            .rsplit(',')
            .next()
            .expect("density column")
            .parse()
            .expect("density parses");
        assert!(density >= -1e-12, "density {density} below the floor");
    }
}

#[test]
fn combi_check_sweep_is_clean() {
    let out = run(&["combi-check", "--dims", "2", "2", "--samples", "25", "--seed", "3"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(stdout_str(&out).lines().count(), 26);
}
