//! End-to-end checks of the `chirp` binary: file formats, determinism,
//! error handling.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn chirp() -> Command {
    Command::new(env!("CARGO_BIN_EXE_chirp"))
}

fn run_ok(cmd: &mut Command) -> Output {
    let out = cmd.output().expect("binary runs");
    assert!(
        out.status.success(),
        "command failed\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn simulate_t20(dir: &Path) -> PathBuf {
    // short, loud-noise setup: 20 observations
    let series = dir.join("series.csv");
    run_ok(chirp().args([
        "simulate",
        "--a",
        "2.0",
        "--b",
        "2.0",
        "--alpha",
        "1.75",
        "--beta",
        "1.75",
        "--sigma",
        "1.4142135623730951",
        "--len",
        "20",
        "--seed",
        "4",
        "--out",
        series.to_str().unwrap(),
    ]));
    series
}

#[test]
fn missing_input_fails_without_partial_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("fit");
    let out = chirp()
        .args([
            "fit",
            "--input",
            dir.path().join("nope.csv").to_str().unwrap(),
            "--out-dir",
            out_dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(!out_dir.exists(), "failed run must not leave outputs behind");
}

#[test]
fn smoke_fit_emits_all_files_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let series = simulate_t20(dir.path());

    let fit_args = |out: &Path| {
        vec![
            "fit".to_string(),
            "--input".into(),
            series.to_str().unwrap().into(),
            "--mode".into(),
            "iid".into(),
            "--iters".into(),
            "2000".into(),
            "--burnin".into(),
            "500".into(),
            "--seed".into(),
            "11".into(),
            "--out-dir".into(),
            out.to_str().unwrap().into(),
        ]
    };

    let run1 = dir.path().join("run1");
    run_ok(chirp().args(fit_args(&run1)));
    for file in [
        "draws.csv",
        "summary.json",
        "hist_r.csv",
        "hist_theta.csv",
        "hist_alpha.csv",
        "hist_beta.csv",
        "hist_sigma2.csv",
        "hist_a.csv",
        "hist_b.csv",
    ] {
        assert!(run1.join(file).exists(), "missing {file}");
    }

    // same manifest + seed: byte-identical draws
    let run2 = dir.path().join("run2");
    run_ok(chirp().args(fit_args(&run2)));
    let a = std::fs::read(run1.join("draws.csv")).unwrap();
    let b = std::fs::read(run2.join("draws.csv")).unwrap();
    assert_eq!(a, b, "seeded reruns must reproduce draws byte for byte");

    // draw count bookkeeping: (2000 - 500) / 1
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().count(), 1 + 1500);
    assert!(text.lines().next().unwrap().starts_with("r,theta,alpha,beta,sigma2,"));
}

#[test]
fn forecast_emits_density_files_band_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let series = dir.path().join("dep.csv");
    run_ok(chirp().args([
        "simulate",
        "--a",
        "2.93",
        "--b",
        "1.91",
        "--alpha",
        "2.5",
        "--beta",
        "0.1",
        "--sigma",
        "0.7071067811865476",
        "--rho",
        "0.6931471805599453",
        "--len",
        "55",
        "--seed",
        "7",
        "--out",
        series.to_str().unwrap(),
    ]));

    let out_dir = dir.path().join("fit");
    run_ok(chirp().args([
        "fit",
        "--input",
        series.to_str().unwrap(),
        "--mode",
        "dep",
        "--iters",
        "3000",
        "--burnin",
        "500",
        "--seed",
        "3",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]));
    assert!(out_dir.join("hist_rho.csv").exists());

    run_ok(chirp().args([
        "forecast",
        "--input",
        series.to_str().unwrap(),
        "--out-dir",
        out_dir.to_str().unwrap(),
        "--horizon",
        "5",
        "--seed",
        "42",
    ]));

    for j in 1..=5 {
        assert!(out_dir.join(format!("pred_draws_h{j}.csv")).exists());
        assert!(out_dir.join(format!("pred_density_h{j}.csv")).exists());
    }
    assert!(out_dir.join("forecast_summary.json").exists());

    // band file: one row per observation, lower <= upper everywhere
    let band = std::fs::read_to_string(out_dir.join("band.csv")).unwrap();
    let rows: Vec<&str> = band.lines().skip(1).collect();
    assert_eq!(rows.len(), 55);
    for row in rows {
        let f: Vec<f64> = row.split(',').skip(2).map(|v| v.parse().unwrap()).collect();
        assert!(f[0] <= f[1], "band bounds out of order: {row}");
    }

    // forecast summary intervals are ordered
    let fc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("forecast_summary.json")).unwrap())
            .unwrap();
    let horizons = fc["horizons"].as_array().unwrap();
    assert_eq!(horizons.len(), 5);
    for h in horizons {
        assert!(h["lower"].as_f64().unwrap() <= h["upper"].as_f64().unwrap());
    }
}

#[test]
fn summarize_echoes_acceptance_rates_from_fit() {
    let dir = tempfile::tempdir().unwrap();
    let series = simulate_t20(dir.path());
    let out_dir = dir.path().join("fit");
    run_ok(chirp().args([
        "fit",
        "--input",
        series.to_str().unwrap(),
        "--iters",
        "2000",
        "--burnin",
        "200",
        "--seed",
        "5",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]));

    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("summary.json")).unwrap())
            .unwrap();
    let theta_rate = summary["acceptance"]["theta"].as_f64().unwrap();

    let out = run_ok(chirp().args(["summarize", "--out-dir", out_dir.to_str().unwrap()]));
    let text = String::from_utf8(out.stdout).unwrap();
    let line = text
        .lines()
        .find(|l| l.starts_with("acceptance:"))
        .expect("summarize prints acceptance rates");
    assert!(
        line.contains(&format!("theta {theta_rate:.4}")),
        "echoed rates should match the stored counters: {line}"
    );
}

#[test]
fn summarize_flags_degenerate_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("fit");
    std::fs::create_dir_all(&out_dir).unwrap();
    // hand-written draw file with a constant column
    let mut text = String::from("r,theta,alpha,beta,sigma2,a,b,log_post\n");
    for i in 0..50 {
        let v = 1.0 + (i as f64) * 0.01;
        text.push_str(&format!("{v},2.0,1.0,0.5,0.8,{v},0.1,-12.0\n"));
    }
    std::fs::write(out_dir.join("draws.csv"), text).unwrap();

    let out = run_ok(chirp().args(["summarize", "--out-dir", out_dir.to_str().unwrap()]));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.contains("degenerate"),
        "constant columns must be called out:\n{text}"
    );
}

#[test]
fn config_file_drives_the_fit() {
    let dir = tempfile::tempdir().unwrap();
    let series = simulate_t20(dir.path());
    let config = dir.path().join("config.json");
    std::fs::write(
        &config,
        "{\"n_iter\": 1500, \"burn_in\": 300, \"thin\": 3, \"seed\": 9, \"proposal_sd\": 0.1}",
    )
    .unwrap();
    let out_dir = dir.path().join("fit");
    run_ok(chirp().args([
        "fit",
        "--input",
        series.to_str().unwrap(),
        "--config",
        config.to_str().unwrap(),
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]));
    let draws = std::fs::read_to_string(out_dir.join("draws.csv")).unwrap();
    assert_eq!(draws.lines().count(), 1 + 400); // (1500 - 300) / 3

    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["seed"].as_u64().unwrap(), 9);
    assert_eq!(summary["thin"].as_u64().unwrap(), 3);

    // malformed config key is an error, not a silent ignore
    std::fs::write(&config, "{\"iterations\": 10}").unwrap();
    let out = chirp()
        .args([
            "fit",
            "--input",
            series.to_str().unwrap(),
            "--config",
            config.to_str().unwrap(),
            "--out-dir",
            dir.path().join("fit2").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(!out.status.success());
}

#[test]
fn noiseless_simulation_matches_signal() {
    // sigma tiny: the generated series is the pure chirp to double precision
    let dir = tempfile::tempdir().unwrap();
    let series = dir.path().join("clean.csv");
    run_ok(chirp().args([
        "simulate",
        "--a",
        "1.5",
        "--b",
        "1.5",
        "--alpha",
        "1.0",
        "--beta",
        "1.0",
        "--sigma",
        "1e-12",
        "--len",
        "101",
        "--seed",
        "1",
        "--out",
        series.to_str().unwrap(),
    ]));
    let text = std::fs::read_to_string(&series).unwrap();
    let values: Vec<f64> = text.lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(values.len(), 101);
    for (i, v) in values.iter().enumerate() {
        let t = (i + 1) as f64;
        let phase = t + t * t;
        let expect = 1.5 * phase.cos() + 1.5 * phase.sin();
        assert!((v - expect).abs() < 1e-9, "t {t}: {v} vs {expect}");
    }
}

#[test]
fn near_noiseless_round_trip_recovers_signal() {
    // simulate -> fit -> forecast with sigma = 1e-3 and a matching tiny
    // prior mean: the posterior signal band should hug the data
    // (tolerance 0.02, a sanity check rather than a sharp bound)
    let dir = tempfile::tempdir().unwrap();
    let series = dir.path().join("clean.csv");
    run_ok(chirp().args([
        "simulate",
        "--a",
        "2.0",
        "--b",
        "1.25",
        "--alpha",
        "1.75",
        "--beta",
        "1.05",
        "--sigma",
        "1e-3",
        "--len",
        "60",
        "--seed",
        "2",
        "--out",
        series.to_str().unwrap(),
    ]));
    let out_dir = dir.path().join("fit");
    run_ok(chirp().args([
        "fit",
        "--input",
        series.to_str().unwrap(),
        "--iters",
        "4000",
        "--burnin",
        "500",
        "--seed",
        "8",
        "--prior-sigma-mean",
        "1e-6",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]));
    run_ok(chirp().args([
        "forecast",
        "--input",
        series.to_str().unwrap(),
        "--out-dir",
        out_dir.to_str().unwrap(),
        "--seed",
        "3",
    ]));

    let band = std::fs::read_to_string(out_dir.join("band.csv")).unwrap();
    for row in band.lines().skip(1) {
        let f: Vec<f64> = row.split(',').skip(1).map(|v| v.parse().unwrap()).collect();
        let (observed, lower, upper, mean) = (f[0], f[1], f[2], f[3]);
        assert!(upper - lower < 0.02, "band width {} too wide: {row}", upper - lower);
        assert!((mean - observed).abs() < 0.02, "signal off the data: {row}");
    }
}

#[test]
fn simulate_rejects_bad_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    for (alpha, beta, sigma) in [
        ("0.0", "1.0", "1.0"),
        ("3.2", "1.0", "1.0"),
        ("1.0", "-0.1", "1.0"),
        ("1.0", "1.0", "0.0"),
    ] {
        let result = chirp()
            .args([
                "simulate", "--a", "1.0", "--b", "1.0", "--alpha", alpha, "--beta", beta,
                "--sigma", sigma, "--len", "10", "--out",
            ])
            .arg(out.to_str().unwrap())
            .output()
            .unwrap();
        assert!(
            !result.status.success(),
            "should reject alpha={alpha} beta={beta} sigma={sigma}"
        );
    }
}
