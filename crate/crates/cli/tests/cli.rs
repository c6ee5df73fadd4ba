//! End-to-end tests of the `decoherence-lab` binary: exit codes, artifact
//! shape, and byte determinism across reruns and thread counts.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_decoherence-lab"))
}

fn temp_path(tag: &str, ext: &str) -> PathBuf {
    std::env::temp_dir().join(format!("declab-{tag}-{}.{ext}", std::process::id()))
}

fn write_config(tag: &str, body: &str) -> PathBuf {
    let path = temp_path(tag, "json");
    std::fs::write(&path, body).unwrap();
    path
}

fn run_ok(output: &Output) {
    assert!(
        output.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
}

#[test]
fn kaon_asymmetry_artifact_shape() {
    let config = write_config(
        "kaon-shape",
        r#"{"scenario": "kaon-asymmetry", "parameters": {"t_max_tau_s": 20.0, "n_points": 400}}"#,
    );
    let out = temp_path("kaon-shape", "csv");
    let output = bin()
        .args(["kaon-asymmetry", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .args(["--format", "csv"])
        .output()
        .unwrap();
    run_ok(&output);

    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "# scenario: kaon-asymmetry");
    let equations = lines.next().unwrap();
    assert!(equations.starts_with("# equations: Eq. ("), "{equations}");
    let header = text
        .lines()
        .find(|l| !l.starts_with('#'))
        .unwrap();
    assert_eq!(header, "t_over_tau_s,a_2pi,a_dm,trace,purity,entropy");
    let data_rows = text.lines().filter(|l| !l.starts_with('#')).count() - 1;
    assert_eq!(data_rows, 400);

    std::fs::remove_file(config).ok();
    std::fs::remove_file(out).ok();
}

#[test]
fn json_artifact_parses_with_metadata() {
    let config = write_config(
        "foam-json",
        r#"{"parameters": {"n_points": 5, "t_max_s": 1e-17}}"#,
    );
    let out = temp_path("foam-json", "json");
    let output = bin()
        .args(["foam-estimate", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .args(["--format", "json"])
        .output()
        .unwrap();
    run_ok(&output);

    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["metadata"]["scenario"], "foam-estimate");
    assert!(!doc["metadata"]["equations"].as_array().unwrap().is_empty());
    assert!(doc["metadata"]["parameters"]["coupling_d_gev3"].is_string());
    assert_eq!(doc["records"].as_array().unwrap().len(), 5);
    assert_eq!(doc["records"][0]["envelope"], 1.0);

    std::fs::remove_file(config).ok();
    std::fs::remove_file(out).ok();
}

#[test]
fn unknown_parameter_exits_2() {
    let config = write_config("unknown-key", r#"{"parameters": {}}"#);
    let out = temp_path("unknown-key", "csv");
    let output = bin()
        .args(["cavity-spectrum", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .args(["--format", "csv", "--set", "bogus_knob=1.0"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert_eq!(stderr.lines().count(), 1, "stderr: {stderr}");
    assert!(stderr.starts_with("error[validation]:"), "stderr: {stderr}");
    assert!(stderr.contains("bogus_knob"));
    std::fs::remove_file(config).ok();
}

#[test]
fn invalid_physics_exits_2() {
    // Γ_L > Γ_S violates the module precondition before any computation
    let config = write_config(
        "bad-widths",
        r#"{"parameters": {"gamma_l_gev": 1e-14, "t_max_tau_s": 1.0, "n_points": 4}}"#,
    );
    let out = temp_path("bad-widths", "csv");
    let output = bin()
        .args(["kaon-asymmetry", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .args(["--format", "csv"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    std::fs::remove_file(config).ok();
}

#[test]
fn numerical_blowup_exits_3() {
    // an Euler-Maruyama step past the f64 range overflows: numerical failure
    let config = write_config(
        "blowup",
        r#"{"parameters": {"system": "qubit-decay", "t_max": 1e300, "n_grid": 2, "trajectories": 2, "dt": 1e300}}"#,
    );
    let out = temp_path("blowup", "csv");
    let output = bin()
        .args(["qsd-compare", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .args(["--format", "csv", "--seed", "1"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.starts_with("error[numerical]:"), "stderr: {stderr}");
    std::fs::remove_file(config).ok();
}

#[test]
fn scenario_mismatch_exits_2() {
    let config = write_config("mismatch", r#"{"scenario": "kaon-scan", "parameters": {}}"#);
    let out = temp_path("mismatch", "csv");
    let output = bin()
        .args(["kaon-asymmetry", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .args(["--format", "csv"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    std::fs::remove_file(config).ok();
}

#[test]
fn output_settings_fall_back_to_config() {
    let out = temp_path("fallback", "csv");
    let config = write_config(
        "fallback",
        &format!(
            r#"{{"parameters": {{"n_points": 3, "t_max_s": 1e-17}}, "output": {{"path": {}, "format": "csv"}}}}"#,
            serde_json::json!(out.to_str().unwrap())
        ),
    );
    let output = bin().args(["foam-estimate", "--config"]).arg(&config).output().unwrap();
    run_ok(&output);
    assert!(out.exists());
    std::fs::remove_file(config).ok();
    std::fs::remove_file(out).ok();
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let config = write_config(
        "determinism",
        r#"{"parameters": {"system": "qubit-decay", "kappa": 1.0, "t_max": 0.5, "n_grid": 6, "trajectories": 64, "dt": 0.01}}"#,
    );
    let mut artifacts: Vec<Vec<u8>> = Vec::new();
    for (tag, threads) in [("d1", "1"), ("d2", "1"), ("d3", "3")] {
        let out = temp_path(tag, "csv");
        let output = bin()
            .args(["qsd-compare", "--config"])
            .arg(&config)
            .arg("--out")
            .arg(&out)
            .args(["--format", "csv", "--seed", "97"])
            .env("DECOHERENCE_LAB_THREADS", threads)
            .output()
            .unwrap();
        run_ok(&output);
        artifacts.push(std::fs::read(&out).unwrap());
        std::fs::remove_file(out).ok();
    }
    assert_eq!(artifacts[0], artifacts[1], "rerun changed bytes");
    assert_eq!(artifacts[0], artifacts[2], "thread count changed bytes");
    std::fs::remove_file(config).ok();
}

#[test]
fn cavity_spectrum_argmax_rows_sit_at_the_doublet() {
    // Δ = 0, λ/2π = 24 kHz, N = 1: the two spectrum maxima in the CSV sit
    // at ω0 ± λ (here in kHz, within one grid step)
    let config = write_config(
        "spectrum-argmax",
        r#"{"parameters": {"n_atoms": 1, "omega0_khz": 1000.0, "detuning_khz": 0.0, "lam_khz": 24.0, "n_points": 10000}}"#,
    );
    let out = temp_path("spectrum-argmax", "csv");
    let output = bin()
        .args(["cavity-spectrum", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .args(["--format", "csv"])
        .output()
        .unwrap();
    run_ok(&output);

    let text = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<(f64, f64)> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("omega_khz"))
        .map(|l| {
            let mut split = l.split(',');
            (
                split.next().unwrap().parse().unwrap(),
                split.next().unwrap().parse().unwrap(),
            )
        })
        .collect();
    assert_eq!(rows.len(), 10000);
    let mut peaks = Vec::new();
    for i in 1..rows.len() - 1 {
        if rows[i].1 > rows[i - 1].1 && rows[i].1 > rows[i + 1].1 {
            peaks.push(rows[i].0);
        }
    }
    let step = rows[1].0 - rows[0].0;
    assert_eq!(peaks.len(), 2, "expected a doublet, got {peaks:?}");
    assert!((peaks[0] - (1000.0 - 24.0)).abs() <= step);
    assert!((peaks[1] - (1000.0 + 24.0)).abs() <= step);

    std::fs::remove_file(config).ok();
    std::fs::remove_file(out).ok();
}

#[test]
fn shipped_example_configs_run() {
    let configs = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for entry in std::fs::read_dir(&configs).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let scenario = path.file_stem().unwrap().to_str().unwrap().to_string();
        // keep the stochastic ensemble small in this smoke test
        let mut args: Vec<String> = vec![scenario.clone()];
        args.push("--config".into());
        args.push(path.to_str().unwrap().into());
        if scenario == "qsd-compare" {
            args.extend(["--set".into(), "trajectories=32".into()]);
        }
        let out = temp_path(&format!("example-{scenario}"), "csv");
        let output = bin()
            .args(&args)
            .arg("--out")
            .arg(&out)
            .args(["--format", "csv"])
            .output()
            .unwrap();
        run_ok(&output);
        assert!(out.exists());
        std::fs::remove_file(out).ok();
    }
}
