//! End-to-end tests of the `opm` binary.

use std::path::Path;
use std::process::{Command, Output};

fn opm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opm"))
        .args(args)
        .output()
        .expect("spawning opm")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn field(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} ")))
        .unwrap_or_else(|| panic!("missing field {key} in {text:?}"))
        .to_string()
}

fn gen_instance(dir: &Path, motion: &str, seed: &str, perturb: &str) {
    let out = opm(&[
        "gen", "--n", "40", "--m", "6", "--motion", motion, "--perturb-pos", perturb,
        "--perturb-ang", perturb, "--seed", seed, "--out-dir", dir.to_str().unwrap(),
    ]);
    let text = stdout(&out);
    assert!(text.starts_with("certified_upper_bound "));
    assert!(dir.join("background.opts").exists());
    assert!(dir.join("pattern.opts").exists());
    assert!(dir.join("certificate.json").exists());
}

#[test]
fn match_recovers_a_zero_perturbation_instance() {
    let dir = tempfile::tempdir().unwrap();
    for (motion, seed) in [("t", "3"), ("tr", "4"), ("trs", "5")] {
        gen_instance(dir.path(), motion, seed, "0");
        let out = opm(&[
            "match", "--motion", motion, "--metric", "l2", "--eps", "0.25",
            "--pattern", dir.path().join("pattern.opts").to_str().unwrap(),
            "--background", dir.path().join("background.opts").to_str().unwrap(),
        ]);
        let text = stdout(&out);
        let h: f64 = field(&text, "hausdorff").parse().unwrap();
        assert!(h <= 1e-9, "{motion}: hausdorff {h}");
    }
}

#[test]
fn match_agrees_with_the_certificate_on_perturbed_instances() {
    let dir = tempfile::tempdir().unwrap();
    gen_instance(dir.path(), "tr", "9", "0.05");
    let cert: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("certificate.json")).unwrap())
            .unwrap();
    let bound = cert["certified_upper_bound"].as_f64().unwrap();
    assert!(bound > 0.0);
    let out = opm(&[
        "match", "--motion", "tr", "--metric", "l2", "--eps", "0.5",
        "--pattern", dir.path().join("pattern.opts").to_str().unwrap(),
        "--background", dir.path().join("background.opts").to_str().unwrap(),
        "--base-only",
    ]);
    let text = stdout(&out);
    let h: f64 = field(&text, "hausdorff").parse().unwrap();
    // the base matcher is a constant-factor approximation; sanity-band it
    assert!(h <= 20.0 * bound, "hausdorff {h} vs certified {bound}");
    let queries: u64 = field(&text, "nn_queries").parse().unwrap();
    assert!(queries > 0);
}

#[test]
fn match_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    gen_instance(dir.path(), "tr", "12", "0.1");
    let run = || {
        stdout(&opm(&[
            "match", "--motion", "tr", "--metric", "l1", "--eps", "0.5",
            "--pattern", dir.path().join("pattern.opts").to_str().unwrap(),
            "--background", dir.path().join("background.opts").to_str().unwrap(),
            "--base-only",
        ]))
    };
    assert_eq!(run(), run());
}

#[test]
fn nn_check_reports_zero_violations() {
    let out = opm(&["nn-check", "--n", "200", "--queries", "2000", "--eps-nn", "0.1"]);
    assert_eq!(stdout(&out).trim(), "violations: 0");
    let exact = opm(&["nn-check", "--n", "100", "--queries", "1000", "--eps-nn", "0"]);
    assert_eq!(stdout(&exact).trim(), "violations: 0");
}

#[test]
fn bench_queries_reports_equal_counts_for_ld_and_gr() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bench.json");
    std::fs::write(
        &config,
        r#"{
            "num_backgrounds": 2, "background_size": 30, "pattern_size": 4,
            "perturbation": [0.0, 0.0], "trials": 2,
            "algorithms": ["GR", "LD_h1", "LD_h2", "SD_h2"], "seed": 5,
            "n_sweep": [20, 30]
        }"#,
    )
    .unwrap();
    let out = opm(&["bench", "queries", "--config", config.to_str().unwrap()]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "experiment,algorithm,metric,n,m,param,value,seed"
    );
    for n in [20_u64, 30] {
        let value = |label: &str| -> f64 {
            text.lines()
                .find(|l| l.starts_with(&format!("queries,{label},")) && l.contains(&format!(",{n},4,")))
                .unwrap()
                .split(',')
                .nth(6)
                .unwrap()
                .parse()
                .unwrap()
        };
        assert_eq!(value("GR"), value("LD_h1"));
        assert_eq!(value("GR"), value("LD_h2"));
        assert!(value("SD_h2") < value("GR"));
    }
}

#[test]
fn ingest_converts_degrees_scale_and_quality() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("m.csv");
    std::fs::write(&input, "x,y,theta,quality\n100,50,90,70\n1,1,45,5\n20,30,270,90\n").unwrap();
    let output = dir.path().join("m.opts");
    let out = opm(&[
        "ingest", "--input", input.to_str().unwrap(), "--scale", "0.01",
        "--quality-min", "50", "--out", output.to_str().unwrap(),
    ]);
    assert_eq!(stdout(&out).trim(), "points 2");
    let text = std::fs::read_to_string(&output).unwrap();
    assert_eq!(
        text,
        "opts v1 2\n\
         1.0000000000000000e0 5.0000000000000000e-1 1.5707963267948966e0\n\
         2.0000000000000001e-1 2.9999999999999999e-1 4.7123889803846897e0\n"
    );
}

#[test]
fn bad_inputs_exit_nonzero_with_a_message() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.opts");
    std::fs::write(&bad, "opts v1 2\n1 2 3\n").unwrap();
    let out = opm(&[
        "match", "--motion", "t", "--metric", "l2", "--eps", "0.5",
        "--pattern", bad.to_str().unwrap(),
        "--background", bad.to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));

    let missing = opm(&[
        "match", "--motion", "t", "--metric", "l2", "--eps", "0.5",
        "--pattern", "/nonexistent.opts", "--background", "/nonexistent.opts",
    ]);
    assert!(!missing.status.success());

    let badeps = opm(&["nn-check", "--eps-nn", "-1"]);
    assert!(!badeps.status.success());
}
