use sgs_core::cli::{run_config, ExperimentConfig, CATALOGUE};
use std::path::Path;
use std::process::Command;

/// Small configs, one per catalogue entry.
const SMALL: &[(&str, &str)] = &[
    (
        "gs",
        r#"
[systems]
sampling = "fourier"
reconstruction = "legendre"
domain = [-1.0, 1.0]
[sizes]
n = [24, 40]
m = [8]
"#,
    ),
    (
        "ssr",
        r#"
[systems]
sampling = "fourier"
reconstruction = "haar"
[sizes]
m = [8, 16]
"#,
    ),
    (
        "consistent-fail",
        r#"
[systems]
sampling = "fourier"
reconstruction = "legendre"
domain = [-1.0, 1.0]
[sizes]
n = [5, 10]
"#,
    ),
    (
        "invreg-volterra",
        r#"
[sizes]
m = [8]
n = [10]
r = 14
[knobs]
alpha = [0.0, 0.001]
eps_rel = 5.0
"#,
    ),
    (
        "coherence",
        r#"
[systems]
sampling = "fourier"
reconstruction = "haar"
[sizes]
n = [16, 32]
"#,
    ),
    (
        "cs-recover",
        r#"
[systems]
sampling = "fourier"
reconstruction = "haar"
[sizes]
levels = [16, 128]
counts = [16, 24]
k = 64
sparsity_levels = [1, 2, 4, 8, 16, 32, 64]
sparsity = [1, 1, 1, 1, 1, 1, 1]
[seeds]
trials = 2
"#,
    ),
    (
        "cs-flip",
        r#"
[systems]
sampling = "fourier"
reconstruction = "haar"
[sizes]
k = 64
levels = [16, 32, 64]
counts = [16, 8, 8]
[seeds]
trials = 2
"#,
    ),
    (
        "theorem-check",
        r#"
[systems]
sampling = "fourier"
reconstruction = "haar"
[sizes]
levels = [8, 32]
counts = [8, 12]
sparsity_levels = [8, 32]
sparsity = [3, 2]
"#,
    ),
];

fn run_small(name: &str, dir: &Path, seed: u64) -> Vec<std::path::PathBuf> {
    let text = SMALL.iter().find(|(n, _)| *n == name).unwrap().1;
    let cfg = ExperimentConfig::parse(text).unwrap();
    run_config(name, &cfg, text.as_bytes(), Some(seed), Some(dir)).unwrap()
}

#[test]
fn every_experiment_writes_csv_and_meta() {
    assert_eq!(SMALL.len(), CATALOGUE.len());
    for (name, _, _) in CATALOGUE {
        let dir = tempfile::tempdir().unwrap();
        let files = run_small(name, dir.path(), 1);
        let csv = std::fs::read_to_string(&files[0]).unwrap();
        assert!(csv.lines().count() >= 2, "{name}: {csv}");
        let meta = std::fs::read_to_string(files.last().unwrap()).unwrap();
        assert!(meta.contains(&format!("experiment = \"{name}\"")), "{meta}");
        assert!(meta.contains("config_sha256"));
    }
}

#[test]
fn reruns_are_byte_identical() {
    for (name, _) in SMALL {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let fa = run_small(name, a.path(), 5);
        let fb = run_small(name, b.path(), 5);
        for (x, y) in fa.iter().zip(&fb) {
            assert_eq!(std::fs::read(x).unwrap(), std::fs::read(y).unwrap(), "{name}");
        }
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_sgs");
    let out = Command::new(bin).arg("list").output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("cs-flip"));

    let dir = tempfile::tempdir().unwrap();
    let missing = Command::new(bin).arg("gs").output().unwrap();
    assert_eq!(missing.status.code(), Some(2));

    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[sizes]\nnope = 1\n").unwrap();
    let bad = Command::new(bin).args(["gs", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));

    let good = dir.path().join("ssr.toml");
    std::fs::write(&good, SMALL[1].1).unwrap();
    let ok = Command::new(bin)
        .args(["ssr", "--config"])
        .arg(&good)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(ok.status.success(), "{}", String::from_utf8_lossy(&ok.stderr));
    assert!(dir.path().join("ssr.csv").exists());
}
