use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;

const THRESHOLDS: &str = r#"
study = "thresholds"
[model]
kind = "separable"
n = 1
delta = 1.0
c = 1.0
amplitude = 1.0
cross_section = { kind = "interval-dirichlet", extent = 1.0, copies = 1 }
"#;

const SCALING: &str = r#"
study = "scaling"
seed = 7
[model]
kind = "square-well"
depth = 5.0
half_width = 2.0
[numeric]
domain = "half-line"
length = 15.0
h = 0.05
window = [-5.0, 0.0]
[deformation]
lambdas = [[0.0, 0.2]]
betas = [[-0.5, 0.0]]
onset = 3.0
sector_samples = 150
"#;

fn cylspec(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_cylspec")).args(args).output().unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("config.toml");
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn thresholds_run_writes_indexed_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), THRESHOLDS);
    let out = tmp.path().join("out");
    let o = cylspec(&["thresholds", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let manifest: Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["passed"], true);
    assert_eq!(manifest["schema_version"], 1);
    // every listed file exists with the recorded row count
    for f in manifest["files"].as_array().unwrap() {
        let text = fs::read_to_string(out.join(f["name"].as_str().unwrap())).unwrap();
        assert_eq!(text.len() as u64, f["bytes"].as_u64().unwrap());
        if f["kind"] == "csv" {
            assert_eq!(text.lines().count() as u64 - 1, f["records"].as_u64().unwrap());
        }
    }
    // the config echo carries resolved defaults
    assert_eq!(manifest["config"]["numeric"]["threshold_count"], 5);
    let csv = fs::read_to_string(out.join("thresholds.csv")).unwrap();
    assert!(csv.starts_with("j,nu,multiplicity\n1,2.4674011002723395,1\n"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SCALING);
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for d in [&a, &b] {
        let o = cylspec(&["scaling", "--config", &cfg, "--out", d.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    }
    let mut compared = 0;
    for e in fs::read_dir(&a).unwrap() {
        let name = e.unwrap().file_name();
        if name == "manifest.json" {
            continue;
        }
        assert_eq!(fs::read(a.join(&name)).unwrap(), fs::read(b.join(&name)).unwrap(), "{name:?}");
        compared += 1;
    }
    assert!(compared >= 4);
}

#[test]
fn bad_key_is_reported_with_exit_code_two() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), &THRESHOLDS.replace("delta", "deltaa"));
    let o = cylspec(&["thresholds", "--config", &cfg, "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("deltaa"));
}

#[test]
fn subcommand_must_match_study() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), THRESHOLDS);
    let o = cylspec(&["decay", "--config", &cfg, "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("study"));
}

#[test]
fn exit_status_follows_manifest_flag() {
    let tmp = tempfile::tempdir().unwrap();
    let text = r#"
study = "spectrum"
[model]
kind = "free"
[numeric]
domain = "half-line"
length = 15.0
h = 0.05
window = [-1.0, 0.0]
[deformation]
lambdas = [[0.0, 0.3]]
"#;
    let cfg = write_config(tmp.path(), text);
    let out = tmp.path().join("o");
    let o = cylspec(&["spectrum", "--config", &cfg, "--out", out.to_str().unwrap()]);
    let manifest: Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    let expect = if manifest["passed"] == true { 0 } else { 1 };
    assert_eq!(o.status.code(), Some(expect));
}

#[test]
fn self_check_passes() {
    let o = cylspec(&["--check"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
}
