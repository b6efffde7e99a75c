//! The `su2-toric` binary end to end: configuration errors, report
//! persistence and consolidation, and the CSV and JSON dumps.

use std::path::Path;
use std::process::{Command, Output};

use su2_toric_cli::{Check, VerificationReport, OUTPUT_DIR_ENV};

fn su2_toric(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_su2-toric")).args(args).current_dir(cwd).env_remove(OUTPUT_DIR_ENV).output().expect("binary runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn out_of_range_key_is_named_and_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "L = 2\njmaxTwice = 9\n").unwrap();
    let out = su2_toric(&["--config", cfg.to_str().unwrap(), "verify-algebra"], dir.path());
    assert!(!out.status.success());
    assert!(stderr(&out).contains("jmaxTwice"), "{}", stderr(&out));
}

#[test]
fn unknown_key_and_bad_override_are_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "omegaa = 1.0\n").unwrap();
    let out = su2_toric(&["--config", cfg.to_str().unwrap(), "braid"], dir.path());
    assert!(!out.status.success());
    assert!(stderr(&out).contains("omegaa"), "{}", stderr(&out));

    let out = su2_toric(&["--set", "alpha=-1", "excite"], dir.path());
    assert!(!out.status.success());
    assert!(stderr(&out).contains("alpha"), "{}", stderr(&out));
}

#[test]
fn unparsable_config_file_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "L = = 3\n").unwrap();
    let out = su2_toric(&["--config", cfg.to_str().unwrap(), "ground-state"], dir.path());
    assert!(!out.status.success());
    assert!(!stderr(&out).is_empty());
}

#[test]
fn report_on_an_empty_or_missing_directory_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let out = su2_toric(&["report", "--output-dir", dir.path().to_str().unwrap()], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let missing = dir.path().join("nothing-here");
    let out = su2_toric(&["report", "--output-dir", missing.to_str().unwrap()], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
}

#[test]
fn ground_state_runs_are_archived_and_the_latest_wins() {
    let dir = tempfile::tempdir().unwrap();
    let reports = dir.path().join("reports");
    let r = reports.to_str().unwrap();
    for seed in ["1", "2"] {
        let out = su2_toric(&["ground-state", "--set", "jmaxTwice=1", "--set", &format!("seed={seed}"), "--output-dir", r], dir.path());
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let archived: Vec<_> = std::fs::read_dir(reports.join("archive")).unwrap().collect();
    assert_eq!(archived.len(), 2);

    let out = su2_toric(&["report", "--output-dir", r], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let merged: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(reports.join("consolidated.json")).unwrap()).unwrap();
    assert_eq!(merged["experiments"]["ground-state"]["config"]["seed"], 2);
    assert_eq!(merged["archived_runs"]["ground-state"], 2);

    // one CSV row per spin-network config (63 at jmax = 1/2)
    let mut rows = csv::Reader::from_path(reports.join("ground_state_amplitudes_j1.csv")).unwrap();
    assert_eq!(rows.records().count(), 63);
}

#[test]
fn environment_sets_the_output_directory_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let from_env = dir.path().join("env");
    let from_flag = dir.path().join("flag");
    let run = |extra: &[&str]| {
        let mut args = vec!["ground-state", "--set", "jmaxTwice=1"];
        args.extend_from_slice(extra);
        Command::new(env!("CARGO_BIN_EXE_su2-toric")).args(&args).current_dir(dir.path()).env(OUTPUT_DIR_ENV, &from_env).output().unwrap()
    };
    assert!(run(&[]).status.success());
    assert!(from_env.join("ground-state.json").exists());
    assert!(run(&["--output-dir", from_flag.to_str().unwrap()]).status.success());
    assert!(from_flag.join("ground-state.json").exists());
}

#[test]
fn report_exits_nonzero_on_a_failed_gate() {
    let dir = tempfile::tempdir().unwrap();
    let mut r = VerificationReport::new("synthetic", "artifact-plumbing", serde_json::json!({}));
    r.push(Check::exact("always off", "artifact-plumbing", 1.0, 1e-10));
    r.write(dir.path()).unwrap();
    let out = su2_toric(&["report", "--output-dir", dir.path().to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("always off"));
}

#[test]
fn probes_alone_never_fail_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let mut r = VerificationReport::new("synthetic", "artifact-plumbing", serde_json::json!({}));
    r.push(Check::probe("large reading", "artifact-plumbing", 1e6));
    r.write(dir.path()).unwrap();
    let out = su2_toric(&["report", "--output-dir", dir.path().to_str().unwrap()], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
}

#[test]
fn corrupt_report_files_are_named() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("braid.json"), "{ not json").unwrap();
    let out = su2_toric(&["report", "--output-dir", dir.path().to_str().unwrap()], dir.path());
    assert!(!out.status.success());
    assert!(stderr(&out).contains("braid.json"), "{}", stderr(&out));
}

#[test]
fn cg_table_and_lattice_dump_are_machine_readable() {
    let dir = tempfile::tempdir().unwrap();
    let out = su2_toric(&["cg-table", "--set", "jmaxTwice=1"], dir.path());
    assert!(out.status.success());
    let mut rd = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(rd.headers().unwrap().iter().collect::<Vec<_>>(), ["j1", "m1", "j2", "m2", "j", "m", "coefficient"]);
    // <1/2 1/2; 1/2 -1/2 | 0 0> = 1/sqrt(2)
    let singlet = rd
        .records()
        .map(Result::unwrap)
        .find(|r| r.iter().take(6).collect::<Vec<_>>() == ["1/2", "1/2", "1/2", "-1/2", "0", "0"])
        .expect("singlet row");
    assert!((singlet[6].parse::<f64>().unwrap() - 0.5f64.sqrt()).abs() < 1e-15);

    let out = su2_toric(&["lattice-dump", "--set", "L=3"], dir.path());
    assert!(out.status.success());
    let layout: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(layout["size"], 3);
    assert_eq!(layout["links"].as_array().unwrap().len(), 18);
}
