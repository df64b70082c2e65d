use std::path::Path;
use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aixi-lab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path_arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn enumerate_prints_exact_masses() {
    let out = cli(&["enumerate", "--x", "0", "--x", "", "--L", "3", "--T", "10"]);
    assert!(out.status.success(), "{out:?}");
    let lines: Vec<serde_json::Value> = stdout(&out).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["x"], "0");
    assert_eq!(lines[0]["mass_numerator"], "1");
    assert_eq!(lines[0]["mass_denominator"], "8");
    assert_eq!(lines[0]["k_upper"], 3);
    assert_eq!(lines[1]["mass_numerator"], "1");
    assert_eq!(lines[1]["mass_denominator"], "1");
}

#[test]
fn agent_writes_one_row_per_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("episodes.csv");
    let out = cli(&["agent", "--env", "bernoulli:3/4", "--m", "20", "--seeds", "10", "--out", path_arg(&file)]);
    assert!(out.status.success(), "{out:?}");
    let text = std::fs::read_to_string(&file).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# aixi-lab ") && lines[0].contains("manifest=sha256:"));
    assert!(lines[1].starts_with("episode,seed,cycle,action,observation,reward"));
    assert_eq!(lines.len(), 2 + 10 * 20);
}

#[test]
fn outputs_do_not_depend_on_the_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for (jobs, d) in [("1", &a), ("3", &b)] {
        let out = cli(&["--jobs", jobs, "experiment", "selfplay", "--set", "seeds=3", "--out-dir", path_arg(d)]);
        assert!(out.status.success(), "{out:?}");
    }
    let mut names: Vec<_> = std::fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(!names.is_empty());
    for name in names {
        assert_eq!(std::fs::read(a.join(&name)).unwrap(), std::fs::read(b.join(&name)).unwrap(), "{name:?}");
    }
}

#[test]
fn config_errors_exit_two_and_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("never.csv");
    let bad_manifest = dir.path().join("bad.toml");
    std::fs::write(&bad_manifest, "experiment = \"selfplay\"\nlifetime = 4\nhorizon = 2\nseeds = 2\nbogus = 1\n").unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["agent", "--env", "bernoulli:2", "--m", "5", "--out", path_arg(&file)],
        vec!["agent", "--env", "no-such-env", "--m", "5", "--out", path_arg(&file)],
        vec!["--jobs", "0", "agent", "--env", "bernoulli:1/2", "--m", "5", "--out", path_arg(&file)],
        vec!["experiment", path_arg(&bad_manifest), "--out-dir", path_arg(dir.path())],
        vec!["experiment", "no-such-manifest"],
        vec!["experiment", "selfplay", "--set", "horizon=0", "--out-dir", path_arg(dir.path())],
        vec!["enumerate", "--bogus"],
        vec!["machine", "trace", "x?"],
    ];
    for args in cases {
        let out = cli(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {out:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    let left: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(left, vec![std::ffi::OsString::from("bad.toml")]);
}

#[test]
fn unwritable_output_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("plain-file");
    std::fs::write(&blocker, "").unwrap();
    let target = blocker.join("episodes.csv");
    let out = cli(&["agent", "--env", "bernoulli:1/2", "--m", "3", "--out", path_arg(&target)]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
    assert_eq!(std::fs::read(&blocker).unwrap(), b"");
}

#[test]
fn dry_run_prints_the_manifest_and_its_hash() {
    let out = cli(&["experiment", "convergence-two-component", "--set", "seeds=40", "--dry-run"]);
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    assert!(text.contains("seeds = 40"));
    assert!(text.lines().last().unwrap().starts_with("# sha256:"));
}

#[test]
fn machine_trace_and_catalog() {
    let out = cli(&["machine", "trace", "~[.]", "--T", "7", "--output-limit", "3"]);
    assert!(out.status.success(), "{out:?}");
    assert!(stdout(&out).contains("output \"111\""), "{}", stdout(&out));
    let out = cli(&["catalog"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for name in ["bernoulli:3/4", "pd:tft", "mdp:chain", "convergence-two-component", "prediction-gap"] {
        assert!(text.contains(name), "{name} missing from catalog");
    }
}

#[test]
fn predict_reports_one_row_per_symbol() {
    let out = cli(&["predict", "--x", "0000", "--L", "12", "--T", "64", "--normalize"]);
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "step,bit,probability,probability_f64,log2_prefix_mass");
    assert_eq!(rows.len(), 5);
}
