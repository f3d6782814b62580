use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hyperrec(args: &[&str]) -> Output {
    hyperrec_env(args, &[])
}

fn hyperrec_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hyperrec"));
    cmd.args(args).env_remove("HYPERREC_SYMBOL_BUDGET");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).expect("report written")).expect("valid JSON")
}

fn status_of(report: &Value, name: &str) -> String {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))["status"]
        .as_str()
        .unwrap()
        .to_string()
}

#[test]
fn wm_seed_suite_passes_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("wm.json");
    let o = hyperrec(&["wm", "--w", "010000000000", "--eps", "1/9", "--depth", "3", "--json", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = read_json(&out);
    for name in [
        "(i) minimality-proxy",
        "(ii) weak-mixing-proxy",
        "(iii) aligned-seed",
        "(iv) return-pair",
        "(v) frequency-below-eps",
        "(vi) frequency-below-seed",
    ] {
        assert_eq!(status_of(&r, name), "pass", "{name}");
    }
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["anchor"].as_str().is_some_and(|a| !a.is_empty())));
    assert!(String::from_utf8_lossy(&o.stdout).contains("PASS"));
}

#[test]
fn run_length_shorthand_matches_literal_word() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    hyperrec(&["wm", "--w", "010000000000", "--eps", "1/9", "--json", a.to_str().unwrap()]);
    hyperrec(&["wm", "--w", "010^10", "--eps", "1/9", "--json", b.to_str().unwrap()]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn rigid_witness_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.json");
    let o = hyperrec(&["rigid", "witness", "--l", "2", "--json", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r = read_json(&out);
    assert_eq!(status_of(&r, "non-equicontinuity-gap"), "pass");
    // exact rationals are printed as num/den strings
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("/"));
}

#[test]
fn invalid_seed_is_a_usage_error_without_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bad.json");
    let o = hyperrec(&["wm", "--w", "0000", "--eps", "1/9", "--json", out.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid seed"));
    assert!(!out.exists());
}

#[test]
fn malformed_flags_exit_2_without_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.json");
    for args in [
        vec!["wm", "--w", "01", "--eps", "one-ninth"],
        vec!["wm", "--w", "0a1", "--eps", "1/9"],
        vec!["annulus", "--circles", "many"],
        vec!["rigid", "cert"],
        vec!["scan", "--system", "nowhere", "--set", "grid:10", "--horizon", "5"],
        vec!["nonsense"],
    ] {
        let mut a = args.clone();
        a.extend(["--json", out.to_str().unwrap()]);
        assert_eq!(code(&hyperrec(&a)), 2, "{args:?}");
        assert!(!out.exists(), "{args:?} wrote a report");
    }
}

#[test]
fn capacity_and_depth_errors_exit_3() {
    assert_eq!(code(&hyperrec(&["annulus", "--circles", "12", "--horizon", "4096"])), 3);
    assert_eq!(code(&hyperrec(&["grand", "--max-level", "4"])), 3);
    assert_eq!(code(&hyperrec(&["rigid", "cert", "--s", "6", "--j", "5"])), 3);
}

#[test]
fn budget_precedence_flag_env_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "symbol_budget = 100\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let wm = ["wm", "--w", "010000000000", "--eps", "1/9", "--config", cfg];
    // config alone: too small
    assert_eq!(code(&hyperrec(&wm)), 3);
    // environment beats config
    assert_eq!(code(&hyperrec_env(&wm, &[("HYPERREC_SYMBOL_BUDGET", "1000000")])), 0);
    // flag beats environment
    let mut flagged = wm.to_vec();
    flagged.extend(["--budget", "100"]);
    assert_eq!(code(&hyperrec_env(&flagged, &[("HYPERREC_SYMBOL_BUDGET", "1000000")])), 3);
    // unknown config keys are rejected
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "symbol_budgett = 5\n").unwrap();
    assert_eq!(code(&hyperrec(&["annulus", "--config", bad.to_str().unwrap()])), 2);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let out = dir.path().join(format!("r{i}.json"));
            let o = hyperrec(&[
                "scan", "--system", "example1:golden", "--set", "random:32:5", "--horizon", "300",
                "--profile", "--json", out.to_str().unwrap(),
            ]);
            assert_eq!(code(&o), 0);
            std::fs::read(out).unwrap()
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn scan_reads_points_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.json");
    std::fs::write(&pts, "[0.1, 0.35, 0.8]").unwrap();
    let set = format!("@{}", pts.display());
    let o = hyperrec(&["scan", "--system", "golden", "--set", &set, "--horizon", "10000", "--expect", "recurrent"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let o = hyperrec(&[
        "scan", "--system", "annulus:8", "--set", "rings", "--horizon", "255", "--expect", "non-recurrent",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    // wrong expectation fails with exit 1 and still writes the report
    let out = dir.path().join("s.json");
    let o = hyperrec(&[
        "scan", "--system", "annulus:8", "--set", "rings", "--horizon", "255", "--expect", "recurrent",
        "--json", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
    assert_eq!(status_of(&read_json(&out), "set-recurrence"), "fail");
}

#[test]
fn comb_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fs.json");
    let o = hyperrec(&["comb", "fs", "--gens", "1,2,4", "--bound", "100", "--json", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r = read_json(&out);
    assert_eq!(r["checks"][0]["witnesses"]["set"], serde_json::json!([1, 2, 3, 4, 5, 6, 7]));
    let ok = |args: &[&str]| assert_eq!(code(&hyperrec(args)), 0, "{args:?}");
    ok(&["comb", "density", "--set", "evens:100", "--lengths", "10,50"]);
    ok(&["comb", "ipshift", "--set", "evens:1000", "--gens", "1,2", "--window", "1000", "--theta", "1/2", "--expect-l", "2"]);
    ok(&["comb", "indep", "--window", "16", "--k", "4", "--expect", "found"]);
    ok(&["comb", "indep", "--language", "sturmian:5000", "--window", "32", "--k", "6", "--expect", "not-found"]);
    ok(&["comb", "transfer", "--prefix", "sturmian:2000", "--u", "1", "--v", "0", "--horizon", "50"]);
    ok(&["comb", "transfer", "--system", "golden", "--from", "0.1", "--to", "0.5", "--radius", "0.05", "--horizon", "100"]);
    ok(&["comb", "localrec", "--system", "golden", "--point", "0.3", "--eps", "0.1", "--horizon", "200", "--expect", "found"]);
    ok(&["comb", "localrec", "--system", "full-shift", "--point", "0(1)", "--eps", "0.5", "--horizon", "50", "--expect", "not-found"]);
    assert_eq!(code(&hyperrec(&["comb", "transfer", "--prefix", "sturmian:2000", "--u", "00", "--v", "0", "--horizon", "5"])), 2);
}

#[test]
fn grand_subcommands() {
    assert_eq!(code(&hyperrec(&["grand", "--max-level", "2", "--depth", "3"])), 0);
    assert_eq!(code(&hyperrec(&["grand-witness", "--u", "1", "--v", "0"])), 0);
    assert_eq!(code(&hyperrec(&["grand-periodic", "--u", "1"])), 0);
    assert_eq!(code(&hyperrec(&["grand-periodic", "--u", "11"])), 2);
}

#[test]
fn corpus_error_paths() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    };
    let empty = write("empty.json", r#"{"scenarios": []}"#);
    assert_eq!(code(&hyperrec(&["corpus", "--manifest", &empty])), 2);

    let missing = write("missing.json", r#"{"scenarios": [{"name": "no-such-scenario"}]}"#);
    assert_eq!(code(&hyperrec(&["corpus", "--manifest", &missing])), 2);
    assert_eq!(code(&hyperrec(&["corpus", "--only", "no-such-scenario"])), 2);

    let broken = write(
        "broken.json",
        r#"{"scenarios": [
            {"name": "rigid-witness-2"},
            {"name": "flipped", "args": ["wm", "--w", "010000000000", "--eps", "1/9", "--inject-flip", "1"]}
        ]}"#,
    );
    let out = dir.path().join("reports");
    let o = hyperrec(&["corpus", "--manifest", &broken, "--out-dir", out.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let summary = read_json(&out.join("summary.json"));
    assert_eq!(summary["passed"], false);
    assert!(out.join("flipped.json").exists() && out.join("rigid-witness-2.json").exists());

    let good = write(
        "good.json",
        r#"{"scenarios": [{"name": "rigid-cert-2"}, {"name": "custom", "args": ["comb", "fs", "--gens", "3", "--bound", "9"]}]}"#,
    );
    assert_eq!(code(&hyperrec(&["corpus", "--manifest", &good])), 0);
}

#[test]
fn default_corpus_passes() {
    let dir = tempfile::tempdir().unwrap();
    let summary = dir.path().join("summary.json");
    let o = hyperrec(&["corpus", "--json", summary.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let s = read_json(&summary);
    assert_eq!(s["passed"], true);
    assert!(s["scenarios"].as_array().unwrap().len() >= 20);
}
