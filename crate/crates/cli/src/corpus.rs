//! Regression corpus: named scenarios, each a full command line, run in
//! parallel with one report per scenario and an aggregate summary.

use std::collections::BTreeSet;
use std::path::Path;
use std::time::Instant;

use clap::Parser;
use hyperrec::report::TOOL_VERSION;
use hyperrec::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::args::{Cli, Command, CorpusArgs};
use crate::commands::{execute, Config, Settings};
use crate::{exit_code, EXIT_FAIL, EXIT_OK, EXIT_USAGE};

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    /// Command line without the program name. Omitted for built-in
    /// scenarios referenced by name.
    #[serde(default)]
    pub args: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub scenarios: Vec<Scenario>,
}

/// The acceptance scenarios shipped as the default manifest.
pub fn builtin() -> Vec<Scenario> {
    let mut v: Vec<(String, String)> = vec![
        ("wm-seed-suite".into(), "wm --w 010000000000 --eps 1/9 --depth 3".into()),
        ("wm-ladder-small".into(), "wm --w 1 --eps 1/4 --depth 4".into()),
        ("grand-level-2".into(), "grand --max-level 2 --depth 4".into()),
        ("grand-wm-pairs".into(), "grand-witness --all-length 1 --horizon 10000".into()),
        ("grand-periodic-seed".into(), "grand-periodic --u 010000000000 --min-reps 50".into()),
        ("grand-periodic-one".into(), "grand-periodic --u 1 --min-reps 50".into()),
        (
            "scan-skew-random".into(),
            "scan --system example1:golden --set random:64:7 --horizon 2000".into(),
        ),
        (
            "scan-golden-rotation".into(),
            "scan --system golden --set random:20:1 --horizon 10000 --expect recurrent".into(),
        ),
        ("example1-fibre".into(), "example1 --alpha golden --grid 2048 --horizon 5000".into()),
        ("annulus-12".into(), "annulus --circles 12 --horizon 4095".into()),
        ("rigid-cert-2".into(), "rigid cert --s 2".into()),
        ("rigid-cert-3".into(), "rigid cert --s 3".into()),
        ("rigid-witness-2".into(), "rigid witness --l 2".into()),
        ("degree-x".into(), "degree --cocycle x --n 3 --grid 10000".into()),
        ("degree-coboundary".into(), "degree --cocycle coboundary --n 3 --grid 10000".into()),
        (
            "indep-full-shift".into(),
            "comb indep --language full --window 64 --k 6 --expect found".into(),
        ),
        (
            "indep-sturmian".into(),
            "comb indep --language sturmian:100000 --window 32 --k 6 --expect not-found".into(),
        ),
        (
            "ipshift-evens".into(),
            "comb ipshift --set evens:1000 --gens 1,2 --window 1000 --theta 1/2 --expect-l 2".into(),
        ),
    ];
    for k in 1..=3 {
        v.push((format!("rigid-ineq-a-{k}"), format!("rigid ineq --k {k}")));
        for l in 2..=3 {
            v.push((format!("rigid-ineq-b-{k}-{l}"), format!("rigid ineq --k {k} --l {l}")));
        }
    }
    v.into_iter()
        .map(|(name, line)| Scenario {
            name,
            args: Some(line.split_whitespace().map(String::from).collect()),
        })
        .collect()
}

#[derive(Debug, Serialize)]
struct ScenarioOutcome {
    name: String,
    args: Vec<String>,
    exit_code: i32,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    #[serde(skip)]
    seconds: f64,
    #[serde(skip)]
    report_json: Option<String>,
}

#[derive(Debug, Serialize)]
struct Summary {
    tool_version: String,
    passed: bool,
    scenarios: Vec<ScenarioOutcome>,
}

fn resolve(manifest: Option<&Path>, only: &[String]) -> Result<Vec<(String, Vec<String>)>> {
    let builtins = builtin();
    let listed = match manifest {
        None => builtins.clone(),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::InvalidInput(format!("cannot read manifest {}: {e}", p.display())))?;
            let m: Manifest = serde_json::from_str(&text)
                .map_err(|e| Error::InvalidInput(format!("bad manifest {}: {e}", p.display())))?;
            m.scenarios
        }
    };
    if listed.is_empty() {
        return Err(Error::InvalidInput("manifest lists no scenarios".into()));
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for s in listed {
        if !seen.insert(s.name.clone()) {
            return Err(Error::InvalidInput(format!("duplicate scenario {:?}", s.name)));
        }
        let args = match s.args {
            Some(a) => a,
            None => builtins
                .iter()
                .find(|b| b.name == s.name)
                .and_then(|b| b.args.clone())
                .ok_or_else(|| Error::InvalidInput(format!("missing scenario {:?}", s.name)))?,
        };
        out.push((s.name, args));
    }
    for o in only {
        if !seen.contains(o) {
            return Err(Error::InvalidInput(format!("missing scenario {o:?}")));
        }
    }
    if !only.is_empty() {
        out.retain(|(n, _)| only.contains(n));
    }
    Ok(out)
}

fn run_one(name: &str, args: &[String], parent: &Config) -> ScenarioOutcome {
    let start = Instant::now();
    let mut outcome = ScenarioOutcome {
        name: name.to_string(),
        args: args.to_vec(),
        exit_code: EXIT_USAGE,
        passed: false,
        error: None,
        seconds: 0.0,
        report_json: None,
    };
    let argv = std::iter::once("hyperrec".to_string()).chain(args.iter().cloned());
    let result = Cli::try_parse_from(argv)
        .map_err(|e| (EXIT_USAGE, e.to_string().trim().to_string()))
        .and_then(|cli| {
            if matches!(cli.command, Command::Corpus(_)) {
                return Err((EXIT_USAGE, "corpus runs cannot be nested".to_string()));
            }
            let config = match &cli.config {
                Some(p) => Config::load(p).map_err(|e| (EXIT_USAGE, e.to_string()))?,
                None => parent.clone(),
            };
            execute(&cli.command, Settings::resolve(cli.budget, &config))
                .map_err(|e| (exit_code(&e), e.to_string()))
        });
    match result {
        Ok(report) => {
            outcome.passed = report.passed();
            outcome.exit_code = if outcome.passed { EXIT_OK } else { EXIT_FAIL };
            outcome.report_json = Some(report.to_json());
        }
        Err((code, msg)) => {
            outcome.exit_code = code;
            outcome.error = Some(msg);
        }
    }
    outcome.seconds = start.elapsed().as_secs_f64();
    outcome
}

/// Runs the corpus and returns the process exit code.
pub fn run(a: &CorpusArgs, config: &Config, json: Option<&Path>, quiet: bool) -> i32 {
    if a.list {
        for s in builtin() {
            println!("{:<24} {}", s.name, s.args.unwrap_or_default().join(" "));
        }
        return EXIT_OK;
    }
    let scenarios = match resolve(a.manifest.as_deref(), &a.only) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let outcomes: Vec<ScenarioOutcome> = scenarios
        .par_iter()
        .map(|(name, args)| run_one(name, args, config))
        .collect();
    let passed = outcomes.iter().all(|o| o.passed);
    if let Some(dir) = &a.out_dir {
        if let Err(e) = std::fs::create_dir_all(dir) {
            eprintln!("error: cannot create {}: {e}", dir.display());
            return EXIT_USAGE;
        }
        for o in &outcomes {
            if let Some(r) = &o.report_json {
                let path = dir.join(format!("{}.json", o.name));
                if let Err(e) = std::fs::write(&path, r) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return EXIT_USAGE;
                }
            }
        }
    }
    if !quiet {
        for o in &outcomes {
            let verdict = if o.passed { "PASS" } else { "FAIL" };
            let extra = o.error.as_deref().map(|e| format!(" — {e}")).unwrap_or_default();
            println!(
                "{verdict} {:<24} exit {} ({:.2}s){extra}",
                o.name, o.exit_code, o.seconds
            );
        }
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("corpus: {} scenarios, {} failed", outcomes.len(), failed);
    let usage_error = outcomes.iter().any(|o| o.exit_code == EXIT_USAGE);
    let summary = Summary {
        tool_version: TOOL_VERSION.to_string(),
        passed,
        scenarios: outcomes,
    };
    let text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    let mut targets: Vec<std::path::PathBuf> = json.map(Path::to_path_buf).into_iter().collect();
    if let Some(dir) = &a.out_dir {
        targets.push(dir.join("summary.json"));
    }
    for t in targets {
        if let Err(e) = std::fs::write(&t, &text) {
            eprintln!("error: cannot write {}: {e}", t.display());
            return EXIT_USAGE;
        }
    }
    if usage_error {
        EXIT_USAGE
    } else if passed {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}
