//! Execution of every subcommand into a verification report.

use hyperrec::circle_systems::{annulus_scan, degree_report, example1_fiber_scan};
use hyperrec::combinatorics::{
    densities, fs_set, independence_search, ip_shift_density, local_recurrence_witness,
    sturmian_word, transfer_set_metric, transfer_set_symbolic, FsGenerators, IndexSet, IpShift,
    Language, LocalRecurrence, MetricSource,
};
use hyperrec::grand_subshift::{
    build_grand_with, periodic_set_witness, union_language, wm_witness, GrandOptions, GrandSpec,
    WmWitness,
};
use hyperrec::hyperspace::{recurrence_scan, Direction, FinitePointSet, OpenBall};
use hyperrec::rigid_skew::{rigidity_report, smallness_report, witness_report, RigidSkewParams};
use hyperrec::wm_subshift::{
    build_ladder_with_budget, derive_params, derive_params_with_t, verify_prefix,
    verify_wm_subshift_with_budget, DEFAULT_SYMBOL_BUDGET,
};
use hyperrec::{Check, Error, Num, Result, Status, VerificationReport, Word};
use num_rational::BigRational;
use serde::Deserialize;
use serde_json::json;

use crate::args::*;
use crate::systems::{parse_real, parse_set, parse_system, read_json_arg, AnySystem, PointCodec};

/// Settings read from `--config`.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub symbol_budget: Option<u64>,
    pub allow_large_levels: Option<bool>,
}

impl Config {
    pub fn load(path: &std::path::Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| Error::InvalidInput(format!("bad config {}: {e}", path.display())))
    }
}

/// Resolved run settings: flag, then environment (both via `--budget`), then
/// config file, then the built-in default.
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub budget: u128,
    pub allow_large: bool,
}

impl Settings {
    pub fn resolve(flag_or_env: Option<u128>, config: &Config) -> Settings {
        Settings {
            budget: flag_or_env
                .or(config.symbol_budget.map(u128::from))
                .unwrap_or(DEFAULT_SYMBOL_BUDGET),
            allow_large: config.allow_large_levels.unwrap_or(false),
        }
    }
}

fn word(s: &str) -> Result<Word> {
    s.parse()
}

fn rational(s: &str) -> Result<BigRational> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|_| Error::InvalidInput(format!("expected a rational p/q, got {s:?}")))
}

pub fn execute(cmd: &Command, settings: Settings) -> Result<VerificationReport> {
    match cmd {
        Command::Wm(a) => wm(a, settings),
        Command::Grand(a) => Ok(grand(a, settings)?.report()),
        Command::GrandWitness(a) => grand_witness(a, settings),
        Command::GrandPeriodic(a) => grand_periodic(a, settings),
        Command::Scan(a) => scan(a),
        Command::Example1(a) => example1_fiber_scan(parse_real(&a.alpha)?, a.grid, a.horizon, a.y0),
        Command::Annulus(a) => {
            let horizon = a.horizon.unwrap_or((1u64 << a.circles.min(62)) - 1);
            annulus_scan(a.circles, horizon)
        }
        Command::Degree(a) => degree_report(&a.cocycle, parse_real(&a.alpha)?, a.n, a.grid),
        Command::Rigid(r) => rigid(r),
        Command::Comb(c) => comb(c),
        Command::Corpus(_) => Err(Error::InvalidInput("corpus runs cannot be nested".into())),
    }
}

fn wm(a: &WmArgs, settings: Settings) -> Result<VerificationReport> {
    let w = word(&a.w)?;
    let eps = rational(&a.eps)?;
    let spec = match a.t {
        Some(t) => derive_params_with_t(&w, &eps, t)?,
        None => derive_params(&w, &eps)?,
    };
    match a.inject_flip {
        None => verify_wm_subshift_with_budget(&spec, a.depth, a.horizon, settings.budget),
        Some(pos) => {
            let (ladder, mut prefix) = build_ladder_with_budget(&spec, a.depth, settings.budget)?;
            if pos as usize >= prefix.prefix.len() {
                return Err(Error::InvalidInput(format!(
                    "flip position {pos} beyond prefix length {}",
                    prefix.prefix.len()
                )));
            }
            prefix.prefix.flip(pos as usize);
            let r = verify_prefix(&spec, &ladder, &prefix, a.horizon)?;
            Ok(r.param("injected_flip", pos))
        }
    }
}

fn grand(a: &GrandArgs, settings: Settings) -> Result<GrandSpec> {
    build_grand_with(
        a.max_level,
        a.depth,
        GrandOptions {
            budget: settings.budget,
            allow_large: a.allow_large || settings.allow_large,
        },
    )
}

fn grand_params(r: VerificationReport, a: &GrandArgs) -> VerificationReport {
    r.param("max_level", a.max_level as u64).param("depth", a.depth as u64)
}

const WM_ANCHOR: &str = "k, k+1 both in N([u], [v]) for some k (weak mixing)";

fn grand_witness(a: &GrandWitnessArgs, settings: Settings) -> Result<VerificationReport> {
    let g = grand(&a.grand, settings)?;
    let mut r = grand_params(VerificationReport::new("grand-witness"), &a.grand)
        .param("horizon", a.horizon);
    let pairs: Vec<(Word, Word)> = match (&a.u, &a.v, a.all_length) {
        (Some(u), Some(v), _) => vec![(word(u)?, word(v)?)],
        (_, _, Some(k)) => {
            let lang = union_language(&g.levels, k)?;
            r = r.param("all_length", k as u64);
            lang.iter()
                .flat_map(|u| lang.iter().map(move |v| (u.clone(), v.clone())))
                .collect()
        }
        _ => return Err(Error::InvalidInput("give --u and --v, or --all-length".into())),
    };
    let single = pairs.len() == 1;
    let mut missing = Vec::new();
    let mut found = Vec::new();
    for (u, v) in &pairs {
        match wm_witness(&g, u, v, a.horizon)? {
            WmWitness::Found { k } => found.push(json!({ "u": u.to_string(), "v": v.to_string(), "k": k })),
            WmWitness::NotFound { .. } => missing.push(json!({ "u": u.to_string(), "v": v.to_string() })),
        }
    }
    let check = if single {
        let status = if missing.is_empty() { Status::Witness } else { Status::NotFound };
        Check::new("wm-pair", WM_ANCHOR, status)
    } else {
        Check::pass_if("wm-pairs", WM_ANCHOR, missing.is_empty())
    };
    r.push(
        check
            .detail(format!(
                "{} of {} pairs have k, k+1 within horizon {}",
                found.len(),
                pairs.len(),
                a.horizon
            ))
            .witnesses(json!({ "found": found, "not_found": missing })),
    );
    Ok(r)
}

fn grand_periodic(a: &GrandPeriodicArgs, settings: Settings) -> Result<VerificationReport> {
    let g = grand(&a.grand, settings)?;
    let u = word(&a.u)?;
    let mut r = grand_params(VerificationReport::new("grand-periodic"), &a.grand)
        .param("u", u.to_string())
        .param("min_reps", a.min_reps);
    let anchor = "sigma^(j + p i)(z) in [u] for all i: a periodic set inside [u]";
    let check = match periodic_set_witness(&g, &u, a.min_reps)? {
        None => Check::new("periodic-set", anchor, Status::NotFound)
            .detail("u occurs in no constructed seed word"),
        Some(p) => {
            let status = if p.failure.is_some() {
                Status::Fail
            } else if p.verified >= a.min_reps {
                Status::Pass
            } else {
                Status::Warning
            };
            let detail = match (&p.failure, &p.warning) {
                (Some(pos), _) => format!("alignment breaks at position {pos}"),
                (None, Some(w)) => w.clone(),
                (None, None) => format!(
                    "{} aligned repetitions with period {} from offset {} (level {})",
                    p.verified, p.p, p.j, p.level
                ),
            };
            Check::new("periodic-set", anchor, status)
                .detail(detail)
                .witnesses(serde_json::to_value(&p).expect("witness serializes"))
                .bound("verified", Num::int(p.verified))
        }
    };
    r.push(check);
    Ok(r)
}

fn scan(a: &ScanArgs) -> Result<VerificationReport> {
    match parse_system(&a.system)? {
        AnySystem::Circle(s) => scan_with(&s, a),
        AnySystem::Torus(s) => scan_with(&s, a),
        AnySystem::Annulus(s) => scan_with(&s, a),
        AnySystem::Shift(s) => scan_with(&s, a),
        AnySystem::Rigid(s) => scan_with(s.as_ref(), a),
    }
}

fn scan_with<S: PointCodec>(sys: &S, a: &ScanArgs) -> Result<VerificationReport> {
    let pts = parse_set(sys, &a.set)?;
    let set = FinitePointSet::new(sys, pts)?;
    let dir = if a.backward { Direction::Backward } else { Direction::Forward };
    let res = recurrence_scan(sys, &set, a.horizon, dir, a.profile)?;
    let mut r = VerificationReport::new(format!("scan({})", a.system))
        .param("system", a.system.clone())
        .param("set", a.set.clone())
        .param("set_size", set.len() as u64)
        .param("horizon", a.horizon)
        .param("direction", if a.backward { "backward" } else { "forward" })
        .param("eps", a.eps.to_string());
    let recurrent = res.min_distance < a.eps;
    let anchor = "A returns: d_H(T_K^n A, A) < eps for some 1 <= n <= horizon";
    let status = match (&a.expect, recurrent) {
        (Some(e), _) => {
            if (e == "recurrent") == recurrent {
                Status::Pass
            } else {
                Status::Fail
            }
        }
        (None, true) => Status::Witness,
        (None, false) => Status::NotFound,
    };
    let mut c = Check::new("set-recurrence", anchor, status)
        .detail(format!(
            "min d_H = {:.6e} at n = {} ({} evaluation)",
            res.min_distance,
            res.argmin.map(|n| n.to_string()).unwrap_or_else(|| "-".into()),
            if res.used_closed_form { "closed-form" } else { "iterated" }
        ))
        .bound("min_d_h", Num::real(res.min_distance, 1e-12));
    let mut w = json!({ "argmin": res.argmin, "expect": a.expect });
    if let Some(p) = &res.profile {
        w["profile"] = json!(p.iter().map(|d| hyperrec::report::fmt_f64(*d)).collect::<Vec<_>>());
    }
    c = c.witnesses(w);
    r.push(c);
    r.push(
        Check::pass_if(
            "displacement-bound",
            "d_H(T_K^n A, A) <= max_{x in A} d(T^n x, x)",
            res.displacement_violations.is_empty(),
        )
        .detail(format!("{} violations", res.displacement_violations.len()))
        .witnesses(json!({ "violations": res.displacement_violations })),
    );
    Ok(r)
}

fn rigid_params(p: &RigidParamArgs) -> RigidSkewParams {
    RigidSkewParams {
        j: p.j,
        k: p.k_terms,
        prec: p.prec,
    }
}

fn rigid(r: &RigidCommand) -> Result<VerificationReport> {
    match r {
        RigidCommand::Cert { s, params } => rigidity_report(*s, rigid_params(params)),
        RigidCommand::Witness { l, params } => witness_report(*l, rigid_params(params)),
        RigidCommand::Ineq { k, l, j } => smallness_report(*k, *l, *j),
    }
}

/// JSON array, `@file`, `evens:<end>`, `odds:<end>` or `mult:<m>:<end>`.
fn parse_index_set(s: &str) -> Result<IndexSet> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |x: &str| -> Result<u64> {
        x.parse()
            .map_err(|_| Error::InvalidInput(format!("bad integer {x:?} in {s:?}")))
    };
    match parts.as_slice() {
        ["evens", end] => Ok(IndexSet::from_predicate(num(end)?, |n| n % 2 == 0)),
        ["odds", end] => Ok(IndexSet::from_predicate(num(end)?, |n| n % 2 == 1)),
        ["mult", m, end] => {
            let m = num(m)?.max(1);
            Ok(IndexSet::from_predicate(num(end)?, move |n| n % m == 0))
        }
        _ => {
            let v = read_json_arg(s)?;
            let elems: Vec<u64> = serde_json::from_value(v)
                .map_err(|_| Error::InvalidInput("index set must be a JSON integer array".into()))?;
            let end = elems.iter().max().map_or(0, |m| m + 1);
            IndexSet::new(elems, end)
        }
    }
}

fn language(spec: &str) -> Result<Language> {
    match spec.split_once(':') {
        None if spec == "full" => Ok(Language::Full),
        Some(("sturmian", len)) => {
            let len = len
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad length in {spec:?}")))?;
            Ok(Language::Factors(sturmian_word(len)))
        }
        Some(("word", w)) => Ok(Language::Factors(word(w)?)),
        _ => Err(Error::InvalidInput(format!("unknown language {spec:?}"))),
    }
}

fn expectation(expect: &Option<String>, found: bool) -> Status {
    match expect {
        Some(e) if (e == "found") == found => Status::Pass,
        Some(_) => Status::Fail,
        None if found => Status::Witness,
        None => Status::NotFound,
    }
}

fn comb(c: &CombCommand) -> Result<VerificationReport> {
    match c {
        CombCommand::Fs { gens, bound } => {
            let g = FsGenerators::new(gens.clone())?;
            let set = fs_set(&g, *bound);
            let mut r = VerificationReport::new("fs-set")
                .param("gens", json!(gens))
                .param("bound", *bound);
            r.push(
                Check::new("fs-set", "FS(p) = finite sums of distinct generators", Status::Witness)
                    .detail(format!("{} elements up to {bound}", set.len()))
                    .witnesses(json!({ "set": set }))
                    .bound("size", Num::int(set.len() as u64)),
            );
            Ok(r)
        }
        CombCommand::Transfer(t) => transfer(t),
        CombCommand::Density { set, lengths } => {
            let j = parse_index_set(set)?;
            let d = densities(&j, lengths)?;
            let mut r = VerificationReport::new("densities")
                .param("set", set.clone())
                .param("lengths", json!(lengths));
            r.push(
                Check::new("densities", "window and sliding-window densities of J", Status::Witness)
                    .witnesses(serde_json::to_value(&d).expect("densities serialize"))
                    .bound("banach_lower_estimate", Num::rational(&d.banach_lower_estimate)),
            );
            Ok(r)
        }
        CombCommand::Ipshift { set, gens, window, theta, expect_l } => {
            let j = parse_index_set(set)?;
            let g = FsGenerators::new(gens.clone())?;
            let th = rational(theta)?;
            let res = ip_shift_density(&j, &g, *window, &th)?;
            let mut r = VerificationReport::new("ip-shift")
                .param("set", set.clone())
                .param("gens", json!(gens))
                .param("window", *window)
                .param("theta", theta.clone());
            let anchor = "some l in FS(p) has J ∩ (J − l) of density >= theta";
            let status = match (&res, expect_l) {
                (IpShift::Found { l, .. }, Some(e)) => {
                    if l == e { Status::Pass } else { Status::Fail }
                }
                (IpShift::NotFound { .. }, Some(_)) => Status::Fail,
                (IpShift::Found { .. }, None) => Status::Witness,
                (IpShift::NotFound { .. }, None) => Status::NotFound,
            };
            let mut check = Check::new("ip-shift", anchor, status)
                .witnesses(serde_json::to_value(&res).expect("result serializes"));
            if let IpShift::Found { l, density, .. } = &res {
                check = check
                    .detail(format!("l = {l}, density {}", hyperrec::report::fmt_rational(density)))
                    .bound("density", Num::rational(density));
            }
            r.push(check);
            Ok(r)
        }
        CombCommand::Indep { language: lang, u1, u2, window, k, expect } => {
            let res = independence_search(&language(lang)?, &word(u1)?, &word(u2)?, *window, *k)?;
            let found = res.core.len() == *k;
            let mut r = VerificationReport::new("independence")
                .param("language", lang.clone())
                .param("u1", u1.clone())
                .param("u2", u2.clone())
                .param("window", *window)
                .param("k", *k as u64);
            r.push(
                Check::new(
                    "independence-set",
                    "an I of size k in the window with every pattern in {1,2}^I realized",
                    expectation(expect, found),
                )
                .detail(format!(
                    "largest set found has size {} (exhaustive up to {k}); extended to {}",
                    res.core.len(),
                    res.extended.len()
                ))
                .witnesses(serde_json::to_value(&res).expect("result serializes"))
                .bound("density_proxy", Num::rational(&res.density_proxy)),
            );
            Ok(r)
        }
        CombCommand::Localrec { system, point, eps, horizon, depth, expect } => {
            let args = LocalrecArgs { system, point, eps: *eps, horizon: *horizon, depth: *depth, expect };
            match parse_system(system)? {
                AnySystem::Circle(s) => localrec(&s, &args),
                AnySystem::Torus(s) => localrec(&s, &args),
                AnySystem::Annulus(s) => localrec(&s, &args),
                AnySystem::Shift(s) => localrec(&s, &args),
                AnySystem::Rigid(s) => localrec(s.as_ref(), &args),
            }
        }
    }
}

struct LocalrecArgs<'a> {
    system: &'a str,
    point: &'a str,
    eps: f64,
    horizon: u64,
    depth: usize,
    expect: &'a Option<String>,
}

fn localrec<S: PointCodec>(sys: &S, a: &LocalrecArgs) -> Result<VerificationReport> {
    let x = sys.decode(&read_json_arg(a.point)?)?;
    let res = local_recurrence_witness(sys, &x, a.eps, a.horizon, a.depth)?;
    let found = matches!(res, LocalRecurrence::Found { .. });
    let mut r = VerificationReport::new(format!("local-recurrence({})", a.system))
        .param("point", sys.encode(&x))
        .param("eps", a.eps.to_string())
        .param("horizon", a.horizon)
        .param("depth", a.depth as u64);
    let mut c = Check::new(
        "local-recurrence",
        "T^l B[x, delta] ⊆ B[x, eps] for every l in FS(p_1..p_d) on a net of the ball",
        expectation(a.expect, found),
    )
    .witnesses(serde_json::to_value(&res).expect("result serializes"));
    if let LocalRecurrence::Found { delta, gens, .. } = &res {
        c = c
            .detail(format!("delta = {delta}, generators {gens:?}"))
            .bound("delta", Num::real(*delta, 0.0));
    }
    r.push(c);
    Ok(r)
}

fn transfer(t: &TransferArgs) -> Result<VerificationReport> {
    if let Some(src) = &t.prefix {
        let (u, v) = match (&t.u, &t.v) {
            (Some(u), Some(v)) => (word(u)?, word(v)?),
            _ => return Err(Error::InvalidInput("symbolic transfer needs --u and --v".into())),
        };
        let prefix = match src.split_once(':') {
            Some(("sturmian", len)) => sturmian_word(
                len.parse()
                    .map_err(|_| Error::InvalidInput(format!("bad length in {src:?}")))?,
            ),
            Some(("word", w)) => word(w)?,
            Some(("grand", level)) => {
                let m: usize = level
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("bad level in {src:?}")))?;
                let g = build_grand_with(m.max(1), 3, GrandOptions::default())?;
                g.level(m.max(1)).prefix.prefix.clone()
            }
            _ => return Err(Error::InvalidInput(format!("unknown prefix source {src:?}"))),
        };
        let set = transfer_set_symbolic(&prefix, &u, &v, t.horizon)?;
        let mut r = VerificationReport::new("transfer-set")
            .param("prefix", src.clone())
            .param("u", u.to_string())
            .param("v", v.to_string())
            .param("horizon", t.horizon);
        r.push(transfer_check(&set, false));
        return Ok(r);
    }
    let system = t
        .system
        .as_deref()
        .ok_or_else(|| Error::InvalidInput("give --prefix or --system".into()))?;
    match parse_system(system)? {
        AnySystem::Circle(s) => transfer_metric(&s, t, system),
        AnySystem::Torus(s) => transfer_metric(&s, t, system),
        AnySystem::Annulus(s) => transfer_metric(&s, t, system),
        AnySystem::Shift(s) => transfer_metric(&s, t, system),
        AnySystem::Rigid(s) => transfer_metric(s.as_ref(), t, system),
    }
}

fn transfer_check(set: &IndexSet, sampled: bool) -> Check {
    Check::new(
        "transfer-set",
        "N(U, V) = {n >= 1 : T^n U ∩ V non-empty} within the horizon",
        if set.is_empty() { Status::NotFound } else { Status::Witness },
    )
    .detail(format!(
        "{} times{}",
        set.len(),
        if sampled { " (sampled source: may miss times)" } else { "" }
    ))
    .witnesses(json!({ "set": set, "sampled": sampled }))
}

fn transfer_metric<S: PointCodec>(sys: &S, t: &TransferArgs, system: &str) -> Result<VerificationReport> {
    let missing = || Error::InvalidInput("metric transfer needs --from, --to and --radius".into());
    let from = sys.decode(&read_json_arg(t.from.as_deref().ok_or_else(missing)?)?)?;
    let to = sys.decode(&read_json_arg(t.to.as_deref().ok_or_else(missing)?)?)?;
    let radius = t.radius.ok_or_else(missing)?;
    let source = match t.from_radius {
        Some(rad) => MetricSource::Ball(OpenBall::new(from.clone(), rad)),
        None => MetricSource::Point(from.clone()),
    };
    let res = transfer_set_metric(sys, &source, &OpenBall::new(to.clone(), radius), t.horizon)?;
    let mut r = VerificationReport::new(format!("transfer-set({system})"))
        .param("from", sys.encode(&from))
        .param("to", sys.encode(&to))
        .param("radius", radius.to_string())
        .param("horizon", t.horizon);
    r.push(transfer_check(&res.set, res.sampled));
    Ok(r)
}
