//! The layered shift built from `X(w_m, 9^-m)` for `m = 1, 2, ...`, where
//! `w_1 = 01 0^10` and `w_{m+1}` lists the length-`m` words of the earlier
//! levels, in lexicographic order, each followed by the spacer `0^(m 9^m)`.
//!
//! Languages are read off the generated prefixes, so they under-approximate
//! the true `L_m`; every report carries the depth that was used.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::report::{fmt_rational, Check, Num, Status, VerificationReport};
use crate::wm_subshift::{
    build_ladder_with_budget, derive_params, WmSubshiftSpec,
    DEFAULT_SYMBOL_BUDGET,
};
use crate::words::{language, PrefixApprox, Word};

/// Highest level built without an explicit opt-in.
pub const DEFAULT_LEVEL_CEILING: usize = 3;

#[derive(Clone, Debug)]
pub struct GrandLevel {
    pub index: usize,
    pub w: Word,
    pub eps: BigRational,
    pub spec: WmSubshiftSpec,
    pub prefix: PrefixApprox,
}

#[derive(Clone, Debug)]
pub struct GrandSpec {
    pub levels: Vec<GrandLevel>,
    pub max_level: usize,
    pub depth: usize,
    /// Standing-assumption and construction checks gathered while building.
    pub checks: Vec<Check>,
}

/// `9^-m`.
pub fn level_eps(m: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(9u32).pow(m as u32))
}

/// `m 9^m`, the spacer length used when building `w_{m+1}`.
pub fn spacer_len(m: usize) -> u128 {
    (m as u128) * 9u128.pow(m as u32)
}

pub fn first_seed() -> Word {
    let mut w: Word = "01".parse().expect("literal word");
    w.push_zeros(10);
    w
}

#[derive(Clone, Copy, Debug)]
pub struct GrandOptions {
    pub budget: u128,
    /// Permit levels above `DEFAULT_LEVEL_CEILING`.
    pub allow_large: bool,
}

impl Default for GrandOptions {
    fn default() -> Self {
        GrandOptions {
            budget: DEFAULT_SYMBOL_BUDGET,
            allow_large: false,
        }
    }
}

pub fn build_grand(max_level: usize, depth: usize) -> Result<GrandSpec> {
    build_grand_with(max_level, depth, GrandOptions::default())
}

pub fn build_grand_with(max_level: usize, depth: usize, opts: GrandOptions) -> Result<GrandSpec> {
    if max_level < 1 {
        return Err(Error::InvalidInput("max level must be >= 1".into()));
    }
    if max_level > DEFAULT_LEVEL_CEILING && !opts.allow_large {
        return Err(Error::Capacity {
            what: format!("level {max_level} (ceiling {DEFAULT_LEVEL_CEILING} without opt-in)"),
            required: max_level as u128,
            budget: DEFAULT_LEVEL_CEILING as u128,
        });
    }
    let mut levels: Vec<GrandLevel> = Vec::with_capacity(max_level);
    let mut checks = Vec::new();
    for m in 1..=max_level {
        let eps = level_eps(m);
        let w = if m == 1 {
            first_seed()
        } else {
            let prev = m - 1;
            let lang = union_language(&levels, prev)?;
            let spacer = spacer_len(prev);
            let total = lang.len() as u128 * (prev as u128 + spacer);
            if total > opts.budget {
                return Err(Error::Capacity {
                    what: format!("seed word w_{m}"),
                    required: total,
                    budget: opts.budget,
                });
            }
            let mut w = Word::new();
            for u in &lang {
                w.append(u);
                w.push_zeros(spacer as usize);
            }
            let max_ones = lang.iter().map(|u| u.ones()).max().unwrap_or(0);
            // |w|_1/|w| <= s * maxOnes / (s * spacer)
            let ratio = w.ones_ratio()?;
            let cap = BigRational::new(BigInt::from(max_ones), BigInt::from(spacer));
            checks.push(
                Check::pass_if(
                    format!("level-{m} seed density"),
                    "|w_{m+1}|_1/|w_{m+1}| <= maxOnes(L_m) / (m 9^m)",
                    ratio <= cap,
                )
                .bound("ratio", Num::rational(&ratio))
                .bound("cap", Num::rational(&cap)),
            );
            w
        };
        if w.ones() == 0 {
            return Err(Error::InvalidInput(format!(
                "standing assumption violated: w_{m} has no 1"
            )));
        }
        if m >= 2 {
            let prev_len = levels[m - 2].w.len();
            let growth = spacer_len(m - 1);
            let increasing = prev_len < w.len();
            let big_enough = w.len() as u128 >= growth;
            checks.push(
                Check::pass_if(
                    format!("level-{m} standing assumptions"),
                    "|w_{m-1}| < |w_m| and |w_m| >= (m-1) 9^(m-1)",
                    increasing && big_enough,
                )
                .detail(format!(
                    "|w_{}| = {prev_len}, |w_{m}| = {}, (m-1) 9^(m-1) = {growth}",
                    m - 1,
                    w.len()
                ))
                .bound("w_len", Num::int(w.len() as u64))
                .bound("growth_floor", Num::int(growth)),
            );
            if !(increasing && big_enough) {
                return Err(Error::InvalidInput(format!(
                    "standing assumption violated at level {m}: |w_{}| = {prev_len}, \
                     |w_{m}| = {}, required >= {growth}",
                    m - 1,
                    w.len()
                )));
            }
        }
        let spec = derive_params(&w, &eps)?;
        let (_, prefix) = build_ladder_with_budget(&spec, depth, opts.budget)?;
        levels.push(GrandLevel {
            index: m,
            w,
            eps,
            spec,
            prefix,
        });
    }
    Ok(GrandSpec {
        levels,
        max_level,
        depth,
        checks,
    })
}

/// `L_k` of the union of the first `upto` levels, read from their prefixes.
pub fn union_language(levels: &[GrandLevel], k: usize) -> Result<BTreeSet<Word>> {
    let mut out = BTreeSet::new();
    for lvl in levels {
        out.extend(language(&lvl.prefix, k)?);
    }
    Ok(out)
}

impl GrandSpec {
    pub fn level(&self, m: usize) -> &GrandLevel {
        &self.levels[m - 1]
    }

    fn require_present(&self, u: &Word) -> Result<()> {
        if u.is_empty() {
            return Err(Error::InvalidCylinder("empty word".into()));
        }
        if self.levels.iter().any(|l| l.prefix.prefix.contains(u)) {
            Ok(())
        } else {
            Err(Error::InvalidCylinder(format!(
                "{u} occurs in no level prefix (depth {})",
                self.depth
            )))
        }
    }

    /// Construction summary, standing assumptions and the factor-frequency audit.
    pub fn report(&self) -> VerificationReport {
        let mut r = VerificationReport::new("grand-shift")
            .param("max_level", self.max_level as u64)
            .param("depth", self.depth as u64)
            .param(
                "levels",
                json!(self
                    .levels
                    .iter()
                    .map(|l| json!({
                        "level": l.index,
                        "w_length": l.w.len(),
                        "w_ones": l.w.ones(),
                        "eps": fmt_rational(&l.eps),
                        "s": l.spec.s,
                        "t": l.spec.t,
                        "n": l.spec.n,
                        "prefix_length": l.prefix.len(),
                    }))
                    .collect::<Vec<_>>()),
            );
        for c in &self.checks {
            r.push(c.clone());
        }
        for l in &self.levels {
            let audit = frequency_audit(l);
            r.push(
                Check::pass_if(
                    format!("level-{} frequency audit", l.index),
                    "v starts and ends with 1, |v| > |w_j| implies |v|_1/|v| <= |w_j|_1/|w_j|",
                    audit.is_none(),
                )
                .detail(match &audit {
                    Some((a, b)) => format!("factor [{a}, {b}] is denser than w_{}", l.index),
                    None => "no denser factor in the prefix".into(),
                })
                .bound("seed_ratio", Num::rational(&l.spec.ones_ratio())),
            );
        }
        r.push(
            Check::new(
                "language-provenance",
                "L_m read from prefixes (under-approximation)",
                Status::Pass,
            )
            .detail(format!(
                "prefix under-approximation at depth {}",
                self.depth
            )),
        );
        r
    }
}

/// First factor (as a start/end position pair) that starts and ends with 1,
/// is longer than `w_j` and is denser than `w_j`.
pub fn frequency_audit(level: &GrandLevel) -> Option<(u64, u64)> {
    let ones = level.prefix.prefix.one_positions();
    let s = level.w.len() as u64;
    let w_ones = level.w.ones();
    for a in 0..ones.len() {
        for b in a..ones.len() {
            let len = ones[b] - ones[a] + 1;
            if len <= s {
                continue;
            }
            let cnt = (b - a + 1) as u64;
            // cnt / len > w_ones / s
            if u128::from(cnt) * u128::from(s) > u128::from(w_ones) * u128::from(len) {
                return Some((ones[a], ones[b]));
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "outcome")]
pub enum WmWitness {
    Found { k: u64 },
    NotFound { horizon: u64 },
}

/// Smallest `k >= 1` with `k, k+1` both in `N([u], [v])` over the level prefixes.
pub fn wm_witness(spec: &GrandSpec, u: &Word, v: &Word, horizon: u64) -> Result<WmWitness> {
    spec.require_present(u)?;
    spec.require_present(v)?;
    let masks: Vec<(Word, Word)> = spec
        .levels
        .iter()
        .map(|l| {
            (
                l.prefix.prefix.occurrence_mask(u),
                l.prefix.prefix.occurrence_mask(v),
            )
        })
        .collect();
    let hit = |k: usize| masks.iter().any(|(a, b)| a.any_shifted_overlap(b, k));
    let mut prev = false;
    let mut k = 1usize;
    while (k as u64) <= horizon {
        let h = hit(k);
        if h && prev {
            return Ok(WmWitness::Found { k: (k - 1) as u64 });
        }
        prev = h;
        k += 1;
    }
    Ok(WmWitness::NotFound { horizon })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicWitness {
    pub level: usize,
    /// Offset of `u` inside the aligned seed occurrences.
    pub j: u64,
    /// Period `n` of the level.
    pub p: u64,
    /// Number of `i` with `sigma^(j + p i)(z) in [u]` verified.
    pub verified: u64,
    /// First aligned position where `u` fails to occur, if any.
    pub failure: Option<u64>,
    /// Set when the prefix held fewer than the requested repetitions.
    pub warning: Option<String>,
}

/// Offset and period of a periodic set inside `[u]`, or `None` when `u` is in
/// no constructed seed word.
pub fn periodic_set_witness(
    spec: &GrandSpec,
    u: &Word,
    horizon: u64,
) -> Result<Option<PeriodicWitness>> {
    spec.require_present(u)?;
    let Some(level) = spec.levels.iter().find(|l| l.w.contains(u)) else {
        return Ok(None);
    };
    let j = level.w.find_first(u).expect("contains checked");
    let p = level.spec.n;
    let z = &level.prefix.prefix;
    let mut verified = 0u64;
    let mut failure = None;
    let mut pos = j;
    while pos as usize + u.len() <= z.len() {
        if !z.matches_at(pos as usize, u) {
            failure = Some(pos);
            break;
        }
        verified += 1;
        pos += p;
    }
    let warning = (failure.is_none() && verified < horizon).then(|| {
        format!(
            "only {verified} of {horizon} repetitions fit in the level-{} prefix",
            level.index
        )
    });
    Ok(Some(PeriodicWitness {
        level: level.index,
        j,
        p,
        verified,
        failure,
        warning,
    }))
}
