//! Finite-scale recurrence combinatorics: finite-sum sets, transfer sets,
//! densities, shifted intersections, independence sets and local
//! recurrence witnesses.
//!
//! Every verdict is a finite-scale witness or a refutation within a horizon;
//! none of them decides the corresponding infinite property.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hyperspace::{iterate, MetricSystem, OpenBall};
use crate::words::Word;

/// Strictly increasing non-negative integers, all below `window_end`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSet {
    elems: Vec<u64>,
    window_end: u64,
}

impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.elems.serialize(s)
    }
}

impl IndexSet {
    pub fn new(mut elems: Vec<u64>, window_end: u64) -> Result<Self> {
        elems.sort_unstable();
        elems.dedup();
        if elems.last().is_some_and(|&e| e >= window_end) {
            return Err(Error::InvalidInput(format!(
                "index set element beyond window end {window_end}"
            )));
        }
        Ok(IndexSet { elems, window_end })
    }

    pub fn from_predicate(window_end: u64, f: impl Fn(u64) -> bool) -> Self {
        IndexSet {
            elems: (0..window_end).filter(|&n| f(n)).collect(),
            window_end,
        }
    }

    pub fn elems(&self) -> &[u64] {
        &self.elems
    }

    pub fn window_end(&self) -> u64 {
        self.window_end
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.elems.binary_search(&n).is_ok()
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.elems.iter().all(|&e| other.contains(e))
    }

    /// `J ∩ (J − l) = {n : n ∈ J, n + l ∈ J}`, known on `[0, end − l)`.
    pub fn shifted_intersection(&self, l: u64) -> IndexSet {
        let end = self.window_end.saturating_sub(l);
        IndexSet {
            elems: self
                .elems
                .iter()
                .copied()
                .filter(|&n| n < end && self.contains(n + l))
                .collect(),
            window_end: end,
        }
    }

    /// Count of elements in `[lo, hi)`.
    pub fn count_in(&self, lo: u64, hi: u64) -> u64 {
        let a = self.elems.partition_point(|&e| e < lo);
        let b = self.elems.partition_point(|&e| e < hi);
        (b - a) as u64
    }

    pub fn max_gap(&self) -> Option<u64> {
        crate::words::max_gap(&self.elems)
    }
}

/// Generators `p_1 < p_2 < ... < p_d`, `d >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FsGenerators(Vec<u64>);

pub const MAX_FS_GENERATORS: usize = 24;

impl FsGenerators {
    pub fn new(gens: Vec<u64>) -> Result<Self> {
        if gens.is_empty() || gens.len() > MAX_FS_GENERATORS {
            return Err(Error::InvalidInput(format!(
                "need between 1 and {MAX_FS_GENERATORS} generators"
            )));
        }
        if gens[0] == 0 || gens.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(
                "generators must be positive and strictly increasing".into(),
            ));
        }
        Ok(FsGenerators(gens))
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }
}

/// All non-empty subset sums of the generators.
fn all_sums(gens: &[u64]) -> BTreeSet<u64> {
    let mut sums = BTreeSet::new();
    for &g in gens {
        let shifted: Vec<u64> = sums.iter().map(|s| s + g).collect();
        sums.insert(g);
        sums.extend(shifted);
    }
    sums
}

/// `FS(p_1, ..., p_d) ∩ [1, bound]`.
pub fn fs_set(gens: &FsGenerators, bound: u64) -> IndexSet {
    IndexSet {
        elems: all_sums(gens.as_slice())
            .into_iter()
            .filter(|&s| s <= bound)
            .collect(),
        window_end: bound.saturating_add(1),
    }
}

/// `N([u], [v]) = {1 <= n <= horizon : [u] ∩ σ^{-n}[v] ≠ ∅}`, read off the
/// prefix: exact for the prefix, an under-approximation of the subshift.
pub fn transfer_set_symbolic(prefix: &Word, u: &Word, v: &Word, horizon: u64) -> Result<IndexSet> {
    for (name, w) in [("source", u), ("target", v)] {
        if w.is_empty() || !prefix.contains(w) {
            return Err(Error::InvalidCylinder(format!(
                "{name} cylinder [{w}] does not occur in the prefix"
            )));
        }
    }
    let mu = prefix.occurrence_mask(u);
    let mv = prefix.occurrence_mask(v);
    let elems = (1..=horizon)
        .filter(|&n| mu.any_shifted_overlap(&mv, n as usize))
        .collect();
    Ok(IndexSet {
        elems,
        window_end: horizon + 1,
    })
}

/// Source of a metric transfer set.
#[derive(Clone, Debug)]
pub enum MetricSource<P> {
    Point(P),
    Ball(OpenBall<P>),
}

#[derive(Clone, Debug, Serialize)]
pub struct TransferResult {
    pub set: IndexSet,
    /// The source was sampled, so the set may miss times.
    pub sampled: bool,
    pub samples: usize,
}

/// `N(U, V)` for a point or sampled ball `U` and an open ball `V`.
pub fn transfer_set_metric<S: MetricSystem + ?Sized>(
    sys: &S,
    source: &MetricSource<S::Point>,
    target: &OpenBall<S::Point>,
    horizon: u64,
) -> Result<TransferResult> {
    let (points, sampled) = match source {
        MetricSource::Point(p) => (vec![p.clone()], false),
        MetricSource::Ball(b) => {
            let net = sys.ball_net(&b.center, b.radius).ok_or_else(|| {
                Error::InvalidInput("this system cannot sample balls".into())
            })?;
            let inside: Vec<S::Point> = net
                .into_iter()
                .filter(|p| sys.distance(p, &b.center) < b.radius)
                .collect();
            if inside.is_empty() {
                return Err(Error::InvalidCylinder("source ball has no sample points".into()));
            }
            (inside, true)
        }
    };
    let mut hits = BTreeSet::new();
    for p in &points {
        let mut q = p.clone();
        for n in 1..=horizon {
            q = sys.step(&q);
            if sys.distance(&q, &target.center) < target.radius {
                hits.insert(n);
            }
        }
    }
    Ok(TransferResult {
        set: IndexSet {
            elems: hits.into_iter().collect(),
            window_end: horizon + 1,
        },
        sampled,
        samples: points.len(),
    })
}

fn ratio(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, Debug, Serialize)]
pub struct WindowDensity {
    pub length: u64,
    pub count: u64,
    /// `count / length` on `[0, length)`.
    #[serde(serialize_with = "crate::combinatorics::ser_rational")]
    pub density: BigRational,
    /// `max_M #(J ∩ [M, M + length)) / length` over windows inside the horizon.
    #[serde(serialize_with = "crate::combinatorics::ser_rational")]
    pub banach: BigRational,
}

#[derive(Clone, Debug, Serialize)]
pub struct Densities {
    pub windows: Vec<WindowDensity>,
    /// Largest sliding-window density over all requested lengths: a lower
    /// estimate of the upper Banach density.
    #[serde(serialize_with = "crate::combinatorics::ser_rational")]
    pub banach_lower_estimate: BigRational,
    pub max_gap: Option<u64>,
}

pub(crate) fn ser_rational<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::report::fmt_rational(r))
}

pub fn densities(j: &IndexSet, lengths: &[u64]) -> Result<Densities> {
    if lengths.is_empty() {
        return Err(Error::InvalidInput("at least one window length is required".into()));
    }
    let mut windows = Vec::new();
    for &len in lengths {
        if len == 0 || len > j.window_end() {
            return Err(Error::InvalidInput(format!(
                "window length {len} outside 1..={}",
                j.window_end()
            )));
        }
        let count = j.count_in(0, len);
        let best = (0..=j.window_end() - len)
            .map(|m| j.count_in(m, m + len))
            .max()
            .unwrap_or(0);
        windows.push(WindowDensity {
            length: len,
            count,
            density: ratio(count, len),
            banach: ratio(best, len),
        });
    }
    let banach_lower_estimate = windows
        .iter()
        .map(|w| w.banach.clone())
        .max()
        .expect("non-empty");
    Ok(Densities {
        windows,
        banach_lower_estimate,
        max_gap: j.max_gap(),
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum IpShift {
    Found {
        l: u64,
        #[serde(serialize_with = "crate::combinatorics::ser_rational")]
        density: BigRational,
        window: u64,
    },
    NotFound { candidates: usize },
}

/// Smallest `l ∈ FS(gens)` whose shifted intersection `J ∩ (J − l)` has
/// density at least `theta` on `[0, min(window, end − l))`.
pub fn ip_shift_density(j: &IndexSet, gens: &FsGenerators, window: u64, theta: &BigRational) -> Result<IpShift> {
    if theta <= &ratio(0, 1) || theta > &ratio(1, 1) {
        return Err(Error::InvalidInput("theta must lie in (0, 1]".into()));
    }
    let fs = fs_set(gens, window);
    for &l in fs.elems() {
        let inter = j.shifted_intersection(l);
        let w = window.min(inter.window_end());
        if w == 0 {
            continue;
        }
        let d = ratio(inter.count_in(0, w), w);
        if &d >= theta {
            return Ok(IpShift::Found { l, density: d, window: w });
        }
    }
    Ok(IpShift::NotFound { candidates: fs.len() })
}

/// `floor((n+1)α) − floor(nα)` for `α = (√5 − 1)/2`: the coding of the
/// golden rotation from 0 with partition `[0, 1 − α) / [1 − α, 1)`.
/// Exact integer arithmetic: `floor(nα) = floor((isqrt(5n²) − n)/2)`.
pub fn sturmian_word(len: usize) -> Word {
    let fl = |n: u128| -> u128 { ((5 * n * n).sqrt() - n) / 2 };
    Word::from_bits((0..len as u128).map(|n| fl(n + 1) - fl(n) == 1))
}

#[derive(Clone, Debug)]
pub enum Language {
    /// Every finite word.
    Full,
    /// Factors of a finite word.
    Factors(Word),
}

#[derive(Clone, Debug, Serialize)]
pub struct PatternWitness {
    /// Cylinder index (1 or 2) required at each element of `I`, in order.
    pub pattern: Vec<u8>,
    /// A word of the language realizing the pattern.
    pub word: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct IndependenceResult {
    pub window: u64,
    pub k: usize,
    /// Largest independence set found by exhaustive search, capped at `k`.
    pub core: Vec<u64>,
    /// Every pattern on `core` with its witnessing word.
    pub witnesses: Vec<PatternWitness>,
    /// `core` extended greedily.
    pub extended: Vec<u64>,
    /// `|extended| / window`.
    #[serde(serialize_with = "crate::combinatorics::ser_rational")]
    pub density_proxy: BigRational,
    /// Distinct words of length `window + c − 1` (`None` for the full shift).
    pub factor_count: Option<usize>,
    /// No independence set of size `k` exists in the window.
    pub exhausted_below_k: bool,
}

/// Occupancy masks of a factor: bit `i` of `.0` (resp. `.1`) is set iff
/// cylinder 1 (resp. 2) occurs at `i`.
type Occupancy = (u64, u64);

struct Searcher<'a> {
    u1: &'a Word,
    u2: &'a Word,
    window: usize,
    /// `None` for the full shift.
    factors: Option<Vec<(Occupancy, Word)>>,
}

impl Searcher<'_> {
    fn set_mask(set: &[u64]) -> u64 {
        set.iter().fold(0u64, |m, &i| m | (1u64 << i))
    }

    /// Whether every `{1,2}`-pattern on `set` is realized.
    fn independent(&self, set: &[u64]) -> bool {
        match &self.factors {
            None => self.full_consistent(set),
            Some(fs) => {
                let need = 1usize << set.len();
                if fs.len() < need {
                    return false;
                }
                let m = Self::set_mask(set);
                let mut seen = HashSet::with_capacity(need);
                for ((o1, o2), _) in fs {
                    if (o1 | o2) & m == m {
                        seen.insert(o1 & m);
                        if seen.len() == need {
                            return true;
                        }
                    }
                }
                false
            }
        }
    }

    /// Full shift: placements at `set` never conflict pairwise.
    fn full_consistent(&self, set: &[u64]) -> bool {
        let words = [self.u1, self.u2];
        for (a, &i) in set.iter().enumerate() {
            for &j in &set[a + 1..] {
                let off = (j - i) as usize;
                for wa in words {
                    for wb in words {
                        if off < wa.len() {
                            let overlap = (wa.len() - off).min(wb.len());
                            if (0..overlap).any(|t| wa.get(off + t) != wb.get(t)) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    fn witnesses(&self, set: &[u64]) -> Vec<PatternWitness> {
        let d = set.len();
        let mut out = Vec::with_capacity(1 << d);
        let len = self.window + self.u1.len().max(self.u2.len()) - 1;
        let lookup: HashMap<u64, &Word> = match &self.factors {
            Some(fs) => {
                let m = Self::set_mask(set);
                let mut map = HashMap::new();
                for ((o1, o2), w) in fs {
                    if (o1 | o2) & m == m {
                        map.entry(o1 & m).or_insert(w);
                    }
                }
                map
            }
            None => HashMap::new(),
        };
        for bits in 0..(1u64 << d) {
            let pattern: Vec<u8> = (0..d).map(|i| if bits >> i & 1 == 1 { 1 } else { 2 }).collect();
            let word = match &self.factors {
                Some(_) => {
                    let key = set
                        .iter()
                        .zip(&pattern)
                        .filter(|(_, &p)| p == 1)
                        .fold(0u64, |m, (&i, _)| m | 1 << i);
                    lookup.get(&key).map(|w| w.to_string())
                }
                None => {
                    let mut w = Word::zeros(len);
                    for (&i, &p) in set.iter().zip(&pattern) {
                        let c = if p == 1 { self.u1 } else { self.u2 };
                        for t in 0..c.len() {
                            w.set(i as usize + t, c.get(t));
                        }
                    }
                    Some(w.to_string())
                }
            };
            out.push(PatternWitness {
                pattern,
                word: word.unwrap_or_default(),
            });
        }
        out
    }

    fn dfs(&self, current: &mut Vec<u64>, start: u64, k: usize, best: &mut Vec<u64>) -> bool {
        if current.len() > best.len() {
            *best = current.clone();
        }
        if current.len() == k {
            return true;
        }
        for i in start..self.window as u64 {
            current.push(i);
            if self.independent(current) && self.dfs(current, i + 1, k, best) {
                return true;
            }
            current.pop();
        }
        false
    }
}

/// Largest `I ⊆ [0, window)` such that every `s ∈ {1,2}^I` is realized,
/// i.e. `∩_{i∈I} σ^{-i}[u_{s(i)}] ≠ ∅` within the language.
pub fn independence_search(
    language: &Language,
    u1: &Word,
    u2: &Word,
    window: u64,
    k: usize,
) -> Result<IndependenceResult> {
    if window == 0 || window > 64 {
        return Err(Error::InvalidInput("window must be in 1..=64".into()));
    }
    if k == 0 || k > 20 {
        return Err(Error::InvalidInput("k must be in 1..=20".into()));
    }
    if u1.is_empty() || u2.is_empty() || u1.starts_with(u2) || u2.starts_with(u1) {
        return Err(Error::InvalidInput("cylinders must be non-empty and disjoint".into()));
    }
    let c = u1.len().max(u2.len());
    let factors = match language {
        Language::Full => None,
        Language::Factors(w) => {
            for (name, u) in [("first", u1), ("second", u2)] {
                if !w.contains(u) {
                    return Err(Error::InvalidCylinder(format!(
                        "{name} cylinder [{u}] is not in the language"
                    )));
                }
            }
            let len = window as usize + c - 1;
            let fs = crate::words::factors(w, len)?;
            Some(
                fs.into_iter()
                    .map(|f| {
                        let mut o = (0u64, 0u64);
                        for i in 0..window as usize {
                            if f.matches_at(i, u1) {
                                o.0 |= 1 << i;
                            }
                            if f.matches_at(i, u2) {
                                o.1 |= 1 << i;
                            }
                        }
                        (o, f)
                    })
                    .collect::<Vec<_>>(),
            )
        }
    };
    let factor_count = factors.as_ref().map(Vec::len);
    let s = Searcher {
        u1,
        u2,
        window: window as usize,
        factors,
    };
    let mut best = Vec::new();
    let reached = s.dfs(&mut Vec::new(), 0, k, &mut best);
    let witnesses = s.witnesses(&best);
    let mut extended = best.clone();
    if reached {
        for i in 0..window {
            if extended.contains(&i) {
                continue;
            }
            extended.push(i);
            extended.sort_unstable();
            if !s.independent(&extended) {
                extended.retain(|&e| e != i);
            }
        }
    }
    Ok(IndependenceResult {
        window,
        k,
        density_proxy: ratio(extended.len() as u64, window),
        core: best,
        witnesses,
        extended,
        factor_count,
        exhausted_below_k: !reached,
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum LocalRecurrence {
    Found {
        delta: f64,
        gens: Vec<u64>,
        /// FS sums verified, with 0.
        times: Vec<u64>,
        net_size: usize,
    },
    NotFound { deltas_tried: Vec<f64> },
}

/// Number of halvings of `eps` tried for `δ`.
pub const DELTA_HALVINGS: u32 = 3;

/// Searches `δ ∈ {eps, eps/2, eps/4, eps/8}` and generators
/// `p_1 < ... < p_depth <= horizon` with `T^l B[x, δ] ⊆ B[x, eps]` on a net of
/// the closed ball for every `l ∈ FS(p) ∪ {0}`.
pub fn local_recurrence_witness<S: MetricSystem + ?Sized>(
    sys: &S,
    x: &S::Point,
    eps: f64,
    horizon: u64,
    depth: usize,
) -> Result<LocalRecurrence> {
    if !(eps > 0.0) {
        return Err(Error::InvalidInput("eps must be positive".into()));
    }
    if depth == 0 || depth > 4 {
        return Err(Error::InvalidInput("depth must be in 1..=4".into()));
    }
    let mut tried = Vec::new();
    for h in 0..=DELTA_HALVINGS {
        let delta = eps / 2f64.powi(h as i32);
        tried.push(delta);
        let net: Vec<S::Point> = sys
            .ball_net(x, delta)
            .ok_or_else(|| Error::InvalidInput("this system cannot sample balls".into()))?
            .into_iter()
            .filter(|p| sys.distance(p, x) <= delta)
            .collect();
        let mut memo: HashMap<u64, bool> = HashMap::new();
        let mut good = |l: u64| -> Result<bool> {
            if let Some(&g) = memo.get(&l) {
                return Ok(g);
            }
            let mut ok = true;
            for p in &net {
                if sys.distance(&iterate(sys, p, l as i64)?, x) > eps {
                    ok = false;
                    break;
                }
            }
            memo.insert(l, ok);
            Ok(ok)
        };
        let mut gens: Vec<u64> = Vec::new();
        let mut sums: BTreeSet<u64> = BTreeSet::new();
        for l in 1..=horizon {
            if gens.len() == depth {
                break;
            }
            let mut fresh = vec![l];
            fresh.extend(sums.iter().map(|s| s + l));
            let mut all = true;
            for &t in &fresh {
                if !good(t)? {
                    all = false;
                    break;
                }
            }
            if all {
                gens.push(l);
                sums.extend(fresh);
            }
        }
        if gens.len() == depth {
            let mut times: Vec<u64> = vec![0];
            times.extend(sums);
            return Ok(LocalRecurrence::Found {
                delta,
                gens,
                times,
                net_size: net.len(),
            });
        }
    }
    Ok(LocalRecurrence::NotFound { deltas_tried: tried })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle_systems::CircleRotation;
    use crate::hyperspace::symbolic::{FullShift, ShiftPoint};

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn fs_examples() {
        let f = |g: Vec<u64>| fs_set(&FsGenerators::new(g).unwrap(), 1000).elems().to_vec();
        assert_eq!(f(vec![2, 4, 8]), vec![2, 4, 6, 8, 10, 12, 14]);
        assert_eq!(f(vec![1]), vec![1]);
        assert_eq!(f(vec![3, 5]), vec![3, 5, 8]);
        assert!(FsGenerators::new(vec![]).is_err());
    }

    #[test]
    fn density_examples() {
        let evens = IndexSet::from_predicate(1000, |n| n % 2 == 0);
        let d = densities(&evens, &[1000]).unwrap();
        assert_eq!(d.windows[0].density, ratio(1, 2));
        assert_eq!(d.max_gap, Some(2));
        let squares = IndexSet::from_predicate(1000, |n| (n as f64).sqrt().fract() == 0.0);
        assert_eq!(densities(&squares, &[1000]).unwrap().windows[0].density, ratio(32, 1000));
        let full = IndexSet::from_predicate(1000, |_| true);
        let d = densities(&full, &[1000, 10]).unwrap();
        assert_eq!(d.banach_lower_estimate, ratio(1, 1));
        assert_eq!(d.max_gap, Some(1));
    }

    #[test]
    fn ip_shift_examples() {
        let evens = IndexSet::from_predicate(1000, |n| n % 2 == 0);
        let g = FsGenerators::new(vec![2, 4, 8]).unwrap();
        match ip_shift_density(&evens, &g, 1000, &ratio(2, 5)).unwrap() {
            IpShift::Found { l, density, .. } => {
                assert_eq!(l, 2);
                assert_eq!(density, ratio(1, 2));
            }
            other => panic!("{other:?}"),
        }
        let threes = IndexSet::from_predicate(1000, |n| n % 3 == 0);
        let g = FsGenerators::new(vec![3, 9]).unwrap();
        assert!(matches!(
            ip_shift_density(&threes, &g, 1000, &ratio(3, 10)).unwrap(),
            IpShift::Found { l: 3, .. }
        ));
    }

    #[test]
    fn transfer_examples() {
        let prefix = w("0110101101");
        let n = transfer_set_symbolic(&prefix, &w("1"), &w("1"), 5).unwrap();
        assert!(n.contains(1) && n.contains(2));
        assert!(matches!(
            transfer_set_symbolic(&prefix, &w("111"), &w("1"), 5),
            Err(Error::InvalidCylinder(_))
        ));
        let id = CircleRotation::new(0.0);
        let r = transfer_set_metric(&id, &MetricSource::Ball(OpenBall::new(0.3, 0.1)), &OpenBall::new(0.3, 0.1), 20)
            .unwrap();
        assert_eq!(r.set.len(), 20);
        assert!(r.sampled);
    }

    #[test]
    fn sturmian_complexity() {
        let s = sturmian_word(2000);
        assert_eq!(s.factor(0, 10).to_string(), "0101101011");
        for n in 1..=40 {
            assert_eq!(crate::words::factors(&s, n).unwrap().len(), n + 1, "n={n}");
        }
    }

    #[test]
    fn independence_examples() {
        let (a, b) = (w("0"), w("1"));
        let r = independence_search(&Language::Full, &a, &b, 64, 6).unwrap();
        assert_eq!(r.core.len(), 6);
        assert_eq!(r.witnesses.len(), 64);
        assert_eq!(r.density_proxy, ratio(1, 1));
        let s = Language::Factors(sturmian_word(5000));
        let r = independence_search(&s, &a, &b, 32, 6).unwrap();
        assert!(r.exhausted_below_k && r.core.len() < 6);
        assert_eq!(r.factor_count, Some(33));
        let r = independence_search(&s, &a, &b, 1, 3).unwrap();
        assert_eq!(r.core.len(), 1);
        let r = independence_search(&s, &w("00"), &b, 4, 3);
        assert!(matches!(r, Err(Error::InvalidCylinder(_))));
    }

    #[test]
    fn local_recurrence_examples() {
        let rot = CircleRotation::golden();
        match local_recurrence_witness(&rot, &0.2, 0.1, 1000, 3).unwrap() {
            LocalRecurrence::Found { delta, gens, .. } => {
                assert_eq!(delta, 0.05);
                assert_eq!(gens, vec![13, 21, 34]);
            }
            other => panic!("{other:?}"),
        }
        let id = CircleRotation::new(0.0);
        assert!(matches!(
            local_recurrence_witness(&id, &0.2, 0.1, 10, 3).unwrap(),
            LocalRecurrence::Found { delta, .. } if delta == 0.1
        ));
        assert!(matches!(
            local_recurrence_witness(&FullShift, &ShiftPoint::zeros(), 0.25, 200, 3).unwrap(),
            LocalRecurrence::NotFound { .. }
        ));
    }
}
