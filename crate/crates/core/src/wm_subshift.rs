//! The weakly mixing minimal subshift `X(w, ε)` generated by the word ladder
//!
//! ```text
//! u0 = w 0^t w 0^(t+1) w 0^t      v0 = w 0^(3t+2s+1)
//! u1 = u0 v0 u0                   v1 = u0 v0
//! u(k+1) = uk vk uk uk            v(k+1) = uk vk vk uk
//! ```
//!
//! and the finite-scale verification of its six defining properties on the
//! prefix `u_depth` of the limit point `z`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::report::{fmt_rational, Check, Num, Status, VerificationReport};
use crate::words::{max_ones_in_window, shortest_spans, PrefixApprox, Word};

/// Default ceiling on the length of any single generated prefix, in symbols.
pub const DEFAULT_SYMBOL_BUDGET: u128 = 1 << 24;

/// Parameters of one `X(w, ε)` construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WmSubshiftSpec {
    pub w: Word,
    pub eps: BigRational,
    /// `|w|`
    pub s: u64,
    /// spacer length
    pub t: u64,
    /// `|u0| = |v0| = 3s + 3t + 1`
    pub n: u64,
    /// `s + t`, the window length beyond which frequencies drop below ε
    pub big_n: u64,
}

impl WmSubshiftSpec {
    pub fn ones_ratio(&self) -> BigRational {
        BigRational::new(BigInt::from(self.w.ones()), BigInt::from(self.s))
    }

    pub fn tag(&self) -> String {
        format!("wm(w={},eps={},t={})", self.w, fmt_rational(&self.eps), self.t)
    }
}

fn check_seed(w: &Word, eps: &BigRational) -> Result<()> {
    if w.ones() == 0 {
        return Err(Error::InvalidSeed(w.to_string()));
    }
    if *eps <= BigRational::zero() || *eps >= BigRational::one() {
        return Err(Error::InvalidInput(format!(
            "eps must lie in (0, 1), got {}",
            fmt_rational(eps)
        )));
    }
    Ok(())
}

fn admissible(s: u64, t: u64, eps: &BigRational, ratio: &BigRational) -> bool {
    let r = |a: u64, b: u64| BigRational::new(BigInt::from(a), BigInt::from(b));
    t > 3 * s && r(2 * s, s + t) < *eps && t > 0 && r(2 * s, t) < *ratio
}

/// Parameters with the smallest spacer `t` satisfying `t > 3s`,
/// `2s/(s+t) < ε` and `2s/t < |w|_1/|w|`.
pub fn derive_params(w: &Word, eps: &BigRational) -> Result<WmSubshiftSpec> {
    check_seed(w, eps)?;
    let s = w.len() as u64;
    let ratio = BigRational::new(BigInt::from(w.ones()), BigInt::from(s));
    let two_s = BigRational::from_integer(BigInt::from(2 * s));
    // strict lower bounds; t = floor(bound) + 1 clears each of them
    let from_eps = (&two_s / eps - BigRational::from_integer(BigInt::from(s))).floor();
    let from_ratio = (&two_s / &ratio).floor();
    let bound = [
        BigInt::from(3 * s),
        from_eps.to_integer(),
        from_ratio.to_integer(),
    ]
    .into_iter()
    .max()
    .expect("non-empty");
    let t = (bound + 1u32)
        .to_u64()
        .ok_or_else(|| Error::InvalidInput("spacer length overflows u64".into()))?;
    debug_assert!(admissible(s, t, eps, &ratio));
    Ok(make_spec(w, eps, s, t))
}

/// Parameters with a caller-chosen spacer, rejected unless admissible.
pub fn derive_params_with_t(w: &Word, eps: &BigRational, t: u64) -> Result<WmSubshiftSpec> {
    check_seed(w, eps)?;
    let s = w.len() as u64;
    let ratio = BigRational::new(BigInt::from(w.ones()), BigInt::from(s));
    if !admissible(s, t, eps, &ratio) {
        return Err(Error::InvalidInput(format!(
            "t = {t} violates t > 3s, 2s/(s+t) < eps or 2s/t < |w|_1/|w| (s = {s})"
        )));
    }
    Ok(make_spec(w, eps, s, t))
}

fn make_spec(w: &Word, eps: &BigRational, s: u64, t: u64) -> WmSubshiftSpec {
    WmSubshiftSpec {
        w: w.clone(),
        eps: eps.clone(),
        s,
        t,
        n: 3 * s + 3 * t + 1,
        big_n: s + t,
    }
}

/// `(|u_k|, |v_k|)` for `k = 0..=depth`.
pub fn ladder_lengths(n: u64, depth: usize) -> Vec<(u128, u128)> {
    let n = u128::from(n);
    let mut out = vec![(n, n)];
    if depth >= 1 {
        out.push((3 * n, 2 * n));
    }
    for k in 1..depth {
        let (u, v) = out[k];
        out.push((3 * u + v, 2 * u + 2 * v));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordLadder {
    /// `(u_k, v_k)` for `k = 0..=depth`.
    pub levels: Vec<(Word, Word)>,
}

impl WordLadder {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn u(&self, k: usize) -> &Word {
        &self.levels[k].0
    }

    pub fn v(&self, k: usize) -> &Word {
        &self.levels[k].1
    }
}

pub fn build_ladder(spec: &WmSubshiftSpec, depth: usize) -> Result<(WordLadder, PrefixApprox)> {
    build_ladder_with_budget(spec, depth, DEFAULT_SYMBOL_BUDGET)
}

/// Builds the ladder; the returned prefix of `z` is `u_depth`.
pub fn build_ladder_with_budget(
    spec: &WmSubshiftSpec,
    depth: usize,
    budget: u128,
) -> Result<(WordLadder, PrefixApprox)> {
    let lens = ladder_lengths(spec.n, depth);
    let required = lens.last().expect("non-empty").0;
    if required > budget {
        return Err(Error::Capacity {
            what: format!("{} at depth {depth}", spec.tag()),
            required,
            budget,
        });
    }
    let w = &spec.w;
    let t = spec.t as usize;
    let s = spec.s as usize;
    let u0 = {
        let mut u = w.clone();
        u.push_zeros(t);
        u.append(w);
        u.push_zeros(t + 1);
        u.append(w);
        u.push_zeros(t);
        u
    };
    let v0 = {
        let mut v = w.clone();
        v.push_zeros(3 * t + 2 * s + 1);
        v
    };
    let mut levels = vec![(u0, v0)];
    if depth >= 1 {
        let (u0, v0) = &levels[0];
        let u1 = Word::concat([u0, v0, u0]);
        let v1 = Word::concat([u0, v0]);
        levels.push((u1, v1));
    }
    for k in 1..depth {
        let (u, v) = &levels[k];
        let next_u = Word::concat([u, v, u, u]);
        let next_v = Word::concat([u, v, v, u]);
        levels.push((next_u, next_v));
    }
    let prefix = PrefixApprox::new(levels[depth].0.clone(), spec.tag(), depth);
    Ok((WordLadder { levels }, prefix))
}

/// Exact length identities and prefix/suffix containments of the ladder.
pub fn ladder_identities_hold(spec: &WmSubshiftSpec, ladder: &WordLadder) -> Result<(), String> {
    let n = spec.n as usize;
    let (u0, v0) = &ladder.levels[0];
    if u0.len() != n || v0.len() != n {
        return Err(format!("|u0| = {}, |v0| = {}, expected {n}", u0.len(), v0.len()));
    }
    for k in 1..ladder.levels.len() {
        let (u, v) = &ladder.levels[k];
        if u.len() - v.len() != n {
            return Err(format!("|u_{k}| - |v_{k}| = {} != n", u.len() - v.len()));
        }
        if u.len() % n != 0 || v.len() % n != 0 {
            return Err(format!("n does not divide |u_{k}| or |v_{k}|"));
        }
        let (pu, pv) = &ladder.levels[k - 1];
        let expect = if k == 1 {
            (3 * pu.len(), pu.len() + pv.len())
        } else {
            (3 * pu.len() + pv.len(), 2 * pu.len() + 2 * pv.len())
        };
        if (u.len(), v.len()) != expect {
            return Err(format!("length recursion broken at level {k}"));
        }
        if k >= 2 {
            for (name, word) in [("u", u), ("v", v)] {
                if !word.starts_with(pu) || !word.ends_with(pu) {
                    return Err(format!("u_{} is not prefix and suffix of {name}_{k}", k - 1));
                }
            }
        }
    }
    Ok(())
}

/// Smallest `m >= 1` such that shifts `step*m` and `step*(m+1)` both move
/// some marked position onto a marked position, with `step*(m+1) <= horizon`.
pub(crate) fn consecutive_return(
    from: &Word,
    to: &Word,
    step: usize,
    horizon: usize,
) -> Option<usize> {
    let mut prev = false;
    let mut m = 1;
    while step * m <= horizon {
        let hit = from.any_shifted_overlap(to, step * m);
        if hit && prev {
            return Some(m - 1);
        }
        prev = hit;
        m += 1;
    }
    None
}

pub fn verify_wm_subshift(
    spec: &WmSubshiftSpec,
    depth: usize,
    horizon: Option<u64>,
) -> Result<VerificationReport> {
    verify_wm_subshift_with_budget(spec, depth, horizon, DEFAULT_SYMBOL_BUDGET)
}

pub fn verify_wm_subshift_with_budget(
    spec: &WmSubshiftSpec,
    depth: usize,
    horizon: Option<u64>,
    budget: u128,
) -> Result<VerificationReport> {
    if depth < 2 {
        return Err(Error::InvalidInput(format!(
            "verification needs depth >= 2, got {depth}"
        )));
    }
    let (ladder, prefix) = build_ladder_with_budget(spec, depth, budget)?;
    verify_prefix(spec, &ladder, &prefix, horizon)
}

/// Runs every check against `prefix`, which normally is `u_depth` of the ladder
/// but may be a modified copy (fault injection).
pub fn verify_prefix(
    spec: &WmSubshiftSpec,
    ladder: &WordLadder,
    prefix: &PrefixApprox,
    horizon: Option<u64>,
) -> Result<VerificationReport> {
    let depth = ladder.depth();
    if depth < 2 {
        return Err(Error::InvalidInput("ladder depth must be >= 2".into()));
    }
    let z = &prefix.prefix;
    let len = z.len();
    let n = spec.n as usize;
    let s = spec.s as usize;
    let default_horizon = ladder.u(depth - 1).len() as u64;
    let requested = horizon.unwrap_or(default_horizon);
    if requested == 0 {
        return Err(Error::InvalidInput("horizon must be >= 1".into()));
    }

    let mut report = VerificationReport::new("wm-subshift")
        .param("w", spec.w.to_string())
        .param("eps", fmt_rational(&spec.eps))
        .param("s", spec.s)
        .param("t", spec.t)
        .param("n", spec.n)
        .param("N", spec.big_n)
        .param("depth", depth as u64)
        .param("horizon", requested)
        .param("prefix_length", len as u64)
        .param("origin", prefix.origin.clone());

    let h = if requested as usize > len {
        report.push(
            Check::new(
                "reduced-horizon",
                "finite prefix bounds every factor statistic",
                Status::Warning,
            )
            .detail(format!("horizon {requested} reduced to prefix length {len}"))
            .bound("requested", Num::int(requested))
            .bound("used", Num::int(len as u64)),
        );
        len
    } else {
        requested as usize
    };

    // ladder arithmetic
    let ladder_ok = ladder_identities_hold(spec, ladder);
    report.push(
        Check::pass_if(
            "ladder-arithmetic",
            "|u0| = |v0| = n, |u_k| - |v_k| = n, u_k prefix and suffix of u_{k+1}, v_{k+1}",
            ladder_ok.is_ok(),
        )
        .detail(ladder_ok.err().unwrap_or_default())
        .witnesses(json!(ladder
            .levels
            .iter()
            .map(|(u, v)| [u.len() as u64, v.len() as u64])
            .collect::<Vec<_>>())),
    );

    // (i) minimality proxy: occurrences of u_{depth-1} are syndetic
    {
        let k = depth - 1;
        let uk = ladder.u(k);
        let positions = z.find_all(uk);
        let bound = (uk.len() + 2 * ladder.v(k).len()) as u64;
        let trailing = positions.last().map(|&p| len as u64 - p);
        let gap = crate::words::max_gap(&positions);
        let ok = positions.len() >= 2
            && positions[0] == 0
            && gap.is_some_and(|g| g <= bound)
            && trailing.is_some_and(|t| t <= bound);
        report.push(
            Check::pass_if(
                "(i) minimality-proxy",
                "N(z, [u_k]) is positively syndetic (finite-scale proxy)",
                ok,
            )
            .detail(format!(
                "{} occurrences of u_{k}, max gap {:?}, gap bound |u_k| + 2|v_k| = {bound}",
                positions.len(),
                gap
            ))
            .witnesses(json!({ "k": k, "positions": positions, "max_gap": gap }))
            .bound("gap_bound", Num::int(bound)),
        );
    }

    // (ii) weak mixing proxy: m, m+1 in N_{sigma^n}([u1], [u1])
    {
        let mask = z.occurrence_mask(ladder.u(1));
        let found = consecutive_return(&mask, &mask, n, h);
        let mut c = Check::pass_if(
            "(ii) weak-mixing-proxy",
            "m, m+1 in N_{sigma^n}([u_k], [u_k]) (finite-scale proxy)",
            found.is_some(),
        );
        c = match found {
            Some(m) => c
                .detail(format!("m = {m}, shifts {} and {}", m * n, (m + 1) * n))
                .witnesses(json!({ "m": m, "shifts": [m * n, (m + 1) * n] })),
            None => c.detail(format!("no consecutive pair with shift <= {h}")),
        };
        report.push(c);
    }

    // (iii) aligned occurrences of w
    {
        let mut offending = None;
        let mut checked = 0u64;
        let mut i = 0;
        while i * n + s <= len {
            if !z.matches_at(i * n, &spec.w) {
                offending = Some(i * n);
                break;
            }
            checked += 1;
            i += 1;
        }
        let mut c = Check::pass_if(
            "(iii) aligned-seed",
            "sigma^{ni}(z) in [w] for every i >= 0",
            offending.is_none(),
        )
        .bound("aligned_positions_checked", Num::int(checked));
        c = match offending {
            Some(p) => c
                .detail(format!("w does not start at position {p}"))
                .witnesses(json!({ "offending_position": p })),
            None => c.detail(format!("{checked} aligned positions start with w")),
        };
        report.push(c);
    }

    // (iv) t+s and t+s+1 in N([w],[w])
    {
        let mask = z.occurrence_mask(&spec.w);
        let ts = (spec.t + spec.s) as usize;
        let has = |k: usize| k <= h && mask.any_shifted_overlap(&mask, k);
        let smallest = consecutive_return(&mask, &mask, 1, h);
        let ok = has(ts) && has(ts + 1);
        report.push(
            Check::pass_if(
                "(iv) return-pair",
                "t+s, t+s+1 in N_sigma([w], [w])",
                ok,
            )
            .detail(format!(
                "t+s = {ts}; smallest k with k, k+1 in N([w],[w]): {smallest:?}"
            ))
            .witnesses(json!({ "t_plus_s": ts, "smallest_k": smallest })),
        );
    }

    // (v), (vi) and the N-window sandwich from ones positions
    let ones = z.one_positions();
    let spans = shortest_spans(&ones);
    let max_ones = |m: usize| max_ones_in_window(&spans, m as u64);
    {
        let big_n = spec.big_n as usize;
        let mut worst: Option<(usize, u64)> = None;
        let mut violation = None;
        if big_n <= h {
            for m in big_n..=h {
                let c = max_ones(m);
                let ratio = BigRational::new(BigInt::from(c), BigInt::from(m as u64));
                if ratio >= spec.eps && violation.is_none() {
                    violation = Some(m);
                }
                if worst.is_none_or(|(wm, wc)| c * (wm as u64) > wc * (m as u64)) {
                    worst = Some((m, c));
                }
            }
        }
        let mut c = Check::pass_if(
            "(v) frequency-below-eps",
            "|v|_1/m < eps for every v in L_m(X), m >= N",
            violation.is_none() && big_n <= h,
        )
        .bound("eps", Num::rational(&spec.eps))
        .bound("N", Num::int(spec.big_n));
        if let Some((m, cnt)) = worst {
            c = c.bound(
                "worst_ratio",
                Num::rational(&BigRational::new(BigInt::from(cnt), BigInt::from(m as u64))),
            );
        }
        c = match violation {
            Some(m) => c
                .detail(format!("window length {m} reaches eps"))
                .witnesses(json!({ "violating_length": m })),
            None if big_n > h => c.detail(format!("horizon {h} is below N = {big_n}")),
            None => c.detail(format!("all window lengths {big_n}..={h} below eps")),
        };
        report.push(c);
    }
    {
        let seed = spec.ones_ratio();
        let mut violation = None;
        let mut worst: Option<(usize, u64)> = None;
        for m in s..=h {
            let c = max_ones(m);
            if BigRational::new(BigInt::from(c), BigInt::from(m as u64)) > seed
                && violation.is_none()
            {
                violation = Some(m);
            }
            if worst.is_none_or(|(wm, wc)| c * (wm as u64) > wc * (m as u64)) {
                worst = Some((m, c));
            }
        }
        let mut c = Check::pass_if(
            "(vi) frequency-below-seed",
            "|v|_1/|v| <= |w|_1/|w| for every v in L(X) with |v| >= |w|",
            violation.is_none(),
        )
        .bound("seed_ratio", Num::rational(&seed));
        if let Some((m, cnt)) = worst {
            c = c.bound(
                "worst_ratio",
                Num::rational(&BigRational::new(BigInt::from(cnt), BigInt::from(m as u64))),
            );
        }
        if let Some(m) = violation {
            c = c
                .detail(format!("a factor of length {m} is denser than w"))
                .witnesses(json!({ "violating_length": m }));
        }
        report.push(c);
    }
    {
        let big_n = (spec.big_n as usize).min(len);
        let c = max_ones(big_n);
        report.push(
            Check::pass_if(
                "frequency-sandwich",
                "every N consecutive symbols of z carry at most |w|_1 ones",
                c <= spec.w.ones(),
            )
            .bound("max_ones_in_N_window", Num::int(c))
            .bound("seed_ones", Num::int(spec.w.ones())),
        );
    }

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn w1() -> Word {
        "01 0^10".parse().unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn params_for_w1() {
        let spec = derive_params(&w1(), &q(1, 9)).unwrap();
        assert_eq!((spec.s, spec.t, spec.n, spec.big_n), (12, 289, 904, 301));
    }

    #[test]
    fn params_for_single_one() {
        let spec = derive_params(&"1".parse().unwrap(), &q(1, 2)).unwrap();
        assert_eq!((spec.s, spec.t, spec.n, spec.big_n), (1, 4, 16, 5));
    }

    #[test]
    fn params_reject_bad_inputs() {
        assert!(matches!(
            derive_params(&"00".parse().unwrap(), &q(1, 9)),
            Err(Error::InvalidSeed(_))
        ));
        assert!(matches!(
            derive_params(&w1(), &q(0, 1)),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            derive_params(&w1(), &q(1, 1)),
            Err(Error::InvalidInput(_))
        ));
        assert!(derive_params_with_t(&w1(), &q(1, 9), 288).is_err());
        assert_eq!(derive_params_with_t(&w1(), &q(1, 9), 400).unwrap().n, 1237);
    }

    #[test]
    fn ladder_lengths_for_m1() {
        let spec = derive_params(&w1(), &q(1, 9)).unwrap();
        let (ladder, prefix) = build_ladder(&spec, 2).unwrap();
        assert_eq!((ladder.u(1).len(), ladder.v(1).len()), (2712, 1808));
        assert_eq!((ladder.u(2).len(), ladder.v(2).len()), (9944, 9040));
        assert_eq!(prefix.prefix, *ladder.u(2));
        assert!(ladder_identities_hold(&spec, &ladder).is_ok());
    }

    #[test]
    fn depth_zero_is_the_construction_words() {
        let spec = derive_params(&"1".parse().unwrap(), &q(1, 2)).unwrap();
        let (ladder, prefix) = build_ladder(&spec, 0).unwrap();
        assert_eq!(ladder.u(0).to_string(), "1000010000010000");
        assert_eq!(ladder.v(0).to_string(), "1000000000000000");
        assert_eq!(prefix.depth, 0);
    }

    #[test]
    fn seed_occurrences_in_u0() {
        let spec = derive_params(&w1(), &q(1, 9)).unwrap();
        let (ladder, _) = build_ladder(&spec, 0).unwrap();
        assert_eq!(ladder.u(0).find_all(&spec.w), vec![0, 301, 603]);
    }

    #[test]
    fn capacity_error_reports_required_size() {
        let spec = derive_params(&w1(), &q(1, 9)).unwrap();
        match build_ladder_with_budget(&spec, 3, 1000) {
            Err(Error::Capacity { required, .. }) => assert_eq!(required, 43 * 904),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn flipped_aligned_bit_fails_iii() {
        let spec = derive_params(&w1(), &q(1, 9)).unwrap();
        let (ladder, mut prefix) = build_ladder(&spec, 3).unwrap();
        prefix.prefix.flip(904 * 5 + 1);
        let r = verify_prefix(&spec, &ladder, &prefix, None).unwrap();
        let c = r.check("(iii) aligned-seed").unwrap();
        assert_eq!(c.status, Status::Fail);
        assert_eq!(c.witnesses["offending_position"], 904 * 5);
    }

    #[test]
    fn oversize_horizon_warns() {
        let spec = derive_params(&"1".parse().unwrap(), &q(1, 2)).unwrap();
        let r = verify_wm_subshift(&spec, 2, Some(1_000_000)).unwrap();
        assert_eq!(r.check("reduced-horizon").unwrap().status, Status::Warning);
    }

    #[test]
    fn depth_below_two_rejected() {
        let spec = derive_params(&w1(), &q(1, 9)).unwrap();
        assert!(verify_wm_subshift(&spec, 1, None).is_err());
    }
}
