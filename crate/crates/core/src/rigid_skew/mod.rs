//! The uniformly rigid, non-equicontinuous skew product
//! `T(x, y) = (x + α, y + φ(x))` on `T²` with
//! `n_1 = 100`, `n_{j+1} = (n_1 ⋯ n_j)^3`, `α = Σ 1/n_j` and
//! `φ(x) = Σ_{k≥1} 2[cos 2πn_k(x + α) − cos 2πn_k x]`
//! (the real form of `Σ_{k≠0} (e^{2πi n_k α} − 1) e^{2πi n_k x}`; the
//! `k = 0` term vanishes identically).
//!
//! Every certificate is a chain of exact rational comparisons; transcendental
//! values enter only through `ball` enclosures.

pub mod ball;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::circle_systems::{frac_rational, torus_distance};
use crate::error::{Error, Result};
use crate::hyperspace::{torus_directed_hausdorff, MetricSystem, TorusPoint};
use crate::report::{fmt_rational, fmt_sci, Check, Num, VerificationReport};

pub use ball::{cos_two_pi, pi, CertifiedReal};

/// `22/7 > π`, used in every smallness chain.
pub fn pi_upper_simple() -> BigRational {
    BigRational::new(22.into(), 7.into())
}

/// `355/113 > π`.
pub fn pi_upper() -> BigRational {
    BigRational::new(355.into(), 113.into())
}

/// `333/106 < π`.
pub fn pi_lower() -> BigRational {
    BigRational::new(333.into(), 106.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RigidSkewParams {
    /// Terms of the `α` series kept exactly.
    pub j: usize,
    /// Terms of the `φ` series evaluated.
    pub k: usize,
    /// Working precision in bits.
    pub prec: u32,
}

impl Default for RigidSkewParams {
    fn default() -> Self {
        RigidSkewParams { j: 5, k: 5, prec: 256 }
    }
}

impl RigidSkewParams {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.j < self.k {
            return Err(Error::InvalidInput(format!(
                "need J >= K >= 1, got J = {}, K = {}",
                self.j, self.k
            )));
        }
        if self.prec < 64 {
            return Err(Error::InvalidInput("precision must be at least 64 bits".into()));
        }
        Ok(())
    }
}

const NSEQ_CACHE: usize = 8;

fn nseq_table() -> &'static Vec<BigInt> {
    static TABLE: OnceLock<Vec<BigInt>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut v = vec![BigInt::from(100)];
        let mut prod = BigInt::from(100);
        while v.len() < NSEQ_CACHE {
            let next = num_traits::pow(prod.clone(), 3);
            prod *= &next;
            v.push(next);
        }
        v
    })
}

/// `n_j` exactly (`j >= 1`).
pub fn nseq(j: usize) -> BigInt {
    assert!(j >= 1, "the sequence starts at n_1");
    let t = nseq_table();
    if j <= t.len() {
        return t[j - 1].clone();
    }
    let mut prod: BigInt = t.iter().product();
    let mut last = t[t.len() - 1].clone();
    for _ in t.len()..j {
        last = num_traits::pow(prod.clone(), 3);
        prod *= &last;
    }
    last
}

fn recip(n: &BigInt) -> BigRational {
    BigRational::new(BigInt::one(), n.clone())
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Exact `Σ_{j <= J} 1/n_j`.
pub fn alpha_partial(j: usize) -> BigRational {
    (1..=j).map(|i| recip(&nseq(i))).sum()
}

/// `[Σ_{j<=J} 1/n_j, Σ_{j<=J} 1/n_j + 2/n_{J+1}]`, which contains `α`
/// because `Σ_{j>J} 1/n_j < 2/n_{J+1}`.
pub fn alpha_enclosure(j: usize) -> Result<(BigRational, BigRational)> {
    if j == 0 {
        return Err(Error::InvalidInput("J must be at least 1".into()));
    }
    let lo = alpha_partial(j);
    let hi = &lo + BigRational::from_integer(2.into()) * recip(&nseq(j + 1));
    Ok((lo, hi))
}

/// `frac(m S_J)` and the width `2m/n_{J+1}` of the enclosure of `frac(mα)`;
/// the upper end may exceed 1.
pub fn alpha_multiple(m: &BigInt, j: usize) -> (BigRational, BigRational) {
    let lo = frac_rational(&(alpha_partial(j) * BigRational::from_integer(m.clone())));
    let width = BigRational::from_integer(BigInt::from(2) * m) * recip(&nseq(j + 1));
    (lo, width)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FracInterval {
    #[serde(serialize_with = "ser_rational")]
    pub lo: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub hi: BigRational,
    pub depth: usize,
}

fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(r))
}

impl FracInterval {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// Upper bound for the distance from `mα` to the nearest integer.
    pub fn norm_upper(&self) -> BigRational {
        let one = BigRational::one();
        if self.hi <= rat(1, 2) {
            self.hi.clone()
        } else if self.lo >= rat(1, 2) {
            one - &self.lo
        } else {
            rat(1, 2)
        }
    }
}

/// Smallest `J' >= J` with `2m/n_{J'+1} <= tol`.
fn needed_depth(m: &BigInt, from: usize, tol: &BigRational) -> usize {
    let mut j = from;
    while j < 64 {
        let width = BigRational::from_integer(BigInt::from(2) * m) * recip(&nseq(j + 1));
        if &width <= tol {
            return j;
        }
        j += 1;
    }
    j
}

/// Rational enclosure of `mα mod 1` of width `2m/n_{J+1}`.
pub fn frac_part(m: &BigInt, j: usize, tol: &BigRational) -> Result<FracInterval> {
    if !m.is_positive() {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    if j == 0 {
        return Err(Error::InvalidInput("J must be at least 1".into()));
    }
    let (lo, width) = alpha_multiple(m, j);
    if &width > tol {
        return Err(Error::InsufficientDepth {
            needed: needed_depth(m, j, tol),
            detail: format!(
                "width 2m/n_{} = {} exceeds tolerance {}",
                j + 1,
                fmt_sci(&width),
                fmt_sci(tol)
            ),
        });
    }
    let hi = &lo + width;
    if hi >= BigRational::one() {
        return Err(Error::InsufficientDepth {
            needed: j + 1,
            detail: "enclosure straddles an integer".into(),
        });
    }
    Ok(FracInterval { lo, hi, depth: j })
}

/// Default tolerance for `frac_part` inside certificates.
pub fn default_tolerance() -> BigRational {
    rat(1, 1_000_000_000_000)
}

#[derive(Clone, Debug, Serialize)]
pub struct SmallnessCertificate {
    pub k: usize,
    pub l: Option<usize>,
    pub theta: FracInterval,
    /// `(44/7) θ_hi`, an upper bound for `2 sin(πθ) = |e^{2πiθ} − 1|`.
    #[serde(serialize_with = "ser_rational")]
    pub chain_bound: BigRational,
    /// `14/n_k²` or `14/(n_k n_l)`.
    #[serde(serialize_with = "ser_rational")]
    pub target: BigRational,
    /// `(88/7)/n_k²` or `(88/7)/(n_k n_l)`, the sharper constant `≈ 4π`.
    #[serde(serialize_with = "ser_rational")]
    pub sharp_target: BigRational,
    pub passes: bool,
    pub sharp_passes: bool,
}

/// `|e^{2πi n_k α} − 1| < 14/n_k²` (or with `n_k n_l`) as an exact chain
/// `2 sin(πθ) <= 2πθ <= (44/7)θ_hi < target`.
pub fn check_smallness(k: usize, l: Option<usize>, j: usize) -> Result<SmallnessCertificate> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    if let Some(l) = l {
        if l < 2 {
            return Err(Error::InvalidInput("l must be at least 2".into()));
        }
    }
    let nk = nseq(k);
    let denom = match l {
        Some(l) => &nk * nseq(l),
        None => &nk * &nk,
    };
    let theta = frac_part(&multiplier(&nk, l), j, &default_tolerance())?;
    let two_pi_up = BigRational::from_integer(2.into()) * pi_upper_simple();
    let chain_bound = &two_pi_up * theta.norm_upper();
    let target = BigRational::new(14.into(), denom.clone());
    let sharp_target = BigRational::new(88.into(), BigInt::from(7) * &denom);
    Ok(SmallnessCertificate {
        k,
        l,
        passes: chain_bound < target,
        sharp_passes: chain_bound < sharp_target,
        theta,
        chain_bound,
        target,
        sharp_target,
    })
}

fn multiplier(nk: &BigInt, l: Option<usize>) -> BigInt {
    match l {
        Some(l) => nk * nseq(l),
        None => nk.clone(),
    }
}

pub fn smallness_report(k: usize, l: Option<usize>, j: usize) -> Result<VerificationReport> {
    let c = check_smallness(k, l, j)?;
    let mut r = VerificationReport::new(match l {
        Some(l) => format!("rigid-ineq(k={k},l={l},J={j})"),
        None => format!("rigid-ineq(k={k},J={j})"),
    })
    .param("k", k)
    .param("J", j);
    if let Some(l) = l {
        r = r.param("l", l);
    }
    r.push(smallness_check(&c));
    Ok(r)
}

fn smallness_check(c: &SmallnessCertificate) -> Check {
    let (name, anchor) = match c.l {
        Some(_) => (
            format!("smallness(k={},l={})", c.k, c.l.unwrap_or(0)),
            "|e^{2πi n_k n_l α} − 1| < 14/(n_k n_l)",
        ),
        None => (format!("smallness(k={})", c.k), "|e^{2πi n_k α} − 1| < 14/n_k²"),
    };
    Check::pass_if(name, anchor, c.passes)
        .detail(format!(
            "2 sin(πθ) <= 2πθ <= (44/7)θ_hi < target; sharper 4π-type constant {}",
            if c.sharp_passes { "also holds" } else { "fails" }
        ))
        .witnesses(serde_json::to_value(c).expect("certificate serializes"))
        .bound("theta_lo", Num::rational(&c.theta.lo))
        .bound("theta_hi", Num::rational(&c.theta.hi))
        .bound("chain_bound", Num::rational(&c.chain_bound))
        .bound("target", Num::rational(&c.target))
        .bound("sharp_target", Num::rational(&c.sharp_target))
}

/// Working context: `π` enclosure and the exact phases `frac(n_k α)`.
pub struct RigidContext {
    pub params: RigidSkewParams,
    pi: CertifiedReal,
}

impl RigidContext {
    pub fn new(params: RigidSkewParams) -> Result<Self> {
        params.validate()?;
        Ok(RigidContext {
            params,
            pi: pi(params.prec),
        })
    }

    pub fn pi(&self) -> &CertifiedReal {
        &self.pi
    }

    fn cos_phase(&self, base: &BigRational, m: &BigInt) -> CertifiedReal {
        let (lo, width) = alpha_multiple(m, self.params.j);
        let half = &width / BigRational::from_integer(2.into());
        cos_two_pi(&(base + &lo + &half), &half, &self.pi)
    }

    fn cos_exact(&self, t: &BigRational) -> CertifiedReal {
        cos_two_pi(t, &BigRational::zero(), &self.pi)
    }

    /// `Σ_{k<=K} 2[cos 2πn_k(x + nα) − cos 2πn_k x]` plus the tail bound
    /// `Σ_{k>K} 2|e^{2πi n_k nα} − 1| <= 28 n / n_{K+1}²`, valid because
    /// `||n_k α|| <= 2/n_k²` gives each pair at most `8πn/n_k²`.
    pub fn birkhoff_closed(&self, x: &BigRational, n: &BigInt) -> Result<CertifiedReal> {
        if !n.is_positive() {
            return Err(Error::InvalidInput("n must be at least 1".into()));
        }
        let prec = self.params.prec;
        let mut sum = CertifiedReal::zero(prec);
        for k in 1..=self.params.k {
            let nk = nseq(k);
            let base = frac_rational(&(x * BigRational::from_integer(nk.clone())));
            let moved = self.cos_phase(&base, &(&nk * n));
            let fixed = self.cos_exact(&base);
            sum = sum.add(&moved.sub(&fixed).mul_int(&BigInt::from(2)));
        }
        let nk1 = nseq(self.params.k + 1);
        let tail = BigRational::new(BigInt::from(28) * n, &nk1 * &nk1);
        Ok(sum.widen(&tail))
    }

    /// `φ(x)` with `K` terms and tail radius `28/n_{K+1}²`.
    pub fn phi_eval(&self, x: &BigRational) -> CertifiedReal {
        self.birkhoff_closed(x, &BigInt::one())
            .expect("n = 1 is valid")
    }
}

/// `φ(x)` with default working parameters but `K` terms.
pub fn phi_eval(x: &BigRational, k: usize) -> Result<CertifiedReal> {
    let params = RigidSkewParams {
        j: k.max(5),
        k,
        ..RigidSkewParams::default()
    };
    Ok(RigidContext::new(params)?.phi_eval(x))
}

pub fn birkhoff_closed(x: &BigRational, n: &BigInt, k: usize) -> Result<CertifiedReal> {
    let params = RigidSkewParams {
        j: k.max(5),
        k,
        ..RigidSkewParams::default()
    };
    RigidContext::new(params)?.birkhoff_closed(x, n)
}

/// Independent floating-point oracle: `Σ_{t<n} φ(x + tα)` summed term by
/// term, using `cos(a + b) − cos a = −2 sin(a + b/2) sin(b/2)`.
pub fn birkhoff_direct_f64(x: &BigRational, n: u64, k_terms: usize, j: usize) -> f64 {
    let tau = std::f64::consts::TAU;
    let mut total = 0.0f64;
    for k in 1..=k_terms {
        let nk = nseq(k);
        let base = frac_rational(&(x * BigRational::from_integer(nk.clone())))
            .to_f64()
            .unwrap_or(0.0);
        let (lo, width) = alpha_multiple(&nk, j);
        let theta = (lo + width / BigRational::from_integer(2.into()))
            .to_f64()
            .unwrap_or(0.0);
        let s = (std::f64::consts::PI * theta).sin();
        let mut acc = 0.0f64;
        let mut comp = 0.0f64;
        for t in 0..n {
            let phase = (base + crate::circle_systems::frac_mul(t as f64, theta)).rem_euclid(1.0);
            let term = -4.0 * (tau * (phase + 0.5 * theta)).sin() * s;
            // Kahan summation
            let y = term - comp;
            let z = acc + y;
            comp = (z - acc) - y;
            acc = z;
        }
        total += acc;
    }
    total
}

#[derive(Clone, Debug, Serialize)]
pub struct RigidityCertificate {
    pub s: usize,
    /// `||n_s α||` upper end: horizontal displacement.
    #[serde(serialize_with = "ser_rational")]
    pub rotation_part: BigRational,
    /// `28 α_hi / n_s + 28 n_s / n_{K+1}²`: vertical displacement bound.
    #[serde(serialize_with = "ser_rational")]
    pub cocycle_part: BigRational,
    /// `Σ_{k<=K} 2 (44/7) ||n_k n_s α||_hi + 28 n_s/n_{K+1}²`, the explicit sum
    /// the cocycle bound dominates.
    #[serde(serialize_with = "ser_rational")]
    pub explicit_cocycle_sum: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub bound: BigRational,
    pub chain_holds: bool,
}

/// Certified upper bound for `sup d(T^{n_s}(x, y), (x, y))`.
pub fn rigidity_certificate(s: usize, params: RigidSkewParams) -> Result<RigidityCertificate> {
    params.validate()?;
    if s < 2 {
        return Err(Error::InvalidInput("s must be at least 2".into()));
    }
    let ns = nseq(s);
    let tol = rat(1, 4);
    let rot = frac_part(&ns, params.j, &tol)?.norm_upper();
    let (_, alpha_hi) = alpha_enclosure(params.j)?;
    let nk1 = nseq(params.k + 1);
    let trunc = BigRational::new(BigInt::from(28) * &ns, &nk1 * &nk1);
    let cocycle = BigRational::from_integer(28.into()) * &alpha_hi / BigRational::from_integer(ns.clone())
        + &trunc;
    let two_pi_up = BigRational::from_integer(2.into()) * pi_upper_simple();
    let mut explicit = trunc.clone();
    for k in 1..=params.k {
        let f = frac_part(&(nseq(k) * &ns), params.j, &tol)?;
        explicit += BigRational::from_integer(2.into()) * &two_pi_up * f.norm_upper();
    }
    let bound = rot.clone().max(cocycle.clone());
    Ok(RigidityCertificate {
        s,
        chain_holds: explicit <= cocycle,
        rotation_part: rot,
        cocycle_part: cocycle,
        explicit_cocycle_sum: explicit,
        bound,
    })
}

pub fn rigidity_report(s: usize, params: RigidSkewParams) -> Result<VerificationReport> {
    let c = rigidity_certificate(s, params)?;
    let mut r = VerificationReport::new(format!(
        "rigid-cert(s={s},J={},K={})",
        params.j, params.k
    ))
    .param("s", s)
    .param("J", params.j)
    .param("K", params.k);
    r.push(
        Check::pass_if(
            "uniform-rigidity",
            "sup_{(x,y)} d(T^{n_s}(x,y), (x,y)) <= max(||n_s α||, 28α/n_s)",
            c.chain_holds,
        )
        .detail(format!("bound {}", fmt_sci(&c.bound)))
        .bound("rotation_part", Num::rational(&c.rotation_part))
        .bound("cocycle_part", Num::rational(&c.cocycle_part))
        .bound("explicit_cocycle_sum", Num::rational(&c.explicit_cocycle_sum))
        .bound("bound", Num::rational(&c.bound)),
    );
    Ok(r)
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessGap {
    pub l: usize,
    #[serde(serialize_with = "ser_rational")]
    pub m: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub x: BigRational,
    pub mid: f64,
    pub rad: f64,
    #[serde(serialize_with = "ser_rational")]
    pub lower: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub upper: BigRational,
    /// `1/1000 < D − rad` and `D + rad < 1/10`.
    pub coarse_verdict: bool,
    /// `0.0030 < D − rad` and `D + rad < 0.0159`.
    pub refined_verdict: bool,
    /// `32/n_1² (1 − 6/n_1)` and `16π²/n_1² (1 + (l−1)/n_{l−1}²)` with `π < 355/113`.
    #[serde(serialize_with = "ser_rational")]
    pub analytic_lower: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub analytic_upper: BigRational,
}

/// `D_l = S_{m_l}(0) − S_{m_l}(x_l)`, the vertical gap after `m_l = n_l³/n_1`
/// steps between the base points `0` and `x_l = 1/(n_1 n_l)`. Terms with
/// `k > l` cancel exactly because `n_k x_l` is an integer.
pub fn witness_gap(l: usize, params: RigidSkewParams) -> Result<WitnessGap> {
    params.validate()?;
    if l < 2 {
        return Err(Error::InvalidInput(
            "l must be at least 2 so that n_1 divides n_l".into(),
        ));
    }
    let ctx = RigidContext::new(params)?;
    let n1 = nseq(1);
    let nl = nseq(l);
    let m = num_traits::pow(nl.clone(), 3) / &n1;
    let x = BigRational::new(BigInt::one(), &n1 * &nl);
    if l + 1 > params.j {
        return Err(Error::InsufficientDepth {
            needed: l + 1,
            detail: "the α series must be kept exactly beyond n_l".into(),
        });
    }
    let prec = params.prec;
    let zero = BigRational::zero();
    let two = BigInt::from(2);
    let mut d = CertifiedReal::zero(prec);
    for k in 1..=l {
        let nk = nseq(k);
        let nkm = &nk * &m;
        let base = frac_rational(&(&x * BigRational::from_integer(nk.clone())));
        let at_zero = ctx.cos_phase(&zero, &nkm).sub(&CertifiedReal::from_int(1, prec));
        let at_x = ctx.cos_phase(&base, &nkm).sub(&ctx.cos_exact(&base));
        d = d.add(&at_zero.sub(&at_x).mul_int(&two));
    }
    let (lower, upper) = (d.lower(), d.upper());
    let n1r = BigRational::from_integer(n1.clone());
    let analytic_lower = rat(32, 1) / (&n1r * &n1r) * (BigRational::one() - rat(6, 1) / &n1r);
    let nlm1 = BigRational::from_integer(nseq(l - 1));
    let pi_up = pi_upper();
    let analytic_upper = rat(16, 1) * &pi_up * &pi_up / (&n1r * &n1r)
        * (BigRational::one() + BigRational::from_integer(BigInt::from(l - 1)) / (&nlm1 * &nlm1));
    Ok(WitnessGap {
        l,
        m: BigRational::from_integer(m),
        coarse_verdict: lower > rat(1, 1000) && upper < rat(1, 10),
        refined_verdict: lower > rat(30, 10_000) && upper < rat(159, 10_000),
        mid: d.mid_f64(),
        rad: d.rad_f64(),
        x,
        lower,
        upper,
        analytic_lower,
        analytic_upper,
    })
}

pub fn witness_report(l: usize, params: RigidSkewParams) -> Result<VerificationReport> {
    let w = witness_gap(l, params)?;
    let mut r = VerificationReport::new(format!(
        "rigid-witness(l={l},J={},K={},prec={})",
        params.j, params.k, params.prec
    ))
    .param("l", l)
    .param("J", params.j)
    .param("K", params.k)
    .param("prec", params.prec);
    let radius_ok = w.rad <= 1e-9;
    r.push(
        Check::pass_if(
            "non-equicontinuity-gap",
            "d(T^{m_l}(x_l, 0), T^{m_l}(0, 0)) > δ = 1/1000 with x_l = 1/(n_1 n_l) -> 0",
            w.coarse_verdict && radius_ok,
        )
        .detail(format!(
            "D_{l} = {:.9} ± {:.1e}; D < 1/2 so the circle distance equals D",
            w.mid, w.rad
        ))
        .witnesses(serde_json::to_value(&w).expect("witness serializes"))
        .bound("D", Num::Ball { mid: crate::report::fmt_f64(w.mid), rad: crate::report::fmt_f64(w.rad) })
        .bound("D_lower", Num::rational(&w.lower))
        .bound("D_upper", Num::rational(&w.upper))
        .bound("delta", Num::Rational("1/1000".into()))
        .bound("upper_target", Num::Rational("1/10".into())),
    );
    r.push(
        Check::pass_if(
            "gap-refinement",
            "32/n_1²(1 − 6/n_1) <= D_l <= 16π²/n_1²(1 + (l−1)/n_{l−1}²)",
            w.refined_verdict,
        )
        .detail("refined window (0.0030, 0.0159)")
        .bound("analytic_lower", Num::rational(&w.analytic_lower))
        .bound("analytic_upper", Num::rational(&w.analytic_upper)),
    );
    Ok(r)
}

/// The skew product in double precision, for hyperspace scans. Phases
/// `frac(n n_k α)` and `frac(n_k x)` are reduced exactly before rounding.
#[derive(Clone, Debug)]
pub struct RigidSkewSystem {
    pub params: RigidSkewParams,
    alpha: f64,
    /// Phases by time, shared across the points of a set.
    phase_cache: Arc<Mutex<HashMap<BigInt, Arc<Phases>>>>,
}

type Phases = (f64, Vec<f64>);

const PHASE_CACHE_LIMIT: usize = 1 << 14;

impl RigidSkewSystem {
    pub fn new(params: RigidSkewParams) -> Result<Self> {
        params.validate()?;
        let (lo, _) = alpha_enclosure(params.j)?;
        Ok(RigidSkewSystem {
            params,
            alpha: lo.to_f64().unwrap_or(0.0),
            phase_cache: Arc::default(),
        })
    }

    fn phases(&self, n: &BigInt) -> Arc<Phases> {
        if let Some(p) = self.phase_cache.lock().expect("cache lock").get(n) {
            return p.clone();
        }
        let p = Arc::new(self.compute_phases(n));
        let mut cache = self.phase_cache.lock().expect("cache lock");
        if cache.len() >= PHASE_CACHE_LIMIT {
            cache.clear();
        }
        cache.insert(n.clone(), p.clone());
        p
    }

    /// `frac(n n_k α)` for `k = 1..=K` and `frac(nα)`.
    fn compute_phases(&self, n: &BigInt) -> Phases {
        let mid = |m: &BigInt| {
            let (lo, w) = alpha_multiple(m, self.params.j);
            frac_rational(&(lo + w / BigRational::from_integer(2.into())))
                .to_f64()
                .unwrap_or(0.0)
        };
        let ks = (1..=self.params.k).map(|k| mid(&(nseq(k) * n))).collect();
        (mid(n), ks)
    }

    fn apply(&self, p: &TorusPoint, shift: f64, thetas: &[f64]) -> TorusPoint {
        let tau = std::f64::consts::TAU;
        let x = BigRational::from_float(p[0]).unwrap_or_else(BigRational::zero);
        let mut dy = 0.0;
        for (k, th) in thetas.iter().enumerate() {
            let base = frac_rational(&(&x * BigRational::from_integer(nseq(k + 1))))
                .to_f64()
                .unwrap_or(0.0);
            dy += -4.0 * (tau * (base + 0.5 * th)).sin() * (std::f64::consts::PI * th).sin();
        }
        [
            (p[0] + shift).rem_euclid(1.0),
            (p[1] + dy).rem_euclid(1.0),
        ]
    }

    /// `T^n` applied to every point with one phase computation.
    pub fn image(&self, pts: &[TorusPoint], n: u64) -> Vec<TorusPoint> {
        let ph = self.phases(&BigInt::from(n));
        pts.par_iter().map(|p| self.apply(p, ph.0, &ph.1)).collect()
    }

    /// `T^{n_s}` applied to every point.
    pub fn image_at_nseq(&self, pts: &[TorusPoint], s: usize) -> Vec<TorusPoint> {
        let ph = self.phases(&nseq(s));
        pts.par_iter().map(|p| self.apply(p, ph.0, &ph.1)).collect()
    }
}

impl MetricSystem for RigidSkewSystem {
    type Point = TorusPoint;

    fn space(&self) -> String {
        "torus".into()
    }

    fn distance(&self, a: &TorusPoint, b: &TorusPoint) -> f64 {
        torus_distance(a, b)
    }

    fn step(&self, p: &TorusPoint) -> TorusPoint {
        self.power(p, 1).expect("closed form")
    }

    fn power(&self, p: &TorusPoint, n: i64) -> Option<TorusPoint> {
        if n < 0 {
            return None;
        }
        let ph = self.phases(&BigInt::from(n));
        Some(self.apply(p, ph.0, &ph.1))
    }

    fn inverse_step(&self, _p: &TorusPoint) -> Option<TorusPoint> {
        None
    }

    fn directed_hausdorff(&self, from: &[TorusPoint], to: &[TorusPoint]) -> f64 {
        torus_directed_hausdorff(from, to)
    }
}

impl RigidSkewSystem {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Sample base points `i/count + 1/997`.
pub fn sample_points(count: usize) -> Vec<BigRational> {
    (0..count)
        .map(|i| rat(i as i64, count as i64) + rat(1, 997))
        .collect()
}

/// Closed form against the direct sum at each sample point.
pub fn birkhoff_consistency(
    samples: &[BigRational],
    n: u64,
    params: RigidSkewParams,
) -> Result<Vec<(f64, f64, f64)>> {
    let ctx = RigidContext::new(params)?;
    samples
        .par_iter()
        .map(|x| {
            let closed = ctx.birkhoff_closed(x, &BigInt::from(n))?;
            let direct = birkhoff_direct_f64(x, n, params.k, params.j);
            Ok((closed.mid_f64(), closed.rad_f64(), direct))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequence_values() {
        assert_eq!(nseq(1), BigInt::from(100));
        assert_eq!(nseq(2), BigInt::from(1_000_000));
        assert_eq!(nseq(3), num_traits::pow(BigInt::from(10), 24));
        assert_eq!(nseq(4), num_traits::pow(BigInt::from(10), 96));
        assert_eq!(nseq(9), num_traits::pow(BigInt::from(10), 6 * 4usize.pow(7)));
    }

    #[test]
    fn alpha_enclosures_nest() {
        let (lo1, hi1) = alpha_enclosure(1).unwrap();
        assert_eq!(lo1, rat(1, 100));
        assert_eq!(hi1, rat(1, 100) + rat(2, 1_000_000));
        let (lo2, hi2) = alpha_enclosure(2).unwrap();
        assert_eq!(lo2, rat(10001, 1_000_000));
        assert!(lo1 <= lo2 && hi2 <= hi1);
    }

    #[test]
    fn frac_part_examples() {
        let tol = default_tolerance();
        let f = frac_part(&nseq(1), 3, &tol).unwrap();
        assert!((f.lo.to_f64().unwrap() - 1e-4).abs() < 1e-9);
        let f = frac_part(&nseq(2), 3, &tol).unwrap();
        assert!((f.lo.to_f64().unwrap() - 1e-18).abs() < 1e-27);
        let overflow = nseq(1) * nseq(2);
        assert!(matches!(
            frac_part(&overflow, 1, &tol),
            Err(Error::InsufficientDepth { needed: 2, .. })
        ));
    }

    #[test]
    fn smallness_examples() {
        for (k, l) in [(1, None), (2, None), (3, None), (1, Some(2)), (3, Some(3))] {
            let c = check_smallness(k, l, 5).unwrap();
            assert!(c.passes && c.sharp_passes, "k={k} l={l:?}");
        }
        let c = check_smallness(1, None, 3).unwrap();
        let v = c.chain_bound.to_f64().unwrap();
        assert!((v - 6.3e-4).abs() < 1e-5, "{v}");
    }

    #[test]
    fn phi_at_zero() {
        let v = phi_eval(&BigRational::zero(), 5).unwrap();
        assert!((v.mid_f64() + 3.9e-7).abs() < 1e-8, "{}", v.mid_f64());
        assert!(v.rad_f64() < 1e-20);
    }

    #[test]
    fn rigidity_examples() {
        let p = RigidSkewParams::default();
        let c2 = rigidity_certificate(2, p).unwrap();
        assert!(c2.chain_holds && c2.bound < rat(3, 10_000_000));
        let c3 = rigidity_certificate(3, p).unwrap();
        assert!(c3.chain_holds);
        assert!(c3.bound < BigRational::new(3.into(), num_traits::pow(BigInt::from(10), 25)));
    }

    #[test]
    fn witness_gap_two() {
        let w = witness_gap(2, RigidSkewParams::default()).unwrap();
        assert!(w.coarse_verdict && w.refined_verdict);
        assert!(w.rad <= 1e-9);
        assert!((w.mid - 0.0078775).abs() < 1e-6, "{}", w.mid);
        assert!(witness_gap(1, RigidSkewParams::default()).is_err());
    }

    #[test]
    fn closed_form_matches_direct_sum() {
        let x = rat(3, 10);
        let rows = birkhoff_consistency(&[x.clone()], 1000, RigidSkewParams::default()).unwrap();
        let (closed, rad, direct) = rows[0];
        assert!((closed - direct).abs() <= 1e-8 + rad, "{closed} vs {direct}");
        let one = birkhoff_closed(&x, &BigInt::one(), 5).unwrap();
        assert_eq!(one, phi_eval(&x, 5).unwrap());
    }
}
