//! Continuum examples: circle rotations, the skew product
//! `(x, y) ↦ (x + α, y + x)` on `T²`, the rigid-but-not-uniformly-rigid
//! annulus, and Birkhoff sums of circle cocycles with non-zero degree.

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::hyperspace::{
    circle_directed_hausdorff, recurrence_scan, torus_directed_hausdorff, Direction,
    FinitePointSet, MetricSystem, TorusPoint,
};
use crate::report::{Check, Num, Status, VerificationReport};

pub use crate::hyperspace::{circle_distance, torus_distance};

/// `(√5 − 1)/2`.
pub fn golden() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

/// `frac(n a)` computed from the exact product `n·a` of two doubles.
pub fn frac_mul(n: f64, a: f64) -> f64 {
    let p = n * a;
    let e = n.mul_add(a, -p);
    (p.rem_euclid(1.0) + e).rem_euclid(1.0)
}

fn wrap(x: f64) -> f64 {
    let r = x.rem_euclid(1.0);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// `x ↦ x + α mod 1`; `α = 0` is the identity.
#[derive(Clone, Copy, Debug)]
pub struct CircleRotation {
    pub alpha: f64,
}

impl CircleRotation {
    pub fn new(alpha: f64) -> Self {
        CircleRotation { alpha }
    }

    pub fn golden() -> Self {
        CircleRotation::new(golden())
    }
}

impl MetricSystem for CircleRotation {
    type Point = f64;

    fn space(&self) -> String {
        "circle".into()
    }

    fn distance(&self, a: &f64, b: &f64) -> f64 {
        circle_distance(*a, *b)
    }

    fn step(&self, x: &f64) -> f64 {
        wrap(x + self.alpha)
    }

    fn inverse_step(&self, x: &f64) -> Option<f64> {
        Some(wrap(x - self.alpha))
    }

    fn power(&self, x: &f64, n: i64) -> Option<f64> {
        Some(wrap(x + frac_mul(n as f64, self.alpha)))
    }

    fn directed_hausdorff(&self, from: &[f64], to: &[f64]) -> f64 {
        circle_directed_hausdorff(from, to)
    }

    fn ball_net(&self, center: &f64, radius: f64) -> Option<Vec<f64>> {
        let r = radius.min(0.5);
        Some(
            (-16..=16)
                .map(|i| wrap(center + r * i as f64 / 16.0))
                .collect(),
        )
    }
}

/// The fibre cocycle of a torus skew product over a rotation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SkewCocycle {
    /// `(x, y) ↦ (x + α, y + x)`.
    Linear,
    /// `(x, y) ↦ (x + α, y)`.
    Zero,
}

/// A skew product on `T²` with the max metric.
#[derive(Clone, Copy, Debug)]
pub struct TorusSkewSystem {
    pub alpha: f64,
    pub cocycle: SkewCocycle,
}

impl TorusSkewSystem {
    pub fn example1(alpha: f64) -> Self {
        TorusSkewSystem {
            alpha,
            cocycle: SkewCocycle::Linear,
        }
    }

    pub fn plain_rotation(alpha: f64) -> Self {
        TorusSkewSystem {
            alpha,
            cocycle: SkewCocycle::Zero,
        }
    }
}

/// `T^n(x, y) = (x + nα, y + nx + a(n)α)` with `a(n) = n(n−1)/2`.
pub fn example1_power(x: f64, y: f64, alpha: f64, n: i64) -> (f64, f64) {
    let nf = n as f64;
    let a = (n as i128 * (n as i128 - 1) / 2) as f64;
    (
        wrap(x + frac_mul(nf, alpha)),
        wrap(y + frac_mul(nf, x) + frac_mul(a, alpha)),
    )
}

/// The same closed form in exact rational arithmetic mod 1.
pub fn example1_power_exact(
    x: &BigRational,
    y: &BigRational,
    alpha: &BigRational,
    n: i64,
) -> (BigRational, BigRational) {
    let nr = BigRational::from_integer(n.into());
    let a = BigRational::from_integer((n as i128 * (n as i128 - 1) / 2).into());
    (
        frac_rational(&(x + &nr * alpha)),
        frac_rational(&(y + &nr * x + a * alpha)),
    )
}

/// `r − floor(r)`.
pub fn frac_rational(r: &BigRational) -> BigRational {
    r - r.floor()
}

impl MetricSystem for TorusSkewSystem {
    type Point = TorusPoint;

    fn space(&self) -> String {
        "torus".into()
    }

    fn distance(&self, a: &TorusPoint, b: &TorusPoint) -> f64 {
        torus_distance(a, b)
    }

    fn step(&self, p: &TorusPoint) -> TorusPoint {
        match self.cocycle {
            SkewCocycle::Linear => [wrap(p[0] + self.alpha), wrap(p[1] + p[0])],
            SkewCocycle::Zero => [wrap(p[0] + self.alpha), p[1]],
        }
    }

    fn inverse_step(&self, p: &TorusPoint) -> Option<TorusPoint> {
        let x = wrap(p[0] - self.alpha);
        Some(match self.cocycle {
            SkewCocycle::Linear => [x, wrap(p[1] - x)],
            SkewCocycle::Zero => [x, p[1]],
        })
    }

    fn power(&self, p: &TorusPoint, n: i64) -> Option<TorusPoint> {
        Some(match self.cocycle {
            SkewCocycle::Linear => {
                let (x, y) = example1_power(p[0], p[1], self.alpha, n);
                [x, y]
            }
            SkewCocycle::Zero => [wrap(p[0] + frac_mul(n as f64, self.alpha)), p[1]],
        })
    }

    fn directed_hausdorff(&self, from: &[TorusPoint], to: &[TorusPoint]) -> f64 {
        torus_directed_hausdorff(from, to)
    }
}

/// Lower bound on the fibre's non-recurrence radius for the skew product.
pub const EXAMPLE1_EPS0: (i64, i64) = (1, 10);

/// Scan tolerance absorbed on top of the grid slack.
pub const SCAN_SLACK: f64 = 1e-9;

/// Scans `d_H(T_K^n A, A)` for the grid fibre `A = {(i/g, y0)}`.
pub fn example1_fiber_scan(
    alpha: f64,
    grid: usize,
    horizon: u64,
    y0: f64,
) -> Result<VerificationReport> {
    if grid < 100 {
        return Err(Error::InvalidInput(format!("grid size {grid} is below 100")));
    }
    if !alpha.is_finite() {
        return Err(Error::InvalidInput("alpha must be finite".into()));
    }
    let mut report = VerificationReport::new(format!(
        "example1(alpha={alpha:.17},grid={grid},horizon={horizon})"
    ))
    .param("alpha", alpha.to_string())
    .param("grid", grid)
    .param("horizon", horizon)
    .param("y0", y0.to_string());
    let grid_slack = 1.0 / (2.0 * grid as f64);
    let eps0 = EXAMPLE1_EPS0.0 as f64 / EXAMPLE1_EPS0.1 as f64;
    let threshold = eps0 - grid_slack - SCAN_SLACK;

    if horizon == 0 {
        report.push(
            Check::new(
                "fiber-nonrecurrence",
                "some eps0 > 0 has d_H(T_K^n A, A) >= eps0 for every n >= 1, A a vertical-base fibre",
                Status::Warning,
            )
            .detail("empty scan: horizon 0 makes the check vacuous"),
        );
        return Ok(report);
    }

    let fiber: Vec<TorusPoint> = (0..grid).map(|i| [i as f64 / grid as f64, y0]).collect();
    let skew = TorusSkewSystem::example1(alpha);
    let a = FinitePointSet::new(&skew, fiber.clone())?;
    let scan = recurrence_scan(&skew, &a, horizon, Direction::Forward, false)?;
    report.push(
        Check::pass_if(
            "fiber-nonrecurrence",
            "some eps0 > 0 has d_H(T_K^n A, A) >= eps0 for every n >= 1, A a vertical-base fibre",
            scan.min_distance >= threshold,
        )
        .detail(format!(
            "min d_H = {:.6} at n = {}; threshold {:.6}",
            scan.min_distance,
            scan.argmin.unwrap_or(0),
            threshold
        ))
        .witnesses(json!({ "argmin": scan.argmin }))
        .bound("eps0", Num::Rational(format!("{}/{}", EXAMPLE1_EPS0.0, EXAMPLE1_EPS0.1)))
        .bound("min_raw", Num::real(scan.min_distance, SCAN_SLACK))
        .bound(
            "min_slack_adjusted",
            Num::real(scan.min_distance - grid_slack, SCAN_SLACK),
        )
        .bound("grid_slack", Num::real(grid_slack, 0.0)),
    );
    report.push(displacement_check(&scan.displacement_violations));

    let control = TorusSkewSystem::plain_rotation(alpha);
    let c = FinitePointSet::new(&control, fiber)?;
    let cscan = recurrence_scan(&control, &c, horizon, Direction::Forward, false)?;
    report.push(
        Check::pass_if(
            "control-rotation-recurs",
            "under (x, y) -> (x + alpha, y) the fibre returns: min d_H < 1/1000",
            cscan.min_distance < 1e-3,
        )
        .detail(format!(
            "min d_H = {:.3e} at n = {}",
            cscan.min_distance,
            cscan.argmin.unwrap_or(0)
        ))
        .bound("min_raw", Num::real(cscan.min_distance, SCAN_SLACK)),
    );
    Ok(report)
}

fn displacement_check(violations: &[u64]) -> Check {
    Check::pass_if(
        "displacement-bound",
        "d_H(T_K^n A, A) <= max_{x in A} d(T^n x, x)",
        violations.is_empty(),
    )
    .detail(format!("{} violations", violations.len()))
    .witnesses(json!({ "violations": violations }))
}

/// A point of the annulus: ring `0` is the boundary circle `|z| = 1`, ring
/// `n >= 1` the circle `|z| = 1 − 2^{-n}`. The angle is `angle / 2^N` turns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AnnulusPoint {
    pub ring: u32,
    pub angle: u64,
}

/// The truncation of the annulus map to circles `1..=N` plus the boundary.
#[derive(Clone, Copy, Debug)]
pub struct AnnulusSystem {
    pub circles: u32,
}

pub const MAX_ANNULUS_CIRCLES: u32 = 62;

impl AnnulusSystem {
    pub fn new(circles: u32) -> Result<Self> {
        if circles == 0 || circles > MAX_ANNULUS_CIRCLES {
            return Err(Error::InvalidInput(format!(
                "circle count must be in 1..={MAX_ANNULUS_CIRCLES}"
            )));
        }
        Ok(AnnulusSystem { circles })
    }

    fn modulus(&self) -> u64 {
        1u64 << self.circles
    }

    pub fn radius(&self, ring: u32) -> f64 {
        if ring == 0 {
            1.0
        } else {
            1.0 - 0.5f64.powi(ring as i32)
        }
    }

    /// Rotation step of ring `n` in units of `2^-N` turns.
    fn increment(&self, ring: u32) -> u64 {
        if ring == 0 {
            0
        } else {
            1u64 << (self.circles - ring)
        }
    }

    fn coords(&self, p: &AnnulusPoint) -> (f64, f64) {
        let r = self.radius(p.ring);
        let theta = std::f64::consts::TAU * (p.angle as f64 / self.modulus() as f64);
        (r * theta.cos(), r * theta.sin())
    }
}

impl MetricSystem for AnnulusSystem {
    type Point = AnnulusPoint;

    fn space(&self) -> String {
        format!("annulus[{}]", self.circles)
    }

    fn distance(&self, a: &AnnulusPoint, b: &AnnulusPoint) -> f64 {
        if a == b {
            return 0.0;
        }
        let (x1, y1) = self.coords(a);
        let (x2, y2) = self.coords(b);
        (x1 - x2).hypot(y1 - y2)
    }

    fn step(&self, p: &AnnulusPoint) -> AnnulusPoint {
        self.power(p, 1).expect("closed form")
    }

    fn inverse_step(&self, p: &AnnulusPoint) -> Option<AnnulusPoint> {
        self.power(p, -1)
    }

    fn power(&self, p: &AnnulusPoint, n: i64) -> Option<AnnulusPoint> {
        let m = self.modulus() as i128;
        let turn = n as i128 * self.increment(p.ring) as i128;
        Some(AnnulusPoint {
            ring: p.ring,
            angle: (p.angle as i128 + turn).rem_euclid(m) as u64,
        })
    }
}

/// Pointwise rigidity along `2^k` and the non-recurrence of `R` in the
/// hyperspace, for the truncation to `circles` circles.
pub fn annulus_scan(circles: u32, horizon: u64) -> Result<VerificationReport> {
    let sys = AnnulusSystem::new(circles)?;
    if horizon == 0 {
        return Err(Error::InvalidInput("horizon must be at least 1".into()));
    }
    if horizon >= sys.modulus() {
        return Err(Error::TruncationArtifact { horizon, circles });
    }
    let mut report = VerificationReport::new(format!("annulus(N={circles},horizon={horizon})"))
        .param("circles", circles)
        .param("horizon", horizon);

    let m = sys.modulus();
    let sample_angles = [0, 1, m / 3, m / 2 + 1, m - 1];
    let mut mismatches = Vec::new();
    for ring in 1..=circles {
        for &angle in &sample_angles {
            let z = AnnulusPoint { ring, angle };
            for k in 0..=circles {
                let tz = sys.power(&z, 1i64 << k).expect("closed form");
                let d = sys.distance(&tz, &z);
                if (d == 0.0) != (k >= ring) {
                    mismatches.push(json!({ "ring": ring, "angle": angle, "k": k, "displacement": d.to_string() }));
                }
            }
        }
    }
    report.push(
        Check::pass_if(
            "pointwise-rigidity",
            "d(T^{2^k} z, z) = 0 exactly when k >= n, for z on circle n; boundary fixed",
            mismatches.is_empty(),
        )
        .detail(format!(
            "{} rings x {} sample angles x k in 0..={circles}",
            circles,
            sample_angles.len()
        ))
        .witnesses(json!({ "mismatches": mismatches })),
    );

    let mut r: Vec<AnnulusPoint> = (1..=circles).map(|ring| AnnulusPoint { ring, angle: 0 }).collect();
    r.push(AnnulusPoint { ring: 0, angle: 0 });
    let set = FinitePointSet::new(&sys, r)?;
    let scan = recurrence_scan(&sys, &set, horizon, Direction::Forward, false)?;
    report.push(
        Check::pass_if(
            "set-not-recurrent",
            "R (angle 0 on every circle) is not positively recurrent in K(X): min d_H(T_K^m R, R) >= 0.99",
            scan.min_distance >= 0.99,
        )
        .detail(format!(
            "min d_H = {:.6} at m = {}",
            scan.min_distance,
            scan.argmin.unwrap_or(0)
        ))
        .witnesses(json!({ "argmin": scan.argmin }))
        .bound("min_d_h", Num::real(scan.min_distance, 1e-12))
        .bound("threshold", Num::Rational("99/100".into())),
    );
    report.push(displacement_check(&scan.displacement_violations));
    Ok(report)
}

/// A circle cocycle `φ : T¹ → T¹` given by a continuous lift.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum CocycleSpec {
    /// `φ(x) = d x`.
    Degree { degree: i64 },
    /// `φ(x) = f(x + α) − f(x)` with `f(x) = amp · sin 2πx`.
    Coboundary { amp: f64 },
    /// The first two terms of the uniformly rigid cocycle
    /// `Σ 2[cos 2πn_k(x + α) − cos 2πn_k x]`.
    Rigid,
}

const RIGID_TERMS: [f64; 2] = [100.0, 1e6];

impl CocycleSpec {
    /// Parses `x`, `<d>x`, `coboundary[:amp]` and `rigid`.
    pub fn parse(tag: &str) -> Result<Self> {
        let tag = tag.trim();
        if tag == "rigid" {
            return Ok(CocycleSpec::Rigid);
        }
        if let Some(rest) = tag.strip_prefix("coboundary") {
            let amp = match rest.strip_prefix(':') {
                Some(a) => a
                    .parse::<f64>()
                    .map_err(|e| Error::InvalidCocycle(format!("bad amplitude {a:?}: {e}")))?,
                None if rest.is_empty() => 0.1,
                None => return Err(Error::InvalidCocycle(format!("unknown cocycle {tag:?}"))),
            };
            return Ok(CocycleSpec::Coboundary { amp });
        }
        if let Some(coef) = tag.strip_suffix('x') {
            let d: f64 = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c
                    .parse()
                    .map_err(|e| Error::InvalidCocycle(format!("bad coefficient {c:?}: {e}")))?,
            };
            if !d.is_finite() || (d - d.round()).abs() > 1e-9 {
                return Err(Error::InvalidCocycle(format!(
                    "lift {tag:?} has non-integer degree {d}"
                )));
            }
            return Ok(CocycleSpec::Degree {
                degree: d.round() as i64,
            });
        }
        Err(Error::InvalidCocycle(format!("unknown cocycle {tag:?}")))
    }

    pub fn degree(&self) -> i64 {
        match self {
            CocycleSpec::Degree { degree } => *degree,
            _ => 0,
        }
    }

    /// Lift value on `[0, 1)`; continuous as a circle map.
    pub fn lift(&self, x: f64, alpha: f64) -> f64 {
        let tau = std::f64::consts::TAU;
        match self {
            CocycleSpec::Degree { degree } => *degree as f64 * wrap(x),
            CocycleSpec::Coboundary { amp } => amp * ((tau * (x + alpha)).sin() - (tau * x).sin()),
            CocycleSpec::Rigid => RIGID_TERMS
                .iter()
                .map(|&n| {
                    2.0 * ((tau * (frac_mul(n, x) + frac_mul(n, alpha))).cos()
                        - (tau * frac_mul(n, x)).cos())
                })
                .sum(),
        }
    }

    /// Lipschitz constant of `φ` as a circle map.
    pub fn lipschitz(&self, alpha: f64) -> f64 {
        let tau = std::f64::consts::TAU;
        match self {
            CocycleSpec::Degree { degree } => degree.unsigned_abs() as f64,
            CocycleSpec::Coboundary { amp } => 2.0 * tau * amp.abs(),
            // |d/dx| <= 4π n_k |sin 2πn_k(x+α) − sin 2πn_k x| <= 4π n_k · min(2, 2π ||n_k α||)
            CocycleSpec::Rigid => RIGID_TERMS
                .iter()
                .map(|&n| {
                    let th = circle_distance(frac_mul(n, alpha), 0.0);
                    2.0 * tau * n * (tau * th).min(2.0)
                })
                .sum(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BirkhoffProfile {
    pub cocycle: CocycleSpec,
    pub alpha: f64,
    pub n: u64,
    pub grid: usize,
    pub degree: i64,
    pub winding: i64,
    pub expected_winding: i64,
    /// Largest circular gap between image points of the sampled sum.
    pub max_gap: f64,
    pub lipschitz: f64,
}

impl BirkhoffProfile {
    pub fn dense_at(&self, eps: f64) -> bool {
        self.max_gap <= eps
    }
}

/// Winding number and image density of `x ↦ Σ_{i<n} φ(x + iα)` on a grid.
pub fn birkhoff_image_profile(
    cocycle: &CocycleSpec,
    alpha: f64,
    n: u64,
    grid: usize,
) -> Result<BirkhoffProfile> {
    if n == 0 || grid < 2 {
        return Err(Error::InvalidInput("need n >= 1 and grid >= 2".into()));
    }
    let lip = cocycle.lipschitz(alpha);
    if n as f64 * lip / grid as f64 >= 0.5 {
        return Err(Error::InvalidInput(format!(
            "grid {grid} too coarse: n * Lip / grid = {} >= 1/2",
            n as f64 * lip / grid as f64
        )));
    }
    let values: Vec<f64> = (0..grid)
        .into_par_iter()
        .map(|j| {
            let x = j as f64 / grid as f64;
            let s: f64 = (0..n)
                .map(|i| cocycle.lift(wrap(x + frac_mul(i as f64, alpha)), alpha))
                .sum();
            s.rem_euclid(1.0)
        })
        .collect();
    let mut total = 0.0;
    for j in 0..grid {
        let next = values[(j + 1) % grid];
        let mut d = next - values[j];
        d -= d.round();
        total += d;
    }
    let mut sorted = values.clone();
    sorted.sort_by(f64::total_cmp);
    let mut max_gap = 1.0 - sorted[sorted.len() - 1] + sorted[0];
    for w in sorted.windows(2) {
        max_gap = max_gap.max(w[1] - w[0]);
    }
    let degree = cocycle.degree();
    Ok(BirkhoffProfile {
        cocycle: cocycle.clone(),
        alpha,
        n,
        grid,
        degree,
        winding: total.round() as i64,
        expected_winding: n as i64 * degree,
        max_gap,
        lipschitz: lip,
    })
}

/// Report form of `birkhoff_image_profile`.
pub fn degree_report(tag: &str, alpha: f64, n: u64, grid: usize) -> Result<VerificationReport> {
    let cocycle = CocycleSpec::parse(tag)?;
    let p = birkhoff_image_profile(&cocycle, alpha, n, grid)?;
    let mut report = VerificationReport::new(format!("degree(cocycle={tag},n={n},grid={grid})"))
        .param("cocycle", tag)
        .param("alpha", alpha.to_string())
        .param("n", n)
        .param("grid", grid);
    report.push(
        Check::pass_if(
            "winding-number",
            "deg(φ_0 + ... + φ_{n-1}) = n deg(φ)",
            p.winding == p.expected_winding,
        )
        .detail(format!("winding {} (expected {})", p.winding, p.expected_winding))
        .bound("winding", Num::int(p.winding))
        .bound("lipschitz_ratio", Num::real(n as f64 * p.lipschitz / grid as f64, 0.0)),
    );
    let dense = p.dense_at(0.01);
    let status = if p.degree == 0 {
        Status::Witness
    } else if dense {
        Status::Pass
    } else {
        Status::Fail
    };
    report.push(
        Check::new(
            "image-density",
            "if |deg φ| >= 1 the Birkhoff sum x -> Σ_{i<n} φ(x + iα) is onto T¹",
            status,
        )
        .detail(format!(
            "max image gap {:.3e} ({}1/100-dense){}",
            p.max_gap,
            if dense { "" } else { "not " },
            if p.degree == 0 { "; informational for degree 0" } else { "" }
        ))
        .bound("max_gap", Num::real(p.max_gap, 0.0)),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example1_power_matches_definition() {
        let a = golden();
        let (x, y) = (0.3, 0.7);
        let (x1, y1) = example1_power(x, y, a, 1);
        assert!(circle_distance(x1, x + a) < 1e-15 && circle_distance(y1, y + x) < 1e-15);
        let (x2, y2) = example1_power(x, y, a, 2);
        assert!(circle_distance(x2, x + 2.0 * a) < 1e-15);
        assert!(circle_distance(y2, y + 2.0 * x + a) < 1e-15);
        let sys = TorusSkewSystem::example1(a);
        let mut p = [x, y];
        for _ in 0..100 {
            p = sys.step(&p);
        }
        let q = sys.power(&[x, y], 100).unwrap();
        assert!(torus_distance(&p, &q) < 1e-12);
        let back = sys.power(&q, -100).unwrap();
        assert!(torus_distance(&back, &[x, y]) < 1e-12);
    }

    #[test]
    fn example1_small_scan() {
        let r = example1_fiber_scan(golden(), 256, 300, 0.0).unwrap();
        assert!(r.passed(), "{}", r.summary());
        let r = example1_fiber_scan(golden(), 256, 0, 0.0).unwrap();
        assert_eq!(r.checks[0].status, Status::Warning);
        assert!(example1_fiber_scan(golden(), 50, 10, 0.0).is_err());
    }

    #[test]
    fn annulus_examples() {
        let sys = AnnulusSystem::new(12).unwrap();
        let z = AnnulusPoint { ring: 5, angle: 77 };
        assert_eq!(sys.distance(&sys.power(&z, 1 << 12).unwrap(), &z), 0.0);
        assert!(sys.distance(&sys.power(&z, 1 << 4).unwrap(), &z) > 0.0);
        let r = annulus_scan(8, 255).unwrap();
        assert!(r.passed(), "{}", r.summary());
        assert!(matches!(
            annulus_scan(8, 256),
            Err(Error::TruncationArtifact { horizon: 256, circles: 8 })
        ));
        assert!(annulus_scan(8, 0).is_err());
    }

    #[test]
    fn degree_examples() {
        let a = golden();
        let p = birkhoff_image_profile(&CocycleSpec::parse("x").unwrap(), a, 3, 10_000).unwrap();
        assert_eq!(p.winding, 3);
        assert!(p.dense_at(0.01));
        let p = birkhoff_image_profile(&CocycleSpec::parse("2x").unwrap(), a, 2, 10_000).unwrap();
        assert_eq!(p.winding, 4);
        let p = birkhoff_image_profile(&CocycleSpec::parse("coboundary").unwrap(), a, 5, 10_000)
            .unwrap();
        assert_eq!(p.winding, 0);
        let p = birkhoff_image_profile(&CocycleSpec::Rigid, 0.010001, 3, 10_000).unwrap();
        assert_eq!(p.winding, 0);
        assert!(matches!(CocycleSpec::parse("1.5x"), Err(Error::InvalidCocycle(_))));
        assert!(matches!(CocycleSpec::parse("-x"), Ok(CocycleSpec::Degree { degree: -1 })));
    }

    #[test]
    fn exact_power_composes() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let (x, y, al) = (r(3, 7), r(1, 5), r(13, 21));
        let (x1, y1) = example1_power_exact(&x, &y, &al, 5);
        let (x2, y2) = example1_power_exact(&x1, &y1, &al, 8);
        assert_eq!(example1_power_exact(&x, &y, &al, 13), (x2, y2));
    }
}
