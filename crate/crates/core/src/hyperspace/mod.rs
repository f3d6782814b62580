//! Hausdorff metric on finite subsets, Vietoris basic opens, the induced map
//! `T_K` and recurrence scans in the hyperspace.
//!
//! Finite sets are the dense part of `K(X)`; every statement here is about a
//! finite approximant.

mod nearest;
pub mod symbolic;
mod union;

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub use nearest::{
    circle_directed_hausdorff, circle_distance, torus_directed_hausdorff, torus_distance,
    TorusPoint,
};
pub use union::DisjointUnion;

/// Default merge tolerance for `FinitePointSet`.
pub const MERGE_TOLERANCE: f64 = 1e-12;

/// A compact metric space with a continuous self-map.
pub trait MetricSystem: Sync {
    type Point: Clone + Send + Sync + fmt::Debug;

    /// Name of the point universe; sets from different universes never compare.
    fn space(&self) -> String;

    fn distance(&self, a: &Self::Point, b: &Self::Point) -> f64;

    fn step(&self, x: &Self::Point) -> Self::Point;

    fn inverse_step(&self, _x: &Self::Point) -> Option<Self::Point> {
        None
    }

    /// Closed-form `T^n x`; negative `n` means the inverse.
    fn power(&self, _x: &Self::Point, _n: i64) -> Option<Self::Point> {
        None
    }

    /// `max_{a in from} min_{b in to} d(a, b)`. Implementations may override
    /// with an accelerated search; the result must equal the brute force.
    fn directed_hausdorff(&self, from: &[Self::Point], to: &[Self::Point]) -> f64 {
        brute_directed(self, from, to)
    }

    /// Finite sample of the closed ball `B[center, radius]`, when the space
    /// admits one.
    fn ball_net(&self, _center: &Self::Point, _radius: f64) -> Option<Vec<Self::Point>> {
        None
    }
}

fn brute_directed<S: MetricSystem + ?Sized>(sys: &S, from: &[S::Point], to: &[S::Point]) -> f64 {
    let nearest = |a: &S::Point| {
        to.iter()
            .map(|b| sys.distance(a, b))
            .fold(f64::INFINITY, f64::min)
    };
    if from.len() * to.len() > 1 << 16 {
        from.par_iter().map(nearest).reduce(|| 0.0, f64::max)
    } else {
        from.iter().map(nearest).fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

/// `T^n x`, by closed form when available and iteration otherwise.
pub fn iterate<S: MetricSystem + ?Sized>(sys: &S, x: &S::Point, n: i64) -> Result<S::Point> {
    if let Some(p) = sys.power(x, n) {
        return Ok(p);
    }
    let mut p = x.clone();
    if n >= 0 {
        for _ in 0..n {
            p = sys.step(&p);
        }
    } else {
        for _ in 0..n.unsigned_abs() {
            p = sys.inverse_step(&p).ok_or(Error::UnsupportedDirection)?;
        }
    }
    Ok(p)
}

/// A non-empty finite subset of a `MetricSystem`, deduplicated under the
/// merge tolerance.
#[derive(Clone, Debug)]
pub struct FinitePointSet<P> {
    points: Vec<P>,
    space: String,
    tolerance: f64,
}

impl<P: Clone + Send + Sync + fmt::Debug> FinitePointSet<P> {
    pub fn new<S>(sys: &S, points: Vec<P>) -> Result<Self>
    where
        S: MetricSystem<Point = P> + ?Sized,
    {
        Self::with_tolerance(sys, points, MERGE_TOLERANCE)
    }

    pub fn with_tolerance<S>(sys: &S, points: Vec<P>, tolerance: f64) -> Result<Self>
    where
        S: MetricSystem<Point = P> + ?Sized,
    {
        if points.is_empty() {
            return Err(Error::InvalidInput("finite point sets must be non-empty".into()));
        }
        let mut kept: Vec<P> = Vec::with_capacity(points.len());
        for p in points {
            if kept.iter().all(|q| sys.distance(&p, q) >= tolerance) {
                kept.push(p);
            }
        }
        Ok(FinitePointSet {
            points: kept,
            space: sys.space(),
            tolerance,
        })
    }

    pub fn points(&self) -> &[P] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn space(&self) -> &str {
        &self.space
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// `T_K^n A`.
    pub fn image<S>(&self, sys: &S, n: i64) -> Result<Self>
    where
        S: MetricSystem<Point = P> + ?Sized,
    {
        self.same_space(sys)?;
        let pts = self
            .points
            .iter()
            .map(|x| iterate(sys, x, n))
            .collect::<Result<Vec<_>>>()?;
        Self::with_tolerance(sys, pts, self.tolerance)
    }

    pub fn union<S>(&self, sys: &S, other: &Self) -> Result<Self>
    where
        S: MetricSystem<Point = P> + ?Sized,
    {
        self.same_space(sys)?;
        other.same_space(sys)?;
        let mut pts = self.points.clone();
        pts.extend(other.points.iter().cloned());
        Self::with_tolerance(sys, pts, self.tolerance.min(other.tolerance))
    }

    fn same_space<S>(&self, sys: &S) -> Result<()>
    where
        S: MetricSystem<Point = P> + ?Sized,
    {
        if self.space == sys.space() {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "point set lives in {:?}, system is {:?}",
                self.space,
                sys.space()
            )))
        }
    }
}

fn check_pair<S: MetricSystem + ?Sized>(
    sys: &S,
    a: &FinitePointSet<S::Point>,
    b: &FinitePointSet<S::Point>,
) -> Result<()> {
    a.same_space(sys)?;
    b.same_space(sys)
}

/// `d_H(A, B) = max(max_{x in A} min_{y in B} d(x, y), max_{y in B} min_{x in A} d(x, y))`.
pub fn hausdorff<S: MetricSystem + ?Sized>(
    sys: &S,
    a: &FinitePointSet<S::Point>,
    b: &FinitePointSet<S::Point>,
) -> Result<f64> {
    check_pair(sys, a, b)?;
    Ok(hausdorff_points(sys, a.points(), b.points()))
}

pub(crate) fn hausdorff_points<S: MetricSystem + ?Sized>(
    sys: &S,
    a: &[S::Point],
    b: &[S::Point],
) -> f64 {
    sys.directed_hausdorff(a, b)
        .max(sys.directed_hausdorff(b, a))
}

/// The max-min formula evaluated by exhaustive pairing, ignoring any
/// accelerated search the system provides.
pub fn hausdorff_exhaustive<S: MetricSystem + ?Sized>(
    sys: &S,
    a: &FinitePointSet<S::Point>,
    b: &FinitePointSet<S::Point>,
) -> Result<f64> {
    check_pair(sys, a, b)?;
    Ok(brute_directed(sys, a.points(), b.points())
        .max(brute_directed(sys, b.points(), a.points())))
}

/// `inf { eps > 0 : B_eps(A) ⊇ B and B_eps(B) ⊇ A }` by bisection on eps,
/// with open neighbourhoods.
pub fn hausdorff_by_neighborhoods<S: MetricSystem + ?Sized>(
    sys: &S,
    a: &FinitePointSet<S::Point>,
    b: &FinitePointSet<S::Point>,
) -> Result<f64> {
    check_pair(sys, a, b)?;
    let covers = |cover: &[S::Point], target: &[S::Point], eps: f64| {
        target
            .iter()
            .all(|y| cover.iter().any(|x| sys.distance(x, y) < eps))
    };
    let ok = |eps: f64| covers(a.points(), b.points(), eps) && covers(b.points(), a.points(), eps);
    let mut hi = 1.0f64;
    while !ok(hi) {
        hi *= 2.0;
    }
    let mut lo = 0.0f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `max_{x in A} d(T^n x, x)`, which bounds `d_H(T_K^n A, A)` from above.
pub fn displacement<S: MetricSystem + ?Sized>(
    sys: &S,
    a: &[S::Point],
    image: &[S::Point],
) -> f64 {
    a.iter()
        .zip(image)
        .map(|(x, y)| sys.distance(x, y))
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanResult {
    pub horizon: u64,
    pub direction: Direction,
    /// `min_{1 <= j <= horizon} d_H(T_K^{±j} A, A)`; infinite for an empty scan.
    pub min_distance: f64,
    pub argmin: Option<u64>,
    /// `d_H` at `j = 1..=horizon`, when requested.
    pub profile: Option<Vec<f64>>,
    /// Steps where `d_H` exceeded the pointwise displacement bound.
    pub displacement_violations: Vec<u64>,
    pub used_closed_form: bool,
}

/// Scans `d_H(T_K^j A, A)` for `1 <= j <= horizon`.
pub fn recurrence_scan<S: MetricSystem + ?Sized>(
    sys: &S,
    a: &FinitePointSet<S::Point>,
    horizon: u64,
    direction: Direction,
    keep_profile: bool,
) -> Result<ScanResult> {
    a.same_space(sys)?;
    let sign: i64 = match direction {
        Direction::Forward => 1,
        Direction::Backward => -1,
    };
    let pts = a.points();
    let closed_form = sys.power(&pts[0], sign).is_some();
    if direction == Direction::Backward && !closed_form && sys.inverse_step(&pts[0]).is_none() {
        return Err(Error::UnsupportedDirection);
    }
    let measure = |image: &[S::Point]| {
        let d = hausdorff_points(sys, image, pts);
        let disp = displacement(sys, pts, image);
        (d, d > disp + 1e-12)
    };
    let rows: Vec<(f64, bool)> = if closed_form {
        (1..=horizon)
            .into_par_iter()
            .map(|j| {
                let n = sign * j as i64;
                let image: Vec<S::Point> = pts
                    .iter()
                    .map(|x| sys.power(x, n).expect("closed form probed"))
                    .collect();
                measure(&image)
            })
            .collect()
    } else {
        let mut cur = pts.to_vec();
        let mut rows = Vec::with_capacity(horizon as usize);
        for _ in 0..horizon {
            cur = cur
                .iter()
                .map(|x| match direction {
                    Direction::Forward => Ok(sys.step(x)),
                    Direction::Backward => sys.inverse_step(x).ok_or(Error::UnsupportedDirection),
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(measure(&cur));
        }
        rows
    };
    let mut min_distance = f64::INFINITY;
    let mut argmin = None;
    let mut violations = Vec::new();
    for (i, &(d, bad)) in rows.iter().enumerate() {
        let j = i as u64 + 1;
        if d < min_distance {
            min_distance = d;
            argmin = Some(j);
        }
        if bad {
            violations.push(j);
        }
    }
    Ok(ScanResult {
        horizon,
        direction,
        min_distance,
        argmin,
        profile: keep_profile.then(|| rows.iter().map(|r| r.0).collect()),
        displacement_violations: violations,
        used_closed_form: closed_form,
    })
}

/// Open ball `{y : d(center, y) < radius}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OpenBall<P> {
    pub center: P,
    pub radius: f64,
}

impl<P> OpenBall<P> {
    pub fn new(center: P, radius: f64) -> Self {
        OpenBall { center, radius }
    }
}

impl OpenBall<f64> {
    /// The open arc `(lo, hi)` of the circle, `lo < hi` in `[0, 1]`.
    pub fn arc(lo: f64, hi: f64) -> Self {
        OpenBall::new(0.5 * (lo + hi), 0.5 * (hi - lo))
    }
}

fn in_ball<S: MetricSystem + ?Sized>(sys: &S, x: &S::Point, ball: &OpenBall<S::Point>) -> bool {
    sys.distance(x, &ball.center) < ball.radius
}

/// Membership of `A` in the Vietoris basic open `<U_1, ..., U_n>`.
pub fn vietoris_contains<S: MetricSystem + ?Sized>(
    sys: &S,
    a: &FinitePointSet<S::Point>,
    opens: &[OpenBall<S::Point>],
) -> bool {
    let covered = a
        .points()
        .iter()
        .all(|x| opens.iter().any(|u| in_ball(sys, x, u)));
    let meets = opens
        .iter()
        .all(|u| a.points().iter().any(|x| in_ball(sys, x, u)));
    covered && meets
}

#[derive(Clone, Debug)]
pub enum OrbitSample<P> {
    /// `A = {T^{k_i} x}` with `k_i` the first hit time of target `i`.
    Found {
        set: FinitePointSet<P>,
        hit_times: Vec<u64>,
    },
    /// Some target was never visited; `visits[i]` is the first hit, if any.
    NotFound { visits: Vec<Option<u64>> },
}

pub fn orbit_sample_set<S: MetricSystem + ?Sized>(
    sys: &S,
    x: &S::Point,
    targets: &[OpenBall<S::Point>],
    horizon: u64,
) -> Result<OrbitSample<S::Point>> {
    if targets.is_empty() {
        return Err(Error::InvalidInput("at least one target is required".into()));
    }
    let mut visits: Vec<Option<(u64, S::Point)>> = vec![None; targets.len()];
    let mut p = x.clone();
    for k in 0..=horizon {
        for (i, t) in targets.iter().enumerate() {
            if visits[i].is_none() && in_ball(sys, &p, t) {
                visits[i] = Some((k, p.clone()));
            }
        }
        if visits.iter().all(Option::is_some) {
            break;
        }
        p = sys.step(&p);
    }
    if visits.iter().any(Option::is_none) {
        return Ok(OrbitSample::NotFound {
            visits: visits.iter().map(|v| v.as_ref().map(|(k, _)| *k)).collect(),
        });
    }
    let (hit_times, pts): (Vec<u64>, Vec<S::Point>) =
        visits.into_iter().map(|v| v.expect("all visited")).unzip();
    Ok(OrbitSample::Found {
        set: FinitePointSet::new(sys, pts)?,
        hit_times,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle_systems::CircleRotation;

    fn circle() -> CircleRotation {
        CircleRotation::new(0.0)
    }

    fn set(sys: &CircleRotation, pts: &[f64]) -> FinitePointSet<f64> {
        FinitePointSet::new(sys, pts.to_vec()).unwrap()
    }

    #[test]
    fn hausdorff_examples() {
        let c = circle();
        let a = set(&c, &[0.0]);
        let b = set(&c, &[0.0, 0.5]);
        assert_eq!(hausdorff(&c, &a, &a).unwrap(), 0.0);
        assert!((hausdorff(&c, &a, &b).unwrap() - 0.5).abs() < 1e-15);
        let a = set(&c, &[0.0, 0.25]);
        let b = set(&c, &[0.1]);
        assert!((hausdorff(&c, &a, &b).unwrap() - 0.15).abs() < 1e-15);
        assert!((hausdorff_by_neighborhoods(&c, &a, &b).unwrap() - 0.15).abs() < 1e-12);
    }

    #[test]
    fn mismatched_spaces_rejected() {
        let c = circle();
        let shift = symbolic::FullShift;
        let a = set(&c, &[0.0]);
        let mut b = set(&c, &[0.1]);
        b.space = shift.space();
        assert!(matches!(hausdorff(&c, &a, &b), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn dedup_under_tolerance() {
        let c = circle();
        let a = set(&c, &[0.1, 0.1 + 1e-14, 0.3]);
        assert_eq!(a.len(), 2);
        assert!(FinitePointSet::new(&c, Vec::new()).is_err());
    }

    #[test]
    fn identity_scan_returns_immediately() {
        let c = circle();
        let a = set(&c, &[0.2, 0.7]);
        let r = recurrence_scan(&c, &a, 5, Direction::Forward, true).unwrap();
        assert_eq!(r.min_distance, 0.0);
        assert_eq!(r.argmin, Some(1));
        assert_eq!(r.profile.unwrap().len(), 5);
    }

    #[test]
    fn vietoris_examples() {
        let c = circle();
        let opens = [OpenBall::arc(0.0, 0.2), OpenBall::arc(0.5, 0.7)];
        assert!(vietoris_contains(&c, &set(&c, &[0.1, 0.6]), &opens));
        assert!(!vietoris_contains(&c, &set(&c, &[0.1, 0.6, 0.9]), &opens));
        assert!(!vietoris_contains(&c, &set(&c, &[0.1]), &opens));
    }

    #[test]
    fn orbit_sample_single_target() {
        let c = CircleRotation::golden();
        match orbit_sample_set(&c, &0.3, &[OpenBall::new(0.3, 0.05)], 10).unwrap() {
            OrbitSample::Found { set, hit_times } => {
                assert_eq!(hit_times, vec![0]);
                assert_eq!(set.points(), &[0.3]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn backward_without_inverse_is_unsupported() {
        let shift = symbolic::FullShift;
        let a = FinitePointSet::new(&shift, vec![symbolic::ShiftPoint::zeros()]).unwrap();
        assert!(matches!(
            recurrence_scan(&shift, &a, 3, Direction::Backward, false),
            Err(Error::UnsupportedDirection)
        ));
    }
}
