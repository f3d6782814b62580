//! Property tests for the invariants of every module.

use hyperrec::circle_systems::{
    example1_power, example1_power_exact, AnnulusPoint, AnnulusSystem, CircleRotation,
    TorusSkewSystem,
};
use hyperrec::combinatorics::{
    fs_set, independence_search, ip_shift_density, sturmian_word, transfer_set_symbolic,
    FsGenerators, IndexSet, IpShift, Language,
};
use hyperrec::hyperspace::symbolic::{FullShift, ShiftPoint};
use hyperrec::hyperspace::{
    displacement, hausdorff, hausdorff_by_neighborhoods, hausdorff_exhaustive, recurrence_scan,
    Direction, FinitePointSet, MetricSystem, TorusPoint,
};
use hyperrec::rigid_skew::{
    alpha_enclosure, alpha_multiple, check_smallness, nseq, RigidContext, RigidSkewParams,
};
use hyperrec::wm_subshift::{build_ladder, derive_params, ladder_identities_hold, ladder_lengths};
use hyperrec::words::{factors, Word};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn word_strategy(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(any::<bool>(), 1..=max).prop_map(Word::from_bits)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn find_all_matches_naive(text in word_strategy(300), pat in word_strategy(70)) {
        let naive: Vec<u64> = (0..text.len())
            .filter(|&i| i + pat.len() <= text.len() && (0..pat.len()).all(|j| text.get(i + j) == pat.get(j)))
            .map(|i| i as u64)
            .collect();
        prop_assert_eq!(text.find_all(&pat), naive);
    }

    #[test]
    fn word_text_round_trip(w in word_strategy(200)) {
        let parsed: Word = w.to_string().parse().unwrap();
        prop_assert_eq!(parsed, w);
    }

    #[test]
    fn factor_complexity_bounded(w in word_strategy(120), n in 1usize..10) {
        prop_assume!(n <= w.len());
        let f = factors(&w, n).unwrap();
        prop_assert!(f.len() <= (w.len() - n + 1).min(1 << n));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    /// Random admissible `(w, eps)`: exact ladder arithmetic to depth 6 and
    /// containments of the built words.
    #[test]
    fn ladder_arithmetic(w in word_strategy(10), p in 1i64..=4, q in 5i64..=20) {
        prop_assume!(w.ones() > 0);
        let eps = BigRational::new(p.into(), q.into());
        let spec = derive_params(&w, &eps).unwrap();
        prop_assert_eq!(spec.n, 3 * spec.s + 3 * spec.t + 1);
        let lens = ladder_lengths(spec.n, 6);
        prop_assert_eq!(lens[0], (spec.n as u128, spec.n as u128));
        for (u, v) in &lens[1..] {
            prop_assert_eq!(u - v, spec.n as u128);
            prop_assert_eq!(u % spec.n as u128, 0);
        }
        let (ladder, prefix) = build_ladder(&spec, 3).unwrap();
        prop_assert!(ladder_identities_hold(&spec, &ladder).is_ok());
        prop_assert_eq!(prefix.len() as u128, lens[3].0);
        for k in 0..=3 {
            prop_assert_eq!(ladder.u(k).len() as u128, lens[k].0);
            prop_assert_eq!(ladder.v(k).len() as u128, lens[k].1);
        }
    }
}

fn circle_set(pts: Vec<f64>) -> FinitePointSet<f64> {
    FinitePointSet::new(&CircleRotation::new(0.0), pts).unwrap()
}

fn unit() -> impl Strategy<Value = f64> {
    0.0f64..1.0
}

fn torus_pt() -> impl Strategy<Value = TorusPoint> {
    (unit(), unit()).prop_map(|(a, b)| [a, b])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// Both Hausdorff formulations agree and the metric axioms hold.
    #[test]
    fn hausdorff_formulations_agree(
        a in prop::collection::vec(unit(), 1..12),
        b in prop::collection::vec(unit(), 1..12),
        c in prop::collection::vec(unit(), 1..12),
    ) {
        let sys = CircleRotation::new(0.0);
        let (a, b, c) = (circle_set(a), circle_set(b), circle_set(c));
        let d1 = hausdorff(&sys, &a, &b).unwrap();
        let d2 = hausdorff_by_neighborhoods(&sys, &a, &b).unwrap();
        prop_assert!((d1 - d2).abs() <= 1e-12, "{} vs {}", d1, d2);
        prop_assert_eq!(d1, hausdorff_exhaustive(&sys, &a, &b).unwrap());
        prop_assert_eq!(d1, hausdorff(&sys, &b, &a).unwrap());
        prop_assert_eq!(hausdorff(&sys, &a, &a).unwrap(), 0.0);
        let ac = hausdorff(&sys, &a, &c).unwrap();
        let cb = hausdorff(&sys, &c, &b).unwrap();
        prop_assert!(d1 <= ac + cb + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn torus_hausdorff_formulations_agree(
        a in prop::collection::vec(torus_pt(), 1..40),
        b in prop::collection::vec(torus_pt(), 1..40),
    ) {
        let sys = TorusSkewSystem::example1(0.3);
        let a = FinitePointSet::new(&sys, a).unwrap();
        let b = FinitePointSet::new(&sys, b).unwrap();
        let d1 = hausdorff(&sys, &a, &b).unwrap();
        prop_assert_eq!(d1, hausdorff_exhaustive(&sys, &a, &b).unwrap());
        let d2 = hausdorff_by_neighborhoods(&sys, &a, &b).unwrap();
        prop_assert!((d1 - d2).abs() <= 1e-12);
    }

    /// `d_H(T_K^n A, A) <= max_{x in A} d(T^n x, x)` on every system.
    #[test]
    fn displacement_bound(
        pts in prop::collection::vec(torus_pt(), 1..30),
        n in 1i64..5000,
        alpha in unit(),
        rings in prop::collection::vec((0u32..=10, 0u64..1024), 1..12),
        words in prop::collection::vec(("[01]{0,6}", "[01]{1,4}"), 1..8),
    ) {
        let skew = TorusSkewSystem::example1(alpha);
        check_displacement(&skew, pts.clone(), n)?;
        check_displacement(&TorusSkewSystem::plain_rotation(alpha), pts.clone(), n)?;
        let circle = CircleRotation::new(alpha);
        check_displacement(&circle, pts.iter().map(|p| p[0]).collect(), n)?;
        let ann = AnnulusSystem::new(10).unwrap();
        let rp = rings.into_iter().map(|(ring, angle)| AnnulusPoint { ring, angle }).collect();
        check_displacement(&ann, rp, n)?;
        let sp = words
            .into_iter()
            .map(|(p, q)| ShiftPoint::new(p.parse().unwrap(), q.parse().unwrap()).unwrap())
            .collect();
        check_displacement(&FullShift, sp, n % 40)?;
    }

    /// `T_K(A ∪ B) = T_K A ∪ T_K B`.
    #[test]
    fn induced_map_commutes_with_union(
        a in prop::collection::vec(torus_pt(), 1..20),
        b in prop::collection::vec(torus_pt(), 1..20),
        n in 0i64..300,
    ) {
        let sys = TorusSkewSystem::example1(0.618);
        let a = FinitePointSet::new(&sys, a).unwrap();
        let b = FinitePointSet::new(&sys, b).unwrap();
        let lhs = a.union(&sys, &b).unwrap().image(&sys, n).unwrap();
        let rhs = a.image(&sys, n).unwrap().union(&sys, &b.image(&sys, n).unwrap()).unwrap();
        prop_assert_eq!(hausdorff(&sys, &lhs, &rhs).unwrap(), 0.0);
    }
}

fn check_displacement<S: MetricSystem>(
    sys: &S,
    pts: Vec<S::Point>,
    n: i64,
) -> Result<(), TestCaseError> {
    let a = FinitePointSet::new(sys, pts).unwrap();
    let image: Vec<S::Point> = a
        .points()
        .iter()
        .map(|x| sys.power(x, n).unwrap())
        .collect();
    let b = FinitePointSet::new(sys, image.clone()).unwrap();
    let d = hausdorff(sys, &b, &a).unwrap();
    let disp = displacement(sys, a.points(), &image);
    prop_assert!(d <= disp, "{} > {}", d, disp);
    Ok(())
}

/// A system with the closed form hidden, so scans iterate `step`.
struct Iterated<S>(S);

impl<S: MetricSystem> MetricSystem for Iterated<S> {
    type Point = S::Point;
    fn space(&self) -> String {
        self.0.space()
    }
    fn distance(&self, a: &S::Point, b: &S::Point) -> f64 {
        self.0.distance(a, b)
    }
    fn step(&self, x: &S::Point) -> S::Point {
        self.0.step(x)
    }
    fn inverse_step(&self, x: &S::Point) -> Option<S::Point> {
        self.0.inverse_step(x)
    }
    fn directed_hausdorff(&self, from: &[S::Point], to: &[S::Point]) -> f64 {
        self.0.directed_hausdorff(from, to)
    }
}

/// The same skew product on 64-bit fixed point, where stepping is exact
/// (wrapping addition is reduction mod 1). Points on the 2^-53 grid map to
/// identical doubles, so this is an exact iteration oracle.
struct FixedSkew {
    alpha: u64,
}

fn fixed_circle(a: u64, b: u64) -> f64 {
    let d = a.wrapping_sub(b);
    d.min(d.wrapping_neg()) as f64 / 2f64.powi(64)
}

impl MetricSystem for FixedSkew {
    type Point = [u64; 2];
    fn space(&self) -> String {
        "torus".into()
    }
    fn distance(&self, a: &[u64; 2], b: &[u64; 2]) -> f64 {
        fixed_circle(a[0], b[0]).max(fixed_circle(a[1], b[1]))
    }
    fn step(&self, p: &[u64; 2]) -> [u64; 2] {
        [p[0].wrapping_add(self.alpha), p[1].wrapping_add(p[0])]
    }
    fn inverse_step(&self, p: &[u64; 2]) -> Option<[u64; 2]> {
        let x = p[0].wrapping_sub(self.alpha);
        Some([x, p[1].wrapping_sub(x)])
    }
}

fn grid53() -> impl Strategy<Value = u64> {
    0u64..(1 << 53)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// Closed-form scans agree with exact iteration within 1e-9 up to
    /// horizon 10^4.
    #[test]
    fn scan_closed_form_matches_iteration(
        pts in prop::collection::vec((grid53(), grid53()), 1..6),
        alpha in grid53(),
        backward in any::<bool>(),
    ) {
        let dir = if backward { Direction::Backward } else { Direction::Forward };
        let to_f = |v: u64| v as f64 / 2f64.powi(53);
        let sys = TorusSkewSystem::example1(to_f(alpha));
        let fpts: Vec<TorusPoint> = pts.iter().map(|&(x, y)| [to_f(x), to_f(y)]).collect();
        let a = FinitePointSet::new(&sys, fpts).unwrap();
        prop_assume!(a.len() == pts.len());
        let closed = recurrence_scan(&sys, &a, 10_000, dir, true).unwrap();
        let fixed = FixedSkew { alpha: alpha << 11 };
        let upts: Vec<[u64; 2]> = pts.iter().map(|&(x, y)| [x << 11, y << 11]).collect();
        let b = FinitePointSet::new(&fixed, upts).unwrap();
        let exact = recurrence_scan(&fixed, &b, 10_000, dir, true).unwrap();
        prop_assert!(closed.used_closed_form && !exact.used_closed_form);
        let (p, q) = (closed.profile.unwrap(), exact.profile.unwrap());
        prop_assert_eq!(p.len(), q.len());
        for (x, y) in p.iter().zip(&q) {
            prop_assert!((x - y).abs() <= 1e-9, "{} vs {}", x, y);
        }
        prop_assert!(closed.displacement_violations.is_empty());
    }

    /// Plain double-precision stepping drifts by O(n^2 ulp) in the fibre, so
    /// it is compared against the closed form over a shorter horizon.
    #[test]
    fn scan_closed_form_matches_float_iteration(
        pts in prop::collection::vec(torus_pt(), 1..6),
        alpha in unit(),
    ) {
        let sys = TorusSkewSystem::example1(alpha);
        let a = FinitePointSet::new(&sys, pts.clone()).unwrap();
        let closed = recurrence_scan(&sys, &a, 1_000, Direction::Forward, true).unwrap();
        let it = Iterated(sys);
        let b = FinitePointSet::new(&it, pts).unwrap();
        let iter = recurrence_scan(&it, &b, 1_000, Direction::Forward, true).unwrap();
        for (x, y) in closed.profile.unwrap().iter().zip(&iter.profile.unwrap()) {
            prop_assert!((x - y).abs() <= 1e-9, "{} vs {}", x, y);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// `power(·, a + b) = power(power(·, a), b)`, exactly in rationals and
    /// within 1e-12 in floating point.
    #[test]
    fn example1_cocycle_law(
        xn in 0i64..1000, yn in 0i64..1000, an in 1i64..1000,
        a in 0i64..500, b in 0i64..500,
    ) {
        let r = |n: i64| BigRational::new(n.into(), 997.into());
        let (x, y, al) = (r(xn), r(yn), r(an));
        let (x1, y1) = example1_power_exact(&x, &y, &al, a);
        prop_assert_eq!(
            example1_power_exact(&x1, &y1, &al, b),
            example1_power_exact(&x, &y, &al, a + b)
        );
        let f = |n: i64| n as f64 / 997.0;
        let (fx, fy, fa) = (f(xn), f(yn), f(an));
        let (p, q) = example1_power(fx, fy, fa, a);
        let (p2, q2) = example1_power(p, q, fa, b);
        let (p3, q3) = example1_power(fx, fy, fa, a + b);
        let c = hyperrec::circle_systems::circle_distance;
        prop_assert!(c(p2, p3) < 1e-12 && c(q2, q3) < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// `S_{a+b}(x) = S_a(x) + S_b(x + aα)` within the combined radii.
    #[test]
    fn birkhoff_cocycle_identity(num in 0i64..1000, a in 1u64..5000, b in 1u64..5000) {
        let params = RigidSkewParams::default();
        let ctx = RigidContext::new(params).unwrap();
        let x = BigRational::new(num.into(), 1000.into());
        let (lo, width) = alpha_multiple(&BigInt::from(a), params.j);
        let shifted = &x + lo;
        let whole = ctx.birkhoff_closed(&x, &BigInt::from(a + b)).unwrap();
        let first = ctx.birkhoff_closed(&x, &BigInt::from(a)).unwrap();
        let second = ctx.birkhoff_closed(&shifted, &BigInt::from(b)).unwrap();
        // Moving the base point by `width` moves each of the K phase pairs by
        // at most 4π n_k width, and |d/dθ 2cos(2πθ)| <= 4π < 13.
        let drift = BigRational::from_integer(BigInt::from(13 * 2 * params.k) * nseq(params.k))
            * width;
        let residual = whole.sub(&first).sub(&second).widen(&drift);
        prop_assert!(residual.contains(&BigRational::from_integer(0.into())));
    }
}

#[test]
fn enclosures_nest_and_shrink() {
    let mut prev = alpha_enclosure(1).unwrap();
    for j in 2..=6 {
        let cur = alpha_enclosure(j).unwrap();
        assert!(prev.0 <= cur.0 && cur.1 <= prev.1, "J = {j}");
        prev = cur;
    }
    let m = nseq(2) * nseq(1);
    let widths: Vec<BigRational> = (1..=5).map(|j| alpha_multiple(&m, j).1).collect();
    assert!(widths.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn certificates_stable_under_depth() {
    for k in 1..=3 {
        for j in 3..=6 {
            assert!(check_smallness(k, None, j).unwrap().passes);
            for l in 2..=3 {
                assert!(check_smallness(k, Some(l), j).unwrap().passes);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn fs_cardinality(gens in prop::collection::btree_set(1u64..200, 1..8)) {
        let g: Vec<u64> = gens.into_iter().collect();
        let d = g.len();
        let fs = fs_set(&FsGenerators::new(g.clone()).unwrap(), u64::MAX - 1);
        prop_assert!(fs.len() < 1 << d);
        let mut sums: Vec<u64> = (1u32..(1 << d))
            .map(|mask| (0..d).filter(|i| mask >> i & 1 == 1).map(|i| g[i]).sum())
            .collect();
        sums.sort_unstable();
        let distinct = sums.windows(2).all(|w| w[0] != w[1]);
        prop_assert_eq!(fs.len() == (1 << d) - 1, distinct);
    }

    #[test]
    fn transfer_sets_grow_with_prefix(z in word_strategy(400), cut in 50usize..400, u in word_strategy(3), v in word_strategy(3)) {
        prop_assume!(cut <= z.len());
        let short = z.factor(0, cut);
        prop_assume!(short.contains(&u) && short.contains(&v));
        let a = transfer_set_symbolic(&short, &u, &v, 100).unwrap();
        let b = transfer_set_symbolic(&z, &u, &v, 100).unwrap();
        prop_assert!(a.is_subset(&b));
    }

    #[test]
    fn ip_shift_result_is_an_fs_element(
        bits in prop::collection::vec(any::<bool>(), 600),
        gens in prop::collection::btree_set(1u64..40, 1..4),
    ) {
        let j = IndexSet::new(
            bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64).collect(),
            600,
        ).unwrap();
        let g = FsGenerators::new(gens.into_iter().collect()).unwrap();
        let theta = BigRational::new(1.into(), 10.into());
        if let IpShift::Found { l, .. } = ip_shift_density(&j, &g, 600, &theta).unwrap() {
            prop_assert!(fs_set(&g, 600).contains(l));
        }
    }
}

/// Every reported pattern carries a word that realizes it.
#[test]
fn independence_witnesses_check_out() {
    let sturm = sturmian_word(4000);
    let (a, b): (Word, Word) = ("0".parse().unwrap(), "1".parse().unwrap());
    for (lang, window) in [(Language::Full, 40u64), (Language::Factors(sturm.clone()), 24)] {
        let r = independence_search(&lang, &a, &b, window, 5).unwrap();
        assert_eq!(r.witnesses.len(), 1 << r.core.len());
        for wit in &r.witnesses {
            let word: Word = wit.word.parse().unwrap();
            if let Language::Factors(z) = &lang {
                assert!(z.contains(&word));
            }
            for (&i, &p) in r.core.iter().zip(&wit.pattern) {
                let cyl = if p == 1 { &a } else { &b };
                assert!(word.matches_at(i as usize, cyl));
            }
        }
    }
}
