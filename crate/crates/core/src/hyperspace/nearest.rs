//! Accelerated directed Hausdorff distances on the circle and the torus.
//!
//! Both return exactly the brute-force value; the acceleration only prunes
//! candidates that provably cannot be nearer.

use rayon::prelude::*;

/// A point of `T² = R²/Z²`.
pub type TorusPoint = [f64; 2];

/// `min(|a - b|, 1 - |a - b|)` on representatives mod 1; exactly symmetric.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).abs() % 1.0;
    d.min(1.0 - d)
}

/// Max of the two coordinate circle distances.
pub fn torus_distance(a: &TorusPoint, b: &TorusPoint) -> f64 {
    circle_distance(a[0], b[0]).max(circle_distance(a[1], b[1]))
}

const PAR_THRESHOLD: usize = 1 << 12;

/// `max_{a in from} min_{b in to} d(a, b)` on the circle via binary search.
pub fn circle_directed_hausdorff(from: &[f64], to: &[f64]) -> f64 {
    if from.is_empty() {
        return 0.0;
    }
    if to.is_empty() {
        return f64::INFINITY;
    }
    let mut sorted: Vec<f64> = to.iter().map(|x| x.rem_euclid(1.0)).collect();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let nearest = |a: &f64| {
        let a = a.rem_euclid(1.0);
        let i = sorted.partition_point(|&y| y < a);
        let hi = sorted[i % n];
        let lo = sorted[(i + n - 1) % n];
        circle_distance(a, hi).min(circle_distance(a, lo))
    };
    if from.len() >= PAR_THRESHOLD {
        from.par_iter().map(nearest).reduce(|| 0.0, f64::max)
    } else {
        from.iter().map(nearest).fold(0.0, f64::max)
    }
}

/// Circle distance from `q` to the arc `[lo, hi]` (`0 <= lo <= hi < 1`), a
/// lower bound for `circle_distance(q, p)` at every `p` in the arc.
fn arc_distance(q: f64, lo: f64, hi: f64) -> f64 {
    if lo <= q && q <= hi {
        0.0
    } else {
        circle_distance(q, lo).min(circle_distance(q, hi))
    }
}

/// Absorbs the rounding of reducing coordinates into `[0, 1)`, so pruning by
/// box bounds never discards the true nearest point.
const BOX_MARGIN: f64 = 1e-15;

const LEAF_SIZE: usize = 8;

struct KdNode {
    /// `[xmin, xmax, ymin, ymax]` of the reduced coordinates.
    bbox: [f64; 4],
    start: usize,
    end: usize,
    children: Option<(usize, usize)>,
}

/// k-d tree over the torus with tight bounding boxes. Points are kept in
/// their original representation, so distances match brute force exactly.
struct KdTree {
    nodes: Vec<KdNode>,
    points: Vec<TorusPoint>,
}

impl KdTree {
    fn new(pts: &[TorusPoint]) -> Self {
        let mut order: Vec<(TorusPoint, TorusPoint)> = pts
            .iter()
            .map(|p| ([p[0].rem_euclid(1.0), p[1].rem_euclid(1.0)], *p))
            .collect();
        let mut nodes = Vec::with_capacity(2 * pts.len() / LEAF_SIZE + 1);
        Self::build(&mut order, 0, &mut nodes);
        KdTree {
            nodes,
            points: order.iter().map(|o| o.1).collect(),
        }
    }

    fn build(slice: &mut [(TorusPoint, TorusPoint)], offset: usize, nodes: &mut Vec<KdNode>) -> usize {
        let mut bbox = [f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY];
        for (r, _) in slice.iter() {
            bbox[0] = bbox[0].min(r[0]);
            bbox[1] = bbox[1].max(r[0]);
            bbox[2] = bbox[2].min(r[1]);
            bbox[3] = bbox[3].max(r[1]);
        }
        let id = nodes.len();
        nodes.push(KdNode {
            bbox,
            start: offset,
            end: offset + slice.len(),
            children: None,
        });
        let spread = (bbox[1] - bbox[0], bbox[3] - bbox[2]);
        if slice.len() > LEAF_SIZE && (spread.0 > 0.0 || spread.1 > 0.0) {
            let axis = usize::from(spread.1 > spread.0);
            let mid = slice.len() / 2;
            slice.select_nth_unstable_by(mid, |a, b| a.0[axis].total_cmp(&b.0[axis]));
            let (left, right) = slice.split_at_mut(mid);
            let l = Self::build(left, offset, nodes);
            let r = Self::build(right, offset + mid, nodes);
            nodes[id].children = Some((l, r));
        }
        id
    }

    fn lower_bound(&self, node: usize, q: &TorusPoint) -> f64 {
        let b = &self.nodes[node].bbox;
        arc_distance(q[0], b[0], b[1]).max(arc_distance(q[1], b[2], b[3])) - BOX_MARGIN
    }

    /// Nearest distance from `q`, or any value `<= stop` once one is found.
    /// `stack` is scratch space reused across queries.
    fn nearest(&self, q: &TorusPoint, stop: f64, stack: &mut Vec<(usize, f64)>) -> f64 {
        let qr = [q[0].rem_euclid(1.0), q[1].rem_euclid(1.0)];
        let mut best = f64::INFINITY;
        stack.clear();
        stack.push((0, self.lower_bound(0, &qr)));
        while let Some((node, lb)) = stack.pop() {
            if lb >= best {
                continue;
            }
            let n = &self.nodes[node];
            match n.children {
                None => {
                    for p in &self.points[n.start..n.end] {
                        best = best.min(torus_distance(p, q));
                    }
                    if best <= stop {
                        return best;
                    }
                }
                Some((l, r)) => {
                    let (dl, dr) = (self.lower_bound(l, &qr), self.lower_bound(r, &qr));
                    // visit the nearer child first
                    if dl <= dr {
                        stack.push((r, dr));
                        stack.push((l, dl));
                    } else {
                        stack.push((l, dl));
                        stack.push((r, dr));
                    }
                }
            }
        }
        best
    }
}

/// `max_{a in from} min_{b in to} d(a, b)` on the torus with the max metric.
pub fn torus_directed_hausdorff(from: &[TorusPoint], to: &[TorusPoint]) -> f64 {
    if from.is_empty() {
        return 0.0;
    }
    if to.is_empty() {
        return f64::INFINITY;
    }
    let tree = KdTree::new(to);
    let chunk_max = |chunk: &[TorusPoint]| {
        let mut cmax = 0.0f64;
        let mut stack = Vec::with_capacity(64);
        for q in chunk {
            let d = tree.nearest(q, cmax, &mut stack);
            if d > cmax {
                cmax = d;
            }
        }
        cmax
    };
    if from.len() >= PAR_THRESHOLD {
        from.par_chunks(512).map(chunk_max).reduce(|| 0.0, f64::max)
    } else {
        chunk_max(from)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute<P>(from: &[P], to: &[P], d: impl Fn(&P, &P) -> f64) -> f64 {
        from.iter()
            .map(|a| to.iter().map(|b| d(a, b)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    }

    #[test]
    fn circle_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let a: Vec<f64> = (0..rng.gen_range(1..40)).map(|_| rng.gen()).collect();
            let b: Vec<f64> = (0..rng.gen_range(1..40)).map(|_| rng.gen()).collect();
            let fast = circle_directed_hausdorff(&a, &b);
            let slow = brute(&a, &b, |x, y| circle_distance(*x, *y));
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn torus_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for round in 0..60 {
            let n = if round % 3 == 0 { 2000 } else { rng.gen_range(1..300) };
            let a: Vec<TorusPoint> = (0..n).map(|_| [rng.gen(), rng.gen()]).collect();
            let m = rng.gen_range(1..500);
            let mut b: Vec<TorusPoint> = (0..m).map(|_| [rng.gen(), rng.gen()]).collect();
            if round % 2 == 0 {
                // clustered targets stress the ring search
                for p in &mut b {
                    p[0] *= 0.05;
                }
            }
            let fast = torus_directed_hausdorff(&a, &b);
            let slow = brute(&a, &b, torus_distance);
            assert_eq!(fast, slow, "round {round}");
        }
    }

    #[test]
    fn torus_degenerate_sets_match_brute_force() {
        let line: Vec<TorusPoint> = (0..512).map(|i| [i as f64 / 512.0, 0.25]).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let other: Vec<TorusPoint> = (0..700).map(|_| [rng.gen(), rng.gen::<f64>() * 3.0 - 1.0]).collect();
        let dup = vec![[0.5, 0.5]; 40];
        for (a, b) in [(&line, &other), (&other, &line), (&dup, &other), (&other, &dup)] {
            assert_eq!(torus_directed_hausdorff(a, b), brute(a, b, torus_distance));
        }
    }

    #[test]
    fn wraparound_distance() {
        assert!((circle_distance(0.95, 0.05) - 0.1).abs() < 1e-15);
        assert!((torus_distance(&[0.99, 0.5], &[0.01, 0.45]) - 0.05).abs() < 1e-12);
    }
}
