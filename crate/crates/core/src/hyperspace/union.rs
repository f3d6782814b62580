//! Disjoint union of copies of a system; points in different components are
//! at distance 1, which keeps the triangle inequality whenever each
//! component has diameter at most 1.

use super::MetricSystem;

#[derive(Clone, Debug)]
pub struct DisjointUnion<S> {
    parts: Vec<S>,
}

impl<S: MetricSystem> DisjointUnion<S> {
    pub fn new(parts: Vec<S>) -> Self {
        DisjointUnion { parts }
    }

    pub fn parts(&self) -> &[S] {
        &self.parts
    }
}

impl<S: MetricSystem> MetricSystem for DisjointUnion<S> {
    type Point = (usize, S::Point);

    fn space(&self) -> String {
        let inner: Vec<String> = self.parts.iter().map(MetricSystem::space).collect();
        format!("union[{}]", inner.join(","))
    }

    fn distance(&self, a: &Self::Point, b: &Self::Point) -> f64 {
        if a.0 == b.0 {
            self.parts[a.0].distance(&a.1, &b.1)
        } else {
            1.0
        }
    }

    fn step(&self, x: &Self::Point) -> Self::Point {
        (x.0, self.parts[x.0].step(&x.1))
    }

    fn inverse_step(&self, x: &Self::Point) -> Option<Self::Point> {
        self.parts[x.0].inverse_step(&x.1).map(|p| (x.0, p))
    }

    fn power(&self, x: &Self::Point, n: i64) -> Option<Self::Point> {
        self.parts[x.0].power(&x.1, n).map(|p| (x.0, p))
    }
}
