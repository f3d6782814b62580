//! The full shift on `{0,1}^N` restricted to eventually periodic points,
//! with `d(x, y) = 2^{-min{i : x_i != y_i}}`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use super::MetricSystem;
use crate::error::{Error, Result};
use crate::words::Word;

/// The eventually periodic sequence `prefix · period^∞`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ShiftPoint {
    prefix: Word,
    period: Word,
}

impl ShiftPoint {
    pub fn new(prefix: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidInput("period must be non-empty".into()));
        }
        Ok(ShiftPoint { prefix, period })
    }

    /// `0^∞`.
    pub fn zeros() -> Self {
        ShiftPoint {
            prefix: Word::new(),
            period: Word::zeros(1),
        }
    }

    pub fn prefix(&self) -> &Word {
        &self.prefix
    }

    pub fn period(&self) -> &Word {
        &self.period
    }

    pub fn symbol(&self, i: usize) -> bool {
        if i < self.prefix.len() {
            self.prefix.get(i)
        } else {
            self.period.get((i - self.prefix.len()) % self.period.len())
        }
    }

    /// First index where the sequences differ, if any.
    pub fn first_difference(&self, other: &ShiftPoint) -> Option<usize> {
        let bound = self.prefix.len().max(other.prefix.len())
            + self.period.len().lcm(&other.period.len());
        (0..bound).find(|&i| self.symbol(i) != other.symbol(i))
    }

    /// `σ^n`.
    pub fn shifted(&self, n: u64) -> ShiftPoint {
        let n = n as usize;
        let plen = self.prefix.len();
        if n < plen {
            return ShiftPoint {
                prefix: self.prefix.factor(n, plen - n),
                period: self.period.clone(),
            };
        }
        let q = self.period.len();
        let off = (n - plen) % q;
        let mut period = self.period.factor(off, q - off);
        period.append(&self.period.factor(0, off));
        ShiftPoint {
            prefix: Word::new(),
            period,
        }
    }
}

impl fmt::Display for ShiftPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.prefix, self.period)
    }
}

impl fmt::Debug for ShiftPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `u(v)` is `u v v v ...`; a bare word `u` is `u 0^∞`.
impl FromStr for ShiftPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.find('(') {
            Some(open) => {
                let inner = s[open + 1..]
                    .strip_suffix(')')
                    .ok_or_else(|| Error::InvalidInput(format!("unbalanced period in {s:?}")))?;
                ShiftPoint::new(s[..open].parse()?, inner.parse()?)
            }
            None => ShiftPoint::new(s.parse()?, Word::zeros(1)),
        }
    }
}

/// The one-sided full shift on two symbols. Not invertible.
#[derive(Clone, Copy, Debug, Default)]
pub struct FullShift;

impl MetricSystem for FullShift {
    type Point = ShiftPoint;

    fn space(&self) -> String {
        "full-shift".into()
    }

    fn distance(&self, a: &ShiftPoint, b: &ShiftPoint) -> f64 {
        match a.first_difference(b) {
            None => 0.0,
            Some(i) => 0.5f64.powi(i as i32),
        }
    }

    fn step(&self, x: &ShiftPoint) -> ShiftPoint {
        x.shifted(1)
    }

    fn power(&self, x: &ShiftPoint, n: i64) -> Option<ShiftPoint> {
        (n >= 0).then(|| x.shifted(n as u64))
    }

    /// Points agreeing with the centre on the first `m` symbols, where
    /// `2^{-m} <= radius`, followed by every tail in a small catalogue.
    fn ball_net(&self, center: &ShiftPoint, radius: f64) -> Option<Vec<ShiftPoint>> {
        if radius >= 1.0 {
            return Some(
                ["(0)", "(1)", "(01)", "(10)", "(001)", "(011)"]
                    .iter()
                    .map(|s| s.parse().expect("catalogue parses"))
                    .collect(),
            );
        }
        let m = (-radius.log2()).ceil().max(0.0) as usize;
        let head = Word::from_bits((0..m).map(|i| center.symbol(i)));
        let mut net = vec![center.clone()];
        for tail in ["0", "1", "01", "10", "001", "011"] {
            let tail: Word = tail.parse().expect("catalogue parses");
            net.push(ShiftPoint::new(head.clone(), tail).expect("non-empty"));
        }
        Some(net)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> ShiftPoint {
        s.parse().unwrap()
    }

    #[test]
    fn metric_on_prefixes() {
        let f = FullShift;
        assert_eq!(f.distance(&p("(0)"), &p("(0)")), 0.0);
        assert_eq!(f.distance(&p("(0)"), &p("(1)")), 1.0);
        assert_eq!(f.distance(&p("001(0)"), &p("(0)")), 0.25);
        assert_eq!(f.distance(&p("(01)"), &p("0101(01)")), 0.0);
    }

    #[test]
    fn shift_is_closed_form() {
        let f = FullShift;
        let x = p("110(01)");
        let mut y = x.clone();
        for n in 0..12 {
            assert_eq!(f.distance(&y, &f.power(&x, n).unwrap()), 0.0, "n={n}");
            y = f.step(&y);
        }
        assert!(f.power(&x, -1).is_none());
        assert_eq!(p("0011").to_string(), "0011(0)");
    }
}
