//! Finite binary words, prefixes of infinite sequences and the factor
//! statistics used by every symbolic construction.
//!
//! Words are bit-packed (symbol `i` lives in bit `i % 64` of limb `i / 64`).
//! Positions are `u64`; level-2 prefixes already run past a million symbols.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite word over `{0, 1}`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    limbs: Vec<u64>,
    len: usize,
}

impl Word {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(symbols: usize) -> Self {
        Word {
            limbs: Vec::with_capacity(symbols.div_ceil(64)),
            len: 0,
        }
    }

    /// `0^k`.
    pub fn zeros(k: usize) -> Self {
        Word {
            limbs: vec![0; k.div_ceil(64)],
            len: k,
        }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut w = Word::new();
        for b in bits {
            w.push(b);
        }
        w
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.limbs[i >> 6] >> (i & 63)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "index {i} out of range for word of length {}", self.len);
        let mask = 1u64 << (i & 63);
        if bit {
            self.limbs[i >> 6] |= mask;
        } else {
            self.limbs[i >> 6] &= !mask;
        }
    }

    pub fn push(&mut self, bit: bool) {
        if self.len & 63 == 0 {
            self.limbs.push(0);
        }
        if bit {
            self.limbs[self.len >> 6] |= 1 << (self.len & 63);
        }
        self.len += 1;
    }

    /// Appends `k` zeros.
    pub fn push_zeros(&mut self, k: usize) {
        self.len += k;
        self.limbs.resize(self.len.div_ceil(64), 0);
    }

    pub fn append(&mut self, other: &Word) {
        if self.len & 63 == 0 {
            self.limbs.truncate(self.len >> 6);
            self.limbs.extend_from_slice(&other.limbs);
            self.len += other.len;
            return;
        }
        let mut i = 0;
        while i < other.len {
            let take = (other.len - i).min(64);
            let chunk = other.window(i, take);
            self.push_chunk(chunk, take);
            i += take;
        }
    }

    fn push_chunk(&mut self, chunk: u64, count: usize) {
        let off = self.len & 63;
        if off == 0 {
            self.limbs.push(chunk);
        } else {
            let last = self.limbs.len() - 1;
            self.limbs[last] |= chunk << off;
            if off + count > 64 {
                self.limbs.push(chunk >> (64 - off));
            }
        }
        self.len += count;
        self.limbs.truncate(self.len.div_ceil(64));
    }

    /// Concatenation of the given words.
    pub fn concat<'a, I: IntoIterator<Item = &'a Word>>(parts: I) -> Word {
        let mut w = Word::new();
        for p in parts {
            w.append(p);
        }
        w
    }

    /// Up to 64 symbols starting at `start`, packed LSB-first. Symbols past
    /// the end read as 0.
    #[inline]
    pub fn window(&self, start: usize, count: usize) -> u64 {
        debug_assert!(count <= 64);
        if count == 0 || start >= self.len {
            return 0;
        }
        let limb = start >> 6;
        let off = start & 63;
        let mut v = self.limbs[limb] >> off;
        if off != 0 && limb + 1 < self.limbs.len() {
            v |= self.limbs[limb + 1] << (64 - off);
        }
        if count < 64 {
            v &= (1u64 << count) - 1;
        }
        v
    }

    /// The factor `self[start .. start + len)`.
    pub fn factor(&self, start: usize, len: usize) -> Word {
        assert!(start + len <= self.len, "factor out of range");
        let mut w = Word::with_capacity(len);
        let mut i = 0;
        while i < len {
            let take = (len - i).min(64);
            w.push_chunk(self.window(start + i, take), take);
            i += take;
        }
        w
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// `|w|_1`.
    pub fn ones(&self) -> u64 {
        self.limbs.iter().map(|l| u64::from(l.count_ones())).sum()
    }

    pub fn zeros_count(&self) -> u64 {
        self.len as u64 - self.ones()
    }

    /// Positions of every 1, in increasing order.
    pub fn one_positions(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for (li, &limb) in self.limbs.iter().enumerate() {
            let mut bits = limb;
            while bits != 0 {
                let tz = bits.trailing_zeros() as u64;
                out.push((li as u64) * 64 + tz);
                bits &= bits - 1;
            }
        }
        out
    }

    /// Exact `|w|_1 / |w|`.
    pub fn ones_ratio(&self) -> Result<BigRational> {
        ones_ratio(self)
    }

    pub fn starts_with(&self, other: &Word) -> bool {
        other.len <= self.len && self.matches_at(0, other)
    }

    pub fn ends_with(&self, other: &Word) -> bool {
        other.len <= self.len && self.matches_at(self.len - other.len, other)
    }

    /// Whether `pattern` occurs at `pos`.
    pub fn matches_at(&self, pos: usize, pattern: &Word) -> bool {
        if pos + pattern.len > self.len {
            return false;
        }
        let mut i = 0;
        while i < pattern.len {
            let take = (pattern.len - i).min(64);
            if self.window(pos + i, take) != pattern.window(i, take) {
                return false;
            }
            i += take;
        }
        true
    }

    pub fn contains(&self, pattern: &Word) -> bool {
        self.find_first(pattern).is_some()
    }

    pub fn find_first(&self, pattern: &Word) -> Option<u64> {
        let mut found = None;
        self.scan_occurrences(pattern, |p| {
            found = Some(p);
            false
        });
        found
    }

    /// All positions where `pattern` occurs, increasing.
    pub fn find_all(&self, pattern: &Word) -> Vec<u64> {
        let mut out = Vec::new();
        self.scan_occurrences(pattern, |p| {
            out.push(p);
            true
        });
        out
    }

    /// Calls `f` on each occurrence until it returns `false`.
    fn scan_occurrences<F: FnMut(u64) -> bool>(&self, pattern: &Word, mut f: F) {
        let m = pattern.len;
        if m == 0 || m > self.len {
            return;
        }
        if m <= 64 {
            let target = pattern.window(0, m);
            for p in 0..=(self.len - m) {
                if self.window(p, m) == target && !f(p as u64) {
                    return;
                }
            }
            return;
        }
        // Knuth-Morris-Pratt for long patterns.
        let mut fail = vec![0usize; m];
        let mut k = 0;
        for i in 1..m {
            while k > 0 && pattern.get(i) != pattern.get(k) {
                k = fail[k - 1];
            }
            if pattern.get(i) == pattern.get(k) {
                k += 1;
            }
            fail[i] = k;
        }
        let mut q = 0;
        for i in 0..self.len {
            let b = self.get(i);
            while q > 0 && pattern.get(q) != b {
                q = fail[q - 1];
            }
            if pattern.get(q) == b {
                q += 1;
            }
            if q == m {
                if !f((i + 1 - m) as u64) {
                    return;
                }
                q = fail[q - 1];
            }
        }
    }

    /// Occurrence indicator: bit `p` is set iff `pattern` starts at `p`.
    pub fn occurrence_mask(&self, pattern: &Word) -> Word {
        let mut mask = Word::zeros(self.len);
        self.scan_occurrences(pattern, |p| {
            mask.set(p as usize, true);
            true
        });
        mask
    }

    /// Flip the symbol at `i` (fault injection in tests and the corpus runner).
    pub fn flip(&mut self, i: usize) {
        let b = self.get(i);
        self.set(i, !b);
    }

    /// Whether some set bit `p` of `self` has bit `p + shift` set in `other`.
    pub fn any_shifted_overlap(&self, other: &Word, shift: usize) -> bool {
        if shift >= other.len {
            return false;
        }
        let span = self.len.min(other.len - shift);
        let mut i = 0;
        while i < span {
            let take = (span - i).min(64);
            if self.window(i, take) & other.window(i + shift, take) != 0 {
                return true;
            }
            i += take;
        }
        false
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.iter().map(|b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len <= 96 {
            write!(f, "Word({self})")
        } else {
            write!(f, "Word(len={}, ones={})", self.len, self.ones())
        }
    }
}

impl Ord for Word {
    /// Lexicographic order on the symbol sequence, a proper prefix first.
    fn cmp(&self, other: &Self) -> Ordering {
        let common = self.len.min(other.len);
        let mut i = 0;
        while i < common {
            let take = (common - i).min(64);
            let a = self.window(i, take);
            let b = other.window(i, take);
            if a != b {
                let first = (a ^ b).trailing_zeros();
                return if (a >> first) & 1 == 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
            i += take;
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Accepts `0`/`1` strings with optional run-length atoms `0^k`, `1^{k}`;
    /// whitespace, `+` and `·` separate atoms.
    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().collect();
        let mut w = Word::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            match c {
                '0' | '1' => {
                    let bit = c == '1';
                    i += 1;
                    if i < chars.len() && chars[i] == '^' {
                        i += 1;
                        let braced = i < chars.len() && chars[i] == '{';
                        if braced {
                            i += 1;
                        }
                        let start = i;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                        if start == i {
                            return Err(Error::InvalidInput(format!(
                                "missing repeat count in word {s:?}"
                            )));
                        }
                        let k: usize = chars[start..i]
                            .iter()
                            .collect::<String>()
                            .parse()
                            .map_err(|e| Error::InvalidInput(format!("bad repeat count: {e}")))?;
                        if braced {
                            if i >= chars.len() || chars[i] != '}' {
                                return Err(Error::InvalidInput(format!(
                                    "unclosed brace in word {s:?}"
                                )));
                            }
                            i += 1;
                        }
                        if bit {
                            for _ in 0..k {
                                w.push(true);
                            }
                        } else {
                            w.push_zeros(k);
                        }
                    } else {
                        w.push(bit);
                    }
                }
                c if c.is_whitespace() || c == '+' || c == '·' => i += 1,
                other => {
                    return Err(Error::InvalidInput(format!(
                        "unexpected character {other:?} in word {s:?}"
                    )))
                }
            }
        }
        Ok(w)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Exact `|w|_1 / |w|`.
pub fn ones_ratio(w: &Word) -> Result<BigRational> {
    if w.is_empty() {
        return Err(Error::InvalidInput("ones_ratio of the empty word".into()));
    }
    Ok(BigRational::new(
        BigInt::from(w.ones()),
        BigInt::from(w.len() as u64),
    ))
}

/// A finite prefix standing in for a point of a subshift.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrefixApprox {
    pub prefix: Word,
    /// Tag naming the generating construction and its parameters.
    pub origin: String,
    pub depth: usize,
}

impl PrefixApprox {
    pub fn new(prefix: Word, origin: impl Into<String>, depth: usize) -> Self {
        PrefixApprox {
            prefix,
            origin: origin.into(),
            depth,
        }
    }

    pub fn len(&self) -> usize {
        self.prefix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefix.is_empty()
    }
}

/// Length-`n` factors lying entirely inside the prefix, sorted.
///
/// This under-approximates `L_n` of the subshift the prefix came from.
pub fn language(p: &PrefixApprox, n: usize) -> Result<BTreeSet<Word>> {
    factors(&p.prefix, n)
}

/// Length-`n` factors of an arbitrary word.
pub fn factors(w: &Word, n: usize) -> Result<BTreeSet<Word>> {
    if n > w.len() {
        return Err(Error::InvalidInput(format!(
            "factor length {n} exceeds prefix length {}",
            w.len()
        )));
    }
    if n == 0 {
        return Ok(BTreeSet::from([Word::new()]));
    }
    if n <= 64 {
        let keys: HashSet<u64> = (0..=w.len() - n).map(|p| w.window(p, n)).collect();
        Ok(keys
            .into_iter()
            .map(|k| Word::from_bits((0..n).map(|i| (k >> i) & 1 == 1)))
            .collect())
    } else {
        Ok((0..=w.len() - n).map(|p| w.factor(p, n)).collect())
    }
}

/// Occurrence positions of a word in a prefix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Occurrences {
    pub positions: Vec<u64>,
    /// Largest difference between consecutive positions; `None` with fewer
    /// than two occurrences.
    pub max_gap: Option<u64>,
}

impl Occurrences {
    pub fn is_absent(&self) -> bool {
        self.positions.is_empty()
    }
}

pub fn occurrences(p: &PrefixApprox, w: &Word) -> Result<Occurrences> {
    if w.is_empty() {
        return Err(Error::InvalidInput("occurrences of the empty word".into()));
    }
    if w.len() > p.len() {
        return Err(Error::InvalidInput(format!(
            "word length {} exceeds prefix length {}",
            w.len(),
            p.len()
        )));
    }
    let positions = p.prefix.find_all(w);
    Ok(Occurrences {
        max_gap: max_gap(&positions),
        positions,
    })
}

pub(crate) fn max_gap(positions: &[u64]) -> Option<u64> {
    positions.windows(2).map(|w| w[1] - w[0]).max()
}

/// For each count `c >= 1`, the length of the shortest factor with `c` ones,
/// given the increasing positions of all ones. Entry `c - 1` holds count `c`.
pub(crate) fn shortest_spans(ones: &[u64]) -> Vec<u64> {
    (1..=ones.len())
        .map(|c| {
            ones.windows(c)
                .map(|w| w[c - 1] - w[0] + 1)
                .min()
                .expect("non-empty window set")
        })
        .collect()
}

/// Largest number of ones in a factor of length `m`, from `shortest_spans`.
pub(crate) fn max_ones_in_window(spans: &[u64], m: u64) -> u64 {
    spans.partition_point(|&s| s <= m) as u64
}
