//! Binary sequence space `{0,1}^ℕ` resolved to cylinders of bounded depth.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Word = Vec<u8>;

pub fn word_str(w: &[u8]) -> String {
    if w.is_empty() {
        return "ε".into();
    }
    w.iter().map(|b| if *b == 0 { '0' } else { '1' }).collect()
}

pub fn parse_word(s: &str) -> Result<Word> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::Schema(format!("invalid bit `{c}` in word `{s}`"))),
        })
        .collect()
}

/// Sequence `prefix · cycle · cycle · …`, kept in canonical form so that equal
/// sequences compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EventuallyPeriodic {
    prefix: Word,
    cycle: Word,
}

impl EventuallyPeriodic {
    pub fn new(prefix: Word, cycle: Word) -> Self {
        assert!(!cycle.is_empty(), "cycle must be nonempty");
        let mut cycle = cycle;
        let n = cycle.len();
        for d in 1..=n {
            if n % d == 0 && (0..n).all(|i| cycle[i] == cycle[i % d]) {
                cycle.truncate(d);
                break;
            }
        }
        let mut prefix = prefix;
        while let (Some(&p), Some(&c)) = (prefix.last(), cycle.last()) {
            if p != c {
                break;
            }
            prefix.pop();
            cycle.rotate_right(1);
        }
        EventuallyPeriodic { prefix, cycle }
    }

    /// `w · b^∞`.
    pub fn padded(w: &[u8], b: u8) -> Self {
        Self::new(w.to_vec(), vec![b])
    }

    pub fn prefix(&self) -> &[u8] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[u8] {
        &self.cycle
    }

    pub fn bit(&self, i: usize) -> u8 {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    pub fn head(&self, n: usize) -> Word {
        (0..n).map(|i| self.bit(i)).collect()
    }

    /// First index where the two sequences differ.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        if self == other {
            return None;
        }
        let bound = self.prefix.len().max(other.prefix.len()) + 2 * self.cycle.len() * other.cycle.len();
        (0..bound).find(|&i| self.bit(i) != other.bit(i))
    }

    /// Standard metric `2^-k`, `k` the first differing index.
    pub fn distance(&self, other: &Self) -> f64 {
        match self.first_difference(other) {
            None => 0.0,
            Some(k) => 0.5f64.powi(k as i32),
        }
    }

    pub fn in_cylinder(&self, w: &[u8]) -> bool {
        w.iter().enumerate().all(|(i, &b)| self.bit(i) == b)
    }
}

impl Ord for EventuallyPeriodic {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.first_difference(other) {
            None => Ordering::Equal,
            Some(k) => self.bit(k).cmp(&other.bit(k)),
        }
    }
}

impl PartialOrd for EventuallyPeriodic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for EventuallyPeriodic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.prefix.is_empty() {
            write!(f, "({})^inf", word_str(&self.cycle))
        } else {
            write!(f, "{}({})^inf", word_str(&self.prefix), word_str(&self.cycle))
        }
    }
}

/// Finite union of cylinders `[w]` together with finitely many points.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CylinderSet {
    pub words: Vec<Word>,
    pub points: Vec<EventuallyPeriodic>,
}

fn is_prefix(a: &[u8], b: &[u8]) -> bool {
    a.len() <= b.len() && b[..a.len()] == *a
}

impl CylinderSet {
    pub fn new(words: Vec<Word>, points: Vec<EventuallyPeriodic>) -> Self {
        let mut s = CylinderSet { words, points };
        s.words.sort();
        s.words.dedup();
        s.points.sort();
        s.points.dedup();
        s
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty() && self.points.is_empty()
    }

    pub fn contains(&self, x: &EventuallyPeriodic) -> bool {
        self.words.iter().any(|w| x.in_cylinder(w)) || self.points.contains(x)
    }

    /// `[w] ⊆ words`, decided by splitting `w` down to the longest word.
    pub fn covers_cylinder(&self, w: &[u8]) -> bool {
        if self.words.iter().any(|u| is_prefix(u, w)) {
            return true;
        }
        let max = self.words.iter().map(Vec::len).max().unwrap_or(0);
        if w.len() >= max || !self.words.iter().any(|u| is_prefix(w, u)) {
            return false;
        }
        let mut w0 = w.to_vec();
        w0.push(0);
        let mut w1 = w.to_vec();
        w1.push(1);
        self.covers_cylinder(&w0) && self.covers_cylinder(&w1)
    }

    pub fn is_full(&self) -> bool {
        self.covers_cylinder(&[])
    }

    pub fn disjoint_from_cylinder(&self, w: &[u8]) -> bool {
        !self.words.iter().any(|u| is_prefix(u, w) || is_prefix(w, u)) && !self.points.iter().any(|p| p.in_cylinder(w))
    }

    /// Points not lying in any of the cylinders.
    pub fn uncovered_points(&self) -> Vec<&EventuallyPeriodic> {
        self.points.iter().filter(|p| !self.words.iter().any(|w| p.in_cylinder(w))).collect()
    }

    /// A finite union of cylinders is clopen; an uncovered point is not open.
    pub fn is_clopen(&self) -> bool {
        self.uncovered_points().is_empty()
    }

    /// Distance from `x` to the set, exact on cylinders and points.
    pub fn distance(&self, x: &EventuallyPeriodic) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::EmptySet);
        }
        if self.contains(x) {
            return Ok(0.0);
        }
        let mut best = f64::INFINITY;
        for w in &self.words {
            let k = (0..w.len()).find(|&i| x.bit(i) != w[i]).unwrap_or(w.len());
            best = best.min(0.5f64.powi(k as i32));
        }
        for p in &self.points {
            best = best.min(x.distance(p));
        }
        Ok(best)
    }
}

impl fmt::Display for CylinderSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.words.iter().map(|w| format!("[{}]", word_str(w))).collect();
        parts.extend(self.points.iter().map(|p| format!("{{{p}}}")));
        if parts.is_empty() {
            write!(f, "∅")
        } else {
            write!(f, "{}", parts.join(" ∪ "))
        }
    }
}

/// Binary sequence space at cylinder depth `depth`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CylinderSpace {
    pub depth: usize,
}

impl CylinderSpace {
    pub fn new(depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::DepthTooSmall(depth));
        }
        Ok(CylinderSpace { depth })
    }

    pub fn words(&self, len: usize) -> impl Iterator<Item = Word> {
        (0u64..1 << len).map(move |k| (0..len).map(|i| ((k >> (len - 1 - i)) & 1) as u8).collect())
    }

    /// Sample cloud: `w0^∞` and `w1^∞` for every word of full depth, plus the
    /// given extra points.
    pub fn cloud(&self, extra: &[EventuallyPeriodic]) -> Vec<EventuallyPeriodic> {
        let mut out: Vec<EventuallyPeriodic> = self
            .words(self.depth)
            .flat_map(|w| [EventuallyPeriodic::padded(&w, 0), EventuallyPeriodic::padded(&w, 1)])
            .chain(extra.iter().cloned())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Random closed set: 1–3 cylinders of length 3..=depth and 1–3 eventually
    /// periodic points. Proper and not clopen.
    pub fn random_nonclopen<R: Rng>(&self, rng: &mut R) -> CylinderSet {
        let min_len = 3.min(self.depth);
        loop {
            let words = (0..rng.gen_range(1..=3))
                .map(|_| (0..rng.gen_range(min_len..=self.depth)).map(|_| rng.gen_range(0..2u8)).collect())
                .collect();
            let points = (0..rng.gen_range(1..=3))
                .map(|_| {
                    let prefix = (0..rng.gen_range(0..=self.depth)).map(|_| rng.gen_range(0..2u8)).collect();
                    let cycle = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..2u8)).collect();
                    EventuallyPeriodic::new(prefix, cycle)
                })
                .collect();
            let set = CylinderSet::new(words, points);
            if !set.is_clopen() && !set.is_full() {
                return set;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ep(p: &str, c: &str) -> EventuallyPeriodic {
        EventuallyPeriodic::new(parse_word(p).unwrap(), parse_word(c).unwrap())
    }

    #[test]
    fn canonical_form_identifies_equal_sequences() {
        assert_eq!(ep("0101", "01"), ep("", "01"));
        assert_eq!(ep("1", "0000"), ep("10", "0"));
        assert_eq!(ep("", "0110"), ep("0", "1100"));
        assert_ne!(ep("", "01"), ep("", "10"));
    }

    #[test]
    fn distance_is_first_difference() {
        assert_eq!(ep("", "0").distance(&ep("001", "0")), 0.25);
        assert_eq!(ep("1", "0").distance(&ep("0", "0")), 1.0);
        assert_eq!(ep("", "01").distance(&ep("0101", "01")), 0.0);
    }

    #[test]
    fn clopen_iff_points_covered() {
        let a = CylinderSet::new(vec![parse_word("0").unwrap()], vec![]);
        assert!(a.is_clopen() && !a.is_full());
        let b = CylinderSet::new(vec![parse_word("0").unwrap()], vec![ep("1", "0")]);
        assert!(!b.is_clopen());
        let c = CylinderSet::new(vec![parse_word("0").unwrap(), parse_word("1").unwrap()], vec![]);
        assert!(c.is_full());
        let d = CylinderSet::new(vec![parse_word("00").unwrap(), parse_word("01").unwrap()], vec![]);
        assert!(d.covers_cylinder(&[0]) && !d.covers_cylinder(&[]));
    }

    #[test]
    fn ordering_is_lexicographic() {
        assert!(ep("", "0") < ep("", "01"));
        assert!(ep("0", "1") < ep("1", "0"));
    }
}
