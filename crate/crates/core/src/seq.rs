//! Bi-infinite eventually periodic sequences `... left left mid right right ...`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, LabeledGraph, Letter};

/// A bi-infinite sequence that repeats `left` to the left of position
/// `origin` and `right` after `mid` ends. Both cycles are nonempty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct EpSeq<T> {
    pub left: Vec<T>,
    pub mid: Vec<T>,
    pub right: Vec<T>,
    pub origin: i64,
}

/// A point `u^∞ . w v^∞` of a shift; position 0 is the first letter of `w`.
pub type Point = EpSeq<Letter>;

/// An eventually periodic path, as a sequence of edge ids.
pub type EpPath = EpSeq<EdgeId>;

impl<T: Clone + PartialEq> EpSeq<T> {
    pub fn new(left: Vec<T>, mid: Vec<T>, right: Vec<T>, origin: i64) -> Result<Self> {
        if left.is_empty() || right.is_empty() {
            return Err(Error::InvalidSequence("periodic parts must be nonempty".into()));
        }
        Ok(EpSeq { left, mid, right, origin })
    }

    /// `u^∞ . w v^∞`.
    pub fn point(u: Vec<T>, w: Vec<T>, v: Vec<T>) -> Result<Self> {
        Self::new(u, w, v, 0)
    }

    pub fn mid_end(&self) -> i64 {
        self.origin + self.mid.len() as i64
    }

    pub fn at(&self, i: i64) -> &T {
        if i < self.origin {
            &self.left[(i - self.origin).rem_euclid(self.left.len() as i64) as usize]
        } else if i < self.mid_end() {
            &self.mid[(i - self.origin) as usize]
        } else {
            &self.right[((i - self.mid_end()) as usize) % self.right.len()]
        }
    }

    pub fn window(&self, from: i64, to: i64) -> Vec<T> {
        (from..to).map(|i| self.at(i).clone()).collect()
    }

    /// Equality as bi-infinite sequences. Agreement on `p + q` consecutive
    /// positions inside both left-periodic regions forces agreement on the
    /// whole left tail, and likewise on the right.
    pub fn same_sequence(&self, other: &Self) -> bool {
        let lo = self.origin.min(other.origin) - (self.left.len() + other.left.len()) as i64;
        let hi = self.mid_end().max(other.mid_end()) + (self.right.len() + other.right.len()) as i64;
        (lo..hi).all(|i| self.at(i) == other.at(i))
    }

    pub fn shifted(&self, k: i64) -> Self {
        EpSeq { origin: self.origin - k, ..self.clone() }
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> EpSeq<U> {
        EpSeq {
            left: self.left.iter().map(&f).collect(),
            mid: self.mid.iter().map(&f).collect(),
            right: self.right.iter().map(&f).collect(),
            origin: self.origin,
        }
    }

    /// Canonical representation: primitive cycles, the left cycle pushed as
    /// far right as it goes and the right cycle as far left.
    pub fn normalized(&self) -> Self {
        let left = primitive_root(&self.left);
        let right = primitive_root(&self.right);
        let (k, r) = (left.len() as i64, right.len() as i64);
        let limit = self.mid.len() as i64 + r + k;
        let Some(j) = (0..limit).find(|&j| *self.at(self.origin + j) != left[(j % k) as usize]) else {
            // one cycle all the way through
            let cyc = self.window(-k, 0);
            return EpSeq { left: cyc.clone(), mid: Vec::new(), right: cyc, origin: 0 };
        };
        let origin = self.origin + j;
        let mut rs = self.mid_end().max(origin);
        while rs > origin && self.at(rs - 1) == self.at(rs - 1 + r) {
            rs -= 1;
        }
        EpSeq {
            left: self.window(origin - k, origin),
            mid: self.window(origin, rs),
            right: self.window(rs, rs + r),
            origin,
        }
    }
}

fn primitive_root<T: Clone + PartialEq>(xs: &[T]) -> Vec<T> {
    let n = xs.len();
    (1..=n)
        .find(|&p| n % p == 0 && (p..n).all(|i| xs[i] == xs[i - p]))
        .map(|p| xs[..p].to_vec())
        .unwrap_or_default()
}

impl EpPath {
    /// Checks that consecutive edges meet, including across the seams.
    pub fn validate(&self, g: &LabeledGraph) -> Result<()> {
        let all = self.left.iter().chain(&self.mid).chain(&self.right);
        if let Some(&bad) = all.clone().find(|&&e| e >= g.edge_count()) {
            return Err(Error::InvalidPath(format!("edge id {bad} out of range")));
        }
        let lo = self.origin - self.left.len() as i64;
        let hi = self.mid_end() + self.right.len() as i64;
        for i in lo..hi {
            let (e, f) = (g.edge(*self.at(i)), g.edge(*self.at(i + 1)));
            if e.dst != f.src {
                return Err(Error::InvalidPath(format!("edges at {i} and {} do not meet", i + 1)));
            }
        }
        Ok(())
    }

    pub fn labels(&self, g: &LabeledGraph) -> Point {
        self.map(|&e| g.edge(e).label)
    }
}
