//! Events as finite unions of axis-aligned rectangles in ℝᵈ.
//!
//! Finite rectangle unions are closed under union, intersection and
//! complement, so they form a field of sets. Every [`Event`] is stored in
//! canonical form: its rectangles are pairwise disjoint.

use std::ops::Bound;

use crate::error::{Error, Result};

/// An interval of the real line with open, closed or unbounded endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: Bound<f64>,
    pub hi: Bound<f64>,
}

impl Interval {
    pub const REAL: Interval = Interval { lo: Bound::Unbounded, hi: Bound::Unbounded };

    pub fn new(lo: Bound<f64>, hi: Bound<f64>) -> Self {
        Self { lo, hi }
    }

    /// `[lo, hi]`
    pub fn closed(lo: f64, hi: f64) -> Self {
        Self::new(Bound::Included(lo), Bound::Included(hi))
    }

    /// `(lo, hi)`
    pub fn open(lo: f64, hi: f64) -> Self {
        Self::new(Bound::Excluded(lo), Bound::Excluded(hi))
    }

    /// `(-∞, hi]`
    pub fn at_most(hi: f64) -> Self {
        Self::new(Bound::Unbounded, Bound::Included(hi))
    }

    /// `[lo, ∞)`
    pub fn at_least(lo: f64) -> Self {
        Self::new(Bound::Included(lo), Bound::Unbounded)
    }

    /// Lower and upper endpoints as extended reals (−∞/+∞ for unbounded).
    pub fn endpoints(&self) -> (f64, f64) {
        let lo = match self.lo {
            Bound::Unbounded => f64::NEG_INFINITY,
            Bound::Included(v) | Bound::Excluded(v) => v,
        };
        let hi = match self.hi {
            Bound::Unbounded => f64::INFINITY,
            Bound::Included(v) | Bound::Excluded(v) => v,
        };
        (lo, hi)
    }

    pub fn is_empty(&self) -> bool {
        match (self.lo, self.hi) {
            (Bound::Included(a), Bound::Included(b)) => a > b,
            (Bound::Included(a), Bound::Excluded(b))
            | (Bound::Excluded(a), Bound::Included(b))
            | (Bound::Excluded(a), Bound::Excluded(b)) => a >= b,
            _ => false,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = match self.lo {
            Bound::Unbounded => true,
            Bound::Included(a) => x >= a,
            Bound::Excluded(a) => x > a,
        };
        let below = match self.hi {
            Bound::Unbounded => true,
            Bound::Included(b) => x <= b,
            Bound::Excluded(b) => x < b,
        };
        above && below
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        Interval { lo: tighter_lower(self.lo, other.lo), hi: tighter_upper(self.hi, other.hi) }
    }

    /// Whether `self ⊆ other`.
    pub fn is_subset(&self, other: &Interval) -> bool {
        self.is_empty() || self.intersect(other) == *self
    }
}

fn tighter_lower(a: Bound<f64>, b: Bound<f64>) -> Bound<f64> {
    use Bound::*;
    match (a, b) {
        (Unbounded, x) | (x, Unbounded) => x,
        (Included(x), Included(y)) => Included(x.max(y)),
        (Excluded(x), Excluded(y)) => Excluded(x.max(y)),
        (Included(x), Excluded(y)) | (Excluded(y), Included(x)) => {
            if x > y {
                Included(x)
            } else {
                Excluded(y)
            }
        }
    }
}

fn tighter_upper(a: Bound<f64>, b: Bound<f64>) -> Bound<f64> {
    use Bound::*;
    match (a, b) {
        (Unbounded, x) | (x, Unbounded) => x,
        (Included(x), Included(y)) => Included(x.min(y)),
        (Excluded(x), Excluded(y)) => Excluded(x.min(y)),
        (Included(x), Excluded(y)) | (Excluded(y), Included(x)) => {
            if x < y {
                Included(x)
            } else {
                Excluded(y)
            }
        }
    }
}

// The complement of a lower endpoint is the matching upper endpoint of the
// part that lies strictly below it.
fn flip(b: Bound<f64>) -> Option<Bound<f64>> {
    match b {
        Bound::Unbounded => None,
        Bound::Included(v) => Some(Bound::Excluded(v)),
        Bound::Excluded(v) => Some(Bound::Included(v)),
    }
}

/// Product of per-axis intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct Rect(pub Vec<Interval>);

impl Rect {
    pub fn new(axes: Vec<Interval>) -> Self {
        Self(axes)
    }

    /// The whole space ℝᵈ.
    pub fn whole(dim: usize) -> Self {
        Self(vec![Interval::REAL; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn axes(&self) -> &[Interval] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().any(Interval::is_empty)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && self.0.iter().zip(x).all(|(iv, &v)| iv.contains(v))
    }

    pub fn intersect(&self, other: &Rect) -> Rect {
        Rect(self.0.iter().zip(&other.0).map(|(a, b)| a.intersect(b)).collect())
    }

    pub fn is_subset(&self, other: &Rect) -> bool {
        self.is_empty() || self.0.iter().zip(&other.0).all(|(a, b)| a.is_subset(b))
    }

    /// `self ∖ other` as pairwise disjoint rectangles (at most `2d` pieces).
    pub fn subtract(&self, other: &Rect) -> Vec<Rect> {
        let overlap = self.intersect(other);
        if overlap.is_empty() {
            return if self.is_empty() { vec![] } else { vec![self.clone()] };
        }
        let mut pieces = Vec::new();
        // Axes before k are restricted to the overlap, axis k takes the part of
        // `self` outside `other`, axes after k are left as in `self`.
        let mut core = self.0.clone();
        for k in 0..self.dim() {
            let a = self.0[k];
            let b = other.0[k];
            if let Some(hi) = flip(b.lo) {
                let below = a.intersect(&Interval { lo: Bound::Unbounded, hi });
                if !below.is_empty() {
                    let mut r = core.clone();
                    r[k] = below;
                    pieces.push(Rect(r));
                }
            }
            if let Some(lo) = flip(b.hi) {
                let above = a.intersect(&Interval { lo, hi: Bound::Unbounded });
                if !above.is_empty() {
                    let mut r = core.clone();
                    r[k] = above;
                    pieces.push(Rect(r));
                }
            }
            core[k] = overlap.0[k];
        }
        pieces
    }
}

/// A finite union of pairwise disjoint rectangles of a common dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    dim: usize,
    rects: Vec<Rect>,
}

impl Event {
    /// Builds the union of `rects`, splitting overlaps so the stored
    /// rectangles are disjoint. Empty rectangles are dropped.
    pub fn new(dim: usize, rects: Vec<Rect>) -> Result<Self> {
        let mut out: Vec<Rect> = Vec::new();
        for r in rects {
            if r.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: r.dim() });
            }
            let mut fresh = vec![r];
            for kept in &out {
                fresh = fresh.iter().flat_map(|f| f.subtract(kept)).collect();
                if fresh.is_empty() {
                    break;
                }
            }
            out.extend(fresh.into_iter().filter(|f| !f.is_empty()));
        }
        Ok(Self { dim, rects: out })
    }

    pub fn rect(r: Rect) -> Self {
        let dim = r.dim();
        let rects = if r.is_empty() { vec![] } else { vec![r] };
        Self { dim, rects }
    }

    /// The one-dimensional event given by a single interval.
    pub fn interval(iv: Interval) -> Self {
        Self::rect(Rect(vec![iv]))
    }

    pub fn whole(dim: usize) -> Self {
        Self::rect(Rect::whole(dim))
    }

    pub fn empty(dim: usize) -> Self {
        Self { dim, rects: vec![] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rects(&self) -> &[Rect] {
        &self.rects
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.rects.iter().any(|r| r.contains(x))
    }

    pub fn union(&self, other: &Event) -> Result<Event> {
        Event::new(self.dim, self.rects.iter().chain(&other.rects).cloned().collect())
    }

    pub fn intersect(&self, other: &Event) -> Result<Event> {
        self.same_dim(other)?;
        let rects = self
            .rects
            .iter()
            .flat_map(|a| other.rects.iter().map(move |b| a.intersect(b)))
            .filter(|r| !r.is_empty())
            .collect();
        // Pairwise intersections of two disjoint families are already disjoint.
        Ok(Event { dim: self.dim, rects })
    }

    pub fn complement(&self) -> Event {
        let mut rest = vec![Rect::whole(self.dim)];
        for r in &self.rects {
            rest = rest.iter().flat_map(|p| p.subtract(r)).collect();
        }
        Event { dim: self.dim, rects: rest }
    }

    pub fn difference(&self, other: &Event) -> Result<Event> {
        self.intersect(&other.complement())
    }

    fn same_dim(&self, other: &Event) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        Ok(())
    }
}
