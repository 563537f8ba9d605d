//! State spaces and states.
//!
//! A [`StateSpace`] is a box in ℝᵏ whose coordinates may additionally be
//! flagged as strictly positive (scale parameters such as σ). A [`State`] is
//! a validated point of a space.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

#[derive(Debug, PartialEq)]
struct SpaceInner {
    lower: Vec<f64>,
    upper: Vec<f64>,
    positive: Vec<bool>,
}

/// Parameter domain Ω: per-dimension bounds plus positivity flags.
///
/// Cheap to clone; clones compare equal.
#[derive(Clone)]
pub struct StateSpace(Arc<SpaceInner>);

impl StateSpace {
    /// Builds a space from per-dimension `(lower, upper)` bounds and positivity
    /// flags. Infinite bounds are allowed.
    pub fn new(bounds: Vec<(f64, f64)>, positive: Vec<bool>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::Construction("state space needs at least one dimension".into()));
        }
        if bounds.len() != positive.len() {
            return Err(Error::DimensionMismatch { expected: bounds.len(), got: positive.len() });
        }
        let mut lower = Vec::with_capacity(bounds.len());
        let mut upper = Vec::with_capacity(bounds.len());
        for (i, (&(lo, hi), &pos)) in bounds.iter().zip(&positive).enumerate() {
            if lo.is_nan() || hi.is_nan() || lo >= hi {
                return Err(Error::Construction(format!("dimension {i}: empty bound interval [{lo}, {hi}]")));
            }
            if pos && lo < 0.0 {
                return Err(Error::Construction(format!(
                    "dimension {i}: positive coordinate with negative lower bound {lo}"
                )));
            }
            lower.push(lo);
            upper.push(hi);
        }
        Ok(Self(Arc::new(SpaceInner { lower, upper, positive })))
    }

    /// ℝᵏ.
    pub fn real(dims: usize) -> Result<Self> {
        Self::new(vec![(f64::NEG_INFINITY, f64::INFINITY); dims], vec![false; dims])
    }

    /// ℝᵏ × ℝ₊: `dims` free coordinates followed by one positive scale.
    pub fn real_with_scale(dims: usize) -> Result<Self> {
        let mut bounds = vec![(f64::NEG_INFINITY, f64::INFINITY); dims];
        bounds.push((0.0, f64::INFINITY));
        let mut positive = vec![false; dims];
        positive.push(true);
        Self::new(bounds, positive)
    }

    pub fn dims(&self) -> usize {
        self.0.lower.len()
    }

    pub fn bounds(&self, i: usize) -> (f64, f64) {
        (self.0.lower[i], self.0.upper[i])
    }

    pub fn is_positive(&self, i: usize) -> bool {
        self.0.positive[i]
    }

    /// Whether `coords` is a point of this space.
    pub fn contains(&self, coords: &[f64]) -> bool {
        self.check(coords).is_ok()
    }

    fn check(&self, coords: &[f64]) -> Result<()> {
        if coords.len() != self.dims() {
            return Err(Error::DimensionMismatch { expected: self.dims(), got: coords.len() });
        }
        for (i, &c) in coords.iter().enumerate() {
            let (lo, hi) = self.bounds(i);
            if c.is_nan() || c < lo || c > hi || (self.0.positive[i] && c <= 0.0) {
                return Err(Error::OutOfSpace(format!("coordinate {i} = {c} not in [{lo}, {hi}]")));
            }
        }
        Ok(())
    }

    /// Draws a point of the space, used for spot checks. Finite bounds are
    /// sampled uniformly; unbounded directions get a standard normal offset
    /// (exponential for positive half-lines).
    pub fn random_state<R: Rng + ?Sized>(&self, rng: &mut R) -> State {
        let coords = (0..self.dims())
            .map(|i| {
                let (lo, hi) = self.bounds(i);
                let z: f64 = rng.sample(StandardNormal);
                let c = match (lo.is_finite(), hi.is_finite()) {
                    (true, true) => lo + (hi - lo) * rng.random::<f64>(),
                    (true, false) => lo + z.abs() + 1e-3,
                    (false, true) => hi - z.abs() - 1e-3,
                    (false, false) => 3.0 * z,
                };
                if self.0.positive[i] && c <= 0.0 {
                    f64::MIN_POSITIVE.max(hi * 0.5)
                } else {
                    c
                }
            })
            .collect();
        State { coords, space: self.clone() }
    }
}

impl PartialEq for StateSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl fmt::Debug for StateSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("StateSpace[")?;
        for i in 0..self.dims() {
            if i > 0 {
                f.write_str(" × ")?;
            }
            let (lo, hi) = self.bounds(i);
            if self.0.positive[i] {
                write!(f, "({lo}, {hi}]₊")?;
            } else {
                write!(f, "[{lo}, {hi}]")?;
            }
        }
        f.write_str("]")
    }
}

/// A point ω of a [`StateSpace`].
#[derive(Clone, PartialEq)]
pub struct State {
    coords: Vec<f64>,
    space: StateSpace,
}

impl State {
    pub fn new(space: &StateSpace, coords: Vec<f64>) -> Result<Self> {
        space.check(&coords)?;
        Ok(Self { coords, space: space.clone() })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }
}

impl std::ops::Index<usize> for State {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("State").field(&self.coords).finish()
    }
}
