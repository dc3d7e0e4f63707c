use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed bounded real interval `[lo, hi]`.
///
/// Strategy sets, type sets and equilibrium components are all represented
/// this way. A singleton has `lo == hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn point(x: f64) -> Self {
        assert!(x.is_finite(), "singleton interval at non-finite point");
        Self { lo: x, hi: x }
    }

    /// Builds `[min(a, b), max(a, b)]`.
    pub fn spanning(a: f64, b: f64) -> Result<Self> {
        Self::new(a.min(b), a.max(b))
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn is_singleton(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Containment up to an absolute slack on both ends.
    pub fn contains_approx(&self, x: f64, slack: f64) -> bool {
        self.lo - slack <= x && x <= self.hi + slack
    }

    pub fn is_subset_of(&self, other: &Interval, slack: f64) -> bool {
        other.lo - slack <= self.lo && self.hi <= other.hi + slack
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }

    /// Intersection with `other`, clamped back into `other` when it would be empty.
    pub fn clamp_into(&self, other: &Interval) -> Interval {
        let lo = other.clamp(self.lo);
        let hi = other.clamp(self.hi);
        Interval { lo, hi }
    }

    /// Sup-norm distance between endpoint pairs.
    pub fn endpoint_distance(&self, other: &Interval) -> f64 {
        (self.lo - other.lo).abs().max((self.hi - other.hi).abs())
    }

    /// `n` evenly spaced points from `lo` to `hi`, both included.
    /// A singleton interval yields a single point.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        if self.is_singleton() || n < 2 {
            return vec![self.lo];
        }
        let step = self.width() / (n - 1) as f64;
        (0..n)
            .map(|k| if k + 1 == n { self.hi } else { self.lo + step * k as f64 })
            .collect()
    }

    /// Convex combination `(1 - t) * self + t * other`, endpoint-wise.
    pub fn lerp(&self, other: &Interval, t: f64) -> Interval {
        Interval {
            lo: self.lo + t * (other.lo - self.lo),
            hi: self.hi + t * (other.hi - self.hi),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
