//! Brute-force reference computations.
//!
//! Everything here enumerates grids with plain loops and calls nothing but
//! [`Game::utility`](crate::game::Game::utility) and the declared spaces, so it
//! can be used to check the interval solver and the closed forms.

mod exhaustive;
mod grid;
mod sampled;

pub use exhaustive::{exhaustive_dominance, exhaustive_maximin, MaximinSurface, OracleDominance};
pub use grid::{grid_equilibrium, grid_psi, GridEquilibrium, GridOutcome, GridSet};
pub use sampled::{sampled_equilibrium, SampledEquilibrium};

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleConfig {
    /// Points in each strategy grid.
    pub strategy_points: usize,
    /// Points in each type grid of the set iteration.
    pub type_points: usize,
    /// Points in the attitude grid of the maximin search.
    pub attitude_points: usize,
    /// Points in the opponent attitude grid of the maximin search.
    pub opponent_attitude_points: usize,
    /// Types per player whose best responses make up a sampled set.
    pub sample_types: usize,
    /// Coarse scan size of the zooming argmax.
    pub coarse_points: usize,
    pub tolerance: f64,
    pub max_iter: usize,
    /// Slack in the weak dominance comparison.
    pub dominance_tolerance: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            strategy_points: 201,
            type_points: 101,
            attitude_points: 201,
            opponent_attitude_points: 11,
            sample_types: 9,
            coarse_points: 101,
            tolerance: 1e-11,
            max_iter: 5_000,
            dominance_tolerance: 1e-9,
        }
    }
}

/// `n` evenly spaced points from `lo` to `hi`; a single point when they coincide.
pub(crate) fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if hi <= lo || n < 2 {
        return vec![lo];
    }
    let mut v = Vec::with_capacity(n);
    for k in 0..n {
        v.push(lo + (hi - lo) * (k as f64) / ((n - 1) as f64));
    }
    v[n - 1] = hi;
    v
}

/// Argmax of `f` on `[lo, hi]`: coarse scan, zoom by factor ten with 21-point
/// scans, then two parabola steps with shrinking spacing. Returns the smallest of tied coarse cells.
pub(crate) fn zoom_argmax<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, coarse: usize) -> f64 {
    if hi <= lo {
        return lo;
    }
    let pts = linspace(lo, hi, coarse.max(3));
    let mut best = 0;
    let mut best_v = f(pts[0]);
    for (k, &x) in pts.iter().enumerate().skip(1) {
        let v = f(x);
        if v > best_v {
            best = k;
            best_v = v;
        }
    }
    let mut x = pts[best];
    let mut a = pts[best.saturating_sub(1)];
    let mut b = pts[(best + 1).min(pts.len() - 1)];
    while b - a > 1e-4 * (hi - lo) {
        let inner = linspace(a, b, 21);
        let mut k_best = 0;
        let mut v_best = f(inner[0]);
        for (k, &y) in inner.iter().enumerate().skip(1) {
            let v = f(y);
            if v > v_best {
                k_best = k;
                v_best = v;
            }
        }
        if v_best >= best_v {
            x = inner[k_best];
            best_v = v_best;
        }
        a = inner[k_best.saturating_sub(1)];
        b = inner[(k_best + 1).min(20)];
    }
    for rel in [1e-3, 1e-5] {
        let h = (rel * (hi - lo)).min(x - lo).min(hi - x);
        if h < 1e-9 * (hi - lo) {
            continue;
        }
        let (fm, f0, fp) = (f(x - h), f(x), f(x + h));
        let curvature = fm - 2.0 * f0 + fp;
        if curvature >= 0.0 {
            continue;
        }
        let vertex = x - 0.5 * h * (fp - fm) / curvature;
        if (vertex - x).abs() <= 2.0 * h {
            x = vertex.clamp(lo, hi);
        }
    }
    x
}

/// `pi * max + (1 - pi) * min` of `u` over `points`.
pub(crate) fn weighted_extremes<F: Fn(f64) -> f64>(u: F, points: &[f64], pi: f64) -> f64 {
    let mut max = f64::NEG_INFINITY;
    let mut min = f64::INFINITY;
    for &y in points {
        let v = u(y);
        if v > max {
            max = v;
        }
        if v < min {
            min = v;
        }
    }
    pi * max + (1.0 - pi) * min
}
