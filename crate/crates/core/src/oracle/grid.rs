use serde::Serialize;

use super::{linspace, weighted_extremes, OracleConfig};
use crate::attitude::{AttitudeProfile, Player};
use crate::error::{Error, Result};
use crate::game::Game;
use crate::interval::Interval;

/// A subset of a uniform grid over `base`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSet {
    base: Interval,
    members: Vec<bool>,
}

impl GridSet {
    pub fn empty(base: Interval, resolution: usize) -> Result<Self> {
        if resolution < 2 {
            return Err(Error::Resolution {
                min: 2,
                got: resolution,
            });
        }
        Ok(Self {
            base,
            members: vec![false; resolution],
        })
    }

    pub fn full(base: Interval, resolution: usize) -> Result<Self> {
        let mut s = Self::empty(base, resolution)?;
        s.members.fill(true);
        Ok(s)
    }

    /// Grid points lying in `set`, or the nearest point if none do.
    pub fn from_interval(base: Interval, resolution: usize, set: Interval) -> Result<Self> {
        let mut s = Self::empty(base, resolution)?;
        let eps = 1e-9 * s.step();
        for k in 0..resolution {
            let x = s.point(k);
            s.members[k] = x >= set.lo() - eps && x <= set.hi() + eps;
        }
        if !s.members.iter().any(|&m| m) {
            let k = s.nearest(set.midpoint());
            s.members[k] = true;
        }
        Ok(s)
    }

    pub fn base(&self) -> Interval {
        self.base
    }

    pub fn resolution(&self) -> usize {
        self.members.len()
    }

    pub fn step(&self) -> f64 {
        self.base.width() / (self.members.len() - 1) as f64
    }

    pub fn point(&self, k: usize) -> f64 {
        if k + 1 == self.members.len() {
            self.base.hi()
        } else {
            self.base.lo() + self.step() * k as f64
        }
    }

    pub fn nearest(&self, x: f64) -> usize {
        if self.step() == 0.0 {
            return 0;
        }
        let k = ((x - self.base.lo()) / self.step()).round();
        (k.max(0.0) as usize).min(self.members.len() - 1)
    }

    pub fn insert(&mut self, k: usize) {
        self.members[k] = true;
    }

    pub fn contains(&self, k: usize) -> bool {
        self.members[k]
    }

    pub fn count(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.members.len())
            .filter(|&k| self.members[k])
            .map(|k| self.point(k))
            .collect()
    }

    /// Smallest and largest member.
    pub fn hull(&self) -> Option<Interval> {
        let first = self.members.iter().position(|&m| m)?;
        let last = self.members.iter().rposition(|&m| m)?;
        Interval::new(self.point(first), self.point(last)).ok()
    }

    /// Members missing between the smallest and largest member.
    pub fn holes(&self) -> usize {
        match (
            self.members.iter().position(|&m| m),
            self.members.iter().rposition(|&m| m),
        ) {
            (Some(a), Some(b)) => (a..=b).filter(|&k| !self.members[k]).count(),
            _ => 0,
        }
    }

    /// Pairs the sorted members of both sets by quantile, averages each pair
    /// and snaps the result back to the grid.
    fn average(&self, other: &GridSet) -> GridSet {
        let a = self.points();
        let b = other.points();
        let mut out = GridSet {
            base: self.base,
            members: vec![false; self.members.len()],
        };
        let n = 2 * a.len().max(b.len()) + 1;
        for q in 0..n {
            let t = if n == 1 { 0.0 } else { q as f64 / (n - 1) as f64 };
            let pa = a[(t * (a.len() - 1) as f64).round() as usize];
            let pb = b[(t * (b.len() - 1) as f64).round() as usize];
            let k = out.nearest(0.5 * (pa + pb));
            out.members[k] = true;
        }
        out
    }
}

/// Image of `opponent` under the set-valued response map of `player`:
/// for each type on the type grid, the strategy grid point maximizing the
/// attitude-weighted reward against the member points of `opponent`.
pub fn grid_psi<G: Game + ?Sized>(
    game: &G,
    player: Player,
    opponent: &GridSet,
    pi: f64,
    strategy_points: usize,
    type_points: usize,
) -> Result<GridSet> {
    if type_points < 2 {
        return Err(Error::Resolution {
            min: 2,
            got: type_points,
        });
    }
    let mut image = GridSet::empty(game.strategy_space(player), strategy_points)?;
    let own: Vec<f64> = (0..strategy_points).map(|k| image.point(k)).collect();
    let opp = opponent.points();
    let types = game.type_space(player);
    for theta in linspace(types.lo(), types.hi(), type_points) {
        let mut best = 0;
        let mut best_v = f64::NEG_INFINITY;
        for (k, &x) in own.iter().enumerate() {
            let v = weighted_extremes(|y| game.payoff(player, x, y, theta), &opp, pi);
            if v > best_v {
                best = k;
                best_v = v;
            }
        }
        image.insert(best);
    }
    Ok(image)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum GridOutcome {
    /// One more application of the response maps reproduces the sets.
    Fixed,
    /// The iteration revisits an earlier state after `period` steps even with
    /// averaging; `amplitude` is the largest hull endpoint movement among the
    /// cycle states and their undamped image. Period 1 means averaging stalls
    /// next to a point the undamped map still moves.
    Cycle {
        period: usize,
        amplitude: f64,
        states: Vec<[GridSet; 2]>,
    },
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridEquilibrium {
    pub sets: [GridSet; 2],
    pub iterations: usize,
    pub outcome: GridOutcome,
    /// Averaging with the previous state was used to break an undamped cycle.
    pub damped: bool,
}

impl GridEquilibrium {
    pub fn hulls(&self) -> Option<[Interval; 2]> {
        Some([self.sets[0].hull()?, self.sets[1].hull()?])
    }

    pub fn step(&self) -> f64 {
        self.sets[0].step().max(self.sets[1].step())
    }
}

/// Iterates the grid response maps from the full strategy grids until a state
/// repeats. A repeat after one step is a fixed point; a longer cycle switches
/// on quantile averaging, and a cycle under averaging is reported.
pub fn grid_equilibrium<G: Game + ?Sized>(
    game: &G,
    profile: AttitudeProfile,
    cfg: &OracleConfig,
) -> Result<GridEquilibrium> {
    let (pi1, pi2) = (profile.p1.value(), profile.p2.value());
    let mut state = [
        GridSet::full(game.strategy_space(Player::One), cfg.strategy_points)?,
        GridSet::full(game.strategy_space(Player::Two), cfg.strategy_points)?,
    ];
    let mut history: Vec<[GridSet; 2]> = Vec::new();
    let mut damped = false;
    for k in 0..cfg.max_iter {
        let next = [
            grid_psi(game, Player::One, &state[1], pi1, cfg.strategy_points, cfg.type_points)?,
            grid_psi(game, Player::Two, &state[0], pi2, cfg.strategy_points, cfg.type_points)?,
        ];
        if next == state {
            return Ok(GridEquilibrium {
                sets: state,
                iterations: k + 1,
                outcome: GridOutcome::Fixed,
                damped,
            });
        }
        history.push(state.clone());
        let candidate = if damped {
            [state[0].average(&next[0]), state[1].average(&next[1])]
        } else {
            next.clone()
        };
        if let Some(pos) = history.iter().position(|h| *h == candidate) {
            let cycle: Vec<[GridSet; 2]> = history[pos..].to_vec();
            if damped {
                let mut visited = cycle.clone();
                visited.push(next);
                let amplitude = cycle_amplitude(&visited);
                return Ok(GridEquilibrium {
                    sets: state,
                    iterations: k + 1,
                    outcome: GridOutcome::Cycle {
                        period: cycle.len(),
                        amplitude,
                        states: cycle,
                    },
                    damped,
                });
            }
            damped = true;
            history.clear();
            state = [state[0].average(&candidate[0]), state[1].average(&candidate[1])];
            continue;
        }
        state = candidate;
    }
    Ok(GridEquilibrium {
        sets: state,
        iterations: cfg.max_iter,
        outcome: GridOutcome::MaxIterations,
        damped,
    })
}

fn cycle_amplitude(states: &[[GridSet; 2]]) -> f64 {
    let mut amp: f64 = 0.0;
    for a in states {
        for b in states {
            for p in 0..2 {
                if let (Some(x), Some(y)) = (a[p].hull(), b[p].hull()) {
                    amp = amp.max((x.lo() - y.lo()).abs()).max((x.hi() - y.hi()).abs());
                }
            }
        }
    }
    amp
}
