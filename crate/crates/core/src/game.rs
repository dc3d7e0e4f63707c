use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::attitude::{Attitude, Player};
use crate::error::{Error, Result};
use crate::interval::Interval;

/// How a player's utility varies in the opponent's strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Monotonicity {
    Decreasing,
    Increasing,
    Unknown,
}

/// A two-player game whose players know their own type but only a type set for
/// the opponent.
///
/// `utility(i, x1, x2, theta)` is the reward of player `i` at strategy pair
/// `(x1, x2)` when `i` has type `theta`. It is assumed continuous and to have
/// a unique maximizer in the player's own strategy for each fixed opponent
/// strategy and type.
pub trait Game: Send + Sync {
    fn utility(&self, player: Player, x1: f64, x2: f64, theta: f64) -> f64;

    fn strategy_space(&self, player: Player) -> Interval;

    fn type_space(&self, player: Player) -> Interval;

    fn opponent_monotonicity(&self, _player: Player) -> Monotonicity {
        Monotonicity::Unknown
    }

    fn name(&self) -> &str {
        "custom"
    }

    /// Utility written in terms of the player's own and the opponent's strategy.
    fn payoff(&self, player: Player, own: f64, other: f64, theta: f64) -> f64 {
        match player {
            Player::One => self.utility(player, own, other, theta),
            Player::Two => self.utility(player, other, own, theta),
        }
    }
}

impl<G: Game + ?Sized> Game for &G {
    fn utility(&self, player: Player, x1: f64, x2: f64, theta: f64) -> f64 {
        (**self).utility(player, x1, x2, theta)
    }
    fn strategy_space(&self, player: Player) -> Interval {
        (**self).strategy_space(player)
    }
    fn type_space(&self, player: Player) -> Interval {
        (**self).type_space(player)
    }
    fn opponent_monotonicity(&self, player: Player) -> Monotonicity {
        (**self).opponent_monotonicity(player)
    }
    fn name(&self) -> &str {
        (**self).name()
    }
}

impl<G: Game + ?Sized> Game for Box<G> {
    fn utility(&self, player: Player, x1: f64, x2: f64, theta: f64) -> f64 {
        (**self).utility(player, x1, x2, theta)
    }
    fn strategy_space(&self, player: Player) -> Interval {
        (**self).strategy_space(player)
    }
    fn type_space(&self, player: Player) -> Interval {
        (**self).type_space(player)
    }
    fn opponent_monotonicity(&self, player: Player) -> Monotonicity {
        (**self).opponent_monotonicity(player)
    }
    fn name(&self) -> &str {
        (**self).name()
    }
}

pub type UtilityFn = dyn Fn(Player, f64, f64, f64) -> f64 + Send + Sync;

/// A game assembled from a utility closure and per-player spaces.
#[derive(Clone)]
pub struct GameDefinition {
    name: String,
    utility: Arc<UtilityFn>,
    strategy_spaces: [Interval; 2],
    type_spaces: [Interval; 2],
    monotonicity: [Monotonicity; 2],
}

impl GameDefinition {
    pub fn new<F>(
        name: impl Into<String>,
        utility: F,
        strategy_spaces: [Interval; 2],
        type_spaces: [Interval; 2],
    ) -> Self
    where
        F: Fn(Player, f64, f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            utility: Arc::new(utility),
            strategy_spaces,
            type_spaces,
            monotonicity: [Monotonicity::Unknown; 2],
        }
    }

    pub fn with_monotonicity(mut self, m1: Monotonicity, m2: Monotonicity) -> Self {
        self.monotonicity = [m1, m2];
        self
    }

    pub fn with_type_spaces(mut self, t1: Interval, t2: Interval) -> Self {
        self.type_spaces = [t1, t2];
        self
    }
}

impl fmt::Debug for GameDefinition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GameDefinition")
            .field("name", &self.name)
            .field("strategy_spaces", &self.strategy_spaces)
            .field("type_spaces", &self.type_spaces)
            .field("monotonicity", &self.monotonicity)
            .finish()
    }
}

impl Game for GameDefinition {
    fn utility(&self, player: Player, x1: f64, x2: f64, theta: f64) -> f64 {
        (self.utility)(player, x1, x2, theta)
    }
    fn strategy_space(&self, player: Player) -> Interval {
        self.strategy_spaces[player.slot()]
    }
    fn type_space(&self, player: Player) -> Interval {
        self.type_spaces[player.slot()]
    }
    fn opponent_monotonicity(&self, player: Player) -> Monotonicity {
        self.monotonicity[player.slot()]
    }
    fn name(&self) -> &str {
        &self.name
    }
}

/// What one player knows privately: its own type and its attitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlayerContext {
    pub player: Player,
    pub theta: f64,
    pub attitude: Attitude,
}

impl PlayerContext {
    pub fn new<G: Game + ?Sized>(game: &G, player: Player, theta: f64, attitude: Attitude) -> Result<Self> {
        let types = game.type_space(player);
        if !types.contains_approx(theta, 1e-12) {
            return Err(Error::OutsideDomain {
                what: "theta",
                value: theta,
                domain: types,
            });
        }
        Ok(Self {
            player,
            theta,
            attitude,
        })
    }
}

/// Spot checks of the standing assumptions on a user-supplied game.
#[derive(Debug, Clone, PartialEq)]
pub struct AssumptionProbe {
    /// Largest utility jump seen between points `step` apart.
    pub max_jump: f64,
    /// `(player, x_j, theta)` samples where the own-strategy maximizer was not unique.
    pub non_unique: Vec<(Player, f64, f64)>,
}

/// Probes continuity by finite differences and uniqueness of the certainty best
/// response on a coarse grid. A clean report is evidence, not proof.
pub fn probe_assumptions<G: Game + ?Sized>(game: &G, samples: usize, step: f64) -> AssumptionProbe {
    let cfg = crate::search::SearchConfig::default();
    let mut max_jump: f64 = 0.0;
    let mut non_unique = Vec::new();
    for player in Player::BOTH {
        let own = game.strategy_space(player);
        let other = game.strategy_space(player.other());
        let types = game.type_space(player);
        for &theta in &types.grid(samples) {
            for &xj in &other.grid(samples) {
                for &xi in &own.grid(samples) {
                    let base = game.payoff(player, xi, xj, theta);
                    let xi2 = own.clamp(xi + step);
                    let xj2 = other.clamp(xj + step);
                    let jump = (game.payoff(player, xi2, xj2, theta) - base).abs();
                    max_jump = max_jump.max(jump);
                }
                let best = crate::search::maximize(|x| game.payoff(player, x, xj, theta), own, &cfg);
                if best.tie {
                    non_unique.push((player, xj, theta));
                }
            }
        }
    }
    AssumptionProbe { max_jump, non_unique }
}
