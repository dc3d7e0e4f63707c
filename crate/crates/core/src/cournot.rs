//! Cournot duopoly with linear inverse demand `(1 - x1 - x2)^+` and unit costs
//! known only up to an interval.
//!
//! Closed forms here double as a fast solver and as ground truth for the
//! numeric machinery. Strategy space is `[0, 1/2]` for both firms and every
//! cost interval must lie in `[0, 1/2]`; under those bounds total output never
//! exceeds 1, so the price kink is never active inside the closed forms.

use serde::{Deserialize, Serialize};

use crate::attitude::{AttitudeProfile, Dominance, Player};
use crate::error::{Error, Result};
use crate::game::{Game, Monotonicity};
use crate::interval::Interval;

pub const MAX_STRATEGY: f64 = 0.5;
pub const MAX_COST: f64 = 0.5;

/// Profit of a firm producing `own` against `other` at unit cost `theta`.
pub fn profit(own: f64, other: f64, theta: f64) -> f64 {
    own * (1.0 - own - other).max(0.0) - theta * own
}

fn check_cost_interval(types: Interval, label: &str) -> Result<()> {
    if types.lo() < 0.0 || types.hi() > MAX_COST {
        return Err(Error::InvalidParameters(format!(
            "{label} = {types} must satisfy 0 <= alpha <= beta <= 1/2"
        )));
    }
    Ok(())
}

/// The Cournot game with cost uncertainty sets `[alpha_i, beta_i]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CournotGame {
    types: [Interval; 2],
}

impl CournotGame {
    pub fn new(types1: Interval, types2: Interval) -> Result<Self> {
        check_cost_interval(types1, "Theta1")?;
        check_cost_interval(types2, "Theta2")?;
        Ok(Self {
            types: [types1, types2],
        })
    }

    pub fn from_bounds(alpha1: f64, beta1: f64, alpha2: f64, beta2: f64) -> Result<Self> {
        Self::new(Interval::new(alpha1, beta1)?, Interval::new(alpha2, beta2)?)
    }

    pub fn symmetric(alpha: f64, beta: f64) -> Result<Self> {
        Self::from_bounds(alpha, beta, alpha, beta)
    }

    /// Full-information game with known costs.
    pub fn singleton(theta1: f64, theta2: f64) -> Result<Self> {
        Self::new(Interval::point(theta1), Interval::point(theta2))
    }

    pub fn types(&self, player: Player) -> Interval {
        self.types[player.slot()]
    }

    pub fn alpha(&self, player: Player) -> f64 {
        self.types(player).lo()
    }

    pub fn beta(&self, player: Player) -> f64 {
        self.types(player).hi()
    }

    pub fn delta(&self, player: Player) -> f64 {
        self.types(player).width()
    }

    pub fn is_symmetric(&self) -> bool {
        self.types[0] == self.types[1]
    }
}

impl Game for CournotGame {
    fn utility(&self, player: Player, x1: f64, x2: f64, theta: f64) -> f64 {
        match player {
            Player::One => profit(x1, x2, theta),
            Player::Two => profit(x2, x1, theta),
        }
    }

    fn strategy_space(&self, _player: Player) -> Interval {
        Interval::new(0.0, MAX_STRATEGY).expect("constant interval")
    }

    fn type_space(&self, player: Player) -> Interval {
        self.types(player)
    }

    fn opponent_monotonicity(&self, _player: Player) -> Monotonicity {
        Monotonicity::Decreasing
    }

    fn name(&self) -> &str {
        "cournot"
    }
}

/// A Cournot game together with the firms' true costs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CournotParams {
    pub game: CournotGame,
    pub theta: [f64; 2],
}

impl CournotParams {
    pub fn new(game: CournotGame, theta1: f64, theta2: f64) -> Result<Self> {
        for (player, theta) in Player::BOTH.into_iter().zip([theta1, theta2]) {
            if !game.types(player).contains(theta) {
                return Err(Error::InvalidParameters(format!(
                    "theta{} = {theta} must lie in Theta{} = {}",
                    player.number(),
                    player.number(),
                    game.types(player)
                )));
            }
        }
        Ok(Self {
            game,
            theta: [theta1, theta2],
        })
    }

    pub fn theta(&self, player: Player) -> f64 {
        self.theta[player.slot()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NashPoint {
    pub x: [f64; 2],
    pub u: [f64; 2],
}

/// Full-information Nash equilibrium `x_i = (1 - 2 theta_i + theta_j) / 3`.
pub fn nash_equilibrium(theta: [f64; 2]) -> NashPoint {
    let x1 = (1.0 - 2.0 * theta[0] + theta[1]) / 3.0;
    let x2 = (1.0 - 2.0 * theta[1] + theta[0]) / 3.0;
    NashPoint {
        x: [x1, x2],
        u: [profit(x1, x2, theta[0]), profit(x2, x1, theta[1])],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SocialOptimum {
    pub x: [f64; 2],
    pub value: f64,
    /// Equal costs: any split of the optimal total output is optimal; the
    /// symmetric split is returned.
    pub tie: bool,
}

/// Maximizer of joint profit: the cheaper firm produces `(1 - theta_min) / 2`
/// alone.
pub fn social_optimum(theta: [f64; 2]) -> SocialOptimum {
    let cheapest = theta[0].min(theta[1]);
    let total = (1.0 - cheapest) / 2.0;
    let value = total * total;
    if theta[0] < theta[1] {
        SocialOptimum {
            x: [total, 0.0],
            value,
            tie: false,
        }
    } else if theta[1] < theta[0] {
        SocialOptimum {
            x: [0.0, total],
            value,
            tie: false,
        }
    } else {
        SocialOptimum {
            x: [total / 2.0, total / 2.0],
            value,
            tie: true,
        }
    }
}

/// Bayesian Nash strategies when only the mean costs `mu` are common knowledge:
/// `x_i = (2 - 3 theta_i - mu_i + 2 mu_j) / 6`.
pub fn bayesian_equilibrium(mu: [f64; 2], theta: [f64; 2]) -> Result<[f64; 2]> {
    for (k, m) in mu.iter().enumerate() {
        if !(0.0..=MAX_COST).contains(m) {
            return Err(Error::InvalidParameters(format!(
                "mu{} = {m} must lie in [0, 1/2]",
                k + 1
            )));
        }
    }
    Ok([
        (2.0 - 3.0 * theta[0] - mu[0] + 2.0 * mu[1]) / 6.0,
        (2.0 - 3.0 * theta[1] - mu[1] + 2.0 * mu[0]) / 6.0,
    ])
}

/// Center of player `i`'s equilibrium interval.
pub fn equilibrium_center(game: &CournotGame, profile: AttitudeProfile, player: Player) -> f64 {
    let other = player.other();
    let (a_i, b_i) = (game.alpha(player), game.beta(player));
    let a_j = game.alpha(other);
    let pi_i = profile.get(player).value();
    let pi_j = profile.get(other).value();
    game.delta(other) * pi_i / 3.0 - game.delta(player) * pi_j / 6.0
        + (4.0 - 3.0 * b_i - 5.0 * a_i + 4.0 * a_j) / 12.0
}

/// Half-width of player `i`'s equilibrium interval, a quarter of its cost range.
pub fn equilibrium_radius(game: &CournotGame, player: Player) -> f64 {
    game.delta(player) / 4.0
}

/// The unique uncertainty equilibrium `[s_i - delta_i / 4, s_i + delta_i / 4]`.
pub fn uncertainty_equilibrium_closed_form(game: &CournotGame, profile: AttitudeProfile) -> Result<[Interval; 2]> {
    let make = |player: Player| -> Result<Interval> {
        let s = equilibrium_center(game, profile, player);
        let t = equilibrium_radius(game, player);
        Interval::new(s - t, s + t)
    };
    let sets = [make(Player::One)?, make(Player::Two)?];
    check_closed_form_domain(&sets)?;
    Ok(sets)
}

/// The narrower interval `[s_i - delta_i / 8, s_i + delta_i / 8]`, kept only to
/// show numerically that it is not a fixed point.
pub fn narrow_reading(game: &CournotGame, profile: AttitudeProfile) -> Result<[Interval; 2]> {
    let make = |player: Player| -> Result<Interval> {
        let s = equilibrium_center(game, profile, player);
        let t = game.delta(player) / 8.0;
        Interval::new(s - t, s + t)
    };
    Ok([make(Player::One)?, make(Player::Two)?])
}

fn check_closed_form_domain(sets: &[Interval; 2]) -> Result<()> {
    let space = Interval::new(0.0, MAX_STRATEGY).expect("constant interval");
    for set in sets {
        if !set.is_subset_of(&space, 1e-12) {
            return Err(Error::SetOutsideDomain {
                set: *set,
                domain: space,
            });
        }
    }
    if sets[0].hi() + sets[1].hi() > 1.0 {
        return Err(Error::Unsupported("total output beyond the price kink".into()));
    }
    Ok(())
}

/// Strategies maximizing the interim anticipated rewards at the equilibrium:
/// `x_i = delta_j pi_i / 3 - delta_i pi_j / 6 + lambda_i`,
/// `lambda_i = (2 - alpha_i + 2 alpha_j - 3 theta_i) / 6`.
pub fn interim_strategy(params: &CournotParams, profile: AttitudeProfile) -> Result<[f64; 2]> {
    let game = &params.game;
    let strategy = |player: Player| {
        let other = player.other();
        let lambda = (2.0 - game.alpha(player) + 2.0 * game.alpha(other) - 3.0 * params.theta(player)) / 6.0;
        game.delta(other) * profile.get(player).value() / 3.0
            - game.delta(player) * profile.get(other).value() / 6.0
            + lambda
    };
    let x = [strategy(Player::One), strategy(Player::Two)];
    if x.iter().any(|v| !(0.0..=MAX_STRATEGY).contains(v)) || x[0] + x[1] > 1.0 {
        return Err(Error::Unsupported(format!(
            "interim strategies {x:?} leave the closed-form region"
        )));
    }
    Ok(x)
}

/// Ex-post profits at the interim strategies.
pub fn ex_post_rewards(params: &CournotParams, profile: AttitudeProfile) -> Result<[f64; 2]> {
    let x = interim_strategy(params, profile)?;
    Ok([profit(x[0], x[1], params.theta[0]), profit(x[1], x[0], params.theta[1])])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    /// At or below this cost optimism is dominant.
    pub optimism_below: f64,
    /// At or above this cost pessimism is dominant.
    pub pessimism_above: f64,
}

/// Cost thresholds for dominant attitudes of `player`:
/// `(2 - beta_i + 4 alpha_j - 2 beta_j) / 3` and `(2 - alpha_i + 4 beta_j - 2 alpha_j) / 3`.
pub fn dominance_thresholds(game: &CournotGame, player: Player) -> Thresholds {
    let other = player.other();
    let (a_i, b_i) = (game.alpha(player), game.beta(player));
    let (a_j, b_j) = (game.alpha(other), game.beta(other));
    Thresholds {
        optimism_below: (2.0 - b_i + 4.0 * a_j - 2.0 * b_j) / 3.0,
        pessimism_above: (2.0 - a_i + 4.0 * b_j - 2.0 * a_j) / 3.0,
    }
}

/// Closed-form dominance verdict for a player with cost `theta`.
pub fn dominance_verdict(game: &CournotGame, player: Player, theta: f64) -> Dominance {
    verdict_from_thresholds(game, player, theta, dominance_thresholds(game, player))
}

/// Rounding allowance when a cost sits on a threshold.
const THRESHOLD_SLACK: f64 = 1e-12;

pub fn verdict_from_thresholds(game: &CournotGame, player: Player, theta: f64, t: Thresholds) -> Dominance {
    if game.delta(player.other()) == 0.0 {
        Dominance::Indifferent
    } else if theta <= t.optimism_below + THRESHOLD_SLACK {
        Dominance::Optimism
    } else if theta >= t.pessimism_above - THRESHOLD_SLACK {
        Dominance::Pessimism
    } else {
        Dominance::Neither
    }
}

/// Maximin attitude over opponent attitudes:
/// `min(1, (2 - 3 theta_i - beta_i + 2 alpha_j) / (4 delta_j))`.
pub fn robust_attitude_closed_form(game: &CournotGame, player: Player, theta: f64) -> Result<f64> {
    let other = player.other();
    let delta_j = game.delta(other);
    if delta_j <= 0.0 {
        return Err(Error::UndefinedFormula("robust attitude needs a non-degenerate opponent cost set"));
    }
    let raw = (2.0 - 3.0 * theta - game.beta(player) + 2.0 * game.alpha(other)) / (4.0 * delta_j);
    Ok(raw.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn profile(p1: f64, p2: f64) -> AttitudeProfile {
        AttitudeProfile::from_values(p1, p2).unwrap()
    }

    // Oracle: damped best-response iteration x_i <- (1 - theta_i - x_j) / 2.
    fn iterate_best_responses(theta: [f64; 2]) -> [f64; 2] {
        let mut x = [0.0, 0.0];
        for _ in 0..200 {
            x = [(1.0 - theta[0] - x[1]) / 2.0, (1.0 - theta[1] - x[0]) / 2.0];
        }
        x
    }

    #[test]
    fn nash_examples() {
        let n = nash_equilibrium([0.0, 0.0]);
        assert_abs_diff_eq!(n.x[0], 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(n.u[1], 1.0 / 9.0, epsilon = 1e-15);

        let n = nash_equilibrium([0.1, 0.2]);
        let oracle = iterate_best_responses([0.1, 0.2]);
        assert_abs_diff_eq!(n.x[0], 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(n.x[1], 7.0 / 30.0, epsilon = 1e-15);
        assert_abs_diff_eq!(n.x[0], oracle[0], epsilon = 1e-14);
        assert_abs_diff_eq!(n.x[1], oracle[1], epsilon = 1e-14);
        assert_abs_diff_eq!(n.u[0], 1.0 / 9.0, epsilon = 1e-15);
        assert_abs_diff_eq!(n.u[1], 49.0 / 900.0, epsilon = 1e-15);

        let n = nash_equilibrium([0.5, 0.5]);
        assert_abs_diff_eq!(n.x[0], 1.0 / 6.0, epsilon = 1e-15);
        assert_abs_diff_eq!(n.x[1], 1.0 / 6.0, epsilon = 1e-15);
    }

    #[test]
    fn social_optimum_examples() {
        let s = social_optimum([0.1, 0.2]);
        assert_eq!(s.x[1], 0.0);
        assert_abs_diff_eq!(s.x[0], 0.45, epsilon = 1e-15);
        assert_abs_diff_eq!(s.value, 0.2025, epsilon = 1e-15);
        assert!(!s.tie);

        // 2-D grid oracle at step 1e-3
        let mut best = f64::NEG_INFINITY;
        for a in 0..=500 {
            for b in 0..=500 {
                let (x1, x2) = (a as f64 * 1e-3, b as f64 * 1e-3);
                best = best.max(profit(x1, x2, 0.1) + profit(x2, x1, 0.2));
            }
        }
        assert_abs_diff_eq!(best, 0.2025, epsilon = 1e-6);

        let s = social_optimum([0.0, 0.5]);
        assert_eq!(s.x, [0.5, 0.0]);
        assert_abs_diff_eq!(s.value, 0.25, epsilon = 1e-15);

        let s = social_optimum([0.3, 0.3]);
        assert!(s.tie);
        assert_abs_diff_eq!(s.x[0] + s.x[1], 0.35, epsilon = 1e-15);
        assert_eq!(s.x[0], s.x[1]);
    }

    #[test]
    fn bayesian_examples() {
        let x = bayesian_equilibrium([0.2, 0.2], [0.1, 0.3]).unwrap();
        assert_abs_diff_eq!(x[0], 1.9 / 6.0, epsilon = 1e-15);
        assert_abs_diff_eq!(x[1], 1.3 / 6.0, epsilon = 1e-15);

        let x = bayesian_equilibrium([0.0, 0.0], [0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(x[0], 1.0 / 3.0, epsilon = 1e-15);

        let theta = [0.15, 0.35];
        let x = bayesian_equilibrium(theta, theta).unwrap();
        let n = nash_equilibrium(theta);
        assert_abs_diff_eq!(x[0], n.x[0], epsilon = 1e-15);
        assert_abs_diff_eq!(x[1], n.x[1], epsilon = 1e-15);

        assert!(bayesian_equilibrium([0.6, 0.1], theta).is_err());
    }

    #[test]
    fn closed_form_equilibrium_examples() {
        let game = CournotGame::symmetric(0.1, 0.3).unwrap();
        let sets = uncertainty_equilibrium_closed_form(&game, profile(1.0, 1.0)).unwrap();
        for set in sets {
            assert_abs_diff_eq!(set.midpoint(), 0.85 / 3.0, epsilon = 1e-15);
            assert_abs_diff_eq!(set.lo(), 0.7 / 3.0, epsilon = 1e-15);
            assert_abs_diff_eq!(set.hi(), 1.0 / 3.0, epsilon = 1e-15);
        }
        let sets = uncertainty_equilibrium_closed_form(&game, profile(0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(sets[0].midpoint(), 0.25, epsilon = 1e-15);
        let sets = uncertainty_equilibrium_closed_form(&game, profile(0.0, 1.0)).unwrap();
        assert_abs_diff_eq!(sets[0].midpoint(), 0.25 - 0.2 / 6.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sets[1].midpoint(), 0.25 + 0.2 / 3.0, epsilon = 1e-15);

        let single = CournotGame::singleton(0.1, 0.2).unwrap();
        let nash = nash_equilibrium([0.1, 0.2]);
        for p in [profile(0.0, 0.0), profile(1.0, 0.3), profile(0.7, 1.0)] {
            let sets = uncertainty_equilibrium_closed_form(&single, p).unwrap();
            assert!(sets[0].width() == 0.0 && sets[1].width() == 0.0);
            assert_abs_diff_eq!(sets[0].lo(), nash.x[0], epsilon = 1e-15);
            assert_abs_diff_eq!(sets[1].lo(), nash.x[1], epsilon = 1e-15);
        }
    }

    #[test]
    fn closed_form_sets_stay_in_strategy_space_at_extremes() {
        for (a1, b1, a2, b2) in [(0.0, 0.5, 0.0, 0.5), (0.0, 0.5, 0.5, 0.5), (0.5, 0.5, 0.0, 0.5)] {
            let game = CournotGame::from_bounds(a1, b1, a2, b2).unwrap();
            for p1 in [0.0, 1.0] {
                for p2 in [0.0, 1.0] {
                    assert!(uncertainty_equilibrium_closed_form(&game, profile(p1, p2)).is_ok());
                }
            }
        }
    }

    #[test]
    fn interim_strategy_examples() {
        let game = CournotGame::symmetric(0.1, 0.3).unwrap();
        let params = CournotParams::new(game, 0.2, 0.2).unwrap();
        let x = interim_strategy(&params, profile(1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(x[0], 0.85 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(x[1], 0.85 / 3.0, epsilon = 1e-15);

        let params = CournotParams::new(game, 0.1, 0.3).unwrap();
        let x = interim_strategy(&params, profile(1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(x[0], 1.1 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(x[1], 0.5 / 3.0, epsilon = 1e-15);

        let single = CournotParams::new(CournotGame::singleton(0.1, 0.4).unwrap(), 0.1, 0.4).unwrap();
        let x = interim_strategy(&single, profile(1.0, 0.0)).unwrap();
        let n = nash_equilibrium([0.1, 0.4]);
        assert_abs_diff_eq!(x[0], n.x[0], epsilon = 1e-15);
        assert_abs_diff_eq!(x[1], n.x[1], epsilon = 1e-15);
    }

    #[test]
    fn threshold_examples() {
        let game = CournotGame::symmetric(0.1, 0.3).unwrap();
        let t = dominance_thresholds(&game, Player::One);
        assert_abs_diff_eq!(t.optimism_below, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(t.pessimism_above, 2.9 / 3.0, epsilon = 1e-15);
        assert_eq!(dominance_verdict(&game, Player::One, 0.3), Dominance::Optimism);

        let wide = CournotGame::symmetric(0.0, 0.5).unwrap();
        let t = dominance_thresholds(&wide, Player::Two);
        assert_abs_diff_eq!(t.optimism_below, 1.0 / 6.0, epsilon = 1e-15);
        assert_eq!(dominance_verdict(&wide, Player::Two, 0.3), Dominance::Neither);
        assert_eq!(dominance_verdict(&wide, Player::Two, 0.1), Dominance::Optimism);

        // both upper bounds below 1/3: optimism dominant for every cost
        let cheap = CournotGame::from_bounds(0.05, 0.3, 0.0, 0.32).unwrap();
        for player in Player::BOTH {
            let t = dominance_thresholds(&cheap, player);
            assert!(t.optimism_below > cheap.beta(player));
        }
    }

    #[test]
    fn robust_attitude_examples() {
        let cheap = CournotGame::from_bounds(0.05, 0.25, 0.1, 0.2).unwrap();
        for player in Player::BOTH {
            for theta in cheap.types(player).grid(5) {
                assert_eq!(robust_attitude_closed_form(&cheap, player, theta).unwrap(), 1.0);
            }
        }
        let singular = CournotGame::from_bounds(0.0, 0.5, 0.0, 0.5).unwrap();
        assert_eq!(robust_attitude_closed_form(&singular, Player::One, 0.5).unwrap(), 0.0);
        assert_abs_diff_eq!(
            robust_attitude_closed_form(&singular, Player::One, 0.4).unwrap(),
            0.15,
            epsilon = 1e-15
        );
        let flat = CournotGame::from_bounds(0.0, 0.5, 0.2, 0.2).unwrap();
        assert!(robust_attitude_closed_form(&flat, Player::One, 0.3).is_err());
    }

    #[test]
    fn parameter_bounds_are_enforced() {
        assert!(CournotGame::symmetric(0.1, 0.6).is_err());
        assert!(CournotGame::symmetric(-0.1, 0.3).is_err());
        let game = CournotGame::symmetric(0.1, 0.3).unwrap();
        assert!(CournotParams::new(game, 0.05, 0.2).is_err());
    }
}
