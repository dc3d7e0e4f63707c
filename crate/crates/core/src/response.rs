//! Attitude-weighted anticipated rewards and the best-response maps built on them.

use crate::attitude::{Attitude, Player};
use crate::error::{Error, Result};
use crate::game::{Game, Monotonicity};
use crate::interval::Interval;
use crate::search::{self, SearchConfig};

const DOMAIN_SLACK: f64 = 1e-12;

fn check_point(what: &'static str, value: f64, domain: Interval) -> Result<()> {
    if domain.contains_approx(value, DOMAIN_SLACK) {
        Ok(())
    } else {
        Err(Error::OutsideDomain {
            what,
            value,
            domain,
        })
    }
}

fn check_set(set: Interval, domain: Interval) -> Result<()> {
    if set.is_subset_of(&domain, DOMAIN_SLACK) {
        Ok(())
    } else {
        Err(Error::SetOutsideDomain { set, domain })
    }
}

/// Best and worst reward of `player` at its own strategy `own`, over the opponent
/// strategies in `opponent`. Monotone utilities are evaluated at the endpoints;
/// otherwise a grid scan with golden refinement is used.
pub fn opponent_extremes<G: Game + ?Sized>(
    game: &G,
    player: Player,
    own: f64,
    opponent: Interval,
    theta: f64,
    cfg: &SearchConfig,
) -> (f64, f64) {
    if opponent.is_singleton() {
        let u = game.payoff(player, own, opponent.lo(), theta);
        return (u, u);
    }
    let at_lo = || game.payoff(player, own, opponent.lo(), theta);
    let at_hi = || game.payoff(player, own, opponent.hi(), theta);
    match game.opponent_monotonicity(player) {
        Monotonicity::Decreasing => (at_lo(), at_hi()),
        Monotonicity::Increasing => (at_hi(), at_lo()),
        Monotonicity::Unknown => {
            let u = |xj: f64| game.payoff(player, own, xj, theta);
            let best = search::maximize(u, opponent, cfg).value;
            let worst = search::minimize(u, opponent, cfg).value;
            (best, worst)
        }
    }
}

pub(crate) fn anticipated_unchecked<G: Game + ?Sized>(
    game: &G,
    player: Player,
    own: f64,
    opponent: Interval,
    theta: f64,
    attitude: Attitude,
    cfg: &SearchConfig,
) -> f64 {
    let (best, worst) = opponent_extremes(game, player, own, opponent, theta, cfg);
    let pi = attitude.value();
    pi * best + (1.0 - pi) * worst
}

/// Anticipated reward of `player` playing `own` when the opponent is believed to
/// play somewhere in `opponent`: `pi * max u + (1 - pi) * min u`.
pub fn anticipated_reward<G: Game + ?Sized>(
    game: &G,
    player: Player,
    own: f64,
    opponent: Interval,
    theta: f64,
    attitude: Attitude,
    cfg: &SearchConfig,
) -> Result<f64> {
    check_point("own strategy", own, game.strategy_space(player))?;
    check_set(opponent, game.strategy_space(player.other()))?;
    check_point("theta", theta, game.type_space(player))?;
    Ok(anticipated_unchecked(game, player, own, opponent, theta, attitude, cfg))
}

/// The single opponent strategy at which the certainty utility equals the
/// attitude-weighted one, for utilities monotone in the opponent strategy.
pub fn hurwicz_point(opponent: Interval, attitude: Attitude, monotonicity: Monotonicity) -> Result<f64> {
    let pi = attitude.value();
    match monotonicity {
        Monotonicity::Decreasing => Ok(pi * opponent.lo() + (1.0 - pi) * opponent.hi()),
        Monotonicity::Increasing => Ok(pi * opponent.hi() + (1.0 - pi) * opponent.lo()),
        Monotonicity::Unknown => Err(Error::UnsupportedReduction),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BestResponse {
    pub strategy: f64,
    /// The grid scan found a separated near-tie; the smallest maximizer was kept.
    pub non_unique: bool,
}

pub(crate) fn best_response_unchecked<G: Game + ?Sized>(
    game: &G,
    player: Player,
    opponent: Interval,
    theta: f64,
    attitude: Attitude,
    cfg: &SearchConfig,
) -> BestResponse {
    let domain = game.strategy_space(player);
    let e = search::maximize(
        |x| anticipated_unchecked(game, player, x, opponent, theta, attitude, cfg),
        domain,
        cfg,
    );
    BestResponse {
        strategy: domain.clamp(e.arg),
        non_unique: e.tie,
    }
}

/// Maximizer over the player's strategy space of the anticipated reward.
pub fn best_response<G: Game + ?Sized>(
    game: &G,
    player: Player,
    opponent: Interval,
    theta: f64,
    attitude: Attitude,
    cfg: &SearchConfig,
) -> Result<BestResponse> {
    check_set(opponent, game.strategy_space(player.other()))?;
    check_point("theta", theta, game.type_space(player))?;
    Ok(best_response_unchecked(game, player, opponent, theta, attitude, cfg))
}

pub(crate) fn response_hull<G: Game + ?Sized>(
    game: &G,
    player: Player,
    opponent: Interval,
    attitude: Attitude,
    theta_grid: usize,
    cfg: &SearchConfig,
) -> (Interval, bool) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut non_unique = false;
    for theta in game.type_space(player).grid(theta_grid) {
        let r = best_response_unchecked(game, player, opponent, theta, attitude, cfg);
        lo = lo.min(r.strategy);
        hi = hi.max(r.strategy);
        non_unique |= r.non_unique;
    }
    (Interval::new(lo, hi).expect("best responses are finite"), non_unique)
}

/// Hull of the best responses over the player's own type set: what the opponent,
/// who does not know this player's type, must expect it to play.
pub fn response_set<G: Game + ?Sized>(
    game: &G,
    player: Player,
    opponent: Interval,
    attitude: Attitude,
    theta_grid: usize,
    cfg: &SearchConfig,
) -> Result<Interval> {
    if theta_grid < 2 {
        return Err(Error::Resolution {
            min: 2,
            got: theta_grid,
        });
    }
    check_set(opponent, game.strategy_space(player.other()))?;
    Ok(response_hull(game, player, opponent, attitude, theta_grid, cfg).0)
}

/// Diagnostic version of [`response_set`] that also looks for holes in the image.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseScan {
    pub hull: Interval,
    pub non_unique: bool,
    /// Type sub-intervals across which the best response jumps by more than
    /// `jump_tolerance` no matter how finely they are bisected.
    pub jumps: Vec<(f64, f64)>,
}

pub fn response_set_diagnostic<G: Game + ?Sized>(
    game: &G,
    player: Player,
    opponent: Interval,
    attitude: Attitude,
    theta_grid: usize,
    jump_tolerance: f64,
    cfg: &SearchConfig,
) -> Result<ResponseScan> {
    if theta_grid < 2 {
        return Err(Error::Resolution {
            min: 2,
            got: theta_grid,
        });
    }
    check_set(opponent, game.strategy_space(player.other()))?;
    let respond = |theta: f64| best_response_unchecked(game, player, opponent, theta, attitude, cfg);
    let thetas = game.type_space(player).grid(theta_grid);
    let responses: Vec<BestResponse> = thetas.iter().map(|&t| respond(t)).collect();
    let non_unique = responses.iter().any(|r| r.non_unique);
    let (lo, hi) = responses
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(r.strategy), hi.max(r.strategy))
        });

    let mut jumps = Vec::new();
    for k in 1..thetas.len() {
        let (mut ta, mut tb) = (thetas[k - 1], thetas[k]);
        let (mut ra, mut rb) = (responses[k - 1].strategy, responses[k].strategy);
        if (ra - rb).abs() <= jump_tolerance {
            continue;
        }
        for _ in 0..40 {
            let tm = 0.5 * (ta + tb);
            let rm = respond(tm).strategy;
            if (rm - ra).abs() >= (rb - rm).abs() {
                tb = tm;
                rb = rm;
            } else {
                ta = tm;
                ra = rm;
            }
        }
        if (ra - rb).abs() > jump_tolerance {
            jumps.push((ta, tb));
        }
    }
    Ok(ResponseScan {
        hull: Interval::new(lo, hi).expect("best responses are finite"),
        non_unique,
        jumps,
    })
}

/// Full-information best response of `player` to a known opponent strategy.
pub fn certainty_best_response<G: Game + ?Sized>(
    game: &G,
    player: Player,
    opponent: f64,
    theta: f64,
    cfg: &SearchConfig,
) -> f64 {
    let domain = game.strategy_space(player);
    let e = search::maximize(|x| game.payoff(player, x, opponent, theta), domain, cfg);
    domain.clamp(e.arg)
}

/// Hull of full-information best responses of `player` over opponent strategies
/// in `opponent` and own types in the type set, sampled on a product grid.
pub fn certainty_response_set<G: Game + ?Sized>(
    game: &G,
    player: Player,
    opponent: Interval,
    strategy_grid: usize,
    theta_grid: usize,
    cfg: &SearchConfig,
) -> Result<Interval> {
    if strategy_grid < 2 || theta_grid < 2 {
        return Err(Error::Resolution {
            min: 2,
            got: strategy_grid.min(theta_grid),
        });
    }
    check_set(opponent, game.strategy_space(player.other()))?;
    let thetas = game.type_space(player).grid(theta_grid);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for xj in opponent.grid(strategy_grid) {
        for &theta in &thetas {
            let r = certainty_best_response(game, player, xj, theta, cfg);
            lo = lo.min(r);
            hi = hi.max(r);
        }
    }
    Ok(Interval::new(lo, hi).expect("best responses are finite"))
}
