use serde::Serialize;

use super::{linspace, weighted_extremes, zoom_argmax, OracleConfig};
use crate::attitude::{AttitudeProfile, Player};
use crate::error::{Error, Result};
use crate::game::Game;
use crate::interval::Interval;

/// Equilibrium sets represented by the best responses of a few sampled types
/// of each player, indexed by type.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledEquilibrium {
    pub types: [Vec<f64>; 2],
    pub clouds: [Vec<f64>; 2],
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
    pub damped: bool,
}

impl SampledEquilibrium {
    pub fn hulls(&self) -> [Interval; 2] {
        self.clouds.clone().map(|c| {
            let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            Interval::new(lo, hi).expect("finite responses")
        })
    }

    /// Strategy of `player` with type `theta` and attitude `pi` against the
    /// opponent's sampled set.
    pub fn respond<G: Game + ?Sized>(&self, game: &G, player: Player, theta: f64, pi: f64, cfg: &OracleConfig) -> f64 {
        respond(game, player, theta, pi, &self.clouds[player.other().slot()], cfg)
    }
}

fn respond<G: Game + ?Sized>(game: &G, player: Player, theta: f64, pi: f64, opp: &[f64], cfg: &OracleConfig) -> f64 {
    let space = game.strategy_space(player);
    zoom_argmax(
        |x| weighted_extremes(|y| game.payoff(player, x, y, theta), opp, pi),
        space.lo(),
        space.hi(),
        cfg.coarse_points,
    )
}

fn gap(a: &[Vec<f64>; 2], b: &[Vec<f64>; 2]) -> f64 {
    let mut d: f64 = 0.0;
    for p in 0..2 {
        for (x, y) in a[p].iter().zip(&b[p]) {
            d = d.max((x - y).abs());
        }
    }
    d
}

/// Iterates the sampled response maps to a fixed point, averaging successive
/// states once a two-cycle or a stall appears. `warm` seeds the iteration
/// with an earlier result on the same type grids.
pub fn sampled_equilibrium<G: Game + ?Sized>(
    game: &G,
    profile: AttitudeProfile,
    warm: Option<&SampledEquilibrium>,
    cfg: &OracleConfig,
) -> Result<SampledEquilibrium> {
    if cfg.sample_types < 2 {
        return Err(Error::Resolution {
            min: 2,
            got: cfg.sample_types,
        });
    }
    let types = [Player::One, Player::Two].map(|p| {
        let t = game.type_space(p);
        linspace(t.lo(), t.hi(), cfg.sample_types)
    });
    let mut state = match warm {
        Some(w) if w.types == types => w.clouds.clone(),
        _ => [Player::One, Player::Two].map(|p| {
            let s = game.strategy_space(p);
            linspace(s.lo(), s.hi(), types[p.slot()].len().max(2))
        }),
    };
    let pis = [profile.p1.value(), profile.p2.value()];
    let mut previous: Option<[Vec<f64>; 2]> = None;
    let mut damped = false;
    let mut residual = f64::INFINITY;
    let mut checkpoint = (0usize, f64::INFINITY);
    for k in 0..cfg.max_iter {
        let next = [Player::One, Player::Two].map(|p| {
            let opp = &state[p.other().slot()];
            types[p.slot()]
                .iter()
                .map(|&theta| respond(game, p, theta, pis[p.slot()], opp, cfg))
                .collect::<Vec<f64>>()
        });
        residual = gap(&next, &state);
        if residual <= cfg.tolerance {
            return Ok(SampledEquilibrium {
                types,
                clouds: next,
                iterations: k + 1,
                residual,
                converged: true,
                damped,
            });
        }
        if previous.as_ref().is_some_and(|p| gap(&next, p) <= cfg.tolerance) {
            damped = true;
        }
        if !damped && k >= checkpoint.0 + 200 {
            damped = residual > 0.5 * checkpoint.1;
            checkpoint = (k, residual);
        }
        let new_state = if damped {
            let mut avg = next.clone();
            for p in 0..2 {
                for (a, s) in avg[p].iter_mut().zip(&state[p]) {
                    *a = 0.5 * (*a + s);
                }
            }
            avg
        } else {
            next
        };
        previous = Some(std::mem::replace(&mut state, new_state));
    }
    Ok(SampledEquilibrium {
        types,
        clouds: state,
        iterations: cfg.max_iter,
        residual,
        converged: false,
        damped,
    })
}
