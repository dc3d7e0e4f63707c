use serde::Serialize;

use super::sampled::{sampled_equilibrium, SampledEquilibrium};
use super::{linspace, OracleConfig};
use crate::attitude::{Attitude, AttitudeProfile, Dominance, Player};
use crate::error::{Error, Result};
use crate::game::Game;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleDominance {
    pub verdict: Dominance,
    /// Smallest and largest gain of optimism over pessimism.
    pub min_gain: f64,
    pub max_gain: f64,
    /// Opponent attitude and type at the smallest gain.
    pub witness: (f64, f64),
}

fn profile(player: Player, own: f64, other: f64) -> Result<AttitudeProfile> {
    let (a, b) = (Attitude::new(own)?, Attitude::new(other)?);
    Ok(match player {
        Player::One => AttitudeProfile::new(a, b),
        Player::Two => AttitudeProfile::new(b, a),
    })
}

/// Ex-post reward of `player` with both players responding to the sampled
/// equilibrium of `(pi_i, pi_j)`.
fn reward<G: Game + ?Sized>(
    game: &G,
    eq: &SampledEquilibrium,
    player: Player,
    (theta_i, pi_i): (f64, f64),
    (theta_j, pi_j): (f64, f64),
    cfg: &OracleConfig,
) -> f64 {
    let xi = eq.respond(game, player, theta_i, pi_i, cfg);
    let xj = eq.respond(game, player.other(), theta_j, pi_j, cfg);
    game.payoff(player, xi, xj, theta_i)
}

fn check_theta<G: Game + ?Sized>(game: &G, player: Player, theta: f64) -> Result<()> {
    let domain = game.type_space(player);
    if theta < domain.lo() - 1e-12 || theta > domain.hi() + 1e-12 {
        return Err(Error::OutsideDomain {
            what: "theta",
            value: theta,
            domain,
        });
    }
    Ok(())
}

/// Decides dominance by enumerating opponent attitudes {1, 0} and a grid of
/// opponent types, solving each attitude profile on sampled sets.
pub fn exhaustive_dominance<G: Game + ?Sized>(
    game: &G,
    player: Player,
    theta: f64,
    theta_j_points: usize,
    cfg: &OracleConfig,
) -> Result<OracleDominance> {
    if theta_j_points < 2 {
        return Err(Error::Resolution {
            min: 2,
            got: theta_j_points,
        });
    }
    check_theta(game, player, theta)?;
    let mut eqs = Vec::new();
    for own in [1.0, 0.0] {
        for other in [1.0, 0.0] {
            eqs.push(((own, other), sampled_equilibrium(game, profile(player, own, other)?, None, cfg)?));
        }
    }
    let find = |own: f64, other: f64| &eqs.iter().find(|(k, _)| *k == (own, other)).expect("all profiles").1;
    let tj = game.type_space(player.other());
    let mut min_gain = f64::INFINITY;
    let mut max_gain = f64::NEG_INFINITY;
    let mut witness = (f64::NAN, f64::NAN);
    for theta_j in linspace(tj.lo(), tj.hi(), theta_j_points) {
        for pj in [1.0, 0.0] {
            let o = reward(game, find(1.0, pj), player, (theta, 1.0), (theta_j, pj), cfg);
            let p = reward(game, find(0.0, pj), player, (theta, 0.0), (theta_j, pj), cfg);
            let gain = o - p;
            if gain < min_gain {
                min_gain = gain;
                witness = (pj, theta_j);
            }
            if gain > max_gain {
                max_gain = gain;
            }
        }
    }
    let tol = cfg.dominance_tolerance;
    let verdict = if min_gain >= -tol && max_gain <= tol {
        Dominance::Indifferent
    } else if min_gain >= -tol {
        Dominance::Optimism
    } else if max_gain <= tol {
        Dominance::Pessimism
    } else {
        Dominance::Neither
    };
    Ok(OracleDominance {
        verdict,
        min_gain,
        max_gain,
        witness,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaximinSurface {
    pub pis: Vec<f64>,
    pub opponent_pis: Vec<f64>,
    pub opponent_types: Vec<f64>,
    /// `surface[a][b]`: worst reward over opponent types at `(pis[a], opponent_pis[b])`.
    pub surface: Vec<Vec<f64>>,
    /// Worst reward over the opponent grid for each own attitude.
    pub guaranteed: Vec<f64>,
    pub pi: f64,
    pub value: f64,
    /// The guaranteed reward is the same for every attitude.
    pub flat: bool,
}

/// Maximin attitude by enumerating own attitudes, opponent attitudes and
/// opponent types.
pub fn exhaustive_maximin<G: Game + ?Sized>(
    game: &G,
    player: Player,
    theta: f64,
    pi_points: usize,
    theta_j_points: usize,
    cfg: &OracleConfig,
) -> Result<MaximinSurface> {
    if pi_points < 2 || theta_j_points < 1 || cfg.opponent_attitude_points < 2 {
        return Err(Error::Resolution {
            min: 2,
            got: pi_points.min(cfg.opponent_attitude_points),
        });
    }
    check_theta(game, player, theta)?;
    let pis = linspace(0.0, 1.0, pi_points);
    let opponent_pis = linspace(0.0, 1.0, cfg.opponent_attitude_points);
    let tj = game.type_space(player.other());
    let opponent_types = linspace(tj.lo(), tj.hi(), theta_j_points);
    let mut warm: Vec<Option<SampledEquilibrium>> = vec![None; opponent_pis.len()];
    let mut surface = Vec::with_capacity(pis.len());
    for &pi in &pis {
        let mut row = Vec::with_capacity(opponent_pis.len());
        for (b, &pj) in opponent_pis.iter().enumerate() {
            let eq = sampled_equilibrium(game, profile(player, pi, pj)?, warm[b].as_ref(), cfg)?;
            let mut worst = f64::INFINITY;
            for &theta_j in &opponent_types {
                let u = reward(game, &eq, player, (theta, pi), (theta_j, pj), cfg);
                if u < worst {
                    worst = u;
                }
            }
            row.push(worst);
            warm[b] = Some(eq);
        }
        surface.push(row);
    }
    let guaranteed: Vec<f64> = surface
        .iter()
        .map(|row| row.iter().cloned().fold(f64::INFINITY, f64::min))
        .collect();
    let mut best = 0;
    for (a, &g) in guaranteed.iter().enumerate() {
        if g > guaranteed[best] {
            best = a;
        }
    }
    let lowest = guaranteed.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(MaximinSurface {
        pi: pis[best],
        value: guaranteed[best],
        flat: guaranteed[best] - lowest <= cfg.dominance_tolerance,
        pis,
        opponent_pis,
        opponent_types,
        surface,
        guaranteed,
    })
}
