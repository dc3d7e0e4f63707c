//! Two consumers of a shared resource whose environment degrades exponentially
//! in total consumption: `u_i = x_i - exp(-theta_i + x_i + x_j)`, with
//! `x_i` in `[0, 1]` and `theta_i` in `[alpha, beta]`, `0 < alpha < 2 alpha < beta < 1`.
//!
//! Several textbook expressions for this game are written without clipping to
//! `[0, 1]`. Each profile is therefore reported in two forms: `paper` keeps the
//! unclipped algebra, `feasible` applies `[z]_0^1` so strategies stay inside
//! the strategy space. The numeric solver reproduces the feasible form.

use serde::Serialize;

use crate::attitude::{Corner, Player, Stance};
use crate::error::{Error, Result};
use crate::game::{Game, Monotonicity};
use crate::interval::Interval;

pub fn utility(own: f64, other: f64, theta: f64) -> f64 {
    own - (-theta + own + other).exp()
}

/// `[z]_0^1`
pub fn clip01(z: f64) -> f64 {
    z.clamp(0.0, 1.0)
}

/// Full-information best response `[theta_i - x_j]_0^1`.
pub fn certainty_best_response(theta: f64, other: f64) -> f64 {
    clip01(theta - other)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExternalityGame {
    types: [Interval; 2],
}

impl ExternalityGame {
    /// Symmetric game with `theta_i` in `[alpha, beta]`.
    pub fn symmetric(alpha: f64, beta: f64) -> Result<Self> {
        check_bounds(alpha, beta)?;
        let t = Interval::new(alpha, beta)?;
        Ok(Self { types: [t, t] })
    }

    /// Arbitrary type sets inside `[0, 1]`; only the numeric machinery covers these.
    pub fn with_types(types1: Interval, types2: Interval) -> Result<Self> {
        for t in [types1, types2] {
            if t.lo() < 0.0 || t.hi() > 1.0 {
                return Err(Error::InvalidParameters(format!("type set {t} must lie in [0, 1]")));
            }
        }
        Ok(Self {
            types: [types1, types2],
        })
    }

    pub fn types(&self, player: Player) -> Interval {
        self.types[player.slot()]
    }
}

fn check_bounds(alpha: f64, beta: f64) -> Result<()> {
    if !(0.0 < alpha && 2.0 * alpha < beta && beta < 1.0) {
        return Err(Error::InvalidParameters(format!(
            "alpha = {alpha}, beta = {beta} must satisfy 0 < alpha < 2 alpha < beta < 1"
        )));
    }
    Ok(())
}

impl Game for ExternalityGame {
    fn utility(&self, player: Player, x1: f64, x2: f64, theta: f64) -> f64 {
        match player {
            Player::One => utility(x1, x2, theta),
            Player::Two => utility(x2, x1, theta),
        }
    }

    fn strategy_space(&self, _player: Player) -> Interval {
        Interval::new(0.0, 1.0).expect("constant interval")
    }

    fn type_space(&self, player: Player) -> Interval {
        self.types(player)
    }

    fn opponent_monotonicity(&self, _player: Player) -> Monotonicity {
        Monotonicity::Decreasing
    }

    fn name(&self) -> &str {
        "externality"
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExternalityParams {
    pub alpha: f64,
    pub beta: f64,
    pub theta: [f64; 2],
}

impl ExternalityParams {
    pub fn new(alpha: f64, beta: f64, theta1: f64, theta2: f64) -> Result<Self> {
        check_bounds(alpha, beta)?;
        for (k, theta) in [theta1, theta2].into_iter().enumerate() {
            if !(alpha..=beta).contains(&theta) {
                return Err(Error::InvalidParameters(format!(
                    "theta{} = {theta} must lie in [{alpha}, {beta}]",
                    k + 1
                )));
            }
        }
        Ok(Self {
            alpha,
            beta,
            theta: [theta1, theta2],
        })
    }

    pub fn game(&self) -> ExternalityGame {
        ExternalityGame::symmetric(self.alpha, self.beta).expect("validated bounds")
    }

    pub fn theta(&self, player: Player) -> f64 {
        self.theta[player.slot()]
    }

    pub fn swapped(&self) -> Self {
        Self {
            theta: [self.theta[1], self.theta[0]],
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CertaintyNash {
    Point([f64; 2]),
    /// Equal types: every `(x, theta - x)` with `x` in `[0, theta]` is an equilibrium.
    Continuum { total: f64 },
}

/// Full-information equilibrium: the consumer with the larger type consumes its
/// type, the other consumes nothing.
pub fn certainty_nash(theta: [f64; 2]) -> CertaintyNash {
    if theta[0] < theta[1] {
        CertaintyNash::Point([0.0, theta[1]])
    } else if theta[1] < theta[0] {
        CertaintyNash::Point([theta[0], 0.0])
    } else {
        CertaintyNash::Continuum { total: theta[0] }
    }
}

/// Sets, strategies and ex-post rewards of one profile in one form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FormValues {
    pub sets: [Interval; 2],
    pub x: [f64; 2],
    pub u: [f64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileEquilibrium {
    pub corner: Corner,
    pub paper: FormValues,
    pub feasible: FormValues,
}

fn equilibrium_set(alpha: f64, beta: f64, corner: Corner, player: Player) -> (f64, f64) {
    match (corner.stance(player), corner.stance(player.other())) {
        (Stance::Optimist, Stance::Optimist) => (alpha / 2.0, beta - alpha / 2.0),
        (Stance::Pessimist, Stance::Pessimist) => (alpha - beta / 2.0, beta / 2.0),
        (Stance::Optimist, Stance::Pessimist) => (alpha, beta),
        (Stance::Pessimist, Stance::Optimist) => (0.0, 0.0),
    }
}

/// Closed-form equilibrium of one attitude profile.
pub fn profile_equilibrium(params: &ExternalityParams, corner: Corner) -> ProfileEquilibrium {
    let (a, b) = (params.alpha, params.beta);
    let raw = [
        equilibrium_set(a, b, corner, Player::One),
        equilibrium_set(a, b, corner, Player::Two),
    ];
    let form = |clip: fn(f64) -> f64| -> FormValues {
        let sets = raw.map(|(lo, hi)| Interval::new(clip(lo), clip(hi)).expect("ordered endpoints"));
        let respond = |player: Player| {
            let opp = sets[player.other().slot()];
            let anchor = match corner.stance(player) {
                Stance::Optimist => opp.lo(),
                Stance::Pessimist => opp.hi(),
            };
            clip(params.theta(player) - anchor)
        };
        let x = [respond(Player::One), respond(Player::Two)];
        FormValues {
            sets,
            x,
            u: [utility(x[0], x[1], params.theta[0]), utility(x[1], x[0], params.theta[1])],
        }
    };
    ProfileEquilibrium {
        corner,
        paper: form(|z| z),
        feasible: form(clip01),
    }
}

/// Optimism-minus-pessimism reward gaps of one player, against each opponent stance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Margins {
    /// Opponent pessimistic: `U_i(O, P) - U_i(P, P)`.
    pub vs_pessimist: f64,
    /// Opponent optimistic: `U_i(O, O) - U_i(P, O)`.
    pub vs_optimist: f64,
}

impl Margins {
    pub fn min(&self) -> f64 {
        self.vs_pessimist.min(self.vs_optimist)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominanceCertificate {
    pub player: Player,
    pub paper: Margins,
    pub feasible: Margins,
    /// Smallest margin over the opponent type grid, per form.
    pub paper_worst: f64,
    pub feasible_worst: f64,
    pub grid_points: usize,
}

impl DominanceCertificate {
    pub fn holds_paper(&self) -> bool {
        self.paper_worst >= 0.0
    }

    pub fn holds_feasible(&self) -> bool {
        self.feasible_worst >= 0.0
    }

    pub fn forms_agree(&self) -> bool {
        self.holds_paper() == self.holds_feasible()
    }
}

fn margins(params: &ExternalityParams, player: Player) -> (Margins, Margins) {
    let u = |corner: Corner| {
        let e = profile_equilibrium(params, corner);
        (e.paper.u[player.slot()], e.feasible.u[player.slot()])
    };
    let with = |own: Stance, opp: Stance| Corner::OO.with(player, own).with(player.other(), opp);
    let (op_p, op_f) = u(with(Stance::Optimist, Stance::Pessimist));
    let (pp_p, pp_f) = u(with(Stance::Pessimist, Stance::Pessimist));
    let (oo_p, oo_f) = u(with(Stance::Optimist, Stance::Optimist));
    let (po_p, po_f) = u(with(Stance::Pessimist, Stance::Optimist));
    (
        Margins {
            vs_pessimist: op_p - pp_p,
            vs_optimist: oo_p - po_p,
        },
        Margins {
            vs_pessimist: op_f - pp_f,
            vs_optimist: oo_f - po_f,
        },
    )
}

/// Checks that optimism beats pessimism for `player` against both opponent
/// stances, at the given types and across a grid of opponent types.
pub fn optimism_dominance_certificate(
    params: &ExternalityParams,
    player: Player,
    grid_points: usize,
) -> DominanceCertificate {
    let (paper, feasible) = margins(params, player);
    let mut paper_worst = paper.min();
    let mut feasible_worst = feasible.min();
    let other = player.other();
    for theta_j in Interval::new(params.alpha, params.beta).expect("validated").grid(grid_points) {
        let mut p = *params;
        p.theta[other.slot()] = theta_j;
        let (mp, mf) = margins(&p, player);
        paper_worst = paper_worst.min(mp.min());
        feasible_worst = feasible_worst.min(mf.min());
    }
    DominanceCertificate {
        player,
        paper,
        feasible,
        paper_worst,
        feasible_worst,
        grid_points,
    }
}
