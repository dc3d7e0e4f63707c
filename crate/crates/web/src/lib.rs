//! Browser bindings: each export takes plain numbers and returns a JSON string.

use attitude_core::attitude_game::{
    cournot_robust_attitude, pareto_analysis, pure_nash_profiles, CornerEquilibria, MatrixEntry, OpponentType,
    RobustOptions,
};
use attitude_core::cournot::{self, CournotGame};
use attitude_core::externality::ExternalityParams;
use attitude_core::{
    ex_post_outcome, solve_uncertainty_equilibrium, AttitudeProfile, Corner, Game, Interval, Player, SolverConfig,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn solver() -> SolverConfig {
    SolverConfig {
        theta_grid: 33,
        ..SolverConfig::default()
    }
}

fn pair(i: Interval) -> [f64; 2] {
    [i.lo(), i.hi()]
}

#[derive(Serialize)]
struct SweepPoint {
    pi1: f64,
    sets: [[f64; 2]; 2],
    closed_form: [[f64; 2]; 2],
    x: [f64; 2],
    u: [f64; 2],
}

#[derive(Serialize)]
struct Sweep {
    pi2: f64,
    points: Vec<SweepPoint>,
}

/// Cournot equilibrium sets and ex-post outcome along `steps` values of
/// player 1's attitude, with player 2's attitude fixed.
pub fn cournot_sweep(bounds: [f64; 4], theta: [f64; 2], pi2: f64, steps: usize) -> attitude_core::Result<String> {
    let game = CournotGame::from_bounds(bounds[0], bounds[1], bounds[2], bounds[3])?;
    let cfg = solver();
    let mut points = Vec::with_capacity(steps);
    let mut warm = None;
    for k in 0..steps.max(2) {
        let pi1 = k as f64 / (steps.max(2) - 1) as f64;
        let profile = AttitudeProfile::from_values(pi1, pi2)?;
        let eq = solve_uncertainty_equilibrium(&game, profile, warm, &cfg)?;
        warm = Some(eq.sets);
        let out = ex_post_outcome(&game, &eq, theta, profile, &cfg.search)?;
        let closed = cournot::uncertainty_equilibrium_closed_form(&game, profile)?;
        points.push(SweepPoint {
            pi1,
            sets: eq.sets.map(pair),
            closed_form: closed.map(pair),
            x: out.x,
            u: out.u,
        });
    }
    Ok(serde_json::to_string(&Sweep { pi2, points }).expect("plain numbers serialize"))
}

#[derive(Serialize)]
struct Cell {
    corner: String,
    u: Option<[f64; 2]>,
    nash: bool,
    pareto_efficient: bool,
}

#[derive(Serialize)]
struct Matrix {
    game: &'static str,
    cells: Vec<Cell>,
    unique_nash: Option<String>,
}

fn matrix_json<G: Game>(game: &G, name: &'static str, theta: [f64; 2]) -> attitude_core::Result<String> {
    let cfg = solver();
    let matrix = CornerEquilibria::solve(game, &cfg)?.matrix(game, theta, &cfg)?;
    let (nash, pareto) = if matrix.is_complete() {
        (pure_nash_profiles(&matrix)?, Some(pareto_analysis(&matrix)?))
    } else {
        (Vec::new(), None)
    };
    let cells = Corner::ALL
        .iter()
        .map(|&c| Cell {
            corner: c.to_string(),
            u: match matrix.entry(c) {
                MatrixEntry::Payoffs { u, .. } => Some(*u),
                MatrixEntry::Failed { .. } => None,
            },
            nash: nash.iter().any(|n| n.corner == c),
            pareto_efficient: pareto.as_ref().is_some_and(|p| p.is_efficient(c)),
        })
        .collect();
    let unique_nash = (nash.len() == 1).then(|| nash[0].corner.to_string());
    Ok(serde_json::to_string(&Matrix {
        game: name,
        cells,
        unique_nash,
    })
    .expect("plain values serialize"))
}

/// 2x2 attitude matrix of the Cournot game at the given costs.
pub fn cournot_matrix(bounds: [f64; 4], theta: [f64; 2]) -> attitude_core::Result<String> {
    let game = CournotGame::from_bounds(bounds[0], bounds[1], bounds[2], bounds[3])?;
    matrix_json(&game, "cournot", theta)
}

/// 2x2 attitude matrix of the externality game.
pub fn externality_matrix(alpha: f64, beta: f64, theta: [f64; 2]) -> attitude_core::Result<String> {
    let params = ExternalityParams::new(alpha, beta, theta[0], theta[1])?;
    matrix_json(&params.game(), "externality", theta)
}

#[derive(Serialize)]
struct Robust {
    player: u8,
    pi: f64,
    value: f64,
    closed_form: Option<f64>,
    curve: Vec<(f64, f64)>,
}

/// Guaranteed reward of `player` against every opponent attitude and type,
/// as a function of its own attitude.
pub fn cournot_robust(bounds: [f64; 4], player: u8, theta: f64, points: usize) -> attitude_core::Result<String> {
    let game = CournotGame::from_bounds(bounds[0], bounds[1], bounds[2], bounds[3])?;
    let player = if player == 2 { Player::Two } else { Player::One };
    let options = RobustOptions {
        pi_grid: points.max(2),
        opponent_pi_grid: 6,
        opponent_type: OpponentType::WorstCase { grid: 5 },
    };
    let r = cournot_robust_attitude(&game, player, theta, &options, &solver())?;
    Ok(serde_json::to_string(&Robust {
        player: player.number(),
        pi: r.pi,
        value: r.value,
        closed_form: r.closed_form,
        curve: r.curve,
    })
    .expect("plain numbers serialize"))
}

fn js(r: attitude_core::Result<String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = cournotSweep)]
#[allow(clippy::too_many_arguments)]
pub fn cournot_sweep_js(
    alpha1: f64,
    beta1: f64,
    alpha2: f64,
    beta2: f64,
    theta1: f64,
    theta2: f64,
    pi2: f64,
    steps: usize,
) -> Result<String, JsError> {
    js(cournot_sweep([alpha1, beta1, alpha2, beta2], [theta1, theta2], pi2, steps))
}

#[wasm_bindgen(js_name = cournotMatrix)]
pub fn cournot_matrix_js(
    alpha1: f64,
    beta1: f64,
    alpha2: f64,
    beta2: f64,
    theta1: f64,
    theta2: f64,
) -> Result<String, JsError> {
    js(cournot_matrix([alpha1, beta1, alpha2, beta2], [theta1, theta2]))
}

#[wasm_bindgen(js_name = externalityMatrix)]
pub fn externality_matrix_js(alpha: f64, beta: f64, theta1: f64, theta2: f64) -> Result<String, JsError> {
    js(externality_matrix(alpha, beta, [theta1, theta2]))
}

#[wasm_bindgen(js_name = cournotRobust)]
pub fn cournot_robust_js(
    alpha1: f64,
    beta1: f64,
    alpha2: f64,
    beta2: f64,
    player: u8,
    theta: f64,
    points: usize,
) -> Result<String, JsError> {
    js(cournot_robust([alpha1, beta1, alpha2, beta2], player, theta, points))
}
