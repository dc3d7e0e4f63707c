//! End-to-end agreement checks between the closed forms, the interval solver
//! and the brute-force oracle.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::attitude::{AttitudeProfile, Corner, Dominance, Player};
use crate::attitude_game::{build_attitude_matrix, pure_nash_profiles};
use crate::cournot::{self, CournotGame, CournotParams, NashPoint, Thresholds};
use crate::equilibrium::{ex_post_outcome, solve_consistent_sets, solve_uncertainty_equilibrium, SolverConfig};
use crate::error::{Error, Result};
use crate::externality::{self, ExternalityParams, ProfileEquilibrium};
use crate::interval::Interval;
use crate::oracle::{exhaustive_dominance, exhaustive_maximin, grid_equilibrium, OracleConfig};

/// The closed forms under test. Replacing an entry lets a test confirm that
/// the suite notices a wrong formula.
#[derive(Clone, Copy)]
pub struct ClosedForms {
    pub nash: fn([f64; 2]) -> NashPoint,
    pub uncertainty_equilibrium: fn(&CournotGame, AttitudeProfile) -> Result<[Interval; 2]>,
    pub interim_strategy: fn(&CournotParams, AttitudeProfile) -> Result<[f64; 2]>,
    pub dominance_thresholds: fn(&CournotGame, Player) -> Thresholds,
    pub robust_attitude: fn(&CournotGame, Player, f64) -> Result<f64>,
    pub bayesian: fn([f64; 2], [f64; 2]) -> Result<[f64; 2]>,
    pub externality_profile: fn(&ExternalityParams, Corner) -> ProfileEquilibrium,
}

impl Default for ClosedForms {
    fn default() -> Self {
        Self {
            nash: cournot::nash_equilibrium,
            uncertainty_equilibrium: cournot::uncertainty_equilibrium_closed_form,
            interim_strategy: cournot::interim_strategy,
            dominance_thresholds: cournot::dominance_thresholds,
            robust_attitude: cournot::robust_attitude_closed_form,
            bayesian: cournot::bayesian_equilibrium,
            externality_profile: externality::profile_equilibrium,
        }
    }
}

impl fmt::Debug for ClosedForms {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ClosedForms")
    }
}

/// A deliberate error planted in one closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Fault {
    Nash,
    UncertaintyEquilibrium,
    InterimStrategy,
    DominanceThresholds,
    RobustAttitude,
    Bayesian,
    Externality,
}

impl Fault {
    pub const ALL: [Fault; 7] = [
        Fault::Nash,
        Fault::UncertaintyEquilibrium,
        Fault::InterimStrategy,
        Fault::DominanceThresholds,
        Fault::RobustAttitude,
        Fault::Bayesian,
        Fault::Externality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Fault::Nash => "nash",
            Fault::UncertaintyEquilibrium => "uncertainty-equilibrium",
            Fault::InterimStrategy => "interim-strategy",
            Fault::DominanceThresholds => "dominance-thresholds",
            Fault::RobustAttitude => "robust-attitude",
            Fault::Bayesian => "bayesian",
            Fault::Externality => "externality",
        }
    }
}

impl FromStr for Fault {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Fault::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidParameters(format!("unknown fault `{s}`")))
    }
}

fn bad_nash(theta: [f64; 2]) -> NashPoint {
    let mut n = cournot::nash_equilibrium(theta);
    n.x[0] += 0.01;
    n
}

fn bad_uncertainty_equilibrium(game: &CournotGame, profile: AttitudeProfile) -> Result<[Interval; 2]> {
    let [a, b] = cournot::uncertainty_equilibrium_closed_form(game, profile)?;
    Ok([Interval::new(a.lo() + 0.01, a.hi() + 0.01)?, b])
}

fn bad_interim(params: &CournotParams, profile: AttitudeProfile) -> Result<[f64; 2]> {
    let [a, b] = cournot::interim_strategy(params, profile)?;
    Ok([a, b + 0.01])
}

fn bad_thresholds(game: &CournotGame, player: Player) -> Thresholds {
    let mut t = cournot::dominance_thresholds(game, player);
    t.optimism_below -= 0.3;
    t
}

fn bad_robust(game: &CournotGame, player: Player, theta: f64) -> Result<f64> {
    Ok(cournot::robust_attitude_closed_form(game, player, theta)? + 0.05)
}

fn bad_bayesian(mu: [f64; 2], theta: [f64; 2]) -> Result<[f64; 2]> {
    let [a, b] = cournot::bayesian_equilibrium(mu, theta)?;
    Ok([a + 1e-3, b])
}

fn bad_externality(params: &ExternalityParams, corner: Corner) -> ProfileEquilibrium {
    let mut e = externality::profile_equilibrium(params, corner);
    e.feasible.x[0] += 0.01;
    e
}

impl ClosedForms {
    pub fn with_fault(mut self, fault: Fault) -> Self {
        match fault {
            Fault::Nash => self.nash = bad_nash,
            Fault::UncertaintyEquilibrium => self.uncertainty_equilibrium = bad_uncertainty_equilibrium,
            Fault::InterimStrategy => self.interim_strategy = bad_interim,
            Fault::DominanceThresholds => self.dominance_thresholds = bad_thresholds,
            Fault::RobustAttitude => self.robust_attitude = bad_robust,
            Fault::Bayesian => self.bayesian = bad_bayesian,
            Fault::Externality => self.externality_profile = bad_externality,
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub delta: f64,
    pub threshold: f64,
    pub unit: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, delta: f64, threshold: f64, unit: &'static str, detail: String) -> Self {
        Self {
            name,
            delta,
            threshold,
            unit,
            passed: delta <= threshold,
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub solver: SolverConfig,
    pub oracle: OracleConfig,
    /// Closed form against solver.
    pub closed_tolerance: f64,
    /// Solver or closed form against the grid oracle, in grid steps.
    pub grid_steps: f64,
    pub robust_tolerance: f64,
    /// Own types checked per player in the dominance comparison.
    pub dominance_types: usize,
    /// Opponent types enumerated by the dominance oracle.
    pub opponent_types: usize,
    /// Skip the grid refinement check, the slowest one.
    pub skip_refinement: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            solver: SolverConfig::default(),
            oracle: OracleConfig::default(),
            closed_tolerance: 1e-6,
            grid_steps: 2.0,
            robust_tolerance: 0.01,
            dominance_types: 5,
            opponent_types: 33,
            skip_refinement: false,
        }
    }
}

fn max_endpoint_gap(a: &[Interval; 2], b: &[Interval; 2]) -> f64 {
    a[0].endpoint_distance(&b[0]).max(a[1].endpoint_distance(&b[1]))
}

fn profile(p1: f64, p2: f64) -> AttitudeProfile {
    AttitudeProfile::from_values(p1, p2).expect("attitudes in [0, 1]")
}

fn profile_grid() -> Vec<AttitudeProfile> {
    let mut v = Vec::new();
    for p1 in [0.0, 0.5, 1.0] {
        for p2 in [0.0, 0.5, 1.0] {
            v.push(profile(p1, p2));
        }
    }
    v
}

fn oracle_vs_solver<G: crate::game::Game>(
    name: &'static str,
    game: &G,
    cfg: &VerifyConfig,
    closed: Option<&dyn Fn(Corner) -> Result<[Interval; 2]>>,
    checks: &mut Vec<Check>,
) -> Result<()> {
    let mut worst_solver: f64 = 0.0;
    let mut worst_closed: f64 = 0.0;
    let mut notes = Vec::new();
    for corner in Corner::ALL {
        let grid = grid_equilibrium(game, corner.profile(), &cfg.oracle)?;
        let hulls = grid.hulls().ok_or_else(|| Error::Unsupported("empty oracle set".into()))?;
        let step = grid.step();
        let eq = solve_uncertainty_equilibrium(game, corner.profile(), None, &cfg.solver)?;
        worst_solver = worst_solver.max(max_endpoint_gap(&hulls, &eq.sets) / step);
        if let Some(f) = closed {
            worst_closed = worst_closed.max(max_endpoint_gap(&hulls, &f(corner)?) / step);
        }
        if let crate::oracle::GridOutcome::Cycle { period, amplitude, .. } = grid.outcome {
            notes.push(format!("{corner}: oracle cycle of period {period}, amplitude {amplitude:.3e}"));
        }
    }
    checks.push(Check::new(
        name,
        worst_solver,
        cfg.grid_steps,
        "grid steps",
        notes.join("; "),
    ));
    if closed.is_some() {
        checks.push(Check::new(
            "cournot.closed_form_vs_grid_oracle",
            worst_closed,
            cfg.grid_steps,
            "grid steps",
            String::new(),
        ));
    }
    Ok(())
}

/// Runs every Cournot check at the given cost sets and true costs.
pub fn verify_cournot(game: &CournotGame, theta: [f64; 2], forms: &ClosedForms, cfg: &VerifyConfig) -> Result<VerifyReport> {
    let params = CournotParams::new(*game, theta[0], theta[1])?;
    let mut checks = Vec::new();

    let closed = |corner: Corner| (forms.uncertainty_equilibrium)(game, corner.profile());
    oracle_vs_solver("cournot.solver_vs_grid_oracle", game, cfg, Some(&closed), &mut checks)?;

    if !cfg.skip_refinement {
        let coarse = grid_equilibrium(game, Corner::OO.profile(), &cfg.oracle)?;
        let fine_cfg = OracleConfig {
            strategy_points: 2 * cfg.oracle.strategy_points - 1,
            type_points: 2 * cfg.oracle.type_points - 1,
            ..cfg.oracle
        };
        let fine = grid_equilibrium(game, Corner::OO.profile(), &fine_cfg)?;
        let (a, b) = (coarse.hulls(), fine.hulls());
        let delta = match (a, b) {
            (Some(a), Some(b)) => max_endpoint_gap(&a, &b) / coarse.step(),
            _ => f64::INFINITY,
        };
        checks.push(Check::new(
            "cournot.grid_refinement",
            delta,
            1.0,
            "coarse grid steps",
            format!(
                "{} vs {} strategy points",
                cfg.oracle.strategy_points, fine_cfg.strategy_points
            ),
        ));
    }

    let mut worst_sets: f64 = 0.0;
    let mut worst_radius: f64 = 0.0;
    let mut worst_interim: f64 = 0.0;
    for p in profile_grid() {
        let eq = solve_uncertainty_equilibrium(game, p, None, &cfg.solver)?;
        worst_sets = worst_sets.max(max_endpoint_gap(&eq.sets, &(forms.uncertainty_equilibrium)(game, p)?));
        for player in Player::BOTH {
            let r = eq.set(player).half_width() - game.delta(player) / 4.0;
            worst_radius = worst_radius.max(r.abs());
        }
        let out = ex_post_outcome(game, &eq, theta, p, &cfg.solver.search)?;
        let x = (forms.interim_strategy)(&params, p)?;
        worst_interim = worst_interim.max((x[0] - out.x[0]).abs()).max((x[1] - out.x[1]).abs());
    }
    checks.push(Check::new(
        "cournot.closed_form_equilibrium",
        worst_sets,
        cfg.closed_tolerance,
        "abs",
        "9 attitude profiles".into(),
    ));
    checks.push(Check::new(
        "cournot.radius_law",
        worst_radius,
        1e-8,
        "abs",
        "solver half-width against delta / 4".into(),
    ));
    checks.push(Check::new(
        "cournot.interim_strategies",
        worst_interim,
        cfg.closed_tolerance,
        "abs",
        String::new(),
    ));

    let single = CournotGame::singleton(theta[0], theta[1])?;
    let nash = (forms.nash)(theta);
    let mut worst_nash: f64 = 0.0;
    for corner in Corner::ALL {
        let eq = solve_uncertainty_equilibrium(&single, corner.profile(), None, &cfg.solver)?;
        for player in Player::BOTH {
            let set = eq.set(player);
            let x = nash.x[player.slot()];
            worst_nash = worst_nash.max((set.lo() - x).abs()).max((set.hi() - x).abs());
        }
    }
    checks.push(Check::new(
        "cournot.nash_coincidence",
        worst_nash,
        1e-8,
        "abs",
        "singleton cost sets at the true costs".into(),
    ));

    let mut mismatches = 0usize;
    let mut skipped = 0usize;
    let mut compared = 0usize;
    let mut first = String::new();
    for player in Player::BOTH {
        let t = (forms.dominance_thresholds)(game, player);
        let own = game.types(player);
        for theta_i in own.grid(cfg.dominance_types) {
            if (theta_i - t.optimism_below).abs() < 1e-6 || (theta_i - t.pessimism_above).abs() < 1e-6 {
                skipped += 1;
                continue;
            }
            let closed = cournot::verdict_from_thresholds(game, player, theta_i, t);
            let oracle = exhaustive_dominance(game, player, theta_i, cfg.opponent_types, &cfg.oracle)?.verdict;
            compared += 1;
            if closed != oracle {
                mismatches += 1;
                if first.is_empty() {
                    first = format!("; first at {player}, theta {theta_i}: {closed} vs {oracle}");
                }
            }
        }
    }
    checks.push(Check::new(
        "cournot.dominance_thresholds",
        mismatches as f64,
        0.0,
        "mismatches",
        format!("{compared} compared, {skipped} on a threshold skipped{first}"),
    ));

    let mut worst_robust: f64 = 0.0;
    let mut robust_cases = 0;
    for player in Player::BOTH {
        if game.delta(player.other()) <= 0.0 {
            continue;
        }
        let theta_i = theta[player.slot()];
        let closed = (forms.robust_attitude)(game, player, theta_i)?;
        let surface = exhaustive_maximin(game, player, theta_i, cfg.oracle.attitude_points, 9, &cfg.oracle)?;
        worst_robust = worst_robust.max((closed - surface.pi).abs());
        robust_cases += 1;
    }
    checks.push(Check::new(
        "cournot.robust_attitude",
        worst_robust,
        cfg.robust_tolerance,
        "abs",
        format!("{robust_cases} players with a non-degenerate opponent cost set"),
    ));

    let mu = [game.types(Player::One).midpoint(), game.types(Player::Two).midpoint()];
    let mut worst_foc: f64 = 0.0;
    for (mu, theta) in [(mu, theta), (theta, theta), (mu, mu)] {
        let x = (forms.bayesian)(mu, theta)?;
        for player in Player::BOTH {
            let (i, j) = (player.slot(), player.other().slot());
            // expected opponent output, averaged over two types symmetric about its mean
            let spread = [mu[j] - 0.01, mu[j] + 0.01];
            let mut expected = 0.0;
            for t in spread {
                let mut types = theta;
                types[j] = t;
                types[i] = mu[i];
                expected += 0.5 * (forms.bayesian)(mu, types)?[j];
            }
            let residual = 1.0 - 2.0 * x[i] - expected - theta[i];
            worst_foc = worst_foc.max(residual.abs());
        }
    }
    let at_nash = (forms.bayesian)(theta, theta)?;
    let nash_gap = (at_nash[0] - nash.x[0]).abs().max((at_nash[1] - nash.x[1]).abs());
    checks.push(Check::new(
        "cournot.bayesian_first_order",
        worst_foc,
        1e-12,
        "abs",
        String::new(),
    ));
    checks.push(Check::new(
        "cournot.bayesian_full_information",
        nash_gap,
        1e-12,
        "abs",
        "means equal to the true costs".into(),
    ));
    Ok(VerifyReport { checks })
}

/// Runs every externality-game check at the given parameters.
pub fn verify_externality(params: &ExternalityParams, forms: &ClosedForms, cfg: &VerifyConfig) -> Result<VerifyReport> {
    let game = params.game();
    let mut checks = Vec::new();
    oracle_vs_solver("externality.solver_vs_grid_oracle", &game, cfg, None, &mut checks)?;

    let mut worst_sets: f64 = 0.0;
    let mut worst_outcome: f64 = 0.0;
    let mut worst_oo: f64 = 0.0;
    for corner in Corner::ALL {
        let eq = solve_uncertainty_equilibrium(&game, corner.profile(), None, &cfg.solver)?;
        let closed = (forms.externality_profile)(params, corner).feasible;
        worst_sets = worst_sets.max(max_endpoint_gap(&eq.sets, &closed.sets));
        let out = ex_post_outcome(&game, &eq, params.theta, corner.profile(), &cfg.solver.search)?;
        for k in 0..2 {
            worst_outcome = worst_outcome
                .max((out.x[k] - closed.x[k]).abs())
                .max((out.u[k] - closed.u[k]).abs());
        }
        if corner == Corner::OO {
            for k in 0..2 {
                worst_oo = worst_oo.max((out.x[k] - (params.theta[k] - params.alpha / 2.0)).abs());
            }
        }
    }
    checks.push(Check::new(
        "externality.closed_form_sets",
        worst_sets,
        cfg.closed_tolerance,
        "abs",
        "feasible form".into(),
    ));
    checks.push(Check::new(
        "externality.closed_form_outcomes",
        worst_outcome,
        cfg.closed_tolerance,
        "abs",
        "feasible form strategies and rewards".into(),
    ));
    checks.push(Check::new(
        "externality.optimist_strategies",
        worst_oo,
        cfg.closed_tolerance,
        "abs",
        "theta_i - alpha / 2".into(),
    ));

    let cs = solve_consistent_sets(&game, None, &cfg.solver)?;
    let expected = Interval::new(0.0, params.beta)?;
    let delta = if cs.converged {
        max_endpoint_gap(&cs.sets, &[expected, expected])
    } else {
        f64::INFINITY
    };
    checks.push(Check::new(
        "externality.consistent_sets",
        delta,
        cfg.closed_tolerance,
        "abs",
        "[0, beta] for both players".into(),
    ));

    let matrix = build_attitude_matrix(&game, params.theta, &cfg.solver)?;
    let nash = pure_nash_profiles(&matrix)?;
    let only_oo = nash.len() == 1 && nash[0].corner == Corner::OO;
    checks.push(Check::new(
        "externality.matrix_nash",
        if only_oo { 0.0 } else { 1.0 },
        0.0,
        "mismatches",
        format!(
            "pure Nash profiles: {}",
            nash.iter().map(|n| n.corner.to_string()).collect::<Vec<_>>().join(", ")
        ),
    ));

    let mut not_optimism = 0;
    let mut verdicts = Vec::new();
    for player in Player::BOTH {
        let v = exhaustive_dominance(&game, player, params.theta[player.slot()], cfg.opponent_types, &cfg.oracle)?;
        if v.verdict != Dominance::Optimism {
            not_optimism += 1;
        }
        verdicts.push(format!("{player}: {}", v.verdict));
    }
    checks.push(Check::new(
        "externality.optimism_dominance",
        not_optimism as f64,
        0.0,
        "mismatches",
        verdicts.join(", "),
    ));
    Ok(VerifyReport { checks })
}
