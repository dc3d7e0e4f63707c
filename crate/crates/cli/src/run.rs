use std::fmt::Write as _;

use anyhow::Result;
use attitude_core::attitude_game::{
    self, cournot_dominance, dominance_with, pareto_analysis, pure_nash_profiles, CornerEquilibria, MatrixEntry,
    OpponentType, RobustOptions,
};
use attitude_core::cournot::{self, CournotParams};
use attitude_core::externality::{self, ExternalityParams};
use attitude_core::verify::{self, Check, ClosedForms, Fault, VerifyConfig};
use attitude_core::{
    best_response, ex_post_outcome, solve_consistent_sets, solve_uncertainty_equilibrium, uniqueness_probe,
    AttitudeProfile, Corner, Game, Interval, Player, SolverConfig, UncertaintyEquilibrium,
};

use crate::config::{Analysis, GameSpec, OpponentTypeSpec, Point, RunConfig};
use crate::output::{num, Row};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    NonConverged,
    VerifyFailed,
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub allow_nonconverged: bool,
    pub seed: u64,
    pub fault: Option<Fault>,
}

pub struct Outcome {
    pub report: String,
    pub rows: Vec<Row>,
    pub checks: Vec<Check>,
    pub status: Status,
}

fn interval(s: Interval) -> String {
    format!("[{}, {}]", num(s.lo()), num(s.hi()))
}

fn pair(v: [f64; 2]) -> String {
    format!("({}, {})", num(v[0]), num(v[1]))
}

fn game_of(spec: &GameSpec) -> Box<dyn Game> {
    match spec {
        GameSpec::Cournot { game, .. } => Box::new(*game),
        GameSpec::Externality(p) => Box::new(p.game()),
    }
}

struct Runner<'a> {
    cfg: &'a RunConfig,
    opts: &'a Options,
    solver: SolverConfig,
    report: String,
    rows: Vec<Row>,
    checks: Vec<Check>,
    nonconverged: usize,
}

pub fn run(cfg: &RunConfig, opts: &Options) -> Result<Outcome> {
    let mut r = Runner {
        cfg,
        opts,
        solver: cfg.solver_config(),
        report: String::new(),
        rows: Vec::new(),
        checks: Vec::new(),
        nonconverged: 0,
    };
    r.header();
    let points = cfg.points()?;
    for (k, point) in points.iter().enumerate() {
        if points.len() > 1 {
            writeln!(r.report, "\n== sweep point {} of {} ==", k + 1, points.len())?;
        }
        r.describe(point)?;
        match cfg.analysis {
            Analysis::Equilibrium => r.equilibrium(point)?,
            Analysis::Matrix => r.matrix(point)?,
            Analysis::Dominance => r.dominance(point)?,
            Analysis::Robust => r.robust(point)?,
            Analysis::ConsistentSets => r.consistent(point)?,
            Analysis::Verify => r.verify(point)?,
        }
    }
    let status = if r.checks.iter().any(|c| !c.passed) {
        Status::VerifyFailed
    } else if r.nonconverged > 0 && !opts.allow_nonconverged {
        Status::NonConverged
    } else {
        Status::Ok
    };
    if r.nonconverged > 0 {
        writeln!(r.report, "\n{} solve(s) did not converge", r.nonconverged)?;
    }
    Ok(Outcome {
        report: r.report,
        rows: r.rows,
        checks: r.checks,
        status,
    })
}

impl Runner<'_> {
    fn header(&mut self) {
        let c = self.cfg;
        let s = &self.solver;
        let _ = writeln!(self.report, "game: {}", c.base.game.name());
        let _ = writeln!(self.report, "analysis: {}", c.analysis.name());
        let _ = writeln!(
            self.report,
            "solver: tolerance {}, max_iter {}, theta grid {}, strategy grid {}",
            num(s.tolerance),
            s.max_iter,
            s.theta_grid,
            s.strategy_grid
        );
        if !c.sweep.is_empty() {
            let axes: Vec<String> = c.sweep.iter().map(|(k, v)| format!("{k} ({} values)", v.len())).collect();
            let _ = writeln!(self.report, "sweep: {}", axes.join(" x "));
        }
    }

    fn describe(&mut self, point: &Point) -> Result<()> {
        let b = point.game.bounds();
        match point.game {
            GameSpec::Cournot { .. } => writeln!(
                self.report,
                "Theta1 = [{}, {}], Theta2 = [{}, {}], theta = {}",
                num(b[0]),
                num(b[1]),
                num(b[2]),
                num(b[3]),
                pair(point.game.theta())
            )?,
            GameSpec::Externality(p) => writeln!(
                self.report,
                "alpha = {}, beta = {}, theta = {}",
                num(p.alpha),
                num(p.beta),
                pair(p.theta)
            )?,
        }
        Ok(())
    }

    fn row(&self, point: &Point, pi: Option<[f64; 2]>, eq: &UncertaintyEquilibrium, x: Option<[f64; 2]>, u: Option<[f64; 2]>) -> Row {
        Row {
            game: point.game.name(),
            theta: point.game.theta(),
            bounds: point.game.bounds(),
            pi,
            sets: eq.sets,
            x,
            u,
            converged: eq.converged,
            residual: eq.residual,
            iterations: eq.iterations,
        }
    }

    /// Ex-post strategies and rewards; for an unconverged equilibrium they are
    /// computed against the last iterate when that is allowed.
    fn outcome(&mut self, game: &dyn Game, eq: &UncertaintyEquilibrium, theta: [f64; 2], profile: AttitudeProfile) -> Result<Option<([f64; 2], [f64; 2])>> {
        if eq.converged {
            let out = ex_post_outcome(game, eq, theta, profile, &self.solver.search)?;
            return Ok(Some((out.x, out.u)));
        }
        self.nonconverged += 1;
        if !self.opts.allow_nonconverged {
            return Ok(None);
        }
        let mut x = [0.0; 2];
        for p in Player::BOTH {
            x[p.slot()] = best_response(game, p, eq.set(p.other()), theta[p.slot()], profile.get(p), &self.solver.search)?.strategy;
        }
        let u = [
            game.utility(Player::One, x[0], x[1], theta[0]),
            game.utility(Player::Two, x[0], x[1], theta[1]),
        ];
        Ok(Some((x, u)))
    }

    fn equilibrium(&mut self, point: &Point) -> Result<()> {
        let game = game_of(&point.game);
        let theta = point.game.theta();
        let profiles: Vec<(Option<Corner>, AttitudeProfile)> = match point.pi {
            Some(pi) => vec![(None, AttitudeProfile::from_values(pi[0], pi[1])?)],
            None => Corner::ALL.iter().map(|&c| (Some(c), c.profile())).collect(),
        };
        for (corner, profile) in profiles {
            let eq = solve_uncertainty_equilibrium(game.as_ref(), profile, None, &self.solver)?;
            let out = self.outcome(game.as_ref(), &eq, theta, profile)?;
            let pi = [profile.p1.value(), profile.p2.value()];
            writeln!(
                self.report,
                "\npi = {}: X1 = {}, X2 = {}",
                pair(pi),
                interval(eq.sets[0]),
                interval(eq.sets[1])
            )?;
            writeln!(
                self.report,
                "  {} after {} iterations, residual {}{}",
                if eq.converged { "converged" } else { "NOT converged" },
                eq.iterations,
                num(eq.residual),
                if eq.damped { ", damped" } else { "" }
            )?;
            if let Some((x, u)) = out {
                writeln!(self.report, "  strategies x = {}, rewards U = {}", pair(x), pair(u))?;
            }
            self.closed_form_notes(point, profile, corner)?;
            if self.cfg.solver.restarts > 0 {
                let probe = uniqueness_probe(game.as_ref(), profile, self.cfg.solver.restarts, self.opts.seed, &self.solver)?;
                writeln!(
                    self.report,
                    "  uniqueness probe: {} restarts, {} distinct fixed point(s), {} failed",
                    probe.restarts,
                    probe.clusters.len(),
                    probe.failures
                )?;
            }
            self.rows.push(self.row(point, Some(pi), &eq, out.map(|o| o.0), out.map(|o| o.1)));
        }
        Ok(())
    }

    fn closed_form_notes(&mut self, point: &Point, profile: AttitudeProfile, corner: Option<Corner>) -> Result<()> {
        match point.game {
            GameSpec::Cournot { game, theta } => {
                if let Ok(sets) = cournot::uncertainty_equilibrium_closed_form(&game, profile) {
                    writeln!(
                        self.report,
                        "  closed form: X1 = {}, X2 = {} (half-widths delta_i / 4)",
                        interval(sets[0]),
                        interval(sets[1])
                    )?;
                }
                let params = CournotParams::new(game, theta[0], theta[1])?;
                if let Ok(u) = cournot::ex_post_rewards(&params, profile) {
                    writeln!(self.report, "  closed-form rewards U = {}", pair(u))?;
                }
            }
            GameSpec::Externality(params) => {
                if let Some(corner) = corner {
                    let e = externality::profile_equilibrium(&params, corner);
                    writeln!(
                        self.report,
                        "  paper form: X1 = {}, X2 = {}, x = {}, U = {}",
                        interval(e.paper.sets[0]),
                        interval(e.paper.sets[1]),
                        pair(e.paper.x),
                        pair(e.paper.u)
                    )?;
                    writeln!(
                        self.report,
                        "  feasible form: X1 = {}, X2 = {}, x = {}, U = {}",
                        interval(e.feasible.sets[0]),
                        interval(e.feasible.sets[1]),
                        pair(e.feasible.x),
                        pair(e.feasible.u)
                    )?;
                }
            }
        }
        Ok(())
    }

    fn corner_rows(&mut self, point: &Point, corners: &CornerEquilibria) -> Result<attitude_game::AttitudeMatrix> {
        let game = game_of(&point.game);
        let matrix = corners.matrix(game.as_ref(), point.game.theta(), &self.solver)?;
        for corner in Corner::ALL {
            let eq = corners.get(corner);
            let pi = [corner.profile().p1.value(), corner.profile().p2.value()];
            let (x, u) = match matrix.entry(corner) {
                MatrixEntry::Payoffs { x, u } => (Some(*x), Some(*u)),
                MatrixEntry::Failed { .. } => {
                    self.nonconverged += 1;
                    (None, None)
                }
            };
            self.rows.push(self.row(point, Some(pi), eq, x, u));
        }
        Ok(matrix)
    }

    fn matrix(&mut self, point: &Point) -> Result<()> {
        let game = game_of(&point.game);
        let corners = CornerEquilibria::solve(game.as_ref(), &self.solver)?;
        let matrix = self.corner_rows(point, &corners)?;
        writeln!(self.report, "\nattitude matrix (ex-post rewards U1, U2):")?;
        for corner in Corner::ALL {
            match matrix.entry(corner) {
                MatrixEntry::Payoffs { u, .. } => writeln!(self.report, "  {corner}: {}", pair(*u))?,
                MatrixEntry::Failed { termination, residual, .. } => writeln!(
                    self.report,
                    "  {corner}: failed ({termination:?}, residual {})",
                    num(*residual)
                )?,
            }
        }
        if !matrix.is_complete() {
            writeln!(self.report, "matrix incomplete: no Nash or Pareto analysis")?;
            return Ok(());
        }
        let nash = pure_nash_profiles(&matrix)?;
        let names: Vec<String> = nash
            .iter()
            .map(|n| format!("{}{}", n.corner, if n.strict { " (strict)" } else { "" }))
            .collect();
        writeln!(self.report, "pure Nash profiles: {}", names.join(", "))?;
        if nash.len() == 1 {
            writeln!(self.report, "{} is the unique pure Nash profile", nash[0].corner)?;
        }
        let pareto = pareto_analysis(&matrix)?;
        for corner in Corner::ALL {
            match pareto.dominated_by[corner.index()] {
                Some(by) => writeln!(self.report, "  {corner} is Pareto-dominated by {by}")?,
                None => writeln!(self.report, "  {corner} is Pareto efficient")?,
            }
        }
        if let GameSpec::Cournot { game, theta } = point.game {
            if game.is_symmetric() && game.delta(Player::One) > 0.0 {
                let pd = attitude_game::classify_prisoners_dilemma(&game, theta, &self.solver)?;
                let c = &pd.certificate;
                writeln!(
                    self.report,
                    "prisoner's dilemma (beta <= max(1/3, 2 alpha)): {}",
                    if pd.is_dilemma { "yes" } else { "no" }
                )?;
                writeln!(
                    self.report,
                    "  PP not Nash: {} (best deviation gain {}); PP efficient: {}; PP over OO: {} {}; OO unique Nash: {}",
                    c.pp_not_nash,
                    num(c.pp_deviation_gain),
                    c.pp_efficient,
                    pair(c.pp_over_oo),
                    c.pp_superior_to_oo,
                    c.oo_unique_nash
                )?;
            }
        }
        if let GameSpec::Externality(params) = point.game {
            writeln!(self.report, "paper-form matrix (unclipped closed forms):")?;
            for corner in Corner::ALL {
                let e = externality::profile_equilibrium(&params, corner);
                writeln!(self.report, "  {corner}: {}", pair(e.paper.u))?;
            }
        }
        Ok(())
    }

    fn dominance(&mut self, point: &Point) -> Result<()> {
        let game = game_of(&point.game);
        let corners = CornerEquilibria::solve(game.as_ref(), &self.solver)?;
        self.corner_rows(point, &corners)?;
        let theta = point.game.theta();
        let grid = self.cfg.solver.theta_j_grid;
        writeln!(self.report, "\ndominance over both opponent attitudes and {grid} opponent types:")?;
        for player in Player::BOTH {
            let d = dominance_with(game.as_ref(), &corners, player, theta[player.slot()], grid, &self.solver)?;
            writeln!(
                self.report,
                "  {player}: {}{} (gain of optimism in [{}, {}])",
                d.verdict,
                if d.strict { ", strict" } else { "" },
                num(d.min_gain),
                num(d.max_gain)
            )?;
            match point.game {
                GameSpec::Cournot { game, .. } => {
                    let c = cournot_dominance(&game, player, theta[player.slot()])?;
                    let t = c.thresholds.expect("closed form has thresholds");
                    writeln!(
                        self.report,
                        "    closed form: {} (optimism at or below {}, pessimism at or above {})",
                        c.verdict,
                        num(t.optimism_below),
                        num(t.pessimism_above)
                    )?;
                }
                GameSpec::Externality(params) => {
                    let p: ExternalityParams = if player == Player::One { params } else { params.swapped() };
                    let who = if player == Player::One { Player::One } else { Player::Two };
                    let c = externality::optimism_dominance_certificate(&p, who, grid);
                    writeln!(
                        self.report,
                        "    closed form: smallest margin {} (paper form), {} (feasible form)",
                        num(c.paper_worst),
                        num(c.feasible_worst)
                    )?;
                }
            }
        }
        Ok(())
    }

    fn robust(&mut self, point: &Point) -> Result<()> {
        let game = game_of(&point.game);
        let r = &self.cfg.robust;
        let options = RobustOptions {
            pi_grid: r.pi_grid,
            opponent_pi_grid: r.opponent_pi_grid,
            opponent_type: match r.opponent_type {
                OpponentTypeSpec::Fixed(t) => OpponentType::Fixed(t),
                OpponentTypeSpec::Named(_) => OpponentType::WorstCase {
                    grid: r.opponent_type_grid,
                },
            },
        };
        let theta = point.game.theta();
        writeln!(
            self.report,
            "\nrobust attitudes ({} own attitudes, {} opponent attitudes, opponent type {}):",
            options.pi_grid,
            options.opponent_pi_grid,
            match options.opponent_type {
                OpponentType::Fixed(t) => format!("fixed at {}", num(t)),
                OpponentType::WorstCase { grid } => format!("worst case over {grid} values"),
            }
        )?;
        for player in Player::BOTH {
            let report = match point.game {
                GameSpec::Cournot { game, .. } => attitude_game::cournot_robust_attitude(
                    &game,
                    player,
                    theta[player.slot()],
                    &options,
                    &self.solver,
                )?,
                GameSpec::Externality(_) => {
                    attitude_game::robust_attitude(game.as_ref(), player, theta[player.slot()], &options, &self.solver)?
                }
            };
            writeln!(
                self.report,
                "  {player}: pi = {}, guaranteed reward {}{}; worst opponent pi = {}, type = {}",
                num(report.pi),
                num(report.value),
                if report.flat { " (flat: any attitude)" } else { "" },
                num(report.worst_opponent.0),
                num(report.worst_opponent.1)
            )?;
            if let Some(c) = report.closed_form {
                writeln!(self.report, "    closed form: {}", num(c))?;
            }
            let mut pi = [0.0; 2];
            pi[player.slot()] = report.pi;
            pi[player.other().slot()] = report.worst_opponent.0;
            let profile = AttitudeProfile::from_values(pi[0], pi[1])?;
            let eq = solve_uncertainty_equilibrium(game.as_ref(), profile, None, &self.solver)?;
            let out = self.outcome(game.as_ref(), &eq, theta, profile)?;
            self.rows.push(self.row(point, Some(pi), &eq, out.map(|o| o.0), out.map(|o| o.1)));
        }
        Ok(())
    }

    fn consistent(&mut self, point: &Point) -> Result<()> {
        let game = game_of(&point.game);
        let cs = solve_consistent_sets(game.as_ref(), None, &self.solver)?;
        if !cs.converged {
            self.nonconverged += 1;
        }
        writeln!(
            self.report,
            "\nconsistent sets: X1 = {}, X2 = {} ({} after {} iterations, residual {})",
            interval(cs.sets[0]),
            interval(cs.sets[1]),
            if cs.converged { "converged" } else { "NOT converged" },
            cs.iterations,
            num(cs.residual)
        )?;
        self.rows.push(Row {
            game: point.game.name(),
            theta: point.game.theta(),
            bounds: point.game.bounds(),
            pi: None,
            sets: cs.sets,
            x: None,
            u: None,
            converged: cs.converged,
            residual: cs.residual,
            iterations: cs.iterations,
        });
        Ok(())
    }

    fn verify(&mut self, point: &Point) -> Result<()> {
        let mut forms = ClosedForms::default();
        if let Some(f) = self.opts.fault {
            forms = forms.with_fault(f);
            writeln!(self.report, "fault injected into closed form: {}", f.name())?;
        }
        let cfg = VerifyConfig {
            solver: self.solver,
            oracle: self.cfg.oracle_config(),
            skip_refinement: !self.cfg.oracle.refinement,
            ..VerifyConfig::default()
        };
        writeln!(
            self.report,
            "oracle: {} strategy points, {} type points, {} attitude points",
            cfg.oracle.strategy_points, cfg.oracle.type_points, cfg.oracle.attitude_points
        )?;
        let report = match point.game {
            GameSpec::Cournot { game, theta } => verify::verify_cournot(&game, theta, &forms, &cfg)?,
            GameSpec::Externality(params) => verify::verify_externality(&params, &forms, &cfg)?,
        };
        writeln!(self.report)?;
        for c in &report.checks {
            writeln!(
                self.report,
                "{} {}: delta {} (limit {} {}){}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                num(c.delta),
                num(c.threshold),
                c.unit,
                if c.detail.is_empty() { String::new() } else { format!("; {}", c.detail) }
            )?;
        }
        let failed: Vec<&str> = report.failures().map(|c| c.name).collect();
        if failed.is_empty() {
            writeln!(self.report, "all {} checks passed", report.checks.len())?;
        } else {
            writeln!(self.report, "failed checks: {}", failed.join(", "))?;
        }
        self.checks.extend(report.checks);
        Ok(())
    }
}
