//! The two-stage attitude game: players first pick optimism or pessimism, then
//! play the uncertainty equilibrium of the chosen profile and collect ex-post
//! rewards at their true types.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::attitude::{Attitude, AttitudeProfile, Corner, Dominance, Player, Stance};
use crate::cournot::{self, CournotGame, Thresholds};
use crate::equilibrium::{
    ex_post_outcome, solve_uncertainty_equilibrium, SolverConfig, Termination, UncertaintyEquilibrium,
};
use crate::error::{Error, Result};
use crate::externality::ExternalityGame;
use crate::game::Game;
use crate::interval::Interval;

/// Slack in the weak payoff comparisons of this module.
pub const PAYOFF_TOLERANCE: f64 = 1e-9;

/// Default number of opponent types sampled when checking dominance.
pub const THETA_J_GRID: usize = 33;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum MatrixEntry {
    Payoffs { x: [f64; 2], u: [f64; 2] },
    Failed {
        termination: Termination,
        residual: f64,
        iterations: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttitudeMatrix {
    pub thetas: [f64; 2],
    /// Indexed by [`Corner::index`]: OO, OP, PO, PP.
    pub entries: [MatrixEntry; 4],
}

impl AttitudeMatrix {
    pub fn from_payoffs(thetas: [f64; 2], u: [[f64; 2]; 4]) -> Self {
        Self {
            thetas,
            entries: u.map(|u| MatrixEntry::Payoffs { x: [f64::NAN; 2], u }),
        }
    }

    pub fn entry(&self, corner: Corner) -> &MatrixEntry {
        &self.entries[corner.index()]
    }

    pub fn payoffs(&self, corner: Corner) -> Result<[f64; 2]> {
        match self.entry(corner) {
            MatrixEntry::Payoffs { u, .. } => Ok(*u),
            MatrixEntry::Failed { termination, residual, .. } => Err(Error::IncompleteMatrix(format!(
                "profile {corner} failed to solve ({termination:?}, residual {residual:e})"
            ))),
        }
    }

    pub fn is_complete(&self) -> bool {
        self.entries.iter().all(|e| matches!(e, MatrixEntry::Payoffs { .. }))
    }

    fn table(&self) -> Result<[[f64; 2]; 4]> {
        let mut t = [[0.0; 2]; 4];
        for corner in Corner::ALL {
            t[corner.index()] = self.payoffs(corner)?;
        }
        Ok(t)
    }
}

/// Equilibria of the four pure attitude profiles. They do not depend on the
/// realized types, so one set serves every matrix of the same game.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CornerEquilibria {
    pub equilibria: [UncertaintyEquilibrium; 4],
}

impl CornerEquilibria {
    pub fn solve<G: Game + ?Sized>(game: &G, cfg: &SolverConfig) -> Result<Self> {
        let mut solved = Vec::with_capacity(4);
        for corner in Corner::ALL {
            solved.push(solve_uncertainty_equilibrium(game, corner.profile(), None, cfg)?);
        }
        Ok(Self {
            equilibria: solved.try_into().expect("four profiles"),
        })
    }

    pub fn get(&self, corner: Corner) -> &UncertaintyEquilibrium {
        &self.equilibria[corner.index()]
    }

    /// Ex-post rewards of every profile at the given types.
    pub fn matrix<G: Game + ?Sized>(&self, game: &G, theta: [f64; 2], cfg: &SolverConfig) -> Result<AttitudeMatrix> {
        check_types(game, theta)?;
        let mut entries = Vec::with_capacity(4);
        for corner in Corner::ALL {
            let eq = self.get(corner);
            let entry = if eq.converged {
                let out = ex_post_outcome(game, eq, theta, corner.profile(), &cfg.search)?;
                MatrixEntry::Payoffs { x: out.x, u: out.u }
            } else {
                MatrixEntry::Failed {
                    termination: eq.termination,
                    residual: eq.residual,
                    iterations: eq.iterations,
                }
            };
            entries.push(entry);
        }
        Ok(AttitudeMatrix {
            thetas: theta,
            entries: entries.try_into().expect("four profiles"),
        })
    }
}

fn check_types<G: Game + ?Sized>(game: &G, theta: [f64; 2]) -> Result<()> {
    for player in Player::BOTH {
        let domain = game.type_space(player);
        let t = theta[player.slot()];
        if !domain.contains_approx(t, 1e-12) {
            return Err(Error::OutsideDomain {
                what: "theta",
                value: t,
                domain,
            });
        }
    }
    Ok(())
}

/// Solves all four pure profiles and evaluates ex-post rewards at `theta`.
/// A profile that fails to converge leaves a [`MatrixEntry::Failed`] entry.
pub fn build_attitude_matrix<G: Game + ?Sized>(game: &G, theta: [f64; 2], cfg: &SolverConfig) -> Result<AttitudeMatrix> {
    check_types(game, theta)?;
    CornerEquilibria::solve(game, cfg)?.matrix(game, theta, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NashProfile {
    pub corner: Corner,
    /// Both players lose strictly by flipping their attitude.
    pub strict: bool,
}

/// Profiles where no player gains from flipping its own attitude.
pub fn pure_nash_profiles(matrix: &AttitudeMatrix) -> Result<Vec<NashProfile>> {
    let u = matrix.table()?;
    let mut found = Vec::new();
    for corner in Corner::ALL {
        let mut weak = true;
        let mut strict = true;
        for player in Player::BOTH {
            let here = u[corner.index()][player.slot()];
            let there = u[corner.deviation(player).index()][player.slot()];
            weak &= here >= there - PAYOFF_TOLERANCE;
            strict &= here > there + PAYOFF_TOLERANCE;
        }
        if weak {
            found.push(NashProfile { corner, strict });
        }
    }
    Ok(found)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    ClosedForm,
    Grid,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominanceReport {
    pub player: Player,
    pub theta: f64,
    pub verdict: Dominance,
    pub dominant: Option<Stance>,
    /// The dominant attitude wins by more than the tolerance everywhere checked.
    pub strict: bool,
    pub thresholds: Option<Thresholds>,
    pub method: Method,
    /// Smallest and largest gain from optimism over pessimism over the checked
    /// opponent attitudes and types.
    pub min_gain: f64,
    pub max_gain: f64,
    /// Opponent stance and type where the smallest gain occurs.
    pub witness: Option<(Stance, f64)>,
    pub theta_j_grid: usize,
}

/// Checks whether optimism or pessimism is weakly dominant for `player` at its
/// own type, over both opponent stances and a grid of opponent types.
pub fn dominance_analysis<G: Game + ?Sized>(
    game: &G,
    player: Player,
    theta: f64,
    theta_j_grid: usize,
    cfg: &SolverConfig,
) -> Result<DominanceReport> {
    let corners = CornerEquilibria::solve(game, cfg)?;
    dominance_with(game, &corners, player, theta, theta_j_grid, cfg)
}

/// [`dominance_analysis`] reusing already solved profile equilibria.
pub fn dominance_with<G: Game + ?Sized>(
    game: &G,
    corners: &CornerEquilibria,
    player: Player,
    theta: f64,
    theta_j_grid: usize,
    cfg: &SolverConfig,
) -> Result<DominanceReport> {
    if theta_j_grid < 2 {
        return Err(Error::Resolution {
            min: 2,
            got: theta_j_grid,
        });
    }
    let other = player.other();
    let mut min_gain = f64::INFINITY;
    let mut max_gain = f64::NEG_INFINITY;
    let mut witness = None;
    let mut strict_o = true;
    let mut strict_p = true;
    for theta_j in game.type_space(other).grid(theta_j_grid) {
        let mut types = [0.0; 2];
        types[player.slot()] = theta;
        types[other.slot()] = theta_j;
        let m = corners.matrix(game, types, cfg)?;
        for opp in Stance::BOTH {
            let base = Corner::OO.with(other, opp);
            let o = m.payoffs(base.with(player, Stance::Optimist))?[player.slot()];
            let p = m.payoffs(base.with(player, Stance::Pessimist))?[player.slot()];
            let gain = o - p;
            if gain < min_gain {
                min_gain = gain;
                witness = Some((opp, theta_j));
            }
            max_gain = max_gain.max(gain);
            strict_o &= gain > PAYOFF_TOLERANCE;
            strict_p &= gain < -PAYOFF_TOLERANCE;
        }
    }
    let verdict = Dominance::from_margins(min_gain, max_gain, PAYOFF_TOLERANCE);
    let strict = match verdict {
        Dominance::Optimism => strict_o,
        Dominance::Pessimism => strict_p,
        _ => false,
    };
    Ok(DominanceReport {
        player,
        theta,
        verdict,
        dominant: verdict.dominant_stance(),
        strict,
        thresholds: None,
        method: Method::Grid,
        min_gain,
        max_gain,
        witness,
        theta_j_grid,
    })
}

/// Dominance verdict of a Cournot player from the closed-form cost thresholds.
pub fn cournot_dominance(game: &CournotGame, player: Player, theta: f64) -> Result<DominanceReport> {
    let domain = game.types(player);
    if !domain.contains_approx(theta, 1e-12) {
        return Err(Error::OutsideDomain {
            what: "theta",
            value: theta,
            domain,
        });
    }
    let t = cournot::dominance_thresholds(game, player);
    let verdict = cournot::verdict_from_thresholds(game, player, theta, t);
    let strict = match verdict {
        Dominance::Optimism => theta < t.optimism_below,
        Dominance::Pessimism => theta > t.pessimism_above,
        _ => false,
    };
    Ok(DominanceReport {
        player,
        theta,
        verdict,
        dominant: verdict.dominant_stance(),
        strict,
        thresholds: Some(t),
        method: Method::ClosedForm,
        min_gain: f64::NAN,
        max_gain: f64::NAN,
        witness: None,
        theta_j_grid: 0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParetoReport {
    /// For each profile, a profile that Pareto-dominates it, if any.
    pub dominated_by: [Option<Corner>; 4],
    /// `superior[a][b]`: profile `a` is at least as good for both players and
    /// strictly better for one.
    pub superior: [[bool; 4]; 4],
}

impl ParetoReport {
    pub fn is_efficient(&self, corner: Corner) -> bool {
        self.dominated_by[corner.index()].is_none()
    }

    pub fn is_superior(&self, a: Corner, b: Corner) -> bool {
        self.superior[a.index()][b.index()]
    }
}

pub fn pareto_analysis(matrix: &AttitudeMatrix) -> Result<ParetoReport> {
    let u = matrix.table()?;
    let mut superior = [[false; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            let weak = (0..2).all(|i| u[a][i] >= u[b][i] - PAYOFF_TOLERANCE);
            let strict = (0..2).any(|i| u[a][i] > u[b][i] + PAYOFF_TOLERANCE);
            superior[a][b] = a != b && weak && strict;
        }
    }
    let dominated_by = std::array::from_fn(|b| (0..4).find(|&a| superior[a][b]).map(|a| Corner::ALL[a]));
    Ok(ParetoReport { dominated_by, superior })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DilemmaCertificate {
    pub thetas: [f64; 2],
    /// Largest gain a player gets by leaving (P, P) for optimism.
    pub pp_deviation_gain: f64,
    pub pp_not_nash: bool,
    pub pp_efficient: bool,
    /// `U_i(PP) - U_i(OO)` per player.
    pub pp_over_oo: [f64; 2],
    pub pp_superior_to_oo: bool,
    pub oo_unique_nash: bool,
    pub matrix: AttitudeMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DilemmaClassification {
    /// `beta <= max(1/3, 2 alpha)`.
    pub is_dilemma: bool,
    pub certificate: DilemmaCertificate,
}

/// Decides whether a symmetric Cournot attitude game is a prisoner's dilemma
/// and backs the answer with the matrix evaluated at `theta`.
pub fn classify_prisoners_dilemma(
    game: &CournotGame,
    theta: [f64; 2],
    cfg: &SolverConfig,
) -> Result<DilemmaClassification> {
    if !game.is_symmetric() {
        return Err(Error::Unsupported(
            "prisoner's dilemma classification needs identical cost sets".into(),
        ));
    }
    let (alpha, beta) = (game.alpha(Player::One), game.beta(Player::One));
    if !(beta > alpha) {
        return Err(Error::InvalidParameters(format!(
            "cost set [{alpha}, {beta}] must have non-zero length"
        )));
    }
    let matrix = build_attitude_matrix(game, theta, cfg)?;
    let u = matrix.table()?;
    let pp = u[Corner::PP.index()];
    let oo = u[Corner::OO.index()];
    let pp_deviation_gain = Player::BOTH
        .iter()
        .map(|&p| u[Corner::PP.deviation(p).index()][p.slot()] - pp[p.slot()])
        .fold(f64::NEG_INFINITY, f64::max);
    let nash = pure_nash_profiles(&matrix)?;
    let pareto = pareto_analysis(&matrix)?;
    let pp_over_oo = [pp[0] - oo[0], pp[1] - oo[1]];
    let certificate = DilemmaCertificate {
        thetas: theta,
        pp_deviation_gain,
        pp_not_nash: pp_deviation_gain > PAYOFF_TOLERANCE,
        pp_efficient: pareto.is_efficient(Corner::PP),
        pp_over_oo,
        pp_superior_to_oo: pp_over_oo.iter().all(|&d| d >= -PAYOFF_TOLERANCE),
        oo_unique_nash: nash.len() == 1 && nash[0].corner == Corner::OO,
        matrix,
    };
    Ok(DilemmaClassification {
        is_dilemma: beta <= (1.0f64 / 3.0).max(2.0 * alpha),
        certificate,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum OpponentType {
    /// Minimize over a grid of opponent types as well as opponent attitudes.
    WorstCase { grid: usize },
    /// Opponent type fixed by the caller.
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RobustOptions {
    pub pi_grid: usize,
    pub opponent_pi_grid: usize,
    pub opponent_type: OpponentType,
}

impl Default for RobustOptions {
    fn default() -> Self {
        Self {
            pi_grid: 101,
            opponent_pi_grid: 11,
            opponent_type: OpponentType::WorstCase { grid: 9 },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RobustReport {
    pub player: Player,
    pub theta: f64,
    /// Maximin attitude on the grid.
    pub pi: f64,
    /// Guaranteed reward at `pi`.
    pub value: f64,
    /// `(pi_i, worst reward)` along the grid.
    pub curve: Vec<(f64, f64)>,
    /// Opponent attitude and type attaining the worst case at `pi`.
    pub worst_opponent: (f64, f64),
    /// The guaranteed reward does not depend on the attitude.
    pub flat: bool,
    pub closed_form: Option<f64>,
}

fn profile_for(player: Player, own: f64, other: f64) -> Result<AttitudeProfile> {
    let own = Attitude::new(own)?;
    let other = Attitude::new(other)?;
    Ok(match player {
        Player::One => AttitudeProfile::new(own, other),
        Player::Two => AttitudeProfile::new(other, own),
    })
}

/// Attitude maximizing the worst ex-post reward over opponent attitudes and,
/// depending on `options`, opponent types.
pub fn robust_attitude<G: Game + ?Sized>(
    game: &G,
    player: Player,
    theta: f64,
    options: &RobustOptions,
    cfg: &SolverConfig,
) -> Result<RobustReport> {
    if options.pi_grid < 2 || options.opponent_pi_grid < 2 {
        return Err(Error::Resolution {
            min: 2,
            got: options.pi_grid.min(options.opponent_pi_grid),
        });
    }
    let other = player.other();
    let opp_types: Vec<f64> = match options.opponent_type {
        OpponentType::WorstCase { grid } => game.type_space(other).grid(grid.max(1)),
        OpponentType::Fixed(t) => vec![t],
    };
    let mut types = [0.0; 2];
    types[player.slot()] = theta;
    types[other.slot()] = opp_types[0];
    check_types(game, types)?;
    for &t in &opp_types {
        types[other.slot()] = t;
        check_types(game, types)?;
    }

    let unit = Interval::new(0.0, 1.0)?;
    let opp_pis = unit.grid(options.opponent_pi_grid);
    let mut warm: Vec<Option<[Interval; 2]>> = vec![None; opp_pis.len()];
    let mut curve = Vec::with_capacity(options.pi_grid);
    let mut worst_at = Vec::with_capacity(options.pi_grid);
    for pi in unit.grid(options.pi_grid) {
        let mut worst = f64::INFINITY;
        let mut arg = (f64::NAN, f64::NAN);
        for (k, &pj) in opp_pis.iter().enumerate() {
            let profile = profile_for(player, pi, pj)?;
            let eq = solve_uncertainty_equilibrium(game, profile, warm[k], cfg)?;
            if !eq.converged {
                return Err(Error::NotConverged {
                    residual: eq.residual,
                    iterations: eq.iterations,
                });
            }
            warm[k] = Some(eq.sets);
            for &tj in &opp_types {
                types[other.slot()] = tj;
                let u = ex_post_outcome(game, &eq, types, profile, &cfg.search)?.u[player.slot()];
                if u < worst {
                    worst = u;
                    arg = (pj, tj);
                }
            }
        }
        curve.push((pi, worst));
        worst_at.push(arg);
    }
    let (best, _) = curve
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bk, bv), (k, &(_, v))| if v > bv { (k, v) } else { (bk, bv) });
    let lowest = curve.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    Ok(RobustReport {
        player,
        theta,
        pi: curve[best].0,
        value: curve[best].1,
        worst_opponent: worst_at[best],
        flat: curve[best].1 - lowest <= PAYOFF_TOLERANCE,
        curve,
        closed_form: None,
    })
}

/// [`robust_attitude`] for Cournot, with the closed-form answer attached when
/// the opponent's cost set is non-degenerate.
pub fn cournot_robust_attitude(
    game: &CournotGame,
    player: Player,
    theta: f64,
    options: &RobustOptions,
    cfg: &SolverConfig,
) -> Result<RobustReport> {
    let mut report = robust_attitude(game, player, theta, options, cfg)?;
    report.closed_form = cournot::robust_attitude_closed_form(game, player, theta).ok();
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum PessimismSample {
    Cournot { game: CournotGame, theta: [f64; 2] },
    Externality { game: ExternalityGame, theta: [f64; 2] },
}

impl PessimismSample {
    fn degenerate(&self) -> bool {
        let types = |g: &dyn Game| Player::BOTH.iter().all(|&p| g.type_space(p).is_singleton());
        match self {
            PessimismSample::Cournot { game, .. } => types(game),
            PessimismSample::Externality { game, .. } => types(game),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PessimismRule {
    /// Both players must not have pessimism dominant at the same time.
    NotBoth,
    /// Neither player may have pessimism dominant.
    Neither,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub sample: PessimismSample,
    pub verdicts: [Dominance; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PessimismReport {
    pub rule: PessimismRule,
    pub checked: usize,
    /// Samples with singleton type sets on both sides, where attitudes are irrelevant.
    pub skipped: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl PessimismReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Runs grid dominance for both players of every sample and collects the
/// samples violating `rule`.
pub fn no_mutual_pessimism_check(
    samples: &[PessimismSample],
    rule: PessimismRule,
    theta_j_grid: usize,
    cfg: &SolverConfig,
) -> Result<PessimismReport> {
    if samples.is_empty() {
        return Err(Error::Resolution { min: 1, got: 0 });
    }
    let mut report = PessimismReport {
        rule,
        checked: 0,
        skipped: 0,
        counterexamples: Vec::new(),
    };
    for sample in samples {
        if sample.degenerate() {
            report.skipped += 1;
            continue;
        }
        let verdicts = match sample {
            PessimismSample::Cournot { game, theta } => verdicts(game, *theta, theta_j_grid, cfg)?,
            PessimismSample::Externality { game, theta } => verdicts(game, *theta, theta_j_grid, cfg)?,
        };
        report.checked += 1;
        let pessimists = verdicts.iter().filter(|&&v| v == Dominance::Pessimism).count();
        let violated = match rule {
            PessimismRule::NotBoth => pessimists == 2,
            PessimismRule::Neither => pessimists > 0,
        };
        if violated {
            report.counterexamples.push(Counterexample {
                sample: sample.clone(),
                verdicts,
            });
        }
    }
    Ok(report)
}

fn verdicts<G: Game>(game: &G, theta: [f64; 2], grid: usize, cfg: &SolverConfig) -> Result<[Dominance; 2]> {
    let corners = CornerEquilibria::solve(game, cfg)?;
    let v1 = dominance_with(game, &corners, Player::One, theta[0], grid, cfg)?.verdict;
    let v2 = dominance_with(game, &corners, Player::Two, theta[1], grid, cfg)?.verdict;
    Ok([v1, v2])
}

fn ordered_pair(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> (f64, f64) {
    let a = rng.gen_range(lo..=hi);
    let b = rng.gen_range(lo..=hi);
    (a.min(b), a.max(b))
}

/// Random Cournot instances with independent cost sets inside `[0, 1/2]`.
pub fn cournot_samples(count: usize, seed: u64) -> Vec<PessimismSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let (a1, b1) = ordered_pair(&mut rng, 0.0, cournot::MAX_COST);
            let (a2, b2) = ordered_pair(&mut rng, 0.0, cournot::MAX_COST);
            let game = CournotGame::from_bounds(a1, b1, a2, b2).expect("bounds inside [0, 1/2]");
            let theta = [rng.gen_range(a1..=b1), rng.gen_range(a2..=b2)];
            PessimismSample::Cournot { game, theta }
        })
        .collect()
}

/// Random symmetric externality instances with `0 < alpha < 2 alpha < beta < 1`.
pub fn externality_samples(count: usize, seed: u64) -> Vec<PessimismSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let alpha = rng.gen_range(0.01..0.45);
            let beta = rng.gen_range((2.0 * alpha + 0.01)..0.99);
            let game = ExternalityGame::symmetric(alpha, beta).expect("sampled inside constraints");
            let theta = [rng.gen_range(alpha..=beta), rng.gen_range(alpha..=beta)];
            PessimismSample::Externality { game, theta }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cournot::CournotParams;
    use approx::assert_abs_diff_eq;

    fn fast() -> SolverConfig {
        SolverConfig {
            theta_grid: 17,
            ..SolverConfig::default()
        }
    }

    #[test]
    fn cournot_matrix_matches_closed_form_rewards() {
        let game = CournotGame::symmetric(0.1, 0.3).unwrap();
        let m = build_attitude_matrix(&game, [0.2, 0.2], &fast()).unwrap();
        let oo = m.payoffs(Corner::OO).unwrap();
        let x = 0.85 / 3.0;
        assert_abs_diff_eq!(oo[0], x * (1.0 - 2.0 * x) - 0.2 * x, epsilon = 1e-9);
        assert_abs_diff_eq!(oo[0], 0.066_111_111_111, epsilon = 1e-9);
        let params = CournotParams::new(game, 0.2, 0.2).unwrap();
        for corner in Corner::ALL {
            let expected = cournot::ex_post_rewards(&params, corner.profile()).unwrap();
            let got = m.payoffs(corner).unwrap();
            assert_abs_diff_eq!(got[0], expected[0], epsilon = 1e-9);
            assert_abs_diff_eq!(got[1], expected[1], epsilon = 1e-9);
        }
    }

    #[test]
    fn singleton_cournot_matrix_is_constant() {
        let game = CournotGame::singleton(0.1, 0.2).unwrap();
        let m = build_attitude_matrix(&game, [0.1, 0.2], &fast()).unwrap();
        let oo = m.payoffs(Corner::OO).unwrap();
        for corner in Corner::ALL {
            let u = m.payoffs(corner).unwrap();
            assert_abs_diff_eq!(u[0], oo[0], epsilon = 1e-9);
            assert_abs_diff_eq!(u[1], oo[1], epsilon = 1e-9);
        }
        assert_eq!(pure_nash_profiles(&m).unwrap().len(), 4);
    }

    #[test]
    fn constant_matrix_has_every_profile_as_nash_and_no_domination() {
        let m = AttitudeMatrix::from_payoffs([0.0, 0.0], [[1.0, 2.0]; 4]);
        let nash = pure_nash_profiles(&m).unwrap();
        assert_eq!(nash.len(), 4);
        assert!(nash.iter().all(|n| !n.strict));
        let pareto = pareto_analysis(&m).unwrap();
        assert!(Corner::ALL.iter().all(|&c| pareto.is_efficient(c)));
    }

    #[test]
    fn externality_optimism_is_the_only_nash() {
        let game = ExternalityGame::symmetric(0.2, 0.45).unwrap();
        let m = build_attitude_matrix(&game, [0.3, 0.4], &fast()).unwrap();
        let nash = pure_nash_profiles(&m).unwrap();
        assert_eq!(nash, vec![NashProfile { corner: Corner::OO, strict: true }]);
        // feasible-form value: the pessimist's strategy is clipped to zero
        assert_abs_diff_eq!(m.payoffs(Corner::OP).unwrap()[0], 0.3 - 1.0, epsilon = 1e-9);
    }

    #[test]
    fn failed_profile_poisons_the_matrix() {
        let game = CournotGame::symmetric(0.1, 0.3).unwrap();
        let cfg = SolverConfig {
            max_iter: 3,
            ..fast()
        };
        let m = build_attitude_matrix(&game, [0.2, 0.2], &cfg).unwrap();
        assert!(!m.is_complete());
        assert!(matches!(pure_nash_profiles(&m), Err(Error::IncompleteMatrix(_))));
    }

    #[test]
    fn cournot_dominance_grid_agrees_with_thresholds() {
        let game = CournotGame::symmetric(0.1, 0.3).unwrap();
        let grid = dominance_analysis(&game, Player::One, 0.2, 9, &fast()).unwrap();
        let closed = cournot_dominance(&game, Player::One, 0.2).unwrap();
        assert_eq!(grid.verdict, Dominance::Optimism);
        assert_eq!(closed.verdict, Dominance::Optimism);
        assert_abs_diff_eq!(closed.thresholds.unwrap().optimism_below, 0.5, epsilon = 1e-15);

        let game = CournotGame::from_bounds(0.0, 0.5, 0.0, 0.2).unwrap();
        let closed = cournot_dominance(&game, Player::One, 0.45).unwrap();
        assert_eq!(closed.verdict, Dominance::Neither);
        let grid = dominance_analysis(&game, Player::One, 0.45, 9, &fast()).unwrap();
        assert_eq!(grid.verdict, Dominance::Neither);
    }

    #[test]
    fn dilemma_classification() {
        let game = CournotGame::symmetric(0.1, 0.3).unwrap();
        let c = classify_prisoners_dilemma(&game, [0.2, 0.2], &fast()).unwrap();
        assert!(c.is_dilemma);
        assert!(c.certificate.pp_not_nash && c.certificate.pp_efficient);
        assert!(c.certificate.pp_superior_to_oo && c.certificate.oo_unique_nash);

        let game = CournotGame::symmetric(0.2, 0.5).unwrap();
        assert!(!classify_prisoners_dilemma(&game, [0.3, 0.3], &fast()).unwrap().is_dilemma);
        let game = CournotGame::symmetric(0.2, 0.2).unwrap();
        assert!(classify_prisoners_dilemma(&game, [0.2, 0.2], &fast()).is_err());
        let game = CournotGame::from_bounds(0.1, 0.3, 0.1, 0.2).unwrap();
        assert!(matches!(
            classify_prisoners_dilemma(&game, [0.2, 0.2], &fast()),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn robust_attitude_near_closed_form() {
        let game = CournotGame::from_bounds(0.0, 0.5, 0.0, 0.5).unwrap();
        let options = RobustOptions {
            pi_grid: 41,
            opponent_pi_grid: 3,
            opponent_type: OpponentType::WorstCase { grid: 5 },
        };
        let r = cournot_robust_attitude(&game, Player::One, 0.4, &options, &fast()).unwrap();
        assert_abs_diff_eq!(r.closed_form.unwrap(), 0.15, epsilon = 1e-12);
        assert!((r.pi - 0.15).abs() <= 0.025 + 1e-12, "{}", r.pi);
        assert_eq!(r.worst_opponent, (1.0, 0.0));
    }

    #[test]
    fn singleton_samples_are_skipped() {
        let samples = vec![PessimismSample::Cournot {
            game: CournotGame::singleton(0.1, 0.2).unwrap(),
            theta: [0.1, 0.2],
        }];
        let r = no_mutual_pessimism_check(&samples, PessimismRule::NotBoth, 5, &fast()).unwrap();
        assert_eq!((r.checked, r.skipped), (0, 1));
        assert!(r.holds());
    }
}
