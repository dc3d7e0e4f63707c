//! Uncertainty equilibria and consistent sets by fixed-point iteration on the
//! four interval endpoints.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::attitude::{AttitudeProfile, Player};
use crate::error::{Error, Result};
use crate::game::Game;
use crate::interval::Interval;
use crate::response::{self, best_response_unchecked, response_hull};
use crate::search::SearchConfig;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Endpoint sup-norm change at which the iteration stops.
    pub tolerance: f64,
    pub max_iter: usize,
    /// Points sampled from each type set when forming response sets.
    pub theta_grid: usize,
    /// Points sampled from the opponent set by [`solve_consistent_sets`].
    pub strategy_grid: usize,
    pub search: SearchConfig,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iter: 10_000,
            theta_grid: 129,
            strategy_grid: 65,
            search: SearchConfig::default(),
        }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidParameters(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.theta_grid < 2 {
            return Err(Error::Resolution {
                min: 2,
                got: self.theta_grid,
            });
        }
        if self.strategy_grid < 2 {
            return Err(Error::Resolution {
                min: 2,
                got: self.strategy_grid,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Termination {
    Converged,
    MaxIterations,
    /// The iterates alternate between two states even with damping.
    Oscillation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UncertaintyEquilibrium {
    pub sets: [Interval; 2],
    pub iterations: usize,
    /// Sup-norm endpoint change of one undamped sweep from the returned sets.
    pub residual: f64,
    pub converged: bool,
    /// Damping was switched on after an undamped cycle or stall.
    pub damped: bool,
    pub termination: Termination,
    /// Some best response had a separated near-tie.
    pub non_unique: bool,
}

impl UncertaintyEquilibrium {
    pub fn set(&self, player: Player) -> Interval {
        self.sets[player.slot()]
    }
}

type State = [f64; 4];

fn to_state(sets: [Interval; 2]) -> State {
    [sets[0].lo(), sets[0].hi(), sets[1].lo(), sets[1].hi()]
}

fn to_sets(s: State) -> [Interval; 2] {
    [
        Interval::spanning(s[0], s[1]).expect("finite endpoints"),
        Interval::spanning(s[2], s[3]).expect("finite endpoints"),
    ]
}

fn distance(a: &State, b: &State) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

struct Iteration {
    state: State,
    iterations: usize,
    residual: f64,
    damped: bool,
    termination: Termination,
}

/// Successive substitution `s <- F(s)`, switching to `s <- (s + F(s)) / 2` once
/// a two-cycle or a stall shows up.
fn iterate<F: FnMut(&State) -> State>(mut map: F, init: State, cfg: &SolverConfig) -> Iteration {
    const STALL_WINDOW: usize = 200;
    let mut state = init;
    let mut previous: Option<State> = None;
    let mut damped = false;
    let mut checkpoint = (0usize, f64::INFINITY);
    let mut residual = f64::INFINITY;
    for k in 0..cfg.max_iter {
        let next = map(&state);
        residual = distance(&next, &state);
        if residual <= cfg.tolerance {
            return Iteration {
                state: next,
                iterations: k + 1,
                residual,
                damped,
                termination: Termination::Converged,
            };
        }
        let cycling = previous.is_some_and(|p| distance(&next, &p) <= cfg.tolerance);
        if cycling && damped {
            return Iteration {
                state,
                iterations: k + 1,
                residual,
                damped,
                termination: Termination::Oscillation,
            };
        }
        if !damped && k >= checkpoint.0 + STALL_WINDOW {
            if residual > 0.5 * checkpoint.1 {
                damped = true;
            }
            checkpoint = (k, residual);
        }
        if cycling {
            damped = true;
        }
        previous = Some(state);
        state = if damped {
            std::array::from_fn(|n| 0.5 * (state[n] + next[n]))
        } else {
            next
        };
    }
    Iteration {
        state,
        iterations: cfg.max_iter,
        residual,
        damped,
        termination: Termination::MaxIterations,
    }
}

fn initial_state<G: Game + ?Sized>(game: &G, init: Option<[Interval; 2]>) -> Result<State> {
    let full = [game.strategy_space(Player::One), game.strategy_space(Player::Two)];
    let sets = match init {
        Some(sets) => {
            for (set, domain) in sets.iter().zip(&full) {
                if !set.is_subset_of(domain, 0.0) {
                    return Err(Error::SetOutsideDomain {
                        set: *set,
                        domain: *domain,
                    });
                }
            }
            sets
        }
        None => full,
    };
    Ok(to_state(sets))
}

/// Intervals `(X_1, X_2)` with `X_i = psi_i(X_j; pi_i)`: each set is the hull of
/// the player's best responses over its own type set, against the other set.
pub fn solve_uncertainty_equilibrium<G: Game + ?Sized>(
    game: &G,
    profile: AttitudeProfile,
    init: Option<[Interval; 2]>,
    cfg: &SolverConfig,
) -> Result<UncertaintyEquilibrium> {
    cfg.validate()?;
    let start = initial_state(game, init)?;
    let mut non_unique = false;
    let mut map = |s: &State| {
        let sets = to_sets(*s);
        let (x1, t1) = response_hull(game, Player::One, sets[1], profile.p1, cfg.theta_grid, &cfg.search);
        let (x2, t2) = response_hull(game, Player::Two, sets[0], profile.p2, cfg.theta_grid, &cfg.search);
        non_unique |= t1 || t2;
        to_state([x1, x2])
    };
    let run = iterate(&mut map, start, cfg);
    Ok(UncertaintyEquilibrium {
        sets: to_sets(run.state),
        iterations: run.iterations,
        residual: run.residual,
        converged: run.termination == Termination::Converged,
        damped: run.damped,
        termination: run.termination,
        non_unique,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistentSets {
    pub sets: [Interval; 2],
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
    pub termination: Termination,
}

/// Intervals with `X_j = phi_j(X_i)` for both players, where `phi_j` collects
/// full-information best responses over opponent strategies and own types.
pub fn solve_consistent_sets<G: Game + ?Sized>(
    game: &G,
    init: Option<[Interval; 2]>,
    cfg: &SolverConfig,
) -> Result<ConsistentSets> {
    cfg.validate()?;
    let start = initial_state(game, init)?;
    let hull = |player: Player, opponent: Interval| {
        response::certainty_response_set(game, player, opponent, cfg.strategy_grid, cfg.theta_grid, &cfg.search)
            .expect("validated resolutions and domains")
    };
    let map = |s: &State| {
        let sets = to_sets(*s);
        to_state([hull(Player::One, sets[1]), hull(Player::Two, sets[0])])
    };
    let run = iterate(map, start, cfg);
    Ok(ConsistentSets {
        sets: to_sets(run.state),
        iterations: run.iterations,
        residual: run.residual,
        converged: run.termination == Termination::Converged,
        termination: run.termination,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquilibriumOutcome {
    pub x: [f64; 2],
    pub u: [f64; 2],
}

/// Strategies the players actually choose once they know their own types,
/// and the rewards they then receive.
pub fn ex_post_outcome<G: Game + ?Sized>(
    game: &G,
    eq: &UncertaintyEquilibrium,
    theta: [f64; 2],
    profile: AttitudeProfile,
    search: &SearchConfig,
) -> Result<EquilibriumOutcome> {
    if !eq.converged {
        return Err(Error::NotConverged {
            residual: eq.residual,
            iterations: eq.iterations,
        });
    }
    let mut x = [0.0; 2];
    for player in Player::BOTH {
        let t = theta[player.slot()];
        let domain = game.type_space(player);
        if !domain.contains_approx(t, 1e-12) {
            return Err(Error::OutsideDomain {
                what: "theta",
                value: t,
                domain,
            });
        }
        let opponent = eq.set(player.other());
        x[player.slot()] =
            best_response_unchecked(game, player, opponent, t, profile.get(player), search).strategy;
    }
    let u = [
        game.utility(Player::One, x[0], x[1], theta[0]),
        game.utility(Player::Two, x[0], x[1], theta[1]),
    ];
    Ok(EquilibriumOutcome { x, u })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cluster {
    pub sets: [Interval; 2],
    pub hits: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniquenessReport {
    pub restarts: usize,
    pub clusters: Vec<Cluster>,
    /// Restarts that did not converge.
    pub failures: usize,
}

impl UniquenessReport {
    pub fn is_unique(&self) -> bool {
        self.clusters.len() == 1 && self.failures == 0
    }
}

const CLUSTER_RADIUS: f64 = 1e-6;

/// Runs the solver from random initial interval pairs and groups the fixed
/// points it reaches.
pub fn uniqueness_probe<G: Game + ?Sized>(
    game: &G,
    profile: AttitudeProfile,
    restarts: usize,
    seed: u64,
    cfg: &SolverConfig,
) -> Result<UniquenessReport> {
    if restarts == 0 {
        return Err(Error::Resolution { min: 1, got: 0 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random_set = |domain: Interval| {
        let a = domain.lo() + rng.gen::<f64>() * domain.width();
        let b = domain.lo() + rng.gen::<f64>() * domain.width();
        Interval::spanning(a, b).expect("finite endpoints")
    };
    let mut clusters: Vec<Cluster> = Vec::new();
    let mut failures = 0;
    for _ in 0..restarts {
        let init = [
            random_set(game.strategy_space(Player::One)),
            random_set(game.strategy_space(Player::Two)),
        ];
        let eq = solve_uncertainty_equilibrium(game, profile, Some(init), cfg)?;
        if !eq.converged {
            failures += 1;
            continue;
        }
        let state = to_state(eq.sets);
        match clusters
            .iter_mut()
            .find(|c| distance(&to_state(c.sets), &state) <= CLUSTER_RADIUS)
        {
            Some(c) => c.hits += 1,
            None => clusters.push(Cluster { sets: eq.sets, hits: 1 }),
        }
    }
    Ok(UniquenessReport {
        restarts,
        clusters,
        failures,
    })
}
