//! Two-player games in which each player knows its own type but only a set of
//! possible types for the opponent, and weighs best and worst cases with an
//! optimism level `pi` in `[0, 1]`.
//!
//! The crate computes uncertainty equilibria (pairs of strategy intervals that
//! reproduce themselves under attitude-weighted best responses), the 2x2
//! attitude game played on top of them, closed forms for a Cournot duopoly
//! and a consumption externality game, and a brute-force [`oracle`] used to
//! cross-check all of it.

pub mod attitude;
pub mod attitude_game;
pub mod cournot;
pub mod equilibrium;
pub mod error;
pub mod externality;
pub mod game;
pub mod interval;
pub mod oracle;
pub mod response;
pub mod search;
pub mod verify;

pub use attitude::{Attitude, AttitudeProfile, Corner, Dominance, Player, Stance};
pub use equilibrium::{
    ex_post_outcome, solve_consistent_sets, solve_uncertainty_equilibrium, uniqueness_probe, EquilibriumOutcome,
    SolverConfig, Termination, UncertaintyEquilibrium,
};
pub use error::{Error, Result};
pub use game::{Game, GameDefinition, Monotonicity, PlayerContext};
pub use interval::Interval;
pub use response::{anticipated_reward, best_response, hurwicz_point, response_set};
pub use search::SearchConfig;
