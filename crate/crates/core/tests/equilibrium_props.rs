use attitude_core::cournot::{self, CournotGame};
use attitude_core::externality::{self, ExternalityParams};
use attitude_core::{
    response_set, solve_consistent_sets, solve_uncertainty_equilibrium, uniqueness_probe, AttitudeProfile, Corner,
    Interval, Player, SolverConfig,
};
use proptest::prelude::*;

fn fast() -> SolverConfig {
    SolverConfig {
        theta_grid: 33,
        ..SolverConfig::default()
    }
}

/// Endpoint iteration of the linear Cournot response rule
/// `x_i = (1 - h_i - theta_i) / 2`, `h_i = pi_i lo_j + (1 - pi_i) hi_j`.
fn linear_fixed_point(types: [(f64, f64); 2], pi: [f64; 2]) -> [(f64, f64); 2] {
    let mut sets = [(0.25, 0.25); 2];
    for _ in 0..500 {
        let respond = |i: usize, opp: (f64, f64)| {
            let h = pi[i] * opp.0 + (1.0 - pi[i]) * opp.1;
            ((1.0 - h - types[i].1) / 2.0, (1.0 - h - types[i].0) / 2.0)
        };
        sets = [respond(0, sets[1]), respond(1, sets[0])];
    }
    sets
}

fn cost_set() -> impl Strategy<Value = (f64, f64)> {
    (0.0..0.5f64, 0.0..0.5f64).prop_map(|(a, b)| (a.min(b), a.max(b)))
}

#[test]
fn closed_form_agrees_with_solver_and_linear_iteration_on_a_grid() {
    let sets = [(0.0, 0.5), (0.1, 0.3), (0.2, 0.2), (0.05, 0.45), (0.3, 0.5)];
    let pis = [0.0, 0.5, 1.0];
    let cfg = fast();
    let mut compared = 0;
    for &t1 in &sets {
        for &t2 in &sets {
            let game = CournotGame::from_bounds(t1.0, t1.1, t2.0, t2.1).unwrap();
            for &p1 in &pis {
                for &p2 in &pis {
                    let profile = AttitudeProfile::from_values(p1, p2).unwrap();
                    let oracle = linear_fixed_point([t1, t2], [p1, p2]);
                    let eq = solve_uncertainty_equilibrium(&game, profile, None, &cfg).unwrap();
                    assert!(eq.converged);
                    let closed = cournot::uncertainty_equilibrium_closed_form(&game, profile).unwrap();
                    for i in 0..2 {
                        for (got, want) in [(eq.sets[i], oracle[i]), (closed[i], oracle[i])] {
                            assert!(
                                (got.lo() - want.0).abs() < 1e-8 && (got.hi() - want.1).abs() < 1e-8,
                                "{t1:?} {t2:?} ({p1}, {p2}) player {}: {got} vs {want:?}",
                                i + 1
                            );
                        }
                    }
                    compared += 1;
                }
            }
        }
    }
    assert_eq!(compared, 225);
}

#[test]
fn the_narrow_reading_is_not_a_fixed_point() {
    let game = CournotGame::symmetric(0.1, 0.3).unwrap();
    let profile = Corner::OP.profile();
    let narrow = cournot::narrow_reading(&game, profile).unwrap();
    let cfg = fast();
    let image = response_set(&game, Player::One, narrow[1], profile.p1, cfg.theta_grid, &cfg.search).unwrap();
    assert!(image.endpoint_distance(&narrow[0]) > 0.02);
}

#[test]
fn random_starts_reach_the_same_equilibrium() {
    let game = CournotGame::from_bounds(0.05, 0.35, 0.1, 0.2).unwrap();
    let profile = AttitudeProfile::from_values(0.3, 0.8).unwrap();
    let report = uniqueness_probe(&game, profile, 8, 11, &fast()).unwrap();
    assert!(report.is_unique(), "{report:?}");
    assert_eq!(report.failures, 0);
    assert_eq!(report.clusters[0].hits, 8);

}

#[test]
fn externality_optimists_have_a_line_of_equilibria() {
    // Any lo_1 + lo_2 = alpha with widths beta - alpha is a fixed point; the
    // symmetric member is the one reached from the full strategy space.
    let params = ExternalityParams::new(0.2, 0.45, 0.3, 0.4).unwrap();
    let report = uniqueness_probe(&params.game(), Corner::OO.profile(), 8, 5, &fast()).unwrap();
    assert!(report.clusters.len() > 1);
    for c in &report.clusters {
        assert!((c.sets[0].lo() + c.sets[1].lo() - 0.2).abs() < 1e-8);
        for set in c.sets {
            assert!((set.width() - 0.25).abs() < 1e-8);
        }
    }
    let eq = solve_uncertainty_equilibrium(&params.game(), Corner::OO.profile(), None, &fast()).unwrap();
    assert!((eq.sets[0].lo() - 0.1).abs() < 1e-8 && (eq.sets[1].lo() - 0.1).abs() < 1e-8);
}

#[test]
fn externality_sets_match_the_closed_forms_at_every_corner() {
    let params = ExternalityParams::new(0.2, 0.45, 0.3, 0.4).unwrap();
    let game = params.game();
    for corner in Corner::ALL {
        let eq = solve_uncertainty_equilibrium(&game, corner.profile(), None, &SolverConfig::default()).unwrap();
        let expected = externality::profile_equilibrium(&params, corner).feasible.sets;
        for i in 0..2 {
            assert!(eq.sets[i].endpoint_distance(&expected[i]) < 1e-6, "{corner}: {} vs {}", eq.sets[i], expected[i]);
        }
    }
    let oo = solve_uncertainty_equilibrium(&game, Corner::OO.profile(), None, &SolverConfig::default()).unwrap();
    assert!((oo.sets[0].lo() - 0.1).abs() < 1e-6 && (oo.sets[0].hi() - 0.35).abs() < 1e-6);
}

#[test]
fn consistent_sets_of_the_externality_game() {
    for (alpha, beta) in [(0.2, 0.45), (0.1, 0.7), (0.05, 0.2)] {
        let game = ExternalityParams::new(alpha, beta, alpha, beta).unwrap().game();
        let cs = solve_consistent_sets(&game, None, &SolverConfig::default()).unwrap();
        assert!(cs.converged);
        for set in cs.sets {
            assert!(set.lo().abs() < 1e-6 && (set.hi() - beta).abs() < 1e-6, "{set}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn solved_sets_are_fixed_points(t1 in cost_set(), t2 in cost_set(), p1 in 0.0..=1.0f64, p2 in 0.0..=1.0f64) {
        let game = CournotGame::from_bounds(t1.0, t1.1, t2.0, t2.1).unwrap();
        let profile = AttitudeProfile::from_values(p1, p2).unwrap();
        let cfg = fast();
        let eq = solve_uncertainty_equilibrium(&game, profile, None, &cfg).unwrap();
        prop_assert!(eq.converged);
        for player in Player::BOTH {
            let image = response_set(&game, player, eq.set(player.other()), profile.get(player), cfg.theta_grid, &cfg.search)
                .unwrap();
            prop_assert!(image.endpoint_distance(&eq.set(player)) < 1e-8);
        }
    }

    #[test]
    fn cournot_half_width_is_a_quarter_of_the_cost_range(
        t1 in cost_set(), t2 in cost_set(), p1 in 0.0..=1.0f64, p2 in 0.0..=1.0f64,
    ) {
        let game = CournotGame::from_bounds(t1.0, t1.1, t2.0, t2.1).unwrap();
        let profile = AttitudeProfile::from_values(p1, p2).unwrap();
        let eq = solve_uncertainty_equilibrium(&game, profile, None, &fast()).unwrap();
        prop_assert!((eq.sets[0].half_width() - (t1.1 - t1.0) / 4.0).abs() < 1e-8);
        prop_assert!((eq.sets[1].half_width() - (t2.1 - t2.0) / 4.0).abs() < 1e-8);
    }

    #[test]
    fn cournot_closed_form_matches_linear_iteration(
        t1 in cost_set(), t2 in cost_set(), p1 in 0.0..=1.0f64, p2 in 0.0..=1.0f64,
    ) {
        let game = CournotGame::from_bounds(t1.0, t1.1, t2.0, t2.1).unwrap();
        let profile = AttitudeProfile::from_values(p1, p2).unwrap();
        let closed = cournot::uncertainty_equilibrium_closed_form(&game, profile).unwrap();
        let oracle = linear_fixed_point([t1, t2], [p1, p2]);
        for i in 0..2 {
            prop_assert!((closed[i].lo() - oracle[i].0).abs() < 1e-12);
            prop_assert!((closed[i].hi() - oracle[i].1).abs() < 1e-12);
        }
    }

    #[test]
    fn singleton_types_give_singleton_sets(th1 in 0.0..0.5f64, th2 in 0.0..0.5f64, p1 in 0.0..=1.0f64, p2 in 0.0..=1.0f64) {
        let game = CournotGame::singleton(th1, th2).unwrap();
        let profile = AttitudeProfile::from_values(p1, p2).unwrap();
        let eq = solve_uncertainty_equilibrium(&game, profile, None, &fast()).unwrap();
        let nash = [(1.0 - 2.0 * th1 + th2) / 3.0, (1.0 - 2.0 * th2 + th1) / 3.0];
        for (set, x) in eq.sets.iter().zip(nash) {
            prop_assert!(set.width() < 1e-12);
            prop_assert!((set.midpoint() - x).abs() < 1e-8);
        }
    }

    #[test]
    fn equilibrium_does_not_depend_on_the_start(
        t1 in cost_set(), t2 in cost_set(), p in 0.0..=1.0f64, start in (0.0..0.5f64, 0.0..0.5f64, 0.0..0.5f64, 0.0..0.5f64),
    ) {
        let game = CournotGame::from_bounds(t1.0, t1.1, t2.0, t2.1).unwrap();
        let profile = AttitudeProfile::from_values(p, 1.0 - p).unwrap();
        let init = [
            Interval::spanning(start.0, start.1).unwrap(),
            Interval::spanning(start.2, start.3).unwrap(),
        ];
        let a = solve_uncertainty_equilibrium(&game, profile, None, &fast()).unwrap();
        let b = solve_uncertainty_equilibrium(&game, profile, Some(init), &fast()).unwrap();
        for i in 0..2 {
            prop_assert!(a.sets[i].endpoint_distance(&b.sets[i]) < 1e-8);
        }
    }
}
