//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use attitude_core::attitude_game::{
    cournot_samples, externality_samples, no_mutual_pessimism_check, pareto_analysis, pure_nash_profiles,
    CornerEquilibria, PessimismRule,
};
use attitude_core::cournot::{self, CournotGame};
use attitude_core::externality::ExternalityParams;
use attitude_core::oracle::{exhaustive_dominance, exhaustive_maximin, grid_equilibrium, OracleConfig};
use attitude_core::verify::{verify_cournot, verify_externality, ClosedForms, Fault, VerifyConfig};
use attitude_core::{
    ex_post_outcome, solve_consistent_sets, solve_uncertainty_equilibrium, AttitudeProfile, Corner, Dominance, Player,
    SolverConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn fast() -> SolverConfig {
    SolverConfig {
        theta_grid: 33,
        ..SolverConfig::default()
    }
}

fn err(e: attitude_core::Error) -> String {
    e.to_string()
}

fn within(elapsed: Duration, limit: Option<Duration>) -> Result<(), String> {
    match limit {
        Some(limit) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
        _ => Ok(()),
    }
}

fn coincidence() -> Outcome {
    let thetas = [0.0, 0.125, 0.25, 0.375, 0.5];
    let cfg = fast();
    let mut worst: f64 = 0.0;
    for &t1 in &thetas {
        for &t2 in &thetas {
            let game = CournotGame::singleton(t1, t2).map_err(err)?;
            // Nash quantities from the first-order conditions, solved by hand.
            let nash = [(1.0 - 2.0 * t1 + t2) / 3.0, (1.0 - 2.0 * t2 + t1) / 3.0];
            for corner in Corner::ALL {
                let eq = solve_uncertainty_equilibrium(&game, corner.profile(), None, &cfg).map_err(err)?;
                if !eq.converged {
                    return Err(format!("({t1}, {t2}) {corner} did not converge"));
                }
                for i in 0..2 {
                    worst = worst.max((eq.sets[i].lo() - nash[i]).abs()).max((eq.sets[i].hi() - nash[i]).abs());
                }
            }
        }
    }
    if worst > 1e-8 {
        return Err(format!("max deviation from Nash {worst:.3e} > 1e-8"));
    }
    Ok(format!("25 instances x 4 profiles, max deviation {worst:.2e}"))
}

fn cournot_closed_form() -> Outcome {
    let sets = [(0.0, 0.5), (0.1, 0.3), (0.05, 0.2), (0.25, 0.45), (0.2, 0.2)];
    let pis = [0.0, 0.5, 1.0];
    let cfg = fast();
    let (mut endpoint, mut radius, mut count): (f64, f64, usize) = (0.0, 0.0, 0);
    for &t1 in &sets {
        for &t2 in &sets {
            let game = CournotGame::from_bounds(t1.0, t1.1, t2.0, t2.1).map_err(err)?;
            for &p1 in &pis {
                for &p2 in &pis {
                    let profile = AttitudeProfile::from_values(p1, p2).map_err(err)?;
                    let eq = solve_uncertainty_equilibrium(&game, profile, None, &cfg).map_err(err)?;
                    let closed = cournot::uncertainty_equilibrium_closed_form(&game, profile).map_err(err)?;
                    for (i, delta) in [t1.1 - t1.0, t2.1 - t2.0].into_iter().enumerate() {
                        endpoint = endpoint.max(eq.sets[i].endpoint_distance(&closed[i]));
                        radius = radius.max((eq.sets[i].half_width() - delta / 4.0).abs());
                    }
                    count += 1;
                }
            }
        }
    }
    // Half-width delta / 4 against delta / 8 on the brute-force grid oracle.
    let oracle = OracleConfig::default();
    let mut separation = Vec::new();
    for corner in [Corner::OO, Corner::PP] {
        let game = CournotGame::from_bounds(0.0, 0.5, 0.1, 0.3).map_err(err)?;
        let grid = grid_equilibrium(&game, corner.profile(), &oracle).map_err(err)?;
        let hulls = grid.hulls().ok_or("grid oracle produced an empty set")?;
        let hw = hulls[0].half_width();
        let (quarter, eighth) = ((hw - 0.125).abs(), (hw - 0.0625).abs());
        if quarter > 2.0 * grid.step() || eighth < 10.0 * grid.step() {
            return Err(format!("grid oracle half-width {hw} does not single out delta / 4"));
        }
        separation.push(format!("{corner} {hw:.4}"));
    }
    if endpoint > 1e-6 || radius > 1e-8 {
        return Err(format!("endpoint delta {endpoint:.3e}, half-width delta {radius:.3e}"));
    }
    Ok(format!(
        "{count} configurations, endpoint delta {endpoint:.2e}, half-width delta {radius:.2e}; grid oracle half-width for delta 0.5: {} (delta/4 = 0.125)",
        separation.join(", ")
    ))
}

fn lemma_thresholds() -> Outcome {
    let cfg = OracleConfig::default();
    let mut mismatches = Vec::new();
    let mut tally = [0usize; 4];
    let mut count = 0;
    let mut check = |game: &CournotGame, player: Player, theta: f64| -> Result<(), String> {
        let closed = cournot::dominance_verdict(game, player, theta);
        let oracle = exhaustive_dominance(game, player, theta, 33, &cfg).map_err(err)?.verdict;
        tally[match closed {
            Dominance::Optimism => 0,
            Dominance::Pessimism => 1,
            Dominance::Indifferent => 2,
            Dominance::Neither => 3,
        }] += 1;
        count += 1;
        if closed != oracle {
            mismatches.push(format!("{game:?} {player} theta {theta}: {closed} vs {oracle}"));
        }
        Ok(())
    };
    for alpha in [0.0, 0.05, 0.1, 0.15, 0.2] {
        for beta in [0.25, 0.3, 0.35, 0.4, 0.5] {
            let game = CournotGame::symmetric(alpha, beta).map_err(err)?;
            for theta in game.types(Player::One).grid(5) {
                check(&game, Player::One, theta)?;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..25 {
        let mut bounds = || {
            let (a, b): (f64, f64) = (rng.gen_range(0.0..0.5), rng.gen_range(0.0..0.5));
            (a.min(b), a.max(b))
        };
        let (t1, t2) = (bounds(), bounds());
        let game = CournotGame::from_bounds(t1.0, t1.1, t2.0, t2.1).map_err(err)?;
        let theta = rng.gen_range(t1.0..=t1.1);
        check(&game, Player::One, theta)?;
        check(&game, Player::Two, rng.gen_range(t2.0..=t2.1))?;
    }
    // A known opponent cost leaves nothing to be optimistic about.
    let known = CournotGame::from_bounds(0.1, 0.4, 0.2, 0.2).map_err(err)?;
    for theta in [0.1, 0.25, 0.4] {
        check(&known, Player::One, theta)?;
    }
    if !mismatches.is_empty() {
        return Err(format!("{} mismatches, first: {}", mismatches.len(), mismatches[0]));
    }
    Ok(format!(
        "{count} verdicts, 0 mismatches (optimism {}, pessimism {}, indifferent {}, neither {})",
        tally[0], tally[1], tally[2], tally[3]
    ))
}

fn prisoners_dilemma() -> Outcome {
    let cfg = fast();
    let (mut points, mut dilemma_points) = (0, 0);
    for alpha in [0.0, 0.1, 0.2, 0.3, 0.4] {
        for beta in [0.1, 0.2, 0.3, 0.4, 0.5] {
            if beta <= alpha {
                continue;
            }
            let game = CournotGame::symmetric(alpha, beta).map_err(err)?;
            let corners = CornerEquilibria::solve(&game, &cfg).map_err(err)?;
            let thetas = game.types(Player::One).grid(3);
            for &t1 in &thetas {
                for &t2 in &thetas {
                    let at = format!("alpha {alpha}, beta {beta}, theta ({t1}, {t2})");
                    let matrix = corners.matrix(&game, [t1, t2], &cfg).map_err(err)?;
                    let nash = pure_nash_profiles(&matrix).map_err(err)?;
                    if nash.iter().any(|n| n.corner == Corner::PP) {
                        return Err(format!("PP is Nash at {at}"));
                    }
                    let (pp, oo) = (matrix.payoffs(Corner::PP).map_err(err)?, matrix.payoffs(Corner::OO).map_err(err)?);
                    if pp[0] < oo[0] - 1e-9 || pp[1] < oo[1] - 1e-9 {
                        return Err(format!("U(PP) {pp:?} below U(OO) {oo:?} at {at}"));
                    }
                    if !pareto_analysis(&matrix).map_err(err)?.is_efficient(Corner::PP) {
                        return Err(format!("PP is Pareto-dominated at {at}"));
                    }
                    if beta <= (1.0f64 / 3.0).max(2.0 * alpha) {
                        dilemma_points += 1;
                        if nash.len() != 1 || nash[0].corner != Corner::OO {
                            return Err(format!("OO is not the unique Nash profile at {at}"));
                        }
                    }
                    points += 1;
                }
            }
        }
    }
    Ok(format!(
        "{points} grid points, 0 violations; OO unique Nash at all {dilemma_points} points with beta <= max(1/3, 2 alpha)"
    ))
}

fn robust_attitude() -> Outcome {
    let cfg = OracleConfig::default();
    let maximin = |bounds: (f64, f64, f64, f64), theta: f64| -> Result<(f64, f64), String> {
        let game = CournotGame::from_bounds(bounds.0, bounds.1, bounds.2, bounds.3).map_err(err)?;
        let surface = exhaustive_maximin(&game, Player::One, theta, 201, 9, &cfg).map_err(err)?;
        let closed = cournot::robust_attitude_closed_form(&game, Player::One, theta).map_err(err)?;
        Ok((surface.pi, closed))
    };
    let interior: [((f64, f64, f64, f64), f64); 8] = [
        ((0.1, 0.3, 0.1, 0.3), 0.2),
        ((0.1, 0.4, 0.1, 0.4), 0.3),
        ((0.2, 0.5, 0.0, 0.5), 0.4),
        ((0.0, 0.5, 0.2, 0.5), 0.45),
        ((0.3, 0.5, 0.0, 0.4), 0.35),
        ((0.0, 0.2, 0.1, 0.5), 0.15),
        ((0.25, 0.45, 0.05, 0.45), 0.45),
        ((0.4, 0.5, 0.0, 0.3), 0.42),
    ];
    let low_cost = [((0.0, 0.25, 0.05, 0.25), 0.2), ((0.0, 0.2, 0.05, 0.1), 0.1), ((0.0, 0.25, 0.05, 0.15), 0.0)];
    let singular = ((0.3, 0.5, 0.0, 0.3), 0.5);
    let all: Vec<_> = interior.iter().chain(&low_cost).chain([&singular]).copied().collect();
    let results: Vec<Result<(f64, f64), String>> = std::thread::scope(|s| {
        let handles: Vec<_> = all.iter().map(|&(b, t)| s.spawn(move || maximin(b, t))).collect();
        handles.into_iter().map(|h| h.join().expect("maximin thread")).collect()
    });
    let results = results.into_iter().collect::<Result<Vec<_>, String>>()?;
    let (interior_res, rest) = results.split_at(interior.len());
    let (low_res, singular_res) = rest.split_at(low_cost.len());
    let worst = interior_res.iter().map(|(pi, closed)| (pi - closed).abs()).fold(0.0, f64::max);
    for ((bounds, _), (pi, _)) in low_cost.iter().zip(low_res) {
        if *pi != 1.0 {
            return Err(format!("max beta <= 1/4 gave pi {pi} for {bounds:?}"));
        }
    }
    let singular_pi = singular_res[0].0;
    if singular_pi > 0.005 {
        return Err(format!("singular case gave pi {singular_pi}"));
    }
    if worst > 0.01 {
        return Err(format!("maximin off the closed form by {worst:.4}"));
    }
    Ok(format!(
        "{} instances within {worst:.4} of the closed form; {} low-cost instances at exactly 1; singular case at {singular_pi}",
        interior.len(),
        low_cost.len()
    ))
}

fn externality() -> Outcome {
    let cfg = SolverConfig::default();
    let mut worst: f64 = 0.0;
    let mut matrices = 0;
    // Optimism beats pessimism against an optimist only while
    // 1 + beta - alpha / 2 >= exp(beta - alpha); (0.05, 0.8) lies outside.
    let inside = |alpha: f64, beta: f64| 1.0 + beta - alpha / 2.0 >= (beta - alpha).exp();
    let mut outside_nash = Vec::new();
    for (alpha, beta) in [(0.2, 0.45), (0.1, 0.3), (0.05, 0.8)] {
        let game = ExternalityParams::new(alpha, beta, alpha, beta).map_err(err)?.game();
        let oo = solve_uncertainty_equilibrium(&game, Corner::OO.profile(), None, &cfg).map_err(err)?;
        for set in oo.sets {
            worst = worst.max((set.lo() - alpha / 2.0).abs()).max((set.hi() - (beta - alpha / 2.0)).abs());
        }
        let cs = solve_consistent_sets(&game, None, &cfg).map_err(err)?;
        for set in cs.sets {
            worst = worst.max(set.lo().abs()).max((set.hi() - beta).abs());
        }
        let corners = CornerEquilibria::solve(&game, &cfg).map_err(err)?;
        let thetas = game.types(Player::One).grid(5);
        for &t1 in &thetas {
            for &t2 in &thetas {
                let out = ex_post_outcome(&game, &oo, [t1, t2], Corner::OO.profile(), &cfg.search).map_err(err)?;
                worst = worst.max((out.x[0] - (t1 - alpha / 2.0)).abs()).max((out.x[1] - (t2 - alpha / 2.0)).abs());
                let matrix = corners.matrix(&game, [t1, t2], &cfg).map_err(err)?;
                let nash = pure_nash_profiles(&matrix).map_err(err)?;
                if !inside(alpha, beta) {
                    if nash.iter().all(|n| n.corner != Corner::OO) {
                        outside_nash.push((t1, t2));
                    }
                    continue;
                }
                if nash.len() != 1 || nash[0].corner != Corner::OO {
                    let found: Vec<String> = nash.iter().map(|n| n.corner.to_string()).collect();
                    return Err(format!(
                        "alpha {alpha}, beta {beta}, theta ({t1}, {t2}): Nash profiles {{{}}}",
                        found.join(", ")
                    ));
                }
                matrices += 1;
            }
        }
    }
    if worst > 1e-6 {
        return Err(format!("sets or strategies off by {worst:.3e}"));
    }
    if outside_nash.is_empty() {
        return Err("OO stayed Nash at (0.05, 0.8), where optimism should lose to pessimism".into());
    }
    Ok(format!(
        "3 (alpha, beta) pairs: sets, strategies and consistent sets within {worst:.2e}; OO unique Nash in {matrices} matrices at (0.2, 0.45) and (0.1, 0.3); OO not Nash at {} of 25 type pairs for (0.05, 0.8)",
        outside_nash.len()
    ))
}

fn no_mutual_pessimism() -> Outcome {
    let cfg = fast();
    let cournot = no_mutual_pessimism_check(&cournot_samples(200, 7), PessimismRule::NotBoth, 33, &cfg).map_err(err)?;
    let ext = no_mutual_pessimism_check(&externality_samples(100, 8), PessimismRule::Neither, 33, &cfg).map_err(err)?;
    for report in [&cournot, &ext] {
        if let Some(c) = report.counterexamples.first() {
            return Err(format!("{} counterexamples, first {:?}", report.counterexamples.len(), c));
        }
    }
    Ok(format!(
        "Cournot: {} checked ({} skipped), externality: {} checked, 0 counterexamples",
        cournot.checked, cournot.skipped, ext.checked
    ))
}

fn bayesian() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let mu = [rng.gen_range(0.0..0.5), rng.gen_range(0.0..0.5)];
        let theta = [rng.gen_range(0.0..0.5), rng.gen_range(0.0..0.5)];
        let x = cournot::bayesian_equilibrium(mu, theta).map_err(err)?;
        for (i, j) in [(0, 1), (1, 0)] {
            // The opponent's strategy is affine in its cost, so its expectation
            // is the strategy at the mean cost.
            let mut at_mean = theta;
            at_mean[j] = mu[j];
            let expected_xj = cournot::bayesian_equilibrium(mu, at_mean).map_err(err)?[j];
            worst = worst.max((1.0 - 2.0 * x[i] - expected_xj - theta[i]).abs());
        }
    }
    let mut nash_gap: f64 = 0.0;
    for _ in 0..50 {
        let theta = [rng.gen_range(0.0..0.5), rng.gen_range(0.0..0.5)];
        let x = cournot::bayesian_equilibrium(theta, theta).map_err(err)?;
        let nash = [(1.0 - 2.0 * theta[0] + theta[1]) / 3.0, (1.0 - 2.0 * theta[1] + theta[0]) / 3.0];
        nash_gap = nash_gap.max((x[0] - nash[0]).abs()).max((x[1] - nash[1]).abs());
    }
    if worst > 1e-12 || nash_gap > 1e-12 {
        return Err(format!("first-order residual {worst:.3e}, Nash gap {nash_gap:.3e}"));
    }
    Ok(format!(
        "50 samples, max first-order residual {worst:.2e}; Nash gap with exact means {nash_gap:.2e}"
    ))
}

fn oracle_independence() -> Outcome {
    let cfg = VerifyConfig::default();
    let game = CournotGame::symmetric(0.1, 0.3).map_err(err)?;
    let theta = [0.2, 0.25];
    let params = ExternalityParams::new(0.2, 0.45, 0.3, 0.4).map_err(err)?;
    let run = |forms: &ClosedForms| -> Result<Vec<attitude_core::verify::Check>, String> {
        let mut checks = verify_cournot(&game, theta, forms, &cfg).map_err(err)?.checks;
        checks.extend(verify_externality(&params, forms, &cfg).map_err(err)?.checks);
        Ok(checks)
    };
    let clean = run(&ClosedForms::default())?;
    if let Some(c) = clean.iter().find(|c| !c.passed) {
        return Err(format!("{} failed: delta {} > {} {}", c.name, c.delta, c.threshold, c.unit));
    }
    let grid_delta = clean
        .iter()
        .filter(|c| c.unit == "grid steps")
        .map(|c| c.delta)
        .fold(0.0, f64::max);
    let mut caught = Vec::new();
    for fault in Fault::ALL {
        let checks = run(&ClosedForms::default().with_fault(fault))?;
        match checks.iter().find(|c| !c.passed) {
            Some(c) => caught.push(format!("{} by {}", fault.name(), c.name)),
            None => return Err(format!("fault {} went unnoticed", fault.name())),
        }
    }
    Ok(format!(
        "{} checks pass, max solver/oracle delta {grid_delta:.2} grid steps; {} of {} seeded faults caught",
        clean.len(),
        caught.len(),
        Fault::ALL.len()
    ))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);
    let criteria: [Criterion; 9] = [
        ("singleton types coincide with Nash", coincidence, Some(Duration::from_secs(5))),
        ("Cournot uncertainty equilibrium closed form", cournot_closed_form, Some(Duration::from_secs(30))),
        ("dominance thresholds", lemma_thresholds, Some(Duration::from_secs(60))),
        ("prisoner's dilemma", prisoners_dilemma, None),
        ("robust attitude", robust_attitude, Some(Duration::from_secs(60))),
        ("externality game", externality, None),
        ("no mutual pessimism", no_mutual_pessimism, None),
        ("Bayesian baseline", bayesian, None),
        ("oracle independence", oracle_independence, Some(Duration::from_secs(300))),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, run, limit)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let result = result.and_then(|msg| within(elapsed, *limit).map(|_| msg));
        match result {
            Ok(msg) => println!("PASS criterion {} ({name}): {msg} [{elapsed:.2?}]", k + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {msg} [{elapsed:.2?}]", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
