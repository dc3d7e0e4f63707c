use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use attitude_core::cournot::CournotGame;
use attitude_core::externality::ExternalityParams;
use attitude_core::oracle::OracleConfig;
use attitude_core::{Interval, SearchConfig, SolverConfig};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Analysis {
    Equilibrium,
    Matrix,
    Dominance,
    Robust,
    ConsistentSets,
    Verify,
}

impl Analysis {
    pub fn name(self) -> String {
        use clap::ValueEnum;
        self.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GameKind {
    Cournot,
    Externality,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    game: GameKind,
    analysis: Option<Analysis>,
    parameters: RawParameters,
    profile: Option<RawProfile>,
    sweep: Option<toml::Table>,
    #[serde(default)]
    solver: SolverSection,
    #[serde(default)]
    oracle: OracleSection,
    #[serde(default)]
    robust: RobustSection,
    #[serde(default)]
    output: OutputSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParameters {
    theta: [f64; 2],
    types1: Option<[f64; 2]>,
    types2: Option<[f64; 2]>,
    alpha: Option<f64>,
    beta: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProfile {
    pi: [f64; 2],
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub tolerance: f64,
    pub max_iter: usize,
    pub theta_grid: usize,
    pub strategy_grid: usize,
    /// Random restarts of the uniqueness probe; 0 turns it off.
    pub restarts: usize,
    /// Opponent types sampled by the dominance check.
    pub theta_j_grid: usize,
}

impl Default for SolverSection {
    fn default() -> Self {
        let d = SolverConfig::default();
        Self {
            tolerance: d.tolerance,
            max_iter: d.max_iter,
            theta_grid: d.theta_grid,
            strategy_grid: d.strategy_grid,
            restarts: 0,
            theta_j_grid: attitude_core::attitude_game::THETA_J_GRID,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleSection {
    pub strategy_points: usize,
    pub type_points: usize,
    pub attitude_points: usize,
    pub opponent_attitude_points: usize,
    pub refinement: bool,
}

impl Default for OracleSection {
    fn default() -> Self {
        let d = OracleConfig::default();
        Self {
            strategy_points: d.strategy_points,
            type_points: d.type_points,
            attitude_points: d.attitude_points,
            opponent_attitude_points: d.opponent_attitude_points,
            refinement: true,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum OpponentTypeSpec {
    Named(String),
    Fixed(f64),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RobustSection {
    pub pi_grid: usize,
    pub opponent_pi_grid: usize,
    /// `"worst-case"` or a fixed opponent type.
    pub opponent_type: OpponentTypeSpec,
    pub opponent_type_grid: usize,
}

impl Default for RobustSection {
    fn default() -> Self {
        Self {
            pi_grid: 101,
            opponent_pi_grid: 11,
            opponent_type: OpponentTypeSpec::Named("worst-case".into()),
            opponent_type_grid: 9,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub directory: PathBuf,
    pub report: String,
    pub table: String,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            directory: PathBuf::from("out"),
            report: "report.txt".into(),
            table: "results.csv".into(),
        }
    }
}

/// Game parameters of one run or sweep point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GameSpec {
    Cournot { game: CournotGame, theta: [f64; 2] },
    Externality(ExternalityParams),
}

impl GameSpec {
    pub fn theta(&self) -> [f64; 2] {
        match self {
            GameSpec::Cournot { theta, .. } => *theta,
            GameSpec::Externality(p) => p.theta,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GameSpec::Cournot { .. } => "cournot",
            GameSpec::Externality(_) => "externality",
        }
    }

    /// `(alpha1, beta1, alpha2, beta2)`.
    pub fn bounds(&self) -> [f64; 4] {
        match self {
            GameSpec::Cournot { game, .. } => {
                let (a, b) = (game.types(attitude_core::Player::One), game.types(attitude_core::Player::Two));
                [a.lo(), a.hi(), b.lo(), b.hi()]
            }
            GameSpec::Externality(p) => [p.alpha, p.beta, p.alpha, p.beta],
        }
    }
}

/// A single parameter assignment: game, types and attitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub game: GameSpec,
    pub pi: Option<[f64; 2]>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub kind: GameKind,
    pub analysis: Analysis,
    pub base: Point,
    /// Sweep axes in declared order; empty without a sweep.
    pub sweep: Vec<(String, Vec<f64>)>,
    pub solver: SolverSection,
    pub oracle: OracleSection,
    pub robust: RobustSection,
    pub output: OutputSection,
}

#[derive(Debug, Clone, Copy, Default)]
struct Values {
    theta: [f64; 2],
    types: [[f64; 2]; 2],
    alpha: f64,
    beta: f64,
    pi: Option<[f64; 2]>,
}

const COURNOT_KEYS: [&str; 8] = ["pi1", "pi2", "theta1", "theta2", "alpha1", "beta1", "alpha2", "beta2"];
const EXTERNALITY_KEYS: [&str; 6] = ["pi1", "pi2", "theta1", "theta2", "alpha", "beta"];

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text)?;
        let values = Values {
            theta: raw.parameters.theta,
            types: [
                raw.parameters.types1.unwrap_or([0.0; 2]),
                raw.parameters.types2.unwrap_or([0.0; 2]),
            ],
            alpha: raw.parameters.alpha.unwrap_or(f64::NAN),
            beta: raw.parameters.beta.unwrap_or(f64::NAN),
            pi: raw.profile.map(|p| p.pi),
        };
        match raw.game {
            GameKind::Cournot => {
                if raw.parameters.types1.is_none() || raw.parameters.types2.is_none() {
                    bail!("cournot needs parameters.types1 and parameters.types2");
                }
                if raw.parameters.alpha.is_some() || raw.parameters.beta.is_some() {
                    bail!("cournot takes types1/types2, not alpha/beta");
                }
            }
            GameKind::Externality => {
                if raw.parameters.alpha.is_none() || raw.parameters.beta.is_none() {
                    bail!("externality needs parameters.alpha and parameters.beta");
                }
                if raw.parameters.types1.is_some() || raw.parameters.types2.is_some() {
                    bail!("externality takes alpha/beta, not types1/types2");
                }
            }
        }
        let base = build_point(raw.game, &values)?;

        let allowed: &[&str] = match raw.game {
            GameKind::Cournot => &COURNOT_KEYS,
            GameKind::Externality => &EXTERNALITY_KEYS,
        };
        let mut sweep = Vec::new();
        for (key, value) in raw.sweep.unwrap_or_default() {
            if !allowed.contains(&key.as_str()) {
                bail!("sweep key `{key}` is not one of {}", allowed.join(", "));
            }
            let list = value
                .as_array()
                .with_context(|| format!("sweep.{key} must be a list of numbers"))?
                .iter()
                .map(|v| v.as_float().or_else(|| v.as_integer().map(|i| i as f64)))
                .collect::<Option<Vec<f64>>>()
                .with_context(|| format!("sweep.{key} must be a list of numbers"))?;
            if list.is_empty() {
                bail!("sweep.{key} is empty");
            }
            sweep.push((key, list));
        }
        let has_pi1 = sweep.iter().any(|(k, _)| k == "pi1");
        let has_pi2 = sweep.iter().any(|(k, _)| k == "pi2");
        if has_pi1 != has_pi2 && values.pi.is_none() {
            bail!("sweeping only one of pi1/pi2 needs a [profile] for the other");
        }

        let config = RunConfig {
            kind: raw.game,
            analysis: raw.analysis.unwrap_or(Analysis::Equilibrium),
            base,
            sweep,
            solver: raw.solver,
            oracle: raw.oracle,
            robust: raw.robust,
            output: raw.output,
        };
        config.check_resolutions()?;
        config.points()?;
        Ok(config)
    }

    fn check_resolutions(&self) -> Result<()> {
        let s = &self.solver;
        if !(s.tolerance > 0.0) {
            bail!("solver.tolerance must be positive");
        }
        for (name, v) in [
            ("solver.theta_grid", s.theta_grid),
            ("solver.strategy_grid", s.strategy_grid),
            ("solver.theta_j_grid", s.theta_j_grid),
            ("oracle.strategy_points", self.oracle.strategy_points),
            ("oracle.type_points", self.oracle.type_points),
            ("oracle.attitude_points", self.oracle.attitude_points),
            ("oracle.opponent_attitude_points", self.oracle.opponent_attitude_points),
            ("robust.pi_grid", self.robust.pi_grid),
            ("robust.opponent_pi_grid", self.robust.opponent_pi_grid),
        ] {
            if v < 2 {
                bail!("{name} must be at least 2, got {v}");
            }
        }
        if let OpponentTypeSpec::Named(n) = &self.robust.opponent_type {
            if n != "worst-case" {
                bail!("robust.opponent_type must be \"worst-case\" or a number, got \"{n}\"");
            }
        }
        Ok(())
    }

    /// Every parameter assignment of the run, in sweep order: the product of
    /// the sweep axes, the first declared axis varying slowest.
    pub fn points(&self) -> Result<Vec<Point>> {
        let base = values_of(&self.base);
        let mut out = Vec::new();
        let mut index = vec![0usize; self.sweep.len()];
        loop {
            let mut v = base;
            for (axis, (key, list)) in self.sweep.iter().enumerate() {
                assign(&mut v, key, list[index[axis]]);
            }
            let point = build_point(self.kind, &v).with_context(|| {
                let at: Vec<String> = self
                    .sweep
                    .iter()
                    .enumerate()
                    .map(|(axis, (k, l))| format!("{k} = {}", l[index[axis]]))
                    .collect();
                format!("at sweep point {}", at.join(", "))
            })?;
            out.push(point);
            let mut axis = self.sweep.len();
            loop {
                if axis == 0 {
                    return Ok(out);
                }
                axis -= 1;
                index[axis] += 1;
                if index[axis] < self.sweep[axis].1.len() {
                    break;
                }
                index[axis] = 0;
            }
        }
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            tolerance: self.solver.tolerance,
            max_iter: self.solver.max_iter,
            theta_grid: self.solver.theta_grid,
            strategy_grid: self.solver.strategy_grid,
            search: SearchConfig::default(),
        }
    }

    pub fn oracle_config(&self) -> OracleConfig {
        OracleConfig {
            strategy_points: self.oracle.strategy_points,
            type_points: self.oracle.type_points,
            attitude_points: self.oracle.attitude_points,
            opponent_attitude_points: self.oracle.opponent_attitude_points,
            ..OracleConfig::default()
        }
    }
}

fn values_of(point: &Point) -> Values {
    let theta = point.game.theta();
    let b = point.game.bounds();
    Values {
        theta,
        types: [[b[0], b[1]], [b[2], b[3]]],
        alpha: b[0],
        beta: b[1],
        pi: point.pi,
    }
}

fn assign(v: &mut Values, key: &str, x: f64) {
    match key {
        "pi1" => v.pi.get_or_insert([x, x])[0] = x,
        "pi2" => v.pi.get_or_insert([x, x])[1] = x,
        "theta1" => v.theta[0] = x,
        "theta2" => v.theta[1] = x,
        "alpha1" => v.types[0][0] = x,
        "beta1" => v.types[0][1] = x,
        "alpha2" => v.types[1][0] = x,
        "beta2" => v.types[1][1] = x,
        "alpha" => v.alpha = x,
        "beta" => v.beta = x,
        _ => unreachable!("sweep keys are validated"),
    }
}

fn build_point(kind: GameKind, v: &Values) -> Result<Point> {
    if let Some(pi) = v.pi {
        for (k, p) in pi.iter().enumerate() {
            if !(0.0..=1.0).contains(p) {
                bail!("pi{} = {p} must lie in [0, 1]", k + 1);
            }
        }
    }
    let game = match kind {
        GameKind::Cournot => {
            let t1 = Interval::new(v.types[0][0], v.types[0][1])?;
            let t2 = Interval::new(v.types[1][0], v.types[1][1])?;
            let game = CournotGame::new(t1, t2)?;
            attitude_core::cournot::CournotParams::new(game, v.theta[0], v.theta[1])?;
            GameSpec::Cournot { game, theta: v.theta }
        }
        GameKind::Externality => {
            GameSpec::Externality(ExternalityParams::new(v.alpha, v.beta, v.theta[0], v.theta[1])?)
        }
    };
    Ok(Point { game, pi: v.pi })
}

#[cfg(test)]
mod tests {
    use super::*;

    const COURNOT: &str = r#"
game = "cournot"
[parameters]
theta = [0.2, 0.2]
types1 = [0.1, 0.3]
types2 = [0.1, 0.3]
"#;

    #[test]
    fn sweep_order_follows_declaration() {
        let text = format!("{COURNOT}\n[sweep]\npi2 = [0.0, 1.0]\npi1 = [0.0, 0.5, 1.0]\n");
        let c = RunConfig::parse(&text).unwrap();
        let pis: Vec<[f64; 2]> = c.points().unwrap().iter().map(|p| p.pi.unwrap()).collect();
        assert_eq!(pis.len(), 6);
        assert_eq!(pis[0], [0.0, 0.0]);
        assert_eq!(pis[1], [0.5, 0.0]);
        assert_eq!(pis[3], [0.0, 1.0]);
    }

    #[test]
    fn constraint_violations_are_named() {
        let text = COURNOT.replace("types1 = [0.1, 0.3]", "types1 = [0.1, 0.7]");
        let err = format!("{:#}", RunConfig::parse(&text).unwrap_err());
        assert!(err.contains("1/2"), "{err}");

        let text = r#"
game = "externality"
[parameters]
theta = [0.3, 0.4]
alpha = 0.3
beta = 0.5
"#;
        let err = format!("{:#}", RunConfig::parse(text).unwrap_err());
        assert!(err.contains("2 alpha < beta"), "{err}");
    }

    #[test]
    fn unknown_sweep_key_is_rejected() {
        let text = format!("{COURNOT}\n[sweep]\nalpha = [0.1]\n");
        assert!(RunConfig::parse(&text).is_err());
    }
}
