mod config;
mod output;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;

use config::{Analysis, RunConfig};
use run::{Options, Status};

/// Solve uncertainty equilibria and analyse attitude games from a TOML config.
#[derive(Debug, Parser)]
#[command(name = "attitude", version)]
struct Cli {
    /// Run configuration (TOML).
    #[arg(long)]
    config: PathBuf,

    /// Output directory; overrides `output.directory`.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Analysis to run; overrides `analysis` in the config.
    #[arg(long, value_enum)]
    analysis: Option<Analysis>,

    /// Endpoint tolerance of the fixed-point iteration.
    #[arg(long)]
    tolerance: Option<f64>,

    /// Type-grid size of the solver and strategy-grid size of the oracle.
    #[arg(long)]
    resolution: Option<usize>,

    /// Exit 0 even when some equilibrium fails to converge.
    #[arg(long)]
    allow_nonconverged: bool,

    /// Seed of the uniqueness-probe restarts.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Plant an error in one closed form before verifying.
    #[arg(long, hide = true)]
    inject_fault: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::NonConverged) => {
            eprintln!("error: some equilibria did not converge (use --allow-nonconverged to accept)");
            ExitCode::from(2)
        }
        Ok(Status::VerifyFailed) => {
            eprintln!("error: verification failed");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn execute(cli: &Cli) -> Result<Status> {
    let mut cfg = RunConfig::load(&cli.config)?;
    if let Some(a) = cli.analysis {
        cfg.analysis = a;
    }
    if let Some(t) = cli.tolerance {
        anyhow::ensure!(t > 0.0, "--tolerance must be positive");
        cfg.solver.tolerance = t;
    }
    if let Some(n) = cli.resolution {
        anyhow::ensure!(n >= 2, "--resolution must be at least 2");
        cfg.solver.theta_grid = n;
        cfg.oracle.strategy_points = n;
    }
    if let Some(dir) = &cli.out {
        cfg.output.directory = dir.clone();
    }
    let fault = cli.inject_fault.as_deref().map(str::parse).transpose()?;
    let opts = Options {
        allow_nonconverged: cli.allow_nonconverged,
        seed: cli.seed,
        fault,
    };

    let outcome = run::run(&cfg, &opts)?;
    let dir = &cfg.output.directory;
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let report = dir.join(&cfg.output.report);
    std::fs::write(&report, &outcome.report).with_context(|| format!("writing {}", report.display()))?;
    if cfg.analysis == Analysis::Verify {
        output::write_checks(&dir.join("checks.csv"), &outcome.checks)?;
    } else {
        output::write_rows(&dir.join(&cfg.output.table), &outcome.rows)?;
    }
    print!("{}", outcome.report);
    Ok(outcome.status)
}
