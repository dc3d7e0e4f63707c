use std::path::Path;

use anyhow::{Context, Result};
use attitude_core::Interval;

pub const COLUMNS: [&str; 20] = [
    "game", "theta1", "theta2", "alpha1", "beta1", "alpha2", "beta2", "pi1", "pi2", "X1_lo", "X1_hi", "X2_lo", "X2_hi",
    "x1", "x2", "U1", "U2", "converged", "residual", "iterations",
];

/// `%.12g`: twelve significant digits, trailing zeros dropped, exponent form
/// outside `[1e-5, 1e12)`.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        let m = trim(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (11 - exp).max(0) as usize;
    trim(&format!("{x:.decimals$}")).to_string()
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub game: &'static str,
    pub theta: [f64; 2],
    pub bounds: [f64; 4],
    pub pi: Option<[f64; 2]>,
    pub sets: [Interval; 2],
    pub x: Option<[f64; 2]>,
    pub u: Option<[f64; 2]>,
    pub converged: bool,
    pub residual: f64,
    pub iterations: usize,
}

impl Row {
    fn fields(&self) -> Vec<String> {
        let opt = |v: Option<[f64; 2]>, k: usize| v.map(|v| num(v[k])).unwrap_or_default();
        let mut f = vec![self.game.to_string(), num(self.theta[0]), num(self.theta[1])];
        f.extend(self.bounds.iter().map(|&b| num(b)));
        f.push(opt(self.pi, 0));
        f.push(opt(self.pi, 1));
        for s in &self.sets {
            f.push(num(s.lo()));
            f.push(num(s.hi()));
        }
        f.extend([opt(self.x, 0), opt(self.x, 1), opt(self.u, 0), opt(self.u, 1)]);
        f.push(self.converged.to_string());
        f.push(num(self.residual));
        f.push(self.iterations.to_string());
        f
    }
}

pub fn write_rows(path: &Path, rows: &[Row]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(COLUMNS)?;
    for row in rows {
        w.write_record(row.fields())?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_checks(path: &Path, checks: &[attitude_core::verify::Check]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(["check", "delta", "threshold", "unit", "passed", "detail"])?;
    for c in checks {
        w.write_record([
            c.name.to_string(),
            num(c.delta),
            num(c.threshold),
            c.unit.to_string(),
            c.passed.to_string(),
            c.detail.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
