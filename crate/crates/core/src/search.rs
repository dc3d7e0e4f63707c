//! Bounded scalar optimization: a uniform grid scan, golden-section refinement
//! on the best bracket, then a parabolic polish.

use crate::interval::Interval;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    /// Points in the initial grid scan.
    pub grid_points: usize,
    /// Bracket width at which golden-section refinement stops.
    pub tolerance: f64,
    /// Relative gap under which two separated grid cells count as tied.
    pub tie_tolerance: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            grid_points: 257,
            tolerance: 1e-10,
            tie_tolerance: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub arg: f64,
    pub value: f64,
    /// A separate grid cell reached the same value: the maximizer may not be unique.
    pub tie: bool,
}

/// Maximizes `f` over `domain`. Ties between separated grid cells resolve to
/// the smaller argument and set [`Extremum::tie`].
pub fn maximize<F: Fn(f64) -> f64>(f: F, domain: Interval, cfg: &SearchConfig) -> Extremum {
    if domain.is_singleton() {
        let x = domain.lo();
        return Extremum {
            arg: x,
            value: f(x),
            tie: false,
        };
    }
    let n = cfg.grid_points.max(3);
    let grid = domain.grid(n);
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();

    let mut best = 0;
    for k in 1..n {
        if values[k] > values[best] {
            best = k;
        }
    }
    let scale = values[best].abs().max(1.0);
    let tie = values
        .iter()
        .enumerate()
        .any(|(k, &v)| k.abs_diff(best) >= 2 && v >= values[best] - cfg.tie_tolerance * scale);

    let a = grid[best.saturating_sub(1)];
    let b = grid[(best + 1).min(n - 1)];
    let (mut x, mut fx) = golden(&f, a, b, cfg.tolerance);
    if values[best] > fx {
        x = grid[best];
        fx = values[best];
    }
    let (px, pfx) = polish(&f, x, fx, domain);
    if pfx >= fx - 4.0 * f64::EPSILON * fx.abs().max(1.0) {
        x = px;
        fx = pfx;
    }
    // Boundary maximizers are returned exactly.
    for edge in [domain.lo(), domain.hi()] {
        if (edge - x).abs() <= (b - a) {
            let fe = f(edge);
            if fe >= fx {
                x = edge;
                fx = fe;
            }
        }
    }
    Extremum { arg: x, value: fx, tie }
}

pub fn minimize<F: Fn(f64) -> f64>(f: F, domain: Interval, cfg: &SearchConfig) -> Extremum {
    let e = maximize(|x| -f(x), domain, cfg);
    Extremum {
        arg: e.arg,
        value: -e.value,
        tie: e.tie,
    }
}

fn golden<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a) > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

// Vertex of the parabola through three symmetric samples. Exact for quadratic
// objectives; the second pass tightens smooth non-quadratic ones.
fn polish<F: Fn(f64) -> f64>(f: &F, mut x: f64, mut fx: f64, domain: Interval) -> (f64, f64) {
    for h in [1e-3, 1e-5] {
        if x - h < domain.lo() || x + h > domain.hi() {
            break;
        }
        let fl = f(x - h);
        let fr = f(x + h);
        let curvature = fr - 2.0 * fx + fl;
        if curvature >= 0.0 {
            break;
        }
        let step = -h * (fr - fl) / (2.0 * curvature);
        if step.abs() > h {
            break;
        }
        x += step;
        fx = f(x);
    }
    (x, fx)
}
