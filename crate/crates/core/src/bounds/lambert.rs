//! Real Lambert W on the lower branch, `W_{-1}`: for `-1/e <= y < 0`, the
//! solution `w <= -1` of `w e^w = y`.

use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 100;
const STEP_TOL: f64 = 1e-12;
/// Residual at which an iterate is accepted even if steps are still above
/// tolerance; near the branch point steps stall at ~1e-10 from rounding.
const RESIDUAL_TOL: f64 = 4.0 * f64::EPSILON;
/// Below this `1 + e y`, the solver starts from the branch-point series.
const SERIES_SWITCH: f64 = 1e-4;

/// Result of one solve, with diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambertSolve {
    pub w: f64,
    pub iterations: usize,
    /// `|w e^w - y| / |y|`
    pub relative_residual: f64,
}

/// `-1 - sqrt(2u) - u`, a strict lower bound on `W_{-1}(-e^{-u-1})` for
/// `u > 0`. Also the starting point of the solver.
pub fn lambert_wm1_lower_bound(u: f64) -> f64 {
    -1.0 - (2.0 * u).sqrt() - u
}

pub fn lambert_wm1(y: f64) -> Result<f64> {
    lambert_wm1_solve(y).map(|s| s.w)
}

/// Halley iteration on `w e^w - y`, started from [`lambert_wm1_lower_bound`]
/// (or the branch-point series when `y` is within 1e-4/e of `-1/e`).
pub fn lambert_wm1_solve(y: f64) -> Result<LambertSolve> {
    let branch_point = -(-1.0f64).exp();
    if !(y >= branch_point && y < 0.0) {
        return Err(Error::Domain(format!("W_-1 is defined on [-1/e, 0), got {y}")));
    }
    if y == branch_point {
        return Ok(LambertSolve { w: -1.0, iterations: 0, relative_residual: 0.0 });
    }
    let near = 1.0 + std::f64::consts::E * y;
    let mut w = if near < SERIES_SWITCH {
        // W = -1 + p - p^2/3 + 11 p^3/72 - ... with p = -sqrt(2 (1 + e y)).
        let p = -(2.0 * near.max(0.0)).sqrt();
        -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * 11.0 / 72.0))
    } else {
        // y = -exp(-u - 1)
        let u = (-(-y).ln() - 1.0).max(0.0);
        lambert_wm1_lower_bound(u)
    };
    for it in 1..=MAX_ITERATIONS {
        let ew = w.exp();
        let f = w * ew - y;
        if f.abs() <= RESIDUAL_TOL * y.abs() {
            return Ok(finish(w, y, it - 1));
        }
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            return Ok(finish(-1.0, y, it));
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let mut next = w - f / denom;
        // stay on the branch
        if next > -1.0 {
            next = 0.5 * (w - 1.0);
        }
        let step = (next - w).abs();
        w = next;
        if step <= STEP_TOL * w.abs() {
            return Ok(finish(w, y, it));
        }
    }
    Err(Error::Numerical(format!("W_-1({y}) did not converge in {MAX_ITERATIONS} iterations (last w = {w})")))
}

fn finish(w: f64, y: f64, iterations: usize) -> LambertSolve {
    let relative_residual = ((w * w.exp() - y) / y).abs();
    LambertSolve { w, iterations, relative_residual }
}
