//! Lower and upper bounds on the VC dimension of 1NN(d, m), the 1NN rule
//! with m prototypes in R^d.
//!
//! * lower: `dm + 2 - d` for all supported (d, m); `2m + 1` in the plane for
//!   m >= 4; exactly 6 at (2, 3).
//! * upper, tight: the largest real root n* of `2^m n^q = 2^n`, solved in
//!   closed form with `W_{-1}`, where q is the exponent of the
//!   shatter-coefficient bound `S(n) <= 2^m n^q`.
//! * upper, loose: the same root after replacing `W_{-1}` by its
//!   closed-form lower bound.
//!
//! All logarithms are natural except in the crossing equation itself, whose
//! base-2 logs go through [`LN_2`].

use serde::Serialize;

use crate::error::{Error, Result};

mod lambert;

pub use lambert::{lambert_wm1, lambert_wm1_lower_bound, lambert_wm1_solve, LambertSolve};

/// The one base conversion: `log2(x) = ln(x) / LN_2`.
pub const LN_2: f64 = std::f64::consts::LN_2;

pub const MIN_DIM: u32 = 2;
pub const MAX_DIM: u32 = 64;
pub const MIN_PROTOTYPES: u64 = 3;
pub const MAX_PROTOTYPES: u64 = 1_000_000;

/// Relative residual accepted on `m + q log2 n* = n*`.
pub const CROSSING_RESIDUAL_TOL: f64 = 1e-9;

/// Multiplier of the agnostic-PAC sample size formula. A convention, not a
/// derived constant.
pub const SAMPLE_SIZE_CONSTANT: f64 = 1.0;

fn check_grid(d: u32, m: u64) -> Result<()> {
    if !(MIN_DIM..=MAX_DIM).contains(&d) || !(MIN_PROTOTYPES..=MAX_PROTOTYPES).contains(&m) {
        return Err(Error::Unsupported(format!(
            "(d, m) = ({d}, {m}) outside d in [{MIN_DIM}, {MAX_DIM}], m in [{MIN_PROTOTYPES}, {MAX_PROTOTYPES}]"
        )));
    }
    Ok(())
}

pub fn lower_bound(d: u32, m: u64) -> Result<u64> {
    check_grid(d, m)?;
    let d = u64::from(d);
    let general = d * m + 2 - d;
    let planar = match (d, m) {
        (2, 3) => 6,
        (2, _) => 2 * m + 1,
        _ => 0,
    };
    Ok(general.max(planar))
}

/// Exponent q of the shatter-coefficient bound: `9(m - 2)` in the plane,
/// `(d + 1) m (m - 1) / 2` otherwise.
pub fn shatter_q(d: u32, m: u64) -> Result<f64> {
    check_grid(d, m)?;
    let m = m as f64;
    Ok(if d == 2 { 9.0 * (m - 2.0) } else { f64::from(d + 1) * m * (m - 1.0) / 2.0 })
}

/// `2^m n^q`, the shatter-coefficient bound, as a base-2 logarithm.
pub fn shatter_coefficient_bound_log2(d: u32, m: u64, n: u64) -> Result<f64> {
    let q = shatter_q(d, m)?;
    Ok(m as f64 + q * (n as f64).ln() / LN_2)
}

/// Relative residual of the crossing equation `m + q log2 n = n`.
pub fn crossing_residual(m: u64, q: f64, n: f64) -> f64 {
    ((m as f64 + q * n.ln() / LN_2 - n) / n).abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TightUpperBound {
    pub real: f64,
    pub integer: u64,
    pub residual: f64,
    pub solver_iterations: usize,
}

/// Largest real solution of `2^m n^q = 2^n` and its floor.
pub fn upper_bound_tight(d: u32, m: u64) -> Result<TightUpperBound> {
    let q = shatter_q(d, m)?;
    let q_nat = q / LN_2;
    let y = -(LN_2 / q) * (-(m as f64) / q * LN_2).exp();
    let solve = lambert_wm1_solve(y)?;
    let real = -q_nat * solve.w;
    let residual = crossing_residual(m, q, real);
    if !(residual <= CROSSING_RESIDUAL_TOL) {
        return Err(Error::Numerical(format!(
            "crossing residual {residual:e} at (d, m) = ({d}, {m}), n* = {real}, W_-1 iterations {}",
            solve.iterations
        )));
    }
    let integer = real.floor() as u64;
    let above = (integer + 1) as f64;
    // Beyond n* ~ 1e13 the sign of the crossing function at floor + 1 is
    // below f64 resolution; only a violation larger than rounding noise
    // is reported.
    let log_term = q * above.ln() / LN_2;
    let noise = 16.0 * f64::EPSILON * (above + log_term);
    if m as f64 + log_term - above > noise {
        return Err(Error::Numerical(format!(
            "n = {above} still satisfies 2^m n^q >= 2^n at (d, m) = ({d}, {m}); n* = {real}"
        )));
    }
    Ok(TightUpperBound { real, integer, residual, solver_iterations: solve.iterations })
}

/// Closed-form relaxation of [`upper_bound_tight`]:
/// `q'(sqrt(2(m/q' + ln q' - 1)) + m/q' + ln q')` with `q' = q / ln 2`.
pub fn upper_bound_loose(d: u32, m: u64) -> Result<f64> {
    let q_nat = shatter_q(d, m)? / LN_2;
    let s = m as f64 / q_nat + q_nat.ln();
    if !(s - 1.0 > 0.0) {
        return Err(Error::Unsupported(format!("loose bound needs m/q' + ln q' > 1, got {s} at (d, m) = ({d}, {m})")));
    }
    Ok(q_nat * ((2.0 * (s - 1.0)).sqrt() + s))
}

/// All bounds at one (d, m).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundsReport {
    pub d: u32,
    pub m: u64,
    pub lower: u64,
    pub q: f64,
    pub upper_tight_real: f64,
    pub upper_tight: u64,
    pub upper_loose: f64,
    pub solver_residual: f64,
}

pub fn bounds_report(d: u32, m: u64) -> Result<BoundsReport> {
    let tight = upper_bound_tight(d, m)?;
    Ok(BoundsReport {
        d,
        m,
        lower: lower_bound(d, m)?,
        q: shatter_q(d, m)?,
        upper_tight_real: tight.real,
        upper_tight: tight.integer,
        upper_loose: upper_bound_loose(d, m)?,
        solver_residual: tight.residual,
    })
}

/// Agnostic-PAC style sample size `C (vc + ln(1/delta)) / epsilon^2` with
/// `C = SAMPLE_SIZE_CONSTANT`.
pub fn sample_size_estimate(vc: u64, epsilon: f64, delta: f64) -> Result<f64> {
    if vc < 1 {
        return Err(Error::InvalidInput("VC dimension must be at least 1".into()));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidInput(format!(
            "need 0 < epsilon < 1 and 0 < delta < 1, got epsilon = {epsilon}, delta = {delta}"
        )));
    }
    Ok(SAMPLE_SIZE_CONSTANT * (vc as f64 + (1.0 / delta).ln()) / (epsilon * epsilon))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lower_bounds() {
        assert_eq!(lower_bound(2, 3).unwrap(), 6);
        assert_eq!(lower_bound(2, 4).unwrap(), 9);
        assert_eq!(lower_bound(3, 3).unwrap(), 8);
        assert_eq!(lower_bound(5, 10).unwrap(), 47);
        assert!(matches!(lower_bound(1, 5), Err(Error::Unsupported(_))));
        assert!(lower_bound(2, 2).is_err());
        assert!(lower_bound(65, 3).is_err());
        assert!(lower_bound(2, MAX_PROTOTYPES + 1).is_err());
    }

    #[test]
    fn q_values() {
        assert_eq!(shatter_q(2, 4).unwrap(), 18.0);
        assert_eq!(shatter_q(3, 3).unwrap(), 12.0);
        assert_eq!(shatter_q(2, 3).unwrap(), 9.0);
    }

    #[test]
    fn tight_bound_planar_three_prototypes() {
        let t = upper_bound_tight(2, 3).unwrap();
        assert_eq!(t.integer, 55);
        assert!(t.real > 55.0 && t.real < 56.0);
        assert!(t.residual <= 1e-9);
        // scan oracle: largest n with 3 + 9 log2 n >= n
        let scan = (1..200u64).filter(|&n| 3.0 + 9.0 * (n as f64).log2() >= n as f64).max().unwrap();
        assert_eq!(scan, 55);
    }

    #[test]
    fn loose_bound_planar_three_prototypes() {
        let loose = upper_bound_loose(2, 3).unwrap();
        let q_nat = 9.0 / std::f64::consts::LN_2;
        assert!((q_nat - 12.984).abs() < 1e-3);
        let s = 3.0 / q_nat + q_nat.ln();
        let direct = q_nat * ((2.0 * (s - 1.0)).sqrt() + s);
        assert!((loose - direct).abs() < 1e-12);
        assert!((loose - 60.9).abs() < 0.05, "{loose}");
        assert!(loose >= upper_bound_tight(2, 3).unwrap().real);
    }

    #[test]
    fn report_fields_consistent() {
        let r = bounds_report(3, 7).unwrap();
        assert!(r.lower <= r.upper_tight);
        assert_eq!(r.upper_tight, r.upper_tight_real.floor() as u64);
        assert!(r.upper_tight_real <= r.upper_loose);
        assert!(r.solver_residual <= 1e-9);
    }

    #[test]
    fn extreme_grid_corners_solve() {
        for (d, m) in [(2, MAX_PROTOTYPES), (MAX_DIM, MAX_PROTOTYPES), (MAX_DIM, 3), (2, 3)] {
            let r = bounds_report(d, m).unwrap();
            assert!(r.lower <= r.upper_tight, "{r:?}");
        }
    }

    #[test]
    fn sample_size() {
        let base = sample_size_estimate(6, 0.1, 0.05).unwrap();
        assert!((base - SAMPLE_SIZE_CONSTANT * (6.0 + 20f64.ln()) / 0.01).abs() < 1e-9);
        let halved = sample_size_estimate(6, 0.05, 0.05).unwrap();
        assert!((halved / base - 4.0).abs() < 1e-12);
        let doubled = sample_size_estimate(12, 0.1, 0.05).unwrap();
        assert!(doubled <= 2.0 * base && doubled > base);
        assert!(sample_size_estimate(0, 0.1, 0.1).is_err());
        assert!(sample_size_estimate(3, 1.0, 0.1).is_err());
        assert!(sample_size_estimate(3, 0.1, 0.0).is_err());
    }
}
