//! Fisher-information recursion, Bayesian Cramér–Rao MMSE bound and the
//! I-MMSE entropy integral behind the phase-channel bound.
//!
//! With `a = L/σ²` (phase-increment precision per sample) and `b = P/L`
//! (per-sample power), the information about the newest phase obeys
//!
//! ```text
//! J_k = (a + b) − a² / (J_{k−1} + a)
//! ```
//!
//! whose positive fixed point is the root of `J² − bJ − ab = 0`. Adding an
//! auxiliary Gaussian observation of SNR `ρ` at the last step gives
//! `J(ρ) = ρ + c` with `c = a·J*/(J* + a)`, and `1/J(ρ)` lower-bounds the
//! MMSE entering the I-MMSE integral
//!
//! ```text
//! h ≥ ½ln(2πeV) − ½∫₀^∞ [1/(ρ + 1/V) − 1/(ρ + c)] dρ,   V = π²/3.
//! ```

use std::f64::consts::{E, PI, TAU};
use std::io::{self, Write};

use thiserror::Error;

use crate::output::fmt_f64;
use crate::quadrature::{integrate, QuadratureConfig, QuadratureError};

/// Variance of a phase uniform on `[0, 2π)`.
pub const UNIFORM_PHASE_VARIANCE: f64 = PI * PI / 3.0;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const ITERATION_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ImmseError {
    #[error("invalid Fisher parameters a = {a}, b = {b}, rho = {rho}")]
    InvalidParams { a: f64, b: f64, rho: f64 },
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("fixed-point iteration did not converge in {iterations} steps (residual {residual})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("iterated fixed point {iterated} disagrees with closed form {closed}")]
    Disagreement { iterated: f64, closed: f64 },
    #[error("effective precision is zero (no signal power); entropy integral diverges")]
    ZeroPrecision,
    #[error("quadrature failed: {0}")]
    QuadratureFailure(#[from] QuadratureError),
}

/// Recursion coefficients: `a = L/σ²`, `b = P/L`, auxiliary SNR `rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherParams {
    pub a: f64,
    pub b: f64,
    pub rho: f64,
}

impl FisherParams {
    pub fn new(a: f64, b: f64, rho: f64) -> Result<Self, ImmseError> {
        check(a, b, rho)?;
        Ok(Self { a, b, rho })
    }

    /// From channel quantities `(P, σ², L)`.
    pub fn from_channel(power: f64, sigma2: f64, oversampling: f64) -> Result<Self, ImmseError> {
        Self::new(oversampling / sigma2, power / oversampling, 0.0)
    }
}

fn check(a: f64, b: f64, rho: f64) -> Result<(), ImmseError> {
    let ok = a.is_finite() && a > 0.0 && b.is_finite() && b >= 0.0 && rho >= 0.0 && !rho.is_nan();
    if ok {
        Ok(())
    } else {
        Err(ImmseError::InvalidParams { a, b, rho })
    }
}

fn step(a: f64, b: f64, j: f64) -> f64 {
    // (a + b) − a²/(J + a), rearranged to avoid cancellation when a ≫ J
    b + a * j / (j + a)
}

/// Iterates the interior recursion `k` times from `j0`, returning `J_1 … J_k`.
pub fn fisher_recursion(a: f64, b: f64, k: usize, j0: f64) -> Vec<f64> {
    std::iter::successors(Some(j0), |&j| Some(step(a, b, j)))
        .skip(1)
        .take(k)
        .collect()
}

/// Positive root of `J² − bJ − ab = 0`, written without cancellation.
pub fn fixed_point_closed_form(a: f64, b: f64) -> f64 {
    0.5 * b + (0.25 * b * b + a * b).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointResult {
    /// Closed-form root.
    pub j_star: f64,
    /// Limit of the recursion started at 0.
    pub j_star_iterated: f64,
    pub iterations: usize,
    /// `|J − step(J)|` at the iterated value.
    pub residual: f64,
}

/// Solves the fixed point by closed form and by iteration from `J = 0`.
///
/// The iteration stops once its error estimate `residual·q/(1 − q)`, with
/// `q = (a/(J + a))²` the local contraction factor, falls below `tol·J`.
/// The two answers must agree to `10·tol` relative.
pub fn fisher_fixed_point(a: f64, b: f64, tol: f64) -> Result<FixedPointResult, ImmseError> {
    check(a, b, 0.0)?;
    if !(tol > 0.0) {
        return Err(ImmseError::InvalidTolerance(tol));
    }
    let closed = fixed_point_closed_form(a, b);
    let mut j = 0.0;
    let mut iterations = 0;
    let residual = loop {
        let next = step(a, b, j);
        iterations += 1;
        let residual = (next - j).abs();
        // the map's slope is largest at the previous iterate
        let q = (a / (j.min(next) + a)).powi(2);
        j = next;
        if residual == 0.0 {
            break residual;
        }
        if q < 1.0 && residual * q / (1.0 - q) <= tol * j {
            break (step(a, b, j) - j).abs();
        }
        if iterations >= ITERATION_CAP {
            return Err(ImmseError::NonConvergence {
                iterations,
                residual,
            });
        }
    };
    if (j - closed).abs() > 10.0 * tol * closed.max(f64::MIN_POSITIVE) {
        return Err(ImmseError::Disagreement {
            iterated: j,
            closed,
        });
    }
    Ok(FixedPointResult {
        j_star: closed,
        j_star_iterated: j,
        iterations,
        residual,
    })
}

/// Effective prior precision `c = a·J*/(J* + a)` carried into the last step.
pub fn effective_precision(a: f64, b: f64) -> f64 {
    let j = fixed_point_closed_form(a, b);
    if j == 0.0 {
        0.0
    } else {
        a * j / (j + a)
    }
}

/// `J(ρ) = (a + ρ) − a²/(J* + a) = ρ + c`.
pub fn final_step_information(a: f64, b: f64, rho: f64) -> Result<f64, ImmseError> {
    check(a, b, rho)?;
    Ok(rho + effective_precision(a, b))
}

/// `1/J(ρ)`; `+∞` when `J(ρ) = 0` (only at `b = ρ = 0`).
pub fn mmse_lower_bound(a: f64, b: f64, rho: f64) -> Result<f64, ImmseError> {
    let j = final_step_information(a, b, rho)?;
    Ok(if j == 0.0 { f64::INFINITY } else { 1.0 / j })
}

/// `1/(ρ + 1/V) − 1/(ρ + c)` in the factored form `(c − 1/V)/((ρ + 1/V)(ρ + c))`.
pub fn immse_integrand(rho: f64, c: f64, variance: f64) -> f64 {
    let inv_v = 1.0 / variance;
    (c - inv_v) / ((rho + inv_v) * (rho + c))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyBound {
    pub variance_theta: f64,
    pub precision: f64,
    /// Quadrature on `[0, ρ₀]` plus the analytic tail beyond `ρ₀`.
    pub integral_value: f64,
    /// `ln(cV)`.
    pub integral_analytic: f64,
    pub quadrature_error: f64,
    pub split_point: f64,
    pub entropy_lower_bound: f64,
    pub phase_rate_upper_bound: f64,
    /// `c < 1/V`: the bound exceeds the Gaussian-matched prior entropy.
    pub exceeds_prior_entropy: bool,
}

/// Evaluates the I-MMSE entropy bound by quadrature.
pub fn immse_entropy_bound(
    a: f64,
    b: f64,
    quad: &QuadratureConfig,
) -> Result<EntropyBound, ImmseError> {
    check(a, b, 0.0)?;
    let v = UNIFORM_PHASE_VARIANCE;
    let inv_v = 1.0 / v;
    let c = effective_precision(a, b);
    if c == 0.0 {
        return Err(ImmseError::ZeroPrecision);
    }
    let split = (10.0 * c).max(10.0 * inv_v);
    let head = integrate(|rho| immse_integrand(rho, c, v), 0.0, split, quad)?;
    // ∫_{ρ₀}^∞ = ln((ρ₀ + c)/(ρ₀ + 1/V))
    let tail = ((c - inv_v) / (split + inv_v)).ln_1p();
    let integral = head.value + tail;
    let entropy = 0.5 * (TAU * E * v).ln() - 0.5 * integral;
    Ok(EntropyBound {
        variance_theta: v,
        precision: c,
        integral_value: integral,
        integral_analytic: (c * v).ln(),
        quadrature_error: head.error,
        split_point: split,
        entropy_lower_bound: entropy,
        phase_rate_upper_bound: TAU.ln() - entropy,
        exceeds_prior_entropy: c < inv_v,
    })
}

/// Writes `rho,integrand,J_rho` at each `rho`.
pub fn write_integrand_csv<W: Write>(mut w: W, a: f64, b: f64, rhos: &[f64]) -> io::Result<()> {
    let c = effective_precision(a, b);
    writeln!(w, "rho,integrand,J_rho")?;
    for &rho in rhos {
        writeln!(
            w,
            "{},{},{}",
            fmt_f64(rho),
            fmt_f64(immse_integrand(rho, c, UNIFORM_PHASE_VARIANCE)),
            fmt_f64(rho + c)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOLDEN: f64 = 1.618_033_988_749_895;

    fn log_grid() -> Vec<f64> {
        (0..7).map(|i| 10f64.powi(i - 3)).collect()
    }

    /// Root of J² − bJ − ab by bisection on [0, a + b].
    fn root_by_bisection(a: f64, b: f64) -> f64 {
        let f = |j: f64| j * j - b * j - a * b;
        let (mut lo, mut hi) = (0.0f64, a + b);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn recursion_converges_to_golden_ratio() {
        let it = fisher_recursion(1.0, 1.0, 200, 0.0);
        assert_eq!(it.len(), 200);
        assert!((it[199] - GOLDEN).abs() < 1e-14);
        assert!((it[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn recursion_without_power_stays_at_zero() {
        let it = fisher_recursion(3.0, 0.0, 50, 0.0);
        assert!(it.iter().all(|&j| j == 0.0));
        let from_above = fisher_recursion(3.0, 0.0, 5000, 1.0);
        assert!(from_above[4999] < 1e-3);
    }

    #[test]
    fn recursion_is_monotone_and_bounded() {
        for a in log_grid() {
            for b in log_grid() {
                let it = fisher_recursion(a, b, 500, 0.0);
                for w in it.windows(2) {
                    assert!(w[1] >= w[0] * (1.0 - 1e-15), "a={a} b={b}");
                }
                assert!(it.iter().all(|&j| j <= a + b));
            }
        }
    }

    #[test]
    fn fixed_point_examples() {
        let r = fisher_fixed_point(1.0, 1.0, DEFAULT_TOL).unwrap();
        assert!((r.j_star - GOLDEN).abs() < 1e-15);
        assert!((r.j_star_iterated - GOLDEN).abs() < 1e-11);
        let r = fisher_fixed_point(4.0, 1.0, DEFAULT_TOL).unwrap();
        assert!((r.j_star - (1.0 + 17f64.sqrt()) / 2.0).abs() < 1e-15);
        assert!((r.j_star - 2.561_552_812_808_83).abs() < 1e-14);
        let r = fisher_fixed_point(4.0, 0.0, DEFAULT_TOL).unwrap();
        assert_eq!(r.j_star, 0.0);
        assert_eq!(r.j_star_iterated, 0.0);
    }

    #[test]
    fn fixed_point_matches_bisection_oracle() {
        for a in log_grid() {
            for b in log_grid() {
                let oracle = root_by_bisection(a, b);
                let r = fisher_fixed_point(a, b, DEFAULT_TOL).unwrap();
                assert!((r.j_star - oracle).abs() <= 1e-13 * oracle, "a={a} b={b}");
                assert!((r.j_star_iterated - oracle).abs() <= 1e-10 * oracle);
            }
        }
    }

    #[test]
    fn fixed_point_errors() {
        assert!(matches!(
            fisher_fixed_point(0.0, 1.0, 1e-12),
            Err(ImmseError::InvalidParams { .. })
        ));
        assert_eq!(
            fisher_fixed_point(1.0, 1.0, 0.0),
            Err(ImmseError::InvalidTolerance(0.0))
        );
    }

    #[test]
    fn final_step_examples() {
        let c = final_step_information(1.0, 1.0, 0.0).unwrap();
        assert!((c - (GOLDEN - 1.0)).abs() < 1e-15);
        let slope = final_step_information(2.0, 3.0, 5.0).unwrap()
            - final_step_information(2.0, 3.0, 4.0).unwrap();
        assert!((slope - 1.0).abs() < 1e-14);
        for a in log_grid() {
            for b in log_grid() {
                let c = effective_precision(a, b);
                let x = 4.0 * a / b;
                let direct = 0.5 * b * (0.5 * x.ln_1p()).exp_m1();
                assert!((c - direct).abs() <= 1e-12 * direct, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn mmse_bound_examples() {
        assert!((mmse_lower_bound(1.0, 1.0, 0.0).unwrap() - GOLDEN).abs() < 1e-14);
        assert_eq!(mmse_lower_bound(1.0, 0.0, 0.0).unwrap(), f64::INFINITY);
        let m = mmse_lower_bound(1.0, 1.0, 1e9).unwrap();
        assert!((m * 1e9 - 1.0).abs() < 1e-8);
        let mut prev = f64::INFINITY;
        for i in 0..40 {
            let m = mmse_lower_bound(0.5, 2.0, 0.25 * i as f64).unwrap();
            assert!(m > 0.0 && m < prev);
            prev = m;
        }
    }

    #[test]
    fn entropy_bound_golden_example() {
        let e = immse_entropy_bound(1.0, 1.0, &QuadratureConfig::default()).unwrap();
        let c = GOLDEN - 1.0;
        let analytic = (c * UNIFORM_PHASE_VARIANCE).ln();
        assert!((analytic - 0.709_636).abs() < 1e-6);
        assert!((e.integral_value - analytic).abs() < 1e-9);
        assert!((e.integral_analytic - analytic).abs() < 1e-15);
        let expect = 0.5 * (TAU / E).ln() + 0.5 * c.ln();
        assert!((e.phase_rate_upper_bound - expect).abs() < 1e-9);
        assert!((e.phase_rate_upper_bound - 0.178_33).abs() < 1e-5);
        assert!(!e.exceeds_prior_entropy);
    }

    #[test]
    fn entropy_bound_at_matched_precision_is_prior_entropy() {
        // pick b so that c = 1/V; c = a·J/(J + a) with J = c·a/(a − c), b = J²/(J + a)
        let a = 2.0;
        let c = 1.0 / UNIFORM_PHASE_VARIANCE;
        let j = c * a / (a - c);
        let b = j * j / (j + a);
        let e = immse_entropy_bound(a, b, &QuadratureConfig::default()).unwrap();
        assert!(e.integral_value.abs() < 1e-12);
        let prior = 0.5 * (TAU * E * UNIFORM_PHASE_VARIANCE).ln();
        assert!((e.entropy_lower_bound - prior).abs() < 1e-12);
    }

    #[test]
    fn low_precision_is_flagged() {
        let e = immse_entropy_bound(1e-3, 1e-3, &QuadratureConfig::default()).unwrap();
        assert!(e.exceeds_prior_entropy);
        assert!(e.integral_value < 0.0);
        assert_eq!(
            immse_entropy_bound(1.0, 0.0, &QuadratureConfig::default()),
            Err(ImmseError::ZeroPrecision)
        );
    }

    #[test]
    fn integrand_csv() {
        let mut buf = Vec::new();
        write_integrand_csv(&mut buf, 1.0, 1.0, &[0.0, 1.0]).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("rho,integrand,J_rho\n0.0000000000000000e0,"));
        assert_eq!(s.lines().count(), 3);
    }
}
