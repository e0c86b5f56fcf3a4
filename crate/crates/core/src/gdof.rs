//! Generalized degrees of freedom: the closed-form characterization and
//! pre-log slopes fitted to any bound evaluated along `L = P^α`.

use thiserror::Error;

use crate::bounds::{BoundError, BoundKind};
use crate::params::{GdofParams, OperatingPoint, ParamError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GdofError {
    #[error("oversampling exponent must be non-negative, got {0}")]
    NegativeAlpha(f64),
    #[error("power grid needs at least 3 points, got {0}")]
    GridTooShort(usize),
    #[error("power grid must be strictly increasing with every point above 1")]
    InvalidGrid,
    #[error("no pre-log target for bound `{0}`")]
    NoTarget(BoundKind),
    #[error("bound evaluation failed: {0}")]
    Bound(#[from] BoundError),
    #[error("bound value at P = {power} is not finite")]
    NonFiniteValue { power: f64 },
}

impl From<ParamError> for GdofError {
    fn from(e: ParamError) -> Self {
        match e {
            ParamError::NegativeAlpha(a) => GdofError::NegativeAlpha(a),
            other => GdofError::Bound(BoundError::Param(other)),
        }
    }
}

fn check_alpha(alpha: f64) -> Result<f64, GdofError> {
    Ok(GdofParams::new(alpha)?.alpha)
}

/// `D(α) = (1+α)/2` for `α ≤ ½`, `¾` beyond.
pub fn gdof_exact(alpha: f64) -> Result<f64, GdofError> {
    let alpha = check_alpha(alpha)?;
    Ok(if alpha <= 0.5 { (1.0 + alpha) / 2.0 } else { 0.75 })
}

/// Achievable GDoF: `(1+α)/2` for `α < ½`, `¾` from `½` on.
pub fn gdof_lower_bound(alpha: f64) -> Result<f64, GdofError> {
    let alpha = check_alpha(alpha)?;
    Ok(if alpha < 0.5 { (1.0 + alpha) / 2.0 } else { 0.75 })
}

/// Pre-log carried by phase modulation, `min(α/2, ¼)`.
pub fn phase_prelog(alpha: f64) -> Result<f64, GdofError> {
    let alpha = check_alpha(alpha)?;
    Ok((alpha / 2.0).min(0.25))
}

/// Pre-log carried by amplitude modulation.
pub const AMPLITUDE_PRELOG: f64 = 0.5;

/// Slope each bound should show along `L = P^α`.
pub fn prelog_target(kind: BoundKind, alpha: f64) -> Result<f64, GdofError> {
    match kind {
        BoundKind::OwpnNewTh4 => gdof_exact(alpha),
        BoundKind::OwpnOldTh3 => Ok((1.0 + check_alpha(alpha)?) / 2.0),
        BoundKind::Amplitude => {
            check_alpha(alpha)?;
            Ok(AMPLITUDE_PRELOG)
        }
        BoundKind::Phase => phase_prelog(alpha),
        BoundKind::WpnTh1 => Err(GdofError::NoTarget(kind)),
    }
}

/// `points` values log-spaced from `start` to `stop` inclusive.
pub fn log_grid(start: f64, stop: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![start];
    }
    let (l0, l1) = (start.log10(), stop.log10());
    (0..points)
        .map(|i| {
            let t = i as f64 / (points - 1) as f64;
            10f64.powf(l0 + t * (l1 - l0))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrelogEstimate {
    pub alpha: f64,
    /// Least-squares `d value / d ln P` over the fit window.
    pub slope: f64,
    pub intercept: f64,
    pub grid: Vec<f64>,
    /// Values (nats) at every grid point.
    pub values: Vec<f64>,
    /// Number of largest-`P` points used in the fit.
    pub fit_points: usize,
    /// RMS of the regression residuals.
    pub residual: f64,
}

/// Ordinary least squares of `y` on `x`: `(slope, intercept, rms residual)`.
pub fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    (slope, intercept, (rss / n).sqrt())
}

/// Fits the pre-log of `bound` along `L = max(1, P^α)` (real-valued).
///
/// `bound` returns values in nats. Only the upper half of the grid (the
/// `⌈n/2⌉` largest powers) enters the fit.
pub fn empirical_prelog<F>(
    bound: F,
    alpha: f64,
    sigma2: f64,
    p_grid: &[f64],
) -> Result<PrelogEstimate, GdofError>
where
    F: Fn(&OperatingPoint) -> Result<f64, BoundError>,
{
    let g = GdofParams::new(alpha)?;
    if p_grid.len() < 3 {
        return Err(GdofError::GridTooShort(p_grid.len()));
    }
    let increasing = p_grid.windows(2).all(|w| w[1] > w[0]);
    if !increasing || p_grid.iter().any(|&p| !(p > 1.0) || !p.is_finite()) {
        return Err(GdofError::InvalidGrid);
    }
    let values = p_grid
        .iter()
        .map(|&p| {
            let point = OperatingPoint::new(p, sigma2, g.real_oversampling(p));
            let v = bound(&point)?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(GdofError::NonFiniteValue { power: p })
            }
        })
        .collect::<Result<Vec<f64>, GdofError>>()?;
    let n = p_grid.len();
    let fit_points = n - n / 2;
    let xs: Vec<f64> = p_grid[n - fit_points..].iter().map(|p| p.ln()).collect();
    let (slope, intercept, residual) = least_squares(&xs, &values[n - fit_points..]);
    Ok(PrelogEstimate {
        alpha,
        slope,
        intercept,
        grid: p_grid.to_vec(),
        values,
        fit_points,
        residual,
    })
}

/// [`empirical_prelog`] for one of the built-in bounds (unclamped values).
pub fn bound_prelog(
    kind: BoundKind,
    alpha: f64,
    sigma2: f64,
    p_grid: &[f64],
) -> Result<PrelogEstimate, GdofError> {
    empirical_prelog(|p| kind.raw_nats(p), alpha, sigma2, p_grid)
}
