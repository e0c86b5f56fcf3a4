//! Closed-form capacity bounds.
//!
//! * [`wpn_outer_bound`]: three-regime bound for the symbol-rate (`L = 1`)
//!   Wiener phase-noise channel, with its constant gap.
//! * [`owpn_old_outer_bound`]: the earlier oversampled bound
//!   `½log(1+P/2) + ½log(2πL/(eσ²)) + O(1)`, with the `O(1)` supplied by
//!   the caller.
//! * [`owpn_new_outer_bound`]: the I-MMSE based bound, which splits into
//!   [`amplitude_rate_bound`] + [`phase_rate_bound`].
//!
//! Everything except the three-regime bound is computed in nats and
//! converted on output. The three-regime bound contains the term
//! `log²(e)`, read as `(log e)²` in the reporting base, so it is evaluated
//! directly in that base.

use std::collections::BTreeMap;
use std::f64::consts::{E, PI, TAU};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::params::{convert_units, OperatingPoint, ParamError, Units};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("bound is undefined at zero power")]
    UndefinedAtZeroPower,
    #[error("the symbol-rate bound requires oversampling 1, got {0}")]
    RequiresUnitOversampling(f64),
}

/// Threshold `2π/e` separating the large-noise regime.
pub const LARGE_NOISE_THRESHOLD: f64 = TAU / E;

/// Regime of the three-regime bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WpnRegime {
    /// `σ² > 2π/e`
    LargeNoise,
    /// `P⁻¹ ≤ σ² ≤ 2π/e`
    Intermediate,
    /// `σ² < P⁻¹`
    SmallNoise,
}

impl WpnRegime {
    /// Selects the regime for `P > 0`. The branch conditions overlap when
    /// `P⁻¹ > 2π/e`; the first listed branch (large noise) then wins.
    pub fn select(power: f64, sigma2: f64) -> Result<Self, BoundError> {
        if power.is_nan() || sigma2.is_nan() {
            return Err(ParamError::NonFinite("power/sigma2").into());
        }
        if power <= 0.0 {
            return Err(BoundError::UndefinedAtZeroPower);
        }
        let inv_p = 1.0 / power;
        Ok(if sigma2 > LARGE_NOISE_THRESHOLD {
            WpnRegime::LargeNoise
        } else if sigma2 >= inv_p {
            WpnRegime::Intermediate
        } else {
            WpnRegime::SmallNoise
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            WpnRegime::LargeNoise => "large_noise",
            WpnRegime::Intermediate => "intermediate",
            WpnRegime::SmallNoise => "small_noise",
        }
    }

    /// Gap to capacity in bits per channel use.
    pub fn gap_bits(self) -> f64 {
        GapConstants::STANDARD.for_regime(self)
    }
}

impl fmt::Display for WpnRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Capacity gap of the three-regime bound, per regime, in bpcu.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapConstants {
    pub large_noise: f64,
    pub intermediate: f64,
    pub small_noise: f64,
}

impl GapConstants {
    pub const STANDARD: GapConstants = GapConstants {
        large_noise: 4.0,
        intermediate: 7.36,
        small_noise: 1.8,
    };

    pub fn for_regime(&self, r: WpnRegime) -> f64 {
        match r {
            WpnRegime::LargeNoise => self.large_noise,
            WpnRegime::Intermediate => self.intermediate,
            WpnRegime::SmallNoise => self.small_noise,
        }
    }
}

/// Bound selectors accepted by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundKind {
    WpnTh1,
    OwpnOldTh3,
    OwpnNewTh4,
    Amplitude,
    Phase,
}

impl BoundKind {
    pub const ALL: [BoundKind; 5] = [
        BoundKind::WpnTh1,
        BoundKind::OwpnOldTh3,
        BoundKind::OwpnNewTh4,
        BoundKind::Amplitude,
        BoundKind::Phase,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::WpnTh1 => "wpn_th1",
            BoundKind::OwpnOldTh3 => "owpn_old_th3",
            BoundKind::OwpnNewTh4 => "owpn_new_th4",
            BoundKind::Amplitude => "amplitude",
            BoundKind::Phase => "phase",
        }
    }

    /// Full report in `units`. `o1_constant` only affects the old bound.
    pub fn evaluate(
        self,
        point: &OperatingPoint,
        units: Units,
        o1_constant: f64,
    ) -> Result<BoundReport, BoundError> {
        match self {
            BoundKind::WpnTh1 => wpn_outer_bound(point, units),
            BoundKind::OwpnOldTh3 => owpn_old_outer_bound(point, o1_constant, units),
            BoundKind::OwpnNewTh4 => owpn_new_outer_bound(point, units),
            BoundKind::Amplitude => amplitude_rate_bound(point, units),
            BoundKind::Phase => phase_rate_bound(point, units),
        }
    }

    /// Unclamped value in nats, as used for slope fits.
    pub fn raw_nats(self, point: &OperatingPoint) -> Result<f64, BoundError> {
        match self {
            BoundKind::Phase => {
                point.validate()?;
                Ok(phase_rate_raw_nats(point))
            }
            _ => Ok(self.evaluate(point, Units::Nats, 0.0)?.value),
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BoundKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| {
                format!(
                    "unknown bound `{s}` (expected one of wpn_th1, owpn_old_th3, owpn_new_th4, amplitude, phase)"
                )
            })
    }
}

/// Conditions attached to a reported value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundFlag {
    /// Raised to zero from a negative (vacuous) value.
    ClampedLow,
    /// `+∞`: the bound diverges at these parameters.
    Diverges,
    /// `log²(e)` evaluated as `(log e)²` in the reporting base.
    LogSquaredAsSquareOfLog,
    /// The phase term of the composite bound is negative.
    PhaseTermNegative,
}

impl BoundFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundFlag::ClampedLow => "clamped_low",
            BoundFlag::Diverges => "diverges",
            BoundFlag::LogSquaredAsSquareOfLog => "log2e_squared",
            BoundFlag::PhaseTermNegative => "phase_term_negative",
        }
    }
}

/// A bound value with its regime and auxiliary quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub bound: BoundKind,
    /// Value in `units`.
    pub value: f64,
    pub units: Units,
    pub regime: Option<WpnRegime>,
    pub gap_bits: Option<f64>,
    /// Auxiliary values; keys ending in `_nats` are in nats.
    pub diagnostics: BTreeMap<&'static str, f64>,
    pub flags: Vec<BoundFlag>,
}

impl BoundReport {
    fn new(bound: BoundKind, value_nats: f64, units: Units) -> Self {
        Self {
            bound,
            value: convert_units(value_nats, units),
            units,
            regime: None,
            gap_bits: None,
            diagnostics: BTreeMap::new(),
            flags: Vec::new(),
        }
    }

    fn flag(&mut self, f: BoundFlag) {
        if !self.flags.contains(&f) {
            self.flags.push(f);
        }
    }

    pub fn has_flag(&self, f: BoundFlag) -> bool {
        self.flags.contains(&f)
    }

    /// Flags joined with `;` for a CSV cell.
    pub fn flags_field(&self) -> String {
        self.flags
            .iter()
            .map(|f| f.as_str())
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Three-regime outer bound for `L = 1`.
pub fn wpn_outer_bound(point: &OperatingPoint, units: Units) -> Result<BoundReport, BoundError> {
    let point = point.validate()?;
    if point.oversampling != 1.0 {
        return Err(BoundError::RequiresUnitOversampling(point.oversampling));
    }
    let regime = WpnRegime::select(point.power, point.sigma2)?;
    let lg = |x: f64| units.log(x);
    let log_e = 1.0 / units.ln_base();
    let awgn = 0.5 * lg(1.0 + point.power / 2.0);
    let extra = match regime {
        WpnRegime::LargeNoise => {
            let q = (-LARGE_NOISE_THRESHOLD).exp();
            0.5 * lg(4.0 * PI * E) + 2.0 * q / (1.0 - q) * log_e
        }
        WpnRegime::Intermediate => 0.5 * lg(2.0 / point.sigma2) + lg(TAU) + log_e * log_e,
        WpnRegime::SmallNoise => awgn,
    };
    let value = awgn + extra;
    let mut r = BoundReport::new(BoundKind::WpnTh1, 0.0, units);
    r.value = value;
    r.regime = Some(regime);
    r.gap_bits = Some(regime.gap_bits());
    r.diagnostics.insert("awgn_term", awgn);
    r.diagnostics.insert("regime_term", extra);
    r.diagnostics.insert("gap_bits", regime.gap_bits());
    if regime == WpnRegime::Intermediate {
        r.flag(BoundFlag::LogSquaredAsSquareOfLog);
    }
    Ok(r)
}

/// Earlier oversampled bound. `o1_constant` is in `units` and is added
/// verbatim. `σ² = 0` gives `+∞` with [`BoundFlag::Diverges`].
pub fn owpn_old_outer_bound(
    point: &OperatingPoint,
    o1_constant: f64,
    units: Units,
) -> Result<BoundReport, BoundError> {
    let point = point.validate()?;
    let awgn = 0.5 * (point.power / 2.0).ln_1p();
    let phase = if point.sigma2 == 0.0 {
        f64::INFINITY
    } else {
        0.5 * (TAU * point.oversampling / (E * point.sigma2)).ln()
    };
    let mut r = BoundReport::new(BoundKind::OwpnOldTh3, awgn + phase, units);
    r.value += o1_constant;
    r.diagnostics.insert("awgn_nats", awgn);
    r.diagnostics.insert("phase_nats", phase);
    r.diagnostics.insert("o1_constant", o1_constant);
    if phase.is_infinite() {
        r.flag(BoundFlag::Diverges);
    }
    Ok(r)
}

/// `½ ln(2πe(P+2))`: bound on the amplitude-channel rate (nats).
pub fn amplitude_rate_nats(power: f64) -> f64 {
    0.5 * (TAU * E * (power + 2.0)).ln()
}

pub fn amplitude_rate_bound(
    point: &OperatingPoint,
    units: Units,
) -> Result<BoundReport, BoundError> {
    let point = point.validate()?;
    Ok(BoundReport::new(
        BoundKind::Amplitude,
        amplitude_rate_nats(point.power),
        units,
    ))
}

/// `(P/(2L))(√(1 + 4L²/(σ²P)) − 1)`, evaluated without cancellation.
///
/// Returns `+∞` for `σ² = 0` and `0` for `P = 0`.
pub fn phase_precision(point: &OperatingPoint) -> f64 {
    if point.sigma2 == 0.0 {
        return f64::INFINITY;
    }
    if point.power == 0.0 {
        return 0.0;
    }
    let b = point.per_sample_power();
    let x = 4.0 * point.increment_precision() / b;
    0.5 * b * (0.5 * x.ln_1p()).exp_m1()
}

/// Unclamped phase-channel bound `½ln(2π/e) + ½ln(precision)` in nats.
pub fn phase_rate_raw_nats(point: &OperatingPoint) -> f64 {
    0.5 * (TAU / E).ln() + 0.5 * phase_precision(point).ln()
}

/// Phase-channel bound, raised to zero when the raw value is negative.
/// The raw value is kept in `diagnostics["raw_nats"]`.
pub fn phase_rate_bound(point: &OperatingPoint, units: Units) -> Result<BoundReport, BoundError> {
    let point = point.validate()?;
    let raw = phase_rate_raw_nats(&point);
    let mut r = BoundReport::new(BoundKind::Phase, raw.max(0.0), units);
    r.diagnostics.insert("raw_nats", raw);
    r.diagnostics.insert("precision", phase_precision(&point));
    if raw < 0.0 {
        r.flag(BoundFlag::ClampedLow);
    }
    if raw == f64::INFINITY {
        r.flag(BoundFlag::Diverges);
    }
    Ok(r)
}

/// I-MMSE based outer bound
/// `½log(1+P/2) + log 2π + ½log((P/L)(√(1+4L²/(σ²P)) − 1))`.
///
/// This equals `amplitude_rate_bound + phase_rate_bound` (raw) exactly;
/// both parts are in the diagnostics.
pub fn owpn_new_outer_bound(
    point: &OperatingPoint,
    units: Units,
) -> Result<BoundReport, BoundError> {
    let point = point.validate()?;
    if point.power == 0.0 {
        return Err(BoundError::UndefinedAtZeroPower);
    }
    let awgn = 0.5 * (point.power / 2.0).ln_1p();
    let precision = phase_precision(&point);
    let value = awgn + TAU.ln() + 0.5 * (2.0 * precision).ln();
    let amp = amplitude_rate_nats(point.power);
    let phase = phase_rate_raw_nats(&point);
    let mut r = BoundReport::new(BoundKind::OwpnNewTh4, value, units);
    r.diagnostics.insert("amplitude_rate_nats", amp);
    r.diagnostics.insert("phase_rate_nats", phase);
    r.diagnostics.insert("awgn_nats", awgn);
    r.diagnostics.insert("precision", precision);
    if phase < 0.0 {
        r.flag(BoundFlag::PhaseTermNegative);
    }
    if value == f64::INFINITY {
        r.flag(BoundFlag::Diverges);
    }
    Ok(r)
}
