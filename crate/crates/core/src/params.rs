//! Parameter objects and unit conventions shared by every module.

use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Validation failures for channel and GDoF parameters.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("parameter `{0}` is not finite")]
    NonFinite(&'static str),
    #[error("power must be non-negative, got {0}")]
    NegativePower(f64),
    #[error("phase-noise variance must be non-negative, got {0}")]
    NegativePhaseNoise(f64),
    #[error("oversampling factor must be at least 1")]
    ZeroOversampling,
    #[error("oversampling factor must be positive, got {0}")]
    NonPositiveOversampling(f64),
    #[error("oversampling exponent must be non-negative, got {0}")]
    NegativeAlpha(f64),
}

/// Reporting base for information quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Units {
    #[default]
    Bits,
    Nats,
}

impl Units {
    pub fn as_str(self) -> &'static str {
        match self {
            Units::Bits => "bits",
            Units::Nats => "nats",
        }
    }

    /// Natural log of the base: `ln 2` for bits, `1` for nats.
    pub fn ln_base(self) -> f64 {
        match self {
            Units::Bits => LN_2,
            Units::Nats => 1.0,
        }
    }

    /// `log(x)` in this base.
    pub fn log(self, x: f64) -> f64 {
        x.ln() / self.ln_base()
    }
}

impl fmt::Display for Units {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Units {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bits" | "bpcu" => Ok(Units::Bits),
            "nats" => Ok(Units::Nats),
            other => Err(format!("unknown units `{other}` (expected bits or nats)")),
        }
    }
}

/// Converts a value in nats to `units`.
pub fn convert_units(value_nats: f64, units: Units) -> f64 {
    match units {
        Units::Nats => value_nats,
        Units::Bits => value_nats / LN_2,
    }
}

/// Converts a value expressed in `units` back to nats.
pub fn to_nats(value: f64, units: Units) -> f64 {
    value * units.ln_base()
}

/// Channel parameters for simulation: average waveform power `P`,
/// frequency-noise variance `σ²` per symbol interval and the integer
/// oversampling factor `L`.
///
/// The per-sample power budget is `P / L` and the SNR is `P / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub power: f64,
    pub sigma2: f64,
    pub oversampling: u32,
    pub units: Units,
}

impl ChannelParams {
    pub fn new(power: f64, sigma2: f64, oversampling: u32) -> Self {
        Self {
            power,
            sigma2,
            oversampling,
            units: Units::default(),
        }
    }

    pub fn with_units(mut self, units: Units) -> Self {
        self.units = units;
        self
    }

    /// Returns the parameters unchanged if every invariant holds.
    pub fn validate(self) -> Result<Self, ParamError> {
        check_power_sigma(self.power, self.sigma2)?;
        if self.oversampling == 0 {
            return Err(ParamError::ZeroOversampling);
        }
        Ok(self)
    }

    pub fn oversampling_f64(&self) -> f64 {
        f64::from(self.oversampling)
    }

    pub fn per_sample_power(&self) -> f64 {
        self.power / self.oversampling_f64()
    }

    /// Variance of one phase increment, `σ² / L`.
    pub fn increment_variance(&self) -> f64 {
        self.sigma2 / self.oversampling_f64()
    }

    pub fn snr(&self) -> f64 {
        self.power / 2.0
    }

    pub fn operating_point(&self) -> OperatingPoint {
        OperatingPoint {
            power: self.power,
            sigma2: self.sigma2,
            oversampling: self.oversampling_f64(),
        }
    }
}

/// Free-function form of [`ChannelParams::validate`].
pub fn validate(params: ChannelParams) -> Result<ChannelParams, ParamError> {
    params.validate()
}

fn check_power_sigma(power: f64, sigma2: f64) -> Result<(), ParamError> {
    if !power.is_finite() {
        return Err(ParamError::NonFinite("power"));
    }
    if !sigma2.is_finite() {
        return Err(ParamError::NonFinite("sigma2"));
    }
    if power < 0.0 {
        return Err(ParamError::NegativePower(power));
    }
    if sigma2 < 0.0 {
        return Err(ParamError::NegativePhaseNoise(sigma2));
    }
    Ok(())
}

/// Point at which the closed-form bounds are evaluated. Unlike
/// [`ChannelParams`] the oversampling factor is real so that `L = P^α`
/// sweeps need not be quantized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    pub power: f64,
    pub sigma2: f64,
    pub oversampling: f64,
}

impl OperatingPoint {
    pub fn new(power: f64, sigma2: f64, oversampling: f64) -> Self {
        Self {
            power,
            sigma2,
            oversampling,
        }
    }

    pub fn validate(self) -> Result<Self, ParamError> {
        check_power_sigma(self.power, self.sigma2)?;
        if !self.oversampling.is_finite() {
            return Err(ParamError::NonFinite("oversampling"));
        }
        if self.oversampling <= 0.0 {
            return Err(ParamError::NonPositiveOversampling(self.oversampling));
        }
        Ok(self)
    }

    /// Per-sample phase-increment precision `L / σ²`.
    pub fn increment_precision(&self) -> f64 {
        self.oversampling / self.sigma2
    }

    /// Per-sample power budget `P / L`.
    pub fn per_sample_power(&self) -> f64 {
        self.power / self.oversampling
    }
}

impl From<ChannelParams> for OperatingPoint {
    fn from(p: ChannelParams) -> Self {
        p.operating_point()
    }
}

impl From<&ChannelParams> for OperatingPoint {
    fn from(p: &ChannelParams) -> Self {
        p.operating_point()
    }
}

/// Oversampling exponent `α` of the scaling `L = ⌊P^α⌋`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GdofParams {
    pub alpha: f64,
}

impl GdofParams {
    pub fn new(alpha: f64) -> Result<Self, ParamError> {
        if !alpha.is_finite() {
            return Err(ParamError::NonFinite("alpha"));
        }
        if alpha < 0.0 {
            return Err(ParamError::NegativeAlpha(alpha));
        }
        Ok(Self { alpha })
    }

    /// Integer oversampling `max(1, ⌊P^α⌋)` used when simulating.
    pub fn oversampling(&self, power: f64) -> u32 {
        let l = power.powf(self.alpha).floor();
        if l.is_nan() || l < 1.0 {
            1
        } else if l >= f64::from(u32::MAX) {
            u32::MAX
        } else {
            l as u32
        }
    }

    /// Real oversampling `max(1, P^α)` used for closed-form evaluation.
    pub fn real_oversampling(&self, power: f64) -> f64 {
        power.powf(self.alpha).max(1.0)
    }
}
