//! Sampler for the oversampled Wiener phase-noise channel
//!
//! ```text
//! Y[mL + l] = X[m] · exp(j Θ[mL + l]) + W[mL + l],   W ~ CN(0, 2)
//! Θ[k + 1]  = Θ[k] + N[k],                            N ~ N(0, σ²/L)
//! ```
//!
//! with the phase started uniformly on `[0, 2π)`. Phases are kept
//! unwrapped. Every draw comes from a ChaCha20 stream selected by
//! [`RngSeed`], so a `(seed, stream)` pair reproduces its output exactly
//! regardless of what other streams are doing.

use std::f64::consts::TAU;
use std::io::{self, Write};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::output::fmt_f64;
use crate::params::{ChannelParams, ParamError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("at least one block is required")]
    NoBlocks,
    #[error("phase trajectory covers {available} blocks but {needed} were requested")]
    PhaseTooShort { needed: usize, available: usize },
    #[error("phase trajectory has oversampling {trajectory}, channel has {channel}")]
    OversamplingMismatch { trajectory: u32, channel: u32 },
}

/// Seed plus stream id. Distinct streams of one seed are independent
/// ChaCha20 keystreams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngSeed {
    pub seed: u64,
    pub stream: u64,
}

impl RngSeed {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    /// Same seed, different stream.
    pub fn with_stream(self, stream: u64) -> Self {
        Self { stream, ..self }
    }

    pub fn rng(&self) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// One realization of the Wiener phase process at sample resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseTrajectory {
    /// `Θ[L−1]`, uniform on `[0, 2π)`.
    pub initial: f64,
    /// `Θ[L] … Θ[(M+1)L − 1]`, unwrapped. Block `m` (0-based) owns
    /// `theta[mL .. (m+1)L]`.
    pub theta: Vec<f64>,
    pub oversampling: u32,
    /// Increment variance `σ² / L`.
    pub sigma2_per_sample: f64,
}

impl PhaseTrajectory {
    pub fn n_blocks(&self) -> usize {
        self.theta.len() / self.oversampling as usize
    }

    pub fn block(&self, m: usize) -> &[f64] {
        let l = self.oversampling as usize;
        &self.theta[m * l..(m + 1) * l]
    }

    /// Successive differences `Θ[k+1] − Θ[k]`, starting from the initial phase.
    pub fn increments(&self) -> impl Iterator<Item = f64> + '_ {
        std::iter::once(self.initial)
            .chain(self.theta.iter().copied())
            .zip(self.theta.iter().copied())
            .map(|(prev, next)| next - prev)
    }
}

/// `θ` wrapped to `[0, 2π)`.
pub fn wrap_phase(theta: f64) -> f64 {
    let w = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Draws a phase trajectory covering `n_blocks` symbols.
pub fn sample_phase(
    params: &ChannelParams,
    n_blocks: usize,
    seed: RngSeed,
) -> Result<PhaseTrajectory, ChannelError> {
    let params = params.validate()?;
    if n_blocks == 0 {
        return Err(ChannelError::NoBlocks);
    }
    let mut rng = seed.rng();
    let initial = rng.random::<f64>() * TAU;
    let sd = params.increment_variance().sqrt();
    let n = n_blocks * params.oversampling as usize;
    let mut theta = Vec::with_capacity(n);
    let mut current = initial;
    for _ in 0..n {
        let z: f64 = rng.sample(StandardNormal);
        current += sd * z;
        theta.push(current);
    }
    Ok(PhaseTrajectory {
        initial,
        theta,
        oversampling: params.oversampling,
        sigma2_per_sample: params.increment_variance(),
    })
}

/// Transmitted symbol together with the `L` samples it produced.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockObservation {
    pub index: usize,
    pub x: Complex64,
    pub y: Vec<Complex64>,
}

impl BlockObservation {
    /// Squared Euclidean norm of the block.
    pub fn norm_sqr(&self) -> f64 {
        self.y.iter().map(|s| s.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }
}

/// Switches for exact-oracle tests: drop the additive noise and/or hold
/// the phase at its initial value.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Hooks {
    pub zero_noise: bool,
    pub freeze_phase: bool,
}

/// Passes `x` through the channel along `phase`, adding `CN(0, 2)` noise.
pub fn transmit(
    params: &ChannelParams,
    x: &[Complex64],
    phase: &PhaseTrajectory,
    seed: RngSeed,
) -> Result<Vec<BlockObservation>, ChannelError> {
    transmit_with(params, x, phase, seed, Hooks::default())
}

pub fn transmit_with(
    params: &ChannelParams,
    x: &[Complex64],
    phase: &PhaseTrajectory,
    seed: RngSeed,
    hooks: Hooks,
) -> Result<Vec<BlockObservation>, ChannelError> {
    let params = params.validate()?;
    if phase.oversampling != params.oversampling {
        return Err(ChannelError::OversamplingMismatch {
            trajectory: phase.oversampling,
            channel: params.oversampling,
        });
    }
    if phase.n_blocks() < x.len() {
        return Err(ChannelError::PhaseTooShort {
            needed: x.len(),
            available: phase.n_blocks(),
        });
    }
    let mut rng = seed.rng();
    let out = x
        .iter()
        .enumerate()
        .map(|(m, &xm)| {
            let y = phase
                .block(m)
                .iter()
                .map(|&th| {
                    let th = if hooks.freeze_phase { phase.initial } else { th };
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    let w = if hooks.zero_noise {
                        Complex64::new(0.0, 0.0)
                    } else {
                        Complex64::new(re, im)
                    };
                    xm * Complex64::from_polar(1.0, th) + w
                })
                .collect();
            BlockObservation { index: m, x: xm, y }
        })
        .collect();
    Ok(out)
}

/// Additive noise realized in `blocks`, recovered from the known phase.
pub fn noise_residuals<'a>(
    blocks: &'a [BlockObservation],
    phase: &'a PhaseTrajectory,
) -> impl Iterator<Item = Complex64> + 'a {
    blocks.iter().flat_map(move |b| {
        b.y.iter()
            .zip(phase.block(b.index))
            .map(move |(&y, &th)| y - b.x * Complex64::from_polar(1.0, th))
    })
}

/// Amplitude statistic `|L^{-1/2} Σ_l y_l|` of one block.
pub fn matched_block_statistic(block: &BlockObservation) -> f64 {
    let l = block.y.len() as f64;
    if block.y.is_empty() {
        return 0.0;
    }
    let sum: Complex64 = block.y.iter().sum();
    (sum / l.sqrt()).norm()
}

/// Writes `k,theta,re_y,im_y`, one row per sample, with `k` the global
/// sample index (block 1 starts at `k = L`).
pub fn write_trajectory_csv<W: Write>(
    mut w: W,
    phase: &PhaseTrajectory,
    blocks: &[BlockObservation],
) -> io::Result<()> {
    writeln!(w, "k,theta,re_y,im_y")?;
    let l = phase.oversampling as usize;
    for b in blocks {
        for (i, (y, th)) in b.y.iter().zip(phase.block(b.index)).enumerate() {
            let k = l + b.index * l + i;
            writeln!(
                w,
                "{k},{},{},{}",
                fmt_f64(*th),
                fmt_f64(y.re),
                fmt_f64(y.im)
            )?;
        }
    }
    Ok(())
}
