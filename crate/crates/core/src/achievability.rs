//! Monte Carlo run of the uniform-phase / shifted-exponential scheme and
//! a plug-in estimate of the rates its receiver statistics carry.
//!
//! The input is `X = A·e^{jΦ}` with `Φ ~ U[0, 2π)` and `A² = s + Exp(λ)`.
//! The receiver uses the block norm `‖Y_k‖` for the amplitude and
//! `∠(Y_{kL} · conj(Y_{kL−1}·e^{−j∠X_{k−1}}))` for the phase, with the
//! previous symbol's phase supplied by a genie.
//!
//! The rate estimate is `Î(A; r) + Î(Φ; φ)` from equal-probability
//! histograms. It is biased (upward by roughly `(B−1)²/2N` per term for
//! independent variables) and is a sanity/trend estimate, not a certified
//! bound.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Exp1, StandardNormal};
use thiserror::Error;

use crate::bounds::{owpn_new_outer_bound, BoundError};
use crate::channel::{wrap_phase, BlockObservation, ChannelError, RngSeed};
use crate::output::fmt_f64;
use crate::params::{ChannelParams, ParamError, Units};
use crate::stats::Moments;

/// Plug-in estimates need at least this many symbol pairs.
pub const MIN_SAMPLES: usize = 10_000;
pub const MIN_BINS: usize = 8;
pub const DEFAULT_BINS: usize = 32;

const INPUT_STREAM: u64 = 0;
const PHASE_STREAM: u64 = 1;
const NOISE_STREAM: u64 = 2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AchievabilityError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error("input power s + λ = {requested} exceeds the per-sample budget P/L = {budget}")]
    PowerBudgetExceeded { requested: f64, budget: f64 },
    #[error("invalid amplitude law: shift {shift}, scale {scale}")]
    InvalidAmplitudeLaw { shift: f64, scale: f64 },
    #[error("quantization needs at least {MIN_BINS} bins, got {0}")]
    TooFewBins(usize),
    #[error("at least one block is required")]
    NoBlocks,
    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("block {0} has no predecessor")]
    MissingPreviousBlock(usize),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
}

/// Histogram resolution for the amplitude and phase statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Quantization {
    pub amplitude_bins: usize,
    pub phase_bins: usize,
}

impl Default for Quantization {
    fn default() -> Self {
        Self {
            amplitude_bins: DEFAULT_BINS,
            phase_bins: DEFAULT_BINS,
        }
    }
}

impl Quantization {
    pub fn validate(self) -> Result<Self, AchievabilityError> {
        for b in [self.amplitude_bins, self.phase_bins] {
            if b < MIN_BINS {
                return Err(AchievabilityError::TooFewBins(b));
            }
        }
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    pub n_blocks: usize,
    /// Shift `s` of the squared amplitude (per-sample power units).
    pub shift: f64,
    /// Mean `λ` of the exponential part (per-sample power units).
    pub scale: f64,
    pub quantization: Quantization,
    pub seed: RngSeed,
}

impl SchemeConfig {
    /// Zero shift, full per-sample budget `λ = P/L`.
    pub fn full_power(params: &ChannelParams, n_blocks: usize, seed: RngSeed) -> Self {
        Self {
            n_blocks,
            shift: 0.0,
            scale: params.per_sample_power(),
            quantization: Quantization::default(),
            seed,
        }
    }

    pub fn validate(&self, params: &ChannelParams) -> Result<(), AchievabilityError> {
        let params = params.validate()?;
        let law_ok = self.shift.is_finite()
            && self.scale.is_finite()
            && self.shift >= 0.0
            && self.scale >= 0.0;
        if !law_ok {
            return Err(AchievabilityError::InvalidAmplitudeLaw {
                shift: self.shift,
                scale: self.scale,
            });
        }
        let budget = params.per_sample_power();
        let requested = self.shift + self.scale;
        if requested > budget * (1.0 + 1e-12) {
            return Err(AchievabilityError::PowerBudgetExceeded { requested, budget });
        }
        if self.n_blocks == 0 {
            return Err(AchievabilityError::NoBlocks);
        }
        self.quantization.validate()?;
        Ok(())
    }

    fn stream(&self, offset: u64) -> RngSeed {
        self.seed.with_stream(self.seed.stream.wrapping_mul(3).wrapping_add(offset))
    }
}

/// Draws `n_blocks` scheme inputs.
pub fn sample_scheme_input(
    config: &SchemeConfig,
    params: &ChannelParams,
) -> Result<Vec<Complex64>, AchievabilityError> {
    config.validate(params)?;
    let mut rng = config.stream(INPUT_STREAM).rng();
    Ok((0..config.n_blocks)
        .map(|_| {
            let e: f64 = rng.sample(Exp1);
            let amp = (config.shift + config.scale * e).sqrt();
            let phase = rng.random::<f64>() * TAU;
            Complex64::from_polar(amp, phase)
        })
        .collect())
}

/// Per-block receiver statistics. `phi` is `None` for the first block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceiverStatistics {
    pub r: f64,
    pub phi: Option<f64>,
}

/// Phase statistic of block `k` given `∠X_{k−1}`.
pub fn block_phase_statistic(
    blocks: &[BlockObservation],
    k: usize,
    prev_input_phase: f64,
) -> Result<f64, AchievabilityError> {
    if k == 0 {
        return Err(AchievabilityError::MissingPreviousBlock(0));
    }
    let last = *blocks[k - 1]
        .y
        .last()
        .ok_or(AchievabilityError::MissingPreviousBlock(k))?;
    let first = blocks[k].y[0];
    Ok(phase_difference(first, last, prev_input_phase))
}

fn phase_difference(first: Complex64, prev_last: Complex64, prev_input_phase: f64) -> f64 {
    let reference = prev_last * Complex64::from_polar(1.0, -prev_input_phase);
    wrap_phase((first * reference.conj()).arg())
}

/// Statistics for consecutive blocks; `input_phases[k]` is `∠X_k`.
pub fn receiver_statistics(
    blocks: &[BlockObservation],
    input_phases: &[f64],
) -> Result<Vec<ReceiverStatistics>, AchievabilityError> {
    if blocks.len() != input_phases.len() {
        return Err(AchievabilityError::LengthMismatch(
            blocks.len(),
            input_phases.len(),
        ));
    }
    (0..blocks.len())
        .map(|k| {
            let phi = if k == 0 {
                None
            } else {
                Some(block_phase_statistic(blocks, k, input_phases[k - 1])?)
            };
            Ok(ReceiverStatistics {
                r: blocks[k].norm(),
                phi,
            })
        })
        .collect()
}

/// Moment summaries accumulated during a streaming run.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunMoments {
    /// `|W|²` per sample.
    pub noise_power: Moments,
    pub noise_re: Moments,
    pub noise_im: Moments,
    /// `Re(W)·Im(W)` per sample.
    pub noise_cross: Moments,
    /// Phase increments `Θ[k+1] − Θ[k]`.
    pub increments: Moments,
    /// `‖Y_k‖²` per block.
    pub block_norm_sq: Moments,
    /// `|X_k|²` per block.
    pub input_power: Moments,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeRun {
    pub inputs: Vec<Complex64>,
    pub statistics: Vec<ReceiverStatistics>,
    pub moments: RunMoments,
}

/// Runs the scheme through the channel without storing the samples.
///
/// Draws from the same streams and in the same order as
/// [`crate::channel::sample_phase`] followed by [`crate::channel::transmit`],
/// so the statistics equal those computed from stored blocks.
pub fn simulate_scheme(
    params: &ChannelParams,
    config: &SchemeConfig,
) -> Result<SchemeRun, AchievabilityError> {
    let inputs = sample_scheme_input(config, params)?;
    let (statistics, moments) = stream_channel(params, &inputs, config.stream(PHASE_STREAM), config.stream(NOISE_STREAM));
    Ok(SchemeRun {
        inputs,
        statistics,
        moments,
    })
}

/// Seeds of the phase and noise streams used by [`simulate_scheme`].
pub fn channel_seeds(config: &SchemeConfig) -> (RngSeed, RngSeed) {
    (config.stream(PHASE_STREAM), config.stream(NOISE_STREAM))
}

fn stream_channel(
    params: &ChannelParams,
    inputs: &[Complex64],
    phase_seed: RngSeed,
    noise_seed: RngSeed,
) -> (Vec<ReceiverStatistics>, RunMoments) {
    let mut phase_rng = phase_seed.rng();
    let mut noise_rng = noise_seed.rng();
    let sd = params.increment_variance().sqrt();
    let l = params.oversampling as usize;
    let mut theta = phase_rng.random::<f64>() * TAU;
    let mut m = RunMoments::default();
    let mut out = Vec::with_capacity(inputs.len());
    let mut prev: Option<(Complex64, f64)> = None;
    for &x in inputs {
        let mut first = Complex64::new(0.0, 0.0);
        let mut last = first;
        let mut norm_sq = 0.0;
        for i in 0..l {
            let z: f64 = phase_rng.sample(StandardNormal);
            let inc = sd * z;
            theta += inc;
            m.increments.push(inc);
            let re: f64 = noise_rng.sample(StandardNormal);
            let im: f64 = noise_rng.sample(StandardNormal);
            let w = Complex64::new(re, im);
            m.noise_power.push(w.norm_sqr());
            m.noise_re.push(re);
            m.noise_im.push(im);
            m.noise_cross.push(re * im);
            let y = x * Complex64::from_polar(1.0, theta) + w;
            norm_sq += y.norm_sqr();
            if i == 0 {
                first = y;
            }
            last = y;
        }
        m.block_norm_sq.push(norm_sq);
        m.input_power.push(x.norm_sqr());
        let phi = prev.map(|(prev_last, prev_phase)| phase_difference(first, prev_last, prev_phase));
        out.push(ReceiverStatistics {
            r: norm_sq.sqrt(),
            phi,
        });
        prev = Some((last, x.arg()));
    }
    (out, m)
}

/// Equal-probability bin index of each value: edges at the empirical
/// `k/bins` quantiles, ties kept in one bin.
pub fn quantile_bins(values: &[f64], bins: usize) -> Vec<usize> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let edges: Vec<f64> = (1..bins).map(|k| sorted[(k * n) / bins]).collect();
    values
        .iter()
        .map(|v| edges.partition_point(|e| e <= v))
        .collect()
}

/// Joint count table. Merging is associative and order-independent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointHistogram {
    nx: usize,
    ny: usize,
    counts: Vec<u64>,
}

impl JointHistogram {
    pub fn new(nx: usize, ny: usize) -> Self {
        Self {
            nx,
            ny,
            counts: vec![0; nx * ny],
        }
    }

    pub fn from_labels(xs: &[usize], ys: &[usize], nx: usize, ny: usize) -> Self {
        let mut h = Self::new(nx, ny);
        for (&x, &y) in xs.iter().zip(ys) {
            h.add(x, y);
        }
        h
    }

    pub fn add(&mut self, x: usize, y: usize) {
        self.counts[x * self.ny + y] += 1;
    }

    pub fn merge(&mut self, other: &JointHistogram) {
        assert_eq!((self.nx, self.ny), (other.nx, other.ny));
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Plug-in mutual information (nats) of the empirical joint law.
    pub fn mutual_information(&self) -> f64 {
        let n = self.total() as f64;
        if n == 0.0 {
            return 0.0;
        }
        let mut px = vec![0u64; self.nx];
        let mut py = vec![0u64; self.ny];
        for (row, p) in self.counts.chunks(self.ny).zip(px.iter_mut()) {
            for (&c, q) in row.iter().zip(py.iter_mut()) {
                *p += c;
                *q += c;
            }
        }
        let mut mi = 0.0;
        for (row, &p) in self.counts.chunks(self.ny).zip(&px) {
            for (&c, &q) in row.iter().zip(&py) {
                if c > 0 {
                    let c = c as f64;
                    mi += c / n * (c * n / (p as f64 * q as f64)).ln();
                }
            }
        }
        mi.max(0.0)
    }
}

/// Plug-in mutual information between two label sequences.
pub fn plugin_mutual_information(xs: &[usize], ys: &[usize]) -> f64 {
    let nx = xs.iter().max().map_or(0, |m| m + 1);
    let ny = ys.iter().max().map_or(0, |m| m + 1);
    JointHistogram::from_labels(xs, ys, nx, ny).mutual_information()
}

/// Plug-in rate of a run, in nats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEstimate {
    pub amplitude: f64,
    pub phase: f64,
    pub total: f64,
    pub amplitude_samples: usize,
    pub phase_samples: usize,
    pub quantization: Quantization,
}

/// `Î(A; r) + Î(Φ; φ)` from quantile histograms. The first block only
/// enters the amplitude term.
pub fn plugin_rate_estimate(
    inputs: &[Complex64],
    stats: &[ReceiverStatistics],
    quantization: Quantization,
) -> Result<RateEstimate, AchievabilityError> {
    let q = quantization.validate()?;
    if inputs.len() != stats.len() {
        return Err(AchievabilityError::LengthMismatch(inputs.len(), stats.len()));
    }
    if inputs.len() < MIN_SAMPLES {
        return Err(AchievabilityError::InsufficientSamples {
            needed: MIN_SAMPLES,
            got: inputs.len(),
        });
    }
    let amps: Vec<f64> = inputs.iter().map(|x| x.norm()).collect();
    let rs: Vec<f64> = stats.iter().map(|s| s.r).collect();
    let amplitude = JointHistogram::from_labels(
        &quantile_bins(&amps, q.amplitude_bins),
        &quantile_bins(&rs, q.amplitude_bins),
        q.amplitude_bins,
        q.amplitude_bins,
    )
    .mutual_information();

    let (phases, phis): (Vec<f64>, Vec<f64>) = inputs
        .iter()
        .zip(stats)
        .filter_map(|(x, s)| s.phi.map(|p| (wrap_phase(x.arg()), p)))
        .unzip();
    if phases.len() < MIN_SAMPLES {
        return Err(AchievabilityError::InsufficientSamples {
            needed: MIN_SAMPLES,
            got: phases.len(),
        });
    }
    let phase = JointHistogram::from_labels(
        &quantile_bins(&phases, q.phase_bins),
        &quantile_bins(&phis, q.phase_bins),
        q.phase_bins,
        q.phase_bins,
    )
    .mutual_information();

    Ok(RateEstimate {
        amplitude,
        phase,
        total: amplitude + phase,
        amplitude_samples: amps.len(),
        phase_samples: phases.len(),
        quantization: q,
    })
}

/// One scheme run with its estimate and the outer bound at the same point.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub params: ChannelParams,
    pub config: SchemeConfig,
    pub rate: RateEstimate,
    /// Outer bound in nats at `(P, σ², L)`.
    pub outer_bound: f64,
    pub moments: RunMoments,
}

pub const EXPERIMENT_CSV_HEADER: &str =
    "P,sigma2,L,n_blocks,seed,rate_amp_est,rate_phase_est,rate_total_est,outer_bound";

impl Experiment {
    pub fn run(params: &ChannelParams, config: &SchemeConfig) -> Result<Self, AchievabilityError> {
        let run = simulate_scheme(params, config)?;
        let rate = plugin_rate_estimate(&run.inputs, &run.statistics, config.quantization)?;
        let outer = owpn_new_outer_bound(&params.operating_point(), Units::Nats)?;
        Ok(Self {
            params: *params,
            config: *config,
            rate,
            outer_bound: outer.value,
            moments: run.moments,
        })
    }

    pub fn within_outer_bound(&self) -> bool {
        self.rate.total <= self.outer_bound
    }

    pub fn csv_row(&self) -> String {
        [
            fmt_f64(self.params.power),
            fmt_f64(self.params.sigma2),
            self.params.oversampling.to_string(),
            self.config.n_blocks.to_string(),
            self.config.seed.seed.to_string(),
            fmt_f64(self.rate.amplitude),
            fmt_f64(self.rate.phase),
            fmt_f64(self.rate.total),
            fmt_f64(self.outer_bound),
        ]
        .join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{sample_phase, transmit, transmit_with, Hooks};
    use crate::stats::correlation;

    fn params() -> ChannelParams {
        ChannelParams::new(40.0, 0.5, 4)
    }

    #[test]
    fn power_budget_is_enforced() {
        let p = params();
        let mut cfg = SchemeConfig::full_power(&p, 10, RngSeed::new(1, 0));
        assert!(cfg.validate(&p).is_ok());
        cfg.shift = 1.0;
        assert!(matches!(
            cfg.validate(&p),
            Err(AchievabilityError::PowerBudgetExceeded { .. })
        ));
        cfg.shift = -1.0;
        assert!(matches!(
            cfg.validate(&p),
            Err(AchievabilityError::InvalidAmplitudeLaw { .. })
        ));
        let mut cfg = SchemeConfig::full_power(&p, 10, RngSeed::new(1, 0));
        cfg.quantization.phase_bins = 4;
        assert_eq!(cfg.validate(&p), Err(AchievabilityError::TooFewBins(4)));
    }

    #[test]
    fn input_moments() {
        let p = params();
        let cfg = SchemeConfig::full_power(&p, 100_000, RngSeed::new(11, 0));
        let x = sample_scheme_input(&cfg, &p).unwrap();
        let pw: Moments = x.iter().map(|v| v.norm_sqr()).collect();
        assert!(pw.z_score(p.per_sample_power()).abs() < 4.0);
        let amps: Vec<f64> = x.iter().map(|v| v.norm()).collect();
        let phases: Vec<f64> = x.iter().map(|v| wrap_phase(v.arg())).collect();
        let rho = correlation(&amps, &phases);
        assert!(rho.abs() < 4.0 / (x.len() as f64).sqrt());
    }

    #[test]
    fn shifted_law_mean() {
        let p = params();
        let mut cfg = SchemeConfig::full_power(&p, 50_000, RngSeed::new(2, 0));
        cfg.shift = 4.0;
        cfg.scale = 6.0;
        let x = sample_scheme_input(&cfg, &p).unwrap();
        let pw: Moments = x.iter().map(|v| v.norm_sqr()).collect();
        assert!(pw.z_score(10.0).abs() < 4.0);
        assert!(x.iter().all(|v| v.norm_sqr() >= 4.0 - 1e-12));
    }

    #[test]
    fn noiseless_phase_statistic_recovers_input_phase() {
        let p = ChannelParams::new(40.0, 0.0, 4);
        let cfg = SchemeConfig::full_power(&p, 200, RngSeed::new(3, 0));
        let x = sample_scheme_input(&cfg, &p).unwrap();
        let tr = sample_phase(&p, x.len(), RngSeed::new(3, 1)).unwrap();
        let hooks = Hooks {
            zero_noise: true,
            freeze_phase: false,
        };
        let blocks = transmit_with(&p, &x, &tr, RngSeed::new(3, 2), hooks).unwrap();
        let phases: Vec<f64> = x.iter().map(|v| v.arg()).collect();
        let st = receiver_statistics(&blocks, &phases).unwrap();
        assert!(st[0].phi.is_none());
        for (k, s) in st.iter().enumerate().skip(1) {
            let d = wrap_phase(s.phi.unwrap() - x[k].arg());
            assert!(d < 1e-9 || TAU - d < 1e-9, "block {k}: {d}");
        }
        assert_eq!(
            block_phase_statistic(&blocks, 0, 0.0),
            Err(AchievabilityError::MissingPreviousBlock(0))
        );
    }

    #[test]
    fn norm_is_rotation_invariant() {
        let p = params();
        let x = vec![Complex64::new(1.0, 2.0); 3];
        let tr = sample_phase(&p, 3, RngSeed::new(4, 1)).unwrap();
        let blocks = transmit(&p, &x, &tr, RngSeed::new(4, 2)).unwrap();
        let rot = Complex64::from_polar(1.0, 1.234);
        for b in &blocks {
            let turned = BlockObservation {
                y: b.y.iter().map(|v| v * rot).collect(),
                ..b.clone()
            };
            assert!((turned.norm() - b.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn streaming_matches_stored_path() {
        let p = ChannelParams::new(12.0, 0.3, 5);
        let cfg = SchemeConfig::full_power(&p, 300, RngSeed::new(77, 4));
        let run = simulate_scheme(&p, &cfg).unwrap();
        let (phase_seed, noise_seed) = channel_seeds(&cfg);
        let tr = sample_phase(&p, cfg.n_blocks, phase_seed).unwrap();
        let blocks = transmit(&p, &run.inputs, &tr, noise_seed).unwrap();
        let phases: Vec<f64> = run.inputs.iter().map(|v| v.arg()).collect();
        let stored = receiver_statistics(&blocks, &phases).unwrap();
        assert_eq!(stored.len(), run.statistics.len());
        for (a, b) in stored.iter().zip(&run.statistics) {
            assert!((a.r - b.r).abs() < 1e-12 * a.r.max(1.0));
            match (a.phi, b.phi) {
                (None, None) => {}
                (Some(x), Some(y)) => assert!((x - y).abs() < 1e-9),
                _ => panic!("phi presence differs"),
            }
        }
    }

    #[test]
    fn discrete_identity_channel_has_log_alphabet_information() {
        // 16 equiprobable symbols, cycled so every symbol has exactly the same count
        let xs: Vec<usize> = (0..160_000).map(|i| (i * 7) % 16).collect();
        let mi = plugin_mutual_information(&xs, &xs);
        // enumeration: I = H = Σ (1/16) ln 16
        let exact: f64 = (0..16).map(|_| (1.0 / 16.0) * 16f64.ln()).sum();
        assert!((mi - exact).abs() < 0.01 * exact);
    }

    #[test]
    fn histogram_merge_is_order_independent() {
        let a = JointHistogram::from_labels(&[0, 1, 2], &[1, 1, 0], 3, 2);
        let b = JointHistogram::from_labels(&[2, 2], &[1, 0], 3, 2);
        let c = JointHistogram::from_labels(&[0], &[0], 3, 2);
        let mut ab_c = a.clone();
        ab_c.merge(&b);
        ab_c.merge(&c);
        let mut c_ba = c.clone();
        c_ba.merge(&b);
        c_ba.merge(&a);
        assert_eq!(ab_c, c_ba);
        assert_eq!(ab_c.total(), 6);
    }

    #[test]
    fn quantile_bins_are_balanced() {
        let v: Vec<f64> = (0..1000).map(|i| ((i * 37) % 1000) as f64).collect();
        let bins = quantile_bins(&v, 10);
        let mut counts = [0; 10];
        for b in bins {
            counts[b] += 1;
        }
        assert!(counts.iter().all(|&c| c == 100));
    }

    #[test]
    fn too_few_samples() {
        let x = vec![Complex64::new(1.0, 0.0); 100];
        let s = vec![ReceiverStatistics { r: 1.0, phi: Some(0.0) }; 100];
        assert_eq!(
            plugin_rate_estimate(&x, &s, Quantization::default()),
            Err(AchievabilityError::InsufficientSamples {
                needed: MIN_SAMPLES,
                got: 100
            })
        );
    }

    #[test]
    fn experiment_is_reproducible() {
        let p = ChannelParams::new(100.0, 1.0, 3);
        let cfg = SchemeConfig::full_power(&p, 20_000, RngSeed::new(5, 0));
        let a = Experiment::run(&p, &cfg).unwrap();
        let b = Experiment::run(&p, &cfg).unwrap();
        assert_eq!(a.csv_row(), b.csv_row());
        assert!(a.within_outer_bound());
    }
}
