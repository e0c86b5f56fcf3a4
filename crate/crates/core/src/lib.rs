//! Numerical laboratory for the discrete-time Wiener phase-noise channel
//! observed through an integrate-and-dump receiver with `L` samples per
//! symbol.
//!
//! The crate is organised around the pieces needed to study that channel:
//!
//! * [`params`]: channel parameters, units and validation.
//! * [`channel`]: seeded sampler for phase trajectories, AWGN and block outputs.
//! * [`bounds`]: closed-form capacity bounds (three-regime WPN bound, the
//!   earlier oversampled bound and the I-MMSE based outer bound).
//! * [`immse`]: Fisher-information recursion, Bayesian Cramér–Rao MMSE bound
//!   and the I-MMSE entropy integral evaluated by quadrature.
//! * [`gdof`]: generalized degrees of freedom and empirical pre-log fits.
//! * [`achievability`]: Monte Carlo run of the uniform-phase /
//!   shifted-exponential scheme with a plug-in rate estimate.
//! * [`cli`]: the `owpn` command-line front end.
//!
//! All internal arithmetic is in nats; conversion to bits happens when a
//! value is reported.

pub mod achievability;
pub mod bounds;
pub mod channel;
pub mod cli;
pub mod gdof;
pub mod immse;
pub mod output;
pub mod params;
pub mod quadrature;
pub mod stats;

pub use bounds::{BoundKind, BoundReport, WpnRegime};
pub use channel::{BlockObservation, PhaseTrajectory, RngSeed};
pub use params::{ChannelParams, GdofParams, OperatingPoint, ParamError, Units};
