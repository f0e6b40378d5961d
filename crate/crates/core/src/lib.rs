//! Single-sideband time-modulated array (TMA) synthesis with periodic
//! stair-step switching pulses.
//!
//! The crate models a linear array whose element excitations are switched by
//! four-level stair-step pulses (phase/steering control) and rectangular
//! pulses (amplitude control). Combining a stair-step pulse with a
//! quarter-period delayed copy cancels one sideband of every harmonic pair,
//! so the radiated power concentrates on the first positive harmonic, which
//! can be steered and tapered like a conventional beam.
//!
//! Modules follow the processing chain:
//!
//! * [`pulse`] — switching waveforms and their Fourier lines,
//! * [`harmonic`] — dynamic excitations and per-harmonic array factors,
//! * [`pattern`] — normalized power patterns and figures of merit,
//! * [`efficiency`] — time-modulation efficiency decomposition,
//! * [`optimizer`] — simulated annealing over the duty cycles,
//! * [`presets`] — published duty-cycle vectors.
//!
//! All numerics are generic over the scalar type through [`Real`];
//! `*64` aliases at the crate root pin `f64` for everyday use.

pub mod efficiency;
pub mod error;
pub mod harmonic;
pub mod optimizer;
pub mod pattern;
pub mod presets;
pub mod pulse;
mod real;

pub use error::{Error, Result};
pub use real::Real;

/// `f64` aliases for the main domain types.
pub type PulseSpec64 = pulse::PulseSpec<f64>;
pub type ArrayConfig64 = harmonic::ArrayConfig<f64>;
pub type SteeringPlan64 = harmonic::SteeringPlan<f64>;
pub type ExcitationSet64 = harmonic::ExcitationSet<f64>;
pub type PatternGrid64 = pattern::PatternGrid<f64>;
pub type PatternMetrics64 = pattern::PatternMetrics<f64>;
pub type EfficiencyReport64 = efficiency::EfficiencyReport<f64>;
pub type OptimizerConfig64 = optimizer::OptimizerConfig<f64>;
pub type OptimizerResult64 = optimizer::OptimizerResult<f64>;
