//! Secrecy-rate analysis for a rechargeable energy-harvesting source helped
//! by a rechargeable multi-antenna cooperative jammer.
//!
//! Alice talks to Bob while Eve listens. Jimmy, when his battery has a
//! packet, sends artificial noise through a null-steering beamformer that is
//! invisible at Bob and as strong as possible at Eve. Alice may compress her
//! packet into a fraction `alpha` of the slot. Both batteries are
//! discrete-time queues fed by Bernoulli energy arrivals.
//!
//! The numerical modules are generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the common double-precision instantiations.

pub mod battery;
pub mod beamforming;
pub mod channel;
pub mod error;
pub mod linalg;
pub mod montecarlo;
pub mod rng;
pub mod scalar;
pub mod secrecy;

pub use channel::SystemParams;
pub use error::{Error, Result};
pub use scalar::{Complex, Real};

pub type C64 = Complex<f64>;
pub type C32 = Complex<f32>;

pub type ChannelSet64 = channel::ChannelSet<f64>;
pub type ChannelSet32 = channel::ChannelSet<f32>;
pub type BeamWeights64 = beamforming::BeamWeights<f64>;
pub type BeamWeights32 = beamforming::BeamWeights<f32>;
pub type Precoder64 = beamforming::Precoder<f64>;
pub type Precoder32 = beamforming::Precoder<f32>;
pub type SlotRates64 = secrecy::SlotRates<f64>;
pub type SlotRates32 = secrecy::SlotRates<f32>;
pub type BatteryChain64 = battery::BatteryChain<f64>;
pub type BatteryChain32 = battery::BatteryChain<f32>;
pub type CMatrix64 = linalg::CMatrix<f64>;
