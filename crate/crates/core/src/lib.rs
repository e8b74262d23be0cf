//! Radar altimeter coexistence simulator.
//!
//! The crate is split along the signal path:
//!
//! * [`spectrum`] - frequency bands, the band plan, and the receiver bandpass filter mask.
//! * [`fmcw`] - chirp configuration, echo link budget, dechirped baseband synthesis and the
//!   spectral altitude estimator.
//! * [`interference`] - 5G emitters, free-space propagation, front-end blocking and in-band
//!   injection.
//! * [`compliance`] - accuracy table, Monte Carlo sweeps, dual-unit comparison and reports.
//! * [`cert`] - change classification, means-of-compliance matrix and change impact analysis
//!   documents.
//!
//! Feet are the external altitude unit; everything internal runs in meters.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cert;
pub mod compliance;
pub mod error;
pub mod fmcw;
pub mod interference;
pub mod json;
pub mod scenarios;
pub mod seed;
pub mod spectrum;
pub mod units;

pub use error::{Error, Result};
pub use fmcw::{AltimeterOutput, ChirpConfig, EchoChannel, ReceiverConfig, Validity};
pub use interference::{BasebandInterference, InterfererSpec, PropagationModel};
pub use spectrum::{BandPlan, FilterSpec, FrequencyBand};
