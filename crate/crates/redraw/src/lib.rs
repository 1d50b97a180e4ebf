//! Simulation and reconstruction of directed, weighted oscillator networks.
//!
//! The crate has two halves that meet in the middle:
//!
//! * a simulator for networks of nonuniform Kuramoto oscillators,
//!
//!   dθᵢ/dt = ωᵢ + (c/n) Σⱼ aᵢⱼ sin(θⱼ − θᵢ − φᵢⱼ),
//!
//!   where the per-edge phase shift φᵢⱼ = φ/aᵢⱼ encodes how much node i
//!   lags behind node j, and
//!
//! * a six-step reconstruction pipeline that maps K experiments of sampled
//!   phase time series back to a directed, weighted influence matrix ρ,
//!   pruning indirect links with a data-processing-inequality rule and a
//!   final threshold cut.
//!
//! Supporting modules provide ground-truth topology builders, confusion
//! metrics against a known adjacency, and an a-priori grid calibration of
//! the two pruning thresholds (ν, μ) on random test graphs.

pub mod calibrate;
pub mod error;
pub mod io;
pub mod metrics;
pub mod model;
pub mod reconstruct;
pub mod rng;
pub mod simulator;
pub mod topologies;

pub use error::{Error, Result};
pub use model::{
    InfluenceMatrix, LockReport, NetworkSpec, PhaseTrace, ReconstructionParams, SimConfig, Stage,
};
pub use simulator::ExperimentBatch;
