//! Simulation and calibration toolkit for the selective-darkening (SD) CNOT
//! gate on transversely-coupled qubits.
//!
//! The crate is organized around the stages of an SD-CNOT study:
//!
//! - [`system`]: builders and exact/perturbative eigensystems for the 2-level
//!   and 3-level coupled-qubit models;
//! - [`drive`]: driving Hamiltonians, pulse envelopes, darkening conditions
//!   and transition strengths;
//! - [`frame`]: rotating-frame transformation, co-/counter-rotating split and
//!   the ideal RWA gate decomposition;
//! - [`evolve`]: time-dependent Schrödinger propagation (lab frame and RWA
//!   rotating frame);
//! - [`gate`]: fidelity metric, ideal-gate targets, analytic corrections and
//!   gate calibration with single-qubit correction optimization;
//! - [`anharmonic`]: perturbative analysis of 3-level (weakly anharmonic)
//!   qubits — strength suppression, leakage, speed bound;
//! - [`dressed`]: quantized-field (dressed-state) description and the
//!   strong-drive darkening search;
//! - [`chain`]: N-qubit chain scalability analysis via the Jordan-Wigner
//!   transformation.
//!
//! Conventions used throughout: user-facing frequencies are linear (E/h) in
//! GHz, time is in ns, and internal propagation uses angular frequencies
//! (2π·f rad/ns) with ħ = 1.

pub mod anharmonic;
pub mod chain;
pub mod dressed;
pub mod drive;
pub mod error;
pub mod evolve;
pub mod frame;
pub mod gate;
pub mod numerics;
pub mod optim;
pub mod system;

pub use error::{Error, Result};
pub use numerics::{CMatrix, CVector, C64};
pub use system::{Eigensystem, SystemSpec};
pub use drive::{DarkeningCondition, DriveSpec, Envelope};
pub use evolve::{Frame, PropagationResult};
pub use gate::{CorrectionEstimates, CorrectionMode, GateResult};
pub use chain::{ChainSpec, ModeAmplitudes};

/// 2π, for converting linear frequencies (GHz) to angular ones (rad/ns).
pub const TWO_PI: f64 = std::f64::consts::TAU;
