//! Error types shared by all modules.

use thiserror::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors reported by the toolkit.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A spec failed validation before any computation started.
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    /// A matrix handed to a Hermitian-only routine was not Hermitian.
    #[error("matrix is not Hermitian: max |A - A†| element = {max_asymmetry:.3e} (tolerance {tolerance:.3e})")]
    NotHermitian { max_asymmetry: f64, tolerance: f64 },

    /// A matrix handed to an anti-Hermitian-only routine was not anti-Hermitian.
    #[error("matrix is not anti-Hermitian: max |A + A†| element = {max_asymmetry:.3e}")]
    NotAntiHermitian { max_asymmetry: f64 },

    /// A matrix expected to be unitary was not, within tolerance.
    #[error("matrix is not unitary: ‖U†U − I‖_max = {defect:.3e} (tolerance {tolerance:.3e})")]
    NotUnitary { defect: f64, tolerance: f64 },

    /// Maximum-overlap labeling of an eigenstate is ambiguous (overlap² ≤ 1/2).
    #[error("labeling ambiguous for product state {state}: best overlap² = {overlap_sq:.4}")]
    LabelingAmbiguous { state: String, overlap_sq: f64 },

    /// Perturbation theory is singular at Δ₁ = Δ₂; use the exact eigensystem.
    #[error("perturbation theory singular: Δ₁ = Δ₂ = {delta:.6} GHz")]
    DegeneratePerturbation { delta: f64 },

    /// A darkening condition has a vanishing denominator (θ₋ = 0).
    #[error("darkening condition singular: θ₋ = 0 for the requested target qubit")]
    SingularCondition,

    /// A perturbative energy denominator is (nearly) resonant.
    #[error("resonant denominator: {name} = {value:.3e} GHz below threshold")]
    ResonantDenominator { name: String, value: f64 },

    /// A time argument fell outside the pulse window.
    #[error("time {t} ns outside pulse window [0, {t_gate}] ns")]
    TimeOutsidePulse { t: f64, t_gate: f64 },

    /// Step-halving refinement failed to converge.
    #[error("stiff propagation: no convergence after {halvings} halvings (last refinement difference {last_diff:.3e}, unitarity defect {defect:.3e})")]
    StiffPropagation {
        halvings: u32,
        last_diff: f64,
        defect: f64,
    },

    /// The calibration scan's polynomial optimum sits on the scan boundary
    /// even after widening the window once.
    #[error("optimum outside scan: polynomial argmax at the window edge (t = {t_edge:.4} ns) after widening")]
    OptimumOutsideScan { t_edge: f64 },

    /// A derivative-free optimizer did not converge.
    #[error("optimizer failed: {0}")]
    OptimizerFailed(String),

    /// Chain size exceeds the dense-diagonalization limit.
    #[error("chain too large: n = {n} exceeds the dense limit of {max}")]
    ChainTooLarge { n: usize, max: usize },
}
