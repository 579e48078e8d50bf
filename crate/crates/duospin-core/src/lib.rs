//! Time-optimal simultaneous control of two uncoupled spin-½ systems.
//!
//! Two spins with gyromagnetic ratios γ₁ and γ₂ = γ·γ₁ sit in a common,
//! bounded control field u(t) ∈ ℝ³, |u| ≤ D.  The pair of single-spin
//! propagators evolves as
//!
//! ```text
//! U̇₁ = X₁U₁,   U̇₂ = γX₁U₂,   X₁ = −i γ₁ (σ·u),   U₁(0) = U₂(0) = 1.
//! ```
//!
//! This crate synthesizes provably time-optimal pulses that drive the pair
//! to a desired target (U_f1, U_f2), verifies them by independent numerical
//! propagation, and provides the analysis tooling around that core:
//!
//! * [`su2`] — exact 2×2 complex linear algebra with fixed conventions,
//! * [`orbit`] — the stratified orbit space of gate pairs under simultaneous
//!   conjugation (Y ⊗ Y), equivalence tests, and conjugator recovery,
//! * [`pmp`] — the drift/precession form of extremal controls and
//!   trajectories and the canonical three-parameter family,
//! * [`solver`] — the selective-rotation solver: integer-resonance
//!   enumeration, the degenerate b = 0 branch, and exact-rational
//!   optimality certificates,
//! * [`general`] — numerical minimum-time search for arbitrary target pairs
//!   via reachable-set scanning in the orbit space,
//! * [`field`] — control-field containers, physical rescaling, sampling,
//!   waveform export and distortion models,
//! * [`sim`] — an independent midpoint-exponential propagator, fidelities,
//!   robustness sweeps and the composite-pulse timing baseline,
//! * [`rb`] — simulated randomized benchmarking of single-spin gates,
//! * [`doc`] — a versioned, serializable result document.
//!
//! Internal normalization: γ₁ = 1 and control bound L = |γ₁|D = 1.  All
//! solver mathematics happens in these units; [`field::rescale_control`]
//! maps a normalized solution to physical amplitudes and seconds.

pub mod certificate;
pub mod doc;
pub mod field;
pub mod general;
pub mod orbit;
pub mod pmp;
pub mod rb;
pub mod sim;
pub mod solver;
pub mod su2;
pub mod tol;

use thiserror::Error;

/// Unified error type for the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A target or parameter outside the solver's domain (θ ∉ (0,2π), γ ≤ 0, γ = 1, …).
    #[error("invalid target: {0}")]
    InvalidTarget(String),
    /// A non-positive control bound.
    #[error("invalid control bound: D must be positive, got {0}")]
    InvalidBound(f64),
    /// Enumeration found no admissible candidate within the given bound.
    #[error("no admissible candidate with m,l,k <= {bound}; the bound is carried so callers can retry larger")]
    NotFound { bound: i64 },
    /// The numerical reachability scan exhausted its time horizon.
    #[error("target orbit not reached for any t <= {t_max}")]
    NotReached { t_max: f64 },
    /// A synthesized object failed its verification residual.
    #[error("verification failed: residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    VerificationFailed { residual: f64, tol: f64 },
    /// An internal invariant was violated (indicates a bug, not bad input).
    #[error("internal inconsistency: {0}")]
    Internal(String),
    /// Result-document serialization/deserialization problems.
    #[error("document error: {0}")]
    Document(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

pub use doc::SolutionDocument;
pub use field::{ControlField, DistortionModel, FieldKind};
pub use general::{reach_orbit, reconstruct_full_solution, GeneralSolution, ReachOptions, ReachPoint};
pub use orbit::{
    orbit_distance, orbit_equivalent, orbit_point, solve_conjugator, GatePair, OrbitPoint,
};
pub use pmp::{CanonicalParams, PmpPair};
pub use rb::{clifford_table, fit_decay, run_rb, CliffordGroup, RbConfig, RbResult, Realization};
pub use sim::{
    apply_distortion, compare_composite, composite_baseline, propagate, propagate_distorted,
    robustness_map, sensitivity_check, CompositeComparison, CompositePulse, PropagationResult,
};
pub use solver::{solve_rotation, Branch, Quadruple, RotationTarget, SolveOptions, SolveRequest, TocSolution};
pub use su2::{expm_algebra, expm_zy, AlgebraElement, EigenDecomp2, Mat2C, UnitaryGate};
