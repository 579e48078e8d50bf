//! Centralized numerical tolerances.
//!
//! Every comparison threshold used by the crate lives here, with a short
//! justification, so that accuracy policy can be audited (and tightened or
//! relaxed) in one place.  Two kinds of entries:
//!
//! * hard constants (`pub const`) for identities whose accuracy is set by
//!   the algorithms themselves and should not vary between runs;
//! * a [`Tolerances`] record for the handful of acceptance thresholds that
//!   callers may reasonably want to scale together (profiles).

/// Algebraic identities evaluated in closed form (unitarity defects,
/// reconstruction of a matrix from its eigensystem, norm conventions).
/// Closed-form 2×2 arithmetic loses at most a few ulps per operation, so
/// 1e-12 leaves two orders of margin over f64 roundoff on O(1) entries.
pub const ALGEBRAIC: f64 = 1e-12;

/// One-parameter group law exp(F t₁)·exp(F t₂) = exp(F (t₁+t₂)) and other
/// two-step compositions: two closed-form evaluations plus a product, so
/// one order looser than [`ALGEBRAIC`].
pub const GROUP_LAW: f64 = 1e-11;

/// Residuals of the three resonance conditions (ωt = mπ, η_γ t = kπ,
/// η₁ t = sθ/2 + lπ) after parameter recovery.  These are satisfied
/// identically in exact arithmetic; 1e-10 absorbs cancellation in η for
/// durations up to t ~ 10².
pub const SOLVER_RESIDUAL: f64 = 1e-10;

/// Below this, an SU(2) matrix counts as ±1 for eigen-decomposition
/// purposes and the decomposition reports the degenerate flag instead of
/// an arbitrary eigenbasis.
pub const EIG_DEGENERATE: f64 = 1e-12;

/// Distance of the eigenphase φ from {0, π} below which a gate pair is
/// routed to the edge strata of the orbit space.  The strata are
/// measure-zero, so float noise around an exact edge point must not flip
/// the branch; 1e-9 is far above eigenphase noise (~1e-15) and far below
/// any interior point the solvers produce.
pub const EDGE_ROUTING: f64 = 1e-9;

/// Acceptance threshold for the numerical reachability search: an orbit
/// distance below this counts as "on the target orbit".
pub const ORBIT_ACCEPT: f64 = 1e-8;

/// Residual allowed when recovering a conjugating Y between two gate pairs
/// on the same orbit.
pub const WITNESS_RESIDUAL: f64 = 1e-9;

/// Match tolerance for the transcendental condition of the degenerate
/// b = 0 branch, |cos(kπ/γ) − (−1)^k cos(θ/2)| < BZERO.  Hits are
/// re-verified by propagation, so this only gates candidate generation.
pub const BZERO: f64 = 1e-9;

/// Residual for the end-to-end gate verification inside the analytic
/// solver (‖Y†Ũ₁Y ∓ U_f1‖ and ‖Ũ₂ ∓ 1‖).
pub const VERIFY_GATE: f64 = 1e-8;

/// Fidelity shortfall allowed for the composite-pulse baseline sequence
/// when checked against its target.
pub const COMPOSITE_VERIFY: f64 = 1e-6;

/// Agreement between the analytic solver and the numerical reachability
/// solver on minimum times, |Δt|.
pub const GENERAL_MATCH: f64 = 1e-6;

/// Fidelity lookup threshold for identifying group elements up to global
/// phase (deduplication and inverse search in the Clifford table).
pub const PHASE_LOOKUP: f64 = 1e-9;

/// Runtime-adjustable thresholds, grouped so profiles can scale them
/// coherently.  `solver_residual` gates parameter recovery,
/// `orbit_accept` the reachability search, `verify_gate` final gate
/// verification, `witness_residual` conjugator recovery.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub solver_residual: f64,
    pub orbit_accept: f64,
    pub verify_gate: f64,
    pub witness_residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            solver_residual: SOLVER_RESIDUAL,
            orbit_accept: ORBIT_ACCEPT,
            verify_gate: VERIFY_GATE,
            witness_residual: WITNESS_RESIDUAL,
        }
    }
}

impl Tolerances {
    /// Profile selected by the `DUOSPIN_TOLERANCE_PROFILE` environment
    /// variable: `default` (unset), `strict` (10× tighter) or `relaxed`
    /// (100× looser, for exploratory sweeps on poorly conditioned inputs).
    /// Unknown values fall back to the default profile.
    pub fn from_env() -> Self {
        match std::env::var("DUOSPIN_TOLERANCE_PROFILE").as_deref() {
            Ok("strict") => Self::default().scaled(0.1),
            Ok("relaxed") => Self::default().scaled(100.0),
            _ => Self::default(),
        }
    }

    /// Multiply every runtime threshold by `factor`.
    pub fn scaled(self, factor: f64) -> Self {
        Tolerances {
            solver_residual: self.solver_residual * factor,
            orbit_accept: self.orbit_accept * factor,
            verify_gate: self.verify_gate * factor,
            witness_residual: self.witness_residual * factor,
        }
    }
}
