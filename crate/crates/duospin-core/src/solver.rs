//! Minimum-time synthesis of simultaneous rotations.
//!
//! Target: rotate spin 1 by θ about a given axis while spin 2 returns to
//! ±1 (so the pair implements rotation ⊗ identity), using one shared
//! bounded control.  In normalized units (γ₁ = 1, |u| ≤ 1) every
//! time-optimal pulse belongs to the canonical family of
//! [`CanonicalParams`], and reaching the target exactly requires three
//! simultaneous resonances
//!
//! &nbsp;&nbsp; ωt = mπ,  η_γt = kπ,  η₁t = sθ/2 + lπ,
//!
//! indexed by an admissible quadruple (s, m, l, k): s = ±1, integers
//! m, k ≥ 1, l ≥ 0 (l ≥ 1 when s = −1), l ≡ k (mod 2) when θ ≠ π.  The
//! duration satisfies (t/π)² = M/(γ(1−γ)) with
//! M = m²(1−γ) + (sθ/2π + l)²γ − k², subject to the strict window
//! (m − sθ/2π − l)² < (t/π)² < (m + sθ/2π + l)².  A degenerate family
//! with b = 0 (constant ±z field) contributes t = kπ/γ whenever
//! cos(kπ/γ) = (−1)^k cos(θ/2).
//!
//! The solver enumerates both families exactly (rational arithmetic for
//! the quadruples), picks the minimum duration, recovers (ω, a, b),
//! builds the frame change Y to the laboratory axis, verifies the
//! realized gates, and attaches an [`OptimalityCertificate`] proving no
//! faster admissible solution exists.
//!
//! At θ = π the parameters s and l enter only through sθ/2 + lπ =
//! (2l + s)·π/2, so quadruples with equal 2l + s coincide; enumeration
//! keeps one representative per odd value l_half = 2l + s ≥ 1, namely
//! (s, l) = (−1, 1) for l_half = 1 and (s, l) = (+1, (l_half−1)/2)
//! otherwise, and [`TocSolution::half_pi_form`] reports (m, l_half, k).

use crate::certificate::{
    build_certificate, quadruple_duration_sq, rational_from_f64, OptimalityCertificate,
};
use crate::orbit::{solve_conjugator, GatePair};
use crate::pmp::CanonicalParams;
use crate::su2::{expm_algebra, AlgebraElement, UnitaryGate};
use crate::tol::{self, Tolerances};
use crate::{Error, Result};
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive};
use std::f64::consts::PI;

/// Resonance indices (s, m, l, k) of a b ≠ 0 solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Quadruple {
    pub s: i64,
    pub m: i64,
    pub l: i64,
    pub k: i64,
}

impl Quadruple {
    /// The θ = π half-turn index l_half = 2l + s (odd, ≥ 1 for
    /// admissible quadruples), in which η₁t = l_half·π/2.
    pub fn half_pi_l(&self) -> i64 {
        2 * self.l + self.s
    }
}

/// Which solution family produced a pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Generic family b ≠ 0, indexed by resonance integers.
    Quadruple(Quadruple),
    /// Degenerate constant-field family b = 0 at t = kπ/γ.
    BZero { k: i64 },
    /// Produced by the numerical reachability solver; no resonance
    /// indices or exact certificate are available.
    Numerical,
}

/// Desired rotation of spin 1: angle θ ∈ (0, 2π) about a unit axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationTarget {
    /// Unit rotation axis (normalized by the constructor).
    pub axis: [f64; 3],
    /// Rotation angle in radians, strictly inside (0, 2π).
    pub theta: f64,
}

impl RotationTarget {
    pub fn new(axis: [f64; 3], theta: f64) -> Result<Self> {
        let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if !norm.is_finite() || norm < 1e-12 {
            return Err(Error::InvalidTarget("rotation axis must be a nonzero vector".into()));
        }
        if !theta.is_finite() || theta <= 0.0 || theta >= 2.0 * PI {
            return Err(Error::InvalidTarget(format!(
                "rotation angle must lie strictly inside (0, 2π), got {theta}"
            )));
        }
        Ok(RotationTarget {
            axis: [axis[0] / norm, axis[1] / norm, axis[2] / norm],
            theta,
        })
    }

    /// The SU(2) gate R_axis(θ) = e^{−i(θ/2)(axis·σ)}.
    pub fn gate(&self) -> UnitaryGate {
        let n = AlgebraElement::new(self.axis[0], self.axis[1], self.axis[2]);
        expm_algebra(&n, self.theta / 2.0)
    }
}

/// Problem statement: coupling ratio, target rotation, and the physical
/// scales used only to convert the normalized pulse to laboratory units.
#[derive(Debug, Clone)]
pub struct SolveRequest {
    /// Exact coupling ratio γ = γ₂/γ₁ (> 0, ≠ 1).
    pub gamma: BigRational,
    /// Target rotation of spin 1.
    pub target: RotationTarget,
    /// Exact θ/π when θ is a rational multiple of π; enables an exact
    /// certificate in the angle as well.  Must agree with target.theta.
    pub q_exact: Option<BigRational>,
    /// Physical gyromagnetic ratio of spin 1 (rad/(s·field)); only its
    /// magnitude and sign rescale the output.
    pub gamma1: f64,
    /// Physical control amplitude bound D > 0.
    pub bound_d: f64,
}

impl SolveRequest {
    /// Normalized problem: γ₁ = 1, D = 1, θ taken from `target` as is.
    pub fn normalized(gamma: BigRational, target: RotationTarget) -> Self {
        SolveRequest { gamma, target, q_exact: None, gamma1: 1.0, bound_d: 1.0 }
    }

    pub fn with_q_exact(mut self, q: BigRational) -> Self {
        self.q_exact = Some(q);
        self
    }
}

/// Solver knobs.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Enumeration bound for m, l, k (each searched up to this value).
    pub bound: i64,
    /// Sign of b in the recovered parameters; the two signs give
    /// mirror-image pulses realizing the same gates.
    pub b_sign: f64,
    /// Largest k probed in the degenerate b = 0 family.
    pub bzero_k_max: i64,
    pub tolerances: Tolerances,
    /// Attach an exhaustive optimality certificate (cheap; on by
    /// default).
    pub with_certificate: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            bound: 12,
            b_sign: 1.0,
            bzero_k_max: 50,
            tolerances: Tolerances::default(),
            with_certificate: true,
        }
    }
}

/// A synthesized minimum-time pulse, in canonical coordinates plus the
/// frame change to the laboratory target.
#[derive(Debug, Clone)]
pub struct TocSolution {
    /// Exact coupling ratio.
    pub gamma_rational: BigRational,
    /// Exact θ/π used by the enumeration (dyadic approximation when the
    /// angle was given as a float).
    pub q_rational: BigRational,
    /// Whether q_rational is the exact angle rather than a float image.
    pub q_exact: bool,
    /// Target rotation (unit axis, θ in radians).
    pub target: RotationTarget,
    pub gamma1: f64,
    pub bound_d: f64,
    /// Minimum duration in normalized units (γ₁ = 1, |u| ≤ 1).
    pub t_min: f64,
    /// Exact squared duration (t/π)².
    pub t_sq_exact: BigRational,
    /// Canonical pulse parameters (ω, a, b; γ as f64).
    pub params: CanonicalParams,
    /// Global sign of the realized pair: (U₁, U₂)(t_min) equals
    /// sign·(R_axis(θ), 1) in the laboratory frame.
    pub sign: f64,
    pub branch: Branch,
    /// Frame change: laboratory gates are Y†·(canonical gates)·Y.
    pub y: UnitaryGate,
    pub certificate: Option<OptimalityCertificate>,
}

impl TocSolution {
    pub fn gamma(&self) -> f64 {
        self.params.gamma
    }

    /// Normalization rate L = |γ₁|·D; physical time = normalized / L.
    pub fn rate(&self) -> f64 {
        self.gamma1.abs() * self.bound_d
    }

    /// Minimum duration in physical seconds.
    pub fn t_physical(&self) -> f64 {
        self.t_min / self.rate()
    }

    /// Laboratory target gate of spin 1.
    pub fn target_gate(&self) -> UnitaryGate {
        self.target.gate()
    }

    /// Canonical-frame propagators at normalized time t.
    pub fn canonical_pair_at(&self, t: f64) -> GatePair {
        let (u1, u2) = self.params.trajectories(t);
        GatePair::new(u1, u2)
    }

    /// Laboratory-frame propagators at normalized time t.
    pub fn lab_pair_at(&self, t: f64) -> GatePair {
        self.canonical_pair_at(t).conjugated_by(&self.y)
    }

    /// Laboratory pair at t_min; equals sign·(R_axis(θ), 1) to solver
    /// tolerance.
    pub fn realized_pair(&self) -> GatePair {
        self.lab_pair_at(self.t_min)
    }

    /// At θ = π: the collapsed index form (m, l_half, k) with
    /// l_half = 2l + s; None otherwise.
    pub fn half_pi_form(&self) -> Option<(i64, i64, i64)> {
        if self.q_rational != BigRational::one() {
            return None;
        }
        match self.branch {
            Branch::Quadruple(q) => Some((q.m, q.half_pi_l(), q.k)),
            _ => None,
        }
    }
}

fn sign_gate(g: UnitaryGate, sign: f64) -> UnitaryGate {
    if sign < 0.0 {
        -g
    } else {
        g
    }
}

fn neg_one_pow(n: i64) -> f64 {
    if n.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// The fastest admissible quadruple with indices up to `bound`, with its
/// exact squared duration; ties break lexicographically on
/// (m, l, k, −s) to make the result deterministic.
pub fn best_quadruple(
    gamma: &BigRational,
    q: &BigRational,
    bound: i64,
) -> Option<(Quadruple, BigRational)> {
    let theta_is_pi = q == &BigRational::one();
    let mut best: Option<(Quadruple, BigRational)> = None;
    for s in [1i64, -1] {
        let l_min = if s == 1 { 0 } else { 1 };
        for m in 1..=bound {
            for l in l_min..=bound {
                if theta_is_pi {
                    // One representative per l_half = 2l + s: (−1, 1) for
                    // l_half = 1, (+1, l ≥ 1) for l_half ≥ 3.
                    if s == 1 && l == 0 {
                        continue;
                    }
                    if s == -1 && l >= 2 {
                        continue;
                    }
                }
                for k in 1..=bound {
                    let Some(t_sq) = quadruple_duration_sq(gamma, q, s, m, l, k) else {
                        continue;
                    };
                    let quad = Quadruple { s, m, l, k };
                    let better = match &best {
                        None => true,
                        Some((inc, inc_t)) => {
                            t_sq < *inc_t
                                || (t_sq == *inc_t
                                    && (quad.m, quad.l, quad.k, -quad.s)
                                        < (inc.m, inc.l, inc.k, -inc.s))
                        }
                    };
                    if better {
                        best = Some((quad, t_sq));
                    }
                }
            }
        }
    }
    best
}

/// Smallest k ≤ k_max whose degenerate duration t = kπ/γ realizes the
/// angle: |cos(kπ/γ) − (−1)^k cos(θ/2)| < tol.
pub fn bzero_candidate(gamma_f: f64, theta: f64, k_max: i64, tol: f64) -> Option<i64> {
    for k in 1..=k_max {
        let lhs = (k as f64 * PI / gamma_f).cos();
        let rhs = neg_one_pow(k) * (theta / 2.0).cos();
        if (lhs - rhs).abs() < tol {
            return Some(k);
        }
    }
    None
}

/// Synthesize the provably minimum-time pulse for a [`SolveRequest`].
pub fn solve_rotation(req: &SolveRequest, opts: &SolveOptions) -> Result<TocSolution> {
    // ---- validation -------------------------------------------------
    let one = BigRational::one();
    if !req.gamma.is_positive() || req.gamma == one {
        return Err(Error::InvalidTarget(
            "coupling ratio γ must be positive and different from 1".into(),
        ));
    }
    if req.gamma1 == 0.0 || !req.gamma1.is_finite() {
        return Err(Error::InvalidTarget("γ₁ must be finite and nonzero".into()));
    }
    if !(req.bound_d > 0.0) || !req.bound_d.is_finite() {
        return Err(Error::InvalidBound(req.bound_d));
    }
    let theta = req.target.theta;
    let (q, q_exact) = match &req.q_exact {
        Some(q) => {
            let q_f = q.to_f64().ok_or_else(|| Error::Internal("q out of f64 range".into()))?;
            if (q_f * PI - theta).abs() > 1e-9 {
                return Err(Error::InvalidTarget(format!(
                    "exact angle {q_f}·π disagrees with θ = {theta}"
                )));
            }
            (q.clone(), true)
        }
        None => (rational_from_f64(theta / PI)?, false),
    };
    if !q.is_positive() || q >= BigRational::from_integer(2.into()) {
        return Err(Error::InvalidTarget("θ/π must lie strictly inside (0, 2)".into()));
    }
    let gamma_f = req
        .gamma
        .to_f64()
        .ok_or_else(|| Error::Internal("γ out of f64 range".into()))?;

    // ---- enumerate both families ------------------------------------
    let quad_best = best_quadruple(&req.gamma, &q, opts.bound);
    let bzero_best = bzero_candidate(gamma_f, theta, opts.bzero_k_max, tol::BZERO).map(|k| {
        let ratio = BigRational::from_integer(k.into()) / &req.gamma;
        (k, &ratio * &ratio)
    });

    let (mut branch, mut t_sq) = match (quad_best, bzero_best) {
        (None, None) => return Err(Error::NotFound { bound: opts.bound }),
        (Some((quad, t)), None) => (Branch::Quadruple(quad), t),
        (None, Some((k, t))) => (Branch::BZero { k }, t),
        (Some((quad, tq)), Some((k, tb))) => {
            if tb < tq {
                (Branch::BZero { k }, tb)
            } else {
                (Branch::Quadruple(quad), tq)
            }
        }
    };

    // ---- certificate, self-healing against a short enumeration ------
    let certificate = if opts.with_certificate {
        let mut cert = None;
        for _ in 0..8 {
            let c = build_certificate(&req.gamma, &q, q_exact, &t_sq, tol::BZERO)?;
            if let Some((s, m, l, k)) = c.improvement() {
                // The enumeration bound missed a faster quadruple; adopt
                // it (strictly decreasing T, so this terminates).
                t_sq = quadruple_duration_sq(&req.gamma, &q, s, m, l, k).ok_or_else(|| {
                    Error::Internal("certificate improvement fails the validity re-check".into())
                })?;
                branch = Branch::Quadruple(Quadruple { s, m, l, k });
                continue;
            }
            if let Some(b) = c.bzero.iter().find(|b| !b.excluded) {
                // A faster degenerate duration beyond the scan; adopt the
                // smallest such k (strictly decreasing T as well).
                let ratio = BigRational::from_integer(b.k.into()) / &req.gamma;
                t_sq = &ratio * &ratio;
                branch = Branch::BZero { k: b.k };
                continue;
            }
            cert = Some(c);
            break;
        }
        if cert.is_none() {
            return Err(Error::Internal(
                "optimality certificate failed to converge on an incumbent".into(),
            ));
        }
        cert
    } else {
        None
    };

    // ---- recover canonical parameters -------------------------------
    let t_sq_f = t_sq.to_f64().ok_or_else(|| Error::Internal("T out of f64 range".into()))?;
    let t = PI * t_sq_f.sqrt();

    let (params, sign) = match branch {
        Branch::Quadruple(quad) => {
            let omega = quad.m as f64 * PI / t;
            let eta_g = quad.k as f64 * PI / t;
            let a = (omega * omega + gamma_f * gamma_f - eta_g * eta_g)
                / (2.0 * omega * gamma_f);
            if a.abs() > 1.0 + 1e-9 {
                return Err(Error::Internal(format!(
                    "recovered |a| = {} > 1 despite the duration window",
                    a.abs()
                )));
            }
            let a = a.clamp(-1.0, 1.0);
            let b = opts.b_sign.signum() * (1.0 - a * a).sqrt();
            let params = CanonicalParams { omega, a, b, gamma: gamma_f };

            // Resonance residuals are identities of the construction;
            // a violation indicates an implementation bug.
            let scale = 1.0 + t;
            let r1 = (params.eta_gamma() * t - quad.k as f64 * PI).abs();
            let r2 = (params.eta1() * t - (quad.s as f64 * theta / 2.0 + quad.l as f64 * PI))
                .abs();
            if r1 > tol::SOLVER_RESIDUAL * scale || r2 > tol::SOLVER_RESIDUAL * scale {
                return Err(Error::Internal(format!(
                    "resonance residuals too large: η_γ {r1:.3e}, η₁ {r2:.3e}"
                )));
            }
            (params, neg_one_pow(quad.m + quad.k))
        }
        Branch::BZero { k } => {
            // Constant field along ±z: U₁ = e^{iaσzt} with a = ±1 chosen
            // so that cos t = (−1)^k cos(θ/2) lifts to the right sign of
            // the rotation, U₂ = (−1)^k.
            let sign = neg_one_pow(k);
            let a = if t.sin() >= 0.0 { -sign } else { sign };
            (CanonicalParams { omega: 0.0, a, b: 0.0, gamma: gamma_f }, sign)
        }
        Branch::Numerical => unreachable!("analytic enumeration never yields Numerical"),
    };

    // ---- frame change and verification ------------------------------
    let (u1c, u2c) = params.trajectories(t);
    let canonical = GatePair::new(u1c, u2c);
    let lab_target = GatePair::new(
        sign_gate(req.target.gate(), sign),
        sign_gate(UnitaryGate::IDENTITY, sign),
    );
    let y = solve_conjugator(&canonical, &lab_target, opts.tolerances.witness_residual)?;

    let realized = canonical.conjugated_by(&y);
    let residual = realized
        .first
        .m
        .distance(&lab_target.first.m)
        .max(realized.second.m.distance(&lab_target.second.m));
    if residual > opts.tolerances.verify_gate {
        return Err(Error::VerificationFailed { residual, tol: opts.tolerances.verify_gate });
    }

    Ok(TocSolution {
        gamma_rational: req.gamma.clone(),
        q_rational: q,
        q_exact,
        target: req.target,
        gamma1: req.gamma1,
        bound_d: req.bound_d,
        t_min: t,
        t_sq_exact: t_sq,
        params,
        sign,
        branch,
        y,
        certificate,
    })
}
