//! Conjugation-orbit space of gate pairs.
//!
//! Two pairs of SU(2) gates (U, Z) and (U′, Z′) are *simultaneously
//! conjugate* when a single Y ∈ SU(2) maps one to the other,
//! U′ = Y†UY and Z′ = Y†ZY.  The complete invariant is
//!
//! &nbsp;&nbsp; Ψ(U, Z) = (φ, x),  φ = eigenphase of U ∈ [0, π],
//! &nbsp;&nbsp; x = (S†ZS)₁₁ ∈ closed unit disk,
//!
//! where S diagonalizes U = S·diag(e^{iφ}, e^{−iφ})·S†.  On the interior
//! φ ∈ (0, π) the pair (φ, x) separates orbits.  At the degenerate edges
//! U = ±1 the diagonalizer is arbitrary and the invariant collapses to
//! the eigenphase ψ of Z alone; those strata are stored separately.
//! Because S†ZS ∈ SU(2) and the trace is conjugation-invariant,
//! Re x = cos ψ_Z always — the metric below uses this to join the strata
//! continuously.
//!
//! The module also recovers an explicit conjugating witness Y for two
//! pairs on the same orbit, with deterministic gauge choices in every
//! degenerate branch.

use crate::su2::{eig_su2, AlgebraElement, Mat2C, UnitaryGate, C64};
use crate::tol;
use crate::{Error, Result};
use num_complex::Complex;

/// A pair of gates evolving under the same control (spin 1, spin 2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GatePair {
    pub first: UnitaryGate,
    pub second: UnitaryGate,
}

impl GatePair {
    pub fn new(first: UnitaryGate, second: UnitaryGate) -> Self {
        GatePair { first, second }
    }

    /// Simultaneous conjugation (Y†·first·Y, Y†·second·Y).
    pub fn conjugated_by(&self, y: &UnitaryGate) -> GatePair {
        GatePair {
            first: self.first.conjugated_by(y),
            second: self.second.conjugated_by(y),
        }
    }

    /// The sign-flipped pair (−first, −second); it implements the same
    /// two-spin tensor-product action first ⊗ second.
    pub fn negated(&self) -> GatePair {
        GatePair { first: -self.first, second: -self.second }
    }
}

/// A point of the orbit space, stratified by the degeneracy of the first
/// gate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrbitPoint {
    /// φ ∈ (0, π): the full invariant (φ, x).
    Interior { phi: f64, x: C64 },
    /// First gate = +1; only the eigenphase ψ ∈ [0, π] of the second
    /// gate survives.
    LeftEdge { psi: f64 },
    /// First gate = −1; only ψ of the second gate survives.
    RightEdge { psi: f64 },
}

/// Eigenphase arccos(Re Tr U / 2) ∈ [0, π].
fn eigenphase(u: &UnitaryGate) -> f64 {
    (u.m.trace().re / 2.0).clamp(-1.0, 1.0).acos()
}

/// Map a gate pair to its orbit-space point.
///
/// Routing to the edge strata happens when φ is within
/// [`tol::EDGE_ROUTING`] of 0 or π; the strata are measure-zero, so this
/// only reclassifies points that are numerically indistinguishable from
/// exact edge points.
pub fn orbit_point(pair: &GatePair) -> OrbitPoint {
    let phi = eigenphase(&pair.first);
    if phi <= tol::EDGE_ROUTING {
        return OrbitPoint::LeftEdge { psi: eigenphase(&pair.second) };
    }
    if std::f64::consts::PI - phi <= tol::EDGE_ROUTING {
        return OrbitPoint::RightEdge { psi: eigenphase(&pair.second) };
    }
    let dec = eig_su2(&pair.first);
    let w = dec.s.adjoint() * pair.second.m * dec.s;
    OrbitPoint::Interior { phi, x: w.a }
}

/// ψ-coordinate of an interior point: the eigenphase of its second gate,
/// recovered from Re x = cos ψ.
fn interior_psi(x: C64) -> f64 {
    x.re.clamp(-1.0, 1.0).acos()
}

/// Distance on the orbit space.
///
/// Interior–interior uses the product metric √(Δφ² + |Δx|²).  An edge
/// point constrains only ψ, so interior–edge distance combines the φ gap
/// to the edge with the ψ mismatch (continuous across the strata thanks
/// to Re x = cos ψ).  Opposite edges are separated by the full φ range.
pub fn orbit_distance(p: &OrbitPoint, q: &OrbitPoint) -> f64 {
    use OrbitPoint::*;
    match (*p, *q) {
        (Interior { phi: f1, x: x1 }, Interior { phi: f2, x: x2 }) => {
            (f1 - f2).hypot((x1 - x2).norm())
        }
        (Interior { phi, x }, LeftEdge { psi }) | (LeftEdge { psi }, Interior { phi, x }) => {
            phi.hypot(interior_psi(x) - psi)
        }
        (Interior { phi, x }, RightEdge { psi }) | (RightEdge { psi }, Interior { phi, x }) => {
            (std::f64::consts::PI - phi).hypot(interior_psi(x) - psi)
        }
        (LeftEdge { psi: p1 }, LeftEdge { psi: p2 })
        | (RightEdge { psi: p1 }, RightEdge { psi: p2 }) => (p1 - p2).abs(),
        (LeftEdge { psi: p1 }, RightEdge { psi: p2 })
        | (RightEdge { psi: p1 }, LeftEdge { psi: p2 }) => {
            std::f64::consts::PI.hypot(p1 - p2)
        }
    }
}

/// True when the two pairs lie on the same simultaneous-conjugation
/// orbit to within `tol` (distance of their invariants).
pub fn orbit_equivalent(p: &GatePair, q: &GatePair, tol: f64) -> bool {
    orbit_distance(&orbit_point(p), &orbit_point(q)) <= tol
}

/// Distance between the orbits of the induced tensor-product actions:
/// (U₁, U₂) and (−U₁, −U₂) implement the same map U₁ ⊗ U₂, so the
/// invariant is matched against both signs of `q`.
pub fn orbit_distance_tensor(p: &GatePair, q: &GatePair) -> f64 {
    let pp = orbit_point(p);
    let d_plus = orbit_distance(&pp, &orbit_point(q));
    let d_minus = orbit_distance(&pp, &orbit_point(&q.negated()));
    d_plus.min(d_minus)
}

/// Rotation axis n of U = cos α·1 − i sin α (n·σ) with sin α ≥ 0, if
/// defined (None at U = ±1).  The anti-Hermitian part of U is
/// −i sin α (n·σ), whose coefficient vector has norm sin α ≥ 0.
pub fn rotation_axis(u: &UnitaryGate) -> Option<[f64; 3]> {
    let anti = (u.m - u.m.adjoint()).scale(Complex::new(0.5, 0.0));
    let c = AlgebraElement::from_matrix(&anti).ok()?;
    let n = c.norm();
    if n < 1e-9 {
        return None;
    }
    Some([c.x / n, c.y / n, c.z / n])
}

/// Half-turn gate Y = i (m·σ) about the unit axis m.  Conjugation by it
/// reflects rotation axes across m: Y†(−i n·σ)Y = −i n′·σ with
/// n′ = 2(m·n)m − n.
fn half_turn(m: [f64; 3]) -> UnitaryGate {
    UnitaryGate::unchecked(-AlgebraElement::new(m[0], m[1], m[2]).matrix())
}

/// Deterministic unit vector perpendicular to n: the larger of n × ẑ and
/// n × x̂, normalized.
pub fn perpendicular(n: [f64; 3]) -> [f64; 3] {
    let with_z = [n[1], -n[0], 0.0];
    let with_x = [0.0, n[2], -n[1]];
    let nz = (with_z[0] * with_z[0] + with_z[1] * with_z[1]).sqrt();
    let nx = (with_x[1] * with_x[1] + with_x[2] * with_x[2]).sqrt();
    let (v, norm) = if nz >= nx { (with_z, nz) } else { (with_x, nx) };
    [v[0] / norm, v[1] / norm, v[2] / norm]
}

/// Conjugating Y between first gates only, used when both second gates
/// are trivial (±1): reflect the rotation axis of `from` onto the axis of
/// `to` with a half-turn about their bisector.  This gauge keeps Y within
/// the plane spanned by the two axes, which is the natural frame change
/// between a canonical solution and a laboratory target.
fn bisector_witness(from: &UnitaryGate, to: &UnitaryGate) -> UnitaryGate {
    let (Some(n_from), Some(n_to)) = (rotation_axis(from), rotation_axis(to)) else {
        // Both gates are ±1; any Y works.
        return UnitaryGate::IDENTITY;
    };
    let sum = [
        n_from[0] + n_to[0],
        n_from[1] + n_to[1],
        n_from[2] + n_to[2],
    ];
    let norm = (sum[0] * sum[0] + sum[1] * sum[1] + sum[2] * sum[2]).sqrt();
    if norm < 1e-9 {
        // Antipodal axes: any axis perpendicular to n_from flips it.
        return half_turn(perpendicular(n_from));
    }
    half_turn([sum[0] / norm, sum[1] / norm, sum[2] / norm])
}

/// Diagonal phase gate diag(e^{iχ}, e^{−iχ}).
fn diag_phase(chi: f64) -> Mat2C {
    Mat2C {
        a: Complex::from_polar(1.0, chi),
        b: Complex::new(0.0, 0.0),
        c: Complex::new(0.0, 0.0),
        d: Complex::from_polar(1.0, -chi),
    }
}

/// Recover a simultaneous conjugator: Y ∈ SU(2) with
/// to.first = Y†·from.first·Y and to.second = Y†·from.second·Y.
///
/// Both pairs must lie on the same orbit; the result is verified to the
/// given residual tolerance and an error is returned otherwise.
///
/// Construction: diagonalize the first gates, from.first = S₁Λ S₁†,
/// to.first = S₂Λ S₂†, and set Y = S₁·diag(e^{iχ}, e^{−iχ})·S₂†.  The
/// requirement on the second gates, H† (S₁†·from.second·S₁) H =
/// S₂†·to.second·S₂ =: W₂, fixes e^{−2iχ} = (W₂)₁₂ / (W₁)₁₂ whenever the
/// off-diagonal entry is nonzero; χ is normalized to [0, π) (χ and χ+π
/// give the same conjugation).  Degenerate branches:
///
/// * (W₁)₁₂ ≈ 0 with trivial second gates (±1): bisector half-turn on
///   the first gates (see [`bisector_witness`]);
/// * (W₁)₁₂ ≈ 0 otherwise: the second gates are already co-diagonal with
///   the first, so χ = 0 works;
/// * first gates = ±1: Y is built from the second gates' eigensystems;
/// * everything degenerate: Y = 1.
pub fn solve_conjugator(from: &GatePair, to: &GatePair, tol_residual: f64) -> Result<UnitaryGate> {
    let dec_from = eig_su2(&from.first);
    let dec_to = eig_su2(&to.first);

    let y = if dec_from.degenerate && dec_to.degenerate {
        let z_from = eig_su2(&from.second);
        let z_to = eig_su2(&to.second);
        if z_from.degenerate && z_to.degenerate {
            UnitaryGate::IDENTITY
        } else {
            // Align the second gates' eigenbases: Y = T₁T₂†.
            UnitaryGate::unchecked(z_from.s * z_to.s.adjoint())
        }
    } else if dec_from.degenerate != dec_to.degenerate {
        return Err(Error::Internal(
            "pairs are not on the same orbit: exactly one first gate is ±1".into(),
        ));
    } else {
        let w1 = dec_from.s.adjoint() * from.second.m * dec_from.s;
        let w2 = dec_to.s.adjoint() * to.second.m * dec_to.s;
        if w1.b.norm() <= 1e-7 {
            let trivial = |u: &UnitaryGate| u.distance_up_to_sign(&UnitaryGate::IDENTITY) < 1e-6;
            if trivial(&from.second) && trivial(&to.second) {
                bisector_witness(&from.first, &to.first)
            } else {
                UnitaryGate::unchecked(dec_from.s * dec_to.s.adjoint())
            }
        } else {
            // e^{−2iχ} = (W₂)₁₂/(W₁)₁₂  ⇒  χ = −arg((W₂)₁₂/(W₁)₁₂)/2.
            let ratio = w2.b / w1.b;
            let mut chi = -ratio.arg() / 2.0;
            if chi < 0.0 {
                chi += std::f64::consts::PI;
            }
            UnitaryGate::unchecked(dec_from.s * diag_phase(chi) * dec_to.s.adjoint())
        }
    };

    let conj = from.conjugated_by(&y);
    let r1 = conj.first.m.distance(&to.first.m);
    let r2 = conj.second.m.distance(&to.second.m);
    let residual = r1.max(r2);
    if residual > tol_residual {
        return Err(Error::VerificationFailed { residual, tol: tol_residual });
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su2::expm_algebra;

    fn gate(x: f64, y: f64, z: f64, t: f64) -> UnitaryGate {
        expm_algebra(&AlgebraElement::new(x, y, z), t)
    }

    fn generic_pair() -> GatePair {
        GatePair::new(gate(0.3, -0.8, 0.5, 1.1), gate(-0.2, 0.9, 1.4, 0.7))
    }

    #[test]
    fn invariant_is_conjugation_invariant() {
        let pair = generic_pair();
        for y in [gate(1.0, 0.2, -0.4, 0.9), gate(0.0, 1.0, 0.0, 2.3)] {
            let d = orbit_distance(&orbit_point(&pair), &orbit_point(&pair.conjugated_by(&y)));
            assert!(
                d <= 1e-10,
                "conjugation must not move the orbit point, distance {d:.3e}"
            );
        }
    }

    #[test]
    fn distinct_orbits_are_separated() {
        let p = generic_pair();
        let q = GatePair::new(gate(0.3, -0.8, 0.5, 1.3), p.second);
        let d = orbit_distance(&orbit_point(&p), &orbit_point(&q));
        assert!(d > 1e-3, "changing the first gate's angle must move the orbit point");
    }

    #[test]
    fn identity_first_gate_routes_to_left_edge() {
        let pair = GatePair::new(UnitaryGate::IDENTITY, gate(0.1, 0.5, -0.3, 0.8));
        match orbit_point(&pair) {
            OrbitPoint::LeftEdge { psi } => {
                let expected = (pair.second.m.trace().re / 2.0).acos();
                assert!((psi - expected).abs() <= 1e-12);
            }
            other => panic!("expected the left edge stratum, got {other:?}"),
        }
    }

    #[test]
    fn minus_identity_first_gate_routes_to_right_edge() {
        let pair = GatePair::new(-UnitaryGate::IDENTITY, gate(0.1, 0.5, -0.3, 0.8));
        assert!(matches!(orbit_point(&pair), OrbitPoint::RightEdge { .. }));
    }

    #[test]
    fn metric_is_continuous_approaching_an_edge() {
        // A pair whose first gate tends to the identity must approach its
        // edge image in the metric.
        let second = gate(0.4, -0.1, 0.9, 1.2);
        let edge = orbit_point(&GatePair::new(UnitaryGate::IDENTITY, second));
        let near = orbit_point(&GatePair::new(gate(1.0, 0.0, 0.0, 1e-6), second));
        let d = orbit_distance(&near, &edge);
        assert!(d < 1e-5, "edge limit must be continuous, distance {d:.3e}");
    }

    #[test]
    fn conjugator_is_recovered_for_generic_pairs() {
        let from = generic_pair();
        let y_true = gate(0.7, 0.1, -0.9, 0.8);
        let to = from.conjugated_by(&y_true);
        let y = solve_conjugator(&from, &to, tol::WITNESS_RESIDUAL)
            .expect("same-orbit pairs must admit a witness");
        let moved = from.conjugated_by(&y);
        assert!(moved.first.m.approx_eq(&to.first.m, tol::WITNESS_RESIDUAL));
        assert!(moved.second.m.approx_eq(&to.second.m, tol::WITNESS_RESIDUAL));
    }

    #[test]
    fn conjugator_handles_trivial_second_gates() {
        // Second gates ±1: the bisector branch must still map the first
        // gates onto each other.
        let from = GatePair::new(gate(0.0, 1.0, 0.0, 1.3), -UnitaryGate::IDENTITY);
        let to = GatePair::new(gate(1.0, 0.0, 0.0, 1.3), -UnitaryGate::IDENTITY);
        let y = solve_conjugator(&from, &to, tol::WITNESS_RESIDUAL)
            .expect("pairs with matching angles and trivial seconds must conjugate");
        assert!(from.conjugated_by(&y).first.m.approx_eq(&to.first.m, tol::WITNESS_RESIDUAL));
    }

    #[test]
    fn conjugator_handles_degenerate_first_gates() {
        let from = GatePair::new(UnitaryGate::IDENTITY, gate(0.3, 0.4, -0.5, 0.9));
        let y_true = gate(-0.2, 0.8, 0.1, 1.7);
        let to = from.conjugated_by(&y_true);
        let y = solve_conjugator(&from, &to, tol::WITNESS_RESIDUAL)
            .expect("identity first gates leave the second gates to align");
        assert!(from.conjugated_by(&y).second.m.approx_eq(&to.second.m, tol::WITNESS_RESIDUAL));
    }

    #[test]
    fn conjugator_rejects_different_orbits() {
        let from = generic_pair();
        let to = GatePair::new(gate(0.3, -0.8, 0.5, 0.4), from.second);
        assert!(
            solve_conjugator(&from, &to, tol::WITNESS_RESIDUAL).is_err(),
            "pairs with different first-gate angles must be rejected"
        );
    }

    #[test]
    fn tensor_distance_identifies_sign_flipped_pairs() {
        let p = generic_pair();
        let d = orbit_distance_tensor(&p, &p.negated());
        assert!(d <= 1e-10, "(−U₁, −U₂) must be tensor-equivalent to (U₁, U₂)");
    }
}
