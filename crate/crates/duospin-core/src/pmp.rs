//! Extremal trajectories of the two-spin simultaneous-control problem.
//!
//! For two uncoupled spin-½ systems driven by one shared field,
//!
//! &nbsp;&nbsp; U̇₁ = X₁U₁,  U̇₂ = γX₁U₂,  X₁ = −i γ₁ (u·σ),  |u| ≤ D,
//!
//! every time-optimal control is, after normalization γ₁ = 1 and
//! L = |γ₁|D = 1, of the constant-pair form
//!
//! &nbsp;&nbsp; X₁(t) = e^{At} P e^{−At},
//! &nbsp;&nbsp; U₁(t) = e^{At} e^{(P−A)t},  U₂(t) = e^{At} e^{(γP−A)t},
//!
//! with constant A, P ∈ su(2) and ‖P‖ = 1.  Conjugating by a fixed
//! Y ∈ SU(2) brings the pair to the canonical two-parameter family
//!
//! &nbsp;&nbsp; A = iωσz,  P = iaσz − ibσy,  a² + b² = 1,
//!
//! in which the trajectories factor into a diagonal phase times a fixed-
//! axis rotation with effective detunings η₁ = √(ω² + 1 − 2aω) and
//! η_γ = √(ω² + γ² − 2aωγ).  This module evaluates those trajectories,
//! the rotating control field they require, and the sensitivity bound
//! ‖∂U₂/∂γ‖ ≤ ‖P‖·t.

use crate::su2::{expm_algebra, expm_zy, rot_z_phase, AlgebraElement, UnitaryGate};

/// General extremal pair (A, P): the control is X₁(t) = e^{At}Pe^{−At}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PmpPair {
    /// Drift-like constant A ∈ su(2).
    pub a: AlgebraElement,
    /// Initial control direction P ∈ su(2); ‖P‖ is the pulse amplitude.
    pub p: AlgebraElement,
}

impl PmpPair {
    /// Propagators of both spins at time t:
    /// U₁ = e^{At}e^{(P−A)t}, U₂ = e^{At}e^{(γP−A)t}.
    pub fn propagate(&self, gamma: f64, t: f64) -> (UnitaryGate, UnitaryGate) {
        let outer = expm_algebra(&self.a, t);
        let u1 = outer * expm_algebra(&(self.p - self.a), t);
        let u2 = outer * expm_algebra(&(self.p.scaled(gamma) - self.a), t);
        (u1, u2)
    }

    /// Instantaneous control generator X₁(t) = e^{At} P e^{−At}.
    pub fn control(&self, t: f64) -> AlgebraElement {
        let rot = expm_algebra(&self.a, t);
        let m = rot.m * self.p.matrix() * rot.adjoint().m;
        // Conjugation of su(2) by SU(2) stays in su(2); the closed-form
        // product keeps the defect at roundoff level, so the strict
        // extraction cannot fail for finite inputs.
        AlgebraElement::from_matrix(&m).expect("conjugated control must remain in su(2)")
    }

    /// Pulse amplitude L = ‖P‖ (the saturated field bound after
    /// normalization).
    pub fn control_norm(&self) -> f64 {
        self.p.norm()
    }

    /// Rigorous sensitivity bound on the second spin's endpoint:
    /// ‖∂U₂(t)/∂γ‖ ≤ ‖P‖·t.
    pub fn spin2_sensitivity_bound(&self, t: f64) -> f64 {
        self.control_norm() * t
    }
}

/// Canonical extremal parameters (ω, a, b) with a² + b² = 1, together
/// with the ratio γ of the second spin's coupling to the first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalParams {
    /// Rotating-frame rate: A = iωσz.
    pub omega: f64,
    /// z-component of the initial control direction: P = iaσz − ibσy.
    pub a: f64,
    /// y-component of the initial control direction.
    pub b: f64,
    /// Coupling ratio γ = γ₂/γ₁ (γ > 0, γ ≠ 1).
    pub gamma: f64,
}

impl CanonicalParams {
    /// |a² + b² − 1|, the defect of the unit-amplitude constraint.
    pub fn amplitude_defect(&self) -> f64 {
        (self.a * self.a + self.b * self.b - 1.0).abs()
    }

    /// The canonical pair as coefficient vectors:
    /// A = iωσz ↦ (0, 0, −ω), P = iaσz − ibσy ↦ (0, b, −a).
    pub fn pair(&self) -> PmpPair {
        PmpPair {
            a: AlgebraElement::new(0.0, 0.0, -self.omega),
            p: AlgebraElement::new(0.0, self.b, -self.a),
        }
    }

    /// Effective detuning of spin 1: η₁ = √(ω² + 1 − 2aω).
    pub fn eta1(&self) -> f64 {
        (self.omega * self.omega + 1.0 - 2.0 * self.a * self.omega).sqrt()
    }

    /// Effective detuning of spin 2: η_γ = √(ω² + γ² − 2aωγ).
    pub fn eta_gamma(&self) -> f64 {
        let g = self.gamma;
        (self.omega * self.omega + g * g - 2.0 * self.a * self.omega * g).sqrt()
    }

    /// Both canonical propagators at time t, evaluated as the product of
    /// the diagonal phase e^{iωtσz} with the closed-form exponential of
    /// the constant generator i(a−ω)σz − ibσy (resp. i(γa−ω)σz − iγbσy).
    pub fn trajectories(&self, t: f64) -> (UnitaryGate, UnitaryGate) {
        let phase = rot_z_phase(self.omega * t);
        let u1 = phase * expm_zy(self.a - self.omega, self.b, t);
        let u2 = phase * expm_zy(self.gamma * self.a - self.omega, self.gamma * self.b, t);
        (u1, u2)
    }

    /// Canonical control direction at time t, the coefficient vector of
    /// X̃₁(t) = e^{iωσzt}(iaσz − ibσy)e^{−iωσzt}:
    /// ũ(t) = (b sin 2ωt, b cos 2ωt, −a).
    pub fn control(&self, t: f64) -> AlgebraElement {
        let phase = 2.0 * self.omega * t;
        AlgebraElement::new(self.b * phase.sin(), self.b * phase.cos(), -self.a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su2::{Mat2C, C64};
    use crate::tol;
    use num_complex::Complex;

    fn sample_params() -> CanonicalParams {
        // a² + b² = 1 exactly: a = 3/5, b = 4/5.
        CanonicalParams { omega: 0.7, a: 0.6, b: 0.8, gamma: 0.3 }
    }

    #[test]
    fn canonical_trajectories_match_general_pair_form() {
        let params = sample_params();
        let pair = params.pair();
        for t in [0.0, 0.3, 1.7, 4.9] {
            let (c1, c2) = params.trajectories(t);
            let (g1, g2) = pair.propagate(params.gamma, t);
            assert!(
                c1.m.approx_eq(&g1.m, tol::GROUP_LAW),
                "spin-1 canonical product must equal e^(At)e^((P−A)t) at t = {t}"
            );
            assert!(
                c2.m.approx_eq(&g2.m, tol::GROUP_LAW),
                "spin-2 canonical product must equal e^(At)e^((γP−A)t) at t = {t}"
            );
        }
    }

    #[test]
    fn rotating_control_matches_conjugated_pair_control() {
        let params = sample_params();
        let pair = params.pair();
        for t in [0.0, 0.45, 2.2] {
            let direct = params.control(t);
            let conj = pair.control(t);
            assert!(
                (direct - conj).norm() <= tol::GROUP_LAW,
                "rotating-frame field must equal e^(At)Pe^(−At) at t = {t}"
            );
        }
    }

    #[test]
    fn control_norm_is_constant_along_the_trajectory() {
        let params = sample_params();
        for t in [0.0, 0.9, 3.3] {
            let n = params.control(t).norm();
            assert!(
                (n - 1.0).abs() <= tol::ALGEBRAIC,
                "canonical control must stay on the unit sphere, got ‖u‖ = {n} at t = {t}"
            );
        }
    }

    #[test]
    fn trajectories_match_entrywise_detuning_form() {
        // Independent expression of the same propagators through the
        // detunings: the (1,1) entry of spin 1 is
        // e^{iωt}(cos η₁t + i((a−ω)/η₁) sin η₁t), the (1,2) entry is
        // −e^{iωt}(b/η₁) sin η₁t, and spin 2 carries γa, γb and η_γ.
        let params = sample_params();
        let t = 1.234;
        let eta1 = params.eta1();
        let eta_g = params.eta_gamma();
        let (u1, u2) = params.trajectories(t);

        let phase = Complex::from_polar(1.0, params.omega * t);
        let d1: C64 = phase
            * Complex::new(
                (eta1 * t).cos(),
                (params.a - params.omega) / eta1 * (eta1 * t).sin(),
            );
        let o1: C64 = phase * Complex::new(-params.b / eta1 * (eta1 * t).sin(), 0.0);
        let expected1 = Mat2C { a: d1, b: o1, c: -o1.conj(), d: d1.conj() };
        assert!(
            u1.m.approx_eq(&expected1, 1e-11),
            "spin-1 propagator must match the η₁ entrywise form"
        );

        let gb = params.gamma * params.b;
        let dg = phase
            * Complex::new(
                (eta_g * t).cos(),
                (params.gamma * params.a - params.omega) / eta_g * (eta_g * t).sin(),
            );
        let og = phase * Complex::new(-gb / eta_g * (eta_g * t).sin(), 0.0);
        let expected2 = Mat2C { a: dg, b: og, c: -og.conj(), d: dg.conj() };
        assert!(
            u2.m.approx_eq(&expected2, 1e-11),
            "spin-2 propagator must match the η_γ entrywise form"
        );
    }

    #[test]
    fn detunings_reduce_to_quadratic_forms_on_the_unit_circle() {
        let params = sample_params();
        let direct1 = ((params.a - params.omega).powi(2) + params.b * params.b).sqrt();
        let g = params.gamma;
        let direct2 =
            ((g * params.a - params.omega).powi(2) + (g * params.b).powi(2)).sqrt();
        assert!((params.eta1() - direct1).abs() <= tol::ALGEBRAIC);
        assert!((params.eta_gamma() - direct2).abs() <= tol::ALGEBRAIC);
    }

    #[test]
    fn sensitivity_bound_scales_with_amplitude_and_time() {
        let pair = sample_params().pair();
        assert!((pair.control_norm() - 1.0).abs() <= tol::ALGEBRAIC);
        assert!((pair.spin2_sensitivity_bound(4.0) - 4.0).abs() <= tol::ALGEBRAIC);
    }
}
