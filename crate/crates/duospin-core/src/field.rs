//! Laboratory-frame control fields.
//!
//! A synthesized pulse lives in canonical coordinates: a unit-norm
//! control direction ũ(τ) = (b sin 2ωτ, b cos 2ωτ, −a) in normalized
//! time τ.  The laboratory field applies the frame change Y of the
//! solution (laboratory generator = Y†·canonical generator·Y), rescales
//! to the physical amplitude bound D and gyromagnetic ratio γ₁, and runs
//! on physical time t = τ/L with L = |γ₁|·D:
//!
//! &nbsp;&nbsp; u(t) = sign(γ₁)·D·c_lab(L·t),   |u| = D.
//!
//! In magnetic-resonance form the same drive is the field
//! B(t) = −2·u(t) of the Hamiltonian H = −(γ₁/2)·B·σ, which is what the
//! waveform export reports (|B| = 2D).

use crate::pmp::CanonicalParams;
use crate::su2::{AlgebraElement, UnitaryGate};
use crate::solver::TocSolution;

/// Shape of a control field.
#[derive(Debug, Clone)]
pub enum FieldKind {
    /// Canonical pulse conjugated into the laboratory frame; duration is
    /// given in normalized time.
    Canonical { params: CanonicalParams, frame: UnitaryGate, t_normalized: f64 },
    /// Constant laboratory field over a physical duration.
    Constant { u: [f64; 3], duration: f64 },
    /// Zero-order-hold waveform: sample k is held on [k·dt, (k+1)·dt).
    Sampled { dt: f64, samples: Vec<[f64; 3]> },
    /// Segments played back to back (durations add).
    Sequence(Vec<ControlField>),
}

/// A bounded laboratory control field u(t) on physical time
/// t ∈ [0, duration]; evaluation outside the support returns zero.
#[derive(Debug, Clone)]
pub struct ControlField {
    pub kind: FieldKind,
    /// Physical gyromagnetic ratio of spin 1.
    pub gamma1: f64,
    /// Amplitude bound D; canonical pulses saturate it.
    pub bound_d: f64,
}

impl ControlField {
    /// The laboratory field of a synthesized minimum-time pulse.
    pub fn from_solution(sol: &TocSolution) -> ControlField {
        ControlField {
            kind: FieldKind::Canonical {
                params: sol.params,
                frame: sol.y,
                t_normalized: sol.t_min,
            },
            gamma1: sol.gamma1,
            bound_d: sol.bound_d,
        }
    }

    /// Normalization rate L = |γ₁|·D.
    pub fn rate(&self) -> f64 {
        self.gamma1.abs() * self.bound_d
    }

    /// Physical duration in seconds.
    pub fn duration(&self) -> f64 {
        match &self.kind {
            FieldKind::Canonical { t_normalized, .. } => t_normalized / self.rate(),
            FieldKind::Constant { duration, .. } => *duration,
            FieldKind::Sampled { dt, samples } => dt * samples.len() as f64,
            FieldKind::Sequence(parts) => parts.iter().map(|p| p.duration()).sum(),
        }
    }

    /// Control vector u(t) at physical time t (zero outside the pulse).
    pub fn eval(&self, t: f64) -> [f64; 3] {
        if t < 0.0 || t > self.duration() {
            return [0.0, 0.0, 0.0];
        }
        match &self.kind {
            FieldKind::Canonical { params, frame, .. } => {
                let tau = self.rate() * t;
                let canonical = params.control(tau).matrix();
                let lab = frame.m.adjoint() * canonical * frame.m;
                let c = AlgebraElement::from_matrix(&lab)
                    .expect("conjugated control direction stays in su(2)");
                let scale = self.gamma1.signum() * self.bound_d;
                [scale * c.x, scale * c.y, scale * c.z]
            }
            FieldKind::Constant { u, .. } => *u,
            FieldKind::Sampled { dt, samples } => {
                let k = ((t / dt).floor() as usize).min(samples.len() - 1);
                samples[k]
            }
            FieldKind::Sequence(parts) => {
                let mut offset = 0.0;
                for part in parts {
                    let d = part.duration();
                    if t <= offset + d {
                        return part.eval(t - offset);
                    }
                    offset += d;
                }
                [0.0, 0.0, 0.0]
            }
        }
    }

    /// Resonance-form magnetic field B(t) = −2·u(t).
    pub fn b_field(&self, t: f64) -> [f64; 3] {
        let u = self.eval(t);
        [-2.0 * u[0], -2.0 * u[1], -2.0 * u[2]]
    }

    /// Minimum sampling rate (samples per second) that resolves the
    /// fastest oscillation of the field: the canonical components evolve
    /// as cos(2ωLt), i.e. at 2ωL/(2π) cycles per second, so the Nyquist
    /// rate is 2ωL/π.  Constant segments need no resolution.
    pub fn nyquist_rate(&self) -> f64 {
        match &self.kind {
            FieldKind::Canonical { params, .. } => {
                2.0 * params.omega.abs() * self.rate() / std::f64::consts::PI
            }
            FieldKind::Constant { .. } => 0.0,
            // A stored waveform carries no analytic frequency content
            // beyond its own sampling; no extra constraint.
            FieldKind::Sampled { .. } => 0.0,
            FieldKind::Sequence(parts) => {
                parts.iter().map(|p| p.nyquist_rate()).fold(0.0, f64::max)
            }
        }
    }

    /// n uniformly spaced samples (t, u(t)) covering [0, duration],
    /// endpoints included (n ≥ 2).
    pub fn samples(&self, n: usize) -> Vec<(f64, [f64; 3])> {
        let n = n.max(2);
        let duration = self.duration();
        (0..n)
            .map(|i| {
                let t = duration * i as f64 / (n - 1) as f64;
                (t, self.eval(t))
            })
            .collect()
    }
}

/// First-order per-axis actuator distortion: each axis of the commanded
/// field passes through a low-pass filter ẏ = (x − y)/τ (y(0) = 0) and a
/// constant gain η, so the spins see η ⊙ y(t) instead of x(t); the
/// gyromagnetic ratio seen by spin 2 may additionally be miscalibrated
/// by a relative shift.  τ = 0 disables the filter, η = (1, 1, 1) the
/// gain error, shift = 0 the ratio error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistortionModel {
    /// Filter time constant in physical seconds (0 = no filtering).
    pub tau: f64,
    /// Per-axis gain multipliers.
    pub eta: [f64; 3],
    /// Relative error of the ratio γ: spin 2 evolves under γ(1 + shift).
    pub gamma_shift: f64,
}

impl DistortionModel {
    /// The identity distortion (pass-through).
    pub fn none() -> Self {
        DistortionModel { tau: 0.0, eta: [1.0, 1.0, 1.0], gamma_shift: 0.0 }
    }

    pub fn is_identity(&self) -> bool {
        self.tau == 0.0 && self.eta == [1.0, 1.0, 1.0] && self.gamma_shift == 0.0
    }
}
