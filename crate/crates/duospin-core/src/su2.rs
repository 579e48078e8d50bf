//! 2×2 complex matrices, SU(2) gates and the su(2) algebra.
//!
//! Conventions used throughout the crate:
//!
//! * an algebra element is X = −i (c·σ) for a real coefficient vector
//!   c = (cx, cy, cz) and Pauli matrices σ = (σx, σy, σz);
//! * the su(2) norm is ‖X‖ = |c| = (1/√2)·‖X‖_F, so that ‖−i n·σ‖ = 1
//!   for a unit vector n;
//! * exponentials use X² = −|c|² 1:  e^{Xt} = cos(|c|t)·1 + sinc(|c|t)·Xt;
//! * an eigen-decomposition of U ∈ SU(2) is U = S·diag(e^{iφ}, e^{−iφ})·S†
//!   with φ ∈ [0, π] and S ∈ SU(2) chosen deterministically (first
//!   sufficiently large eigenvector component made real positive).

use crate::tol;
use crate::{Error, Result};
use num_complex::Complex;

/// Double-precision complex scalar.
pub type C64 = Complex<f64>;

pub const C_ZERO: C64 = Complex::new(0.0, 0.0);
pub const C_ONE: C64 = Complex::new(1.0, 0.0);
pub const C_I: C64 = Complex::new(0.0, 1.0);

/// Row-major 2×2 complex matrix [[a, b], [c, d]].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2C {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

/// Pauli matrix σx = [[0, 1], [1, 0]].
pub const PAULI_X: Mat2C = Mat2C { a: C_ZERO, b: C_ONE, c: C_ONE, d: C_ZERO };
/// Pauli matrix σy = [[0, −i], [i, 0]].
pub const PAULI_Y: Mat2C = Mat2C {
    a: C_ZERO,
    b: Complex::new(0.0, -1.0),
    c: C_I,
    d: C_ZERO,
};
/// Pauli matrix σz = [[1, 0], [0, −1]].
pub const PAULI_Z: Mat2C = Mat2C {
    a: C_ONE,
    b: C_ZERO,
    c: C_ZERO,
    d: Complex::new(-1.0, 0.0),
};

impl Mat2C {
    pub const IDENTITY: Mat2C = Mat2C { a: C_ONE, b: C_ZERO, c: C_ZERO, d: C_ONE };
    pub const ZERO: Mat2C = Mat2C { a: C_ZERO, b: C_ZERO, c: C_ZERO, d: C_ZERO };

    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2C { a, b, c, d }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat2C {
        Mat2C {
            a: self.a.conj(),
            b: self.c.conj(),
            c: self.b.conj(),
            d: self.d.conj(),
        }
    }

    pub fn trace(&self) -> C64 {
        self.a + self.d
    }

    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    /// Frobenius norm √(Σ|entry|²).
    pub fn frobenius_norm(&self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()).sqrt()
    }

    /// Frobenius distance ‖self − other‖_F.
    pub fn distance(&self, other: &Mat2C) -> f64 {
        (*self - *other).frobenius_norm()
    }

    /// True when ‖self − other‖_F ≤ tol.
    pub fn approx_eq(&self, other: &Mat2C, tol: f64) -> bool {
        self.distance(other) <= tol
    }

    pub fn scale(&self, s: C64) -> Mat2C {
        Mat2C { a: self.a * s, b: self.b * s, c: self.c * s, d: self.d * s }
    }

    /// ‖U†U − 1‖_F, a measure of the unitarity defect.
    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self - Mat2C::IDENTITY).frobenius_norm()
    }
}

impl std::ops::Add for Mat2C {
    type Output = Mat2C;
    fn add(self, rhs: Mat2C) -> Mat2C {
        Mat2C { a: self.a + rhs.a, b: self.b + rhs.b, c: self.c + rhs.c, d: self.d + rhs.d }
    }
}

impl std::ops::Sub for Mat2C {
    type Output = Mat2C;
    fn sub(self, rhs: Mat2C) -> Mat2C {
        Mat2C { a: self.a - rhs.a, b: self.b - rhs.b, c: self.c - rhs.c, d: self.d - rhs.d }
    }
}

impl std::ops::Neg for Mat2C {
    type Output = Mat2C;
    fn neg(self) -> Mat2C {
        Mat2C { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }
}

impl std::ops::Mul for Mat2C {
    type Output = Mat2C;
    fn mul(self, rhs: Mat2C) -> Mat2C {
        Mat2C {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }
}

impl std::ops::Mul<f64> for Mat2C {
    type Output = Mat2C;
    fn mul(self, rhs: f64) -> Mat2C {
        self.scale(Complex::new(rhs, 0.0))
    }
}

/// An element of SU(2).  The wrapped matrix is expected to satisfy
/// U†U = 1 and det U = 1 up to numerical tolerance; [`UnitaryGate::new`]
/// enforces this, while `unchecked` is for matrices that are unitary by
/// construction (closed-form exponentials, products of gates).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitaryGate {
    pub m: Mat2C,
}

impl UnitaryGate {
    pub const IDENTITY: UnitaryGate = UnitaryGate { m: Mat2C::IDENTITY };

    /// Wrap a matrix, verifying unitarity and unit determinant to within
    /// the algebraic tolerance.
    pub fn new(m: Mat2C) -> Result<Self> {
        let defect = m.unitarity_defect();
        let det_err = (m.det() - C_ONE).norm();
        if defect > tol::ALGEBRAIC || det_err > tol::ALGEBRAIC {
            return Err(Error::Internal(format!(
                "matrix is not in SU(2): unitarity defect {defect:.3e}, det error {det_err:.3e}"
            )));
        }
        Ok(UnitaryGate { m })
    }

    /// Wrap without checking; the caller guarantees membership in SU(2).
    pub fn unchecked(m: Mat2C) -> Self {
        UnitaryGate { m }
    }

    pub fn adjoint(&self) -> UnitaryGate {
        UnitaryGate { m: self.m.adjoint() }
    }

    /// Gate fidelity |Tr(U†V)| / 2 ∈ [0, 1], insensitive to a global
    /// phase (in SU(2): a global sign) of either argument.
    pub fn fidelity(&self, other: &UnitaryGate) -> f64 {
        (self.adjoint().m * other.m).trace().norm() / 2.0
    }

    /// Frobenius distance to the closer of ±other.
    pub fn distance_up_to_sign(&self, other: &UnitaryGate) -> f64 {
        self.m.distance(&other.m).min(self.m.distance(&-other.m))
    }

    /// Rescale by det^{−1/2} (principal branch) to reduce accumulated
    /// determinant drift after long products.
    pub fn unit_determinant(&self) -> UnitaryGate {
        let s = self.m.det().sqrt();
        if s.norm() < 1e-300 {
            return *self;
        }
        UnitaryGate { m: self.m.scale(s.inv()) }
    }

    /// Conjugation Y† · self · Y.
    pub fn conjugated_by(&self, y: &UnitaryGate) -> UnitaryGate {
        UnitaryGate { m: y.m.adjoint() * self.m * y.m }
    }
}

impl std::ops::Mul for UnitaryGate {
    type Output = UnitaryGate;
    fn mul(self, rhs: UnitaryGate) -> UnitaryGate {
        UnitaryGate { m: self.m * rhs.m }
    }
}

impl std::ops::Neg for UnitaryGate {
    type Output = UnitaryGate;
    fn neg(self) -> UnitaryGate {
        UnitaryGate { m: -self.m }
    }
}

/// An su(2) element X = −i (x σx + y σy + z σz), stored by its real
/// coefficient vector.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AlgebraElement {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl AlgebraElement {
    pub const ZERO: AlgebraElement = AlgebraElement { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        AlgebraElement { x, y, z }
    }

    /// su(2) norm |c| = (1/√2)·‖X‖_F.
    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Matrix form −i(c·σ) = [[−i z, −i x − y], [−i x + y, i z]].
    pub fn matrix(&self) -> Mat2C {
        Mat2C {
            a: Complex::new(0.0, -self.z),
            b: Complex::new(-self.y, -self.x),
            c: Complex::new(self.y, -self.x),
            d: Complex::new(0.0, self.z),
        }
    }

    /// Recover the coefficient vector from a matrix, requiring it to be
    /// traceless anti-Hermitian (i.e. genuinely in su(2)) to within the
    /// algebraic tolerance.
    pub fn from_matrix(m: &Mat2C) -> Result<Self> {
        let elem = AlgebraElement { x: -m.b.im, y: -m.b.re, z: -m.a.im };
        let defect = m.distance(&elem.matrix());
        if defect > tol::ALGEBRAIC {
            return Err(Error::Internal(format!(
                "matrix is not in su(2): reconstruction defect {defect:.3e}"
            )));
        }
        Ok(elem)
    }

    /// Lie bracket [X, Y], which for X = −i a·σ, Y = −i b·σ equals
    /// −i (2 a×b)·σ.
    pub fn bracket(&self, other: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            x: 2.0 * (self.y * other.z - self.z * other.y),
            y: 2.0 * (self.z * other.x - self.x * other.z),
            z: 2.0 * (self.x * other.y - self.y * other.x),
        }
    }

    pub fn scaled(&self, s: f64) -> AlgebraElement {
        AlgebraElement { x: self.x * s, y: self.y * s, z: self.z * s }
    }
}

impl std::ops::Add for AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: AlgebraElement) -> AlgebraElement {
        AlgebraElement { x: self.x + rhs.x, y: self.y + rhs.y, z: self.z + rhs.z }
    }
}

impl std::ops::Sub for AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: AlgebraElement) -> AlgebraElement {
        AlgebraElement { x: self.x - rhs.x, y: self.y - rhs.y, z: self.z - rhs.z }
    }
}

impl std::ops::Neg for AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement { x: -self.x, y: -self.y, z: -self.z }
    }
}

/// sin(z)/z with a series fallback for small |z|; the cutoff keeps the
/// truncation error of 1 − z²/6 below f64 roundoff.
fn sinc(z: f64) -> f64 {
    if z.abs() < 1e-8 {
        1.0 - z * z / 6.0
    } else {
        z.sin() / z
    }
}

/// Closed-form exponential e^{X t} for X ∈ su(2), using X² = −‖X‖²·1:
/// e^{Xt} = cos(‖X‖t)·1 + t·sinc(‖X‖t)·X.
pub fn expm_algebra(x: &AlgebraElement, t: f64) -> UnitaryGate {
    let r = x.norm();
    let phase = r * t;
    let cos_part = Mat2C::IDENTITY * phase.cos();
    let sin_part = x.matrix() * (t * sinc(phase));
    UnitaryGate::unchecked(cos_part + sin_part)
}

/// Closed-form exponential of F = i c σz − i d σy over time t:
///
///   e^{Ft} = [[cos(rt) + i(c/r)sin(rt),  −(d/r)sin(rt)],
///             [(d/r)sin(rt),              cos(rt) − i(c/r)sin(rt)]]
///
/// with r = √(c² + d²).  This is the generator shape of the canonical
/// rotating-frame factors; it equals `expm_algebra` of the coefficient
/// vector (0, d, −c) and is kept as an independent expression for
/// cross-checks.
pub fn expm_zy(c: f64, d: f64, t: f64) -> UnitaryGate {
    let r = (c * c + d * d).sqrt();
    let phase = r * t;
    let cos = phase.cos();
    let s = t * sinc(phase); // sin(rt)/r, stable as r → 0
    UnitaryGate::unchecked(Mat2C {
        a: Complex::new(cos, c * s),
        b: Complex::new(-d * s, 0.0),
        c: Complex::new(d * s, 0.0),
        d: Complex::new(cos, -c * s),
    })
}

/// Diagonal gate e^{i ω t σz} = diag(e^{iωt}, e^{−iωt}).
pub fn rot_z_phase(omega_t: f64) -> UnitaryGate {
    UnitaryGate::unchecked(Mat2C {
        a: Complex::from_polar(1.0, omega_t),
        b: C_ZERO,
        c: C_ZERO,
        d: Complex::from_polar(1.0, -omega_t),
    })
}

/// Eigen-decomposition U = S·diag(e^{iφ}, e^{−iφ})·S† of an SU(2) element.
#[derive(Debug, Clone, Copy)]
pub struct EigenDecomp2 {
    /// Diagonalizing SU(2) matrix; the identity when `degenerate`.
    pub s: Mat2C,
    /// Eigenphase in [0, π].
    pub phi: f64,
    /// True when U = ±1 to within [`tol::EIG_DEGENERATE`], in which case
    /// every basis diagonalizes and S = 1 is reported.
    pub degenerate: bool,
}

/// Deterministic eigen-decomposition of U ∈ SU(2).
///
/// φ = arccos(Re Tr U / 2) ∈ [0, π].  Away from the degenerate points
/// U = ±1, the rotation axis n of U = cos φ − i sin φ (n·σ) is read off
/// the anti-Hermitian traceless part of U, whose entries carry the axis
/// directly; the e^{iφ} eigenvector is then the +1 eigenvector of
/// (−n)·σ in closed form.  This keeps the eigenvector error at the
/// O(ε/sin φ) floor set by the input itself — an adjugate-column
/// construction would square that conditioning near the caps.  The
/// vector is phase-fixed so that its first component of magnitude
/// > 1e−12 is real positive.  S = [[v₁, −v̄₂], [v₂, v̄₁]] ∈ SU(2).
pub fn eig_su2(u: &UnitaryGate) -> EigenDecomp2 {
    let half_trace = (u.m.trace().re / 2.0).clamp(-1.0, 1.0);
    let phi = half_trace.acos();

    let plus = u.m.distance(&Mat2C::IDENTITY);
    let minus = u.m.distance(&-Mat2C::IDENTITY);
    if plus < tol::EIG_DEGENERATE || minus < tol::EIG_DEGENERATE {
        return EigenDecomp2 { s: Mat2C::IDENTITY, phi, degenerate: true };
    }

    // sin φ · n, symmetrized over both off-diagonal entries (the exact
    // anti-Hermitian traceless projection of the stored matrix).
    let mx = -0.5 * (u.m.b.im + u.m.c.im);
    let my = 0.5 * (u.m.c.re - u.m.b.re);
    let mz = -0.5 * (u.m.a.im - u.m.d.im);
    let norm = (mx * mx + my * my + mz * mz).sqrt();
    let (ax, ay, az) = (-mx / norm, -my / norm, -mz / norm);
    // +1 eigenvector of a·σ, branch chosen to avoid cancellation in
    // 1 ± a_z.
    let (mut v1, mut v2) = if az >= 0.0 {
        let w = (2.0 * (1.0 + az)).sqrt();
        (Complex::new((1.0 + az) / w, 0.0), Complex::new(ax / w, ay / w))
    } else {
        let w = (2.0 * (1.0 - az)).sqrt();
        (Complex::new(ax / w, -ay / w), Complex::new((1.0 - az) / w, 0.0))
    };

    // Phase convention: rotate so the first component larger than 1e−12
    // becomes real positive, making the decomposition reproducible.
    let pivot = if v1.norm() > 1e-12 { v1 } else { v2 };
    let phase = Complex::from_polar(1.0, -pivot.arg());
    v1 *= phase;
    v2 *= phase;
    let scale = 1.0 / (v1.norm_sqr() + v2.norm_sqr()).sqrt();
    v1 *= scale;
    v2 *= scale;

    let s = Mat2C { a: v1, b: -v2.conj(), c: v2, d: v1.conj() };
    EigenDecomp2 { s, phi, degenerate: false }
}

/// Control field u ↦ generator X = −i γ₁ (u·σ) of the first system.
pub fn field_to_algebra(u: [f64; 3], gamma1: f64) -> AlgebraElement {
    AlgebraElement { x: gamma1 * u[0], y: gamma1 * u[1], z: gamma1 * u[2] }
}

/// Inverse of [`field_to_algebra`]: u = c / γ₁.
pub fn algebra_to_field(x: &AlgebraElement, gamma1: f64) -> [f64; 3] {
    [x.x / gamma1, x.y / gamma1, x.z / gamma1]
}

#[cfg(test)]
mod tests {
    use super::*;

    const SEEDED: [AlgebraElement; 4] = [
        AlgebraElement { x: 0.3, y: -1.2, z: 0.7 },
        AlgebraElement { x: -2.0, y: 0.01, z: 0.0 },
        AlgebraElement { x: 0.0, y: 0.0, z: 3.5 },
        AlgebraElement { x: 1e-9, y: -1e-9, z: 1e-10 },
    ];

    #[test]
    fn pauli_products_follow_quaternion_relations() {
        let i = C_I;
        assert!(
            (PAULI_X * PAULI_Y).approx_eq(&PAULI_Z.scale(i), tol::ALGEBRAIC),
            "σx·σy must equal i·σz"
        );
        assert!(
            (PAULI_Y * PAULI_Z).approx_eq(&PAULI_X.scale(i), tol::ALGEBRAIC),
            "σy·σz must equal i·σx"
        );
        assert!(
            (PAULI_Z * PAULI_X).approx_eq(&PAULI_Y.scale(i), tol::ALGEBRAIC),
            "σz·σx must equal i·σy"
        );
        for p in [PAULI_X, PAULI_Y, PAULI_Z] {
            assert!((p * p).approx_eq(&Mat2C::IDENTITY, tol::ALGEBRAIC), "σ² must be 1");
        }
    }

    #[test]
    fn algebra_matrix_roundtrip_is_exact() {
        for elem in SEEDED {
            let back = AlgebraElement::from_matrix(&elem.matrix())
                .expect("matrix() must produce a valid su(2) matrix");
            assert_eq!(elem, back, "coefficient extraction must invert matrix()");
        }
    }

    #[test]
    fn from_matrix_rejects_non_algebra_input() {
        assert!(
            AlgebraElement::from_matrix(&PAULI_X).is_err(),
            "σx is Hermitian, not anti-Hermitian, and must be rejected"
        );
    }

    #[test]
    fn su2_norm_matches_scaled_frobenius_norm() {
        for elem in SEEDED {
            let by_frobenius = elem.matrix().frobenius_norm() / std::f64::consts::SQRT_2;
            assert!(
                (elem.norm() - by_frobenius).abs() <= tol::ALGEBRAIC * (1.0 + elem.norm()),
                "|c| must equal ‖X‖_F/√2, got {} vs {}",
                elem.norm(),
                by_frobenius
            );
        }
    }

    #[test]
    fn bracket_matches_matrix_commutator() {
        let a = SEEDED[0];
        let b = SEEDED[1];
        let lhs = a.bracket(&b).matrix();
        let rhs = a.matrix() * b.matrix() - b.matrix() * a.matrix();
        assert!(lhs.approx_eq(&rhs, tol::ALGEBRAIC), "bracket must match XY − YX");
    }

    #[test]
    fn exponential_is_special_unitary() {
        for elem in SEEDED {
            for t in [0.0, 0.1, 1.0, 7.3] {
                let u = expm_algebra(&elem, t);
                assert!(
                    u.m.unitarity_defect() <= tol::ALGEBRAIC,
                    "e^(Xt) must be unitary for c = {elem:?}, t = {t}"
                );
                assert!(
                    (u.m.det() - C_ONE).norm() <= tol::ALGEBRAIC,
                    "e^(Xt) must have det 1 for c = {elem:?}, t = {t}"
                );
            }
        }
    }

    #[test]
    fn exponential_obeys_one_parameter_group_law() {
        for elem in SEEDED {
            let u = expm_algebra(&elem, 0.4) * expm_algebra(&elem, 0.9);
            let v = expm_algebra(&elem, 1.3);
            assert!(
                u.m.approx_eq(&v.m, tol::GROUP_LAW),
                "e^(0.4X)·e^(0.9X) must equal e^(1.3X) for c = {elem:?}"
            );
        }
    }

    #[test]
    fn zy_exponential_agrees_with_generic_exponential() {
        for (c, d, t) in [(0.7, -0.3, 1.9), (0.0, 0.0, 5.0), (-2.0, 1e-12, 0.3), (3.0, 4.0, 0.25)]
        {
            // F = i c σz − i d σy has coefficient vector (0, d, −c).
            let by_algebra = expm_algebra(&AlgebraElement::new(0.0, d, -c), t);
            let by_entries = expm_zy(c, d, t);
            assert!(
                by_entries.m.approx_eq(&by_algebra.m, tol::ALGEBRAIC),
                "closed entries must match the generic exponential for c={c}, d={d}, t={t}"
            );
        }
    }

    #[test]
    fn small_angle_exponential_is_continuous_across_the_guard() {
        let x = AlgebraElement::new(1.0, 0.0, 0.0);
        let below = expm_algebra(&x, 0.999e-8);
        let above = expm_algebra(&x, 1.001e-8);
        assert!(
            below.m.distance(&above.m) < 1e-10,
            "series and trig branches must agree near the cutoff"
        );
    }

    #[test]
    fn rot_z_phase_matches_exponential_of_sigma_z() {
        // e^{iωtσz} = e^{Xt} with X = iωσz = −i(−ω)σz.
        let omega = 0.83;
        let t = 2.4;
        let direct = rot_z_phase(omega * t);
        let by_exp = expm_algebra(&AlgebraElement::new(0.0, 0.0, -omega), t);
        assert!(
            direct.m.approx_eq(&by_exp.m, tol::ALGEBRAIC),
            "diagonal phase gate must equal exp(iωtσz)"
        );
    }

    #[test]
    fn eig_reconstructs_generic_gates() {
        for elem in SEEDED[..3].iter() {
            let u = expm_algebra(elem, 1.1);
            let dec = eig_su2(&u);
            assert!(!dec.degenerate, "generic gate must not be flagged degenerate");
            let lambda = Mat2C {
                a: Complex::from_polar(1.0, dec.phi),
                b: C_ZERO,
                c: C_ZERO,
                d: Complex::from_polar(1.0, -dec.phi),
            };
            let rebuilt = dec.s * lambda * dec.s.adjoint();
            assert!(
                rebuilt.approx_eq(&u.m, 1e-10),
                "S·Λ·S† must reconstruct the gate for c = {elem:?}"
            );
            assert!(
                (dec.s.det() - C_ONE).norm() <= 1e-10,
                "diagonalizer must be special unitary"
            );
        }
    }

    #[test]
    fn eig_flags_plus_and_minus_identity() {
        let plus = UnitaryGate::IDENTITY;
        let minus = UnitaryGate::unchecked(-Mat2C::IDENTITY);
        assert!(eig_su2(&plus).degenerate, "identity must be degenerate");
        assert!(eig_su2(&minus).degenerate, "−identity must be degenerate");
        assert!((eig_su2(&plus).phi - 0.0).abs() <= tol::ALGEBRAIC);
        assert!((eig_su2(&minus).phi - std::f64::consts::PI).abs() <= tol::ALGEBRAIC);
    }

    #[test]
    fn eig_is_deterministic() {
        let u = expm_algebra(&SEEDED[0], 0.77);
        let d1 = eig_su2(&u);
        let d2 = eig_su2(&u);
        assert_eq!(d1.s, d2.s, "same input must give bit-identical diagonalizer");
    }

    #[test]
    fn fidelity_ignores_global_sign() {
        let u = expm_algebra(&SEEDED[0], 0.9);
        let f = u.fidelity(&-u);
        assert!((f - 1.0).abs() <= tol::ALGEBRAIC, "fidelity with −U must be 1, got {f}");
    }

    #[test]
    fn checked_constructor_rejects_non_unitary_input() {
        let bad = Mat2C::IDENTITY * 1.5;
        assert!(UnitaryGate::new(bad).is_err(), "1.5·identity is not unitary");
        assert!(UnitaryGate::new(Mat2C::IDENTITY).is_ok());
    }

    #[test]
    fn field_maps_invert_each_other() {
        let u = [0.4, -0.2, 0.9];
        let gamma1 = 2.5;
        let back = algebra_to_field(&field_to_algebra(u, gamma1), gamma1);
        for axis in 0..3 {
            assert!((u[axis] - back[axis]).abs() <= tol::ALGEBRAIC);
        }
    }
}
