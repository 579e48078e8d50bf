//! Simulated randomized benchmarking of the spin-1 gate set.
//!
//! The benchmark state ρ₀ = 1₄/4 + (ε_H/2)σz⊗1 + (ε_C/2)1⊗σz is evolved
//! by a random Clifford sequence plus its exact group-inverse recovery
//! gate, and the coefficient of σz⊗1 is read out.  Because the readout
//! traces out spin 2, the whole signal reduces to the spin-1 propagator
//! G₁ of the sequence:
//!
//! &nbsp;&nbsp; signal ∝ ε_H · Tr(G₁ σz G₁† σz)/2,
//!
//! the 1⊗σz term contributes Tr(σz) = 0, and ε_H cancels when sequences
//! are normalized to the length-0 baseline.  The decay of the normalized
//! mean is fitted to F̄(r) = (1 − d_if)(1 − 2ε_g)^r.
//!
//! Gates come from a realizer: either the class unitaries themselves
//! (ideal), a synthetic error model, or synthesized minimum-time pulses
//! propagated through the independent integrator (with optional actuator
//! distortion).  All randomness flows from one seed through per-sequence
//! child seeds, so runs are bit-reproducible regardless of scheduling.

use crate::certificate::parse_rational;
use crate::field::{ControlField, DistortionModel};
use crate::orbit::rotation_axis;
use crate::sim::propagate_distorted;
use crate::solver::{solve_rotation, RotationTarget, SolveOptions, SolveRequest};
use crate::su2::{UnitaryGate, PAULI_Z};
use crate::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Phase-insensitive equality threshold for class lookup and dedup.
const LOOKUP_FIDELITY: f64 = 1.0 - 1e-9;

/// The 24-element single-spin Clifford group with its multiplication
/// and inversion tables.
pub struct CliffordGroup {
    pub elements: Vec<UnitaryGate>,
    product: Vec<usize>,
    inverse: Vec<usize>,
    identity: usize,
}

fn lookup(elements: &[UnitaryGate], g: &UnitaryGate) -> Option<usize> {
    elements.iter().position(|e| e.fidelity(g) > LOOKUP_FIDELITY)
}

impl CliffordGroup {
    /// Build the group from the pulse alphabet: half-turn generators
    /// P = e^{±iπ/2·V/…} for V ∈ {1, σx, σy, σz} and quarter-turn
    /// generators C = e^{±iπ/4·Q} for Q ∈ {σx, σy, σz}.  The literal
    /// P·C products cover 12 classes; closing under multiplication
    /// yields the full group of exactly 24.
    pub fn new() -> Self {
        use crate::su2::{expm_algebra, AlgebraElement};
        let axes = [
            AlgebraElement { x: 1.0, y: 0.0, z: 0.0 },
            AlgebraElement { x: 0.0, y: 1.0, z: 0.0 },
            AlgebraElement { x: 0.0, y: 0.0, z: 1.0 },
        ];
        // e^{−i(θ/2)n·σ} = expm_algebra(n/2, θ) in the −i·c·σ convention.
        let mut p_gates = vec![UnitaryGate::IDENTITY];
        let mut c_gates = Vec::new();
        for axis in &axes {
            let half = AlgebraElement { x: axis.x / 2.0, y: axis.y / 2.0, z: axis.z / 2.0 };
            for sign in [1.0f64, -1.0] {
                p_gates.push(expm_algebra(&half, sign * std::f64::consts::PI));
                c_gates.push(expm_algebra(&half, sign * std::f64::consts::FRAC_PI_2));
            }
        }
        let mut elements: Vec<UnitaryGate> = Vec::new();
        for p in &p_gates {
            for c in &c_gates {
                let g = *p * *c;
                if lookup(&elements, &g).is_none() {
                    elements.push(g);
                }
            }
        }
        // Close under multiplication.
        loop {
            let mut added = false;
            let snapshot = elements.clone();
            for a in &snapshot {
                for b in &snapshot {
                    let g = *a * *b;
                    if lookup(&elements, &g).is_none() {
                        elements.push(g);
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        assert_eq!(elements.len(), 24, "single-spin Clifford closure must have 24 classes");
        let n = elements.len();
        let mut product = vec![0usize; n * n];
        let mut inverse = vec![0usize; n];
        for i in 0..n {
            for j in 0..n {
                let g = elements[i] * elements[j];
                product[i * n + j] =
                    lookup(&elements, &g).expect("closure guarantees products stay in the table");
            }
            inverse[i] = lookup(&elements, &elements[i].adjoint())
                .expect("groups contain their inverses");
        }
        let identity =
            lookup(&elements, &UnitaryGate::IDENTITY).expect("identity class present");
        CliffordGroup { elements, product, inverse, identity }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Class index of elements[i]·elements[j].
    pub fn product_index(&self, i: usize, j: usize) -> usize {
        self.product[i * self.len() + j]
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn identity_index(&self) -> usize {
        self.identity
    }

    pub fn index_of(&self, g: &UnitaryGate) -> Option<usize> {
        lookup(&self.elements, g)
    }
}

impl Default for CliffordGroup {
    fn default() -> Self {
        Self::new()
    }
}

/// Convenience: the 24 class representatives.
pub fn clifford_table() -> Vec<UnitaryGate> {
    CliffordGroup::new().elements
}

/// How a class gate is physically produced.
pub enum Realization {
    /// Apply this unitary directly (ideal or synthetic error models).
    Instant(UnitaryGate),
    /// Play this pulse through the propagator (distortion applies).
    Pulse(ControlField),
}

/// Benchmark configuration.  `gamma` and `n_steps_per_pulse` only
/// matter for pulse realizations.
#[derive(Debug, Clone)]
pub struct RbConfig {
    pub lengths: Vec<usize>,
    pub sequences_per_length: usize,
    pub distortion: DistortionModel,
    pub seed: u64,
    pub gamma: f64,
    pub n_steps_per_pulse: usize,
}

impl RbConfig {
    pub fn new(lengths: Vec<usize>, seed: u64) -> Self {
        RbConfig {
            lengths,
            sequences_per_length: 32,
            distortion: DistortionModel::none(),
            seed,
            gamma: 0.2514,
            n_steps_per_pulse: 2000,
        }
    }
}

/// Benchmark outcome: per-length normalized means with standard errors
/// and the fitted decay parameters.
#[derive(Debug, Clone)]
pub struct RbResult {
    pub lengths: Vec<usize>,
    pub means: Vec<f64>,
    pub stderrs: Vec<f64>,
    /// Fitted state-preparation/readout offset.
    pub d_if: f64,
    /// Fitted per-gate error.
    pub epsilon_g: f64,
    /// Root-mean-square misfit of F̄(r) against the means.
    pub fit_residual: f64,
    /// True when the data do not decay and the fit degenerates.
    pub degenerate_fit: bool,
}

fn kahan_mean(xs: &[f64]) -> f64 {
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for &x in xs {
        let y = x - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum / xs.len() as f64
}

/// Readout reduction: coefficient decay Tr(G σz G† σz)/2 of one
/// spin-1 sequence propagator.
fn sequence_signal(g: &UnitaryGate) -> f64 {
    let conj = g.m * PAULI_Z * g.m.adjoint() * PAULI_Z;
    0.5 * conj.trace().re
}

/// Least-squares fit of F̄(r) = (1 − d_if)(1 − 2ε_g)^r in the log
/// domain.  Returns (d_if, ε_g, rms residual, degenerate flag);
/// non-decaying data yield ε_g = 0 and the flag set.
pub fn fit_decay(lengths: &[usize], means: &[f64]) -> (f64, f64, f64, bool) {
    let pts: Vec<(f64, f64)> = lengths
        .iter()
        .zip(means)
        .filter(|(_, &m)| m > 0.0)
        .map(|(&r, &m)| (r as f64, m.ln()))
        .collect();
    let degenerate;
    let (intercept, slope) = if pts.len() < 2 {
        degenerate = true;
        (pts.first().map(|p| p.1).unwrap_or(0.0), 0.0)
    } else {
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let denom = n * sxx - sx * sx;
        if denom.abs() < f64::EPSILON {
            degenerate = true;
            (sy / n, 0.0)
        } else {
            let slope = (n * sxy - sx * sy) / denom;
            let intercept = (sy - slope * sx) / n;
            if slope >= 0.0 {
                degenerate = true;
                (sy / n, 0.0)
            } else {
                degenerate = false;
                (intercept, slope)
            }
        }
    };
    let epsilon_g = ((1.0 - slope.exp()) / 2.0).clamp(0.0, 0.5);
    let d_if = (1.0 - intercept.exp()).clamp(0.0, 1.0);
    let model = |r: f64| (1.0 - d_if) * (1.0 - 2.0 * epsilon_g).powf(r);
    let mse = lengths
        .iter()
        .zip(means)
        .map(|(&r, &m)| (model(r as f64) - m).powi(2))
        .sum::<f64>()
        / lengths.len().max(1) as f64;
    (d_if, epsilon_g, mse.sqrt(), degenerate)
}

/// Run the benchmark: realize each class once, draw
/// `sequences_per_length` random sequences per length, close each with
/// the exact inverse class, normalize to the length-0 baseline, and
/// fit the decay.
pub fn run_rb<F>(config: &RbConfig, realizer: F) -> Result<RbResult>
where
    F: Fn(usize, &UnitaryGate) -> Realization + Sync,
{
    if config.lengths.is_empty() || config.sequences_per_length == 0 {
        return Err(Error::Internal(
            "benchmark needs at least one length and one sequence".into(),
        ));
    }
    let group = CliffordGroup::new();
    let realized: Vec<UnitaryGate> = group
        .elements
        .par_iter()
        .enumerate()
        .map(|(i, class)| match realizer(i, class) {
            Realization::Instant(g) => g,
            Realization::Pulse(field) => {
                propagate_distorted(
                    &field,
                    config.gamma,
                    config.n_steps_per_pulse,
                    &config.distortion,
                )
                .u1
            }
        })
        .collect();
    // Length-0 baseline: the recovery of an empty sequence is the
    // identity class.
    let baseline = sequence_signal(&realized[group.identity_index()]);
    if baseline <= 0.0 {
        return Err(Error::Internal(format!(
            "length-0 baseline signal must be positive, got {baseline}"
        )));
    }
    // Deterministic child seeds, drawn in a fixed order.
    let mut master = ChaCha8Rng::seed_from_u64(config.seed);
    let jobs: Vec<(usize, u64)> = config
        .lengths
        .iter()
        .enumerate()
        .flat_map(|(li, _)| {
            (0..config.sequences_per_length)
                .map(|_| (li, master.next_u64()))
                .collect::<Vec<_>>()
        })
        .collect();
    let signals: Vec<f64> = jobs
        .par_iter()
        .map(|&(li, seed)| {
            let r = config.lengths[li];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut composition = group.identity_index();
            let mut g = UnitaryGate::IDENTITY;
            for _ in 0..r {
                let i = rng.gen_range(0..group.len());
                composition = group.product_index(i, composition);
                g = realized[i] * g;
            }
            let recovery = group.inverse_index(composition);
            g = realized[recovery] * g;
            sequence_signal(&g) / baseline
        })
        .collect();
    let mut means = Vec::with_capacity(config.lengths.len());
    let mut stderrs = Vec::with_capacity(config.lengths.len());
    for chunk in signals.chunks(config.sequences_per_length) {
        let mean = kahan_mean(chunk);
        let var = chunk.iter().map(|s| (s - mean).powi(2)).sum::<f64>()
            / (chunk.len().saturating_sub(1).max(1)) as f64;
        means.push(mean);
        stderrs.push((var / chunk.len() as f64).sqrt());
    }
    let (d_if, epsilon_g, fit_residual, degenerate_fit) = fit_decay(&config.lengths, &means);
    Ok(RbResult {
        lengths: config.lengths.clone(),
        means,
        stderrs,
        d_if,
        epsilon_g,
        fit_residual,
        degenerate_fit,
    })
}

/// Realizer that plays every class perfectly.
pub fn ideal_realizer() -> impl Fn(usize, &UnitaryGate) -> Realization + Sync {
    |_, class| Realization::Instant(*class)
}

/// Axis and rotation angle of a gate, with the representative sign
/// normalized so the angle lies in [0, π].  Returns None for the
/// identity class.
pub fn rotation_axis_angle(g: &UnitaryGate) -> Option<([f64; 3], f64)> {
    let cos_half = (g.m.trace().re / 2.0).clamp(-1.0, 1.0);
    let gate = if cos_half < 0.0 { -*g } else { *g };
    let cos_half = cos_half.abs();
    let theta = 2.0 * cos_half.acos();
    if theta < 1e-9 {
        return None;
    }
    let axis = rotation_axis(&gate)?;
    Some((axis, theta))
}

/// Snap a float in (0, 2) to a small exact fraction when one matches to
/// 1e−9 (p/q with q ≤ 12), falling back to the exact binary value.
fn snap_ratio(x: f64) -> BigRational {
    for den in 1..=12i64 {
        let num = (x * den as f64).round() as i64;
        if num > 0 && (x - num as f64 / den as f64).abs() < 1e-9 {
            return BigRational::new(BigInt::from(num), BigInt::from(den));
        }
    }
    BigRational::from_float(x).expect("finite angle ratio")
}

/// Realizer that synthesizes each non-identity class as a minimum-time
/// selective pulse (identity classes cost zero time).
pub fn toc_realizer(
    gamma: BigRational,
    gamma1: f64,
    bound_d: f64,
) -> impl Fn(usize, &UnitaryGate) -> Realization + Sync {
    let opts = SolveOptions::default();
    move |_, class| match rotation_axis_angle(class) {
        None => Realization::Instant(UnitaryGate::IDENTITY),
        Some((axis, theta)) => {
            let target = RotationTarget::new(axis, theta)
                .expect("Clifford classes have valid axis-angle forms");
            let mut req = SolveRequest::normalized(gamma.clone(), target)
                .with_q_exact(snap_ratio(theta / std::f64::consts::PI));
            req.gamma1 = gamma1;
            req.bound_d = bound_d;
            let mut solver_opts = opts.clone();
            solver_opts.with_certificate = false;
            let sol = solve_rotation(&req, &solver_opts)
                .expect("Clifford rotations are solvable selective targets");
            Realization::Pulse(ControlField::from_solution(&sol))
        }
    }
}

/// Helper used by tests and examples: a realizer that multiplies every
/// class by a fixed small rotation about a per-class random axis —
/// the twirl of a rotation by angle φ is depolarizing with
/// ε_g = (1 − cos φ)/3 regardless of the axes.
pub fn perturbed_realizer(
    phi: f64,
    seed: u64,
) -> impl Fn(usize, &UnitaryGate) -> Realization + Sync {
    use crate::su2::{expm_algebra, AlgebraElement};
    let group = CliffordGroup::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let errors: Vec<UnitaryGate> = (0..group.len())
        .map(|_| {
            let v: [f64; 3] = [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ];
            let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt().max(1e-3);
            let axis = AlgebraElement {
                x: v[0] / (2.0 * norm),
                y: v[1] / (2.0 * norm),
                z: v[2] / (2.0 * norm),
            };
            expm_algebra(&axis, phi)
        })
        .collect();
    move |i, class| Realization::Instant(errors[i] * *class)
}

/// Parse a benchmark ratio argument ("p/q" or decimal) — re-exported
/// for front ends so the exact-rational path stays uniform.
pub fn parse_gamma(text: &str) -> Result<BigRational> {
    parse_rational(text)
}
