//! Numerical minimum-time search for arbitrary target pairs.
//!
//! The extremal trajectories reachable at a fixed normalized time t form
//! a two-parameter family: the canonical pair Ũ₁, Ũ₂ indexed by the
//! drift frequency ω and the axis component a ∈ [−1, 1] (b = √(1−a²) ≥ 0
//! without loss of generality, and ±b give conjugate pairs on the same
//! orbit).  Mapping that family through the conjugation invariant Ψ
//! yields a surface in orbit space; the minimum time for a target pair
//! is the first t at which the surface touches Ψ(target) or
//! Ψ(−target).  This module scans t on a grid, measures the gap between
//! surface and target with a coarse (ω, a) grid polished by a
//! Nelder–Mead simplex, detects gap dips, and refines the first dip
//! that closes below tolerance by a ternary search in t.
//!
//! This path is numerical only: it makes no optimality claim beyond the
//! scan and refinement resolutions, and it produces no certificate.

use crate::orbit::{orbit_distance, orbit_point, solve_conjugator, GatePair, OrbitPoint};
use crate::pmp::CanonicalParams;
use crate::su2::UnitaryGate;
use crate::{tol, Error, Result};
use rayon::prelude::*;

/// Search controls for [`reach_orbit`]; the defaults suit desk-scale
/// runs with normalized times up to a few multiples of π.
#[derive(Debug, Clone)]
pub struct ReachOptions {
    /// Upper end of the scanned normalized-time window.
    pub t_max: f64,
    /// Number of time-grid points on (0, t_max].
    pub n_t: usize,
    /// Scanned drift-frequency interval.
    pub omega_range: (f64, f64),
    /// Coarse grid resolution in ω and in a.
    pub n_omega: usize,
    pub n_a: usize,
    /// Number of best coarse cells polished by the simplex.
    pub top_k: usize,
    /// Gap level below which a local minimum counts as a candidate dip.
    pub dip_threshold: f64,
    /// Gap level at which a refined dip is accepted as an intersection.
    pub accept: f64,
    /// Width of the time bracket at which dip refinement stops.
    pub t_resolution: f64,
}

impl Default for ReachOptions {
    fn default() -> Self {
        ReachOptions {
            t_max: 8.0,
            n_t: 2000,
            omega_range: (-6.0, 6.0),
            n_omega: 64,
            n_a: 64,
            top_k: 6,
            dip_threshold: 0.02,
            accept: tol::ORBIT_ACCEPT,
            t_resolution: 1e-9,
        }
    }
}

/// Best extremal parameters found at one time: the orbit-space gap to
/// the target, the minimizing (ω, a), and which target sign was closer.
#[derive(Debug, Clone, Copy)]
pub struct ReachPoint {
    pub t: f64,
    pub omega: f64,
    pub a: f64,
    /// +1 if Ψ(target) was matched, −1 for Ψ(−target).
    pub sign: f64,
    pub distance: f64,
}

/// Gap profile over the scanned time grid.
#[derive(Debug, Clone)]
pub struct ReachScan {
    pub points: Vec<ReachPoint>,
}

/// A solution recovered on the numerical path: canonical parameters, the
/// matched sign, and the frame change Y with
/// sign·target = Y†·(canonical pair)·Y.
#[derive(Debug, Clone)]
pub struct GeneralSolution {
    pub gamma: f64,
    pub target: GatePair,
    pub t_min: f64,
    pub params: CanonicalParams,
    pub sign: f64,
    pub y: UnitaryGate,
    /// Worst per-component matrix distance of the realized pair to
    /// sign·target.
    pub residual: f64,
}

impl GeneralSolution {
    /// The laboratory pair Y†·(Ũ₁(t), Ũ₂(t))·Y actually produced.
    pub fn realized_pair(&self) -> GatePair {
        let (w1, w2) = self.params.trajectories(self.t_min);
        GatePair::new(w1, w2).conjugated_by(&self.y)
    }
}

/// Both target representatives mapped into orbit space once.
fn target_points(target: &GatePair) -> (OrbitPoint, OrbitPoint) {
    (orbit_point(target), orbit_point(&target.negated()))
}

/// Orbit gap of the canonical pair at (t, ω, a) against both target
/// representatives; returns (distance, closer sign).
fn gap_at(gamma: f64, targets: &(OrbitPoint, OrbitPoint), t: f64, omega: f64, a: f64) -> (f64, f64) {
    let a = a.clamp(-1.0, 1.0);
    let b = (1.0 - a * a).max(0.0).sqrt();
    let params = CanonicalParams { omega, a, b, gamma };
    let (w1, w2) = params.trajectories(t);
    let point = orbit_point(&GatePair::new(w1, w2));
    let d_plus = orbit_distance(&point, &targets.0);
    let d_minus = orbit_distance(&point, &targets.1);
    if d_plus <= d_minus {
        (d_plus, 1.0)
    } else {
        (d_minus, -1.0)
    }
}

/// Minimize a 2-variable function with a Nelder–Mead simplex.
fn simplex_min<F: Fn(&[f64; 2]) -> f64>(
    f: F,
    start: [f64; 2],
    step: [f64; 2],
    max_iter: usize,
    tol_diameter: f64,
    tol_spread: f64,
) -> ([f64; 2], f64) {
    let mut pts = [
        start,
        [start[0] + step[0], start[1]],
        [start[0], start[1] + step[1]],
    ];
    let mut vals = [f(&pts[0]), f(&pts[1]), f(&pts[2])];
    for _ in 0..max_iter {
        // Order the simplex: pts[0] best, pts[2] worst.
        let mut order = [0usize, 1, 2];
        order.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap());
        pts = [pts[order[0]], pts[order[1]], pts[order[2]]];
        vals = [vals[order[0]], vals[order[1]], vals[order[2]]];
        let diameter = pts[1..]
            .iter()
            .map(|p| (p[0] - pts[0][0]).hypot(p[1] - pts[0][1]))
            .fold(0.0f64, f64::max);
        if diameter < tol_diameter || vals[2] - vals[0] < tol_spread {
            break;
        }
        let centroid = [(pts[0][0] + pts[1][0]) / 2.0, (pts[0][1] + pts[1][1]) / 2.0];
        let reflect = [
            centroid[0] + (centroid[0] - pts[2][0]),
            centroid[1] + (centroid[1] - pts[2][1]),
        ];
        let f_reflect = f(&reflect);
        if f_reflect < vals[0] {
            let expand = [
                centroid[0] + 2.0 * (centroid[0] - pts[2][0]),
                centroid[1] + 2.0 * (centroid[1] - pts[2][1]),
            ];
            let f_expand = f(&expand);
            if f_expand < f_reflect {
                pts[2] = expand;
                vals[2] = f_expand;
            } else {
                pts[2] = reflect;
                vals[2] = f_reflect;
            }
        } else if f_reflect < vals[1] {
            pts[2] = reflect;
            vals[2] = f_reflect;
        } else {
            // Contract toward the better of the worst point and its
            // reflection; shrink the simplex if that fails too.
            let (toward, f_toward) = if f_reflect < vals[2] {
                (reflect, f_reflect)
            } else {
                (pts[2], vals[2])
            };
            let contract = [
                centroid[0] + 0.5 * (toward[0] - centroid[0]),
                centroid[1] + 0.5 * (toward[1] - centroid[1]),
            ];
            let f_contract = f(&contract);
            if f_contract < f_toward {
                pts[2] = contract;
                vals[2] = f_contract;
            } else {
                for i in 1..3 {
                    pts[i] = [
                        pts[0][0] + 0.5 * (pts[i][0] - pts[0][0]),
                        pts[0][1] + 0.5 * (pts[i][1] - pts[0][1]),
                    ];
                    vals[i] = f(&pts[i]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap()).unwrap();
    (pts[best], vals[best])
}

/// Smallest orbit gap over (ω, a) at a fixed time: coarse grid scan
/// followed by simplex polish of the best cells.
pub fn orbit_gap(
    gamma: f64,
    targets: &(OrbitPoint, OrbitPoint),
    t: f64,
    opts: &ReachOptions,
) -> ReachPoint {
    let (omega_lo, omega_hi) = opts.omega_range;
    let d_omega = (omega_hi - omega_lo) / (opts.n_omega.max(2) - 1) as f64;
    let d_a = 2.0 / (opts.n_a.max(2) - 1) as f64;
    let mut cells: Vec<(f64, [f64; 2])> = Vec::with_capacity(opts.n_omega * opts.n_a);
    for i in 0..opts.n_omega {
        let omega = omega_lo + d_omega * i as f64;
        for j in 0..opts.n_a {
            let a = -1.0 + d_a * j as f64;
            let (d, _) = gap_at(gamma, targets, t, omega, a);
            cells.push((d, [omega, a]));
        }
    }
    cells.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let mut best = (f64::INFINITY, [0.0f64, 0.0f64]);
    for (_, start) in cells.iter().take(opts.top_k.max(1)) {
        let objective = |p: &[f64; 2]| gap_at(gamma, targets, t, p[0], p[1]).0;
        let (p, d) = simplex_min(objective, *start, [0.5 * d_omega, 0.5 * d_a], 200, 1e-11, 1e-14);
        if d < best.0 {
            best = (d, p);
        }
    }
    let (distance, sign) = gap_at(gamma, targets, t, best.1[0], best.1[1]);
    ReachPoint { t, omega: best.1[0], a: best.1[1].clamp(-1.0, 1.0), sign, distance }
}

/// Evaluate the orbit gap over the whole time grid (parallel over t).
pub fn reach_scan(target: &GatePair, gamma: f64, opts: &ReachOptions) -> ReachScan {
    let targets = target_points(target);
    let points = (1..=opts.n_t)
        .into_par_iter()
        .map(|i| {
            let t = opts.t_max * i as f64 / opts.n_t as f64;
            orbit_gap(gamma, &targets, t, opts)
        })
        .collect();
    ReachScan { points }
}

/// Acceptance profile of a scan at a gap threshold (used to log the
/// weak monotonicity property; grid acceptance is not asserted).
pub fn acceptance_profile(scan: &ReachScan, threshold: f64) -> Vec<bool> {
    scan.points.iter().map(|p| p.distance < threshold).collect()
}

/// First normalized time at which the extremal surface reaches the
/// target's orbit (or the negated target's), refined to
/// `opts.t_resolution`.
///
/// Errors with [`Error::NotReached`] if no dip closes below
/// `opts.accept` on the scanned window — expected for unequal targets
/// as γ → 1, where minimum times diverge.
pub fn reach_orbit(target: &GatePair, gamma: f64, opts: &ReachOptions) -> Result<ReachPoint> {
    if !(gamma > 0.0) || gamma == 1.0 {
        return Err(Error::Internal(format!(
            "reachability search needs γ > 0, γ ≠ 1, got {gamma}"
        )));
    }
    let targets = target_points(target);
    // t = 0: only the identity pair is reachable.
    let identity_point = orbit_point(&GatePair::new(UnitaryGate::IDENTITY, UnitaryGate::IDENTITY));
    let d0 = orbit_distance(&identity_point, &targets.0)
        .min(orbit_distance(&identity_point, &targets.1));
    if d0 < opts.accept {
        return Ok(ReachPoint { t: 0.0, omega: 0.0, a: 0.0, sign: 1.0, distance: d0 });
    }
    let scan = reach_scan(target, gamma, opts);
    let gaps = &scan.points;
    let n = gaps.len();
    for i in 0..n {
        let d = gaps[i].distance;
        if d >= opts.dip_threshold {
            continue;
        }
        let left_ok = i == 0 || gaps[i - 1].distance >= d;
        let right_ok = i + 1 == n || gaps[i + 1].distance >= d;
        if !(left_ok && right_ok) {
            continue;
        }
        // Bracket the dip and shrink it with a ternary search on the
        // polished gap, which is V-shaped around a transversal
        // intersection.
        let mut lo = if i == 0 { 0.0 } else { gaps[i - 1].t };
        let mut hi = if i + 1 == n { gaps[i].t } else { gaps[i + 1].t };
        let mut best = gaps[i];
        // Refine-stage evaluation: the scan's coarse+polish pass, plus a
        // deeply converged simplex warm-started from the incumbent
        // optimum.  Chaining keeps the evaluation error varying smoothly
        // along t; the raw per-eval polish noise (~1e−8) over a shallow
        // V would otherwise displace the located minimum by
        // noise/slope, far beyond the requested time resolution.
        let deep_gap = |t: f64, seed: [f64; 2]| -> ReachPoint {
            let coarse = orbit_gap(gamma, &targets, t, opts);
            let objective = |p: &[f64; 2]| gap_at(gamma, &targets, t, p[0], p[1]).0;
            let (chained, d_chained) =
                simplex_min(&objective, seed, [1e-4, 1e-4], 500, 1e-13, 0.0);
            let (repolished, d_repolished) = simplex_min(
                &objective,
                [coarse.omega, coarse.a],
                [1e-6, 1e-6],
                500,
                1e-13,
                0.0,
            );
            let (p, d) = if d_chained <= d_repolished {
                (chained, d_chained)
            } else {
                (repolished, d_repolished)
            };
            if d < coarse.distance {
                let (distance, sign) = gap_at(gamma, &targets, t, p[0], p[1]);
                ReachPoint { t, omega: p[0], a: p[1].clamp(-1.0, 1.0), sign, distance }
            } else {
                coarse
            }
        };
        let mut iterations = 0;
        while hi - lo > opts.t_resolution && iterations < 120 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            let g1 = deep_gap(m1, [best.omega, best.a]);
            let g2 = deep_gap(m2, [best.omega, best.a]);
            if g1.distance < best.distance {
                best = g1;
            }
            if g2.distance < best.distance {
                best = g2;
            }
            if g1.distance <= g2.distance {
                hi = m2;
            } else {
                lo = m1;
            }
            iterations += 1;
        }
        if best.distance < opts.accept {
            return Ok(best);
        }
    }
    Err(Error::NotReached { t_max: opts.t_max })
}

/// Recover the frame change Y for an accepted reach point and package
/// the full numerical solution; verifies the realized pair against
/// sign·target within `tol_residual` (one re-polish retry).
pub fn reconstruct_full_solution(
    target: &GatePair,
    gamma: f64,
    reach: &ReachPoint,
    tol_residual: f64,
) -> Result<GeneralSolution> {
    let targets = target_points(target);
    let mut point = *reach;
    for attempt in 0..2 {
        let a = point.a.clamp(-1.0, 1.0);
        let b = (1.0 - a * a).max(0.0).sqrt();
        let params = CanonicalParams { omega: point.omega, a, b, gamma };
        let (w1, w2) = params.trajectories(point.t);
        let canonical = GatePair::new(w1, w2);
        let goal = if point.sign > 0.0 { target.clone() } else { target.negated() };
        match solve_conjugator(&canonical, &goal, tol_residual) {
            Ok(y) => {
                let realized = canonical.conjugated_by(&y);
                let residual = realized
                    .first
                    .m
                    .distance(&goal.first.m)
                    .max(realized.second.m.distance(&goal.second.m));
                return Ok(GeneralSolution {
                    gamma,
                    target: target.clone(),
                    t_min: point.t,
                    params,
                    sign: point.sign,
                    y,
                    residual,
                });
            }
            Err(err) => {
                if attempt == 1 {
                    return Err(err);
                }
                // Re-polish (ω, a) at fixed t from the incumbent before
                // the final attempt.
                let objective = |p: &[f64; 2]| gap_at(gamma, &targets, point.t, p[0], p[1]).0;
                let (p, d) =
                    simplex_min(objective, [point.omega, point.a], [1e-4, 1e-4], 400, 1e-13, 0.0);
                let (_, sign) = gap_at(gamma, &targets, point.t, p[0], p[1]);
                point = ReachPoint {
                    t: point.t,
                    omega: p[0],
                    a: p[1].clamp(-1.0, 1.0),
                    sign,
                    distance: d,
                };
            }
        }
    }
    unreachable!("loop returns on success or after the retry attempt")
}

/// Samples of the extremal orbit surface at a fixed time, for mesh
/// export: each (ω, a) cell maps to its orbit-space point.
pub struct SurfaceSample {
    pub omega: f64,
    pub a: f64,
    pub point: OrbitPoint,
}

/// Sample the reachable-boundary surface at time t on an
/// n_omega × n_a grid.
pub fn reachable_surface(
    gamma: f64,
    t: f64,
    omega_range: (f64, f64),
    n_omega: usize,
    n_a: usize,
) -> Vec<SurfaceSample> {
    let n_omega = n_omega.max(2);
    let n_a = n_a.max(2);
    let d_omega = (omega_range.1 - omega_range.0) / (n_omega - 1) as f64;
    let d_a = 2.0 / (n_a - 1) as f64;
    let mut out = Vec::with_capacity(n_omega * n_a);
    for i in 0..n_omega {
        let omega = omega_range.0 + d_omega * i as f64;
        for j in 0..n_a {
            let a = -1.0 + d_a * j as f64;
            let b = (1.0 - a * a).max(0.0).sqrt();
            let params = CanonicalParams { omega, a, b, gamma };
            let (w1, w2) = params.trajectories(t);
            out.push(SurfaceSample { omega, a, point: orbit_point(&GatePair::new(w1, w2)) });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::parse_rational;
    use crate::solver::{solve_rotation, RotationTarget, SolveOptions, SolveRequest};
    use std::f64::consts::PI;

    fn reference_solution() -> crate::solver::TocSolution {
        let req = SolveRequest::normalized(
            parse_rational("2514/10000").unwrap(),
            RotationTarget::new([0.0, 1.0, 0.0], PI).unwrap(),
        )
        .with_q_exact(parse_rational("1").unwrap());
        solve_rotation(&req, &SolveOptions::default()).unwrap()
    }

    #[test]
    fn identity_target_is_reached_at_time_zero() {
        let target = GatePair::new(UnitaryGate::IDENTITY, UnitaryGate::IDENTITY);
        let reach = reach_orbit(&target, 0.2514, &ReachOptions::default()).unwrap();
        assert_eq!(reach.t, 0.0);
        assert!(reach.distance < 1e-12);
    }

    #[test]
    fn polished_gap_vanishes_at_the_analytic_optimum() {
        let sol = reference_solution();
        let target = GatePair::new(sol.target_gate(), UnitaryGate::IDENTITY);
        let targets = target_points(&target);
        let opts = ReachOptions::default();
        let gap = orbit_gap(sol.gamma(), &targets, sol.t_min, &opts);
        assert!(
            gap.distance < 1e-8,
            "the analytic optimum must lie on the reachable surface, gap {}",
            gap.distance
        );
        assert!((gap.omega.abs() - sol.params.omega).abs() < 1e-5, "ω from polish: {}", gap.omega);
        assert_eq!(gap.sign, sol.sign, "matched representative sign");
    }

    #[test]
    fn gap_is_positive_short_of_the_minimum_time() {
        let sol = reference_solution();
        let target = GatePair::new(sol.target_gate(), UnitaryGate::IDENTITY);
        let targets = target_points(&target);
        let opts = ReachOptions::default();
        for frac in [0.5, 0.8, 0.95] {
            let gap = orbit_gap(sol.gamma(), &targets, frac * sol.t_min, &opts);
            assert!(
                gap.distance > 1e-4,
                "target must stay off the surface at t = {} t_min, gap {}",
                frac,
                gap.distance
            );
        }
    }

    #[test]
    fn reconstruction_round_trips_a_conjugated_canonical_pair() {
        // Build a target by conjugating a known canonical pair, then
        // recover the frame change at the known (t, ω, a).
        let gamma = 0.37;
        let params = CanonicalParams { omega: 0.9, a: 0.3, b: (1.0f64 - 0.09).sqrt(), gamma };
        let t = 2.1;
        let (w1, w2) = params.trajectories(t);
        let y_true = crate::su2::expm_algebra(
            &crate::su2::AlgebraElement { x: 0.4, y: -0.2, z: 0.7 },
            1.0,
        );
        let target = GatePair::new(w1, w2).conjugated_by(&y_true);
        let reach = ReachPoint { t, omega: 0.9, a: 0.3, sign: 1.0, distance: 0.0 };
        let sol = reconstruct_full_solution(&target, gamma, &reach, 1e-7).unwrap();
        assert!(sol.residual < 1e-7);
        let realized = sol.realized_pair();
        assert!(realized.first.m.distance(&target.first.m) < 1e-7);
        assert!(realized.second.m.distance(&target.second.m) < 1e-7);
    }

    #[test]
    fn canonical_target_recovers_an_identity_frame() {
        let gamma = 0.61;
        let params = CanonicalParams { omega: -0.4, a: -0.2, b: (1.0f64 - 0.04).sqrt(), gamma };
        let t = 1.7;
        let (w1, w2) = params.trajectories(t);
        let target = GatePair::new(w1, w2);
        let reach = ReachPoint { t, omega: -0.4, a: -0.2, sign: 1.0, distance: 0.0 };
        let sol = reconstruct_full_solution(&target, gamma, &reach, 1e-7).unwrap();
        let realized = sol.realized_pair();
        assert!(realized.first.m.distance(&target.first.m) < 1e-9);
        assert!(realized.second.m.distance(&target.second.m) < 1e-9);
    }

    #[test]
    fn surface_sampler_covers_the_grid() {
        let samples = reachable_surface(0.2514, 2.0, (-6.0, 6.0), 9, 7);
        assert_eq!(samples.len(), 63);
        assert!(samples.iter().all(|s| s.a >= -1.0 && s.a <= 1.0));
    }
}
