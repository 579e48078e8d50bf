//! Exact-arithmetic optimality certificates for resonance solutions.
//!
//! A simultaneous rotation (spin 1 by θ about an axis, spin 2 back to
//! ±1) realized with b ≠ 0 corresponds to an admissible quadruple
//! (s, m, l, k) — s = ±1, integers m, k ≥ 1, l ≥ 0 (l ≥ 1 when s = −1),
//! l ≡ k (mod 2) when θ ≠ π — through the three resonance conditions
//! ωt = mπ, η_γt = kπ, η₁t = sθ/2 + lπ.  Its duration satisfies
//!
//! &nbsp;&nbsp; (t/π)² = T = M / (γ(1−γ)),
//! &nbsp;&nbsp; M = m²(1−γ) + (sq/2 + l)²γ − k²,  q = θ/π,
//!
//! subject to the strict window (m − sq/2 − l)² < T < (m + sq/2 + l)².
//! The degenerate family b = 0 contributes durations t = kπ/γ whenever
//! cos(kπ/γ) = (−1)^k cos(θ/2).
//!
//! Optimality of an incumbent duration is proved by *finite* case
//! analysis in exact rational arithmetic: writing δ = m − l and
//! ε = m − k, every solution faster than the incumbent must satisfy
//!
//! &nbsp;&nbsp; (δ − sq/2)² < T_inc  (window lower bound) and
//! &nbsp;&nbsp; ε² < γ²·T_inc        (η_γ lies strictly inside (|ω−γ|, ω+γ)),
//!
//! so only finitely many (s, δ, ε) cases exist, and within each case the
//! m² terms cancel:  M(m) = 2c₁m + c₀ with c₁ = γ(sq/2 − δ) + ε and
//! c₀ = γ(sq/2 − δ)² − ε².  Requiring M strictly between 0 and
//! M_inc = T_inc·γ(1−γ) then pins m to a finite integer interval that is
//! checked exhaustively against the full admissibility conditions.  All
//! of this is exact when γ and q are rational; the only floating-point
//! step is the transcendental b = 0 membership test, whose margin is
//! recorded explicitly.

use crate::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};

/// Parse an exact rational from "p/q", a decimal string like "0.2514"
/// (taken exactly as 2514/10000), or scientific notation "2.514e-1".
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    let invalid = || Error::InvalidTarget(format!("cannot parse '{s}' as a rational number"));
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| invalid())?;
        let d: BigInt = den.trim().parse().map_err(|_| invalid())?;
        if d.is_zero() {
            return Err(invalid());
        }
        return Ok(BigRational::new(n, d));
    }
    // Decimal / scientific notation, converted exactly in base 10.
    let (mantissa, exp10) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().map_err(|_| invalid())?),
        None => (s, 0),
    };
    let (mantissa, sign) = match mantissa.strip_prefix('-') {
        Some(rest) => (rest, -1),
        None => (mantissa.strip_prefix('+').unwrap_or(mantissa), 1),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(invalid());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(invalid());
    }
    let digits: BigInt = format!("{int_part}{frac_part}")
        .parse()
        .map_err(|_| invalid())?;
    let ten = BigInt::from(10);
    let shift = exp10 - frac_part.len() as i64;
    let mut numer = digits * BigInt::from(sign);
    let mut denom = BigInt::one();
    if shift >= 0 {
        numer *= ten.pow(shift as u32);
    } else {
        denom = ten.pow((-shift) as u32);
    }
    Ok(BigRational::new(numer, denom))
}

/// Exact (dyadic) rational value of a finite f64.
pub fn rational_from_f64(value: f64) -> Result<BigRational> {
    BigRational::from_float(value)
        .ok_or_else(|| Error::InvalidTarget(format!("{value} is not a finite number")))
}

/// Parse a rotation angle: "pi", "pi/2", "3pi/4", "0.75pi", "0.75*pi",
/// or plain radians ("1.5707963").  Rational multiples of π come back
/// with their exact coefficient θ/π so downstream certification can
/// work in exact arithmetic.
pub fn parse_angle(text: &str) -> Result<(f64, Option<BigRational>)> {
    let compact: String = text
        .trim()
        .to_ascii_lowercase()
        .chars()
        .filter(|c| *c != ' ' && *c != '*')
        .collect();
    let bad = |detail: &str| {
        Error::InvalidTarget(format!(
            "cannot parse angle '{text}' ({detail}); expected e.g. 'pi', '3pi/4', '0.75pi' or plain radians"
        ))
    };
    match compact.find("pi") {
        Some(idx) => {
            let coefficient_text = &compact[..idx];
            let rest = &compact[idx + 2..];
            let coefficient = if coefficient_text.is_empty() {
                BigRational::one()
            } else {
                parse_rational(coefficient_text).map_err(|err| bad(&err.to_string()))?
            };
            let q = if rest.is_empty() {
                coefficient
            } else if let Some(denominator_text) = rest.strip_prefix('/') {
                let denominator =
                    parse_rational(denominator_text).map_err(|err| bad(&err.to_string()))?;
                if denominator.is_zero() {
                    return Err(bad("division by zero"));
                }
                coefficient / denominator
            } else {
                return Err(bad("unexpected trailing text"));
            };
            let theta = q
                .to_f64()
                .ok_or_else(|| bad("coefficient out of floating-point range"))?
                * std::f64::consts::PI;
            Ok((theta, Some(q)))
        }
        None => {
            let theta: f64 = compact.parse().map_err(|_| bad("not a number"))?;
            Ok((theta, None))
        }
    }
}

/// Parse a rotation axis: "x", "y", "z", or "nx,ny,nz" components
/// (normalization is the target constructor's job).
pub fn parse_axis(text: &str) -> Result<[f64; 3]> {
    match text.trim().to_ascii_lowercase().as_str() {
        "x" => Ok([1.0, 0.0, 0.0]),
        "y" => Ok([0.0, 1.0, 0.0]),
        "z" => Ok([0.0, 0.0, 1.0]),
        other => {
            let invalid = || {
                Error::InvalidTarget(format!(
                    "cannot parse axis '{text}': expected x, y, z or nx,ny,nz"
                ))
            };
            let parts: Vec<&str> = other.split(',').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(invalid());
            }
            let mut axis = [0.0f64; 3];
            for (slot, part) in axis.iter_mut().zip(&parts) {
                *slot = part.parse().map_err(|_| invalid())?;
            }
            Ok(axis)
        }
    }
}

/// Outcome of one (s, δ, ε) case of the exhaustive analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseVerdict {
    /// θ ≠ π and δ ≢ ε (mod 2): the parity constraint on (l, k) excludes
    /// every member of the case.
    ParityExcluded,
    /// The open m-interval carved out by 0 < M(m) < M_inc (strictly
    /// between) contains no integer.
    EmptyWindow,
    /// Integers existed in the interval but every one failed the full
    /// admissibility and window conditions; `checked` counts them.
    AllCheckedExcluded { checked: u64 },
    /// c₁ = 0 and the constant M = c₀ lies outside the improvement
    /// window, excluding the whole case at once.
    ConstantOutside,
    /// A strictly faster admissible solution exists at this m — the
    /// incumbent is *not* optimal.
    Improvement { m: i64 },
    /// c₁ = 0, M = c₀ improves, and a witness m satisfies all conditions.
    ConstantImprovement { m: i64 },
}

impl CaseVerdict {
    pub fn is_improvement(&self) -> bool {
        matches!(self, CaseVerdict::Improvement { .. } | CaseVerdict::ConstantImprovement { .. })
    }
}

/// One enumerated case (s, δ = m − l, ε = m − k) and its verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseRecord {
    pub s: i64,
    pub delta: i64,
    pub epsilon: i64,
    pub verdict: CaseVerdict,
}

/// Float-level exclusion record for one b = 0 candidate duration.
#[derive(Debug, Clone, PartialEq)]
pub struct BZeroCheck {
    pub k: i64,
    /// |cos(kπ/γ) − (−1)^k cos(θ/2)|; the candidate realizes the target
    /// only when this vanishes.
    pub margin: f64,
    /// True when the margin exceeds the matching tolerance, so the
    /// candidate does not realize the target rotation.
    pub excluded: bool,
}

/// Exhaustive-case optimality certificate for an incumbent duration.
///
/// `t_inc` is the exact squared duration in units of π, T = (t/π)²; the
/// incumbent itself is excluded from the improvement window by strict
/// inequality, so a conclusive certificate proves it is the minimum over
/// both solution families.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalityCertificate {
    pub gamma: BigRational,
    /// q = θ/π.
    pub q: BigRational,
    /// Whether q was supplied exactly (θ given as a rational multiple of
    /// π) rather than converted from a float.
    pub q_exact: bool,
    /// T_inc = (t_inc/π)², exact.
    pub t_inc: BigRational,
    /// M_inc = T_inc·γ(1−γ), exact.
    pub m_inc: BigRational,
    /// Inclusive δ ranges actually enumerated, per sign s = +1 / s = −1.
    pub delta_range_plus: (i64, i64),
    pub delta_range_minus: (i64, i64),
    /// Inclusive ε range (symmetric about 0).
    pub epsilon_range: (i64, i64),
    pub cases: Vec<CaseRecord>,
    pub bzero: Vec<BZeroCheck>,
    /// Tolerance used by the b = 0 membership test.
    pub bzero_tol: f64,
}

impl OptimalityCertificate {
    /// True when no case found an improvement and every b = 0 candidate
    /// was excluded: the incumbent duration is provably minimal (up to
    /// the recorded float margin of the transcendental b = 0 test).
    pub fn is_conclusive(&self) -> bool {
        self.cases.iter().all(|c| !c.verdict.is_improvement())
            && self.bzero.iter().all(|b| b.excluded)
    }

    /// The improving quadruple, if any case found one: (s, m, l, k).
    pub fn improvement(&self) -> Option<(i64, i64, i64, i64)> {
        self.cases.iter().find_map(|c| match c.verdict {
            CaseVerdict::Improvement { m } | CaseVerdict::ConstantImprovement { m } => {
                Some((c.s, m, m - c.delta, m - c.epsilon))
            }
            _ => None,
        })
    }
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// M(s, m, l, k) = m²(1−γ) + (sq/2 + l)²γ − k², exact.
pub fn m_value(gamma: &BigRational, q: &BigRational, s: i64, m: i64, l: i64, k: i64) -> BigRational {
    let one = BigRational::one();
    let half_sq = big(s) * q / big(2);
    let lq = &half_sq + big(l);
    big(m * m) * (&one - gamma) + &lq * &lq * gamma - big(k * k)
}

/// Strict window (m − sq/2 − l)² < T < (m + sq/2 + l)², exact.
fn window_holds(q: &BigRational, s: i64, m: i64, l: i64, t: &BigRational) -> bool {
    let half_sq = big(s) * q / big(2);
    let lower = big(m) - &half_sq - big(l);
    let upper = big(m) + &half_sq + big(l);
    &lower * &lower < *t && *t < &upper * &upper
}

/// Exact squared duration T = (t/π)² of the quadruple (s, m, l, k) when
/// it is admissible, positive, and satisfies the strict window; None
/// otherwise.  This is the single source of truth for candidate
/// validity, shared by the enumerating solver and the certificate.
pub fn quadruple_duration_sq(
    gamma: &BigRational,
    q: &BigRational,
    s: i64,
    m: i64,
    l: i64,
    k: i64,
) -> Option<BigRational> {
    if !admissible(q, s, m, l, k) {
        return None;
    }
    let gg = gamma * (BigRational::one() - gamma);
    let t = m_value(gamma, q, s, m, l, k) / gg;
    if t > BigRational::zero() && window_holds(q, s, m, l, &t) {
        Some(t)
    } else {
        None
    }
}

/// Admissibility of (s, m, l, k): m, k ≥ 1, l ≥ 0 with l ≥ 1 for s = −1,
/// parity l ≡ k (mod 2) when θ ≠ π.
fn admissible(q: &BigRational, s: i64, m: i64, l: i64, k: i64) -> bool {
    if m < 1 || k < 1 || l < 0 || (s == -1 && l < 1) {
        return false;
    }
    let theta_is_pi = q == &BigRational::one();
    theta_is_pi || (l - k).rem_euclid(2) == 0
}

/// Decide one (s, δ, ε) case.  `m_inc` is the incumbent's exact M and
/// `gg = γ(1−γ)`, so the incumbent duration satisfies T_inc = M_inc/gg.
fn judge_case(
    gamma: &BigRational,
    q: &BigRational,
    s: i64,
    delta: i64,
    epsilon: i64,
    m_inc: &BigRational,
    gg: &BigRational,
) -> CaseVerdict {
    let theta_is_pi = q == &BigRational::one();
    if !theta_is_pi && (delta - epsilon).rem_euclid(2) != 0 {
        return CaseVerdict::ParityExcluded;
    }

    let zero = BigRational::zero();
    let h = big(s) * q / big(2); // sq/2
    let hd = &h - big(delta);
    let c1 = gamma * &hd + big(epsilon);
    let c0 = gamma * &hd * &hd - big(epsilon * epsilon);

    // Improvement window for M: strictly between 0 and M_inc.
    let (m_low, m_high) = if m_inc > &zero {
        (zero.clone(), m_inc.clone())
    } else {
        (m_inc.clone(), zero.clone())
    };

    // Full check of a concrete m (everything exact).
    let passes = |m: i64| -> bool {
        let l = m - delta;
        let k = m - epsilon;
        if !admissible(q, s, m, l, k) {
            return false;
        }
        let m_val = m_value(gamma, q, s, m, l, k);
        if !(m_val > m_low && m_val < m_high) {
            return false;
        }
        let t = &m_val / gg;
        t > zero && window_holds(q, s, m, l, &t)
    };

    if c1.is_zero() {
        if !(c0 > m_low && c0 < m_high) {
            return CaseVerdict::ConstantOutside;
        }
        // M is constant and improving; T is m-independent, the window
        // lower bound is m-independent, and the upper bound
        // (2m − δ + sq/2)² grows without bound, so scanning m upward
        // from the admissibility threshold terminates.
        let t = &c0 / gg;
        let hd_sq = &hd * &hd;
        if !(hd_sq < t) {
            // Window lower bound fails for every m in this case.
            return CaseVerdict::AllCheckedExcluded { checked: 0 };
        }
        let m_start = 1.max(delta + i64::from(s == -1)).max(epsilon + 1);
        for m in m_start.. {
            if passes(m) {
                return CaseVerdict::ConstantImprovement { m };
            }
            // Once the upper window bound is satisfied every later m
            // also satisfies it, so a failure past that point is
            // structural; in practice the first few m decide.
            if m > m_start + 64 {
                return CaseVerdict::AllCheckedExcluded { checked: (m - m_start) as u64 };
            }
        }
        unreachable!("the scan above always returns");
    }

    // M(m) = 2c₁m + c₀ strictly between m_low and m_high: an open
    // interval of m between the two endpoint solutions.
    let two_c1 = big(2) * &c1;
    let e0 = (&m_low - &c0) / &two_c1;
    let e1 = (&m_high - &c0) / &two_c1;
    let (lo, hi) = if e0 < e1 { (e0, e1) } else { (e1, e0) };
    // Integers in the open interval (lo, hi): floor(lo)+1 ..= ceil(hi)−1.
    let m_first = lo.floor().to_integer() + BigInt::one();
    let m_last = hi.ceil().to_integer() - BigInt::one();
    if m_first > m_last {
        return CaseVerdict::EmptyWindow;
    }
    let m_first = m_first.to_i64().expect("candidate m fits in i64");
    let m_last = m_last.to_i64().expect("candidate m fits in i64");

    let mut checked = 0u64;
    for m in m_first..=m_last {
        if passes(m) {
            return CaseVerdict::Improvement { m };
        }
        checked += 1;
    }
    CaseVerdict::AllCheckedExcluded { checked }
}

/// Enumerate the inclusive integer range around `center` where
/// `test(value)` holds; the predicate must be monotone away from the
/// center (true on a contiguous block).  Returns (lo, hi) with
/// lo > hi encoding an empty range.
fn contiguous_range(center: i64, test: impl Fn(i64) -> bool) -> (i64, i64) {
    if !test(center) {
        // The block, if any, sits entirely to one side; probe both.
        let mut probe = center + 1;
        while !test(probe) && probe - center < 4 {
            probe += 1;
        }
        if test(probe) {
            let mut hi = probe;
            while test(hi + 1) {
                hi += 1;
            }
            return (probe, hi);
        }
        let mut probe = center - 1;
        while !test(probe) && center - probe < 4 {
            probe -= 1;
        }
        if test(probe) {
            let mut lo = probe;
            while test(lo - 1) {
                lo -= 1;
            }
            return (lo, probe);
        }
        return (center, center - 1);
    }
    let mut lo = center;
    while test(lo - 1) {
        lo -= 1;
    }
    let mut hi = center;
    while test(hi + 1) {
        hi += 1;
    }
    (lo, hi)
}

/// Build the exhaustive-case certificate for an incumbent with exact
/// squared duration `t_inc` = (t/π)².
pub fn build_certificate(
    gamma: &BigRational,
    q: &BigRational,
    q_exact: bool,
    t_inc: &BigRational,
    bzero_tol: f64,
) -> Result<OptimalityCertificate> {
    let one = BigRational::one();
    if gamma <= &BigRational::zero() || gamma == &one {
        return Err(Error::InvalidTarget(
            "certificate requires γ > 0 and γ ≠ 1".into(),
        ));
    }
    if t_inc <= &BigRational::zero() {
        return Err(Error::InvalidTarget("incumbent duration must be positive".into()));
    }
    let gg = gamma * (&one - gamma);
    let m_inc = t_inc * &gg;

    // δ window per sign: (δ − sq/2)² < T_inc, contiguous around sq/2.
    let delta_window = |s: i64| -> (i64, i64) {
        let h = big(s) * q / big(2);
        let center = h.to_f64().unwrap_or(0.0).round() as i64;
        contiguous_range(center, |d| {
            let gap = &h - big(d);
            &gap * &gap < *t_inc
        })
    };
    let delta_range_plus = delta_window(1);
    let delta_range_minus = delta_window(-1);

    // ε window: ε² < γ²·T_inc, symmetric about 0.
    let gamma_sq_t = gamma * gamma * t_inc;
    let epsilon_range = contiguous_range(0, |e| big(e * e) < gamma_sq_t);

    let mut cases = Vec::new();
    for (s, (d_lo, d_hi)) in [(1i64, delta_range_plus), (-1i64, delta_range_minus)] {
        for delta in d_lo..=d_hi {
            for epsilon in epsilon_range.0..=epsilon_range.1 {
                let verdict = judge_case(gamma, q, s, delta, epsilon, &m_inc, &gg);
                cases.push(CaseRecord { s, delta, epsilon, verdict });
            }
        }
    }

    // b = 0 candidates: t = kπ/γ faster than the incumbent ⇔ k²/γ² < T_inc.
    let gamma_f = gamma.to_f64().ok_or_else(|| Error::Internal("γ out of f64 range".into()))?;
    let theta = q.to_f64().ok_or_else(|| Error::Internal("q out of f64 range".into()))?
        * std::f64::consts::PI;
    let mut bzero = Vec::new();
    let mut k = 1i64;
    loop {
        let ratio_sq = big(k * k) / (gamma * gamma);
        if ratio_sq >= *t_inc {
            break;
        }
        let lhs = (k as f64 * std::f64::consts::PI / gamma_f).cos();
        let rhs = if k % 2 == 0 { (theta / 2.0).cos() } else { -(theta / 2.0).cos() };
        let margin = (lhs - rhs).abs();
        bzero.push(BZeroCheck { k, margin, excluded: margin >= bzero_tol });
        k += 1;
        if k > 10_000 {
            return Err(Error::Internal("b = 0 candidate enumeration did not terminate".into()));
        }
    }

    Ok(OptimalityCertificate {
        gamma: gamma.clone(),
        q: q.clone(),
        q_exact,
        t_inc: t_inc.clone(),
        m_inc,
        delta_range_plus,
        delta_range_minus,
        epsilon_range,
        cases,
        bzero,
        bzero_tol,
    })
}

/// Replay a certificate from its declared inputs and confirm every
/// recorded element: the enumeration ranges (including that their outer
/// neighbours violate the defining inequalities), complete coverage of
/// the (s, δ, ε) grid, every case verdict, and the b = 0 candidate list.
pub fn verify_certificate(cert: &OptimalityCertificate) -> Result<()> {
    let rebuilt = build_certificate(&cert.gamma, &cert.q, cert.q_exact, &cert.t_inc, cert.bzero_tol)?;

    // Boundary conditions: one step outside each recorded range must
    // violate the corresponding inequality.
    for (s, (lo, hi)) in [(1i64, cert.delta_range_plus), (-1i64, cert.delta_range_minus)] {
        let h = big(s) * &cert.q / big(2);
        for outside in [lo - 1, hi + 1] {
            let gap = &h - big(outside);
            if &gap * &gap < cert.t_inc {
                return Err(Error::Internal(format!(
                    "δ range for s = {s} is not maximal: δ = {outside} also satisfies the bound"
                )));
            }
        }
    }
    let gamma_sq_t = &cert.gamma * &cert.gamma * &cert.t_inc;
    for outside in [cert.epsilon_range.0 - 1, cert.epsilon_range.1 + 1] {
        if big(outside * outside) < gamma_sq_t {
            return Err(Error::Internal(format!(
                "ε range is not maximal: ε = {outside} also satisfies the bound"
            )));
        }
    }

    if rebuilt.m_inc != cert.m_inc {
        return Err(Error::Internal("recorded M_inc does not match T_inc·γ(1−γ)".into()));
    }
    if rebuilt.delta_range_plus != cert.delta_range_plus
        || rebuilt.delta_range_minus != cert.delta_range_minus
        || rebuilt.epsilon_range != cert.epsilon_range
    {
        return Err(Error::Internal("recorded enumeration ranges do not replay".into()));
    }
    if rebuilt.cases != cert.cases {
        return Err(Error::Internal("recorded case verdicts do not replay".into()));
    }
    if rebuilt.bzero != cert.bzero {
        return Err(Error::Internal("recorded b = 0 checks do not replay".into()));
    }
    Ok(())
}
