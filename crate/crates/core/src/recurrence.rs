//! Finite-horizon recurrence experiments built on return sets.
//!
//! A return set `F = N(x, U) ∩ [0, N]` is computed once; the sets
//! `M_{k,r} = {a : a, a+k, …, a+rk ∈ F}` then follow by pure set arithmetic.
//! "Positive upper Banach density" becomes "best window count over `s` is at
//! least `δ·s`", with `δ = 2/s` by default so that one accidental hit does
//! not count.

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::{largest_gap, shift_intersection, window_extremes, FiniteSubset};
use crate::error::{Error, Result};
use crate::family::FamilyProxy;
use crate::numeric::Threshold;
use crate::shift::{
    apply_power, ball_contains, orbit_point, pullback, return_set, BallQuery, BallVerdict,
    FiniteVector, Scaling,
};
use crate::weights::{scaled_family_check, CriteriaReport, LogProductTable};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanParams {
    /// Recurrence order `r`.
    pub r: u64,
    /// Largest `k` scanned; the scan covers `[1, K]`.
    pub k_max: u64,
    /// Window size `s` of the Banach estimate.
    pub window: u64,
    /// Density threshold `δ`; defaults to `2/s`.
    pub delta: Option<f64>,
}

impl ScanParams {
    pub fn new(r: u64, k_max: u64, window: u64) -> Self {
        ScanParams {
            r,
            k_max,
            window,
            delta: None,
        }
    }

    pub fn delta(&self) -> f64 {
        self.delta.unwrap_or(2.0 / self.window as f64)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftResult {
    pub k: u64,
    pub witness_count: u64,
    /// `α̂^s(M_{k,r})`.
    pub window_max: u64,
    /// `α̂^s(M_{k,r}) / s`.
    pub estimate: f64,
    pub witnesses: FiniteSubset,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceExperiment {
    pub weights: String,
    pub params: ScanParams,
    pub delta: f64,
    pub horizon: u64,
    /// `F`, with borderline orbit points left out.
    pub return_set: FiniteSubset,
    pub borderline: Vec<u64>,
    pub results: Vec<ShiftResult>,
    /// `W_r = {k ≤ K : estimate ≥ δ}`.
    pub w_r: Vec<u64>,
    /// Largest gap of `W_r` inside `[0, K]`, if non-empty.
    pub w_r_max_gap: Option<u64>,
    pub note: String,
}

const SCAN_NOTE: &str = "finite horizon: W_r lists k <= K whose shift-intersection has a window \
                         of size s with at least delta*s members; no statement about filter \
                         membership of W_r is made";

/// Scans `k ∈ [1, K]` over a given return set `F`.
pub fn recurrence_scan_set(
    weights: &str,
    f: &FiniteSubset,
    borderline: Vec<u64>,
    params: ScanParams,
) -> Result<RecurrenceExperiment> {
    let n = f.horizon();
    let ScanParams {
        r, k_max, window, ..
    } = params;
    if r == 0 || k_max == 0 || window == 0 {
        return Err(Error::range("r, K and s must be positive"));
    }
    let reach = r
        .checked_mul(k_max)
        .filter(|&rk| rk <= n)
        .ok_or_else(|| Error::range(format!("r·K = {r}·{k_max} exceeds horizon {n}")))?;
    if window > n - reach {
        return Err(Error::WindowTooLarge {
            window,
            horizon: n - reach,
        });
    }
    let delta = params.delta();
    let results: Vec<ShiftResult> = (1..=k_max)
        .into_par_iter()
        .map(|k| {
            let m = shift_intersection(f, k, r)?;
            let (best, _) =
                window_extremes(&m.prefix_counts(), window, 0).expect("window checked");
            Ok(ShiftResult {
                k,
                witness_count: m.len() as u64,
                window_max: best,
                estimate: best as f64 / window as f64,
                witnesses: m,
            })
        })
        .collect::<Result<_>>()?;
    let w_r: Vec<u64> = results
        .iter()
        .filter(|x| x.estimate >= delta)
        .map(|x| x.k)
        .collect();
    let w_r_max_gap = if w_r.is_empty() {
        None
    } else {
        let w = FiniteSubset::new(w_r.clone(), k_max, crate::density::Origin::One)?;
        largest_gap(&w).map(|g| g.len)
    };
    Ok(RecurrenceExperiment {
        weights: weights.to_string(),
        params,
        delta,
        horizon: n,
        return_set: f.clone(),
        borderline,
        results,
        w_r,
        w_r_max_gap,
        note: SCAN_NOTE.to_string(),
    })
}

/// `recurrence_scan_set` on `F = N(x, U) ∩ [0, N]`.
pub fn recurrence_scan(
    table: &LogProductTable,
    x: &FiniteVector,
    q: &BallQuery,
    horizon: u64,
    params: ScanParams,
    scaling: Scaling<'_>,
) -> Result<RecurrenceExperiment> {
    let f = return_set(table, x, q, horizon, scaling)?;
    recurrence_scan_set(table.spec(), &f.set, f.borderline, params)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairViolation {
    pub s1: u64,
    pub s2: u64,
    /// `T^{s₂}x ∉ U` (true) or `T^{s₁-s₂+n}T^{s₂}x ∉ V` (false).
    pub left_u: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InclusionReport {
    pub n: u64,
    pub horizon: u64,
    /// `N(x, U_n) ∩ [0, N]` with `U_n = U ∩ T^{-n}V`.
    pub hits: Vec<u64>,
    pub vacuous: bool,
    pub pairs: u64,
    pub verified: u64,
    /// Pairs whose evaluation fell inside a rounding band.
    pub borderline: u64,
    pub violations: Vec<PairViolation>,
}

impl InclusionReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `N(x,U_n) - N(x,U_n) + n ⊆ N(U,V)` pair by pair.
///
/// For `s₁ ≥ s₂` in `N(x,U_n)` the point `y = T^{s₂}x` must lie in `U` and
/// `T^{s₁-s₂+n}y` in `V`. Both are evaluated from scratch by composing powers,
/// so a violation means the engine broke the semigroup law.
pub fn inclusion_check(
    table: &LogProductTable,
    x: &FiniteVector,
    u: &BallQuery,
    v: &BallQuery,
    n: u64,
    horizon: u64,
) -> Result<InclusionReport> {
    let mut hits = Vec::new();
    for s in 0..=horizon {
        let in_u = ball_contains(&orbit_point(table, x, s, None)?, u)?.verdict;
        if in_u != BallVerdict::In {
            continue;
        }
        let in_v = ball_contains(&orbit_point(table, x, s + n, None)?, v)?.verdict;
        if in_v == BallVerdict::In {
            hits.push(s);
        }
    }
    let mut report = InclusionReport {
        n,
        horizon,
        vacuous: hits.is_empty(),
        hits: hits.clone(),
        pairs: 0,
        verified: 0,
        borderline: 0,
        violations: Vec::new(),
    };
    let images: Vec<FiniteVector> = hits
        .iter()
        .map(|&s| apply_power(table, x, s, None))
        .collect::<Result<_>>()?;
    let outcomes: Vec<(u64, u64, BallVerdict, BallVerdict)> = hits
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, &s2)| {
            let y = &images[i];
            hits[i..].iter().map(move |&s1| (s1, s2, y))
        })
        .map(|(s1, s2, y)| {
            let in_u = ball_contains(y, u)?.verdict;
            let z = apply_power(table, y, s1 - s2 + n, None)?;
            let in_v = ball_contains(&z, v)?.verdict;
            Ok((s1, s2, in_u, in_v))
        })
        .collect::<Result<_>>()?;
    for (s1, s2, in_u, in_v) in outcomes {
        report.pairs += 1;
        match (in_u, in_v) {
            (BallVerdict::In, BallVerdict::In) => report.verified += 1,
            (BallVerdict::Out, _) => report.violations.push(PairViolation {
                s1,
                s2,
                left_u: true,
            }),
            (_, BallVerdict::Out) => report.violations.push(PairViolation {
                s1,
                s2,
                left_u: false,
            }),
            _ => report.borderline += 1,
        }
    }
    Ok(report)
}

/// Smallest `n ≤ max_n` for which `z = c_U + (B_w^n)^{-1}c_V` certifies
/// `n ∈ N(U, V)`: `z ∈ U` and `B_w^n z ∈ V`, both evaluated directly.
pub fn discover_transfer_time(
    table: &LogProductTable,
    u: &BallQuery,
    v: &BallQuery,
    max_n: u64,
) -> Result<Option<(u64, FiniteVector)>> {
    for n in 1..=max_n {
        let reach = v.center.max_index().unwrap_or(0) + n as i64;
        if reach > table.hi() {
            break;
        }
        let z = u.center.add(&pullback(table, &v.center, n)?)?;
        if ball_contains(&z, u)?.verdict != BallVerdict::In {
            continue;
        }
        if ball_contains(&apply_power(table, &z, n, None)?, v)?.verdict == BallVerdict::In {
            return Ok(Some((n, z)));
        }
    }
    Ok(None)
}

/// The computable side of "`B_w ⊕ B_w² ⊕ ⋯ ⊕ B_w^r` has the family property":
/// `A_{M;j} ∈ lF` for all `l ≤ r`, tested through `proxy`.
pub fn direct_sum_check(
    table: &LogProductTable,
    r: u64,
    ms: &[Threshold],
    js: &[i64],
    proxy: &FamilyProxy,
) -> Result<CriteriaReport> {
    let mut report = scaled_family_check(table, r, ms, js, proxy)?;
    report.criterion = format!("direct_sum(r={r})");
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditRow {
    pub label: String,
    pub returns: u64,
    pub borderline: Vec<u64>,
    /// `α̂^s / s` per window size, in the order of `windows`.
    pub estimates: Vec<f64>,
    pub flagged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub weights: String,
    pub horizon: u64,
    pub windows: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flag_above: Option<f64>,
    pub rows: Vec<AuditRow>,
}

/// Tabulates window estimates of `N(x, U)` for a family of vectors and flags
/// those whose estimate exceeds `flag_above` (a `1/m`) at some window size.
pub fn banach_return_audit(
    table: &LogProductTable,
    vectors: &[(String, FiniteVector)],
    q: &BallQuery,
    horizon: u64,
    windows: &[u64],
    flag_above: Option<f64>,
) -> Result<AuditReport> {
    if let Some(&s) = windows.iter().find(|&&s| s == 0 || s > horizon) {
        return Err(Error::WindowTooLarge { window: s, horizon });
    }
    let rows = vectors
        .iter()
        .map(|(label, x)| {
            let f = return_set(table, x, q, horizon, None)?;
            let counts = f.set.prefix_counts();
            let estimates: Vec<f64> = windows
                .iter()
                .map(|&s| window_extremes(&counts, s, 0).expect("checked").0 as f64 / s as f64)
                .collect();
            let flagged = flag_above.is_some_and(|t| estimates.iter().any(|&e| e > t));
            Ok(AuditRow {
                label: label.clone(),
                returns: f.set.len() as u64,
                borderline: f.borderline,
                estimates,
                flagged,
            })
        })
        .collect::<Result<_>>()?;
    Ok(AuditReport {
        weights: table.spec().to_string(),
        horizon,
        windows: windows.to_vec(),
        flag_above,
        rows,
    })
}

/// Open ball `B(e_index; radius)`.
pub fn basis_ball(
    space: crate::shift::Space,
    side: crate::weights::Side,
    index: i64,
    radius: BigRational,
) -> Result<BallQuery> {
    BallQuery::new(FiniteVector::basis(space, side, index)?, radius)
}

/// `B(0; radius)`.
pub fn zero_ball(
    space: crate::shift::Space,
    side: crate::weights::Side,
    radius: BigRational,
) -> Result<BallQuery> {
    BallQuery::new(FiniteVector::zero(space, side), radius)
}
