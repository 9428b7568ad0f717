//! Finite-horizon combinatorics of subsets of the naturals.
//!
//! A [`FiniteSubset`] is a set `A ⊆ [0, N]` observed up to a horizon `N`.
//! Limits such as upper Banach density are replaced by their finite analogues:
//! the best (or worst) count over all full windows `[k+1, k+s]` with
//! `k+s ≤ N`, and prefix ratios `|A ∩ [1, n]| / n` on the back half `[N/2, N]`.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Whether index 0 belongs to the universe the set was drawn from.
///
/// Orbit return times start at 0, weight indices at 1.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Zero,
    #[default]
    One,
}

impl Origin {
    pub fn first(self) -> u64 {
        match self {
            Origin::Zero => 0,
            Origin::One => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteSubset {
    members: Vec<u64>,
    horizon: u64,
    #[serde(default)]
    origin: Origin,
}

impl FiniteSubset {
    pub fn new(members: Vec<u64>, horizon: u64, origin: Origin) -> Result<Self> {
        if let Some(w) = members.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSet(format!(
                "members not strictly increasing at {} -> {}",
                w[0], w[1]
            )));
        }
        if let Some(&last) = members.last() {
            if last > horizon {
                return Err(Error::InvalidSet(format!(
                    "member {last} exceeds horizon {horizon}"
                )));
            }
        }
        if let Some(&first) = members.first() {
            if first < origin.first() {
                return Err(Error::InvalidSet(format!(
                    "member {first} precedes origin {}",
                    origin.first()
                )));
            }
        }
        Ok(FiniteSubset {
            members,
            horizon,
            origin,
        })
    }

    /// Collects `{n ∈ [origin, horizon] : keep(n)}`.
    pub fn from_predicate(horizon: u64, origin: Origin, mut keep: impl FnMut(u64) -> bool) -> Self {
        let members = (origin.first()..=horizon).filter(|&n| keep(n)).collect();
        FiniteSubset {
            members,
            horizon,
            origin,
        }
    }

    /// Sorts and deduplicates arbitrary input before validating it.
    pub fn from_unsorted(mut members: Vec<u64>, horizon: u64, origin: Origin) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        Self::new(members, horizon, origin)
    }

    pub fn interval(lo: u64, hi: u64, horizon: u64) -> Result<Self> {
        Self::new((lo..=hi).collect(), horizon, Origin::One)
    }

    pub fn empty(horizon: u64, origin: Origin) -> Self {
        FiniteSubset {
            members: Vec::new(),
            horizon,
            origin,
        }
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.members.binary_search(&n).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.members.iter().copied()
    }

    pub fn is_subset_of(&self, other: &FiniteSubset) -> bool {
        self.members.iter().all(|&a| other.contains(a))
    }

    /// Membership bitmap over `[0, horizon]`.
    pub fn indicator(&self) -> Vec<bool> {
        let mut bits = vec![false; self.horizon as usize + 1];
        for &a in &self.members {
            bits[a as usize] = true;
        }
        bits
    }

    /// `counts[n] = |A ∩ [1, n]|` for `n ∈ [0, horizon]`.
    pub fn prefix_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.horizon as usize + 1];
        let mut it = self.members.iter().peekable();
        let mut c = 0;
        for (n, slot) in counts.iter_mut().enumerate() {
            while let Some(&&a) = it.peek() {
                if a as usize > n {
                    break;
                }
                if a >= 1 {
                    c += 1;
                }
                it.next();
            }
            *slot = c;
        }
        counts
    }

    /// Complement runs inside `[lo, hi]`, as inclusive `(start, end)` pairs.
    pub fn complement_runs(&self, lo: u64, hi: u64) -> Vec<(u64, u64)> {
        let mut runs = Vec::new();
        let mut next = lo;
        for &a in self.members.iter().filter(|&&a| a >= lo && a <= hi) {
            if a > next {
                runs.push((next, a - 1));
            }
            next = a + 1;
        }
        if next <= hi {
            runs.push((next, hi));
        }
        runs
    }
}

/// Largest gap of a set, with its location.
///
/// `from` is the member (or the anchor 0) before the gap and `to` the member
/// after it (or the horizon for the terminal gap); `len = to - from`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gap {
    pub from: u64,
    pub to: u64,
    pub len: u64,
}

/// All gaps of a non-empty set: the leading gap from the anchor 0, the
/// differences of consecutive members, and the terminal gap `N - max(A)`.
pub fn gaps(a: &FiniteSubset) -> Vec<Gap> {
    let Some(&last) = a.members.last() else {
        return Vec::new();
    };
    let mut out = Vec::with_capacity(a.len() + 1);
    let mut prev = 0;
    for &m in &a.members {
        out.push(Gap {
            from: prev,
            to: m,
            len: m - prev,
        });
        prev = m;
    }
    out.push(Gap {
        from: last,
        to: a.horizon,
        len: a.horizon - last,
    });
    out
}

/// Largest gap, or `None` for the empty set.
///
/// Ties resolve to the earliest gap.
pub fn largest_gap(a: &FiniteSubset) -> Option<Gap> {
    gaps(a)
        .into_iter()
        .max_by(|x, y| x.len.cmp(&y.len).then(y.from.cmp(&x.from)))
}

/// Largest gap length; the caller judges syndeticity as `max_gap ≤ g`.
pub fn syndetic_gap(a: &FiniteSubset) -> Option<u64> {
    largest_gap(a).map(|g| g.len)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrefixRatio {
    pub n: u64,
    pub count: u64,
    pub ratio: f64,
}

impl PrefixRatio {
    fn new(n: u64, count: u64) -> Self {
        PrefixRatio {
            n,
            count,
            ratio: count as f64 / n as f64,
        }
    }

    /// Exact comparison of `count/n` by cross-multiplication.
    fn cmp_exact(&self, other: &PrefixRatio) -> Ordering {
        (self.count as u128 * other.n as u128).cmp(&(other.count as u128 * self.n as u128))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub horizon: u64,
    pub origin: Origin,
    pub cardinality: u64,
    /// Windows `[k+1, k+s]` are scanned for `k ≥ window_floor` only.
    pub window_floor: u64,
    pub window_sizes: Vec<u64>,
    /// `α̂^s`: the best window count per size.
    pub window_max_counts: Vec<u64>,
    pub window_min_counts: Vec<u64>,
    /// Extreme prefix ratios on `[ceil(N/2), N]`.
    pub prefix_ratio_min: PrefixRatio,
    pub prefix_ratio_max: PrefixRatio,
    /// Up to 65 evenly spaced prefix ratios on the back half.
    pub prefix_ratios: Vec<PrefixRatio>,
    pub max_gap: Option<u64>,
    pub estimator: String,
}

pub const ESTIMATOR_NOTE: &str = "finite-horizon estimators: max/min over full windows replace \
limsup/liminf, prefix ratios are sampled on the back half [N/2, N]";

impl DensityReport {
    pub fn upper_estimate(&self, s: u64) -> Option<f64> {
        self.index_of(s)
            .map(|i| self.window_max_counts[i] as f64 / s as f64)
    }

    pub fn lower_estimate(&self, s: u64) -> Option<f64> {
        self.index_of(s)
            .map(|i| self.window_min_counts[i] as f64 / s as f64)
    }

    fn index_of(&self, s: u64) -> Option<usize> {
        self.window_sizes.iter().position(|&x| x == s)
    }
}

/// Max and min count over the windows `[k+1, k+s]`, `floor ≤ k ≤ N - s`.
pub fn window_extremes(counts: &[u64], s: u64, floor: u64) -> Option<(u64, u64)> {
    let horizon = counts.len() as u64 - 1;
    if s == 0 || s > horizon || floor + s > horizon {
        return None;
    }
    let s = s as usize;
    let mut max = 0;
    let mut min = u64::MAX;
    for k in floor as usize..=(horizon as usize - s) {
        let c = counts[k + s] - counts[k];
        max = max.max(c);
        min = min.min(c);
    }
    Some((max, min))
}

/// The window with the lowest count, as `(k, count)`; earliest on ties.
pub fn worst_window(counts: &[u64], s: u64, floor: u64) -> Option<(u64, u64)> {
    let horizon = counts.len() as u64 - 1;
    if s == 0 || floor + s > horizon {
        return None;
    }
    (floor..=horizon - s)
        .map(|k| (k, counts[(k + s) as usize] - counts[k as usize]))
        .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
}

pub fn density_report(a: &FiniteSubset, window_sizes: &[u64]) -> Result<DensityReport> {
    density_report_from(a, window_sizes, 0)
}

/// Density report whose window scan ignores windows starting before
/// `window_floor + 1`, the finite counterpart of "eventually".
pub fn density_report_from(
    a: &FiniteSubset,
    window_sizes: &[u64],
    window_floor: u64,
) -> Result<DensityReport> {
    let n = a.horizon;
    if n == 0 {
        return Err(Error::InvalidSet("horizon must be positive".into()));
    }
    for &s in window_sizes {
        if s == 0 {
            return Err(Error::range("window size must be positive"));
        }
        if s + window_floor > n {
            return Err(Error::WindowTooLarge {
                window: s + window_floor,
                horizon: n,
            });
        }
    }
    let counts = a.prefix_counts();
    let (window_max_counts, window_min_counts) = window_sizes
        .iter()
        .map(|&s| window_extremes(&counts, s, window_floor).expect("validated above"))
        .unzip();

    let lo = n.div_ceil(2).max(1);
    let back: Vec<PrefixRatio> = (lo..=n)
        .map(|m| PrefixRatio::new(m, counts[m as usize]))
        .collect();
    let prefix_ratio_min = back
        .iter()
        .min_by(|x, y| x.cmp_exact(y))
        .cloned()
        .expect("back half is non-empty");
    let prefix_ratio_max = back
        .iter()
        .max_by(|x, y| x.cmp_exact(y))
        .cloned()
        .expect("back half is non-empty");
    let step = (back.len() / 64).max(1);
    let mut prefix_ratios: Vec<PrefixRatio> = back.iter().step_by(step).cloned().collect();
    if prefix_ratios.last().map(|r| r.n) != Some(n) {
        prefix_ratios.push(back.last().cloned().expect("non-empty"));
    }

    Ok(DensityReport {
        horizon: n,
        origin: a.origin,
        cardinality: a.len() as u64,
        window_floor,
        window_sizes: window_sizes.to_vec(),
        window_max_counts,
        window_min_counts,
        prefix_ratio_min,
        prefix_ratio_max,
        prefix_ratios,
        max_gap: syndetic_gap(a),
        estimator: ESTIMATOR_NOTE.to_string(),
    })
}

/// `{a - a' : a, a' ∈ A, 0 < a - a' ≤ cap}` with horizon `cap`.
pub fn difference_set(a: &FiniteSubset, cap: u64) -> Result<FiniteSubset> {
    if cap > a.horizon {
        return Err(Error::range(format!(
            "difference cap {cap} exceeds horizon {}",
            a.horizon
        )));
    }
    let mut seen = vec![false; cap as usize + 1];
    let m = &a.members;
    for (i, &hi) in m.iter().enumerate() {
        for &lo in m[..i].iter().rev() {
            let d = hi - lo;
            if d > cap {
                break;
            }
            seen[d as usize] = true;
        }
    }
    let members = (1..=cap).filter(|&d| seen[d as usize]).collect();
    Ok(FiniteSubset {
        members,
        horizon: cap,
        origin: Origin::One,
    })
}

/// `{a : a, a+k, …, a+rk ∈ A}` with horizon `N - rk`.
pub fn shift_intersection(a: &FiniteSubset, k: u64, r: u64) -> Result<FiniteSubset> {
    if k == 0 || r == 0 {
        return Err(Error::range("shift_intersection needs k ≥ 1 and r ≥ 1"));
    }
    let reach = k
        .checked_mul(r)
        .filter(|&rk| rk <= a.horizon)
        .ok_or_else(|| Error::range(format!("r·k = {r}·{k} exceeds horizon {}", a.horizon)))?;
    let bits = a.indicator();
    let members = a
        .members
        .iter()
        .copied()
        .take_while(|&x| x + reach <= a.horizon)
        .filter(|&x| (1..=r).all(|i| bits[(x + i * k) as usize]))
        .collect();
    Ok(FiniteSubset {
        members,
        horizon: a.horizon - reach,
        origin: a.origin,
    })
}

/// An arithmetic progression `start, start+step, …` of `length` terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Progression {
    pub start: u64,
    pub step: u64,
    pub length: u64,
}

/// Longest arithmetic progression in `A`, capped at `max_len`.
///
/// Ties break by smallest step, then smallest start. Sets with fewer than three
/// members report `length = |A|`, `step = 0` and `start = min(A)` (0 if empty).
pub fn longest_ap(a: &FiniteSubset, max_len: u64) -> Result<Progression> {
    if max_len < 3 {
        return Err(Error::range("longest_ap needs max_len ≥ 3"));
    }
    let m = &a.members;
    if m.len() < 3 {
        return Ok(Progression {
            start: m.first().copied().unwrap_or(0),
            step: 0,
            length: m.len() as u64,
        });
    }
    let bits = a.indicator();
    let has = |x: u64| x <= a.horizon && bits[x as usize];
    let mut best = Progression {
        start: 0,
        step: 0,
        length: 0,
    };
    let better = |cand: &Progression, best: &Progression| {
        cand.length
            .cmp(&best.length)
            .then(best.step.cmp(&cand.step))
            .then(best.start.cmp(&cand.start))
            == Ordering::Greater
    };
    for (i, &x) in m.iter().enumerate() {
        for &y in &m[i + 1..] {
            let d = y - x;
            // only walk chains from their first term
            if x >= d && has(x - d) {
                continue;
            }
            let mut len = 2;
            let mut next = y + d;
            while len < max_len && has(next) {
                len += 1;
                next += d;
            }
            let cand = Progression {
                start: x,
                step: d,
                length: len,
            };
            if better(&cand, &best) {
                best = cand;
            }
        }
    }
    Ok(best)
}

/// `{n : l·n ∈ A}` with horizon `floor(N / l)`.
pub fn dilate_preimage(a: &FiniteSubset, l: u64) -> Result<FiniteSubset> {
    if l == 0 {
        return Err(Error::range("dilation factor must be ≥ 1"));
    }
    let members = a
        .members
        .iter()
        .filter(|&&x| x % l == 0)
        .map(|&x| x / l)
        .collect();
    Ok(FiniteSubset {
        members,
        horizon: a.horizon / l,
        origin: a.origin,
    })
}

/// Image `{l·n : n ∈ A}` with horizon `l·N`.
pub fn dilate(a: &FiniteSubset, l: u64) -> Result<FiniteSubset> {
    if l == 0 {
        return Err(Error::range("dilation factor must be ≥ 1"));
    }
    let horizon = a
        .horizon
        .checked_mul(l)
        .ok_or_else(|| Error::range("dilated horizon overflows"))?;
    Ok(FiniteSubset {
        members: a.members.iter().map(|&x| x * l).collect(),
        horizon,
        origin: a.origin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(members: &[u64], horizon: u64) -> FiniteSubset {
        FiniteSubset::new(members.to_vec(), horizon, Origin::One).unwrap()
    }

    fn evens(n: u64) -> FiniteSubset {
        FiniteSubset::from_predicate(n, Origin::One, |x| x % 2 == 0)
    }

    #[test]
    fn rejects_bad_members() {
        assert!(FiniteSubset::new(vec![3, 2], 10, Origin::One).is_err());
        assert!(FiniteSubset::new(vec![2, 2], 10, Origin::One).is_err());
        assert!(FiniteSubset::new(vec![11], 10, Origin::One).is_err());
        assert!(FiniteSubset::new(vec![0], 10, Origin::One).is_err());
        assert!(FiniteSubset::new(vec![0], 10, Origin::Zero).is_ok());
    }

    #[test]
    fn evens_have_half_density() {
        let r = density_report(&evens(100), &[10]).unwrap();
        assert_eq!(r.window_max_counts, vec![5]);
        assert_eq!(r.window_min_counts, vec![5]);
        assert_eq!(r.upper_estimate(10), Some(0.5));
    }

    #[test]
    fn full_interval_is_saturated() {
        let a = FiniteSubset::interval(1, 100, 100).unwrap();
        let r = density_report(&a, &[7]).unwrap();
        assert_eq!(r.window_max_counts, vec![7]);
        assert_eq!(r.window_min_counts, vec![7]);
        assert_eq!(r.prefix_ratio_min.ratio, 1.0);
    }

    #[test]
    fn window_larger_than_horizon_is_rejected() {
        let err = density_report(&evens(10), &[11]).unwrap_err();
        assert!(matches!(err, Error::WindowTooLarge { window: 11, horizon: 10 }));
    }

    #[test]
    fn syndetic_gap_examples() {
        let threes = FiniteSubset::from_predicate(99, Origin::One, |x| x % 3 == 0);
        let threes = FiniteSubset::new(threes.members().to_vec(), 100, Origin::One).unwrap();
        assert_eq!(syndetic_gap(&threes), Some(3));
        assert_eq!(syndetic_gap(&set(&[1], 1000)), Some(999));
        assert_eq!(syndetic_gap(&FiniteSubset::empty(10, Origin::One)), None);
        let g = largest_gap(&set(&[2, 3, 9, 10], 12)).unwrap();
        assert_eq!(g, Gap { from: 3, to: 9, len: 6 });
    }

    #[test]
    fn difference_set_examples() {
        let d = difference_set(&set(&[2, 5, 9], 10), 10).unwrap();
        assert_eq!(d.members(), &[3, 4, 7]);
        let d = difference_set(&evens(100), 50).unwrap();
        assert_eq!(d, FiniteSubset::from_predicate(50, Origin::One, |x| x % 2 == 0));
        assert!(difference_set(&evens(10), 11).is_err());
    }

    #[test]
    fn shift_intersection_examples() {
        let a = FiniteSubset::interval(1, 10, 10).unwrap();
        let m = shift_intersection(&a, 2, 2).unwrap();
        assert_eq!(m.members(), &[1, 2, 3, 4, 5, 6]);
        assert_eq!(m.horizon(), 6);
        assert!(shift_intersection(&evens(100), 3, 1).unwrap().is_empty());
        assert!(shift_intersection(&a, 6, 2).is_err());
        assert!(shift_intersection(&a, 0, 2).is_err());
    }

    #[test]
    fn longest_ap_examples() {
        let p = longest_ap(&set(&[1, 3, 5, 9], 9), 10).unwrap();
        assert_eq!(p, Progression { start: 1, step: 2, length: 3 });
        let p = longest_ap(&FiniteSubset::interval(4, 20, 30).unwrap(), 100).unwrap();
        assert_eq!(p, Progression { start: 4, step: 1, length: 17 });
        let p = longest_ap(&FiniteSubset::interval(4, 20, 30).unwrap(), 5).unwrap();
        assert_eq!(p, Progression { start: 4, step: 1, length: 5 });
        let p = longest_ap(&set(&[7, 30], 40), 3).unwrap();
        assert_eq!(p, Progression { start: 7, step: 0, length: 2 });
        assert!(longest_ap(&set(&[1], 4), 2).is_err());
    }

    #[test]
    fn longest_ap_ties_prefer_small_step_then_start() {
        // {1,2} ∪ {10,13,16}: only one 3-term AP
        let p = longest_ap(&set(&[1, 2, 10, 13, 16], 20), 5).unwrap();
        assert_eq!(p, Progression { start: 10, step: 3, length: 3 });
        // 3-APs with step 1 at 5 and 11, and larger steps elsewhere
        let p = longest_ap(&set(&[5, 6, 7, 11, 12, 13, 20, 22, 24], 30), 5).unwrap();
        assert_eq!(p, Progression { start: 5, step: 1, length: 3 });
    }

    #[test]
    fn dilate_preimage_examples() {
        let p = dilate_preimage(&evens(100), 2).unwrap();
        assert_eq!(p, FiniteSubset::interval(1, 50, 50).unwrap());
        let p = dilate_preimage(&set(&[17, 34, 51], 60), 17).unwrap();
        assert_eq!(p.members(), &[1, 2, 3]);
        assert_eq!(p.horizon(), 3);
    }

    #[test]
    fn complement_runs_locate_holes() {
        let a = set(&[1, 4, 5, 9], 12);
        assert_eq!(a.complement_runs(1, 12), vec![(2, 3), (6, 8), (10, 12)]);
        assert_eq!(a.complement_runs(4, 5), vec![]);
    }

    #[test]
    fn prefix_counts_skip_zero() {
        let a = FiniteSubset::new(vec![0, 1, 3], 4, Origin::Zero).unwrap();
        assert_eq!(a.prefix_counts(), vec![0, 1, 1, 2, 2]);
    }

    #[test]
    fn window_floor_excludes_early_windows() {
        // sparse start, dense tail
        let a = FiniteSubset::from_predicate(100, Origin::One, |x| x > 50);
        let r = density_report_from(&a, &[10], 50).unwrap();
        assert_eq!(r.window_min_counts, vec![10]);
        let r = density_report(&a, &[10]).unwrap();
        assert_eq!(r.window_min_counts, vec![0]);
    }

    #[test]
    fn back_half_ordering_can_fail_by_a_remainder_window() {
        // odds at odd horizon: prefix ratio 2/3 at n = 3 beats α̂^2/2 = 1/2
        let odds = FiniteSubset::from_predicate(5, Origin::One, |x| x % 2 == 1);
        let r = density_report(&odds, &[2]).unwrap();
        assert!(r.prefix_ratio_max.ratio > r.upper_estimate(2).unwrap());
        // the guaranteed bound c(n) ≤ q·α̂^s + min(n mod s, α̂^s) still holds
        let alpha = r.window_max_counts[0];
        let q = r.prefix_ratio_max.n / 2;
        let rem = r.prefix_ratio_max.n % 2;
        assert!(r.prefix_ratio_max.count <= q * alpha + rem.min(alpha));
    }
}
