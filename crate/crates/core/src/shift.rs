//! Action of `B_w` and its powers on finitely supported vectors.
//!
//! Coefficients are exact rationals while every weight product met along the
//! way is an integral power of two; otherwise they fall back to a sign and a
//! log2 magnitude. Because every vector here is finitely supported, norms are
//! finite sums and ball tests are decidable up to floating rounding, which is
//! reported as a separate `Borderline` outcome.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::{FiniteSubset, Origin};
use crate::error::{Error, Result};
use crate::numeric::{log2_abs_rational, pow2, rational_to_f64, LogValue};
use crate::weights::{LogProductTable, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    /// `ℓ^p` with integer `p ≥ 1`.
    Lp(u32),
    C0,
}

impl Space {
    pub fn lp(p: u32) -> Result<Self> {
        if p == 0 {
            return Err(Error::range("ℓ^p needs p ≥ 1"));
        }
        Ok(Space::Lp(p))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Coeff {
    Exact(BigRational),
    Float { negative: bool, log2: f64 },
}

impl Coeff {
    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Exact(r) => r.is_zero(),
            Coeff::Float { log2, .. } => *log2 == f64::NEG_INFINITY,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Coeff::Exact(r) => r.is_negative(),
            Coeff::Float { negative, .. } => *negative,
        }
    }

    pub fn log2_abs(&self) -> f64 {
        match self {
            Coeff::Exact(r) => log2_abs_rational(r),
            Coeff::Float { log2, .. } => *log2,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Coeff::Exact(r) => rational_to_f64(r),
            Coeff::Float { negative, log2 } => {
                let m = log2.exp2();
                if *negative {
                    -m
                } else {
                    m
                }
            }
        }
    }

    fn to_float(&self) -> Coeff {
        Coeff::Float {
            negative: self.is_negative(),
            log2: self.log2_abs(),
        }
    }

    /// Multiplies by `2^by`; exact when both sides are.
    pub fn scale_pow2(&self, by: &LogValue) -> Coeff {
        match (self, by.as_integer()) {
            (Coeff::Exact(r), Some(k)) => Coeff::Exact(r * pow2(&k)),
            _ => Coeff::Float {
                negative: self.is_negative(),
                log2: self.log2_abs() + by.to_f64(),
            },
        }
    }

    pub fn neg(&self) -> Coeff {
        match self {
            Coeff::Exact(r) => Coeff::Exact(-r),
            Coeff::Float { negative, log2 } => Coeff::Float {
                negative: !negative,
                log2: *log2,
            },
        }
    }

    /// Sum with the factor by which relative input errors may be amplified.
    fn add(&self, other: &Coeff) -> (Coeff, f64) {
        if let (Coeff::Exact(a), Coeff::Exact(b)) = (self, other) {
            return (Coeff::Exact(a + b), 1.0);
        }
        let (a, b) = (self.to_float(), other.to_float());
        let (Coeff::Float { negative: na, log2: la }, Coeff::Float { negative: nb, log2: lb }) =
            (&a, &b)
        else {
            unreachable!()
        };
        if la.is_infinite() && *la < 0.0 {
            return (b.clone(), 1.0);
        }
        if lb.is_infinite() && *lb < 0.0 {
            return (a.clone(), 1.0);
        }
        let (hi, lo, neg_hi) = if la >= lb { (*la, *lb, *na) } else { (*lb, *la, *nb) };
        let d = (lo - hi).exp2();
        let (mag, amplification) = if na == nb {
            (1.0 + d, 1.0)
        } else {
            (1.0 - d, (1.0 + d) / (1.0 - d))
        };
        if mag == 0.0 {
            return (
                Coeff::Float {
                    negative: false,
                    log2: f64::NEG_INFINITY,
                },
                f64::INFINITY,
            );
        }
        (
            Coeff::Float {
                negative: neg_hi,
                log2: hi + mag.log2(),
            },
            amplification,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Exact { num: String, den: String },
    Float { negative: bool, log2: f64 },
}

impl Serialize for Coeff {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Coeff::Exact(r) => CoeffRepr::Exact {
                num: r.numer().to_string(),
                den: r.denom().to_string(),
            },
            Coeff::Float { negative, log2 } => CoeffRepr::Float {
                negative: *negative,
                log2: *log2,
            },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Coeff {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(match CoeffRepr::deserialize(d)? {
            CoeffRepr::Exact { num, den } => {
                let n = num.parse().map_err(serde::de::Error::custom)?;
                let d: num_bigint::BigInt = den.parse().map_err(serde::de::Error::custom)?;
                if d.is_zero() {
                    return Err(serde::de::Error::custom("zero denominator"));
                }
                Coeff::Exact(BigRational::new(n, d))
            }
            CoeffRepr::Float { negative, log2 } => Coeff::Float { negative, log2 },
        })
    }
}

/// A finitely supported vector of `ℓ^p` or `c₀` over `ℤ₊` or `ℤ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiniteVector {
    space: Space,
    side: Side,
    entries: BTreeMap<i64, Coeff>,
    /// Bound on the log2 error of every float coefficient.
    log2_error: f64,
}

impl FiniteVector {
    pub fn zero(space: Space, side: Side) -> Self {
        FiniteVector {
            space,
            side,
            entries: BTreeMap::new(),
            log2_error: 0.0,
        }
    }

    pub fn basis(space: Space, side: Side, index: i64) -> Result<Self> {
        let mut v = Self::zero(space, side);
        v.insert(index, Coeff::Exact(BigRational::one()))?;
        Ok(v)
    }

    pub fn from_rationals(
        space: Space,
        side: Side,
        entries: impl IntoIterator<Item = (i64, BigRational)>,
    ) -> Result<Self> {
        let mut v = Self::zero(space, side);
        for (i, c) in entries {
            let sum = match v.entries.remove(&i) {
                Some(Coeff::Exact(prev)) => prev + c,
                _ => c,
            };
            v.insert(i, Coeff::Exact(sum))?;
        }
        Ok(v)
    }

    /// Sets a coefficient; zeros are dropped.
    pub fn insert(&mut self, index: i64, c: Coeff) -> Result<()> {
        if self.side == Side::Unilateral && index < 0 {
            return Err(Error::range(format!(
                "index {index} is invalid for a unilateral vector"
            )));
        }
        if let Coeff::Float { log2, .. } = c {
            if log2.is_nan() || log2 == f64::INFINITY {
                return Err(Error::NonFinite(index));
            }
        }
        if c.is_zero() {
            self.entries.remove(&index);
        } else {
            self.entries.insert(index, c);
        }
        Ok(())
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn get(&self, index: i64) -> Option<&Coeff> {
        self.entries.get(&index)
    }

    pub fn entries(&self) -> impl Iterator<Item = (i64, &Coeff)> {
        self.entries.iter().map(|(&i, c)| (i, c))
    }

    pub fn support(&self) -> Vec<i64> {
        self.entries.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.entries.values().all(|c| matches!(c, Coeff::Exact(_)))
    }

    pub fn log2_error(&self) -> f64 {
        self.log2_error
    }

    pub fn max_index(&self) -> Option<i64> {
        self.entries.keys().next_back().copied()
    }

    pub fn min_index(&self) -> Option<i64> {
        self.entries.keys().next().copied()
    }

    pub fn add(&self, other: &FiniteVector) -> Result<FiniteVector> {
        if self.space != other.space || self.side != other.side {
            return Err(Error::range("vectors live in different spaces"));
        }
        let mut out = self.clone();
        let mut err = self.log2_error.max(other.log2_error);
        for (&i, c) in &other.entries {
            match out.entries.remove(&i) {
                Some(prev) => {
                    let (sum, amp) = prev.add(c);
                    if !matches!(sum, Coeff::Exact(_)) {
                        err = err.max(err * amp + f64::EPSILON);
                    }
                    out.insert(i, sum)?;
                }
                None => out.insert(i, c.clone())?,
            }
        }
        out.log2_error = err;
        Ok(out)
    }

    pub fn scale(&self, by: &BigRational) -> FiniteVector {
        let mut out = FiniteVector::zero(self.space, self.side);
        out.log2_error = self.log2_error;
        if by.is_zero() {
            return out;
        }
        for (&i, c) in &self.entries {
            let scaled = match c {
                Coeff::Exact(r) => Coeff::Exact(r * by),
                Coeff::Float { negative, log2 } => Coeff::Float {
                    negative: *negative != by.is_negative(),
                    log2: log2 + log2_abs_rational(by),
                },
            };
            out.entries.insert(i, scaled);
        }
        out
    }

    /// Restriction to `window`.
    pub fn restrict(&self, window: &RangeInclusive<i64>) -> FiniteVector {
        let mut out = FiniteVector::zero(self.space, self.side);
        out.log2_error = self.log2_error;
        out.entries = self
            .entries
            .range(window.clone())
            .map(|(&i, c)| (i, c.clone()))
            .collect();
        out
    }
}

fn check_side(table: &LogProductTable, x: &FiniteVector) -> Result<()> {
    if table.side() != x.side() {
        return Err(Error::range("vector and weights are on different sides"));
    }
    Ok(())
}

/// `B_w^n x` restricted to `window` (or the whole image when `None`).
///
/// `(B_w^n x)_j = (∏_{i=j+1}^{j+n} w_i)·x_{j+n}`; on the unilateral side indices
/// pushed below 0 are annihilated.
pub fn apply_power(
    table: &LogProductTable,
    x: &FiniteVector,
    n: u64,
    window: Option<RangeInclusive<i64>>,
) -> Result<FiniteVector> {
    check_side(table, x)?;
    let n = n as i64;
    if let Some(w) = &window {
        let floor = match table.side() {
            Side::Unilateral => 0,
            Side::Bilateral => table.lo(),
        };
        if *w.start() < floor || w.end().saturating_add(n) > table.hi() {
            return Err(Error::range(format!(
                "window [{}, {}] with n = {n} leaves the weight range [{}, {}]",
                w.start(),
                w.end(),
                table.lo(),
                table.hi()
            )));
        }
    }
    let mut out = FiniteVector::zero(x.space(), x.side());
    let mut err = x.log2_error;
    for (&idx, c) in &x.entries {
        let j = idx - n;
        if x.side == Side::Unilateral && j < 0 {
            continue;
        }
        if let Some(w) = &window {
            if !w.contains(&j) {
                continue;
            }
        }
        let (prod, e) = table.product(j, idx)?;
        let scaled = c.scale_pow2(&prod);
        if !matches!(scaled, Coeff::Exact(_)) {
            err = err.max(x.log2_error + e + f64::EPSILON * scaled.log2_abs().abs());
        }
        out.insert(j, scaled)?;
    }
    out.log2_error = err;
    Ok(out)
}

/// The vector `x` supported on `supp(y) + n` with `B_w^n x = y`.
pub fn pullback(table: &LogProductTable, y: &FiniteVector, n: u64) -> Result<FiniteVector> {
    check_side(table, y)?;
    if n == 0 {
        return Err(Error::range("pullback needs n ≥ 1"));
    }
    let n = n as i64;
    let mut out = FiniteVector::zero(y.space(), y.side());
    let mut err = y.log2_error;
    for (&j, c) in &y.entries {
        let (prod, e) = table.product(j, j + n)?;
        let scaled = c.scale_pow2(&prod.neg());
        if !matches!(scaled, Coeff::Exact(_)) {
            err = err.max(y.log2_error + e + f64::EPSILON * scaled.log2_abs().abs());
        }
        out.insert(j + n, scaled)?;
    }
    out.log2_error = err;
    Ok(out)
}

/// Either an exact value or a log2 magnitude.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormValue {
    /// `Σ|x_k|^p` for `ℓ^p`, `max|x_k|` for `c₀`, when exact.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<crate::numeric::RationalRepr>,
    /// log2 of the same quantity.
    pub log2: f64,
}

fn log_sum_exp2(terms: impl Iterator<Item = f64>) -> f64 {
    let terms: Vec<f64> = terms.filter(|t| *t > f64::NEG_INFINITY).collect();
    let Some(max) = terms.iter().copied().reduce(f64::max) else {
        return f64::NEG_INFINITY;
    };
    max + terms.iter().map(|t| (t - max).exp2()).sum::<f64>().log2()
}

/// `Σ|c|^p` (or `max|c|`) over the given coefficients.
fn norm_value<'a>(space: Space, coeffs: impl Iterator<Item = &'a Coeff> + Clone) -> NormValue {
    let exact = coeffs.clone().all(|c| matches!(c, Coeff::Exact(_)));
    let log2 = match space {
        Space::Lp(p) => log_sum_exp2(coeffs.clone().map(|c| p as f64 * c.log2_abs())),
        Space::C0 => coeffs
            .clone()
            .map(Coeff::log2_abs)
            .fold(f64::NEG_INFINITY, f64::max),
    };
    let exact = exact.then(|| {
        let rationals = coeffs.map(|c| match c {
            Coeff::Exact(r) => r.abs(),
            Coeff::Float { .. } => unreachable!(),
        });
        let v = match space {
            Space::Lp(p) => rationals.fold(BigRational::zero(), |acc, r| acc + num_traits::pow(r, p as usize)),
            Space::C0 => rationals.fold(BigRational::zero(), |acc, r| if r > acc { r } else { acc }),
        };
        crate::numeric::RationalRepr::from(&v)
    });
    NormValue { exact, log2 }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleBlock {
    pub time: u64,
    pub target: FiniteVector,
    pub pullback: FiniteVector,
}

/// `x = Σ_s pullback(y_s, t_s)` with pairwise disjoint pullback supports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduledVector {
    space: Space,
    blocks: Vec<ScheduleBlock>,
    vector: FiniteVector,
}

impl ScheduledVector {
    pub fn vector(&self) -> &FiniteVector {
        &self.vector
    }

    pub fn blocks(&self) -> &[ScheduleBlock] {
        &self.blocks
    }

    pub fn times(&self) -> Vec<u64> {
        self.blocks.iter().map(|b| b.time).collect()
    }

    pub fn space(&self) -> Space {
        self.space
    }

    /// `Σ_{k>K} |x_k|^p` (`sup` for `c₀`), exact since the schedule is finite.
    pub fn tail_bound(&self, k: i64) -> NormValue {
        norm_value(
            self.space,
            self.vector.entries.range(k.saturating_add(1)..).map(|(_, c)| c),
        )
    }

    pub fn norm(&self) -> NormValue {
        norm_value(self.space, self.vector.entries.values())
    }
}

/// A vector that, for each `(t_s, y_s)`, carries the pullback of `y_s` by
/// `t_s` steps, so that its orbit passes near `y_s` at time `t_s`.
pub fn build_schedule(
    table: &LogProductTable,
    targets: &[(u64, FiniteVector)],
    space: Space,
) -> Result<ScheduledVector> {
    if let Some(w) = targets.windows(2).find(|w| w[0].0 >= w[1].0) {
        return Err(Error::range(format!(
            "schedule times must increase strictly: {} then {}",
            w[0].0, w[1].0
        )));
    }
    let mut owner: BTreeMap<i64, usize> = BTreeMap::new();
    let mut collisions = Vec::new();
    let mut blocks = Vec::with_capacity(targets.len());
    let mut vector = FiniteVector::zero(space, table.side());
    for (s, (t, y)) in targets.iter().enumerate() {
        if y.space() != space {
            return Err(Error::range("schedule target in a different space"));
        }
        let x = pullback(table, y, *t)?;
        for (&i, c) in &x.entries {
            if owner.insert(i, s).is_some() {
                collisions.push(i);
            }
            if !c.log2_abs().is_finite() {
                return Err(Error::NonFinite(i));
            }
            vector.entries.insert(i, c.clone());
        }
        vector.log2_error = vector.log2_error.max(x.log2_error);
        blocks.push(ScheduleBlock {
            time: *t,
            target: y.clone(),
            pullback: x,
        });
    }
    if !collisions.is_empty() {
        return Err(Error::SupportCollision(collisions));
    }
    Ok(ScheduledVector {
        space,
        blocks,
        vector,
    })
}

/// Open ball `B(center; radius)` in the center's space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallQuery {
    pub center: FiniteVector,
    #[serde(with = "rational_serde")]
    pub radius: BigRational,
}

mod rational_serde {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::numeric::RationalRepr;

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        RationalRepr::from(r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let repr = RationalRepr::deserialize(d)?;
        let n = repr.num.parse().map_err(serde::de::Error::custom)?;
        let den: num_bigint::BigInt = repr.den.parse().map_err(serde::de::Error::custom)?;
        if num_traits::Zero::is_zero(&den) {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(BigRational::new(n, den))
    }
}

impl BallQuery {
    pub fn new(center: FiniteVector, radius: BigRational) -> Result<Self> {
        if !radius.is_positive() {
            return Err(Error::range(format!("ball radius must be positive, got {radius}")));
        }
        Ok(BallQuery { center, radius })
    }

    pub fn space(&self) -> Space {
        self.center.space()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum BallVerdict {
    In,
    Out,
    /// `|radius - distance|` does not exceed the rounding bound.
    Borderline { margin: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallOutcome {
    pub verdict: BallVerdict,
    /// `radius - ‖v - center‖`, in linear units (may underflow to 0).
    pub margin: f64,
    pub log2_distance: f64,
    pub exact: bool,
}

/// Decides `‖v - center‖ < radius` for an explicit vector `v`.
pub fn ball_contains(v: &FiniteVector, q: &BallQuery) -> Result<BallOutcome> {
    if v.space() != q.space() || v.side() != q.center.side() {
        return Err(Error::range("vector and ball live in different spaces"));
    }
    let diff = v.add(&q.center.scale(&-BigRational::one()))?;
    let dist = norm_value(q.space(), diff.entries.values());
    let exact = dist.exact.is_some() && v.is_exact() && q.center.is_exact();
    let p = match q.space() {
        Space::Lp(p) => p as f64,
        Space::C0 => 1.0,
    };
    let log2_distance = dist.log2 / p;
    let log2_radius = log2_abs_rational(&q.radius);
    let rel = (log2_distance - log2_radius).exp2();
    let margin = rational_to_f64(&q.radius) * (1.0 - rel);

    if exact {
        let d = dist.exact.as_ref().expect("exact");
        let d = BigRational::new(d.num.parse().expect("int"), d.den.parse().expect("int"));
        let bound = match q.space() {
            Space::Lp(p) => num_traits::pow(q.radius.clone(), p as usize),
            Space::C0 => q.radius.clone(),
        };
        let verdict = if d < bound { BallVerdict::In } else { BallVerdict::Out };
        return Ok(BallOutcome {
            verdict,
            margin,
            log2_distance,
            exact: true,
        });
    }

    // relative error of ‖v‖ carried into ‖v - c‖, plus rounding of the sums
    let v_norm = norm_value(q.space(), v.entries.values()).log2 / p;
    let rel_input = (v.log2_error * std::f64::consts::LN_2).max(f64::EPSILON);
    let terms = (diff.len() + 2) as f64;
    let band = rel_input * (v_norm - log2_radius).exp2() + 4.0 * terms * f64::EPSILON * rel.max(1.0);
    let slack = 1.0 - rel;
    let verdict = if slack.abs() <= band || slack.is_nan() {
        BallVerdict::Borderline { margin }
    } else if slack > 0.0 {
        BallVerdict::In
    } else {
        BallVerdict::Out
    };
    Ok(BallOutcome {
        verdict,
        margin,
        log2_distance,
        exact: false,
    })
}

/// Optional per-step scaling `λ_n B_w^n x`, given as `log2 λ_n` for `n ≥ 0`.
pub type Scaling<'a> = Option<&'a [LogValue]>;

/// The orbit point `λ_n B_w^n x`.
pub fn orbit_point(
    table: &LogProductTable,
    x: &FiniteVector,
    n: u64,
    scaling: Scaling<'_>,
) -> Result<FiniteVector> {
    let v = apply_power(table, x, n, None)?;
    match scaling {
        None => Ok(v),
        Some(lambda) => {
            let l = lambda.get(n as usize).ok_or_else(|| {
                Error::range(format!("scaling sequence ends before n = {n}"))
            })?;
            let mut out = FiniteVector::zero(v.space(), v.side());
            out.log2_error = v.log2_error;
            for (&i, c) in &v.entries {
                out.insert(i, c.scale_pow2(l))?;
            }
            Ok(out)
        }
    }
}

pub fn ball_membership(
    table: &LogProductTable,
    x: &ScheduledVector,
    n: u64,
    q: &BallQuery,
) -> Result<BallOutcome> {
    ball_contains(&orbit_point(table, x.vector(), n, None)?, q)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReturnSet {
    /// `{n ≤ N : λ_n B_w^n x ∈ B}`, borderline times excluded.
    pub set: FiniteSubset,
    pub borderline: Vec<u64>,
}

/// `N(x, U) ∩ [0, N]`.
pub fn return_set(
    table: &LogProductTable,
    x: &FiniteVector,
    q: &BallQuery,
    horizon: u64,
    scaling: Scaling<'_>,
) -> Result<ReturnSet> {
    if let Some(max) = x.max_index() {
        if max > table.hi() {
            return Err(Error::range(format!(
                "vector support reaches {max}, beyond the weight range {}",
                table.hi()
            )));
        }
    }
    let outcomes: Vec<(u64, BallVerdict)> = (0..=horizon)
        .into_par_iter()
        .map(|n| {
            let v = orbit_point(table, x, n, scaling)?;
            Ok((n, ball_contains(&v, q)?.verdict))
        })
        .collect::<Result<_>>()?;
    let mut members = Vec::new();
    let mut borderline = Vec::new();
    for (n, v) in outcomes {
        match v {
            BallVerdict::In => members.push(n),
            BallVerdict::Borderline { .. } => borderline.push(n),
            BallVerdict::Out => {}
        }
    }
    Ok(ReturnSet {
        set: FiniteSubset::new(members, horizon, Origin::Zero)?,
        borderline,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::WeightSequence;
    use num_bigint::BigInt;

    const L2: Space = Space::Lp(2);

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn e(i: i64) -> FiniteVector {
        FiniteVector::basis(L2, Side::Unilateral, i).unwrap()
    }

    fn twos(n: u64) -> LogProductTable {
        WeightSequence::dyadic_constant(1).table(n).unwrap()
    }

    #[test]
    fn power_of_constant_two() {
        let t = twos(10);
        let v = apply_power(&t, &e(3), 3, None).unwrap();
        assert_eq!(v.get(0), Some(&Coeff::Exact(q(8, 1))));
        assert_eq!(v.len(), 1);
        let same = apply_power(&t, &e(3), 0, None).unwrap();
        assert_eq!(same, e(3));
        assert!(apply_power(&t, &e(3), 4, None).unwrap().is_empty());
        assert!(apply_power(&t, &e(3), 1, Some(0..=10)).is_err());
    }

    #[test]
    fn pullback_inverts() {
        let t = twos(10);
        let x = pullback(&t, &e(0), 3).unwrap();
        assert_eq!(x.get(3), Some(&Coeff::Exact(q(1, 8))));
        assert_eq!(apply_power(&t, &x, 3, None).unwrap(), e(0));
        assert!(pullback(&t, &e(0), 0).is_err());
    }

    #[test]
    fn menet_pullback_coefficient() {
        let t = WeightSequence::menet(2.0).unwrap().table(200).unwrap();
        let x = pullback(&t, &e(0), 99).unwrap();
        let c = x.get(99).unwrap().to_f64();
        assert!((c - 100f64.powf(-0.25)).abs() < 1e-14);
        let back = apply_power(&t, &x, 99, None).unwrap();
        assert!((back.get(0).unwrap().to_f64() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn schedule_single_and_double_block() {
        let t = twos(64);
        let x = build_schedule(&t, &[(5, e(0))], L2).unwrap();
        assert_eq!(x.vector().get(5), Some(&Coeff::Exact(q(1, 32))));
        assert_eq!(x.norm().log2, -10.0);

        let x = build_schedule(&t, &[(5, e(0)), (20, e(0))], L2).unwrap();
        let v = orbit_point(&t, x.vector(), 5, None).unwrap();
        let d = v.add(&e(0).scale(&q(-1, 1))).unwrap();
        assert_eq!(d.support(), vec![15]);
        assert_eq!(d.get(15), Some(&Coeff::Exact(q(1, 1 << 15))));
        assert_eq!(x.tail_bound(5).log2, -40.0);
        assert_eq!(x.tail_bound(20).log2, f64::NEG_INFINITY);
    }

    #[test]
    fn schedule_rejections() {
        let t = twos(64);
        let err = build_schedule(&t, &[(5, e(0)), (5, e(1))], L2).unwrap_err();
        assert!(matches!(err, Error::OutOfRange(_)));
        let err = build_schedule(&t, &[(5, e(1)), (6, e(0))], L2).unwrap_err();
        assert!(matches!(err, Error::SupportCollision(ref v) if v == &vec![6]));
    }

    #[test]
    fn ball_examples() {
        let t = twos(64);
        let half = BallQuery::new(e(0), q(1, 2)).unwrap();
        let x = build_schedule(&t, &[(5, e(0))], L2).unwrap();
        let o = ball_membership(&t, &x, 5, &half).unwrap();
        assert_eq!(o.verdict, BallVerdict::In);
        assert_eq!(o.margin, 0.5);

        let zero_ball = BallQuery::new(FiniteVector::zero(L2, Side::Unilateral), q(1, 1 << 30)).unwrap();
        let x0 = build_schedule(&t, &[], L2).unwrap();
        assert!(x0.vector().is_empty());
        let v = orbit_point(&t, &e(0), 1, None).unwrap();
        assert_eq!(ball_contains(&v, &zero_ball).unwrap().verdict, BallVerdict::In);

        let x = build_schedule(&t, &[(5, e(0)), (20, e(0))], L2).unwrap();
        let tight = BallQuery::new(e(0), q(1, 1 << 10)).unwrap();
        let o = ball_membership(&t, &x, 5, &tight).unwrap();
        assert_eq!(o.verdict, BallVerdict::In);
        assert_eq!(o.margin, (2f64).powi(-10) - (2f64).powi(-15));
        assert!(BallQuery::new(e(0), q(0, 1)).is_err());
    }

    #[test]
    fn return_set_of_finitely_supported_vector() {
        let t = WeightSequence::menet(2.0).unwrap().table(100).unwrap();
        let zero_ball = BallQuery::new(FiniteVector::zero(L2, Side::Unilateral), q(1, 2)).unwrap();
        let r = return_set(&t, &e(0), &zero_ball, 50, None).unwrap();
        assert_eq!(r.set.members(), (1..=50).collect::<Vec<_>>().as_slice());
        assert!(r.borderline.is_empty());
    }

    #[test]
    fn c0_norm_is_max() {
        let t = twos(64);
        let v = FiniteVector::from_rationals(Space::C0, Side::Unilateral, [(0, q(3, 4)), (1, q(1, 2))]).unwrap();
        let ball = BallQuery::new(FiniteVector::zero(Space::C0, Side::Unilateral), q(4, 5)).unwrap();
        assert_eq!(ball_contains(&v, &ball).unwrap().verdict, BallVerdict::In);
        let ball = BallQuery::new(FiniteVector::zero(Space::C0, Side::Unilateral), q(3, 4)).unwrap();
        assert_eq!(ball_contains(&v, &ball).unwrap().verdict, BallVerdict::Out);
        let _ = t;
    }

    #[test]
    fn float_borderline_is_reported() {
        let t = WeightSequence::menet(1.0).unwrap().table(100).unwrap();
        // B^3 e_3 = 2·e_0 exactly in theory: (3+1)^{1/2}
        let v = apply_power(&t, &e(3), 3, None).unwrap();
        let ball = BallQuery::new(FiniteVector::zero(L2, Side::Unilateral), q(2, 1)).unwrap();
        assert!(matches!(
            ball_contains(&v, &ball).unwrap().verdict,
            BallVerdict::Borderline { .. }
        ));
    }
}
