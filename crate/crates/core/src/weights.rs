//! Weight sequences, their log2 prefix-product tables, and the product
//! criteria that characterize syndetic, mixing and multiply recurrent
//! weighted backward shifts.
//!
//! `B_w e_n = w_n e_{n-1}`, so `(B_w^n x)_j = (∏_{i=j+1}^{j+n} w_i) x_{j+n}`.
//! Every product is read off a [`LogProductTable`] as `L(j+n) - L(j)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::density::{dilate_preimage, largest_gap, FiniteSubset, Gap, Origin};
use crate::error::{Error, Result};
use crate::family::{family_membership, FamilyProxy, Witness};
use crate::numeric::{
    exact_log2, log2_abs_rational, CompensatedSum, Decision, LogValue, Threshold,
    FLOAT_STEP_ERROR,
};

/// Upper bound on realized table lengths.
pub const MAX_TABLE_LEN: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Unilateral,
    Bilateral,
}

/// Generator behind a weight sequence; `Display` renders the DSL form.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightKind {
    /// `w ≡ λ`.
    Rolewicz { lambda: BigRational },
    /// `w_ν = ((ν+1)/ν)^{1/(2p)}`.
    Menet { p: f64 },
    /// Bilateral: `w_i = a` for `i ≥ 1`, `w_i = b` for `i ≤ 0`.
    TwoSided { a: BigRational, b: BigRational },
    /// Stage construction of a multiply recurrent, non-syndetic shift.
    Prop2 { stages: u32 },
    /// Unweighted shift paired with the dyadic-block scaling sequence.
    Example313 { m: u64 },
    File { path: String },
}

impl fmt::Display for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightKind::Rolewicz { lambda } => write!(f, "rolewicz({lambda})"),
            WeightKind::Menet { p } => write!(f, "menet({p})"),
            WeightKind::TwoSided { a, b } => write!(f, "bilateral({a},{b})"),
            WeightKind::Prop2 { stages } => write!(f, "prop2({stages})"),
            WeightKind::Example313 { m } => write!(f, "example313({m})"),
            WeightKind::File { path } => write!(f, "file({path})"),
        }
    }
}

fn log2_of_weight(v: &BigRational) -> Result<LogValue> {
    if v.is_zero() {
        return Err(Error::ZeroWeight(0));
    }
    let abs = v.abs();
    Ok(match exact_log2(&abs) {
        Some(k) => LogValue::Exact(BigRational::from_integer(k)),
        None => LogValue::Float(log2_abs_rational(&abs)),
    })
}

#[derive(Clone, Debug)]
pub struct WeightSequence {
    kind: WeightKind,
    side: Side,
    /// Realized logs for finite generators: indices `1..=len` (unilateral) or
    /// `-len..=len` (bilateral, stored from `-len`).
    data: Option<Vec<LogValue>>,
    exact: bool,
    constant: Option<(LogValue, LogValue)>,
}

impl WeightSequence {
    pub fn rolewicz(lambda: BigRational) -> Result<Self> {
        let log = log2_of_weight(&lambda)?;
        Ok(WeightSequence {
            exact: log.is_exact(),
            constant: Some((log.clone(), log)),
            kind: WeightKind::Rolewicz { lambda },
            side: Side::Unilateral,
            data: None,
        })
    }

    /// `w ≡ 2^k`.
    pub fn dyadic_constant(k: i64) -> Self {
        let lambda = crate::numeric::pow2(&BigInt::from(k));
        Self::rolewicz(lambda).expect("powers of two are non-zero")
    }

    pub fn menet(p: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::range(format!("menet exponent p must be ≥ 1, got {p}")));
        }
        Ok(WeightSequence {
            kind: WeightKind::Menet { p },
            side: Side::Unilateral,
            data: None,
            exact: false,
            constant: None,
        })
    }

    pub fn two_sided(a: BigRational, b: BigRational) -> Result<Self> {
        let la = log2_of_weight(&a)?;
        let lb = log2_of_weight(&b)?;
        Ok(WeightSequence {
            exact: la.is_exact() && lb.is_exact(),
            constant: Some((la, lb)),
            kind: WeightKind::TwoSided { a, b },
            side: Side::Bilateral,
            data: None,
        })
    }

    /// A finite sequence of log2 weights. Unilateral data covers `1..=len`;
    /// bilateral data has odd length `2N+1` and covers `-N..=N`.
    pub fn from_logs(kind: WeightKind, side: Side, logs: Vec<LogValue>) -> Result<Self> {
        if logs.is_empty() {
            return Err(Error::range("weight data is empty"));
        }
        if side == Side::Bilateral && logs.len() % 2 == 0 {
            return Err(Error::range("bilateral weight data needs 2N+1 entries"));
        }
        if let Some(i) = logs.iter().position(|v| !v.to_f64().is_finite()) {
            return Err(Error::NonFinite(i as i64 + 1));
        }
        let exact = logs.iter().all(LogValue::is_exact);
        Ok(WeightSequence {
            kind,
            side,
            data: Some(logs),
            exact,
            constant: None,
        })
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    pub(crate) fn set_kind(&mut self, kind: WeightKind) {
        self.kind = kind;
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn spec(&self) -> String {
        self.kind.to_string()
    }

    /// Largest realizable index, `None` for closed-form generators.
    pub fn max_index(&self) -> Option<u64> {
        self.data.as_ref().map(|d| match self.side {
            Side::Unilateral => d.len() as u64,
            Side::Bilateral => (d.len() as u64 - 1) / 2,
        })
    }

    pub fn log2_weight(&self, i: i64) -> Result<LogValue> {
        if self.side == Side::Unilateral && i < 1 {
            return Err(Error::WeightRange {
                index: i,
                lo: 1,
                hi: self.max_index().map_or(i64::MAX, |m| m as i64),
            });
        }
        if let Some(data) = &self.data {
            let max = self.max_index().expect("finite data") as i64;
            let lo = if self.side == Side::Unilateral { 1 } else { -max };
            if i < lo || i > max {
                return Err(Error::WeightRange { index: i, lo, hi: max });
            }
            return Ok(data[(i - lo) as usize].clone());
        }
        if let Some((pos, neg)) = &self.constant {
            return Ok(if i >= 1 { pos.clone() } else { neg.clone() });
        }
        match self.kind {
            WeightKind::Menet { p } => Ok(LogValue::Float(menet_log2_weight(i as u64, p))),
            _ => unreachable!("closed-form generators carry a constant or a formula"),
        }
    }

    pub fn table(&self, horizon: u64) -> Result<LogProductTable> {
        LogProductTable::build(self, horizon)
    }
}

/// `log2 w_ν = log2(1 + 1/ν) / (2p)`, computed without cancellation.
pub fn menet_log2_weight(nu: u64, p: f64) -> f64 {
    (1.0 / nu as f64).ln_1p() / std::f64::consts::LN_2 / (2.0 * p)
}

#[derive(Clone, Debug)]
enum TableValues {
    Exact(Vec<BigRational>),
    Float { values: Vec<f64>, err: Vec<f64> },
}

/// `L(n) = Σ_{i=1}^{n} log2|w_i|` for `n ∈ [lo, hi]`, with `L(0) = 0` and
/// `L(n) = -Σ_{i=n+1}^{0} log2|w_i|` for negative `n`, so that
/// `log2 ∏_{i=a+1}^{b} |w_i| = L(b) - L(a)` on the whole range.
#[derive(Clone, Debug)]
pub struct LogProductTable {
    spec: String,
    side: Side,
    lo: i64,
    hi: i64,
    values: TableValues,
}

impl LogProductTable {
    pub fn build(w: &WeightSequence, horizon: u64) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::range("table horizon must be positive"));
        }
        let span = match w.side {
            Side::Unilateral => horizon,
            Side::Bilateral => horizon.saturating_mul(2),
        };
        if span > MAX_TABLE_LEN {
            return Err(Error::Resource(format!(
                "prefix table of {span} entries exceeds the {MAX_TABLE_LEN} guard"
            )));
        }
        if let Some(max) = w.max_index() {
            if horizon > max {
                return Err(Error::range(format!(
                    "horizon {horizon} beyond the realized range {max} of {}",
                    w.spec()
                )));
            }
        }
        let hi = horizon as i64;
        let lo = match w.side {
            Side::Unilateral => 0,
            Side::Bilateral => -hi,
        };
        let len = (hi - lo + 1) as usize;
        let zero_at = (-lo) as usize;
        let values = if w.exact {
            let mut v = vec![BigRational::zero(); len];
            for n in 1..=hi {
                let LogValue::Exact(x) = w.log2_weight(n)? else {
                    unreachable!("exact sequence")
                };
                v[zero_at + n as usize] = &v[zero_at + n as usize - 1] + x;
            }
            for n in (lo..0).rev() {
                let LogValue::Exact(x) = w.log2_weight(n + 1)? else {
                    unreachable!("exact sequence")
                };
                let i = (n - lo) as usize;
                v[i] = &v[i + 1] - x;
            }
            TableValues::Exact(v)
        } else {
            let mut values = vec![0.0; len];
            let mut err = vec![0.0; len];
            let mut sum = CompensatedSum::default();
            let mut bound = 0.0;
            for n in 1..=hi {
                let x = w.log2_weight(n)?.to_f64();
                sum.add(x);
                bound += x.abs().max(1.0) * FLOAT_STEP_ERROR;
                values[zero_at + n as usize] = sum.value();
                err[zero_at + n as usize] = bound;
            }
            let mut sum = CompensatedSum::default();
            let mut bound = 0.0;
            for n in (lo..0).rev() {
                let x = w.log2_weight(n + 1)?.to_f64();
                sum.add(-x);
                bound += x.abs().max(1.0) * FLOAT_STEP_ERROR;
                let i = (n - lo) as usize;
                values[i] = sum.value();
                err[i] = bound;
            }
            TableValues::Float { values, err }
        };
        Ok(LogProductTable {
            spec: w.spec(),
            side: w.side,
            lo,
            hi,
            values,
        })
    }

    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn horizon(&self) -> u64 {
        self.hi as u64
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.values, TableValues::Exact(_))
    }

    fn slot(&self, n: i64) -> Result<usize> {
        if n < self.lo || n > self.hi {
            return Err(Error::WeightRange {
                index: n,
                lo: self.lo,
                hi: self.hi,
            });
        }
        Ok((n - self.lo) as usize)
    }

    /// `L(n)`.
    pub fn get(&self, n: i64) -> Result<LogValue> {
        let i = self.slot(n)?;
        Ok(match &self.values {
            TableValues::Exact(v) => LogValue::Exact(v[i].clone()),
            TableValues::Float { values, .. } => LogValue::Float(values[i]),
        })
    }

    /// Accumulated error bound of `L(n)` in log2 units (0 when exact).
    pub fn error(&self, n: i64) -> Result<f64> {
        let i = self.slot(n)?;
        Ok(match &self.values {
            TableValues::Exact(_) => 0.0,
            TableValues::Float { err, .. } => err[i],
        })
    }

    /// Exact `L(n)` when the table is rational.
    pub fn exact(&self, n: i64) -> Option<&BigRational> {
        match &self.values {
            TableValues::Exact(v) => self.slot(n).ok().map(|i| &v[i]),
            TableValues::Float { .. } => None,
        }
    }

    /// `log2 ∏_{i=a+1}^{b} |w_i| = L(b) - L(a)` and its error bound.
    pub fn product(&self, a: i64, b: i64) -> Result<(LogValue, f64)> {
        let (ia, ib) = (self.slot(a)?, self.slot(b)?);
        Ok(match &self.values {
            TableValues::Exact(v) => (LogValue::Exact(&v[ib] - &v[ia]), 0.0),
            TableValues::Float { values, err } => {
                (LogValue::Float(values[ib] - values[ia]), err[ib] + err[ia])
            }
        })
    }

    /// The largest error bound anywhere in the table.
    pub fn max_error(&self) -> f64 {
        match &self.values {
            TableValues::Exact(_) => 0.0,
            TableValues::Float { err, .. } => err.iter().copied().fold(0.0, f64::max),
        }
    }
}

/// Which criterion set: `A_{M;j}` (forward products) or `Ā_{M;j}`
/// (reciprocal products to the left of `j`, bilateral only).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Mirrored,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionSet {
    /// Members decided strictly above the threshold.
    pub set: FiniteSubset,
    /// Members whose comparison fell inside the floating error band.
    pub borderline: Vec<u64>,
}

impl CriterionSet {
    /// The set with borderline members included.
    pub fn loose(&self) -> FiniteSubset {
        let mut all = self.set.members().to_vec();
        all.extend_from_slice(&self.borderline);
        FiniteSubset::from_unsorted(all, self.set.horizon(), self.set.origin())
            .expect("borderline members lie in range")
    }
}

/// `A_{M;j} = {n : ∏_{i=j+1}^{j+n} |w_i| > M}` or
/// `Ā_{M;j} = {n : 1/∏_{i=j-n+1}^{j} |w_i| > M}` within the table's range.
pub fn criterion_set(
    table: &LogProductTable,
    m: &Threshold,
    j: i64,
    direction: Direction,
) -> Result<CriterionSet> {
    let limit = match (table.side, direction) {
        (Side::Unilateral, Direction::Mirrored) => {
            return Err(Error::range("the mirrored set is defined for bilateral weights"))
        }
        (Side::Unilateral, Direction::Forward) if j < 0 => {
            return Err(Error::range(format!("unilateral offset j must be ≥ 0, got {j}")))
        }
        (_, Direction::Forward) => table.hi - j,
        (_, Direction::Mirrored) => j - table.lo,
    };
    if j < table.lo || j > table.hi || limit < 1 {
        return Err(Error::range(format!(
            "offset j = {j} leaves no room in [{}, {}]",
            table.lo, table.hi
        )));
    }
    let mut members = Vec::new();
    let mut borderline = Vec::new();
    for n in 1..=limit {
        let (value, err) = match direction {
            Direction::Forward => table.product(j, j + n)?,
            Direction::Mirrored => {
                let (v, e) = table.product(j - n, j)?;
                (v.neg(), e)
            }
        };
        match m.test(&value, err) {
            Decision::Above => members.push(n as u64),
            Decision::Borderline => borderline.push(n as u64),
            Decision::NotAbove => {}
        }
    }
    Ok(CriterionSet {
        set: FiniteSubset::new(members, limit as u64, Origin::One)?,
        borderline,
    })
}

/// Radius `δ` with `(1-δ)/δ > M`: if `B_w^k` maps a point of `B(e_j, δ)` back
/// into `B(e_j, δ)` then `∏_{i=1}^{k} |w_{i+j}| > (1-δ)/δ > M`.
pub fn return_radius(m: f64) -> f64 {
    1.0 / (m + 2.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    /// The finite horizon cannot decide the statement.
    Inconclusive,
    /// The outcome flips depending on members inside the floating error band.
    Borderline,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CriterionWitness {
    Family(Witness),
    Recurrence { n: u64, min_log2: LogValue },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionEntry {
    pub threshold: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<u64>,
    /// Order `m` of the multiple-recurrence condition.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction: Option<Direction>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<CriterionWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_gap: Option<u64>,
    /// Smallest `t₀` with `[t₀, N] ⊆ A_{M;0}`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_start: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_min_log2: Option<LogValue>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub borderline: Vec<u64>,
}

impl CriterionEntry {
    fn new(m: &Threshold, verdict: Verdict) -> Self {
        CriterionEntry {
            threshold: m.to_string(),
            j: None,
            l: None,
            order: None,
            direction: None,
            verdict,
            witness: None,
            max_gap: None,
            tail_start: None,
            best_n: None,
            best_min_log2: None,
            borderline: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriteriaReport {
    pub criterion: String,
    pub weights: String,
    pub horizon: u64,
    pub exact: bool,
    pub max_log2_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proxy: Option<FamilyProxy>,
    pub entries: Vec<CriterionEntry>,
    pub note: String,
}

impl CriteriaReport {
    fn new(criterion: &str, table: &LogProductTable, note: &str) -> Self {
        CriteriaReport {
            criterion: criterion.to_string(),
            weights: table.spec.clone(),
            horizon: table.horizon(),
            exact: table.is_exact(),
            max_log2_error: table.max_error(),
            proxy: None,
            entries: Vec::new(),
            note: note.to_string(),
        }
    }

    /// True when every entry holds; undecided entries count as not holding.
    pub fn all_hold(&self) -> bool {
        self.entries.iter().all(|e| e.verdict == Verdict::Holds)
    }

    pub fn verdicts(&self) -> Vec<Verdict> {
        self.entries.iter().map(|e| e.verdict).collect()
    }
}

fn require_unilateral(table: &LogProductTable, what: &str) -> Result<()> {
    if table.side != Side::Unilateral {
        return Err(Error::range(format!("{what} is defined for unilateral weights")));
    }
    Ok(())
}

/// Syndeticity of `{n : ∏_{i=1}^{n} |w_i| > M}` under the gap bound `g`.
pub fn syndetic_operator_check(
    table: &LogProductTable,
    ms: &[Threshold],
    max_gap: u64,
) -> Result<CriteriaReport> {
    require_unilateral(table, "syndetic_operator_check")?;
    let mut report = CriteriaReport::new(
        "syndetic",
        table,
        "finite horizon: syndetic means every gap of A_{M;0} within [0, N] is at most the bound",
    );
    report.proxy = Some(FamilyProxy::syndetic(max_gap));
    for m in ms {
        let cs = criterion_set(table, m, 0, Direction::Forward)?;
        let judge = |s: &FiniteSubset| -> (bool, Option<Gap>) {
            match largest_gap(s) {
                Some(g) => (g.len <= max_gap, Some(g)),
                None => (false, None),
            }
        };
        let (strict_ok, gap) = judge(&cs.set);
        let (loose_ok, _) = judge(&cs.loose());
        let verdict = match (strict_ok, loose_ok) {
            (true, _) => Verdict::Holds,
            (false, true) => Verdict::Borderline,
            (false, false) => Verdict::Fails,
        };
        let mut e = CriterionEntry::new(m, verdict);
        e.j = Some(0);
        e.max_gap = gap.map(|g| g.len);
        if !strict_ok {
            e.witness = Some(CriterionWitness::Family(match gap {
                Some(g) => Witness::Gap(g),
                None => Witness::Empty,
            }));
        }
        e.borderline = cs.borderline;
        report.entries.push(e);
    }
    Ok(report)
}

/// `min_{1≤l≤m} L(l·n)` for `n = 1..=N/m`, with the error bound of each min.
fn order_minima(table: &LogProductTable, m: u64) -> Result<Vec<(LogValue, f64)>> {
    let count = table.horizon() / m;
    (1..=count)
        .map(|n| {
            let mut best = table.get(n as i64)?;
            let mut err = table.error(n as i64)?;
            for l in 2..=m {
                let idx = (l * n) as i64;
                let v = table.get(idx)?;
                err = err.max(table.error(idx)?);
                if v.cmp_value(&best).is_lt() {
                    best = v;
                }
            }
            Ok((best, err))
        })
        .collect()
}

/// Searches `n ≤ N/m` for `min_{1≤l≤m} |w_1 ⋯ w_{ln}| > M`.
///
/// The condition quantifies over all `n ∈ ℕ`, so an unsuccessful search is
/// inconclusive rather than false. Each entry reports the smallest witness
/// and, separately, the `n` maximizing the minimum.
pub fn multiple_recurrence_check(
    table: &LogProductTable,
    m_max: u64,
    ms: &[Threshold],
) -> Result<CriteriaReport> {
    require_unilateral(table, "multiple_recurrence_check")?;
    if m_max == 0 {
        return Err(Error::range("m_max must be ≥ 1"));
    }
    let mut report = CriteriaReport::new(
        "multiple_recurrence",
        table,
        "exists n: min_{1<=l<=m} |w_1...w_{ln}| > M, searched over n <= N/m; \
         failure to find a witness is inconclusive",
    );
    let mut per_order = Vec::new();
    for order in 1..=m_max {
        per_order.push((order, order_minima(table, order)?));
    }
    for m in ms {
        for (order, minima) in &per_order {
            let mut first = None;
            let mut any_borderline = false;
            let mut best: Option<(u64, &LogValue)> = None;
            for (i, (v, err)) in minima.iter().enumerate() {
                let n = i as u64 + 1;
                match m.test(v, *err) {
                    Decision::Above if first.is_none() => first = Some((n, v.clone())),
                    Decision::Borderline => any_borderline = true,
                    _ => {}
                }
                if best.is_none_or(|(_, b)| v.cmp_value(b).is_gt()) {
                    best = Some((n, v));
                }
            }
            let verdict = if first.is_some() {
                Verdict::Holds
            } else if any_borderline {
                Verdict::Borderline
            } else {
                Verdict::Inconclusive
            };
            let mut e = CriterionEntry::new(m, verdict);
            e.order = Some(*order);
            e.witness = first.map(|(n, min_log2)| CriterionWitness::Recurrence { n, min_log2 });
            if let Some((n, v)) = best {
                e.best_n = Some(n);
                e.best_min_log2 = Some(v.clone());
            }
            report.entries.push(e);
        }
    }
    Ok(report)
}

/// Smallest `t` with `[t, N] ⊆ A`, if `N ∈ A`.
fn cofinite_start(a: &FiniteSubset) -> Option<u64> {
    let n = a.horizon();
    if !a.contains(n) {
        return None;
    }
    let m = a.members();
    let mut t = n;
    for w in m.windows(2).rev() {
        if w[1] - w[0] != 1 {
            break;
        }
        t = w[0];
    }
    Some(t.min(*m.last().expect("contains n")))
}

/// Cofinite-proxy test of `A_{M;0} ⊇ [t₀, N]`, the finite face of mixing
/// (`∏_{i=1}^{n} |w_i| → ∞`). Reports the least working `t₀(M)` as well.
pub fn mixing_check(
    table: &LogProductTable,
    ms: &[Threshold],
    tail_start: u64,
) -> Result<CriteriaReport> {
    require_unilateral(table, "mixing_check")?;
    let n = table.horizon();
    if tail_start == 0 || tail_start > n {
        return Err(Error::range(format!(
            "tail start {tail_start} must lie in [1, {n}]"
        )));
    }
    let mut report = CriteriaReport::new(
        "mixing",
        table,
        "finite horizon: A_{M;0} must contain [t0, N]; an empty tail is inconclusive",
    );
    report.proxy = Some(FamilyProxy::cofinite(tail_start));
    for m in ms {
        let cs = criterion_set(table, m, 0, Direction::Forward)?;
        let strict = family_membership(&cs.set, &FamilyProxy::cofinite(tail_start))?;
        let loose = family_membership(&cs.loose(), &FamilyProxy::cofinite(tail_start))?;
        let tail_empty = cs.loose().iter().all(|x| x < tail_start);
        let verdict = if strict.holds {
            Verdict::Holds
        } else if loose.holds {
            Verdict::Borderline
        } else if tail_empty {
            Verdict::Inconclusive
        } else {
            Verdict::Fails
        };
        let mut e = CriterionEntry::new(m, verdict);
        e.j = Some(0);
        e.tail_start = cofinite_start(&cs.set);
        e.witness = strict.witness.map(CriterionWitness::Family);
        e.borderline = cs.borderline;
        report.entries.push(e);
    }
    Ok(report)
}

/// `A_{M;j} ∈ lF` (and `Ā_{M;j} ∈ lF` for bilateral weights) for every
/// `1 ≤ l ≤ r`, `M` and `j`, with `lF` membership tested on `{n : ln ∈ A}`.
pub fn scaled_family_check(
    table: &LogProductTable,
    r: u64,
    ms: &[Threshold],
    js: &[i64],
    proxy: &FamilyProxy,
) -> Result<CriteriaReport> {
    if r == 0 {
        return Err(Error::range("r must be ≥ 1"));
    }
    let mut report = CriteriaReport::new(
        "scaled_family",
        table,
        "membership of A_{M;j} in lF tested as proxy membership of {n : l n in A_{M;j}}",
    );
    report.proxy = Some(proxy.clone());
    let directions: &[Direction] = match table.side {
        Side::Unilateral => &[Direction::Forward],
        Side::Bilateral => &[Direction::Forward, Direction::Mirrored],
    };
    for l in 1..=r {
        for m in ms {
            for &j in js {
                for &direction in directions {
                    let cs = criterion_set(table, m, j, direction)?;
                    let strict = family_membership(&dilate_preimage(&cs.set, l)?, proxy)?;
                    let loose = family_membership(&dilate_preimage(&cs.loose(), l)?, proxy)?;
                    let verdict = match (strict.holds, loose.holds) {
                        (true, _) => Verdict::Holds,
                        (false, true) => Verdict::Borderline,
                        (false, false) => Verdict::Fails,
                    };
                    let mut e = CriterionEntry::new(m, verdict);
                    e.j = Some(j);
                    e.l = Some(l);
                    e.direction = Some(direction);
                    e.witness = strict.witness.map(CriterionWitness::Family);
                    e.borderline = cs.borderline;
                    report.entries.push(e);
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rolewicz2() -> WeightSequence {
        WeightSequence::dyadic_constant(1)
    }

    #[test]
    fn constant_two_table_is_identity() {
        let t = rolewicz2().table(10).unwrap();
        for n in 0..=10 {
            assert_eq!(t.get(n).unwrap(), LogValue::from_int(n));
        }
        assert!(t.is_exact());
        assert!(t.get(11).is_err());
    }

    #[test]
    fn menet_closed_form_at_99() {
        let t = WeightSequence::menet(2.0).unwrap().table(99).unwrap();
        let l99 = t.get(99).unwrap().to_f64();
        assert!((l99 - 100f64.log2() / 4.0).abs() < 1e-12);
        assert!((l99 - 1.66096).abs() < 1e-5);
        assert!(t.error(99).unwrap() <= 99.0 * FLOAT_STEP_ERROR);
    }

    #[test]
    fn constant_two_criterion_set() {
        let t = rolewicz2().table(20).unwrap();
        let cs = criterion_set(&t, &Threshold::pow2(2), 0, Direction::Forward).unwrap();
        assert_eq!(cs.set.members(), (3..=20).collect::<Vec<_>>().as_slice());
        assert!(cs.borderline.is_empty());
        let all = criterion_set(&t, &Threshold::ZeroPlus, 5, Direction::Forward).unwrap();
        assert_eq!(all.set.len(), 15);
        assert!(criterion_set(&t, &Threshold::pow2(2), 0, Direction::Mirrored).is_err());
        assert!(criterion_set(&t, &Threshold::pow2(2), -1, Direction::Forward).is_err());
        assert!(criterion_set(&t, &Threshold::pow2(2), 20, Direction::Forward).is_err());
    }

    #[test]
    fn menet_threshold_ten_has_one_borderline_point() {
        let t = WeightSequence::menet(2.0).unwrap().table(20_000).unwrap();
        let m = Threshold::from_f64(10.0).unwrap();
        let cs = criterion_set(&t, &m, 0, Direction::Forward).unwrap();
        // (n+1)^{1/4} > 10  iff  n ≥ 10^4; n = 9999 sits exactly on the threshold
        assert_eq!(cs.set.members().first(), Some(&10_000));
        assert_eq!(cs.set.len(), 10_001);
        assert_eq!(cs.borderline, vec![9_999]);
    }

    #[test]
    fn bilateral_mirrored_set() {
        // w_i = 2 on the right, 1/2 on the left: both directions grow
        let w = WeightSequence::two_sided(
            BigRational::from_integer(2.into()),
            BigRational::new(1.into(), 2.into()),
        )
        .unwrap();
        let t = w.table(30).unwrap();
        assert_eq!(t.get(-3).unwrap(), LogValue::from_int(3));
        let fwd = criterion_set(&t, &Threshold::pow2(3), 0, Direction::Forward).unwrap();
        assert_eq!(fwd.set.members()[0], 4);
        let back = criterion_set(&t, &Threshold::pow2(3), 0, Direction::Mirrored).unwrap();
        assert_eq!(back.set.members()[0], 4);
        assert_eq!(back.set.horizon(), 30);
        // across the origin from j = 2: products 2,4 then halves
        let back = criterion_set(&t, &Threshold::pow2(0), 2, Direction::Mirrored).unwrap();
        assert_eq!(back.set.members()[0], 5);
    }

    #[test]
    fn syndetic_check_on_constant_two() {
        let t = rolewicz2().table(100).unwrap();
        let r = syndetic_operator_check(&t, &[Threshold::pow2(1), Threshold::pow2(10)], 11).unwrap();
        assert!(r.all_hold());
        assert_eq!(r.entries[1].max_gap, Some(11));
        let r = syndetic_operator_check(&t, &[Threshold::pow2(10)], 10).unwrap();
        assert_eq!(r.entries[0].verdict, Verdict::Fails);
        assert!(r.entries[0].witness.is_some());
    }

    #[test]
    fn multiple_recurrence_on_constant_two() {
        let t = rolewicz2().table(200).unwrap();
        let ms = [Threshold::pow2(1), Threshold::pow2(5), Threshold::from_f64(10.0).unwrap()];
        let r = multiple_recurrence_check(&t, 4, &ms).unwrap();
        for e in &r.entries {
            assert_eq!(e.verdict, Verdict::Holds);
            let Some(CriterionWitness::Recurrence { n, min_log2 }) = &e.witness else {
                panic!("missing witness");
            };
            // min over l is attained at l = 1: L(n) = n
            assert_eq!(*min_log2, LogValue::from_int(*n as i64));
        }
        let ns: Vec<u64> = r
            .entries
            .iter()
            .map(|e| match e.witness {
                Some(CriterionWitness::Recurrence { n, .. }) => n,
                _ => 0,
            })
            .collect();
        assert_eq!(&ns[0..4], &[2, 2, 2, 2]);
        assert_eq!(&ns[4..8], &[6, 6, 6, 6]);
        assert_eq!(&ns[8..12], &[4, 4, 4, 4]);
    }

    #[test]
    fn multiple_recurrence_inconclusive_when_horizon_short() {
        let t = rolewicz2().table(8).unwrap();
        let r = multiple_recurrence_check(&t, 2, &[Threshold::pow2(20)]).unwrap();
        assert_eq!(r.verdicts(), vec![Verdict::Inconclusive, Verdict::Inconclusive]);
    }

    #[test]
    fn mixing_on_constant_two() {
        let t = rolewicz2().table(100).unwrap();
        let r = mixing_check(&t, &[Threshold::pow2(20)], 21).unwrap();
        assert_eq!(r.entries[0].verdict, Verdict::Holds);
        assert_eq!(r.entries[0].tail_start, Some(21));
        let r = mixing_check(&t, &[Threshold::pow2(20)], 20).unwrap();
        assert_eq!(r.entries[0].verdict, Verdict::Fails);
        let r = mixing_check(&t, &[Threshold::pow2(200)], 50).unwrap();
        assert_eq!(r.entries[0].verdict, Verdict::Inconclusive);
    }

    #[test]
    fn scaled_family_constant_two_cofinite() {
        let t = rolewicz2().table(120).unwrap();
        let ms = [Threshold::pow2(1), Threshold::pow2(4)];
        let r = scaled_family_check(&t, 3, &ms, &[0, 5], &FamilyProxy::cofinite(5)).unwrap();
        assert_eq!(r.entries.len(), 12);
        assert!(r.all_hold());
    }

    #[test]
    fn return_radius_separates() {
        for m in [1.0, 10.0, 1e6] {
            let d = return_radius(m);
            assert!((1.0 - d) / d > m);
        }
    }

    #[test]
    fn resource_guard() {
        let err = rolewicz2().table(MAX_TABLE_LEN + 1).unwrap_err();
        assert!(matches!(err, Error::Resource(_)));
    }
}
