//! The explicit sequences behind the separating examples:
//!
//! * a dyadic weight whose shift is topologically multiply recurrent but not
//!   syndetic, built stage by stage;
//! * the mixing weights `w_ν = ((ν+1)/ν)^{1/(2p)}` whose return sets to
//!   `B(e_0, 1/2)` all have upper Banach density zero;
//! * the scaling sequence `λ_n = 2^{2^r}` on dyadic blocks together with the
//!   set `S` of lower Banach density one on which `λ_n / λ_{n+k} = 1`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::density::{FiniteSubset, Origin};
use crate::error::{Error, Result};
use crate::numeric::LogValue;
use crate::weights::{Side, WeightKind, WeightSequence};

/// Bookkeeping for one stage `m` of the multiply recurrent construction.
///
/// The block `[block_start, block_end]` carries weight 2, the compensator
/// `2^{-g_m}` sits at `block_end + 1`, and `m` more 2's close the stage so that
/// the prefix product is exactly 1 again at `stage_end`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: u64,
    pub block_start: u64,
    pub n: u64,
    /// `{l·n : 1 ≤ l ≤ m}`.
    pub starred: Vec<u64>,
    pub block_end: u64,
    pub compensator_position: u64,
    pub compensator_exponent: u64,
    pub trailing_twos: u64,
    pub stage_end: u64,
}

/// Reference stage choices, kept where they differ
/// from the "smallest admissible `n`" rule.
const FIXED_STAGE_N: &[(u64, u64)] = &[(1, 1), (2, 4), (4, 97)];

/// Smallest admissible `n_m`: past the previous stage plus the previous block
/// length, so that `L(n_m) = n_m - prev_end` outgrows the previous stage.
fn admissible_n(prev: &StageRecord) -> u64 {
    (prev.stage_end + 1) + (prev.block_end - prev.block_start + 1)
}

pub fn prop2_stages(stages: u64) -> Result<Vec<StageRecord>> {
    if stages == 0 {
        return Err(Error::range("prop2 needs at least one stage"));
    }
    let mut out: Vec<StageRecord> = Vec::with_capacity(stages as usize);
    for m in 1..=stages {
        let block_start = out.last().map_or(1, |p| p.stage_end + 1);
        let n = match FIXED_STAGE_N.iter().find(|&&(s, _)| s == m) {
            Some(&(_, n)) => n,
            None => admissible_n(out.last().expect("stage 1 is fixed")),
        };
        debug_assert!(n >= block_start);
        let block_end = m
            .checked_mul(n)
            .ok_or_else(|| Error::Resource(format!("stage {m} overflows u64")))?;
        let twos = block_end - block_start + 1;
        let compensator_exponent = twos + m;
        out.push(StageRecord {
            stage: m,
            block_start,
            n,
            starred: (1..=m).map(|l| l * n).collect(),
            block_end,
            compensator_position: block_end + 1,
            compensator_exponent,
            trailing_twos: m,
            stage_end: block_end + 1 + m,
        });
    }
    Ok(out)
}

/// Dyadic weights of the stage construction and the stage metadata.
pub fn gen_prop2_weights(stages: u64) -> Result<(WeightSequence, Vec<StageRecord>)> {
    let records = prop2_stages(stages)?;
    let total = records.last().expect("non-empty").stage_end;
    if total > crate::weights::MAX_TABLE_LEN {
        return Err(Error::Resource(format!(
            "prop2({stages}) realizes {total} weights"
        )));
    }
    let mut logs = Vec::with_capacity(total as usize);
    for r in &records {
        logs.extend((r.block_start..=r.block_end).map(|_| LogValue::from_int(1)));
        logs.push(LogValue::from_int(-(r.compensator_exponent as i64)));
        logs.extend((0..r.trailing_twos).map(|_| LogValue::from_int(1)));
    }
    debug_assert_eq!(logs.len() as u64, total);
    let w = WeightSequence::from_logs(
        WeightKind::Prop2 {
            stages: stages as u32,
        },
        Side::Unilateral,
        logs,
    )?;
    Ok((w, records))
}

/// All starred positions `b_1 < b_2 < …` across stages.
pub fn starred_positions(records: &[StageRecord]) -> Vec<u64> {
    records.iter().flat_map(|r| r.starred.iter().copied()).collect()
}

pub fn gen_menet_weights(p: f64) -> Result<WeightSequence> {
    WeightSequence::menet(p)
}

/// `∏_{ν=1}^{n} w_ν = (n+1)^{1/(2p)}` in log2 form.
pub fn menet_closed_form(n: u64, p: f64) -> f64 {
    ((n + 1) as f64).log2() / (2.0 * p)
}

/// `l / ∏_{ν=1}^{lm} |w_ν|^p = l / √(lm+1)`.
pub fn menet_density_ratio(l: u64, m: u64) -> f64 {
    l as f64 / ((l * m + 1) as f64).sqrt()
}

/// Scaling sequence `λ` and the set `S` for a finite shift set `A`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Example313 {
    pub shifts: Vec<u64>,
    /// `M = max A`.
    pub m: u64,
    pub horizon_exponent: u32,
    /// `log2 λ_n` for `n ∈ [0, 2^R]`; `λ_n = 2^{2^r}` when `2^{r-1} ≤ n < 2^r`,
    /// and `λ_0 = 1`.
    pub log2_lambda: Vec<u64>,
    pub s: FiniteSubset,
}

impl Example313 {
    pub fn horizon(&self) -> u64 {
        1u64 << self.horizon_exponent
    }

    pub fn log2_lambda(&self, n: u64) -> Option<u64> {
        self.log2_lambda.get(n as usize).copied()
    }

    /// `log2(λ_n / λ_{n+k})`, exact.
    pub fn log2_ratio(&self, n: u64, k: u64) -> Option<i128> {
        Some(self.log2_lambda(n)? as i128 - self.log2_lambda(n + k)? as i128)
    }

    /// The scaling as log values indexed by `n`.
    pub fn scaling(&self) -> Vec<LogValue> {
        self.log2_lambda
            .iter()
            .map(|&e| LogValue::Exact(BigRational::from_integer(BigInt::from(e))))
            .collect()
    }

    /// First point from which every window of `s` consecutive integers meets at
    /// most one hole of `S`: the start of the first block of length `≥ s`.
    pub fn one_hole_start(&self, s: u64) -> Option<u64> {
        (self.m + 1..=self.horizon_exponent as u64)
            .map(|r| (1u64 << (r - 1), (1u64 << r) - 2 * self.m))
            .find(|&(lo, hi)| hi >= lo && hi - lo + 1 >= s)
            .map(|(lo, _)| lo)
    }
}

/// `λ_n = 2^{2^r}` on `[2^{r-1}, 2^r - M]`, continued by the same constant up
/// to `2^r - 1`; `S = ∪_{r=M+1}^{R} [2^{r-1}, 2^r - 2M]` truncated at `2^R`.
pub fn gen_example313(shifts: &[u64], horizon_exponent: u32) -> Result<Example313> {
    let m = *shifts
        .iter()
        .max()
        .ok_or_else(|| Error::range("shift set A must be non-empty"))?;
    if shifts.contains(&0) {
        return Err(Error::range("shift set A must hold positive integers"));
    }
    if horizon_exponent >= 40 {
        return Err(Error::Resource(format!(
            "2^{horizon_exponent} points exceed the table guard"
        )));
    }
    let r_max = horizon_exponent as u64;
    if r_max <= m + 1 {
        return Err(Error::range(format!(
            "horizon exponent {horizon_exponent} must exceed M + 1 = {}",
            m + 1
        )));
    }
    let horizon = 1u64 << r_max;
    let mut log2_lambda = Vec::with_capacity(horizon as usize + 1);
    log2_lambda.push(0);
    for n in 1..=horizon {
        let r = 64 - n.leading_zeros() as u64;
        log2_lambda.push(1u64 << r);
    }
    let mut members = Vec::new();
    for r in m + 1..=r_max {
        let lo = 1u64 << (r - 1);
        let hi = (1u64 << r).saturating_sub(2 * m);
        members.extend(lo..=hi);
    }
    let mut shifts = shifts.to_vec();
    shifts.sort_unstable();
    shifts.dedup();
    Ok(Example313 {
        shifts,
        m,
        horizon_exponent,
        log2_lambda,
        s: FiniteSubset::new(members, horizon, Origin::One)?,
    })
}

/// The operator of the remark is the plain backward shift; the weights are 1.
pub fn example313_weights(m: u64) -> WeightSequence {
    let mut w = WeightSequence::dyadic_constant(0);
    w.set_kind(WeightKind::Example313 { m });
    w
}
