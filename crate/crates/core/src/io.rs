//! Plain-text and JSON inputs: set files, weight files, schedules, balls.

use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::density::{FiniteSubset, Origin};
use crate::error::{Error, Result};
use crate::numeric::{parse_rational, LogValue};
use crate::shift::{BallQuery, FiniteVector, Space};
use crate::weights::{Side, WeightKind, WeightSequence};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Set file: one integer per line, strictly increasing, with an optional
/// first line `#horizon=N`. Without the header the horizon is the last
/// member. A member `0` switches the set to origin 0.
pub fn parse_set(text: &str) -> Result<FiniteSubset> {
    let mut horizon = None;
    let mut members = Vec::new();
    let mut offset = 0;
    for (lineno, line) in text.lines().enumerate() {
        let pos = offset;
        offset += line.len() + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(h) = line.strip_prefix("#horizon=") {
            if lineno != 0 {
                return Err(Error::parse(pos, "the horizon header must be the first line"));
            }
            horizon = Some(
                h.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::parse(pos, format!("bad horizon '{h}'")))?,
            );
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let v: u64 = line
            .parse()
            .map_err(|_| Error::parse(pos, format!("line {}: not a non-negative integer", lineno + 1)))?;
        members.push(v);
    }
    let horizon = match horizon.or(members.last().copied()) {
        Some(h) => h,
        None => return Err(Error::InvalidSet("empty set file needs a #horizon header".into())),
    };
    let origin = if members.first() == Some(&0) {
        Origin::Zero
    } else {
        Origin::One
    };
    FiniteSubset::new(members, horizon, origin)
}

pub fn read_set_file(path: &Path) -> Result<FiniteSubset> {
    parse_set(&read(path)?)
}

pub fn format_set(a: &FiniteSubset) -> String {
    let mut out = format!("#horizon={}\n", a.horizon());
    for m in a.iter() {
        out.push_str(&m.to_string());
        out.push('\n');
    }
    out
}

/// Weight file: one `log2 |w_i|` per line (integers, fractions or decimals,
/// read exactly), for `i = 1, 2, …`. A `#side=bilateral` line switches to
/// `2N+1` values for `i = -N, …, N`.
pub fn parse_weight_file(text: &str, path: &str) -> Result<WeightSequence> {
    let mut side = Side::Unilateral;
    let mut logs = Vec::new();
    let mut offset = 0;
    for line in text.lines() {
        let pos = offset;
        offset += line.len() + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(s) = line.strip_prefix("#side=") {
            side = match s.trim() {
                "bilateral" => Side::Bilateral,
                "unilateral" => Side::Unilateral,
                other => return Err(Error::parse(pos, format!("unknown side '{other}'"))),
            };
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let v = parse_rational(line)
            .map_err(|e| Error::parse(pos, format!("bad log2 weight '{line}': {e}")))?;
        logs.push(LogValue::Exact(v));
    }
    WeightSequence::from_logs(
        WeightKind::File {
            path: path.to_string(),
        },
        side,
        logs,
    )
}

pub fn read_weight_file(path: &Path) -> Result<WeightSequence> {
    parse_weight_file(&read(path)?, &path.display().to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum IntText {
    Int(i64),
    Text(String),
}

impl IntText {
    fn to_bigint(&self) -> Result<BigInt> {
        match self {
            IntText::Int(v) => Ok(BigInt::from(*v)),
            IntText::Text(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::range(format!("bad integer '{s}' in schedule"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct ScheduleEntry {
    t: u64,
    target: Vec<(i64, IntText, IntText)>,
}

/// Schedule JSON: `[{"t": 5, "target": [[index, num, den], …]}, …]`, where
/// `num` and `den` are integers or decimal strings.
pub fn parse_schedule(text: &str, space: Space, side: Side) -> Result<Vec<(u64, FiniteVector)>> {
    let entries: Vec<ScheduleEntry> = serde_json::from_str(text)?;
    entries
        .into_iter()
        .map(|e| {
            let coeffs = e
                .target
                .iter()
                .map(|(i, num, den)| {
                    let den = den.to_bigint()?;
                    if den.is_zero() {
                        return Err(Error::range(format!("zero denominator at index {i}")));
                    }
                    Ok((*i, BigRational::new(num.to_bigint()?, den)))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((e.t, FiniteVector::from_rationals(space, side, coeffs)?))
        })
        .collect()
}

pub fn read_schedule_file(path: &Path, space: Space, side: Side) -> Result<Vec<(u64, FiniteVector)>> {
    parse_schedule(&read(path)?, space, side)
}

/// Schedule JSON for exact targets.
pub fn format_schedule(targets: &[(u64, FiniteVector)]) -> Result<String> {
    let entries = targets
        .iter()
        .map(|(t, y)| {
            let target = y
                .entries()
                .map(|(i, c)| match c {
                    crate::shift::Coeff::Exact(r) => Ok((
                        i,
                        IntText::Text(r.numer().to_string()),
                        IntText::Text(r.denom().to_string()),
                    )),
                    _ => Err(Error::range("only exact targets can be written")),
                })
                .collect::<Result<_>>()?;
            Ok(ScheduleEntry { t: *t, target })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(serde_json::to_string_pretty(&entries)?)
}

/// Targets `e_index` at times `base^1, …, base^count`.
pub fn geometric_schedule(
    space: Space,
    side: Side,
    base: u64,
    count: u32,
    index: i64,
) -> Result<Vec<(u64, FiniteVector)>> {
    if base < 2 {
        return Err(Error::range("geometric schedules need base ≥ 2"));
    }
    (1..=count)
        .map(|s| {
            let t = base
                .checked_pow(s)
                .ok_or_else(|| Error::range("schedule time overflows u64"))?;
            Ok((t, FiniteVector::basis(space, side, index)?))
        })
        .collect()
}

/// Ball shorthand: `e<j>:<radius>` for `B(e_j; r)` or `zero:<radius>`.
pub fn parse_ball(text: &str, space: Space, side: Side) -> Result<BallQuery> {
    let (center, radius) = text
        .split_once(':')
        .ok_or_else(|| Error::parse(0, "ball must look like e0:0.5 or zero:0.5"))?;
    let radius_pos = center.len() + 1;
    let radius =
        parse_rational(radius).map_err(|e| Error::parse(radius_pos, format!("bad radius: {e}")))?;
    let center = match center.trim() {
        "zero" | "0" => FiniteVector::zero(space, side),
        c => {
            let j: i64 = c
                .strip_prefix('e')
                .and_then(|j| j.parse().ok())
                .ok_or_else(|| Error::parse(0, format!("bad ball center '{c}'")))?;
            FiniteVector::basis(space, side, j)?
        }
    };
    BallQuery::new(center, radius)
}

/// `l1`, `l2`, … or `c0`.
pub fn parse_space(text: &str) -> Result<Space> {
    match text.trim() {
        "c0" => Ok(Space::C0),
        s => s
            .strip_prefix('l')
            .and_then(|p| p.parse::<u32>().ok())
            .ok_or_else(|| Error::parse(0, format!("unknown space '{s}'")))
            .and_then(Space::lp),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_file_round_trip() {
        let a = parse_set("#horizon=20\n1\n4\n9\n16\n").unwrap();
        assert_eq!(a.members(), &[1, 4, 9, 16]);
        assert_eq!(a.horizon(), 20);
        assert_eq!(parse_set(&format_set(&a)).unwrap(), a);
        let b = parse_set("0\n2\n3\n").unwrap();
        assert_eq!((b.horizon(), b.origin()), (3, Origin::Zero));
    }

    #[test]
    fn set_file_errors() {
        assert!(matches!(parse_set("1\nx\n"), Err(Error::Parse { pos: 2, .. })));
        assert!(parse_set("3\n2\n").is_err());
        assert!(parse_set("#horizon=5\n7\n").is_err());
        assert!(parse_set("").is_err());
        assert!(parse_set("1\n#horizon=5\n").is_err());
    }

    #[test]
    fn weight_file() {
        let w = parse_weight_file("1\n1\n-2\n1/2\n", "w").unwrap();
        assert_eq!(w.max_index(), Some(4));
        assert_eq!(
            w.log2_weight(4).unwrap(),
            LogValue::Exact(BigRational::new(1.into(), 2.into()))
        );
        let b = parse_weight_file("#side=bilateral\n-1\n-1\n0\n1\n1\n", "w").unwrap();
        assert_eq!(b.side(), Side::Bilateral);
        assert_eq!(b.log2_weight(-2).unwrap(), LogValue::from_int(-1));
        assert!(parse_weight_file("#side=bilateral\n1\n1\n", "w").is_err());
        assert!(matches!(
            parse_weight_file("1\nabc\n", "w"),
            Err(Error::Parse { pos: 2, .. })
        ));
    }

    #[test]
    fn schedule_json() {
        let text = r#"[{"t": 5, "target": [[0, 1, 1]]}, {"t": 20, "target": [[0, "1", "2"], [1, -3, 4]]}]"#;
        let s = parse_schedule(text, Space::Lp(2), Side::Unilateral).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[1].1.len(), 2);
        let again = parse_schedule(&format_schedule(&s).unwrap(), Space::Lp(2), Side::Unilateral).unwrap();
        assert_eq!(again, s);
        assert!(parse_schedule(r#"[{"t": 1, "target": [[0, 1, 0]]}]"#, Space::Lp(2), Side::Unilateral).is_err());
    }

    #[test]
    fn ball_and_space_shorthand() {
        let b = parse_ball("e0:0.5", Space::Lp(2), Side::Unilateral).unwrap();
        assert_eq!(b.center.support(), vec![0]);
        assert_eq!(b.radius, BigRational::new(1.into(), 2.into()));
        assert!(parse_ball("zero:1/4", Space::C0, Side::Unilateral).unwrap().center.is_empty());
        assert!(matches!(
            parse_ball("e0:x", Space::Lp(2), Side::Unilateral),
            Err(Error::Parse { pos: 3, .. })
        ));
        assert!(parse_ball("e0:0", Space::Lp(2), Side::Unilateral).is_err());
        assert_eq!(parse_space("l1").unwrap(), Space::Lp(1));
        assert_eq!(parse_space("c0").unwrap(), Space::C0);
        assert!(parse_space("l0").is_err());
    }

    #[test]
    fn geometric_times() {
        let s = geometric_schedule(Space::Lp(2), Side::Unilateral, 4, 3, 0).unwrap();
        assert_eq!(s.iter().map(|x| x.0).collect::<Vec<_>>(), vec![4, 16, 64]);
    }
}
