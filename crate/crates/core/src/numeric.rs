//! Scalars in base-2 log space.
//!
//! Weight products in this crate span thousands of binary orders of magnitude
//! (a single compensating weight can be `2^-37000`), so every product is kept
//! as a log2 value. Dyadic data stays exact as a rational; anything else is an
//! `f64` carried together with an absolute error bound in log2 units.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unit roundoff scale used for the floating error bands.
pub const FLOAT_STEP_ERROR: f64 = 1.0 / (1u64 << 50) as f64;

#[derive(Clone, Debug, PartialEq)]
pub enum LogValue {
    Exact(BigRational),
    Float(f64),
}

impl LogValue {
    pub fn zero() -> Self {
        LogValue::Exact(BigRational::zero())
    }

    pub fn from_int(v: i64) -> Self {
        LogValue::Exact(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, LogValue::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            LogValue::Exact(r) => rational_to_f64(r),
            LogValue::Float(v) => *v,
        }
    }

    /// Integer value when the log is an exact integer, i.e. the scalar is `2^k`.
    pub fn as_integer(&self) -> Option<BigInt> {
        match self {
            LogValue::Exact(r) if r.is_integer() => Some(r.to_integer()),
            _ => None,
        }
    }

    pub fn add(&self, other: &LogValue) -> LogValue {
        match (self, other) {
            (LogValue::Exact(a), LogValue::Exact(b)) => LogValue::Exact(a + b),
            _ => LogValue::Float(self.to_f64() + other.to_f64()),
        }
    }

    pub fn sub(&self, other: &LogValue) -> LogValue {
        match (self, other) {
            (LogValue::Exact(a), LogValue::Exact(b)) => LogValue::Exact(a - b),
            _ => LogValue::Float(self.to_f64() - other.to_f64()),
        }
    }

    pub fn neg(&self) -> LogValue {
        match self {
            LogValue::Exact(a) => LogValue::Exact(-a),
            LogValue::Float(v) => LogValue::Float(-v),
        }
    }

    pub fn scale(&self, by: &BigRational) -> LogValue {
        match self {
            LogValue::Exact(a) => LogValue::Exact(a * by),
            LogValue::Float(v) => LogValue::Float(v * rational_to_f64(by)),
        }
    }

    /// Total order; exact pairs compare exactly, mixed pairs in `f64`.
    pub fn cmp_value(&self, other: &LogValue) -> Ordering {
        match (self, other) {
            (LogValue::Exact(a), LogValue::Exact(b)) => a.cmp(b),
            _ => self
                .to_f64()
                .partial_cmp(&other.to_f64())
                .unwrap_or(Ordering::Equal),
        }
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogValue::Exact(r) => write!(f, "{}", r),
            LogValue::Float(v) => write!(f, "{}", v),
        }
    }
}

/// Serialized form: exact values as numerator/denominator strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LogValueRepr {
    Exact { num: String, den: String },
    Float { float: f64 },
}

impl From<&LogValue> for LogValueRepr {
    fn from(v: &LogValue) -> Self {
        match v {
            LogValue::Exact(r) => LogValueRepr::Exact {
                num: r.numer().to_string(),
                den: r.denom().to_string(),
            },
            LogValue::Float(x) => LogValueRepr::Float { float: *x },
        }
    }
}

impl Serialize for LogValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LogValueRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for LogValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match LogValueRepr::deserialize(d)? {
            LogValueRepr::Exact { num, den } => {
                let num: BigInt = num.parse().map_err(serde::de::Error::custom)?;
                let den: BigInt = den.parse().map_err(serde::de::Error::custom)?;
                if den.is_zero() {
                    return Err(serde::de::Error::custom("zero denominator"));
                }
                Ok(LogValue::Exact(BigRational::new(num, den)))
            }
            LogValueRepr::Float { float } => Ok(LogValue::Float(float)),
        }
    }
}

/// `{num, den}` string pair for an exact rational.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalRepr {
    pub num: String,
    pub den: String,
}

impl From<&BigRational> for RationalRepr {
    fn from(r: &BigRational) -> Self {
        RationalRepr {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let l = log2_abs_rational(r);
    let mag = l.exp2();
    if r.is_negative() {
        -mag
    } else {
        mag
    }
}

/// log2 |n| for a big integer, accurate to double precision at any size.
pub fn log2_abs_bigint(n: &BigInt) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits <= 1000 {
        return n.abs().to_f64().unwrap_or(f64::INFINITY).log2();
    }
    let shift = bits - 64;
    let top: BigInt = n.abs() >> shift as usize;
    top.to_f64().unwrap_or(f64::INFINITY).log2() + shift as f64
}

pub fn log2_abs_rational(r: &BigRational) -> f64 {
    log2_abs_bigint(r.numer()) - log2_abs_bigint(r.denom())
}

/// `2^k` as a rational, for any integer `k`.
pub fn pow2(k: &BigInt) -> BigRational {
    let e = k
        .abs()
        .to_usize()
        .expect("binary exponent does not fit in memory");
    let p = BigInt::one() << e;
    if k.sign() == Sign::Minus {
        BigRational::new(BigInt::one(), p)
    } else {
        BigRational::from_integer(p)
    }
}

/// Exact binary exponent of a rational that is a power of two.
pub fn exact_log2(r: &BigRational) -> Option<BigInt> {
    if !r.is_positive() {
        return None;
    }
    let n = r.numer();
    let d = r.denom();
    let is_pow2 = |x: &BigInt| x.is_positive() && (x & (x - BigInt::one())).is_zero();
    if !is_pow2(n) || !is_pow2(d) {
        return None;
    }
    Some(BigInt::from(n.bits() as i64 - 1) - BigInt::from(d.bits() as i64 - 1))
}

/// Parses an integer, a fraction `a/b`, or a decimal with optional exponent
/// (`0.5`, `-1.25e-3`) into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::parse(0, "empty number"));
    }
    if let Some((a, b)) = s.split_once('/') {
        let num: BigInt = a
            .trim()
            .parse()
            .map_err(|_| Error::parse(0, format!("bad numerator in `{s}`")))?;
        let den: BigInt = b
            .trim()
            .parse()
            .map_err(|_| Error::parse(a.len() + 1, format!("bad denominator in `{s}`")))?;
        if den.is_zero() {
            return Err(Error::parse(a.len() + 1, "zero denominator"));
        }
        return Ok(BigRational::new(num, den));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..]
                .parse()
                .map_err(|_| Error::parse(i + 1, format!("bad exponent in `{s}`")))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::parse(0, format!("no digits in `{s}`")));
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(Error::parse(0, format!("not a number: `{s}`")));
    }
    let all: BigInt = format!("{int_part}{frac_part}0")
        .parse::<BigInt>()
        .expect("digits checked")
        / BigInt::from(10);
    let scale = exponent - frac_part.len() as i64;
    if scale.abs() > 4096 {
        return Err(Error::parse(0, format!("exponent out of range in `{s}`")));
    }
    let ten = BigInt::from(10);
    let mut r = BigRational::from_integer(all);
    if scale >= 0 {
        r *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -r } else { r })
}

/// Threshold `M` of a strict product criterion `prod > M`, held as `log2 M`.
#[derive(Clone, Debug, PartialEq)]
pub enum Threshold {
    /// `M -> 0+`: every finite product exceeds it.
    ZeroPlus,
    Log2(LogValue),
}

impl Threshold {
    /// From a positive value; powers of two keep an exact log.
    pub fn from_value(m: &BigRational) -> Result<Self> {
        if !m.is_positive() {
            return Err(Error::range(format!("threshold M must be positive, got {m}")));
        }
        Ok(match exact_log2(m) {
            Some(k) => Threshold::Log2(LogValue::Exact(BigRational::from_integer(k))),
            None => Threshold::Log2(LogValue::Float(log2_abs_rational(m))),
        })
    }

    pub fn from_f64(m: f64) -> Result<Self> {
        let r = BigRational::from_float(m)
            .ok_or_else(|| Error::range(format!("threshold M must be finite, got {m}")))?;
        Self::from_value(&r)
    }

    pub fn pow2(k: i64) -> Self {
        Threshold::Log2(LogValue::from_int(k))
    }

    pub fn log2(&self) -> Option<&LogValue> {
        match self {
            Threshold::ZeroPlus => None,
            Threshold::Log2(v) => Some(v),
        }
    }

    /// Linear value for reports.
    pub fn value_f64(&self) -> f64 {
        match self {
            Threshold::ZeroPlus => 0.0,
            Threshold::Log2(v) => v.to_f64().exp2(),
        }
    }

    /// Error of the threshold's own log, zero when exact.
    pub fn log2_error(&self) -> f64 {
        match self {
            Threshold::Log2(LogValue::Float(v)) => v.abs().max(1.0) * f64::EPSILON,
            _ => 0.0,
        }
    }

    /// Decides `value > log2 M` where `value` carries absolute error `err`.
    pub fn test(&self, value: &LogValue, err: f64) -> Decision {
        let Some(t) = self.log2() else {
            return Decision::Above;
        };
        if let (LogValue::Exact(a), LogValue::Exact(b)) = (value, t) {
            return if a > b {
                Decision::Above
            } else {
                Decision::NotAbove
            };
        }
        let margin = value.to_f64() - t.to_f64();
        let band = err + self.log2_error() + margin.abs() * f64::EPSILON;
        if margin.abs() <= band {
            Decision::Borderline
        } else if margin > 0.0 {
            Decision::Above
        } else {
            Decision::NotAbove
        }
    }
}

/// `0+`, `2^k`, or any positive number accepted by [`parse_rational`].
pub fn parse_threshold(text: &str) -> Result<Threshold> {
    let s = text.trim();
    if s == "0+" {
        return Ok(Threshold::ZeroPlus);
    }
    if let Some(k) = s.strip_prefix("2^") {
        let k: i64 = k
            .trim()
            .parse()
            .map_err(|_| Error::parse(2, format!("bad exponent in `{s}`")))?;
        return Ok(Threshold::pow2(k));
    }
    Threshold::from_value(&parse_rational(s)?)
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::ZeroPlus => write!(f, "0+"),
            Threshold::Log2(LogValue::Exact(k)) => write!(f, "2^{k}"),
            Threshold::Log2(LogValue::Float(v)) => write!(f, "{}", v.exp2()),
        }
    }
}

/// Three-valued outcome of a strict inequality evaluated with error bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Above,
    NotAbove,
    Borderline,
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parses_decimal_forms_exactly() {
        assert_eq!(parse_rational("0.5").unwrap(), q(1, 2));
        assert_eq!(parse_rational("-1.25e-3").unwrap(), q(-1, 800));
        assert_eq!(parse_rational("17").unwrap(), q(17, 1));
        assert_eq!(parse_rational(" 3/6 ").unwrap(), q(1, 2));
        assert_eq!(parse_rational("2e3").unwrap(), q(2000, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn exact_log2_only_for_powers_of_two() {
        assert_eq!(exact_log2(&q(1, 8)), Some(BigInt::from(-3)));
        assert_eq!(exact_log2(&q(1024, 1)), Some(BigInt::from(10)));
        assert_eq!(exact_log2(&q(1, 1)), Some(BigInt::from(0)));
        assert_eq!(exact_log2(&q(3, 1)), None);
        assert_eq!(exact_log2(&q(-2, 1)), None);
    }

    #[test]
    fn log2_of_huge_integers() {
        let big = BigInt::one() << 40000usize;
        assert_eq!(log2_abs_bigint(&big), 40000.0);
        let r = pow2(&BigInt::from(-337));
        assert_eq!(log2_abs_rational(&r), -337.0);
    }

    #[test]
    fn threshold_decisions() {
        let t = Threshold::from_value(&q(4, 1)).unwrap();
        assert_eq!(t, Threshold::pow2(2));
        assert_eq!(t.test(&LogValue::from_int(3), 0.0), Decision::Above);
        assert_eq!(t.test(&LogValue::from_int(2), 0.0), Decision::NotAbove);
        let ten = Threshold::from_f64(10.0).unwrap();
        assert_eq!(ten.test(&LogValue::Float(10f64.log2()), 1e-12), Decision::Borderline);
        assert_eq!(ten.test(&LogValue::Float(4.0), 1e-12), Decision::Above);
        assert_eq!(Threshold::ZeroPlus.test(&LogValue::from_int(-9999), 0.0), Decision::Above);
        assert!(Threshold::from_f64(0.0).is_err());
        assert_eq!(parse_threshold("2^10").unwrap(), Threshold::pow2(10));
        assert_eq!(parse_threshold("1024").unwrap(), Threshold::pow2(10));
        assert_eq!(parse_threshold("0+").unwrap(), Threshold::ZeroPlus);
        assert!(parse_threshold("-1").is_err());
        assert!(parse_threshold("2^x").is_err());
    }

    #[test]
    fn log_value_json_is_string_pair() {
        let v = LogValue::Exact(q(-7, 3));
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"num":"-7","den":"3"}"#);
        let back: LogValue = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn compensated_sum_beats_naive() {
        let mut c = CompensatedSum::default();
        let mut naive = 0.0;
        for _ in 0..1_000_000 {
            c.add(0.1);
            naive += 0.1;
        }
        assert!((c.value() - 100_000.0).abs() < 1e-9);
        assert!((naive - 100_000.0).abs() > 1e-7);
    }
}
