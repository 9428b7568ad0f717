//! Text form of weight generators.
//!
//! ```text
//! rolewicz(2)   rolewicz(3/2)   menet(2)   prop2(4)
//! example313(2) bilateral(2, 1/2)   file(weights.txt)
//! ```
//!
//! Numbers accept integers, `a/b` and decimals, all read exactly. Errors carry
//! the byte offset of the offending token.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::counterexamples::{example313_weights, gen_prop2_weights};
use crate::error::{Error, Result};
use crate::numeric::{parse_rational, rational_to_f64};
use crate::weights::{WeightKind, WeightSequence};

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn ident(&mut self) -> Result<(usize, &'a str)> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.text[start..];
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        if len == 0 {
            return Err(Error::parse(start, "expected a generator name"));
        }
        self.pos += len;
        Ok((start, &rest[..len]))
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.text[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected '{c}'")))
        }
    }

    /// Raw argument text up to the next `,` or `)`, trimmed.
    fn arg(&mut self) -> Result<(usize, &'a str)> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.text[start..];
        let len = rest
            .find([',', ')'])
            .ok_or_else(|| Error::parse(self.text.len(), "unterminated argument list"))?;
        self.pos += len;
        let raw = rest[..len].trim_end();
        if raw.is_empty() {
            return Err(Error::parse(start, "empty argument"));
        }
        Ok((start, raw))
    }
}

fn number(pos: usize, raw: &str) -> Result<BigRational> {
    parse_rational(raw).map_err(|e| Error::parse(pos, format!("bad number '{raw}': {e}")))
}

fn count(pos: usize, raw: &str, what: &str) -> Result<u64> {
    raw.parse::<u64>()
        .ok()
        .filter(|&v| v > 0)
        .ok_or_else(|| Error::parse(pos, format!("{what} must be a positive integer, got '{raw}'")))
}

/// Parses a generator expression into its [`WeightKind`].
pub fn parse_weight_spec(text: &str) -> Result<WeightKind> {
    let mut c = Cursor { text, pos: 0 };
    let (name_pos, name) = c.ident()?;
    c.expect('(')?;
    let arity = match name {
        "bilateral" => 2,
        "rolewicz" | "menet" | "prop2" | "example313" | "file" => 1,
        _ => return Err(Error::parse(name_pos, format!("unknown generator '{name}'"))),
    };
    let mut args = Vec::with_capacity(arity);
    for i in 0..arity {
        if i > 0 {
            c.expect(',')?;
        }
        args.push(c.arg()?);
    }
    c.expect(')')?;
    c.skip_ws();
    if c.pos != text.len() {
        return Err(Error::parse(c.pos, "trailing input"));
    }
    let (pos, raw) = args[0];
    let nonzero = |pos: usize, v: BigRational| {
        if v.is_zero() {
            Err(Error::parse(pos, "weight must be non-zero"))
        } else {
            Ok(v)
        }
    };
    Ok(match name {
        "rolewicz" => WeightKind::Rolewicz {
            lambda: nonzero(pos, number(pos, raw)?)?,
        },
        "menet" => {
            let p = number(pos, raw)?;
            if p.is_negative() || rational_to_f64(&p) < 1.0 {
                return Err(Error::parse(pos, "menet exponent must be ≥ 1"));
            }
            WeightKind::Menet {
                p: rational_to_f64(&p),
            }
        }
        "prop2" => {
            let stages = count(pos, raw, "stage count")?;
            WeightKind::Prop2 {
                stages: stages
                    .to_u32()
                    .ok_or_else(|| Error::parse(pos, "stage count too large"))?,
            }
        }
        "example313" => WeightKind::Example313 {
            m: count(pos, raw, "M")?,
        },
        "bilateral" => {
            let (pos_b, raw_b) = args[1];
            WeightKind::TwoSided {
                a: nonzero(pos, number(pos, raw)?)?,
                b: nonzero(pos_b, number(pos_b, raw_b)?)?,
            }
        }
        "file" => WeightKind::File {
            path: raw.trim_matches('"').to_string(),
        },
        _ => unreachable!(),
    })
}

/// Realizes a generator; `file(...)` reads the weight file.
pub fn build_weights(kind: &WeightKind) -> Result<WeightSequence> {
    match kind {
        WeightKind::Rolewicz { lambda } => WeightSequence::rolewicz(lambda.clone()),
        WeightKind::Menet { p } => WeightSequence::menet(*p),
        WeightKind::TwoSided { a, b } => WeightSequence::two_sided(a.clone(), b.clone()),
        WeightKind::Prop2 { stages } => Ok(gen_prop2_weights(*stages as u64)?.0),
        WeightKind::Example313 { m } => Ok(example313_weights(*m)),
        WeightKind::File { path } => crate::io::read_weight_file(std::path::Path::new(path)),
    }
}

pub fn weights_from_spec(text: &str) -> Result<WeightSequence> {
    build_weights(&parse_weight_spec(text)?)
}
