//! The JSON measure format:
//!
//! ```json
//! {"space": "torus", "atoms": [{"s": "1", "t": "-1", "w": "3/4"}, ...]}
//! ```
//!
//! Scalars are `"p/q"` strings, decimal strings (read exactly, so `"0.25"`
//! is `1/4`), JSON numbers (read through their decimal text), or
//! `{"re": .., "im": ..}` objects. Any object scalar makes the file complex.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use serde_json::{json, Value};

use super::{Atom, AtomicPairMeasure, Space};
use crate::coeff::{Coefficient, Rational};
use crate::error::{Error, Result};
use crate::Mode;

/// A scalar as written in a measure file.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Rational(Rational),
    Complex(Complex64),
}

impl Scalar {
    fn parse(v: &Value, what: &str) -> Result<Self> {
        match v {
            Value::String(s) => parse_decimal_or_ratio(s).map(Scalar::Rational),
            Value::Number(n) => parse_decimal_or_ratio(&n.to_string()).map(Scalar::Rational),
            Value::Object(map) => {
                let part = |key: &str| -> Result<f64> {
                    match map.get(key) {
                        None => Ok(0.0),
                        Some(Value::Number(n)) => n.as_f64().ok_or_else(|| {
                            Error::Parse(format!("{what}.{key}: not a finite number"))
                        }),
                        Some(Value::String(s)) => parse_decimal_or_ratio(s)?
                            .to_f64()
                            .ok_or_else(|| Error::Parse(format!("{what}.{key}: out of range"))),
                        Some(_) => Err(Error::Parse(format!("{what}.{key}: expected a number"))),
                    }
                };
                if map.keys().any(|k| k != "re" && k != "im") {
                    return Err(Error::Parse(format!(
                        "{what}: complex scalars take only \"re\" and \"im\""
                    )));
                }
                Ok(Scalar::Complex(Complex64::new(part("re")?, part("im")?)))
            }
            _ => Err(Error::Parse(format!(
                "{what}: expected a string, number or {{\"re\",\"im\"}} object"
            ))),
        }
    }

    pub fn is_complex(&self) -> bool {
        matches!(self, Scalar::Complex(_))
    }

    /// Converts into the coefficient ring of the run.
    pub fn to_coeff<C: Coefficient>(&self) -> Result<C> {
        match self {
            Scalar::Rational(r) => Ok(C::from_rational(r)),
            Scalar::Complex(c) => C::from_complex(*c).ok_or_else(|| {
                Error::Parse(format!(
                    "complex scalar {c} cannot be represented in rational mode"
                ))
            }),
        }
    }
}

/// Parses `"p/q"`, an integer, or a decimal with optional exponent, exactly.
pub fn parse_decimal_or_ratio(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || {
        Error::Parse(format!(
            "cannot read {text:?} as a rational or decimal number"
        ))
    };
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part
            .chars()
            .chain(frac_part.chars())
            .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: BigInt = format!("{int_part}{frac_part}")
        .parse()
        .map_err(|_| bad())?;
    let shift = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let mut value = Rational::from_integer(all);
    if shift >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, shift as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-shift) as usize));
    }
    Ok(if negative { -value } else { value })
}

/// One atom as written in the file.
#[derive(Debug, Clone, PartialEq)]
pub struct RawAtom {
    pub s: Scalar,
    pub t: Scalar,
    pub w: Scalar,
}

/// A parsed measure file, before the arithmetic mode is fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureFile {
    pub space: Space,
    pub atoms: Vec<RawAtom>,
}

impl MeasureFile {
    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_value(&v)
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("measure file must be a JSON object".into()))?;
        let space = match obj.get("space").and_then(Value::as_str) {
            Some("torus") => Space::Torus,
            Some("positive") => Space::Positive,
            Some(other) => return Err(Error::Parse(format!("unknown space {other:?}"))),
            None => return Err(Error::Parse("missing \"space\"".into())),
        };
        let list = obj
            .get("atoms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"atoms\" array".into()))?;
        let atoms = list
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let field = |k: &str| {
                    a.get(k)
                        .ok_or_else(|| Error::Parse(format!("atom {i}: missing {k:?}")))
                        .and_then(|v| Scalar::parse(v, &format!("atom {i}.{k}")))
                };
                Ok(RawAtom {
                    s: field("s")?,
                    t: field("t")?,
                    w: field("w")?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MeasureFile { space, atoms })
    }

    /// The mode `auto` resolves to: complex iff some scalar is complex.
    pub fn natural_mode(&self) -> Mode {
        let complex = self
            .atoms
            .iter()
            .any(|a| a.s.is_complex() || a.t.is_complex() || a.w.is_complex());
        if complex {
            Mode::Complex
        } else {
            Mode::Rational
        }
    }

    pub fn to_measure<C: Coefficient>(&self) -> Result<AtomicPairMeasure<C>> {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Ok(Atom::new(a.s.to_coeff()?, a.t.to_coeff()?, a.w.to_coeff()?)))
            .collect::<Result<Vec<_>>>()?;
        AtomicPairMeasure::new(self.space, atoms)
    }
}

impl<C: Coefficient> AtomicPairMeasure<C> {
    /// Serializes in the measure-file format.
    pub fn to_json(&self) -> Value {
        json!({
            "space": self.space.name(),
            "atoms": self.atoms.iter().map(|a| json!({
                "s": a.s.to_json(),
                "t": a.t.to_json(),
                "w": a.weight.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}
