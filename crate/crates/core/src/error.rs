use std::fmt;

use thiserror::Error;

/// A standing hypothesis of the S-transform machinery that an input violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precondition {
    /// `φ(a_i) = 0` for the pair with the given 1-based index.
    FirstMomentA(usize),
    /// `φ(b_i) = 0`.
    FirstMomentB(usize),
    /// `φ(a_i b_i) = 0`.
    MixedMoment(usize),
    /// The pair does not have factoring two-band moments.
    Factoring(usize),
}

fn subscript(i: usize) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    i.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).unwrap_or(0) as usize])
        .collect()
}

impl fmt::Display for Precondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Precondition::FirstMomentA(i) => write!(f, "φ(a{})=0", subscript(i)),
            Precondition::FirstMomentB(i) => write!(f, "φ(b{})=0", subscript(i)),
            Precondition::MixedMoment(i) => write!(f, "φ(a{0}b{0})=0", subscript(i)),
            Precondition::Factoring(i) => write!(
                f,
                "(a{0},b{0}) does not have factoring two-band moments",
                subscript(i)
            ),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("truncation orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("series has zero constant term and cannot be inverted")]
    ZeroConstantTerm,

    #[error("inner series of a composition must vanish at the origin")]
    NonzeroConstantTerm,

    #[error("series is not a germ at 0 (nonzero constant term)")]
    NotAGerm,

    #[error("linear coefficient vanishes; series has no compositional inverse")]
    ZeroLinearCoefficient,

    #[error("{what}: expected exact divisibility, residue of size {residue:e} at {monomial}")]
    NotDivisible {
        what: &'static str,
        monomial: String,
        residue: f64,
    },

    #[error("precision exhausted: need order {needed}, only {available} available")]
    InsufficientPrecision { needed: usize, available: i64 },

    #[error("division by a series that vanishes to full truncation depth")]
    DivisionByZero,

    #[error("inadmissible input: {}", list(.0))]
    Inadmissible(Vec<Precondition>),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("malformed word: {0}")]
    MalformedWord(String),

    #[error("word has {len} letters; enumeration is bounded at {max}")]
    WordTooLong { len: usize, max: usize },

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("parse error: {0}")]
    Parse(String),
}

fn list(items: &[Precondition]) -> String {
    items
        .iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

pub type Result<T> = std::result::Result<T, Error>;
