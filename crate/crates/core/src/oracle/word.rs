use std::fmt;

use crate::error::{Error, Result};

/// Generator of one of the two commutative algebras.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    X,
    Y,
}

/// A single raw letter `x_i` or `y_i` (`alg` is 1 or 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RawLetter {
    pub alg: u8,
    pub gen: Gen,
}

impl RawLetter {
    pub fn new(alg: u8, gen: Gen) -> Self {
        RawLetter { alg, gen }
    }

    /// Dense code `0..4`: `x1, y1, x2, y2`.
    pub fn code(self) -> u8 {
        (self.alg - 1) * 2 + matches!(self.gen, Gen::Y) as u8
    }

    pub fn from_code(code: u8) -> Self {
        RawLetter {
            alg: code / 2 + 1,
            gen: if code.is_multiple_of(2) {
                Gen::X
            } else {
                Gen::Y
            },
        }
    }
}

/// A block `x_i^p y_i^q` of one algebra, `p + q ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub alg: u8,
    pub x: u32,
    pub y: u32,
}

impl Letter {
    pub fn new(alg: u8, x: u32, y: u32) -> Self {
        Letter { alg, x, y }
    }

    pub fn degree(&self) -> usize {
        (self.x + self.y) as usize
    }
}

/// A word over `x₁, y₁, x₂, y₂` in canonical form: neighbouring blocks come
/// from different algebras, and since each algebra is commutative every
/// block is written `x^p y^q`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    /// Canonicalizes an arbitrary block sequence: zero blocks are dropped and
    /// neighbours from the same algebra merged.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if l.degree() == 0 {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.alg == l.alg => {
                    last.x += l.x;
                    last.y += l.y;
                }
                _ => out.push(l),
            }
        }
        Word { letters: out }
    }

    pub fn from_raw(raw: impl IntoIterator<Item = RawLetter>) -> Self {
        Self::from_letters(raw.into_iter().map(|r| match r.gen {
            Gen::X => Letter::new(r.alg, 1, 0),
            Gen::Y => Letter::new(r.alg, 0, 1),
        }))
    }

    /// Reads words such as `x1 x2 y2^3 y1`, `x1x2y2y1` or `x1*y1^2`. The
    /// empty string and `1` denote the empty word.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |msg: String| Error::MalformedWord(format!("{text:?}: {msg}"));
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed == "1" {
            return Ok(Word::empty());
        }
        let chars: Vec<char> = trimmed.chars().collect();
        let mut i = 0;
        let mut letters = Vec::new();
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() || c == '*' || c == '·' {
                i += 1;
                continue;
            }
            let gen = match c {
                'x' => Gen::X,
                'y' => Gen::Y,
                _ => return Err(bad(format!("unexpected character {c:?} at {i}"))),
            };
            let alg = match chars.get(i + 1) {
                Some('1') | Some('₁') => 1,
                Some('2') | Some('₂') => 2,
                _ => return Err(bad(format!("generator at {i} needs algebra index 1 or 2"))),
            };
            i += 2;
            let mut exp = 1u32;
            if chars.get(i) == Some(&'^') {
                i += 1;
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                exp = digits
                    .parse()
                    .map_err(|_| bad(format!("missing or invalid exponent at {start}")))?;
                if exp == 0 {
                    return Err(bad("exponent must be positive".into()));
                }
            }
            letters.push(match gen {
                Gen::X => Letter::new(alg, exp, 0),
                Gen::Y => Letter::new(alg, 0, exp),
            });
        }
        Ok(Self::from_letters(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of generator occurrences.
    pub fn len(&self) -> usize {
        self.letters.iter().map(Letter::degree).sum()
    }

    /// The word spelled out letter by letter, blocks as `x…x y…y`.
    pub fn raw(&self) -> Vec<RawLetter> {
        let mut out = Vec::with_capacity(self.len());
        for l in &self.letters {
            out.extend(std::iter::repeat_n(
                RawLetter::new(l.alg, Gen::X),
                l.x as usize,
            ));
            out.extend(std::iter::repeat_n(
                RawLetter::new(l.alg, Gen::Y),
                l.y as usize,
            ));
        }
        out
    }

    /// Cyclic rotation by `k` raw letters to the left, re-canonicalized.
    pub fn rotate(&self, k: usize) -> Self {
        let raw = self.raw();
        if raw.is_empty() {
            return self.clone();
        }
        let k = k % raw.len();
        Self::from_raw(raw[k..].iter().chain(&raw[..k]).copied())
    }

    /// All canonical words of total length `1..=max_len`, in a fixed order.
    pub fn enumerate(max_len: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut stack = vec![(Vec::<Letter>::new(), 0usize)];
        while let Some((prefix, len)) = stack.pop() {
            if len > 0 {
                out.push(Word {
                    letters: prefix.clone(),
                });
            }
            for alg in [1u8, 2] {
                if prefix.last().is_some_and(|l| l.alg == alg) {
                    continue;
                }
                for deg in 1..=(max_len - len) as u32 {
                    for x in 0..=deg {
                        let mut next = prefix.clone();
                        next.push(Letter::new(alg, x, deg - x));
                        stack.push((next, len + deg as usize));
                    }
                }
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let mut parts = Vec::new();
        for l in &self.letters {
            for (name, e) in [("x", l.x), ("y", l.y)] {
                match e {
                    0 => {}
                    1 => parts.push(format!("{name}{}", l.alg)),
                    e => parts.push(format!("{name}{}^{e}", l.alg)),
                }
            }
        }
        f.write_str(&parts.join(" "))
    }
}
