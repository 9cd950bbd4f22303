use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// One letter `g^{±1}` of a free-group word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: String,
    pub exp: i8,
}

impl Letter {
    pub fn new(gen: impl Into<String>, exp: i8) -> Self {
        debug_assert!(exp == 1 || exp == -1);
        Letter {
            gen: gen.into(),
            exp,
        }
    }

    pub fn inverse(&self) -> Letter {
        Letter {
            gen: self.gen.clone(),
            exp: -self.exp,
        }
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.gen == other.gen && self.exp == -other.exp
    }
}

/// Word in a free group. Not reduced automatically; see [`Word::free_reduce`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse word token {token:?}")]
pub struct WordParseError {
    pub token: String,
}

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn generator(gen: impl Into<String>) -> Self {
        Word(vec![Letter::new(gen, 1)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    /// Formal inverse: letters reversed and inverted.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(Letter::inverse).collect())
    }

    pub fn pow(&self, exp: i32) -> Word {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut out = Vec::with_capacity(base.len() * exp.unsigned_abs() as usize);
        for _ in 0..exp.unsigned_abs() {
            out.extend(base.0.iter().cloned());
        }
        Word(out)
    }

    /// Concatenation without reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Word(v)
    }

    /// Concatenation followed by free reduction.
    pub fn mul(&self, other: &Word) -> Word {
        self.concat(other).free_reduce()
    }

    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for l in &self.0 {
            if out.last().is_some_and(|last| last.cancels(l)) {
                out.pop();
            } else {
                out.push(l.clone());
            }
        }
        Word(out)
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|w| !w[0].cancels(&w[1]))
    }

    pub fn exponent_sum(&self, gen: &str) -> i64 {
        self.0
            .iter()
            .filter(|l| l.gen == gen)
            .map(|l| i64::from(l.exp))
            .sum()
    }

    pub fn mentions(&self, gen: &str) -> bool {
        self.0.iter().any(|l| l.gen == gen)
    }

    /// Replaces every `gen^{±1}` by `replacement^{±1}` and freely reduces.
    pub fn substitute(&self, gen: &str, replacement: &Word) -> Word {
        let inv = replacement.inverse();
        let mut out = Vec::with_capacity(self.0.len());
        for l in &self.0 {
            if l.gen == gen {
                let r = if l.exp > 0 { replacement } else { &inv };
                out.extend(r.0.iter().cloned());
            } else {
                out.push(l.clone());
            }
        }
        Word(out).free_reduce()
    }

    /// Renames a generator, keeping exponents.
    pub fn rename(&self, from: &str, to: &str) -> Word {
        Word(
            self.0
                .iter()
                .map(|l| {
                    if l.gen == from {
                        Letter::new(to, l.exp)
                    } else {
                        l.clone()
                    }
                })
                .collect(),
        )
    }

    /// Parses whitespace-separated tokens. A lowercase-initial token is a generator,
    /// its all-uppercase spelling is the inverse, and `g^n` is a power. `1` is the empty word.
    pub fn parse(text: &str) -> Result<Word, WordParseError> {
        let mut out = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (base, power) = match tok.split_once('^') {
                Some((b, p)) => {
                    let p: i32 = p.parse().map_err(|_| WordParseError {
                        token: tok.to_string(),
                    })?;
                    (b, p)
                }
                None => (tok, 1),
            };
            let (gen, sign) = parse_generator_token(base).ok_or_else(|| WordParseError {
                token: tok.to_string(),
            })?;
            let exp = if (sign > 0) == (power > 0) { 1 } else { -1 };
            for _ in 0..power.unsigned_abs() {
                out.push(Letter::new(gen.clone(), exp));
            }
        }
        Ok(Word(out))
    }
}

/// A generator name starts with a lowercase ASCII letter and continues with
/// ASCII alphanumerics or `_`.
pub fn is_generator_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_digit() || c.is_ascii_lowercase() || c == '_')
}

fn parse_generator_token(tok: &str) -> Option<(String, i8)> {
    if is_generator_name(tok) {
        return Some((tok.to_string(), 1));
    }
    let lower = tok.to_ascii_lowercase();
    let first_upper = tok.chars().next().is_some_and(|c| c.is_ascii_uppercase());
    let no_lower = !tok.chars().any(|c| c.is_ascii_lowercase());
    if first_upper && no_lower && is_generator_name(&lower) {
        Some((lower, -1))
    } else {
        None
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if l.exp > 0 {
                write!(f, "{}", l.gen)?;
            } else {
                write!(f, "{}", l.gen.to_ascii_uppercase())?;
            }
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Word::parse(&s).map_err(serde::de::Error::custom)
    }
}
