use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::word::{is_generator_name, Word, WordParseError};
use crate::zalg::{cokernel, AbelianGroup, IntMatrix};

/// Finite presentation `⟨g₁,…,g_k | r₁,…,r_l⟩`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Presentation {
    generators: Vec<String>,
    relations: Vec<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PresentationError {
    #[error("malformed presentation {0:?}: expected <gens | rels>")]
    Malformed(String),
    #[error("invalid generator name {0:?}")]
    BadGenerator(String),
    #[error("duplicate generator {0:?}")]
    DuplicateGenerator(String),
    #[error("relation {index} uses unknown generator {gen:?}")]
    UnknownGenerator { index: usize, gen: String },
    #[error(transparent)]
    Word(#[from] WordParseError),
}

impl Presentation {
    /// Relations are freely reduced on construction.
    pub fn new(generators: Vec<String>, relations: Vec<Word>) -> Result<Self, PresentationError> {
        for (i, g) in generators.iter().enumerate() {
            if !is_generator_name(g) {
                return Err(PresentationError::BadGenerator(g.clone()));
            }
            if generators[..i].contains(g) {
                return Err(PresentationError::DuplicateGenerator(g.clone()));
            }
        }
        for (index, r) in relations.iter().enumerate() {
            if let Some(l) = r.letters().iter().find(|l| !generators.contains(&l.gen)) {
                return Err(PresentationError::UnknownGenerator {
                    index,
                    gen: l.gen.clone(),
                });
            }
        }
        Ok(Presentation {
            generators,
            relations: relations.iter().map(Word::free_reduce).collect(),
        })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relations(&self) -> &[Word] {
        &self.relations
    }

    pub fn is_balanced(&self) -> bool {
        self.generators.len() == self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty() && self.relations.is_empty()
    }

    pub fn has_generator(&self, g: &str) -> bool {
        self.generators.iter().any(|x| x == g)
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut Vec<String>, &mut Vec<Word>) {
        (&mut self.generators, &mut self.relations)
    }

    /// Exponent-sum matrix: rows are generators, columns are relations.
    pub fn exponent_matrix(&self) -> IntMatrix {
        let rows: Vec<Vec<BigInt>> = self
            .generators
            .iter()
            .map(|g| {
                self.relations
                    .iter()
                    .map(|r| BigInt::from(r.exponent_sum(g)))
                    .collect()
            })
            .collect();
        IntMatrix::from_big_rows(rows, self.relations.len())
    }

    pub fn abelianization(&self) -> AbelianGroup {
        cokernel(&self.exponent_matrix())
    }

    /// Total letters across all relations.
    pub fn total_length(&self) -> usize {
        self.relations.iter().map(Word::len).sum()
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relations.iter().map(ToString::to_string).collect();
        write!(f, "<{} | {}>", self.generators.join(","), rels.join(", "))
    }
}

impl FromStr for Presentation {
    type Err = PresentationError;

    /// Parses `"<a,b | a b A B, b>"`; uppercase letters are inverses.
    fn from_str(s: &str) -> Result<Self, PresentationError> {
        let malformed = || PresentationError::Malformed(s.to_string());
        let inner = s
            .trim()
            .strip_prefix('<')
            .and_then(|t| t.strip_suffix('>'))
            .ok_or_else(malformed)?;
        let (gens, rels) = inner.split_once('|').ok_or_else(malformed)?;
        let generators: Vec<String> = gens
            .split(',')
            .map(str::trim)
            .filter(|g| !g.is_empty())
            .map(String::from)
            .collect();
        let relations = if rels.trim().is_empty() {
            Vec::new()
        } else {
            rels.split(',')
                .map(|r| Word::parse(r.trim()))
                .collect::<Result<Vec<_>, _>>()?
        };
        Presentation::new(generators, relations)
    }
}

impl Serialize for Presentation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Presentation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let p: Presentation = "<a,b | a b A B, b>".parse().unwrap();
        assert_eq!(p.generators(), ["a", "b"]);
        assert_eq!(p.relations().len(), 2);
        assert_eq!(p.to_string(), "<a,b | a b A B, b>");
        let e: Presentation = "< | >".parse().unwrap();
        assert!(e.is_empty() && e.is_balanced());
        let r: Presentation = p.to_string().parse().unwrap();
        assert_eq!(r, p);
    }

    #[test]
    fn rejects_unknown_letters() {
        assert!(matches!(
            "<a | a b>".parse::<Presentation>(),
            Err(PresentationError::UnknownGenerator { .. })
        ));
        assert!(matches!(
            "<a,a | a>".parse::<Presentation>(),
            Err(PresentationError::DuplicateGenerator(_))
        ));
        assert!("a | a".parse::<Presentation>().is_err());
    }

    #[test]
    fn abelianization_examples() {
        let p: Presentation = "<a | a^5>".parse().unwrap();
        assert_eq!(p.abelianization().to_string(), "Z/5");
        let p: Presentation = "<a,b | >".parse().unwrap();
        assert_eq!(p.abelianization(), AbelianGroup::free(2));
        // exponent matrix [[3,1],[-4,-1]] has determinant 1
        let p: Presentation = "<x,y | x^3 Y^4, x y x Y X Y>".parse().unwrap();
        assert!(p.abelianization().is_trivial());
    }
}
