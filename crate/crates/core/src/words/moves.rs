use serde::{Deserialize, Serialize};

use super::presentation::Presentation;
use super::word::{is_generator_name, Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DoubleMode {
    Double,
    Inverse,
}

/// Tietze and Andrews–Curtis moves. Indices are 0-based positions in the relation list.
///
/// Conjugation (`T1ii`, `AC2`) with [`Side::Left`] gives `g r g⁻¹`, with [`Side::Right`]
/// gives `g⁻¹ r g`. Products (`T1iii`, `AC3`) replace the target by `s·r` on the left or
/// `r·s` on the right, where `s` is the source relation, inverted when `inverse` is set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "move")]
pub enum PresMove {
    T1i {
        mode: DoubleMode,
        index: usize,
    },
    T1ii {
        index: usize,
        generator: String,
        side: Side,
    },
    T1iii {
        target: usize,
        source: usize,
        side: Side,
        #[serde(default)]
        inverse: bool,
    },
    T2add {
        generator: String,
        word: Word,
    },
    T2remove {
        generator: String,
        relation: usize,
    },
    AC1 {
        index: usize,
    },
    AC2 {
        index: usize,
        generator: String,
        side: Side,
    },
    AC3 {
        target: usize,
        source: usize,
        side: Side,
        #[serde(default)]
        inverse: bool,
    },
    AC4add {
        generator: String,
    },
    AC4remove {
        generator: String,
    },
    /// Extended: substitute `g ↦ g·h^exp` (a 1-handle slide).
    GenMul {
        generator: String,
        by: String,
        exp: i8,
    },
    /// Extended: substitute `g ↦ g⁻¹`.
    GenInv {
        generator: String,
    },
}

impl PresMove {
    pub fn is_ac(&self) -> bool {
        matches!(
            self,
            PresMove::AC1 { .. }
                | PresMove::AC2 { .. }
                | PresMove::AC3 { .. }
                | PresMove::AC4add { .. }
                | PresMove::AC4remove { .. }
        )
    }

    pub fn is_extended(&self) -> bool {
        matches!(self, PresMove::GenMul { .. } | PresMove::GenInv { .. })
    }
}

/// Which moves are admitted. The generator moves are only meaningful for some
/// variants of the Andrews–Curtis setting, so they are opt-in.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MoveSet {
    #[default]
    Standard,
    Extended,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PresMoveError {
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("Andrews-Curtis move applied to an unbalanced presentation")]
    UnbalancedInput,
}

fn illegal(msg: impl Into<String>) -> PresMoveError {
    PresMoveError::IllegalMove(msg.into())
}

fn check_index(p: &Presentation, i: usize) -> Result<(), PresMoveError> {
    if i < p.relations().len() {
        Ok(())
    } else {
        Err(illegal(format!(
            "relation index {i} out of range (have {})",
            p.relations().len()
        )))
    }
}

fn check_generator(p: &Presentation, g: &str) -> Result<(), PresMoveError> {
    if p.has_generator(g) {
        Ok(())
    } else {
        Err(illegal(format!("unknown generator {g:?}")))
    }
}

fn conjugate(r: &Word, g: &str, side: Side) -> Word {
    let gw = Word::generator(g);
    match side {
        Side::Left => gw.concat(r).concat(&gw.inverse()),
        Side::Right => gw.inverse().concat(r).concat(&gw),
    }
    .free_reduce()
}

fn product(p: &Presentation, target: usize, source: usize, side: Side, inverse: bool) -> Result<Word, PresMoveError> {
    check_index(p, target)?;
    check_index(p, source)?;
    if target == source {
        return Err(illegal("product of a relation with itself"));
    }
    let r = &p.relations()[target];
    let s = if inverse {
        p.relations()[source].inverse()
    } else {
        p.relations()[source].clone()
    };
    Ok(match side {
        Side::Left => s.mul(r),
        Side::Right => r.mul(&s),
    })
}

fn add_generator(p: &mut Presentation, g: &str, relation: Word) -> Result<(), PresMoveError> {
    if !is_generator_name(g) {
        return Err(illegal(format!("invalid generator name {g:?}")));
    }
    if p.has_generator(g) {
        return Err(illegal(format!("generator {g:?} already present")));
    }
    let (gens, rels) = p.parts_mut();
    gens.push(g.to_string());
    rels.push(relation.free_reduce());
    Ok(())
}

fn remove_generator(p: &mut Presentation, g: &str, relation: usize, replacement: &Word) {
    let (gens, rels) = p.parts_mut();
    gens.retain(|x| x != g);
    rels.remove(relation);
    for r in rels.iter_mut() {
        *r = r.substitute(g, replacement);
    }
}

fn substitute_all(p: &mut Presentation, g: &str, replacement: &Word) {
    let (_, rels) = p.parts_mut();
    for r in rels.iter_mut() {
        *r = r.substitute(g, replacement);
    }
}

pub fn apply_pres_move(p: &Presentation, m: &PresMove) -> Result<Presentation, PresMoveError> {
    apply_pres_move_with(p, m, MoveSet::Standard)
}

pub fn apply_pres_move_with(
    p: &Presentation,
    m: &PresMove,
    moves: MoveSet,
) -> Result<Presentation, PresMoveError> {
    if m.is_extended() && moves != MoveSet::Extended {
        return Err(illegal("generator moves require the extended move set"));
    }
    if m.is_ac() && !p.is_balanced() {
        return Err(PresMoveError::UnbalancedInput);
    }
    let mut out = p.clone();
    match m {
        PresMove::T1i { mode, index } => {
            check_index(p, *index)?;
            let r = &p.relations()[*index];
            let copy = match mode {
                DoubleMode::Double => r.clone(),
                DoubleMode::Inverse => r.inverse(),
            };
            out.parts_mut().1.insert(index + 1, copy);
        }
        PresMove::T1ii { index, generator, side } | PresMove::AC2 { index, generator, side } => {
            check_index(p, *index)?;
            check_generator(p, generator)?;
            out.parts_mut().1[*index] = conjugate(&p.relations()[*index], generator, *side);
        }
        PresMove::T1iii { target, source, side, inverse }
        | PresMove::AC3 { target, source, side, inverse } => {
            let w = product(p, *target, *source, *side, *inverse)?;
            out.parts_mut().1[*target] = w;
        }
        PresMove::T2add { generator, word } => {
            if let Some(l) = word.letters().iter().find(|l| !p.has_generator(&l.gen)) {
                return Err(illegal(format!(
                    "word for {generator:?} uses {:?}, which is not a pre-existing generator",
                    l.gen
                )));
            }
            let rel = Word::generator(generator.clone()).concat(&word.inverse());
            add_generator(&mut out, generator, rel)?;
        }
        PresMove::T2remove { generator, relation } => {
            check_generator(p, generator)?;
            check_index(p, *relation)?;
            let r = &p.relations()[*relation];
            let first = r.letters().first();
            if first != Some(&Letter::new(generator.clone(), 1)) {
                return Err(illegal(format!(
                    "relation {relation} does not start with {generator:?}"
                )));
            }
            let w = Word::from_letters(r.letters()[1..].to_vec()).inverse();
            if w.mentions(generator) {
                return Err(illegal(format!(
                    "relation {relation} is not of the form {generator}·w⁻¹ with {generator} absent from w"
                )));
            }
            remove_generator(&mut out, generator, *relation, &w);
        }
        PresMove::AC1 { index } => {
            check_index(p, *index)?;
            out.parts_mut().1[*index] = p.relations()[*index].inverse();
        }
        PresMove::AC4add { generator } => {
            add_generator(&mut out, generator, Word::generator(generator.clone()))?;
        }
        PresMove::AC4remove { generator } => {
            check_generator(p, generator)?;
            let single = Word::generator(generator.clone());
            let idx = p
                .relations()
                .iter()
                .position(|r| *r == single)
                .ok_or_else(|| illegal(format!("no relation equal to the single letter {generator}")))?;
            if let Some(j) = p
                .relations()
                .iter()
                .enumerate()
                .position(|(j, r)| j != idx && r.mentions(generator))
            {
                return Err(illegal(format!(
                    "generator {generator:?} still occurs in relation {j}"
                )));
            }
            remove_generator(&mut out, generator, idx, &Word::empty());
        }
        PresMove::GenMul { generator, by, exp } => {
            check_generator(p, generator)?;
            check_generator(p, by)?;
            if generator == by {
                return Err(illegal("cannot multiply a generator by itself"));
            }
            if *exp != 1 && *exp != -1 {
                return Err(illegal("exponent must be ±1"));
            }
            let rep = Word::from_letters(vec![
                Letter::new(generator.clone(), 1),
                Letter::new(by.clone(), *exp),
            ]);
            substitute_all(&mut out, generator, &rep);
        }
        PresMove::GenInv { generator } => {
            check_generator(p, generator)?;
            substitute_all(&mut out, generator, &Word::generator(generator.clone()).inverse());
        }
    }
    if m.is_ac() && !out.is_balanced() {
        return Err(PresMoveError::UnbalancedInput);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Presentation {
        s.parse().unwrap()
    }

    #[test]
    fn conjugation_by_generator() {
        let q = apply_pres_move(
            &p("<g,a,b | a b>"),
            &PresMove::T1ii {
                index: 0,
                generator: "g".into(),
                side: Side::Left,
            },
        )
        .unwrap();
        assert_eq!(q, p("<g,a,b | g a b G>"));
    }

    #[test]
    fn ac3_product() {
        let q = apply_pres_move(
            &p("<a,b | a, b a>"),
            &PresMove::AC3 {
                target: 1,
                source: 0,
                side: Side::Left,
                inverse: false,
            },
        )
        .unwrap();
        assert_eq!(q, p("<a,b | a, a b a>"));
        let q = apply_pres_move(
            &p("<a,b | a b, b>"),
            &PresMove::AC3 {
                target: 0,
                source: 1,
                side: Side::Right,
                inverse: true,
            },
        )
        .unwrap();
        assert_eq!(q, p("<a,b | a, b>"));
    }

    #[test]
    fn ac4_remove_to_empty() {
        let q = apply_pres_move(&p("<g | g>"), &PresMove::AC4remove { generator: "g".into() }).unwrap();
        assert!(q.is_empty());
        // g still used elsewhere
        let err = apply_pres_move(&p("<g,h | g, h g>"), &PresMove::AC4remove { generator: "g".into() });
        assert!(matches!(err, Err(PresMoveError::IllegalMove(_))));
    }

    #[test]
    fn ac_moves_need_balance() {
        let err = apply_pres_move(&p("<a,b | a>"), &PresMove::AC1 { index: 0 });
        assert_eq!(err, Err(PresMoveError::UnbalancedInput));
    }

    #[test]
    fn tietze_two_round_trip() {
        let base = p("<a,b | a b A B>");
        let added = apply_pres_move(
            &base,
            &PresMove::T2add {
                generator: "c".into(),
                word: Word::parse("a b").unwrap(),
            },
        )
        .unwrap();
        assert_eq!(added, p("<a,b,c | a b A B, c B A>"));
        let removed = apply_pres_move(
            &added,
            &PresMove::T2remove {
                generator: "c".into(),
                relation: 1,
            },
        )
        .unwrap();
        assert_eq!(removed, base);
    }

    #[test]
    fn tietze_two_rejects_self_reference() {
        let err = apply_pres_move(
            &p("<a | a>"),
            &PresMove::T2add {
                generator: "c".into(),
                word: Word::parse("c a").unwrap(),
            },
        );
        assert!(matches!(err, Err(PresMoveError::IllegalMove(_))));
        let err = apply_pres_move(
            &p("<a,c | c a c>"),
            &PresMove::T2remove {
                generator: "c".into(),
                relation: 0,
            },
        );
        assert!(matches!(err, Err(PresMoveError::IllegalMove(_))));
    }

    #[test]
    fn extended_moves_are_gated() {
        let m = PresMove::GenInv { generator: "a".into() };
        assert!(apply_pres_move(&p("<a | a a>"), &m).is_err());
        let q = apply_pres_move_with(&p("<a | a a>"), &m, MoveSet::Extended).unwrap();
        assert_eq!(q, p("<a | A A>"));
        let q = apply_pres_move_with(
            &p("<a,b | a, b>"),
            &PresMove::GenMul {
                generator: "a".into(),
                by: "b".into(),
                exp: -1,
            },
            MoveSet::Extended,
        )
        .unwrap();
        assert_eq!(q, p("<a,b | a B, b>"));
    }

    #[test]
    fn doubling_inserts_after_index() {
        let q = apply_pres_move(
            &p("<a,b | a, b>"),
            &PresMove::T1i {
                mode: DoubleMode::Inverse,
                index: 0,
            },
        )
        .unwrap();
        assert_eq!(q, p("<a,b | a, A, b>"));
    }

    #[test]
    fn move_json_is_tagged() {
        let m = PresMove::AC4remove { generator: "g".into() };
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"move":"AC4remove","generator":"g"}"#);
    }
}
