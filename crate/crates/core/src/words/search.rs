use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::moves::{MoveSet, PresMove, Side};
use super::presentation::Presentation;
use super::trace::MoveTrace;
use super::word::{Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchLimits {
    pub max_depth: usize,
    pub max_relation_length: usize,
    pub max_states: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_depth: 6,
            max_relation_length: 12,
            max_states: 2_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum SearchOutcome {
    Found { trace: MoveTrace, states: usize },
    /// Every reachable state within the limits was explored. This is not a proof
    /// that the presentation is not Andrews–Curtis trivial.
    Exhausted { depth: usize, states: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("presentation is not balanced")]
    Unbalanced,
    #[error("state limit exceeded after exploring {states} states")]
    LimitExceeded { states: usize },
}

// Letters are encoded as ±(index + 1) into the original generator list.
type Rel = Vec<i16>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct State {
    gens: Vec<u16>,
    rels: Vec<Rel>,
}

struct Node {
    state: State,
    parent: usize,
    moves: Vec<PresMove>,
}

fn reduce_push(out: &mut Rel, l: i16) {
    if out.last() == Some(&-l) {
        out.pop();
    } else {
        out.push(l);
    }
}

fn inverse(r: &[i16]) -> Rel {
    r.iter().rev().map(|l| -l).collect()
}

fn concat(a: &[i16], b: &[i16]) -> Rel {
    let mut out = a.to_vec();
    for &l in b {
        reduce_push(&mut out, l);
    }
    out
}

fn rel_order(a: &Rel, b: &Rel) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Each relation replaced by the lesser of itself and its inverse, then sorted.
fn canonical(s: &State) -> State {
    let mut rels: Vec<Rel> = s
        .rels
        .iter()
        .map(|r| {
            let inv = inverse(r);
            if rel_order(&inv, r).is_lt() {
                inv
            } else {
                r.clone()
            }
        })
        .collect();
    rels.sort_by(rel_order);
    State {
        gens: s.gens.clone(),
        rels,
    }
}

struct Codec<'a> {
    names: &'a [String],
}

impl Codec<'_> {
    fn encode(&self, w: &Word) -> Rel {
        w.letters()
            .iter()
            .map(|l| {
                let idx = self.names.iter().position(|n| *n == l.gen).expect("validated word");
                let code = i16::try_from(idx + 1).expect("generator count fits i16");
                if l.exp > 0 {
                    code
                } else {
                    -code
                }
            })
            .collect()
    }

    fn name(&self, code: i16) -> String {
        self.names[usize::from(code.unsigned_abs()) - 1].clone()
    }
}

fn successors(s: &State, codec: &Codec<'_>, max_len: usize) -> Vec<(State, Vec<PresMove>)> {
    let k = s.rels.len();
    let mut out = Vec::new();

    // AC4remove, preceded by AC1 when the relation is an inverted letter.
    for i in 0..k {
        if s.rels[i].len() != 1 {
            continue;
        }
        let l = s.rels[i][0];
        let g = l.abs();
        let elsewhere = s
            .rels
            .iter()
            .enumerate()
            .any(|(j, r)| j != i && r.iter().any(|x| x.abs() == g));
        if elsewhere {
            continue;
        }
        let name = codec.name(l);
        let mut moves = Vec::new();
        if l < 0 {
            moves.push(PresMove::AC1 { index: i });
        }
        moves.push(PresMove::AC4remove { generator: name });
        let mut rels = s.rels.clone();
        rels.remove(i);
        let gens = s.gens.iter().copied().filter(|&x| x as i16 + 1 != g).collect();
        out.push((State { gens, rels }, moves));
    }

    // AC2
    for i in 0..k {
        for &g in &s.gens {
            let code = g as i16 + 1;
            for side in [Side::Left, Side::Right] {
                let c = if side == Side::Left { code } else { -code };
                let w = concat(&concat(&[c], &s.rels[i]), &[-c]);
                if w.len() > max_len {
                    continue;
                }
                let mut rels = s.rels.clone();
                rels[i] = w;
                out.push((
                    State {
                        gens: s.gens.clone(),
                        rels,
                    },
                    vec![PresMove::AC2 {
                        index: i,
                        generator: codec.name(code),
                        side,
                    }],
                ));
            }
        }
    }

    // AC3
    for t in 0..k {
        for src in 0..k {
            if src == t {
                continue;
            }
            for inverse_src in [false, true] {
                let sw = if inverse_src {
                    inverse(&s.rels[src])
                } else {
                    s.rels[src].clone()
                };
                for side in [Side::Left, Side::Right] {
                    let w = match side {
                        Side::Left => concat(&sw, &s.rels[t]),
                        Side::Right => concat(&s.rels[t], &sw),
                    };
                    if w.len() > max_len {
                        continue;
                    }
                    let mut rels = s.rels.clone();
                    rels[t] = w;
                    out.push((
                        State {
                            gens: s.gens.clone(),
                            rels,
                        },
                        vec![PresMove::AC3 {
                            target: t,
                            source: src,
                            side,
                            inverse: inverse_src,
                        }],
                    ));
                }
            }
        }
    }
    out
}

/// Breadth-first search, layer by layer, for an Andrews–Curtis trivialization of `p`.
///
/// States are deduplicated up to relation order and relation inversion; the returned
/// trace uses the real moves applied to the real presentations along the path.
/// AC1 edges alone never leave a canonical class and are emitted only in front of an
/// AC4remove. AC4add is not explored.
pub fn ac_search(p: &Presentation, limits: SearchLimits) -> Result<SearchOutcome, SearchError> {
    if !p.is_balanced() {
        return Err(SearchError::Unbalanced);
    }
    let codec = Codec {
        names: p.generators(),
    };
    let start = State {
        gens: (0..p.generators().len() as u16).collect(),
        rels: p.relations().iter().map(|r| codec.encode(r)).collect(),
    };
    let mut seen: HashSet<State> = HashSet::new();
    seen.insert(canonical(&start));
    let mut nodes = vec![Node {
        state: start,
        parent: usize::MAX,
        moves: Vec::new(),
    }];
    let mut frontier = vec![0usize];
    let mut depth = 0;
    loop {
        if let Some(&goal) = frontier.iter().find(|&&i| nodes[i].state.rels.is_empty()) {
            let trace = reconstruct(p, &nodes, goal);
            return Ok(SearchOutcome::Found {
                trace,
                states: nodes.len(),
            });
        }
        if depth == limits.max_depth || frontier.is_empty() {
            return Ok(SearchOutcome::Exhausted {
                depth,
                states: nodes.len(),
            });
        }
        let mut next = Vec::new();
        for &idx in &frontier {
            let succ = successors(&nodes[idx].state, &codec, limits.max_relation_length);
            for (state, moves) in succ {
                if !seen.insert(canonical(&state)) {
                    continue;
                }
                if nodes.len() >= limits.max_states {
                    return Err(SearchError::LimitExceeded { states: nodes.len() });
                }
                let is_goal = state.rels.is_empty();
                nodes.push(Node {
                    state,
                    parent: idx,
                    moves,
                });
                next.push(nodes.len() - 1);
                if is_goal {
                    let trace = reconstruct(p, &nodes, nodes.len() - 1);
                    return Ok(SearchOutcome::Found {
                        trace,
                        states: nodes.len(),
                    });
                }
            }
        }
        frontier = next;
        depth += 1;
    }
}

fn reconstruct(p: &Presentation, nodes: &[Node], goal: usize) -> MoveTrace {
    let mut chain = Vec::new();
    let mut cur = goal;
    while cur != 0 {
        chain.push(cur);
        cur = nodes[cur].parent;
    }
    let steps: Vec<PresMove> = chain
        .into_iter()
        .rev()
        .flat_map(|i| nodes[i].moves.iter().cloned())
        .collect();
    MoveTrace::record(p.clone(), steps, MoveSet::Standard)
        .expect("search edges are legal Andrews-Curtis moves")
}

// Used by the decoder in tests to cross-check encoding.
#[allow(dead_code)]
fn decode(codec: &Codec<'_>, r: &[i16]) -> Word {
    Word::from_letters(
        r.iter()
            .map(|&l| Letter::new(codec.name(l), if l > 0 { 1 } else { -1 }))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::verify_trace;

    fn p(s: &str) -> Presentation {
        s.parse().unwrap()
    }

    #[test]
    fn single_relator_in_one_step() {
        let out = ac_search(&p("<a | a>"), SearchLimits { max_depth: 2, ..Default::default() }).unwrap();
        match out {
            SearchOutcome::Found { trace, .. } => {
                assert_eq!(trace.steps.len(), 1);
                assert!(verify_trace(&trace).accepted);
            }
            other => panic!("expected a trace, got {other:?}"),
        }
    }

    #[test]
    fn inverted_letter_uses_ac1() {
        let out = ac_search(&p("<a | A>"), SearchLimits { max_depth: 1, ..Default::default() }).unwrap();
        let SearchOutcome::Found { trace, .. } = out else { panic!() };
        assert_eq!(trace.steps[0], PresMove::AC1 { index: 0 });
        assert!(verify_trace(&trace).accepted);
    }

    #[test]
    fn unbalanced_is_rejected() {
        assert_eq!(
            ac_search(&p("<a,b | a>"), SearchLimits::default()),
            Err(SearchError::Unbalanced)
        );
    }

    #[test]
    fn state_limit_is_enforced() {
        let limits = SearchLimits {
            max_depth: 10,
            max_relation_length: 20,
            max_states: 50,
        };
        let out = ac_search(&p("<x,y | x^3 Y^4, x y x Y X Y>"), limits);
        assert_eq!(out, Err(SearchError::LimitExceeded { states: 50 }));
    }

    #[test]
    fn codec_round_trip() {
        let pres = p("<a,b | a B a, b>");
        let codec = Codec { names: pres.generators() };
        let r = codec.encode(&pres.relations()[0]);
        assert_eq!(r, vec![1, -2, 1]);
        assert_eq!(decode(&codec, &r), pres.relations()[0]);
    }
}
