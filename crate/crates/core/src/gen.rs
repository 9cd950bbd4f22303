//! Seeded random diagrams and move scripts for fuzzing and property tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::front::{Event, FrontDiagram};
use crate::moves::{apply_move, DiagMove};
use crate::page::{Circle, PageDiagram};
use crate::twist::OpenBook;

/// Unknots with max tb for their rotation number (possibly further stabilized) and
/// random linking numbers; no 1-handles, trivial monodromy.
pub fn random_trivial_book<R: Rng>(rng: &mut R, max_circles: usize) -> OpenBook {
    let m = rng.gen_range(0..=max_circles);
    let circles: Vec<Circle> = (0..m)
        .map(|i| {
            let rot = rng.gen_range(-3..=3);
            let mut c = Circle::unknot(format!("K{}", i + 1), rot);
            c.tb -= 2 * rng.gen_range(0..=1);
            c
        })
        .collect();
    let mut lk = vec![vec![0i64; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let v = rng.gen_range(-3..=3);
            lk[i][j] = v;
            lk[j][i] = v;
        }
    }
    OpenBook::trivial(PageDiagram::from_unknots(circles, &lk).expect("unknots form a page"))
}

/// Candidate moves that do not change the contact manifold and keep the page free
/// of 1-handles and the monodromy trivial.
fn candidate<R: Rng>(rng: &mut R, b: &OpenBook) -> Option<DiagMove> {
    let names: Vec<String> = b.page().circles().iter().map(|c| c.name.clone()).collect();
    let pick = |rng: &mut R| names.choose(rng).cloned();
    let sign = |rng: &mut R| if rng.gen_bool(0.5) { 1 } else { -1 };
    let circle = pick(rng)?;
    Some(match rng.gen_range(0..6) {
        0 => DiagMove::MoveI { circle },
        1 => DiagMove::MoveIInv { circle },
        2 => DiagMove::MoveII {
            circle,
            target: pick(rng),
            sign: sign(rng),
        },
        3 => DiagMove::MoveII {
            circle,
            target: None,
            sign: sign(rng),
        },
        4 => DiagMove::Slide2 {
            circle,
            over: pick(rng)?,
            sign: sign(rng),
            via: crate::words::Word::empty(),
        },
        _ => DiagMove::Flip { circle },
    })
}

/// A script of `steps` legal moves, each checked by applying it.
pub fn random_legal_script<R: Rng>(rng: &mut R, b: &OpenBook, steps: usize) -> Vec<DiagMove> {
    let mut cur = b.clone();
    let mut out = Vec::with_capacity(steps);
    let mut attempts = 0;
    while out.len() < steps && attempts < 50 * steps.max(1) {
        attempts += 1;
        let Some(m) = candidate(rng, &cur) else { break };
        if let Ok(next) = apply_move(&cur, &m) {
            cur = next;
            out.push(m);
        }
    }
    out
}

/// A random closed front; `with_handle` lets strands pass over a 1-handle `g`.
pub fn random_front<R: Rng>(rng: &mut R, max_events: usize, with_handle: bool) -> FrontDiagram {
    let mut cols = Vec::new();
    let mut n = 0usize;
    let target = rng.gen_range(1..=max_events.max(1));
    while cols.len() < target {
        let roll = rng.gen_range(0..10);
        let ev = if n == 0 || (roll < 3 && n < 8) {
            Event::LeftCusp(rng.gen_range(0..=n))
        } else if roll < 7 && n >= 2 {
            Event::Crossing(rng.gen_range(0..n - 1))
        } else if roll < 8 && with_handle {
            Event::HandlePass {
                slot: rng.gen_range(0..n),
                handle: "g".into(),
                dir: if rng.gen_bool(0.5) { 1 } else { -1 },
            }
        } else {
            Event::RightCusp(rng.gen_range(0..n - 1))
        };
        n = (n as isize + ev.delta()) as usize;
        cols.push(ev);
    }
    while n > 0 {
        let k = rng.gen_range(0..n - 1);
        cols.push(Event::RightCusp(k));
        n -= 2;
    }
    let handles = if with_handle { vec!["g".to_string()] } else { vec![] };
    FrontDiagram::new(handles, cols, Vec::new()).expect("slot-valid event lists are fronts")
}
