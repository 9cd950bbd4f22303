use serde::{Deserialize, Serialize};

use super::FrontError;
use crate::words::{Letter, Word};

/// One column of the event grid. Slots are numbered from the top, starting at 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Event {
    /// Two new strands appear at slots `s` and `s + 1`.
    LeftCusp(usize),
    /// Strands at `s` and `s + 1` join and disappear.
    RightCusp(usize),
    /// Strands at `s` and `s + 1` swap.
    Crossing(usize),
    /// The strand at `slot` passes through a 1-handle. `dir` is the letter exponent
    /// read when the strand is traversed left to right.
    HandlePass { slot: usize, handle: String, dir: i8 },
}

impl Event {
    /// Change in strand count across this column.
    pub fn delta(&self) -> isize {
        match self {
            Event::LeftCusp(_) => 2,
            Event::RightCusp(_) => -2,
            _ => 0,
        }
    }
}

/// Name and orientation seed of one component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KnotSpec {
    pub name: String,
    /// Default orientation sends the upper strand of the component's first left cusp
    /// to the right; `reversed` flips it.
    pub reversed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Strand {
    pub left_cusp: usize,
    pub right_cusp: usize,
    pub component: usize,
    /// +1 when traversed rightward under the component's orientation.
    pub dir: i8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum CuspKind {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Cusp {
    pub column: usize,
    pub kind: CuspKind,
    pub upper: usize,
    pub lower: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct CrossingRec {
    pub column: usize,
    /// Strand entering from the upper-left.
    pub falling: usize,
    /// Strand entering from the lower-left.
    pub rising: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct PassRec {
    pub column: usize,
    pub strand: usize,
    pub handle: String,
    pub dir: i8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ComponentRec {
    /// Strands in traversal order.
    pub strands: Vec<usize>,
    pub first_left_cusp: usize,
}

/// Result of sweeping the grid once.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub(crate) struct Analysis {
    pub strands: Vec<Strand>,
    pub cusps: Vec<Cusp>,
    pub crossings: Vec<CrossingRec>,
    pub passes: Vec<PassRec>,
    pub components: Vec<ComponentRec>,
    /// Strand id occupying each slot just before each column, plus one final entry.
    pub slot_strands: Vec<Vec<usize>>,
}

/// Legendrian front in the event-grid normal form, over a set of 1-handles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrontDiagram {
    handles: Vec<String>,
    columns: Vec<Event>,
    knots: Vec<KnotSpec>,
    pub(crate) analysis: Analysis,
}

/// `tb = writhe − (up + down)/2`, `rot = (down − up)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalInvariants {
    pub tb: i64,
    pub rot: i64,
    pub writhe: i64,
    pub cusps_up: usize,
    pub cusps_down: usize,
}

/// Sign of a stabilization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StabSign {
    Plus,
    Minus,
}

impl FrontDiagram {
    /// Validates the grid and computes components. `knots` is either empty (default
    /// names `K1, K2, …`) or has exactly one entry per component, in order of each
    /// component's first left cusp.
    pub fn new(handles: Vec<String>, columns: Vec<Event>, knots: Vec<KnotSpec>) -> Result<Self, FrontError> {
        for (i, h) in handles.iter().enumerate() {
            if !crate::words::is_generator_name(h) {
                return Err(FrontError::validation(None, format!("invalid handle name {h:?}")));
            }
            if handles[..i].contains(h) {
                return Err(FrontError::validation(None, format!("duplicate handle {h:?}")));
            }
        }
        let mut analysis = sweep(&handles, &columns)?;
        let knots = if knots.is_empty() {
            (1..=analysis.components.len())
                .map(|i| KnotSpec {
                    name: format!("K{i}"),
                    reversed: false,
                })
                .collect()
        } else {
            knots
        };
        if knots.len() != analysis.components.len() {
            return Err(FrontError::validation(
                None,
                format!(
                    "{} knot headers for {} components",
                    knots.len(),
                    analysis.components.len()
                ),
            ));
        }
        for (i, k) in knots.iter().enumerate() {
            if knots[..i].iter().any(|o| o.name == k.name) {
                return Err(FrontError::validation(None, format!("duplicate knot name {:?}", k.name)));
            }
            if k.reversed {
                let comp = &mut analysis.components[i];
                comp.strands.reverse();
                for &s in &comp.strands {
                    analysis.strands[s].dir = -analysis.strands[s].dir;
                }
            }
        }
        Ok(FrontDiagram {
            handles,
            columns,
            knots,
            analysis,
        })
    }

    pub fn empty() -> Self {
        FrontDiagram::new(Vec::new(), Vec::new(), Vec::new()).expect("empty front is valid")
    }

    pub fn handles(&self) -> &[String] {
        &self.handles
    }

    pub fn columns(&self) -> &[Event] {
        &self.columns
    }

    pub fn knots(&self) -> &[KnotSpec] {
        &self.knots
    }

    pub fn component_count(&self) -> usize {
        self.analysis.components.len()
    }

    pub fn component_index(&self, name: &str) -> Option<usize> {
        self.knots.iter().position(|k| k.name == name)
    }

    fn check_component(&self, c: usize) -> Result<(), FrontError> {
        if c < self.component_count() {
            Ok(())
        } else {
            Err(FrontError::UnknownComponent(c.to_string()))
        }
    }

    pub fn crossing_count(&self) -> usize {
        self.analysis.crossings.len()
    }

    pub fn cusp_count(&self) -> usize {
        self.analysis.cusps.len()
    }

    /// Component owning each crossing strand pair, with the crossing sign.
    fn signed_crossings(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.analysis.crossings.iter().map(|c| {
            let a = &self.analysis.strands[c.falling];
            let b = &self.analysis.strands[c.rising];
            // Front crossings carry their over-strand implicitly; with that convention a
            // crossing is positive exactly when both strands run in the same x-direction.
            let sign = if a.dir == b.dir { 1 } else { -1 };
            (a.component, b.component, sign)
        })
    }

    pub fn classical_invariants(&self, component: usize) -> Result<ClassicalInvariants, FrontError> {
        self.check_component(component)?;
        let writhe: i64 = self
            .signed_crossings()
            .filter(|&(a, b, _)| a == component && b == component)
            .map(|(_, _, s)| s)
            .sum();
        let mut up = 0usize;
        let mut down = 0usize;
        for cusp in &self.analysis.cusps {
            let upper = &self.analysis.strands[cusp.upper];
            if upper.component != component {
                continue;
            }
            // Left cusp: traversal climbs from the lower strand to the upper one when the
            // upper strand leaves rightward. Right cusp: the opposite.
            let climbs = match cusp.kind {
                CuspKind::Left => upper.dir > 0,
                CuspKind::Right => upper.dir < 0,
            };
            if climbs {
                up += 1;
            } else {
                down += 1;
            }
        }
        let total = (up + down) as i64;
        Ok(ClassicalInvariants {
            tb: writhe - total / 2,
            rot: (down as i64 - up as i64) / 2,
            writhe,
            cusps_up: up,
            cusps_down: down,
        })
    }

    /// Handle word read along the component's orientation, starting at its first left cusp.
    pub fn handle_word(&self, component: usize) -> Result<Word, FrontError> {
        self.check_component(component)?;
        let mut letters = Vec::new();
        for &s in &self.analysis.components[component].strands {
            let dir = self.analysis.strands[s].dir;
            let mut passes: Vec<&PassRec> = self.analysis.passes.iter().filter(|p| p.strand == s).collect();
            if dir < 0 {
                passes.reverse();
            }
            for p in passes {
                letters.push(Letter::new(p.handle.clone(), p.dir * dir));
            }
        }
        Ok(Word::from_letters(letters))
    }

    /// Half the signed count of crossings between two distinct components.
    pub fn linking(&self, i: usize, j: usize) -> Result<i64, FrontError> {
        self.check_component(i)?;
        self.check_component(j)?;
        if i == j {
            return Err(FrontError::SameComponent(i));
        }
        for c in [i, j] {
            let w = self.handle_word(c)?;
            let sums: Vec<(String, i64)> = self
                .handles
                .iter()
                .map(|h| (h.clone(), w.exponent_sum(h)))
                .filter(|(_, s)| *s != 0)
                .collect();
            if !sums.is_empty() {
                return Err(FrontError::UndefinedLinking {
                    component: self.knots[c].name.clone(),
                    exponent_sums: sums,
                });
            }
        }
        let total: i64 = self
            .signed_crossings()
            .filter(|&(a, b, _)| (a == i && b == j) || (a == j && b == i))
            .map(|(_, _, s)| s)
            .sum();
        Ok(total / 2)
    }

    /// Adds one zigzag right after the component's first left cusp, on its upper strand.
    pub fn stabilize(&self, component: usize, sign: StabSign) -> Result<FrontDiagram, FrontError> {
        self.check_component(component)?;
        let cusp = &self.analysis.cusps[self.analysis.components[component].first_left_cusp];
        let column = cusp.column;
        let Event::LeftCusp(slot) = self.columns[column] else {
            unreachable!("first left cusp column holds a left cusp");
        };
        let rightward = self.analysis.strands[cusp.upper].dir > 0;
        // Stepping down (new cusps below the strand) on a rightward strand produces two
        // descending cusps, i.e. a positive stabilization.
        let step_down = rightward == (sign == StabSign::Plus);
        let zigzag = if step_down {
            [Event::LeftCusp(slot + 1), Event::RightCusp(slot)]
        } else {
            [Event::LeftCusp(slot), Event::RightCusp(slot + 1)]
        };
        let mut columns = self.columns.clone();
        columns.splice(column + 1..column + 1, zigzag);
        FrontDiagram::new(self.handles.clone(), columns, self.knots.clone())
    }

    /// Same diagram with one component's orientation reversed.
    pub fn reverse_component(&self, component: usize) -> Result<FrontDiagram, FrontError> {
        self.check_component(component)?;
        let mut knots = self.knots.clone();
        knots[component].reversed = !knots[component].reversed;
        FrontDiagram::new(self.handles.clone(), self.columns.clone(), knots)
    }

    /// Strand count just before column `c` (`c == columns.len()` gives the final count).
    pub fn strands_before(&self, c: usize) -> usize {
        self.analysis.slot_strands[c].len()
    }

    /// Component index of the strand at `slot` just before column `c`.
    pub(crate) fn component_at(&self, c: usize, slot: usize) -> usize {
        self.analysis.strands[self.analysis.slot_strands[c][slot]].component
    }
}

fn sweep(handles: &[String], columns: &[Event]) -> Result<Analysis, FrontError> {
    struct Partial {
        left_cusp: usize,
        right_cusp: Option<usize>,
    }
    let mut partial: Vec<Partial> = Vec::new();
    let mut cusps = Vec::new();
    let mut crossings = Vec::new();
    let mut passes = Vec::new();
    let mut slots: Vec<usize> = Vec::new();
    let mut slot_strands = Vec::with_capacity(columns.len() + 1);

    for (col, ev) in columns.iter().enumerate() {
        slot_strands.push(slots.clone());
        let n = slots.len();
        let bad = |msg: String| Err(FrontError::validation(Some(col), msg));
        match ev {
            Event::LeftCusp(s) => {
                if *s > n {
                    return bad(format!("left cusp at slot {s} with only {n} strands"));
                }
                let cusp = cusps.len();
                let upper = partial.len();
                partial.push(Partial { left_cusp: cusp, right_cusp: None });
                partial.push(Partial { left_cusp: cusp, right_cusp: None });
                cusps.push(Cusp {
                    column: col,
                    kind: CuspKind::Left,
                    upper,
                    lower: upper + 1,
                });
                slots.splice(*s..*s, [upper, upper + 1]);
            }
            Event::RightCusp(s) => {
                if s + 1 >= n {
                    return bad(format!("right cusp at slot {s} with only {n} strands"));
                }
                let cusp = cusps.len();
                let (upper, lower) = (slots[*s], slots[s + 1]);
                partial[upper].right_cusp = Some(cusp);
                partial[lower].right_cusp = Some(cusp);
                cusps.push(Cusp {
                    column: col,
                    kind: CuspKind::Right,
                    upper,
                    lower,
                });
                slots.drain(*s..s + 2);
            }
            Event::Crossing(s) => {
                if s + 1 >= n {
                    return bad(format!("crossing at slot {s} with only {n} strands"));
                }
                crossings.push(CrossingRec {
                    column: col,
                    falling: slots[*s],
                    rising: slots[s + 1],
                });
                slots.swap(*s, s + 1);
            }
            Event::HandlePass { slot, handle, dir } => {
                if *slot >= n {
                    return bad(format!("handle pass at slot {slot} with only {n} strands"));
                }
                if !handles.contains(handle) {
                    return bad(format!("unknown handle {handle:?}"));
                }
                if *dir != 1 && *dir != -1 {
                    return bad(format!("handle direction must be ±1, got {dir}"));
                }
                passes.push(PassRec {
                    column: col,
                    strand: slots[*slot],
                    handle: handle.clone(),
                    dir: *dir,
                });
            }
        }
    }
    slot_strands.push(slots.clone());
    if !slots.is_empty() {
        return Err(FrontError::validation(
            None,
            format!("{} strands left open at the right end", slots.len()),
        ));
    }

    let mut strands: Vec<Strand> = partial
        .iter()
        .map(|p| Strand {
            left_cusp: p.left_cusp,
            right_cusp: p.right_cusp.expect("all strands closed"),
            component: usize::MAX,
            dir: 0,
        })
        .collect();

    let mut components = Vec::new();
    for (ci, cusp) in cusps.iter().enumerate() {
        if cusp.kind != CuspKind::Left || strands[cusp.upper].component != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut order = Vec::new();
        let mut cur = cusp.upper;
        let mut dir: i8 = 1;
        loop {
            if strands[cur].component != usize::MAX {
                if cur == cusp.upper && !order.is_empty() {
                    break;
                }
                return Err(FrontError::validation(
                    Some(cusps[strands[cur].left_cusp].column),
                    "component does not close up".to_string(),
                ));
            }
            strands[cur].component = id;
            strands[cur].dir = dir;
            order.push(cur);
            let end = if dir > 0 { strands[cur].right_cusp } else { strands[cur].left_cusp };
            let c = &cusps[end];
            cur = if c.upper == cur { c.lower } else { c.upper };
            dir = -dir;
        }
        components.push(ComponentRec {
            strands: order,
            first_left_cusp: ci,
        });
    }

    Ok(Analysis {
        strands,
        cusps,
        crossings,
        passes,
        components,
        slot_strands,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::front::parse_front;

    fn inv(text: &str, c: usize) -> ClassicalInvariants {
        parse_front(text).unwrap().classical_invariants(c).unwrap()
    }

    #[test]
    fn unknot_and_trefoil() {
        let u = inv("l0 r0", 0);
        assert_eq!((u.tb, u.rot, u.writhe), (-1, 0, 0));
        let t = inv("l0 l2 x1 x1 x1 r0 r0", 0);
        assert_eq!((t.tb, t.rot, t.writhe), (1, 0, 3));
    }

    #[test]
    fn stabilizations_shift_invariants() {
        let f = parse_front("l0 r0").unwrap();
        for (sign, drot) in [(StabSign::Plus, 1), (StabSign::Minus, -1)] {
            let s = f.stabilize(0, sign).unwrap();
            let i = s.classical_invariants(0).unwrap();
            assert_eq!((i.tb, i.rot), (-2, drot));
            let ss = s.stabilize(0, sign).unwrap().classical_invariants(0).unwrap();
            assert_eq!((ss.tb, ss.rot), (-3, 2 * drot));
        }
        let t = parse_front("l0 l2 x1 x1 x1 r0 r0").unwrap();
        let i = t.stabilize(0, StabSign::Minus).unwrap().classical_invariants(0).unwrap();
        assert_eq!((i.tb, i.rot), (0, -1));
    }

    #[test]
    fn sigma_linking() {
        for k in 1..=5usize {
            let f = parse_front(&crate::corpus::sigma_front_text(k)).unwrap();
            assert_eq!(f.linking(0, 1).unwrap(), k as i64);
            assert_eq!(f.linking(1, 0).unwrap(), k as i64);
            assert_eq!(f.classical_invariants(1).unwrap().tb, -1);
            let r = f.reverse_component(1).unwrap();
            assert_eq!(r.linking(0, 1).unwrap(), -(k as i64));
        }
        let f = parse_front("l0 r0").unwrap();
        assert!(matches!(f.linking(0, 0), Err(FrontError::SameComponent(0))));
    }

    #[test]
    fn reversal_negates_rot() {
        let f = parse_front("l0 r0").unwrap().stabilize(0, StabSign::Plus).unwrap();
        let r = f.reverse_component(0).unwrap();
        let (a, b) = (f.classical_invariants(0).unwrap(), r.classical_invariants(0).unwrap());
        assert_eq!((a.tb, -a.rot), (b.tb, b.rot));
    }

    #[test]
    fn handle_words_and_undefined_linking() {
        let f = parse_front("handles: g\nknot A:\nl0 h0:g+ r0\nknot B:\nl0 r0").unwrap();
        assert_eq!(f.handle_word(0).unwrap().to_string(), "g");
        assert!(f.handle_word(1).unwrap().is_empty());
        assert!(matches!(f.linking(0, 1), Err(FrontError::UndefinedLinking { .. })));
        let g = parse_front("handles: g\nl0 h0:g+ h1:g+ r0").unwrap();
        assert_eq!(g.handle_word(0).unwrap().exponent_sum("g"), 0);
    }
}
