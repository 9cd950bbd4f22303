//! Legendrian fronts over a 1-handlebody: the `.obk` DSL, classical invariants,
//! stabilization, SVG rendering, and compilation to an abstract page.
//!
//! Conventions (fixed here, checked only for self-consistency):
//! - orientation: by default the upper strand leaving a component's first left cusp
//!   runs to the right;
//! - crossing sign: `+1` when both strands run in the same x-direction, `−1` otherwise;
//! - a cusp is "down" when the orientation passes through it from the upper strand to
//!   the lower one; `rot = (down − up)/2`, also for strands over 1-handles.

mod diagram;
mod dsl;
mod svg;

use std::collections::BTreeMap;

pub use diagram::{ClassicalInvariants, Event, FrontDiagram, KnotSpec, StabSign};
pub use dsl::{parse_front, parse_obk, write_obk, ObkFile, TwistRef};
pub use svg::render_svg;

use crate::page::{Circle, PageDiagram, Provenance};
use crate::twist::{OpenBook, Twist};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FrontError {
    #[error("syntax error at line {line}, col {col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("validation error{}: {message}", location(*line, *col, *column))]
    Validation {
        /// Grid column, when the error is tied to one event.
        column: Option<usize>,
        line: Option<usize>,
        col: Option<usize>,
        message: String,
    },
    #[error("no component {0}")]
    UnknownComponent(String),
    #[error("linking of component {0} with itself is not a linking number")]
    SameComponent(usize),
    #[error("linking undefined: component {component} has nonzero exponent sums {exponent_sums:?}")]
    UndefinedLinking {
        component: String,
        exponent_sums: Vec<(String, i64)>,
    },
}

fn location(line: Option<usize>, col: Option<usize>, column: Option<usize>) -> String {
    match (line, col, column) {
        (Some(l), Some(c), _) => format!(" at line {l}, col {c}"),
        (_, _, Some(k)) => format!(" at event {k}"),
        _ => String::new(),
    }
}

impl FrontError {
    pub(crate) fn validation(column: Option<usize>, message: String) -> Self {
        FrontError::Validation {
            column,
            line: None,
            col: None,
            message,
        }
    }

    /// Attaches source positions to a column-indexed validation error.
    pub(crate) fn locate(self, spans: &[(usize, usize)]) -> Self {
        match self {
            FrontError::Validation {
                column: Some(k),
                message,
                ..
            } if k < spans.len() => FrontError::Validation {
                column: Some(k),
                line: Some(spans[k].0),
                col: Some(spans[k].1),
                message,
            },
            other => other,
        }
    }

    /// CLI exit status: 2 for syntax, 3 for validation-class errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            FrontError::Syntax { .. } => 2,
            _ => 3,
        }
    }
}

pub fn classical_invariants(f: &FrontDiagram, component: usize) -> Result<ClassicalInvariants, FrontError> {
    f.classical_invariants(component)
}

pub fn linking(f: &FrontDiagram, i: usize, j: usize) -> Result<i64, FrontError> {
    f.linking(i, j)
}

pub fn stabilize_front(f: &FrontDiagram, component: usize, sign: StabSign) -> Result<FrontDiagram, FrontError> {
    f.stabilize(component, sign)
}

pub fn handle_word(f: &FrontDiagram, component: usize) -> Result<crate::words::Word, FrontError> {
    f.handle_word(component)
}

/// Circles carry (reduced word, tb, rot); `Q_ij` is recorded wherever the linking number is defined.
pub fn compile_to_page(f: &FrontDiagram) -> Result<PageDiagram, FrontError> {
    let n = f.component_count();
    let mut circles = Vec::with_capacity(n);
    for c in 0..n {
        let inv = f.classical_invariants(c)?;
        circles.push(Circle {
            name: f.knots()[c].name.clone(),
            word: f.handle_word(c)?.free_reduce(),
            tb: inv.tb,
            rot: inv.rot,
            sigma: 0,
        });
    }
    let mut linking = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            match f.linking(i, j) {
                Ok(l) => {
                    linking.insert((i, j), l);
                }
                Err(FrontError::UndefinedLinking { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    PageDiagram::with_provenance(f.handles().to_vec(), circles, linking, Provenance::Front)
        .map_err(|e| FrontError::validation(None, e.to_string()))
}

impl ObkFile {
    /// The open book described by the file: compiled page plus its twist word.
    pub fn to_open_book(&self) -> Result<OpenBook, crate::Error> {
        let page = compile_to_page(&self.front)?;
        let monodromy = self
            .twists
            .iter()
            .map(|t| {
                let circle = self
                    .front
                    .component_index(&t.knot)
                    .ok_or_else(|| FrontError::UnknownComponent(t.knot.clone()))?;
                Ok(Twist { circle, exp: t.exp })
            })
            .collect::<Result<Vec<_>, FrontError>>()?;
        Ok(OpenBook::new(page, monodromy)?)
    }
}
