//! Free-group words, finite presentations, and the Tietze / Andrews–Curtis move engine.

mod moves;
mod presentation;
mod search;
mod trace;
mod word;

pub use moves::{
    apply_pres_move, apply_pres_move_with, DoubleMode, MoveSet, PresMove, PresMoveError, Side,
};
pub use presentation::{Presentation, PresentationError};
pub use search::{ac_search, SearchError, SearchLimits, SearchOutcome};
pub use trace::{verify_trace, MoveTrace, StepFailure, TraceReport};
pub use word::{is_generator_name, Letter, Word, WordParseError};

/// Free reduction of a word.
pub fn free_reduce(w: &Word) -> Word {
    w.free_reduce()
}

pub fn abelianization(p: &Presentation) -> crate::zalg::AbelianGroup {
    p.abelianization()
}
