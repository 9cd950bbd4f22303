use serde::{Deserialize, Serialize};

use super::moves::{apply_pres_move_with, MoveSet, PresMove};
use super::presentation::Presentation;

/// A checkable sequence of presentation moves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveTrace {
    pub initial: Presentation,
    pub steps: Vec<PresMove>,
    #[serde(rename = "final")]
    pub final_: Presentation,
    #[serde(default)]
    pub moves: MoveSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepFailure {
    /// 0-based index of the failing step.
    pub step: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceReport {
    pub accepted: bool,
    pub steps_applied: usize,
    pub failure: Option<StepFailure>,
    /// Presentation reached by the replay (up to the failing step).
    pub reached: Presentation,
}

impl MoveTrace {
    /// Replays `steps` from `initial` and records the result as `final_`.
    pub fn record(initial: Presentation, steps: Vec<PresMove>, moves: MoveSet) -> Result<Self, super::PresMoveError> {
        let mut cur = initial.clone();
        for s in &steps {
            cur = apply_pres_move_with(&cur, s, moves)?;
        }
        Ok(MoveTrace {
            initial,
            steps,
            final_: cur,
            moves,
        })
    }
}

pub fn verify_trace(t: &MoveTrace) -> TraceReport {
    let mut cur = t.initial.clone();
    for (i, step) in t.steps.iter().enumerate() {
        match apply_pres_move_with(&cur, step, t.moves) {
            Ok(next) => cur = next,
            Err(e) => {
                return TraceReport {
                    accepted: false,
                    steps_applied: i,
                    failure: Some(StepFailure {
                        step: i,
                        reason: e.to_string(),
                    }),
                    reached: cur,
                }
            }
        }
    }
    // Relations are stored reduced, so structural equality is equality up to free reduction.
    let expected = Presentation::new(t.final_.generators().to_vec(), t.final_.relations().to_vec());
    let matches = expected.as_ref().is_ok_and(|f| *f == cur);
    TraceReport {
        accepted: matches,
        steps_applied: t.steps.len(),
        failure: (!matches).then(|| StepFailure {
            step: t.steps.len(),
            reason: format!("replay reached {cur}, trace claims {}", t.final_),
        }),
        reached: cur,
    }
}
