//! Polynomial answers for types without partial interactions.

use crate::separation::{decide_property, Property};
use crate::simulation::Mode;
use crate::ts::TransitionSystem;
use crate::types::{BooleanType, Interaction};

use super::Kind;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FastPath {
    /// The system already has the property.
    YesAsIs,
    No,
    FallThrough,
}

fn total_only(ty: BooleanType) -> bool {
    ty.members().all(|i| {
        matches!(
            i,
            Interaction::Nop | Interaction::Swap | Interaction::Set | Interaction::Res
        )
    })
}

/// Answers that need no search, for language simulation and realization.
///
/// With only total interactions, the ESSP holds iff every event occurs at every
/// state. Splitting or removing edges can only create missing occurrences, so a
/// system is either fine as it is or beyond repair. The same holds for state
/// removal under `{nop,swap}`.
pub fn decide_fast_path(ts: &TransitionSystem, ty: BooleanType, kind: Kind, mode: Mode) -> FastPath {
    if mode == Mode::Embed || !total_only(ty) {
        return FastPath::FallThrough;
    }
    let prop = Property::for_mode(mode);
    match kind {
        Kind::Split | Kind::Edge => {
            if decide_property(ts, ty, prop).is_ok() {
                FastPath::YesAsIs
            } else {
                FastPath::No
            }
        }
        Kind::State if ty == BooleanType::new([Interaction::Nop, Interaction::Swap]).expect("nonempty") => {
            forced_state_removal(ts, ty, prop)
        }
        _ => FastPath::FallThrough,
    }
}

/// A state missing an event must be removed. Its predecessor then misses an
/// event too, so the removals cascade back to the initial state: the closure is
/// either empty or fatal.
fn forced_state_removal(ts: &TransitionSystem, ty: BooleanType, prop: Property) -> FastPath {
    let complete = (0..ts.num_states()).all(|s| (0..ts.num_events()).all(|e| ts.enabled(s, e)));
    if complete && decide_property(ts, ty, prop).is_ok() {
        FastPath::YesAsIs
    } else {
        FastPath::No
    }
}
