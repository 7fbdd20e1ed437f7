//! Boolean Petri-net synthesis from labeled transition systems.
//!
//! The crate covers transition systems and simulations ([`ts`], [`simulation`]),
//! Boolean interactions and types ([`types`]), Boolean nets ([`net`]), regions and
//! the separation solver ([`region`], [`solver`], [`separation`]), synthesis
//! ([`synthesis`]), budgeted modification solvers ([`modify`]) and the
//! vertex-cover gadgets used to test them ([`reductions`]).

pub mod budget;
pub mod fixtures;
pub mod modify;
pub mod net;
pub mod reductions;
pub mod region;
pub mod separation;
pub mod simulation;
pub mod solver;
pub mod synthesis;
pub mod ts;
pub mod types;

pub use budget::{NodeBudget, SearchBudgetExceeded};
pub use modify::{apply_plan, decide, Kind, ModificationPlan, Payload};
pub use net::{BooleanNet, Marking, NetError};
pub use region::{atoms, complete_region, validate_region, Atom, Region, RegionError};
pub use separation::{decide_property, Property, Witness};
pub use simulation::{check_relation, induced_simulation, Mode, SimulationKind, SimulationMap};
pub use solver::solve_atom;
pub use synthesis::{synthesize, verify_implementation, SynthesisError, SynthesisResult};
pub use ts::{Arc, EventId, StateId, TransitionSystem, TsError};
pub use types::{BooleanType, Interaction, TypeError};
