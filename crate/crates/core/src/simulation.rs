//! Simulation maps between transition systems.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::ts::{StateId, TransitionSystem, TsError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SimulationKind {
    Plain,
    Embedding,
    LanguageSimulation,
    Isomorphism,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Embed,
    LangSim,
    Realize,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Embed, Mode::LangSim, Mode::Realize];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Embed => "embed",
            Mode::LangSim => "langsim",
            Mode::Realize => "realize",
        }
    }

    pub fn parse(s: &str) -> Option<Mode> {
        Mode::ALL.into_iter().find(|m| m.name() == s)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationMap {
    /// Image in B of every state of A.
    pub mapping: Vec<StateId>,
    pub kind: SimulationKind,
}

impl SimulationMap {
    pub fn satisfies(&self, mode: Mode) -> bool {
        matches!(
            (mode, self.kind),
            (_, SimulationKind::Isomorphism)
                | (Mode::Embed, SimulationKind::Embedding)
                | (Mode::LangSim, SimulationKind::LanguageSimulation)
        )
    }
}

fn event_names(ts: &TransitionSystem) -> HashSet<&str> {
    ts.events().iter().map(String::as_str).collect()
}

/// The unique edge-preserving map with `phi(initial_A) = initial_B`, if any.
///
/// Requires `E(A) ⊆ E(B)`. The kind is upgraded past `Plain` only when the event
/// sets are equal.
pub fn induced_simulation(
    a: &TransitionSystem,
    b: &TransitionSystem,
) -> Result<Option<SimulationMap>, TsError> {
    let ea = event_names(a);
    let eb = event_names(b);
    if !ea.is_subset(&eb) {
        return Err(TsError::EventSetMismatch);
    }
    let ev_map: Vec<usize> = a
        .events()
        .iter()
        .map(|e| b.event_id(e).expect("subset checked"))
        .collect();
    let mut phi: Vec<Option<StateId>> = vec![None; a.num_states()];
    phi[a.initial()] = Some(b.initial());
    let mut queue = VecDeque::from([a.initial()]);
    while let Some(s) = queue.pop_front() {
        let image = phi[s].expect("queued states are mapped");
        for &k in a.out_arcs(s) {
            let arc = a.arcs()[k];
            let Some(target) = b.delta(image, ev_map[arc.event]) else {
                return Ok(None);
            };
            match phi[arc.dst] {
                Some(t) if t != target => return Ok(None),
                Some(_) => {}
                None => {
                    phi[arc.dst] = Some(target);
                    queue.push_back(arc.dst);
                }
            }
        }
    }
    let mapping: Vec<StateId> = phi.into_iter().map(|p| p.expect("A is reachable")).collect();
    let mut kind = SimulationKind::Plain;
    if ea == eb {
        let injective = {
            let mut seen = HashSet::new();
            mapping.iter().all(|m| seen.insert(*m))
        };
        let reflecting = (0..a.num_states()).all(|s| {
            b.out_arcs(mapping[s]).iter().all(|&k| {
                let ev = b.event_name(b.arcs()[k].event);
                a.enabled(s, a.event_id(ev).expect("equal event sets"))
            })
        });
        kind = match (injective, reflecting) {
            (true, true) => SimulationKind::Isomorphism,
            (true, false) => SimulationKind::Embedding,
            (false, true) => SimulationKind::LanguageSimulation,
            (false, false) => SimulationKind::Plain,
        };
    }
    Ok(Some(SimulationMap { mapping, kind }))
}

/// Whether B implements A under `mode`. Requires equal event sets.
pub fn check_relation(
    a: &TransitionSystem,
    b: &TransitionSystem,
    mode: Mode,
) -> Result<bool, TsError> {
    if event_names(a) != event_names(b) {
        return Err(TsError::EventSetMismatch);
    }
    Ok(induced_simulation(a, b)?.is_some_and(|m| m.satisfies(mode)))
}
