//! Budgeted modifications of transition systems: label splitting and the
//! removal of edges, events or states.

mod fast;
mod search;

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::ts::{EventId, StateId, TransitionSystem, TsError};

pub use fast::{decide_fast_path, FastPath};
pub use search::{decide, decide_with};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Split,
    Edge,
    Event,
    State,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::Split, Kind::Edge, Kind::Event, Kind::State];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Split => "split",
            Kind::Edge => "edge",
            Kind::Event => "event",
            Kind::State => "state",
        }
    }

    pub fn parse(s: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvalidReason {
    UnreachableState,
    UselessEvent,
    InitialRemoved,
    EmptyGroup,
}

impl fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InvalidReason::UnreachableState => "unreachable-state",
            InvalidReason::UselessEvent => "useless-event",
            InvalidReason::InitialRemoved => "initial-removed",
            InvalidReason::EmptyGroup => "empty-group",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModifyError {
    #[error("invalid plan: {reason} `{subject}`")]
    InvalidPlan { reason: InvalidReason, subject: String },
    #[error("malformed plan: {0}")]
    Malformed(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Ts(#[from] TsError),
}

impl ModifyError {
    pub fn reason(&self) -> Option<InvalidReason> {
        match self {
            ModifyError::InvalidPlan { reason, .. } => Some(*reason),
            _ => None,
        }
    }
}

fn invalid(reason: InvalidReason, subject: &str) -> ModifyError {
    ModifyError::InvalidPlan {
        reason,
        subject: subject.to_string(),
    }
}

/// Partition of one event's arcs: `groups[j]` is the group of the `j`-th arc
/// labeled `event`, in canonical arc order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EventSplit {
    pub event: EventId,
    pub groups: Vec<usize>,
}

impl EventSplit {
    pub fn group_count(&self) -> usize {
        self.groups.iter().max().map_or(0, |m| m + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Payload {
    Split(Vec<EventSplit>),
    /// Arc indices.
    Edges(Vec<usize>),
    Events(Vec<EventId>),
    States(Vec<StateId>),
}

/// A modification of a particular transition system, with its cost.
///
/// Split cost is the size of the new event set; removal cost is the number of
/// removed elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModificationPlan {
    pub payload: Payload,
    pub cost: usize,
}

impl ModificationPlan {
    pub fn new(ts: &TransitionSystem, payload: Payload) -> Self {
        let cost = match &payload {
            Payload::Split(splits) => {
                ts.num_events()
                    + splits
                        .iter()
                        .map(|s| s.group_count().saturating_sub(1))
                        .sum::<usize>()
            }
            Payload::Edges(v) => v.len(),
            Payload::Events(v) => v.len(),
            Payload::States(v) => v.len(),
        };
        ModificationPlan { payload, cost }
    }

    pub fn empty(ts: &TransitionSystem, kind: Kind) -> Self {
        let payload = match kind {
            Kind::Split => Payload::Split(Vec::new()),
            Kind::Edge => Payload::Edges(Vec::new()),
            Kind::Event => Payload::Events(Vec::new()),
            Kind::State => Payload::States(Vec::new()),
        };
        ModificationPlan::new(ts, payload)
    }

    pub fn kind(&self) -> Kind {
        match self.payload {
            Payload::Split(_) => Kind::Split,
            Payload::Edges(_) => Kind::Edge,
            Payload::Events(_) => Kind::Event,
            Payload::States(_) => Kind::State,
        }
    }

    pub fn is_noop(&self) -> bool {
        match &self.payload {
            Payload::Split(v) => v.is_empty(),
            Payload::Edges(v) | Payload::Events(v) | Payload::States(v) => v.is_empty(),
        }
    }

    pub fn dump(&self, ts: &TransitionSystem) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "plan {} cost {}", self.kind(), self.cost);
        match &self.payload {
            Payload::Split(splits) => {
                for s in splits {
                    for (j, g) in s.groups.iter().enumerate() {
                        let _ = writeln!(out, "split {} {j} {g}", ts.event_name(s.event));
                    }
                }
            }
            Payload::Edges(arcs) => {
                for &k in arcs {
                    let a = ts.arcs()[k];
                    let _ = writeln!(
                        out,
                        "rm-edge {} {} {}",
                        ts.state_name(a.src),
                        ts.event_name(a.event),
                        ts.state_name(a.dst)
                    );
                }
            }
            Payload::Events(events) => {
                for &e in events {
                    let _ = writeln!(out, "rm-event {}", ts.event_name(e));
                }
            }
            Payload::States(states) => {
                for &s in states {
                    let _ = writeln!(out, "rm-state {}", ts.state_name(s));
                }
            }
        }
        out
    }

    /// Parses a plan dump against the system it modifies. The stated cost is
    /// checked against the recomputed one.
    pub fn parse(ts: &TransitionSystem, text: &str) -> Result<Self, ModifyError> {
        let mut kind = None;
        let mut stated_cost = 0;
        let mut splits: Vec<(EventId, Vec<Option<usize>>)> = Vec::new();
        let mut items: Vec<usize> = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let toks: Vec<&str> = line.split_whitespace().collect();
            let syntax = |message: String| ModifyError::Syntax {
                line: no + 1,
                message,
            };
            let expect = |k: Kind| {
                if kind == Some(k) {
                    Ok(())
                } else {
                    Err(syntax(format!("line does not match plan kind {kind:?}")))
                }
            };
            match toks.as_slice() {
                [] => {}
                ["plan", k, "cost", c] => {
                    kind = Some(Kind::parse(k).ok_or_else(|| syntax(format!("unknown kind `{k}`")))?);
                    stated_cost = c.parse().map_err(|_| syntax(format!("bad cost `{c}`")))?;
                }
                ["split", e, j, g] => {
                    expect(Kind::Split)?;
                    let e = ts.event_id(e)?;
                    let j: usize = j.parse().map_err(|_| syntax(format!("bad index `{j}`")))?;
                    let g: usize = g.parse().map_err(|_| syntax(format!("bad group `{g}`")))?;
                    let occ = ts.event_arcs(e).len();
                    if j >= occ {
                        return Err(syntax(format!("event has only {occ} arcs")));
                    }
                    let pos = match splits.iter().position(|(x, _)| *x == e) {
                        Some(p) => p,
                        None => {
                            splits.push((e, vec![None; occ]));
                            splits.len() - 1
                        }
                    };
                    splits[pos].1[j] = Some(g);
                }
                ["rm-edge", s, e, d] => {
                    expect(Kind::Edge)?;
                    let (s, e, d) = (ts.state_id(s)?, ts.event_id(e)?, ts.state_id(d)?);
                    let k = ts
                        .out_arcs(s)
                        .iter()
                        .copied()
                        .find(|&k| ts.arcs()[k].event == e && ts.arcs()[k].dst == d)
                        .ok_or_else(|| syntax("no such arc".into()))?;
                    items.push(k);
                }
                ["rm-event", e] => {
                    expect(Kind::Event)?;
                    items.push(ts.event_id(e)?);
                }
                ["rm-state", s] => {
                    expect(Kind::State)?;
                    items.push(ts.state_id(s)?);
                }
                _ => return Err(syntax(format!("cannot parse `{}`", line.trim()))),
            }
        }
        let kind = kind.ok_or_else(|| ModifyError::Malformed("missing `plan` header".into()))?;
        let payload = match kind {
            Kind::Split => Payload::Split(
                splits
                    .into_iter()
                    .map(|(event, groups)| {
                        let groups = groups.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| {
                            ModifyError::Malformed(format!(
                                "split of `{}` does not list every arc",
                                ts.event_name(event)
                            ))
                        })?;
                        Ok(EventSplit { event, groups })
                    })
                    .collect::<Result<_, ModifyError>>()?,
            ),
            Kind::Edge => Payload::Edges(items),
            Kind::Event => Payload::Events(items),
            Kind::State => Payload::States(items),
        };
        let plan = ModificationPlan::new(ts, payload);
        if plan.cost != stated_cost {
            return Err(ModifyError::Malformed(format!(
                "stated cost {stated_cost}, actual cost {}",
                plan.cost
            )));
        }
        Ok(plan)
    }
}

/// Label of group `k` for an event named `base`: `base`, then `base'`, `base''`, ...
/// skipping names already taken.
fn split_labels(base: &str, groups: usize, taken: &mut HashSet<String>) -> Vec<String> {
    let mut labels = vec![base.to_string()];
    let mut primes = 0;
    while labels.len() < groups {
        primes += 1;
        let cand = format!("{base}{}", "'".repeat(primes));
        if taken.insert(cand.clone()) {
            labels.push(cand);
        }
    }
    labels
}

/// Applies `plan` to `ts`, validating the result.
pub fn apply_plan(ts: &TransitionSystem, plan: &ModificationPlan) -> Result<TransitionSystem, ModifyError> {
    match &plan.payload {
        Payload::Split(splits) => apply_split(ts, splits),
        Payload::Edges(arcs) => {
            let removed = to_mask(arcs, ts.arcs().len(), "arc")?;
            restrict(ts, |k| !removed[k], |_| true, ts.events().to_vec())
        }
        Payload::Events(events) => {
            let removed = to_mask(events, ts.num_events(), "event")?;
            let alphabet = ts
                .events()
                .iter()
                .enumerate()
                .filter(|(e, _)| !removed[*e])
                .map(|(_, n)| n.clone())
                .collect();
            restrict(ts, |k| !removed[ts.arcs()[k].event], |_| true, alphabet)
        }
        Payload::States(states) => {
            let removed = to_mask(states, ts.num_states(), "state")?;
            if removed[ts.initial()] {
                return Err(invalid(InvalidReason::InitialRemoved, ts.state_name(ts.initial())));
            }
            restrict(
                ts,
                |k| !removed[ts.arcs()[k].src] && !removed[ts.arcs()[k].dst],
                |s| !removed[s],
                ts.events().to_vec(),
            )
        }
    }
}

fn to_mask(items: &[usize], n: usize, what: &str) -> Result<Vec<bool>, ModifyError> {
    let mut mask = vec![false; n];
    for &i in items {
        if i >= n {
            return Err(ModifyError::Malformed(format!("{what} index {i} out of range")));
        }
        if mask[i] {
            return Err(ModifyError::Malformed(format!("{what} index {i} listed twice")));
        }
        mask[i] = true;
    }
    Ok(mask)
}

fn apply_split(ts: &TransitionSystem, splits: &[EventSplit]) -> Result<TransitionSystem, ModifyError> {
    let mut label_of: Vec<String> = ts.arcs().iter().map(|a| ts.event_name(a.event).to_string()).collect();
    let mut taken: HashSet<String> = ts.events().iter().cloned().collect();
    let mut seen = HashSet::new();
    for s in splits {
        if s.event >= ts.num_events() || !seen.insert(s.event) {
            return Err(ModifyError::Malformed(format!("bad split event {}", s.event)));
        }
        let occ = ts.event_arcs(s.event);
        if s.groups.len() != occ.len() {
            return Err(ModifyError::Malformed(format!(
                "split of `{}` lists {} of {} arcs",
                ts.event_name(s.event),
                s.groups.len(),
                occ.len()
            )));
        }
        let g = s.group_count();
        let mut used = vec![false; g];
        for &x in &s.groups {
            used[x] = true;
        }
        if g < 2 || used.iter().any(|u| !u) {
            return Err(invalid(InvalidReason::EmptyGroup, ts.event_name(s.event)));
        }
        let labels = split_labels(ts.event_name(s.event), g, &mut taken);
        for (&k, &x) in occ.iter().zip(&s.groups) {
            label_of[k] = labels[x].clone();
        }
    }
    let arcs = ts
        .arcs()
        .iter()
        .zip(&label_of)
        .map(|(a, l)| (ts.state_name(a.src), l.as_str(), ts.state_name(a.dst)));
    Ok(TransitionSystem::from_arcs(ts.name(), ts.state_name(ts.initial()), arcs)?)
}

/// Sub-system on kept arcs and states; every kept state must stay reachable and
/// every event of `alphabet` must keep an arc.
fn restrict(
    ts: &TransitionSystem,
    keep_arc: impl Fn(usize) -> bool,
    keep_state: impl Fn(StateId) -> bool,
    alphabet: Vec<String>,
) -> Result<TransitionSystem, ModifyError> {
    let mut seen = vec![false; ts.num_states()];
    seen[ts.initial()] = true;
    let mut queue = VecDeque::from([ts.initial()]);
    while let Some(s) = queue.pop_front() {
        for &k in ts.out_arcs(s) {
            let d = ts.arcs()[k].dst;
            if keep_arc(k) && !seen[d] {
                seen[d] = true;
                queue.push_back(d);
            }
        }
    }
    if let Some(s) = (0..ts.num_states()).find(|&s| keep_state(s) && !seen[s]) {
        return Err(invalid(InvalidReason::UnreachableState, ts.state_name(s)));
    }
    let arcs: Vec<_> = (0..ts.arcs().len())
        .filter(|&k| keep_arc(k))
        .map(|k| {
            let a = ts.arcs()[k];
            (ts.state_name(a.src), ts.event_name(a.event), ts.state_name(a.dst))
        })
        .collect();
    TransitionSystem::with_alphabet(ts.name(), ts.state_name(ts.initial()), &alphabet, arcs).map_err(|e| match e {
        TsError::UselessEvent(ev) => invalid(InvalidReason::UselessEvent, &ev),
        TsError::Unreachable(s) => invalid(InvalidReason::UnreachableState, &s),
        other => other.into(),
    })
}
