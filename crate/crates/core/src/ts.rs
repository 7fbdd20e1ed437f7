//! Deterministic, initialized, reachable labeled transition systems.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

pub type StateId = usize;
pub type EventId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TsError {
    #[error("nondeterministic: state `{state}` has two `{event}` arcs")]
    NonDeterministic { state: String, event: String },
    #[error("state `{0}` is unreachable from the initial state")]
    Unreachable(String),
    #[error("event `{0}` occurs on no arc")]
    UselessEvent(String),
    #[error("no initial state declared")]
    NoInitial,
    #[error("unknown identifier `{0}`")]
    UnknownId(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("event sets differ")]
    EventSetMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arc {
    pub src: StateId,
    pub event: EventId,
    pub dst: StateId,
}

/// States and events are ordered by first appearance in `initial, arcs...`.
#[derive(Debug, Clone)]
pub struct TransitionSystem {
    name: Option<String>,
    states: Vec<String>,
    events: Vec<String>,
    arcs: Vec<Arc>,
    initial: StateId,
    state_ix: HashMap<String, StateId>,
    event_ix: HashMap<String, EventId>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
    by_event: Vec<Vec<usize>>,
}

impl PartialEq for TransitionSystem {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.states == other.states
            && self.events == other.events
            && self.arcs == other.arcs
            && self.initial == other.initial
    }
}

impl Eq for TransitionSystem {}

pub(crate) fn valid_identifier(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c.is_whitespace() || c == '#')
}

impl TransitionSystem {
    pub fn from_arcs<I, S1, S2, S3>(
        name: Option<&str>,
        initial: &str,
        arcs: I,
    ) -> Result<Self, TsError>
    where
        I: IntoIterator<Item = (S1, S2, S3)>,
        S1: AsRef<str>,
        S2: AsRef<str>,
        S3: AsRef<str>,
    {
        let arcs: Vec<(String, String, String)> = arcs
            .into_iter()
            .map(|(a, b, c)| {
                (
                    a.as_ref().to_string(),
                    b.as_ref().to_string(),
                    c.as_ref().to_string(),
                )
            })
            .collect();
        Self::build(name.map(str::to_string), initial.to_string(), arcs, None)
    }

    /// Like [`from_arcs`](Self::from_arcs), but also checks that every event of
    /// `alphabet` occurs on some arc.
    pub fn with_alphabet<I, S1, S2, S3>(
        name: Option<&str>,
        initial: &str,
        alphabet: &[String],
        arcs: I,
    ) -> Result<Self, TsError>
    where
        I: IntoIterator<Item = (S1, S2, S3)>,
        S1: AsRef<str>,
        S2: AsRef<str>,
        S3: AsRef<str>,
    {
        let arcs: Vec<(String, String, String)> = arcs
            .into_iter()
            .map(|(a, b, c)| {
                (
                    a.as_ref().to_string(),
                    b.as_ref().to_string(),
                    c.as_ref().to_string(),
                )
            })
            .collect();
        Self::build(
            name.map(str::to_string),
            initial.to_string(),
            arcs,
            Some(alphabet),
        )
    }

    fn build(
        name: Option<String>,
        initial: String,
        named_arcs: Vec<(String, String, String)>,
        alphabet: Option<&[String]>,
    ) -> Result<Self, TsError> {
        for id in std::iter::once(&initial)
            .chain(named_arcs.iter().flat_map(|(a, b, c)| [a, b, c]))
        {
            if !valid_identifier(id) {
                return Err(TsError::UnknownId(id.clone()));
            }
        }
        let mut states = vec![initial.clone()];
        let mut state_ix = HashMap::new();
        state_ix.insert(initial, 0);
        let mut events = Vec::new();
        let mut event_ix = HashMap::new();
        let intern = |names: &mut Vec<String>, ix: &mut HashMap<String, usize>, s: &str| {
            if let Some(&i) = ix.get(s) {
                i
            } else {
                names.push(s.to_string());
                ix.insert(s.to_string(), names.len() - 1);
                names.len() - 1
            }
        };
        let mut arcs = Vec::with_capacity(named_arcs.len());
        for (s, e, t) in &named_arcs {
            let src = intern(&mut states, &mut state_ix, s);
            let event = intern(&mut events, &mut event_ix, e);
            let dst = intern(&mut states, &mut state_ix, t);
            arcs.push(Arc { src, event, dst });
        }
        if let Some(alphabet) = alphabet {
            for e in alphabet {
                if !event_ix.contains_key(e) {
                    return Err(TsError::UselessEvent(e.clone()));
                }
            }
            for e in &events {
                if !alphabet.contains(e) {
                    return Err(TsError::UnknownId(e.clone()));
                }
            }
        }
        let n = states.len();
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        let mut by_event = vec![Vec::new(); events.len()];
        for (k, a) in arcs.iter().enumerate() {
            if out[a.src].iter().any(|&j: &usize| arcs[j].event == a.event) {
                return Err(TsError::NonDeterministic {
                    state: states[a.src].clone(),
                    event: events[a.event].clone(),
                });
            }
            out[a.src].push(k);
            inc[a.dst].push(k);
            by_event[a.event].push(k);
        }
        let ts = TransitionSystem {
            name,
            states,
            events,
            arcs,
            initial: 0,
            state_ix,
            event_ix,
            out,
            inc,
            by_event,
        };
        let seen = ts.reachable_from_initial();
        if let Some(s) = seen.iter().position(|r| !r) {
            return Err(TsError::Unreachable(ts.states[s].clone()));
        }
        Ok(ts)
    }

    fn reachable_from_initial(&self) -> Vec<bool> {
        let mut seen = vec![false; self.states.len()];
        seen[self.initial] = true;
        let mut queue = VecDeque::from([self.initial]);
        while let Some(s) = queue.pop_front() {
            for &k in &self.out[s] {
                let t = self.arcs[k].dst;
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: Option<&str>) -> Self {
        self.name = name.map(str::to_string);
        self
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_events(&self) -> usize {
        self.events.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn events(&self) -> &[String] {
        &self.events
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s]
    }

    pub fn event_name(&self, e: EventId) -> &str {
        &self.events[e]
    }

    pub fn state_id(&self, name: &str) -> Result<StateId, TsError> {
        self.state_ix
            .get(name)
            .copied()
            .ok_or_else(|| TsError::UnknownId(name.to_string()))
    }

    pub fn event_id(&self, name: &str) -> Result<EventId, TsError> {
        self.event_ix
            .get(name)
            .copied()
            .ok_or_else(|| TsError::UnknownId(name.to_string()))
    }

    /// Arc indices leaving `s`.
    pub fn out_arcs(&self, s: StateId) -> &[usize] {
        &self.out[s]
    }

    /// Arc indices entering `s`.
    pub fn in_arcs(&self, s: StateId) -> &[usize] {
        &self.inc[s]
    }

    /// Arc indices labeled `e`, in canonical order.
    pub fn event_arcs(&self, e: EventId) -> &[usize] {
        &self.by_event[e]
    }

    pub fn delta(&self, s: StateId, e: EventId) -> Option<StateId> {
        self.out[s]
            .iter()
            .map(|&k| &self.arcs[k])
            .find(|a| a.event == e)
            .map(|a| a.dst)
    }

    pub fn enabled(&self, s: StateId, e: EventId) -> bool {
        self.delta(s, e).is_some()
    }

    pub fn parse(text: &str) -> Result<Self, TsError> {
        let mut name = None;
        let mut initial = None;
        let mut arcs = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let toks: Vec<&str> = line.split_whitespace().collect();
            let syntax = |message: &str| TsError::Syntax {
                line: no + 1,
                message: message.to_string(),
            };
            match toks.as_slice() {
                [] => {}
                ["ts", n] => {
                    if name.is_some() {
                        return Err(syntax("duplicate `ts` header"));
                    }
                    name = Some(n.to_string());
                }
                ["initial", s] => {
                    if initial.is_some() {
                        return Err(syntax("duplicate `initial`"));
                    }
                    initial = Some(s.to_string());
                }
                ["arc", s, e, t] => arcs.push((s.to_string(), e.to_string(), t.to_string())),
                _ => return Err(syntax(&format!("cannot parse `{}`", line.trim()))),
            }
        }
        let initial = initial.ok_or(TsError::NoInitial)?;
        Self::build(name, initial, arcs, None)
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        if let Some(n) = &self.name {
            let _ = writeln!(out, "ts {n}");
        }
        let _ = writeln!(out, "initial {}", self.states[self.initial]);
        for a in &self.arcs {
            let _ = writeln!(
                out,
                "arc {} {} {}",
                self.states[a.src], self.events[a.event], self.states[a.dst]
            );
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{}\" {{", self.name.as_deref().unwrap_or("ts"));
        for (i, s) in self.states.iter().enumerate() {
            let shape = if i == self.initial { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  \"{s}\" [shape={shape}];");
        }
        for a in &self.arcs {
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                self.states[a.src], self.states[a.dst], self.events[a.event]
            );
        }
        out.push_str("}\n");
        out
    }

    /// Arc triples by name, in canonical order.
    pub fn named_arcs(&self) -> Vec<(String, String, String)> {
        self.arcs
            .iter()
            .map(|a| {
                (
                    self.states[a.src].clone(),
                    self.events[a.event].clone(),
                    self.states[a.dst].clone(),
                )
            })
            .collect()
    }

    pub fn arc_label(&self, k: usize) -> String {
        let a = self.arcs[k];
        format!(
            "{} -{}-> {}",
            self.states[a.src], self.events[a.event], self.states[a.dst]
        )
    }
}
