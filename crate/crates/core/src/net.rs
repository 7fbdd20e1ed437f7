//! Boolean Petri nets: firing and reachability graphs.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::ts::{valid_identifier, TransitionSystem, TsError};
use crate::types::{BooleanType, Interaction, TypeError};

/// Largest place count accepted by [`BooleanNet::reachability_graph`].
pub const MAX_PLACES: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetError {
    #[error("unknown transition `{0}`")]
    UnknownTransition(String),
    #[error("unknown place `{0}`")]
    UnknownPlace(String),
    #[error("duplicate identifier `{0}`")]
    Duplicate(String),
    #[error("flow of `{place}` on `{transition}` is `{value}`, outside the net type")]
    FlowNotInType {
        place: String,
        transition: String,
        value: Interaction,
    },
    #[error("missing flow for `{place}` on `{transition}`")]
    MissingFlow { place: String, transition: String },
    #[error("marking has {got} entries, net has {expected} places")]
    MarkingSize { expected: usize, got: usize },
    #[error("{0} places exceed the bound of {MAX_PLACES}")]
    PlaceBoundExceeded(usize),
    #[error("more than {0} reachable markings")]
    MarkingBoundExceeded(usize),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Ts(#[from] TsError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Marking(pub Vec<bool>);

impl fmt::Display for Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(if *b { "1" } else { "0" })?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanNet {
    name: Option<String>,
    ty: BooleanType,
    places: Vec<String>,
    transitions: Vec<String>,
    /// `flow[t][p]`.
    flow: Vec<Vec<Interaction>>,
    m0: Vec<bool>,
}

#[derive(Debug, Clone)]
pub struct ReachabilityGraph {
    pub ts: TransitionSystem,
    /// Transitions that never fire, dropped from the event set.
    pub dead: Vec<String>,
}

impl BooleanNet {
    /// `flow[t][p]` gives the interaction of place `p` with transition `t`.
    pub fn new(
        name: Option<&str>,
        ty: BooleanType,
        places: Vec<String>,
        transitions: Vec<String>,
        flow: Vec<Vec<Interaction>>,
        m0: Vec<bool>,
    ) -> Result<Self, NetError> {
        let mut seen = HashSet::new();
        for id in places.iter().chain(&transitions) {
            if !valid_identifier(id) {
                return Err(TsError::UnknownId(id.clone()).into());
            }
            if !seen.insert(id.as_str()) {
                return Err(NetError::Duplicate(id.clone()));
            }
        }
        if m0.len() != places.len() {
            return Err(NetError::MarkingSize {
                expected: places.len(),
                got: m0.len(),
            });
        }
        if flow.len() != transitions.len() {
            return Err(NetError::MissingFlow {
                place: places.first().cloned().unwrap_or_default(),
                transition: transitions.get(flow.len()).cloned().unwrap_or_default(),
            });
        }
        for (t, col) in flow.iter().enumerate() {
            if col.len() != places.len() {
                return Err(NetError::MissingFlow {
                    place: places.get(col.len()).cloned().unwrap_or_default(),
                    transition: transitions[t].clone(),
                });
            }
            for (p, &i) in col.iter().enumerate() {
                if !ty.contains(i) {
                    return Err(NetError::FlowNotInType {
                        place: places[p].clone(),
                        transition: transitions[t].clone(),
                        value: i,
                    });
                }
            }
        }
        Ok(BooleanNet {
            name: name.map(str::to_string),
            ty,
            places,
            transitions,
            flow,
            m0,
        })
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn net_type(&self) -> BooleanType {
        self.ty
    }

    pub fn places(&self) -> &[String] {
        &self.places
    }

    pub fn transitions(&self) -> &[String] {
        &self.transitions
    }

    pub fn flow(&self, p: usize, t: usize) -> Interaction {
        self.flow[t][p]
    }

    pub fn initial_marking(&self) -> Marking {
        Marking(self.m0.clone())
    }

    pub fn transition_id(&self, t: &str) -> Result<usize, NetError> {
        self.transitions
            .iter()
            .position(|x| x == t)
            .ok_or_else(|| NetError::UnknownTransition(t.to_string()))
    }

    /// Successor marking, or `None` when `t` is not enabled at `m`.
    pub fn fire(&self, m: &Marking, t: &str) -> Result<Option<Marking>, NetError> {
        let t = self.transition_id(t)?;
        if m.0.len() != self.places.len() {
            return Err(NetError::MarkingSize {
                expected: self.places.len(),
                got: m.0.len(),
            });
        }
        Ok(self.fire_index(&m.0, t).map(Marking))
    }

    fn fire_index(&self, m: &[bool], t: usize) -> Option<Vec<bool>> {
        self.flow[t]
            .iter()
            .zip(m)
            .map(|(i, &x)| i.apply(x))
            .collect()
    }

    /// Reachability graph, refusing nets with more than [`MAX_PLACES`] places.
    pub fn reachability_graph(&self) -> Result<ReachabilityGraph, NetError> {
        if self.places.len() > MAX_PLACES {
            return Err(NetError::PlaceBoundExceeded(self.places.len()));
        }
        self.explore(usize::MAX)
    }

    /// Reachability graph by breadth-first search, giving up after `max_markings` markings.
    pub fn explore(&self, max_markings: usize) -> Result<ReachabilityGraph, NetError> {
        let mut index: HashMap<Vec<bool>, usize> = HashMap::new();
        let mut order: Vec<Vec<bool>> = vec![self.m0.clone()];
        index.insert(self.m0.clone(), 0);
        let mut queue = VecDeque::from([0usize]);
        let mut arcs = Vec::new();
        let mut fired = vec![false; self.transitions.len()];
        while let Some(k) = queue.pop_front() {
            let m = order[k].clone();
            for (t, was_fired) in fired.iter_mut().enumerate() {
                let Some(next) = self.fire_index(&m, t) else {
                    continue;
                };
                *was_fired = true;
                let j = match index.get(&next) {
                    Some(&j) => j,
                    None => {
                        if order.len() >= max_markings {
                            return Err(NetError::MarkingBoundExceeded(max_markings));
                        }
                        order.push(next.clone());
                        index.insert(next, order.len() - 1);
                        queue.push_back(order.len() - 1);
                        order.len() - 1
                    }
                };
                arcs.push((k, t, j));
            }
        }
        let names: Vec<String> = order.into_iter().map(|m| Marking(m).to_string()).collect();
        let dead: Vec<String> = self
            .transitions
            .iter()
            .zip(&fired)
            .filter(|(_, f)| !**f)
            .map(|(t, _)| t.clone())
            .collect();
        if !dead.is_empty() {
            log::warn!("dropping transitions that never fire: {}", dead.join(", "));
        }
        let ts = TransitionSystem::from_arcs(
            self.name.as_deref(),
            &names[0],
            arcs.iter()
                .map(|&(s, t, d)| (&names[s], &self.transitions[t], &names[d])),
        )?;
        Ok(ReachabilityGraph { ts, dead })
    }

    /// Parses the net format. With `strict`, every flow entry must be given.
    pub fn parse(text: &str, strict: bool) -> Result<Self, NetError> {
        let mut name = None;
        let mut ty = None;
        let mut places: Vec<String> = Vec::new();
        let mut m0 = Vec::new();
        let mut transitions: Vec<String> = Vec::new();
        let mut flows: HashMap<(String, String), Interaction> = HashMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let toks: Vec<&str> = line.split_whitespace().collect();
            let syntax = |message: String| NetError::Syntax {
                line: no + 1,
                message,
            };
            match toks.as_slice() {
                [] => {}
                ["net", n] => name = Some(n.to_string()),
                ["type", spec] => ty = Some(BooleanType::parse(spec)?),
                ["place", p, bit] => {
                    let b = match *bit {
                        "0" => false,
                        "1" => true,
                        _ => return Err(syntax(format!("bad bit `{bit}`"))),
                    };
                    places.push(p.to_string());
                    m0.push(b);
                }
                ["trans", t] => transitions.push(t.to_string()),
                ["flow", p, t, i] => {
                    let i: Interaction = i.parse()?;
                    if flows.insert((p.to_string(), t.to_string()), i).is_some() {
                        return Err(syntax(format!("duplicate flow for `{p}` on `{t}`")));
                    }
                }
                _ => return Err(syntax(format!("cannot parse `{}`", line.trim()))),
            }
        }
        let ty = ty.ok_or(NetError::Syntax {
            line: 0,
            message: "missing `type` line".into(),
        })?;
        for (p, t) in flows.keys() {
            if !places.contains(p) {
                return Err(NetError::UnknownPlace(p.clone()));
            }
            if !transitions.contains(t) {
                return Err(NetError::UnknownTransition(t.clone()));
            }
        }
        let mut flow = Vec::with_capacity(transitions.len());
        for t in &transitions {
            let mut col = Vec::with_capacity(places.len());
            for p in &places {
                match flows.get(&(p.clone(), t.clone())) {
                    Some(&i) => col.push(i),
                    None if strict => {
                        return Err(NetError::MissingFlow {
                            place: p.clone(),
                            transition: t.clone(),
                        })
                    }
                    None => col.push(Interaction::Nop),
                }
            }
            flow.push(col);
        }
        BooleanNet::new(name.as_deref(), ty, places, transitions, flow, m0)
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        if let Some(n) = &self.name {
            let _ = writeln!(out, "net {n}");
        }
        let _ = writeln!(out, "type {}", self.ty);
        for (p, b) in self.places.iter().zip(&self.m0) {
            let _ = writeln!(out, "place {p} {}", u8::from(*b));
        }
        for t in &self.transitions {
            let _ = writeln!(out, "trans {t}");
        }
        for (t, col) in self.transitions.iter().zip(&self.flow) {
            for (p, i) in self.places.iter().zip(col) {
                let _ = writeln!(out, "flow {p} {t} {i}");
            }
        }
        out
    }

    /// Bipartite DOT rendering; nop entries are omitted.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{}\" {{", self.name.as_deref().unwrap_or("net"));
        for (p, b) in self.places.iter().zip(&self.m0) {
            let _ = writeln!(
                out,
                "  \"p:{p}\" [shape=circle, label=\"{p}\\n{}\"];",
                u8::from(*b)
            );
        }
        for t in &self.transitions {
            let _ = writeln!(out, "  \"t:{t}\" [shape=box, label=\"{t}\"];");
        }
        for (t, col) in self.transitions.iter().zip(&self.flow) {
            for (p, i) in self.places.iter().zip(col) {
                if *i != Interaction::Nop {
                    let _ = writeln!(
                        out,
                        "  \"p:{p}\" -> \"t:{t}\" [dir=none, label=\"{i}\"];"
                    );
                }
            }
        }
        out.push_str("}\n");
        out
    }
}
