//! Regions, separation atoms and region completion.

use std::collections::VecDeque;
use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::ts::{EventId, StateId, TransitionSystem, TsError};
use crate::types::{BooleanType, Interaction, TypeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegionError {
    #[error("region covers {got_states} states and {got_events} events, TS has {states} and {events}")]
    DomainMismatch {
        states: usize,
        events: usize,
        got_states: usize,
        got_events: usize,
    },
    #[error("malformed atom {0}")]
    MalformedAtom(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Ts(#[from] TsError),
    #[error(transparent)]
    Type(#[from] TypeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Region {
    pub sup: Vec<bool>,
    pub sig: Vec<Interaction>,
}

impl Region {
    /// Whether the region solves `atom`.
    pub fn solves(&self, atom: Atom) -> bool {
        match atom {
            Atom::Ssp(s, t) => self.sup[s] != self.sup[t],
            Atom::Essp(e, s) => !self.sig[e].is_defined(self.sup[s]),
        }
    }

    pub fn dump(&self, ts: &TransitionSystem) -> String {
        let mut out = String::from("region\n");
        for (s, b) in self.sup.iter().enumerate() {
            let _ = writeln!(out, "sup {} {}", ts.state_name(s), u8::from(*b));
        }
        for (e, i) in self.sig.iter().enumerate() {
            let _ = writeln!(out, "sig {} {}", ts.event_name(e), i);
        }
        out
    }

    /// The region with every bit flipped and inp/out, set/res, used/free exchanged.
    pub fn complement(&self) -> Region {
        Region {
            sup: self.sup.iter().map(|b| !b).collect(),
            sig: self.sig.iter().map(|i| i.complement()).collect(),
        }
    }
}

/// Parses one or more `region` blocks. Unlisted signature entries default to nop,
/// unlisted supports to 0.
pub fn parse_regions(ts: &TransitionSystem, text: &str) -> Result<Vec<Region>, RegionError> {
    let mut regions: Vec<Region> = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = line.split_whitespace().collect();
        let syntax = |message: String| RegionError::Syntax {
            line: no + 1,
            message,
        };
        match toks.as_slice() {
            [] => {}
            ["region"] => regions.push(Region {
                sup: vec![false; ts.num_states()],
                sig: vec![Interaction::Nop; ts.num_events()],
            }),
            ["sup", s, bit] => {
                let r = regions
                    .last_mut()
                    .ok_or_else(|| syntax("`sup` before `region`".into()))?;
                let b = match *bit {
                    "0" => false,
                    "1" => true,
                    _ => return Err(syntax(format!("bad bit `{bit}`"))),
                };
                r.sup[ts.state_id(s)?] = b;
            }
            ["sig", e, i] => {
                let r = regions
                    .last_mut()
                    .ok_or_else(|| syntax("`sig` before `region`".into()))?;
                r.sig[ts.event_id(e)?] = i.parse()?;
            }
            _ => return Err(syntax(format!("cannot parse `{}`", line.trim()))),
        }
    }
    Ok(regions)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    /// Two distinct states, the smaller id first.
    Ssp(StateId, StateId),
    /// An event not enabled at a state.
    Essp(EventId, StateId),
}

impl Atom {
    pub fn is_well_formed(&self, ts: &TransitionSystem) -> bool {
        match *self {
            Atom::Ssp(s, t) => s != t && s < ts.num_states() && t < ts.num_states(),
            Atom::Essp(e, s) => e < ts.num_events() && s < ts.num_states() && !ts.enabled(s, e),
        }
    }

    pub fn display<'a>(&self, ts: &'a TransitionSystem) -> AtomDisplay<'a> {
        AtomDisplay { atom: *self, ts }
    }

    /// Names of the two components, used to map atoms between related systems.
    pub fn key(&self, ts: &TransitionSystem) -> AtomKey {
        match *self {
            Atom::Ssp(s, t) => AtomKey::Ssp(ts.state_name(s).into(), ts.state_name(t).into()),
            Atom::Essp(e, s) => AtomKey::Essp(ts.event_name(e).into(), ts.state_name(s).into()),
        }
    }
}

pub struct AtomDisplay<'a> {
    atom: Atom,
    ts: &'a TransitionSystem,
}

impl fmt::Display for AtomDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.atom {
            Atom::Ssp(s, t) => write!(f, "({},{})", self.ts.state_name(s), self.ts.state_name(t)),
            Atom::Essp(e, s) => write!(f, "({},{})", self.ts.event_name(e), self.ts.state_name(s)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AtomKey {
    Ssp(String, String),
    Essp(String, String),
}

impl AtomKey {
    pub fn resolve(&self, ts: &TransitionSystem) -> Option<Atom> {
        let atom = match self {
            AtomKey::Ssp(s, t) => {
                let (s, t) = (ts.state_id(s).ok()?, ts.state_id(t).ok()?);
                Atom::Ssp(s.min(t), s.max(t))
            }
            AtomKey::Essp(e, s) => Atom::Essp(ts.event_id(e).ok()?, ts.state_id(s).ok()?),
        };
        atom.is_well_formed(ts).then_some(atom)
    }
}

/// SSP atoms in lexicographic state order.
pub fn ssp_atoms(ts: &TransitionSystem) -> Vec<Atom> {
    let n = ts.num_states();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for s in 0..n {
        for t in s + 1..n {
            out.push(Atom::Ssp(s, t));
        }
    }
    out
}

/// ESSP atoms, event-major.
pub fn essp_atoms(ts: &TransitionSystem) -> Vec<Atom> {
    let mut out = Vec::new();
    for e in 0..ts.num_events() {
        for s in 0..ts.num_states() {
            if !ts.enabled(s, e) {
                out.push(Atom::Essp(e, s));
            }
        }
    }
    out
}

/// All atoms: SSP atoms first, then ESSP atoms.
pub fn atoms(ts: &TransitionSystem) -> Vec<Atom> {
    let mut out = ssp_atoms(ts);
    out.extend(essp_atoms(ts));
    out
}

fn check_domain(ts: &TransitionSystem, r: &Region) -> Result<(), RegionError> {
    if r.sup.len() != ts.num_states() || r.sig.len() != ts.num_events() {
        return Err(RegionError::DomainMismatch {
            states: ts.num_states(),
            events: ts.num_events(),
            got_states: r.sup.len(),
            got_events: r.sig.len(),
        });
    }
    Ok(())
}

/// True iff every signature value lies in `ty` and every arc maps onto a type edge.
pub fn validate_region(
    ts: &TransitionSystem,
    ty: BooleanType,
    r: &Region,
) -> Result<bool, RegionError> {
    check_domain(ts, r)?;
    if !r.sig.iter().all(|i| ty.contains(*i)) {
        return Ok(false);
    }
    Ok(ts
        .arcs()
        .iter()
        .all(|a| r.sig[a.event].apply(r.sup[a.src]) == Some(r.sup[a.dst])))
}

/// The region determined by `sup_initial` and `sig`, or `None` if two paths
/// disagree on a support or some arc is not an edge of the type.
pub fn complete_region(
    ts: &TransitionSystem,
    ty: BooleanType,
    sup_initial: bool,
    sig: &[Interaction],
) -> Option<Region> {
    if sig.len() != ts.num_events() || !sig.iter().all(|i| ty.contains(*i)) {
        return None;
    }
    let mut sup: Vec<Option<bool>> = vec![None; ts.num_states()];
    sup[ts.initial()] = Some(sup_initial);
    let mut queue = VecDeque::from([ts.initial()]);
    while let Some(s) = queue.pop_front() {
        let x = sup[s].expect("queued states carry a support");
        for &k in ts.out_arcs(s) {
            let a = ts.arcs()[k];
            let y = sig[a.event].apply(x)?;
            match sup[a.dst] {
                Some(z) if z != y => return None,
                Some(_) => {}
                None => {
                    sup[a.dst] = Some(y);
                    queue.push_back(a.dst);
                }
            }
        }
    }
    Some(Region {
        sup: sup.into_iter().map(|b| b.expect("reachable")).collect(),
        sig: sig.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain_b() -> TransitionSystem {
        TransitionSystem::parse("initial t0\narc t0 a t1\narc t1 a' t2\n").unwrap()
    }

    #[test]
    fn completes_first_region_of_b() {
        let ts = chain_b();
        let ty = BooleanType::parse("nop,inp,swap").unwrap();
        let r = complete_region(&ts, ty, true, &[Interaction::Inp, Interaction::Nop]).unwrap();
        assert_eq!(r.sup, vec![true, false, false]);
        assert!(validate_region(&ts, ty, &r).unwrap());
        let bad = Region {
            sup: r.sup.clone(),
            sig: vec![Interaction::Inp, Interaction::Inp],
        };
        assert!(!validate_region(&ts, ty, &bad).unwrap());
        let short = Region {
            sup: vec![true],
            sig: vec![],
        };
        assert!(matches!(
            validate_region(&ts, ty, &short),
            Err(RegionError::DomainMismatch { .. })
        ));
    }

    #[test]
    fn odd_swap_cycle_is_inconsistent() {
        let ts = TransitionSystem::parse("initial s0\narc s0 a s1\narc s1 b s2\narc s2 c s0\n")
            .unwrap();
        let ty = BooleanType::parse("nop,swap").unwrap();
        let sig = vec![Interaction::Swap; 3];
        assert!(complete_region(&ts, ty, false, &sig).is_none());
        assert!(complete_region(&ts, ty, true, &sig).is_none());
    }

    #[test]
    fn atom_lists() {
        let ts = TransitionSystem::parse("initial t0\narc t0 a t1\narc t1 a t2\n").unwrap();
        let list: Vec<String> = atoms(&ts).iter().map(|a| a.display(&ts).to_string()).collect();
        assert_eq!(list, ["(t0,t1)", "(t0,t2)", "(t1,t2)", "(a,t2)"]);
        let single = TransitionSystem::parse("initial i\n").unwrap();
        assert!(atoms(&single).is_empty());
        let full = TransitionSystem::parse("initial 0\narc 0 s 1\narc 1 s 0\n").unwrap();
        assert!(essp_atoms(&full).is_empty());
    }

    #[test]
    fn region_dump_round_trips() {
        let ts = chain_b();
        let ty = BooleanType::parse("nop,inp,swap").unwrap();
        let r = complete_region(&ts, ty, true, &[Interaction::Inp, Interaction::Nop]).unwrap();
        let parsed = parse_regions(&ts, &r.dump(&ts)).unwrap();
        assert_eq!(parsed, vec![r]);
    }
}
