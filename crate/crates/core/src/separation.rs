//! Separation properties and witnesses.

use std::cell::RefCell;
use std::fmt;
use std::fmt::Write as _;

use crate::budget::{NodeBudget, SearchBudgetExceeded};
use crate::region::{essp_atoms, ssp_atoms, Atom, AtomKey, Region};
use crate::simulation::Mode;
use crate::solver::solve_atom_with;
use crate::ts::{StateId, TransitionSystem};
use crate::types::{BooleanType, Interaction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    Ssp,
    Essp,
    Both,
}

impl Property {
    pub fn for_mode(mode: Mode) -> Property {
        match mode {
            Mode::Embed => Property::Ssp,
            Mode::LangSim => Property::Essp,
            Mode::Realize => Property::Both,
        }
    }

    pub fn parse(s: &str) -> Option<Property> {
        match s {
            "ssp" => Some(Property::Ssp),
            "essp" => Some(Property::Essp),
            "both" => Some(Property::Both),
            _ => None,
        }
    }

    pub fn needs_ssp(self) -> bool {
        matches!(self, Property::Ssp | Property::Both)
    }

    pub fn needs_essp(self) -> bool {
        matches!(self, Property::Essp | Property::Both)
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Ssp => "ssp",
            Property::Essp => "essp",
            Property::Both => "both",
        })
    }
}

/// Atoms required by `prop`, in canonical order.
pub fn property_atoms(ts: &TransitionSystem, prop: Property) -> Vec<Atom> {
    let mut out = Vec::new();
    if prop.needs_ssp() {
        out.extend(ssp_atoms(ts));
    }
    if prop.needs_essp() {
        out.extend(essp_atoms(ts));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub regions: Vec<Region>,
    /// Every required atom with the index of a region solving it.
    pub coverage: Vec<(Atom, usize)>,
}

impl Witness {
    pub fn dump(&self, ts: &TransitionSystem) -> String {
        let mut out = String::new();
        for (k, r) in self.regions.iter().enumerate() {
            let _ = writeln!(out, "# R{}", k + 1);
            out.push_str(&r.dump(ts));
        }
        out
    }
}

/// A witness for `prop`, or the first atom in canonical order that no region solves.
pub fn decide_property(ts: &TransitionSystem, ty: BooleanType, prop: Property) -> Result<Witness, Atom> {
    decide_property_with(ts, ty, prop, &NodeBudget::unlimited()).expect("unlimited budget")
}

pub fn decide_property_with(
    ts: &TransitionSystem,
    ty: BooleanType,
    prop: Property,
    budget: &NodeBudget,
) -> Result<Result<Witness, Atom>, SearchBudgetExceeded> {
    let atoms = property_atoms(ts, prop);
    let mut covered: Vec<Option<usize>> = vec![None; atoms.len()];
    let mut regions = Vec::new();
    for i in 0..atoms.len() {
        if covered[i].is_some() {
            continue;
        }
        let Some(mut r) = solve_atom_with(ts, ty, atoms[i], budget)? else {
            return Ok(Err(atoms[i]));
        };
        if prop.needs_essp() {
            retune_signature(ts, ty, &mut r, &atoms, &covered, atoms[i]);
        }
        let k = regions.len();
        for j in i..atoms.len() {
            if covered[j].is_none() && r.solves(atoms[j]) {
                covered[j] = Some(k);
            }
        }
        regions.push(r);
    }
    let coverage = atoms
        .into_iter()
        .zip(covered)
        .map(|(a, c)| (a, c.expect("all atoms covered")))
        .collect();
    Ok(Ok(Witness { regions, coverage }))
}

/// Keeps the support of `r` and picks, per event, the admissible interaction
/// solving the most ESSP atoms still open, without losing `target`.
fn retune_signature(
    ts: &TransitionSystem,
    ty: BooleanType,
    r: &mut Region,
    atoms: &[Atom],
    covered: &[Option<usize>],
    target: Atom,
) {
    for e in 0..ts.num_events() {
        let mut best = r.sig[e];
        let mut best_score = None;
        for i in Interaction::BRANCHING {
            if !ty.contains(i) {
                continue;
            }
            let fits = ts
                .event_arcs(e)
                .iter()
                .all(|&k| i.apply(r.sup[ts.arcs()[k].src]) == Some(r.sup[ts.arcs()[k].dst]));
            if !fits {
                continue;
            }
            if let Atom::Essp(te, s) = target {
                if te == e && i.is_defined(r.sup[s]) {
                    continue;
                }
            }
            let score = atoms
                .iter()
                .zip(covered)
                .filter(|(a, c)| {
                    c.is_none() && matches!(a, Atom::Essp(ae, s) if *ae == e && !i.is_defined(r.sup[*s]))
                })
                .count();
            if best_score.is_none_or(|b| score > b) {
                best_score = Some(score);
                best = i;
            }
        }
        r.sig[e] = best;
    }
}

/// Paths of length 2 or 4 on which every event occurs an even number of times.
///
/// Without set and res every interaction either always flips the bit or never
/// does, so such paths start and end at equal supports in every region.
pub(crate) fn even_paths(ts: &TransitionSystem) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(4);
    for s in 0..ts.num_states() {
        extend_even(ts, s, &mut path, &mut out);
    }
    out
}

fn extend_even(ts: &TransitionSystem, s: StateId, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if path.len() == 2 || path.len() == 4 {
        let mut ev: Vec<usize> = path.iter().map(|&k| ts.arcs()[k].event).collect();
        ev.sort_unstable();
        if ev.chunks(2).all(|c| c[0] == c[1]) {
            out.push(path.clone());
        }
        if path.len() == 4 {
            return;
        }
    }
    for &k in ts.out_arcs(s) {
        path.push(k);
        extend_even(ts, ts.arcs()[k].dst, path, out);
        path.pop();
    }
}

/// An atom of `prop` that is unsolvable for syntactic reasons, if one is found.
pub(crate) fn quick_refute(ts: &TransitionSystem, ty: BooleanType, prop: Property) -> Option<Atom> {
    if prop.needs_essp() {
        if !ty.has_partial() {
            if let Some(a) = essp_atoms(ts).first() {
                return Some(*a);
            }
        }
        if !ty.has_inp_or_out() {
            // An event entering s is defined at sup(s) under every other interaction.
            for s in 0..ts.num_states() {
                for &k in ts.in_arcs(s) {
                    let e = ts.arcs()[k].event;
                    if !ts.enabled(s, e) {
                        return Some(Atom::Essp(e, s));
                    }
                }
            }
        }
    }
    if !ty.has_set_or_res() {
        for p in even_paths(ts) {
            let s0 = ts.arcs()[p[0]].src;
            let s1 = ts.arcs()[*p.last().expect("nonempty")].dst;
            if s0 == s1 {
                continue;
            }
            if prop.needs_ssp() {
                return Some(Atom::Ssp(s0.min(s1), s0.max(s1)));
            }
            for (x, y) in [(s0, s1), (s1, s0)] {
                for &k in ts.out_arcs(x) {
                    let e = ts.arcs()[k].event;
                    if !ts.enabled(y, e) {
                        return Some(Atom::Essp(e, y));
                    }
                }
            }
        }
    }
    None
}

/// Repeated property checks over related systems, remembering recently failing atoms by name.
pub(crate) struct PropertyChecker {
    ty: BooleanType,
    prop: Property,
    hints: RefCell<Vec<AtomKey>>,
}

const MAX_HINTS: usize = 16;

impl PropertyChecker {
    pub(crate) fn new(ty: BooleanType, prop: Property) -> Self {
        PropertyChecker {
            ty,
            prop,
            hints: RefCell::new(Vec::new()),
        }
    }

    fn remember(&self, key: AtomKey) {
        let mut hints = self.hints.borrow_mut();
        hints.retain(|h| *h != key);
        hints.insert(0, key);
        hints.truncate(MAX_HINTS);
    }

    pub(crate) fn holds(&self, ts: &TransitionSystem, budget: &NodeBudget) -> Result<bool, SearchBudgetExceeded> {
        budget.tick()?;
        if quick_refute(ts, self.ty, self.prop).is_some() {
            return Ok(false);
        }
        let hints: Vec<AtomKey> = self.hints.borrow().clone();
        for key in hints {
            let Some(atom) = key.resolve(ts) else {
                continue;
            };
            if solve_atom_with(ts, self.ty, atom, budget)?.is_none() {
                self.remember(key);
                return Ok(false);
            }
        }
        match decide_property_with(ts, self.ty, self.prop, budget)? {
            Ok(_) => Ok(true),
            Err(atom) => {
                self.remember(atom.key(ts));
                Ok(false)
            }
        }
    }
}
