//! Exact solver for single separation atoms.
//!
//! The search branches on state supports. Each event keeps a domain of
//! interactions (a bitmask) compatible with the supports assigned so far;
//! forced supports are propagated along arcs. Events whose constraint is
//! satisfiable under every completion of their open endpoints are ignored when
//! splitting the open states into independent components.

use crate::budget::{NodeBudget, SearchBudgetExceeded};
use crate::region::{Atom, Region, RegionError};
use crate::ts::{EventId, StateId, TransitionSystem};
use crate::types::{BooleanType, Interaction};

const UNK: u8 = 2;

struct Masks {
    /// `pair[x][y]`: interactions mapping x to y.
    pair: [[u8; 2]; 2],
    def: [u8; 2],
    img: [u8; 2],
    undef: [u8; 2],
}

fn masks() -> Masks {
    let mut pair = [[0u8; 2]; 2];
    for i in Interaction::ALL {
        for x in [false, true] {
            if let Some(y) = i.apply(x) {
                pair[x as usize][y as usize] |= i.bit();
            }
        }
    }
    let def = [pair[0][0] | pair[0][1], pair[1][0] | pair[1][1]];
    let img = [pair[0][0] | pair[1][0], pair[0][1] | pair[1][1]];
    Masks {
        pair,
        def,
        img,
        undef: [!def[0], !def[1]],
    }
}

pub(crate) struct Csp<'a> {
    ts: &'a TransitionSystem,
    allowed: u8,
    target: Option<(EventId, StateId)>,
    m: Masks,
    /// Events with an arc at the state, plus the target event at the target state.
    state_events: Vec<Vec<EventId>>,
    budget: &'a NodeBudget,
}

impl<'a> Csp<'a> {
    pub(crate) fn new(
        ts: &'a TransitionSystem,
        ty: BooleanType,
        target: Option<(EventId, StateId)>,
        budget: &'a NodeBudget,
    ) -> Self {
        let mut state_events = vec![Vec::new(); ts.num_states()];
        for a in ts.arcs() {
            for s in [a.src, a.dst] {
                if !state_events[s].contains(&a.event) {
                    state_events[s].push(a.event);
                }
            }
        }
        if let Some((e, s)) = target {
            if !state_events[s].contains(&e) {
                state_events[s].push(e);
            }
        }
        Csp {
            ts,
            allowed: ty.mask(),
            target,
            m: masks(),
            state_events,
            budget,
        }
    }

    fn arc_mask(&self, sup: &[u8], src: StateId, dst: StateId) -> u8 {
        let (x, y) = (sup[src], sup[dst]);
        if src == dst {
            return if x == UNK {
                self.m.pair[0][0] | self.m.pair[1][1]
            } else {
                self.m.pair[x as usize][x as usize]
            };
        }
        match (x, y) {
            (UNK, UNK) => 0xff,
            (x, UNK) => self.m.def[x as usize],
            (UNK, y) => self.m.img[y as usize],
            (x, y) => self.m.pair[x as usize][y as usize],
        }
    }

    fn domain(&self, sup: &[u8], e: EventId) -> u8 {
        let mut d = self.allowed;
        for &k in self.ts.event_arcs(e) {
            let a = self.ts.arcs()[k];
            d &= self.arc_mask(sup, a.src, a.dst);
            if d == 0 {
                return 0;
            }
        }
        if let Some((te, ts_)) = self.target {
            if te == e {
                d &= match sup[ts_] {
                    UNK => self.m.undef[0] | self.m.undef[1],
                    x => self.m.undef[x as usize],
                };
            }
        }
        d
    }

    /// Arc-consistency over events, seeded with the events at `changed`
    /// (all events when `changed` is `None`). Returns false on a wipe-out.
    fn propagate(&self, sup: &mut [u8], changed: Option<&[StateId]>) -> bool {
        let ne = self.ts.num_events();
        let mut queued = vec![false; ne];
        let mut work: Vec<EventId> = Vec::new();
        let push = |e: EventId, queued: &mut Vec<bool>, work: &mut Vec<EventId>| {
            if !queued[e] {
                queued[e] = true;
                work.push(e);
            }
        };
        match changed {
            None => (0..ne).for_each(|e| push(e, &mut queued, &mut work)),
            Some(states) => {
                for &s in states {
                    for &e in &self.state_events[s] {
                        push(e, &mut queued, &mut work);
                    }
                }
            }
        }
        while let Some(e) = work.pop() {
            queued[e] = false;
            let d = self.domain(sup, e);
            if d == 0 {
                return false;
            }
            let mut forced: Vec<(StateId, u8)> = Vec::new();
            for &k in self.ts.event_arcs(e) {
                let a = self.ts.arcs()[k];
                let (x, y) = (sup[a.src], sup[a.dst]);
                if a.src == a.dst {
                    if x == UNK {
                        let c0 = d & self.m.pair[0][0] != 0;
                        let c1 = d & self.m.pair[1][1] != 0;
                        match (c0, c1) {
                            (true, false) => forced.push((a.src, 0)),
                            (false, true) => forced.push((a.src, 1)),
                            _ => {}
                        }
                    }
                } else if x != UNK && y == UNK {
                    let c0 = d & self.m.pair[x as usize][0] != 0;
                    let c1 = d & self.m.pair[x as usize][1] != 0;
                    match (c0, c1) {
                        (true, false) => forced.push((a.dst, 0)),
                        (false, true) => forced.push((a.dst, 1)),
                        _ => {}
                    }
                } else if x == UNK && y != UNK {
                    let c0 = d & self.m.pair[0][y as usize] != 0;
                    let c1 = d & self.m.pair[1][y as usize] != 0;
                    match (c0, c1) {
                        (true, false) => forced.push((a.src, 0)),
                        (false, true) => forced.push((a.src, 1)),
                        _ => {}
                    }
                }
            }
            if let Some((te, s)) = self.target {
                if te == e && sup[s] == UNK {
                    let c0 = d & self.m.undef[0] != 0;
                    let c1 = d & self.m.undef[1] != 0;
                    match (c0, c1) {
                        (true, false) => forced.push((s, 0)),
                        (false, true) => forced.push((s, 1)),
                        _ => {}
                    }
                }
            }
            for (s, v) in forced {
                if sup[s] == UNK {
                    sup[s] = v;
                    for &f in &self.state_events[s] {
                        push(f, &mut queued, &mut work);
                    }
                } else if sup[s] != v {
                    return false;
                }
            }
        }
        true
    }

    /// Open endpoints of `e`, including the target state for the target event.
    fn open_endpoints(&self, sup: &[u8], e: EventId) -> Vec<StateId> {
        let mut open = Vec::new();
        for &k in self.ts.event_arcs(e) {
            let a = self.ts.arcs()[k];
            for s in [a.src, a.dst] {
                if sup[s] == UNK && !open.contains(&s) {
                    open.push(s);
                }
            }
        }
        if let Some((te, s)) = self.target {
            if te == e && sup[s] == UNK && !open.contains(&s) {
                open.push(s);
            }
        }
        open
    }

    /// True when every completion of the open endpoints (at most two) leaves a nonempty domain.
    fn slack_event(&self, sup: &mut [u8], e: EventId, open: &[StateId]) -> bool {
        if open.len() > 2 {
            return false;
        }
        let mut ok = true;
        for bits in 0..(1u32 << open.len()) {
            for (j, &s) in open.iter().enumerate() {
                sup[s] = ((bits >> j) & 1) as u8;
            }
            if self.domain(sup, e) == 0 {
                ok = false;
                break;
            }
        }
        for &s in open {
            sup[s] = UNK;
        }
        ok
    }

    /// Independent groups of open states within `scope`, and the open states
    /// constrained by no binding event.
    fn components(&self, sup: &mut [u8], scope: &[StateId]) -> (Vec<Vec<StateId>>, Vec<StateId>) {
        let n = self.ts.num_states();
        let mut in_scope = vec![false; n];
        for &s in scope {
            if sup[s] == UNK {
                in_scope[s] = true;
            }
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut bound = vec![false; n];
        let mut seen_event = vec![false; self.ts.num_events()];
        for &s in scope {
            if !in_scope[s] {
                continue;
            }
            for &e in &self.state_events[s] {
                if seen_event[e] {
                    continue;
                }
                seen_event[e] = true;
                let open = self.open_endpoints(sup, e);
                if self.slack_event(sup, e, &open) {
                    continue;
                }
                for &u in &open {
                    bound[u] = true;
                }
                for w in open.windows(2) {
                    let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut groups: Vec<Vec<StateId>> = Vec::new();
        let mut root_group: Vec<Option<usize>> = vec![None; n];
        let mut free = Vec::new();
        for &s in scope {
            if !in_scope[s] {
                continue;
            }
            if !bound[s] {
                free.push(s);
                continue;
            }
            let r = find(&mut parent, s);
            match root_group[r] {
                Some(g) => groups[g].push(s),
                None => {
                    root_group[r] = Some(groups.len());
                    groups.push(vec![s]);
                }
            }
        }
        (groups, free)
    }

    fn pick(&self, sup: &[u8], comp: &[StateId]) -> StateId {
        let mut best = comp[0];
        let mut best_score = (0usize, 0usize);
        for &s in comp {
            let mut fixed = 0;
            let mut total = 0;
            for &k in self.ts.out_arcs(s).iter().chain(self.ts.in_arcs(s)) {
                let a = self.ts.arcs()[k];
                let other = if a.src == s { a.dst } else { a.src };
                total += 1;
                if sup[other] != UNK {
                    fixed += 1;
                }
            }
            if (fixed, total) > best_score {
                best_score = (fixed, total);
                best = s;
            }
        }
        best
    }

    fn solve_scope(&self, sup: &mut Vec<u8>, scope: &[StateId]) -> Result<bool, SearchBudgetExceeded> {
        let (groups, free) = self.components(sup, scope);
        for g in groups {
            if !self.solve_group(sup, &g)? {
                return Ok(false);
            }
        }
        for s in free {
            if sup[s] == UNK {
                sup[s] = 0;
            }
        }
        Ok(true)
    }

    fn solve_group(&self, sup: &mut Vec<u8>, group: &[StateId]) -> Result<bool, SearchBudgetExceeded> {
        let open: Vec<StateId> = group.iter().copied().filter(|&s| sup[s] == UNK).collect();
        if open.is_empty() {
            return Ok(true);
        }
        self.budget.tick()?;
        let v = self.pick(sup, &open);
        for val in [0u8, 1] {
            let mut trial = sup.clone();
            trial[v] = val;
            if !self.propagate(&mut trial, Some(&[v])) {
                continue;
            }
            let rest: Vec<StateId> = open.iter().copied().filter(|&s| trial[s] == UNK).collect();
            if self.solve_scope(&mut trial, &rest)? {
                *sup = trial;
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn region_from(&self, sup: &[u8]) -> Region {
        let sig = (0..self.ts.num_events())
            .map(|e| {
                let d = self.domain(sup, e);
                Interaction::BRANCHING
                    .into_iter()
                    .find(|i| d & i.bit() != 0)
                    .expect("propagation keeps every domain nonempty")
            })
            .collect();
        Region {
            sup: sup.iter().map(|&b| b == 1).collect(),
            sig,
        }
    }

    /// Completes the partial support `sup` into a region, if possible.
    pub(crate) fn solve_from(&self, mut sup: Vec<u8>) -> Result<Option<Region>, SearchBudgetExceeded> {
        self.budget.tick()?;
        if !self.propagate(&mut sup, None) {
            return Ok(None);
        }
        let scope: Vec<StateId> = (0..self.ts.num_states()).collect();
        if self.solve_scope(&mut sup, &scope)? {
            Ok(Some(self.region_from(&sup)))
        } else {
            Ok(None)
        }
    }
}

/// A region of type `ty` solving `atom`, found by exhaustive search.
pub fn solve_atom(
    ts: &TransitionSystem,
    ty: BooleanType,
    atom: Atom,
) -> Result<Option<Region>, RegionError> {
    if !atom.is_well_formed(ts) {
        return Err(RegionError::MalformedAtom(format!("{atom:?}")));
    }
    Ok(solve_atom_with(ts, ty, atom, &NodeBudget::unlimited()).expect("unlimited budget"))
}

pub(crate) fn solve_atom_with(
    ts: &TransitionSystem,
    ty: BooleanType,
    atom: Atom,
    budget: &NodeBudget,
) -> Result<Option<Region>, SearchBudgetExceeded> {
    let n = ts.num_states();
    let r = match atom {
        Atom::Ssp(s, t) => {
            let csp = Csp::new(ts, ty, None, budget);
            for (x, y) in [(1u8, 0u8), (0, 1)] {
                let mut sup = vec![UNK; n];
                sup[s] = x;
                sup[t] = y;
                if let Some(r) = csp.solve_from(sup)? {
                    return Ok(Some(r));
                }
            }
            None
        }
        Atom::Essp(e, s) => {
            let csp = Csp::new(ts, ty, Some((e, s)), budget);
            csp.solve_from(vec![UNK; n])?
        }
    };
    debug_assert!(r.as_ref().is_none_or(|r| r.solves(atom)
        && crate::region::validate_region(ts, ty, r).unwrap_or(false)));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_atoms() {
        let ty = BooleanType::parse("nop,inp,swap").unwrap();
        let a = TransitionSystem::parse("initial t0\narc t0 a t1\narc t1 a t2\n").unwrap();
        assert_eq!(solve_atom(&a, ty, Atom::Ssp(0, 2)).unwrap(), None);
        assert_eq!(solve_atom(&a, ty, Atom::Essp(0, 2)).unwrap(), None);
        assert!(solve_atom(&a, ty, Atom::Ssp(0, 1)).unwrap().is_some());
        let b = TransitionSystem::parse("initial t0\narc t0 a t1\narc t1 a' t2\n").unwrap();
        let r = solve_atom(&b, ty, Atom::Ssp(0, 1)).unwrap().unwrap();
        assert!(r.solves(Atom::Ssp(0, 1)));
        assert!(matches!(
            solve_atom(&b, ty, Atom::Ssp(1, 1)),
            Err(RegionError::MalformedAtom(_))
        ));
    }
}
