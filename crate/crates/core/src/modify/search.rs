//! Exact minimum-cost search for modification plans.

use crate::budget::{node_limit_from_env, NodeBudget, SearchBudgetExceeded};
use crate::separation::{even_paths, Property, PropertyChecker};
use crate::simulation::Mode;
use crate::ts::TransitionSystem;
use crate::types::BooleanType;

use super::fast::{decide_fast_path, FastPath};
use super::{apply_plan, EventSplit, Kind, ModificationPlan, Payload};

/// Cheapest plan of `kind` within budget `kappa` whose result has the property
/// required by `mode`, or `None` if there is none.
///
/// Uses the node limit from the environment.
pub fn decide(
    ts: &TransitionSystem,
    ty: BooleanType,
    kind: Kind,
    mode: Mode,
    kappa: usize,
) -> Result<Option<ModificationPlan>, SearchBudgetExceeded> {
    decide_with(ts, ty, kind, mode, kappa, &NodeBudget::new(node_limit_from_env()))
}

pub fn decide_with(
    ts: &TransitionSystem,
    ty: BooleanType,
    kind: Kind,
    mode: Mode,
    kappa: usize,
    budget: &NodeBudget,
) -> Result<Option<ModificationPlan>, SearchBudgetExceeded> {
    if kind == Kind::Split && kappa < ts.num_events() {
        return Ok(None);
    }
    match decide_fast_path(ts, ty, kind, mode) {
        FastPath::YesAsIs => return Ok(Some(ModificationPlan::empty(ts, kind))),
        FastPath::No => return Ok(None),
        FastPath::FallThrough => {}
    }
    let prop = Property::for_mode(mode);
    let checker = PropertyChecker::new(ty, prop);
    // Without inp and out, an ESSP atom (e, s) with an e-arc entering s is unsolvable.
    let entering_rule = prop.needs_essp() && !ty.has_inp_or_out();
    match kind {
        Kind::Split => SplitSearch::new(ts, ty, prop, entering_rule, &checker, budget)
            .map_or(Ok(None), |mut s| s.run(kappa - ts.num_events())),
        _ => RemovalSearch::new(ts, kind, entering_rule, &checker, budget).run(kappa),
    }
}

struct SplitSearch<'a> {
    ts: &'a TransitionSystem,
    prop: Property,
    checker: &'a PropertyChecker,
    budget: &'a NodeBudget,
    /// Per event, the class of each occurrence; classes must share a group.
    class_of: Vec<Vec<usize>>,
    class_count: Vec<usize>,
    /// Extra labels that events after `e` can still absorb.
    capacity_after: Vec<usize>,
    /// Per event, the group of each occurrence once decided.
    groups: Vec<Vec<usize>>,
    occ_pos: Vec<usize>,
    /// Even paths, filed under the last event (in canonical order) they use.
    paths_by_last: Vec<Vec<Vec<usize>>>,
}

impl<'a> SplitSearch<'a> {
    fn new(
        ts: &'a TransitionSystem,
        ty: BooleanType,
        prop: Property,
        entering_rule: bool,
        checker: &'a PropertyChecker,
        budget: &'a NodeBudget,
    ) -> Option<Self> {
        let ne = ts.num_events();
        let mut occ_pos = vec![0; ts.arcs().len()];
        for e in 0..ne {
            for (j, &k) in ts.event_arcs(e).iter().enumerate() {
                occ_pos[k] = j;
            }
        }
        let mut class_of = Vec::with_capacity(ne);
        let mut class_count = Vec::with_capacity(ne);
        for e in 0..ne {
            let occ = ts.event_arcs(e);
            let mut parent: Vec<usize> = (0..occ.len()).collect();
            fn find(p: &mut [usize], mut x: usize) -> usize {
                while p[x] != x {
                    p[x] = p[p[x]];
                    x = p[x];
                }
                x
            }
            if entering_rule {
                for (j, &k) in occ.iter().enumerate() {
                    let s = ts.arcs()[k].dst;
                    // The label entering s must also leave s.
                    let out = ts.out_arcs(s).iter().find(|&&x| ts.arcs()[x].event == e)?;
                    let (a, b) = (find(&mut parent, j), find(&mut parent, occ_pos[*out]));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
            let mut ids = vec![usize::MAX; occ.len()];
            let mut classes = Vec::with_capacity(occ.len());
            let mut next = 0;
            for j in 0..occ.len() {
                let r = find(&mut parent, j);
                if ids[r] == usize::MAX {
                    ids[r] = next;
                    next += 1;
                }
                classes.push(ids[r]);
            }
            class_of.push(classes);
            class_count.push(next);
        }
        let mut capacity_after = vec![0; ne + 1];
        for e in (0..ne).rev() {
            capacity_after[e] = capacity_after[e + 1] + class_count[e].saturating_sub(1);
        }
        let mut paths_by_last = vec![Vec::new(); ne];
        if !ty.has_set_or_res() {
            for p in even_paths(ts) {
                let s0 = ts.arcs()[p[0]].src;
                let s1 = ts.arcs()[p[p.len() - 1]].dst;
                if s0 == s1 {
                    continue;
                }
                let last = p.iter().map(|&k| ts.arcs()[k].event).max().expect("nonempty");
                paths_by_last[last].push(p);
            }
        }
        Some(SplitSearch {
            ts,
            prop,
            checker,
            budget,
            class_of,
            class_count,
            capacity_after,
            groups: vec![Vec::new(); ne],
            occ_pos,
            paths_by_last,
        })
    }

    fn run(&mut self, extra_max: usize) -> Result<Option<ModificationPlan>, SearchBudgetExceeded> {
        for extra in 0..=extra_max.min(self.capacity_after[0]) {
            if let Some(plan) = self.event_level(0, extra)? {
                return Ok(Some(plan));
            }
        }
        Ok(None)
    }

    fn event_level(&mut self, e: usize, remaining: usize) -> Result<Option<ModificationPlan>, SearchBudgetExceeded> {
        self.budget.tick()?;
        if e == self.ts.num_events() {
            return if remaining == 0 { self.leaf() } else { Ok(None) };
        }
        if remaining > self.capacity_after[e] {
            return Ok(None);
        }
        let q = self.class_count[e];
        for blocks in 1..=q.min(remaining + 1) {
            let mut rgs = vec![0; q];
            if let Some(plan) = self.rgs_level(e, 0, 0, blocks, &mut rgs, remaining - (blocks - 1))? {
                return Ok(Some(plan));
            }
        }
        Ok(None)
    }

    /// Restricted-growth strings over the classes of `e` with exactly `blocks` blocks.
    fn rgs_level(
        &mut self,
        e: usize,
        pos: usize,
        used: usize,
        blocks: usize,
        rgs: &mut Vec<usize>,
        rest: usize,
    ) -> Result<Option<ModificationPlan>, SearchBudgetExceeded> {
        let q = rgs.len();
        if pos == q {
            if used != blocks {
                return Ok(None);
            }
            self.groups[e] = self.class_of[e].iter().map(|&c| rgs[c]).collect();
            if !self.consistent(e) {
                return Ok(None);
            }
            return self.event_level(e + 1, rest);
        }
        let top = if pos == 0 { 0 } else { used.min(blocks - 1) };
        for v in 0..=top {
            let now = used.max(v + 1);
            if q - pos - 1 < blocks - now {
                continue;
            }
            rgs[pos] = v;
            if let Some(plan) = self.rgs_level(e, pos + 1, now, blocks, rgs, rest)? {
                return Ok(Some(plan));
            }
        }
        Ok(None)
    }

    fn label(&self, k: usize) -> (usize, usize) {
        let ev = self.ts.arcs()[k].event;
        (ev, self.groups[ev][self.occ_pos[k]])
    }

    /// Checks the even paths completed by deciding `e`.
    fn consistent(&self, e: usize) -> bool {
        let ts = self.ts;
        for p in &self.paths_by_last[e] {
            let mut labels: Vec<(usize, usize)> = p.iter().map(|&k| self.label(k)).collect();
            labels.sort_unstable();
            if !labels.chunks(2).all(|c| c[0] == c[1]) {
                continue;
            }
            let s0 = ts.arcs()[p[0]].src;
            let s1 = ts.arcs()[p[p.len() - 1]].dst;
            if self.prop.needs_ssp() {
                return false;
            }
            for (x, y) in [(s0, s1), (s1, s0)] {
                for &k in ts.out_arcs(x) {
                    let Some((ev, g)) = self.label_if_decided(k, e) else {
                        continue;
                    };
                    let enabled = ts
                        .out_arcs(y)
                        .iter()
                        .any(|&k2| self.label_if_decided(k2, e) == Some((ev, g)));
                    if !enabled {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn label_if_decided(&self, k: usize, e: usize) -> Option<(usize, usize)> {
        (self.ts.arcs()[k].event <= e).then(|| self.label(k))
    }

    fn leaf(&mut self) -> Result<Option<ModificationPlan>, SearchBudgetExceeded> {
        let splits: Vec<EventSplit> = self
            .groups
            .iter()
            .enumerate()
            .filter(|(_, g)| g.iter().any(|&x| x > 0))
            .map(|(event, g)| EventSplit {
                event,
                groups: g.clone(),
            })
            .collect();
        let plan = ModificationPlan::new(self.ts, Payload::Split(splits));
        let out = apply_plan(self.ts, &plan).expect("partitions from the search are valid");
        Ok(self.checker.holds(&out, self.budget)?.then_some(plan))
    }
}

struct RemovalSearch<'a> {
    ts: &'a TransitionSystem,
    kind: Kind,
    checker: &'a PropertyChecker,
    budget: &'a NodeBudget,
    units: Vec<usize>,
    /// `(kept, removed)` unit pairs that cannot occur together.
    conflicts: Vec<(usize, usize)>,
    /// Units that must be removed.
    forced: Vec<bool>,
}

impl<'a> RemovalSearch<'a> {
    fn new(
        ts: &'a TransitionSystem,
        kind: Kind,
        entering_rule: bool,
        checker: &'a PropertyChecker,
        budget: &'a NodeBudget,
    ) -> Self {
        let units: Vec<usize> = match kind {
            Kind::Edge => (0..ts.arcs().len()).collect(),
            Kind::Event => (0..ts.num_events()).collect(),
            Kind::State => (0..ts.num_states()).filter(|&s| s != ts.initial()).collect(),
            Kind::Split => unreachable!("split has its own search"),
        };
        let mut conflicts = Vec::new();
        let mut forced = vec![false; units.len()];
        if kind == Kind::Edge && entering_rule {
            // A kept arc entering s requires the arc with the same label leaving s.
            for (k, a) in ts.arcs().iter().enumerate() {
                match ts.out_arcs(a.dst).iter().find(|&&x| ts.arcs()[x].event == a.event) {
                    Some(&out) => {
                        if out != k {
                            conflicts.push((k, out));
                        }
                    }
                    None => forced[k] = true,
                }
            }
        }
        RemovalSearch {
            ts,
            kind,
            checker,
            budget,
            units,
            conflicts,
            forced,
        }
    }

    fn run(&mut self, kappa: usize) -> Result<Option<ModificationPlan>, SearchBudgetExceeded> {
        let n = self.units.len();
        let mut removed = vec![false; n];
        let mut chosen = Vec::new();
        for cost in 0..=kappa.min(n) {
            if let Some(plan) = self.combos(0, cost, &mut removed, &mut chosen)? {
                return Ok(Some(plan));
            }
        }
        Ok(None)
    }

    /// Units below `decided` are settled; checks the constraints among them.
    fn violated(&self, decided: usize, removed: &[bool]) -> bool {
        (0..decided).any(|u| self.forced[u] && !removed[u])
            || self
                .conflicts
                .iter()
                .any(|&(kept, gone)| kept < decided && gone < decided && !removed[kept] && removed[gone])
    }

    fn combos(
        &mut self,
        start: usize,
        remaining: usize,
        removed: &mut Vec<bool>,
        chosen: &mut Vec<usize>,
    ) -> Result<Option<ModificationPlan>, SearchBudgetExceeded> {
        self.budget.tick()?;
        let n = self.units.len();
        if remaining == 0 {
            if self.violated(n, removed) {
                return Ok(None);
            }
            return self.evaluate(chosen);
        }
        for idx in start..=n - remaining {
            if self.violated(idx, removed) {
                break;
            }
            removed[idx] = true;
            chosen.push(self.units[idx]);
            let found = if self.violated(idx + 1, removed) {
                None
            } else {
                self.combos(idx + 1, remaining - 1, removed, chosen)?
            };
            chosen.pop();
            removed[idx] = false;
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    fn evaluate(&self, chosen: &[usize]) -> Result<Option<ModificationPlan>, SearchBudgetExceeded> {
        let payload = match self.kind {
            Kind::Edge => Payload::Edges(chosen.to_vec()),
            Kind::Event => Payload::Events(chosen.to_vec()),
            Kind::State => Payload::States(chosen.to_vec()),
            Kind::Split => unreachable!("split has its own search"),
        };
        let plan = ModificationPlan::new(self.ts, payload);
        let Ok(out) = apply_plan(self.ts, &plan) else {
            return Ok(None);
        };
        Ok(self.checker.holds(&out, self.budget)?.then_some(plan))
    }
}
