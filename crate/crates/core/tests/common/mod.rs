//! Generators and brute-force oracles shared by the integration tests. The
//! oracles only use the public data types; they do not call the solver.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use boolnet::modify::EventSplit;
use boolnet::reductions::Graph3B;
use boolnet::separation::property_atoms;
use boolnet::{apply_plan, BooleanType, Interaction, Kind, ModificationPlan, Payload, Property, Region, TransitionSystem};
use rand::seq::SliceRandom;
use rand::Rng;

pub const EVENT_NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

/// A random system on `n` states over at most `events` labels: a random
/// spanning tree from `s0` plus up to `extra` further arcs.
pub fn random_ts<R: Rng>(rng: &mut R, n: usize, events: usize, extra: usize) -> TransitionSystem {
    let mut arcs: Vec<(usize, usize, usize)> = Vec::new();
    let free = |arcs: &[(usize, usize, usize)], s: usize| -> Vec<usize> {
        (0..events).filter(|&e| !arcs.iter().any(|a| a.0 == s && a.1 == e)).collect()
    };
    for d in 1..n {
        loop {
            let p = rng.gen_range(0..d);
            let f = free(&arcs, p);
            if let Some(&e) = f.choose(rng) {
                arcs.push((p, e, d));
                break;
            }
        }
    }
    add_extra(rng, &mut arcs, n, events, extra);
    build(arcs)
}

fn add_extra<R: Rng>(rng: &mut R, arcs: &mut Vec<(usize, usize, usize)>, n: usize, events: usize, extra: usize) {
    for _ in 0..extra {
        let (s, e, d) = (rng.gen_range(0..n), rng.gen_range(0..events), rng.gen_range(0..n));
        if !arcs.iter().any(|a| a.0 == s && a.1 == e) {
            arcs.push((s, e, d));
        }
    }
}

fn build(arcs: Vec<(usize, usize, usize)>) -> TransitionSystem {
    let named = arcs
        .into_iter()
        .map(|(s, e, d)| (format!("s{s}"), EVENT_NAMES[e].to_string(), format!("s{d}")));
    TransitionSystem::from_arcs(None, "s0", named).expect("generator keeps systems valid")
}

/// A random system with the path `s0 -a-> s1 -b-> s2 -a-> s3 -b-> s4`.
pub fn random_abab_ts<R: Rng>(rng: &mut R, n: usize) -> TransitionSystem {
    assert!(n >= 5);
    let mut arcs = vec![(0, 0, 1), (1, 1, 2), (2, 0, 3), (3, 1, 4)];
    let events = 4;
    for d in 5..n {
        loop {
            let p = rng.gen_range(0..d);
            let e = rng.gen_range(0..events);
            if !arcs.iter().any(|a| a.0 == p && a.1 == e) {
                arcs.push((p, e, d));
                break;
            }
        }
    }
    let extra = rng.gen_range(0..=n);
    add_extra(rng, &mut arcs, n, events, extra);
    build(arcs)
}

/// A system where every event occurs at every state.
pub fn random_complete_ts<R: Rng>(rng: &mut R, n: usize, events: usize) -> TransitionSystem {
    let mut arcs = Vec::new();
    for s in 0..n {
        for e in 0..events {
            // s + 1 keeps every state reachable through event 0.
            let d = if e == 0 && s + 1 < n { s + 1 } else { rng.gen_range(0..n) };
            arcs.push((s, e, d));
        }
    }
    build(arcs)
}

/// Every region of `ts` for `ty`, by enumerating signatures and the initial support.
pub fn brute_regions(ts: &TransitionSystem, ty: BooleanType) -> Vec<Region> {
    let members: Vec<Interaction> = ty.members().collect();
    let ne = ts.num_events();
    let mut out = Vec::new();
    let mut digits = vec![0usize; ne];
    loop {
        let sig: Vec<Interaction> = digits.iter().map(|&d| members[d]).collect();
        for sup0 in [false, true] {
            if let Some(sup) = propagate(ts, &sig, sup0) {
                out.push(Region { sup, sig: sig.clone() });
            }
        }
        let mut i = 0;
        while i < ne && digits[i] + 1 == members.len() {
            digits[i] = 0;
            i += 1;
        }
        if i == ne {
            break;
        }
        digits[i] += 1;
    }
    out
}

fn propagate(ts: &TransitionSystem, sig: &[Interaction], sup0: bool) -> Option<Vec<bool>> {
    let mut sup: Vec<Option<bool>> = vec![None; ts.num_states()];
    sup[ts.initial()] = Some(sup0);
    let mut queue = VecDeque::from([ts.initial()]);
    while let Some(s) = queue.pop_front() {
        let x = sup[s].expect("queued states are set");
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
    sup.into_iter().collect()
}

pub fn brute_holds(ts: &TransitionSystem, ty: BooleanType, prop: Property) -> bool {
    let regions = brute_regions(ts, ty);
    property_atoms(ts, prop)
        .into_iter()
        .all(|atom| regions.iter().any(|r| r.solves(atom)))
}

/// Restricted-growth strings of length `n`.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let top = cur.iter().copied().max().map_or(0, |m| m + 1);
        for v in 0..=top {
            cur.push(v);
            rec(n, cur, out);
            cur.pop();
        }
    }
    rec(n, &mut cur, &mut out);
    out
}

fn subsets(n: usize, max: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize <= max)
        .map(|m| (0..n).filter(|&i| m & (1 << i) != 0).collect())
        .collect()
}

/// Every plan of `kind` for `ts` with cost at most `kappa`.
pub fn all_plans(ts: &TransitionSystem, kind: Kind, kappa: usize) -> Vec<ModificationPlan> {
    let payloads: Vec<Payload> = match kind {
        Kind::Edge => subsets(ts.arcs().len(), kappa).into_iter().map(Payload::Edges).collect(),
        Kind::Event => subsets(ts.num_events(), kappa).into_iter().map(Payload::Events).collect(),
        Kind::State => subsets(ts.num_states(), kappa)
            .into_iter()
            .filter(|s| !s.contains(&ts.initial()))
            .map(Payload::States)
            .collect(),
        Kind::Split => {
            let mut combos: Vec<Vec<EventSplit>> = vec![Vec::new()];
            for e in 0..ts.num_events() {
                let mut next = Vec::new();
                for c in &combos {
                    for groups in partitions(ts.event_arcs(e).len()) {
                        let mut c = c.clone();
                        if groups.iter().any(|&g| g > 0) {
                            c.push(EventSplit { event: e, groups });
                        }
                        next.push(c);
                    }
                }
                combos = next;
            }
            combos.into_iter().map(Payload::Split).collect()
        }
    };
    payloads
        .into_iter()
        .map(|p| ModificationPlan::new(ts, p))
        .filter(|p| p.cost <= kappa)
        .collect()
}

/// Least cost of a valid plan whose result has `prop`, by exhaustive enumeration.
pub fn brute_min_cost(ts: &TransitionSystem, ty: BooleanType, kind: Kind, prop: Property, kappa: usize) -> Option<usize> {
    all_plans(ts, kind, kappa)
        .into_iter()
        .filter_map(|p| {
            let b = apply_plan(ts, &p).ok()?;
            brute_holds(&b, ty, prop).then_some(p.cost)
        })
        .min()
}

fn canonical(n: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<(usize, usize)>> = None;
    loop {
        let mut e: Vec<(usize, usize)> = edges
            .iter()
            .map(|&(u, v)| (perm[u].min(perm[v]), perm[u].max(perm[v])))
            .collect();
        e.sort_unstable();
        if best.as_ref().is_none_or(|b| e < *b) {
            best = Some(e);
        }
        // Next permutation.
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).expect("exists");
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
    best.expect("at least one permutation")
}

fn graph(n: usize, edges: Vec<(usize, usize)>, name: &str) -> Graph3B {
    let vertices = (0..n).map(|i| format!("v{i}")).collect();
    Graph3B::new(Some(name), vertices, edges).expect("valid graph")
}

fn valid_shape(n: usize, edges: &[(usize, usize)]) -> bool {
    (0..n).all(|v| {
        let d = edges.iter().filter(|&&(a, b)| a == v || b == v).count();
        (1..=3).contains(&d)
    })
}

/// Graphs on at most `max_n` vertices with at most `max_m` edges, degrees one
/// to three, one per isomorphism class.
pub fn exhaustive_graphs(max_n: usize, max_m: usize) -> Vec<Graph3B> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for n in 2..=max_n {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        for mask in 1u32..1 << pairs.len() {
            if mask.count_ones() as usize > max_m {
                continue;
            }
            let edges: Vec<(usize, usize)> = (0..pairs.len()).filter(|&i| mask & (1 << i) != 0).map(|i| pairs[i]).collect();
            if !valid_shape(n, &edges) {
                continue;
            }
            let c = canonical(n, &edges);
            if seen.insert((n, c.clone())) {
                out.push(graph(n, c, &format!("g{}", out.len())));
            }
        }
    }
    out
}

/// Random graphs in the same range, with shuffled vertex and edge order.
pub fn random_graphs<R: Rng>(rng: &mut R, count: usize, max_n: usize, max_m: usize) -> Vec<Graph3B> {
    let mut out = Vec::new();
    while out.len() < count {
        let n = rng.gen_range(2..=max_n);
        let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        pairs.shuffle(rng);
        let m = rng.gen_range(1..=max_m.min(pairs.len()));
        let edges: Vec<(usize, usize)> = pairs[..m].iter().map(|&(u, v)| if rng.gen() { (v, u) } else { (u, v) }).collect();
        if !valid_shape(n, &edges) {
            continue;
        }
        let mut names: Vec<usize> = (0..n).collect();
        names.shuffle(rng);
        let vertices = names.iter().map(|i| format!("v{i}")).collect();
        let name = format!("r{}", out.len());
        out.push(Graph3B::new(Some(&name), vertices, edges).expect("valid graph"));
    }
    out
}
