use std::collections::HashMap;

use crate::modify::{EventSplit, Kind, ModificationPlan, Payload};
use crate::ts::TransitionSystem;

use super::{GadgetSpec, Graph3B, ReductionError, Variant};

fn bot(i: usize) -> String {
    format!("⊥_{i}")
}

fn t(i: usize, j: usize) -> String {
    format!("t_{{{i},{j}}}")
}

fn f(j: usize, k: usize) -> String {
    format!("f_{{{j},{k}}}")
}

const HUB: &str = "ι";

struct Arcs {
    bidirectional: bool,
    list: Vec<(String, String, String)>,
}

impl Arcs {
    fn add(&mut self, s: &str, e: &str, d: &str) {
        self.list.push((s.into(), e.into(), d.into()));
        if self.bidirectional {
            self.list.push((d.into(), e.into(), s.into()));
        }
    }
}

/// The gadget system for `spec` and its budget.
pub fn build_gadget(g: &Graph3B, spec: GadgetSpec) -> Result<(TransitionSystem, usize), ReductionError> {
    let n = g.vertices().len();
    let m = g.edges().len();
    if spec.lambda > n {
        return Err(ReductionError::LambdaOutOfRange { lambda: spec.lambda, n });
    }
    let bidirectional = spec.variant == Variant::Bidirectional;
    let mut arcs = Arcs {
        bidirectional,
        list: Vec::new(),
    };
    let v = |i: usize| g.vertices()[i].as_str();
    let lambda = spec.lambda;
    let (initial, kappa) = match spec.problem {
        Kind::Split => {
            for (i, &(i0, i1)) in g.edges().iter().enumerate() {
                arcs.add(&bot(i), &format!("w_{i}"), &t(i, 0));
                arcs.add(&t(i, 0), v(i0), &t(i, 1));
                arcs.add(&t(i, 1), v(i1), &t(i, 2));
                arcs.add(&t(i, 2), v(i0), &t(i, 3));
                arcs.add(&t(i, 3), v(i1), &t(i, 4));
                if i + 1 < m {
                    arcs.add(&bot(i), &format!("⊖_{}", i + 1), &bot(i + 1));
                }
            }
            (bot(0), n + 2 * m - 1 + lambda)
        }
        Kind::Edge | Kind::Event | Kind::State => {
            let kappa = match (spec.problem, spec.variant) {
                (Kind::Edge, Variant::Bidirectional) => 2 * lambda,
                _ => lambda,
            };
            // lambda + 1 parallel a-arcs keep f_{l,1} reachable within budget.
            let middle = spec.problem != Kind::State;
            for i in 0..m {
                arcs.add(HUB, &format!("y_{i}^0"), &t(i, 0));
                if middle {
                    arcs.add(HUB, &format!("y_{i}^1"), &t(i, 1));
                    arcs.add(HUB, &format!("y_{i}^2"), &t(i, 2));
                }
            }
            for l in 0..n {
                arcs.add(HUB, &format!("z_{l}"), &f(l, 0));
            }
            for (i, &(i0, i1)) in g.edges().iter().enumerate() {
                arcs.add(&t(i, 0), v(i0), &t(i, 1));
                arcs.add(&t(i, 1), v(i1), &t(i, 2));
            }
            for l in 0..n {
                arcs.add(&f(l, 0), v(l), &f(l, 1));
                for k in 0..=lambda {
                    arcs.add(&f(l, 0), &format!("a_{k}"), &f(l, 1));
                }
            }
            (HUB.to_string(), kappa)
        }
    };
    let ts = TransitionSystem::from_arcs(g.name(), &initial, arcs.list).map_err(|e| {
        ReductionError::InvalidGraph(format!("gadget is not a valid system: {e}"))
    })?;
    Ok((ts, kappa))
}

/// The modification that turns the gadget into an implementable system, given a cover.
pub fn cover_to_solution(g: &Graph3B, spec: GadgetSpec, cover: &[usize]) -> Result<ModificationPlan, ReductionError> {
    if let Some((u, v)) = g.uncovered(cover) {
        return Err(ReductionError::NotACover(g.vertices()[u].clone(), g.vertices()[v].clone()));
    }
    let mut cover: Vec<usize> = cover.to_vec();
    cover.sort_unstable();
    cover.dedup();
    if cover.len() > spec.lambda {
        return Err(ReductionError::CoverTooLarge {
            size: cover.len(),
            lambda: spec.lambda,
        });
    }
    let (ts, _) = build_gadget(g, spec)?;
    let find_arc = |s: &str, e: &str, d: &str| {
        let (s, e, d) = (
            ts.state_id(s).expect("gadget state"),
            ts.event_id(e).expect("gadget event"),
            ts.state_id(d).expect("gadget state"),
        );
        ts.out_arcs(s)
            .iter()
            .copied()
            .find(|&k| ts.arcs()[k].event == e && ts.arcs()[k].dst == d)
            .expect("gadget arc")
    };
    let bidirectional = spec.variant == Variant::Bidirectional;
    let payload = match spec.problem {
        Kind::Split => {
            // Position p of the path t_{i,p} -> t_{i,p+1} whose arc gets the new label.
            let mut primed: HashMap<(usize, usize), usize> = HashMap::new();
            for (i, &(i0, i1)) in g.edges().iter().enumerate() {
                let (in0, in1) = (cover.contains(&i0), cover.contains(&i1));
                if in0 && !in1 {
                    primed.insert((i, 0), i0);
                } else if in0 && in1 {
                    primed.insert((i, 2), i0);
                    primed.insert((i, 3), i1);
                } else if in1 {
                    primed.insert((i, 3), i1);
                }
            }
            let mut splits = Vec::new();
            for &c in &cover {
                let e = ts.event_id(&g.vertices()[c]).expect("vertex event");
                let mut groups = vec![0; ts.event_arcs(e).len()];
                for (&(i, p), &vx) in &primed {
                    if vx != c {
                        continue;
                    }
                    let fwd = find_arc(&t(i, p), &g.vertices()[c], &t(i, p + 1));
                    let mut marks = vec![fwd];
                    if bidirectional {
                        marks.push(find_arc(&t(i, p + 1), &g.vertices()[c], &t(i, p)));
                    }
                    for k in marks {
                        let j = ts.event_arcs(e).iter().position(|&x| x == k).expect("occurrence");
                        groups[j] = 1;
                    }
                }
                splits.push(EventSplit { event: e, groups });
            }
            splits.sort_by_key(|s| s.event);
            Payload::Split(splits)
        }
        Kind::Edge => {
            let mut arcs = Vec::new();
            for &c in &cover {
                let name = &g.vertices()[c];
                arcs.push(find_arc(&f(c, 0), name, &f(c, 1)));
                if bidirectional {
                    arcs.push(find_arc(&f(c, 1), name, &f(c, 0)));
                }
            }
            arcs.sort_unstable();
            Payload::Edges(arcs)
        }
        Kind::Event => {
            let mut events: Vec<usize> = cover
                .iter()
                .map(|&c| ts.event_id(&g.vertices()[c]).expect("vertex event"))
                .collect();
            events.sort_unstable();
            Payload::Events(events)
        }
        Kind::State => {
            let mut states: Vec<usize> = cover
                .iter()
                .map(|&c| ts.state_id(&f(c, 1)).expect("gadget state"))
                .collect();
            states.sort_unstable();
            Payload::States(states)
        }
    };
    Ok(ModificationPlan::new(&ts, payload))
}
