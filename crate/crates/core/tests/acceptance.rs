//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p boolnet-core --test acceptance -- --nocapture` to see
//! the report.

mod common;

use std::time::{Duration, Instant};

use boolnet::budget::NodeBudget;
use boolnet::fixtures;
use boolnet::modify::decide;
use boolnet::reductions::{check_equivalence, cover_to_solution, GadgetSpec, Graph3B, Variant};
use boolnet::synthesis::net_from_witness;
use boolnet::{
    apply_plan, atoms, decide_property, induced_simulation, solve_atom, synthesize, validate_region,
    verify_implementation, Atom, BooleanType, Interaction, Kind, Mode, Property, Region, SimulationKind,
    TransitionSystem, Witness,
};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const NODE_CAP: u64 = 10_000_000;
const INSTANCE_CLOCK: Duration = Duration::from_secs(60);

fn ty(s: &str) -> BooleanType {
    BooleanType::parse(s).unwrap()
}

fn mode_of(prop: Property) -> Mode {
    match prop {
        Property::Ssp => Mode::Embed,
        Property::Essp => Mode::LangSim,
        Property::Both => Mode::Realize,
    }
}

/// Witnesses collected across the suite, checked by the last criterion.
#[derive(Default)]
struct Witnesses {
    items: Vec<(TransitionSystem, BooleanType, Mode, Witness)>,
}

impl Witnesses {
    fn add(&mut self, ts: &TransitionSystem, ty: BooleanType, prop: Property, w: Witness) {
        self.items.push((ts.clone(), ty, mode_of(prop), w));
    }
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: false,
        detail: detail.into(),
    }
}

fn within(o: Outcome, start: Instant, limit: Duration) -> Outcome {
    let t = start.elapsed();
    if o.ok && t > limit {
        return fail(format!("{} but took {t:?}, limit {limit:?}", o.detail));
    }
    Outcome {
        ok: o.ok,
        detail: format!("{} ({t:.2?})", o.detail),
    }
}

fn criterion_1(pool: &mut Witnesses) -> Outcome {
    let t = fixtures::nop_inp_swap();
    let a = fixtures::chain_a();
    let show = |r: Result<Witness, Atom>| r.err().map(|x| x.display(&a).to_string());
    if show(decide_property(&a, t, Property::Ssp)).as_deref() != Some("(t0,t2)") {
        return fail("A: SSP atom (t0,t2) not reported");
    }
    if show(decide_property(&a, t, Property::Essp)).as_deref() != Some("(a,t2)") {
        return fail("A: ESSP atom (a,t2) not reported");
    }
    let a_ids = |s: &str| a.state_id(s).unwrap();
    let e_a = a.event_id("a").unwrap();
    if solve_atom(&a, t, Atom::Ssp(a_ids("t0"), a_ids("t2"))).unwrap().is_some()
        || solve_atom(&a, t, Atom::Essp(e_a, a_ids("t2"))).unwrap().is_some()
    {
        return fail("A: a reported atom is solvable");
    }
    let Some(plan) = decide(&a, t, Kind::Split, Mode::Realize, 2).unwrap() else {
        return fail("A: no split within 2");
    };
    let b = apply_plan(&a, &plan).unwrap();
    if b.named_arcs() != fixtures::split_b().named_arcs() {
        return fail(format!("split gave\n{}", b.serialize()));
    }
    let w = match decide_property(&b, t, Property::Both) {
        Ok(w) if w.regions.len() == 2 => w,
        Ok(w) => return fail(format!("B: witness has {} regions", w.regions.len())),
        Err(_) => return fail("B: not separable"),
    };
    pool.add(&b, t, Property::Both, w);
    let Ok(r) = synthesize(&b, t, Mode::Realize) else {
        return fail("B: synthesis failed");
    };
    let rg = r.net.reachability_graph().unwrap();
    let arcs = rg.ts.named_arcs();
    let want = [("(1,0)", "a", "(0,1)"), ("(0,1)", "a'", "(0,0)")];
    let same = arcs.len() == 2 && arcs.iter().zip(want).all(|(x, y)| (x.0.as_str(), x.1.as_str(), x.2.as_str()) == y);
    if !same || rg.ts.state_name(rg.ts.initial()) != "(1,0)" {
        return fail(format!("reachability graph\n{}", rg.ts.serialize()));
    }
    let sim = induced_simulation(&b, &rg.ts).unwrap();
    let phi_ok = sim.as_ref().is_some_and(|s| {
        s.kind == SimulationKind::Isomorphism
            && ["t0", "t1", "t2"]
                .iter()
                .zip(["(1,0)", "(0,1)", "(0,0)"])
                .all(|(x, y)| rg.ts.state_name(s.mapping[b.state_id(x).unwrap()]) == y)
    });
    if !phi_ok {
        return fail("B and the reachability graph are not isomorphic via t0,t1,t2 -> (1,0),(0,1),(0,0)");
    }
    pass("A fails at (t0,t2) and (a,t2); B has 2 regions; net realizes B")
}

fn criterion_2() -> Outcome {
    use Interaction::*;
    // Rows x = 0 and x = 1; None marks an empty cell.
    let table: [(Interaction, [Option<bool>; 2]); 8] = [
        (Nop, [Some(false), Some(true)]),
        (Inp, [None, Some(false)]),
        (Out, [Some(true), None]),
        (Set, [Some(true), Some(true)]),
        (Res, [Some(false), Some(false)]),
        (Swap, [Some(true), Some(false)]),
        (Used, [None, Some(true)]),
        (Free, [Some(false), None]),
    ];
    let mut cells = 0;
    let mut undefined = 0;
    for (i, row) in table {
        for (x, want) in [false, true].into_iter().zip(row) {
            if i.apply(x) != want {
                return fail(format!("{i}({}) is {:?}", u8::from(x), i.apply(x)));
            }
            cells += 1;
            undefined += usize::from(want.is_none());
        }
    }
    if cells != 16 || Interaction::ALL.len() != 8 {
        return fail("table is not 8 x 2");
    }
    pass(format!("{cells} cells match, {undefined} undefined"))
}

fn criterion_3(pool: &mut Witnesses) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let optional = [Interaction::Inp, Interaction::Out, Interaction::Used, Interaction::Free];
    let types: Vec<BooleanType> = (0..16u8)
        .map(|m| {
            let extra = optional.iter().enumerate().filter(|(k, _)| m & (1 << k) != 0).map(|(_, i)| *i);
            BooleanType::new([Interaction::Nop, Interaction::Swap].into_iter().chain(extra)).unwrap()
        })
        .collect();
    let mut regions_checked = 0usize;
    for _ in 0..200 {
        let n = rng.gen_range(5..=12);
        let ts = random_abab_ts(&mut rng, n);
        let (s0, s4) = (ts.state_id("s0").unwrap(), ts.state_id("s4").unwrap());
        let mut check = |r: &Region, what: &str| -> Result<(), String> {
            regions_checked += 1;
            if r.sup[s0] != r.sup[s4] {
                return Err(format!("{what} separates s0 and s4\n{}", ts.serialize()));
            }
            Ok(())
        };
        for &t in &types {
            for atom in atoms(&ts) {
                if let Some(r) = solve_atom(&ts, t, atom).unwrap() {
                    if let Err(e) = check(&r, &format!("solve_atom {t}")) {
                        return fail(e);
                    }
                }
            }
            for prop in [Property::Ssp, Property::Essp, Property::Both] {
                if let Ok(w) = decide_property(&ts, t, prop) {
                    for r in &w.regions {
                        if let Err(e) = check(r, &format!("witness {t}")) {
                            return fail(e);
                        }
                    }
                    pool.add(&ts, t, prop, w);
                }
            }
        }
    }
    pass(format!("200 systems, 16 types, {regions_checked} regions, 0 violations"))
}

fn every_event_everywhere(ts: &TransitionSystem) -> bool {
    (0..ts.num_states()).all(|s| (0..ts.num_events()).all(|e| ts.enabled(s, e)))
}

fn criterion_4(pool: &mut Witnesses) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let types = ["nop,swap", "nop,swap,set", "nop,swap,res", "nop,swap,set,res"].map(ty);
    let mut yes = 0;
    for k in 0..100 {
        let n = rng.gen_range(1..=8);
        let events = rng.gen_range(1..=3);
        let ts = if k % 2 == 0 {
            random_complete_ts(&mut rng, n, events)
        } else {
            let extra = rng.gen_range(0..=2 * n);
            random_ts(&mut rng, n, events, extra)
        };
        let expected = every_event_everywhere(&ts);
        for t in types {
            let got = decide_property(&ts, t, Property::Essp);
            if got.is_ok() != expected {
                return fail(format!("{t}: decided {}, expected {expected}\n{}", got.is_ok(), ts.serialize()));
            }
            if let Ok(w) = got {
                yes += 1;
                pool.add(&ts, t, Property::Essp, w);
            }
        }
    }
    pass(format!("100 systems x 4 types agree ({yes} separable)"))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let types = ["nop,swap,inp", "nop,swap,used", "nop,inp,swap"].map(ty);
    let mut compared = 0usize;
    for _ in 0..100 {
        let n = rng.gen_range(1..=6);
        let events = rng.gen_range(1..=3);
        let extra = rng.gen_range(0..=2 * n);
        let ts = random_ts(&mut rng, n, events, extra);
        for t in types {
            let all = brute_regions(&ts, t);
            for atom in atoms(&ts) {
                let expected = all.iter().any(|r| r.solves(atom));
                let got = solve_atom(&ts, t, atom).unwrap();
                let sound = got
                    .as_ref()
                    .is_none_or(|r| r.solves(atom) && validate_region(&ts, t, r).unwrap());
                if got.is_some() != expected || !sound {
                    return fail(format!("{t} {atom:?}: solver {}, enumeration {expected}\n{}", got.is_some(), ts.serialize()));
                }
                compared += 1;
            }
        }
    }
    pass(format!("{compared} atoms agree with enumeration"))
}

fn corpus() -> Vec<Graph3B> {
    let mut graphs = exhaustive_graphs(4, 4);
    assert_eq!(graphs.len(), 8, "isomorphism classes of small 3-bounded graphs");
    graphs.extend(random_graphs(&mut ChaCha8Rng::seed_from_u64(6), 20, 4, 4));
    graphs
}

/// `(variant, type, modes)` for each problem.
fn configs() -> Vec<(Variant, BooleanType, Vec<Mode>)> {
    vec![
        (Variant::Directed, ty("nop,swap,inp"), Mode::ALL.to_vec()),
        (Variant::Bidirectional, ty("nop,swap,used"), vec![Mode::LangSim, Mode::Realize]),
    ]
}

#[derive(Default)]
struct ReductionTally {
    instances: usize,
    yes: usize,
    failures: Vec<String>,
    slowest: Duration,
    sound: usize,
    unsound: Vec<String>,
}

fn run_reductions(problems: &[Kind], graphs: &[Graph3B], pool: &mut Witnesses) -> ReductionTally {
    let mut tally = ReductionTally::default();
    for g in graphs {
        for &problem in problems {
            for (variant, t, modes) in configs() {
                for &mode in &modes {
                    for lambda in 0..=g.vertices().len() {
                        let spec = GadgetSpec { problem, variant, lambda };
                        let label = format!("{} {problem} {variant} {mode} lambda {lambda}", g.name().unwrap_or("?"));
                        tally.instances += 1;
                        let budget = NodeBudget::new(NODE_CAP);
                        let start = Instant::now();
                        let report = check_equivalence(g, spec, t, mode, &budget);
                        let took = start.elapsed();
                        tally.slowest = tally.slowest.max(took);
                        let report = match report {
                            Ok(r) => r,
                            Err(e) => {
                                tally.failures.push(format!("{label}: {e}"));
                                continue;
                            }
                        };
                        if took > INSTANCE_CLOCK {
                            tally.failures.push(format!("{label}: took {took:?}"));
                        }
                        if !report.agrees() {
                            tally.failures.push(format!(
                                "{label}: cover {} but plan {}",
                                report.cover.is_some(),
                                report.plan.is_some()
                            ));
                        }
                        let prop = Property::for_mode(mode);
                        if let Some(plan) = &report.plan {
                            let b = apply_plan(&report.gadget, plan).expect("solver plans apply");
                            if let Ok(w) = decide_property(&b, t, prop) {
                                pool.add(&b, t, prop, w);
                            }
                        }
                        let Some(cover) = &report.cover else { continue };
                        tally.yes += 1;
                        // Soundness of the cover construction, rechecked step by step.
                        let plan = cover_to_solution(g, spec, cover).expect("cover from the oracle");
                        let applied = apply_plan(&report.gadget, &plan);
                        let witness = applied.as_ref().ok().map(|b| decide_property(b, t, prop));
                        match (plan.cost <= report.kappa, &applied, witness) {
                            (true, Ok(b), Some(Ok(w))) if report.cover_plan_ok == Some(true) => {
                                tally.sound += 1;
                                pool.add(b, t, prop, w);
                            }
                            (within, applied, w) => tally.unsound.push(format!(
                                "{label}: cost {} within {within}, valid {}, property {}",
                                plan.cost,
                                applied.is_ok(),
                                w.is_some_and(|w| w.is_ok())
                            )),
                        }
                    }
                }
            }
        }
    }
    tally
}

fn reduction_outcome(t: &ReductionTally) -> Outcome {
    let summary = format!(
        "{} instances, {} yes, slowest {:.2?}",
        t.instances, t.yes, t.slowest
    );
    if t.failures.is_empty() {
        pass(summary)
    } else {
        fail(format!("{summary}; {} failures, first: {}", t.failures.len(), t.failures[0]))
    }
}

fn soundness_outcome(tallies: &[&ReductionTally]) -> Outcome {
    let sound: usize = tallies.iter().map(|t| t.sound).sum();
    let yes: usize = tallies.iter().map(|t| t.yes).sum();
    match tallies.iter().flat_map(|t| &t.unsound).next() {
        None if sound == yes => pass(format!("{sound}/{yes} cover plans within budget and separable")),
        None => fail(format!("{sound}/{yes} cover plans checked")),
        Some(first) => fail(format!("{sound}/{yes} sound, first failure: {first}")),
    }
}

fn criterion_9() -> Outcome {
    let t = fixtures::nop_inp_swap();
    let b = fixtures::example_b_g();
    let regions = fixtures::decorated_regions();
    // Support-1 positions on each path T_0..T_4; every other state has support 0.
    let expected: [(&str, [&[usize]; 5]); 4] = [
        ("R_0", [&[1, 3], &[1, 3, 4], &[1, 2], &[0, 2], &[3, 4]]),
        ("R_1", [&[1, 3], &[0, 2], &[0, 3, 4], &[0, 2], &[0, 1, 2]]),
        ("R_2", [&[2, 4], &[0], &[2, 4], &[1, 2], &[2, 3]]),
        ("R_3", [&[0, 1, 2], &[0], &[0, 1, 2], &[], &[]]),
    ];
    for (f, (name, paths)) in regions.iter().zip(expected) {
        if f.name != name {
            return fail(format!("expected {name}, found {}", f.name));
        }
        let mut want = vec![false; b.num_states()];
        for (i, ones) in paths.iter().enumerate() {
            for p in *ones {
                want[b.state_id(&format!("t_{{{i},{p}}}")).unwrap()] = true;
            }
        }
        if f.region.sup != want {
            return fail(format!("{name}: supports differ\n{}", f.region.dump(&b)));
        }
        if !validate_region(&b, t, &f.region).unwrap() {
            return fail(format!("{name} is not a region"));
        }
        let e = b.event_id(f.event).unwrap();
        for s in 0..b.num_states() {
            if !b.enabled(s, e) && !f.region.sup[s] && !f.region.solves(Atom::Essp(e, s)) {
                return fail(format!("{name} misses ({},{})", f.event, b.state_name(s)));
            }
        }
    }
    // Each pair together excludes its event from every state where it is not enabled.
    for pair in regions.chunks(2) {
        let e = b.event_id(pair[0].event).unwrap();
        for s in 0..b.num_states() {
            if !b.enabled(s, e) && !pair.iter().any(|f| f.region.solves(Atom::Essp(e, s))) {
                return fail(format!("({},{}) unsolved by {} and {}", pair[0].event, b.state_name(s), pair[0].name, pair[1].name));
            }
        }
    }
    pass("R_0..R_3 validate and exclude v1 and v0")
}

fn criterion_10(pool: &Witnesses) -> Outcome {
    let mut failures = Vec::new();
    for (ts, t, mode, w) in &pool.items {
        let ok = net_from_witness(ts, *t, w)
            .ok()
            .is_some_and(|net| verify_implementation(ts, &net, *mode).unwrap_or(false));
        if !ok {
            failures.push(format!("{mode} {t}\n{}", ts.serialize()));
        }
    }
    let n = pool.items.len();
    match failures.first() {
        None => pass(format!("{n}/{n} witnesses synthesize to verified nets")),
        Some(first) => fail(format!("{}/{n} failed, first: {first}", failures.len())),
    }
}

#[test]
fn acceptance() {
    let mut pool = Witnesses::default();
    let mut results: Vec<(u8, &str, Outcome)> = Vec::new();
    let mut run = |no: u8, name: &'static str, limit: Option<Duration>, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = f();
        let o = match limit {
            Some(l) => within(o, start, l),
            None => within(o, start, Duration::MAX),
        };
        println!("criterion {no:>2}: {} {name}: {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
        results.push((no, name, o));
    };
    run(1, "worked example A/B", Some(Duration::from_secs(1)), &mut || criterion_1(&mut pool));
    run(2, "interaction table", Some(Duration::from_millis(1)), &mut criterion_2);
    run(3, "abab paths keep equal supports", Some(Duration::from_secs(30)), &mut || criterion_3(&mut pool));
    run(4, "nop/swap/set/res characterization", Some(Duration::from_secs(10)), &mut || criterion_4(&mut pool));
    run(5, "solver vs enumeration", Some(Duration::from_secs(60)), &mut criterion_5);
    let graphs = corpus();
    let mut split = ReductionTally::default();
    run(6, "split reduction equivalence", None, &mut || {
        split = run_reductions(&[Kind::Split], &graphs, &mut pool);
        reduction_outcome(&split)
    });
    let mut removal = ReductionTally::default();
    run(7, "removal reduction equivalence", None, &mut || {
        removal = run_reductions(&[Kind::Edge, Kind::Event, Kind::State], &graphs, &mut pool);
        reduction_outcome(&removal)
    });
    run(8, "cover plans are solutions", None, &mut || soundness_outcome(&[&split, &removal]));
    run(9, "fixture regions", Some(Duration::from_secs(1)), &mut criterion_9);
    run(10, "witnesses synthesize and verify", None, &mut || criterion_10(&pool));
    let failed: Vec<String> = results
        .iter()
        .filter(|r| !r.2.ok)
        .map(|r| format!("{} ({})", r.0, r.1))
        .collect();
    assert!(failed.is_empty(), "failed criteria: {}", failed.join(", "));
}
