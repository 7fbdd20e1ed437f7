mod common;

use boolnet::modify::decide_with;
use boolnet::reductions::{brute_force_vc, build_gadget, cover_to_solution, GadgetSpec, Graph3B, Variant};
use boolnet::{
    apply_plan, decide_property, induced_simulation, synthesize, validate_region, verify_implementation, BooleanNet,
    BooleanType, Interaction, Kind, ModificationPlan, Mode, NodeBudget, Property, SimulationKind, TransitionSystem,
};
use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_ts(seed: u64, n: usize, events: usize, extra: usize) -> TransitionSystem {
    random_ts(&mut ChaCha8Rng::seed_from_u64(seed), n, events, extra)
}

fn type_from_mask(mask: u8) -> BooleanType {
    BooleanType::new(Interaction::ALL.into_iter().filter(|i| mask & (1 << (*i as u8)) != 0))
        .unwrap_or_else(|_| BooleanType::parse("nop").unwrap())
}

fn random_net(seed: u64, places: usize, transitions: usize, ty: BooleanType) -> BooleanNet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let members: Vec<Interaction> = ty.members().collect();
    let flow = (0..transitions)
        .map(|_| (0..places).map(|_| members[rng.gen_range(0..members.len())]).collect())
        .collect();
    let m0 = (0..places).map(|_| rng.gen()).collect();
    BooleanNet::new(
        Some("N"),
        ty,
        (0..places).map(|p| format!("p{p}")).collect(),
        (0..transitions).map(|t| format!("t{t}")).collect(),
        flow,
        m0,
    )
    .unwrap()
}

/// The same system with every state renamed.
fn renamed(ts: &TransitionSystem) -> TransitionSystem {
    let arcs = ts
        .named_arcs()
        .into_iter()
        .map(|(s, e, d)| (format!("{s}x"), e, format!("{d}x")));
    let init = format!("{}x", ts.state_name(ts.initial()));
    TransitionSystem::from_arcs(None, &init, arcs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ts_text_round_trips(seed: u64, n in 1usize..8, events in 1usize..4, extra in 0usize..10) {
        let ts = small_ts(seed, n, events, extra);
        prop_assert_eq!(TransitionSystem::parse(&ts.serialize()).unwrap(), ts);
    }

    #[test]
    fn net_text_round_trips_and_realizes_its_graph(
        seed: u64, places in 0usize..5, transitions in 1usize..4, mask in 1u8..=255
    ) {
        let ty = type_from_mask(mask);
        let net = random_net(seed, places, transitions, ty);
        prop_assert_eq!(BooleanNet::parse(&net.serialize(), true).unwrap(), net.clone());
        let rg = net.reachability_graph().unwrap();
        if rg.dead.is_empty() {
            prop_assert!(verify_implementation(&rg.ts, &net, Mode::Realize).unwrap());
        }
    }

    /// A reachability graph always has both properties for the net's type.
    #[test]
    fn reachability_graphs_are_separable(seed: u64, places in 1usize..4, transitions in 1usize..4, mask in 1u8..=255) {
        let ty = type_from_mask(mask);
        let rg = random_net(seed, places, transitions, ty).reachability_graph().unwrap();
        prop_assert!(decide_property(&rg.ts, ty, Property::Both).is_ok());
    }

    #[test]
    fn self_simulation_is_identity(seed: u64, n in 1usize..8, events in 1usize..4, extra in 0usize..10) {
        let ts = small_ts(seed, n, events, extra);
        let sim = induced_simulation(&ts, &renamed(&ts)).unwrap().unwrap();
        prop_assert_eq!(sim.kind, SimulationKind::Isomorphism);
        prop_assert_eq!(sim.mapping, (0..ts.num_states()).collect::<Vec<_>>());
    }

    #[test]
    fn complement_regions_are_regions(seed: u64, n in 1usize..6, events in 1usize..3, extra in 0usize..6, mask in 1u8..=255) {
        let ts = small_ts(seed, n, events, extra);
        let ty = type_from_mask(mask);
        let co = BooleanType::new(ty.members().map(Interaction::complement)).unwrap();
        for r in brute_regions(&ts, ty) {
            prop_assert!(validate_region(&ts, co, &r.complement()).unwrap());
        }
    }

    #[test]
    fn synthesis_verifies_when_separable(seed: u64, n in 1usize..7, events in 1usize..4, extra in 0usize..8, mask in 1u8..=255) {
        let ts = small_ts(seed, n, events, extra);
        let ty = type_from_mask(mask);
        for mode in Mode::ALL {
            let separable = decide_property(&ts, ty, Property::for_mode(mode)).is_ok();
            let r = synthesize(&ts, ty, mode);
            prop_assert_eq!(r.is_ok(), separable);
            if let Ok(r) = r {
                prop_assert!(r.verified);
                prop_assert!(verify_implementation(&ts, &r.net, mode).unwrap());
            }
        }
    }

    /// Raising the budget never changes a found minimum.
    #[test]
    fn decide_is_monotone_in_budget(seed: u64, n in 2usize..5, events in 1usize..3, extra in 0usize..4, k in 0usize..4) {
        let ts = small_ts(seed, n, events, extra);
        let ty = BooleanType::parse("nop,inp,swap").unwrap();
        for kind in Kind::ALL {
            let base = if kind == Kind::Split { ts.num_events() } else { 0 };
            let at = |kappa| decide_with(&ts, ty, kind, Mode::Realize, kappa, &NodeBudget::unlimited()).unwrap();
            let lo = at(base + k);
            let hi = at(base + k + 1);
            match (&lo, &hi) {
                (Some(a), Some(b)) => prop_assert_eq!(a.cost, b.cost),
                (None, Some(b)) => prop_assert_eq!(b.cost, base + k + 1),
                (Some(_), None) => prop_assert!(false, "larger budget lost the plan"),
                (None, None) => {}
            }
        }
    }

    #[test]
    fn plan_text_round_trips(seed: u64, n in 2usize..5, events in 1usize..3, extra in 0usize..4) {
        let ts = small_ts(seed, n, events, extra);
        for kind in Kind::ALL {
            for plan in all_plans(&ts, kind, ts.num_events() + 2) {
                prop_assert_eq!(ModificationPlan::parse(&ts, &plan.dump(&ts)).unwrap(), plan);
            }
        }
    }

    #[test]
    fn gadgets_are_valid_and_covers_apply(seed: u64) {
        let g = random_graphs(&mut ChaCha8Rng::seed_from_u64(seed), 1, 5, 6).remove(0);
        prop_assert_eq!(Graph3B::parse(&g.serialize()).unwrap(), g.clone());
        let n = g.vertices().len();
        for problem in Kind::ALL {
            for variant in [Variant::Directed, Variant::Bidirectional] {
                for lambda in 0..=n {
                    let spec = GadgetSpec { problem, variant, lambda };
                    let (a, _) = build_gadget(&g, spec).unwrap();
                    prop_assert_eq!(TransitionSystem::parse(&a.serialize()).unwrap(), a.clone());
                    if let Some(cover) = brute_force_vc(&g, lambda) {
                        let plan = cover_to_solution(&g, spec, &cover).unwrap();
                        prop_assert!(apply_plan(&a, &plan).is_ok());
                    }
                }
                let spec = GadgetSpec { problem, variant, lambda: n + 1 };
                prop_assert!(build_gadget(&g, spec).is_err());
            }
        }
    }
}
