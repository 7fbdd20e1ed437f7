//! Small worked instances used by tests and the `fixtures` command.

use crate::modify::apply_plan;
use crate::net::BooleanNet;
use crate::reductions::{build_gadget, cover_to_solution, GadgetSpec, Graph3B, Variant};
use crate::region::{complete_region, Region};
use crate::ts::TransitionSystem;
use crate::types::{BooleanType, Interaction};
use crate::Kind;

pub const NAMES: [&str; 8] = ["A", "B", "N", "G", "A_G", "B_G", "type", "regions"];

pub fn nop_inp_swap() -> BooleanType {
    BooleanType::parse("nop,inp,swap").expect("valid type")
}

/// `t0 -a-> t1 -a-> t2`, not implementable for `nop,inp,swap`.
pub fn chain_a() -> TransitionSystem {
    TransitionSystem::parse("ts A\ninitial t0\narc t0 a t1\narc t1 a t2\n").expect("valid fixture")
}

/// `A` after splitting the second `a`.
pub fn split_b() -> TransitionSystem {
    TransitionSystem::parse("ts B\ninitial t0\narc t0 a t1\narc t1 a' t2\n").expect("valid fixture")
}

/// The two-place net whose reachability graph is `B`.
pub fn two_place_net() -> BooleanNet {
    BooleanNet::parse(
        "net N\ntype nop,inp,swap\nplace R1 1\nplace R2 0\ntrans a\ntrans a'\n\
         flow R1 a inp\nflow R2 a swap\nflow R2 a' inp\n",
        false,
    )
    .expect("valid fixture")
}

/// Five edges on four vertices; `{v0, v2}` is its only cover of size two.
pub fn example_graph() -> Graph3B {
    Graph3B::parse("graph G\nedge v0 v1\nedge v0 v2\nedge v0 v3\nedge v1 v2\nedge v2 v3\n").expect("valid fixture")
}

pub fn example_spec() -> GadgetSpec {
    GadgetSpec {
        problem: Kind::Split,
        variant: Variant::Directed,
        lambda: 2,
    }
}

pub fn example_a_g() -> TransitionSystem {
    build_gadget(&example_graph(), example_spec()).expect("valid fixture").0
}

/// The split gadget after applying the cover `{v0, v2}`.
pub fn example_b_g() -> TransitionSystem {
    let g = example_graph();
    let plan = cover_to_solution(&g, example_spec(), &[0, 2]).expect("cover");
    apply_plan(&example_a_g(), &plan).expect("valid plan").with_name(Some("B_G"))
}

/// A named region on `B_G` together with the vertex event it excludes.
pub struct DecoratedRegion {
    pub name: &'static str,
    pub event: &'static str,
    pub region: Region,
}

/// The four decorated regions on `B_G` that exclude `v1` and `v0`.
///
/// Each is given by its non-nop signature values; supports follow from
/// `sup(⊥_0) = 0`.
pub fn decorated_regions() -> Vec<DecoratedRegion> {
    use Interaction::{Inp, Swap};
    type Row = (&'static str, &'static str, &'static [(&'static str, Interaction)]);
    let table: [Row; 4] = [
        ("R_0", "v1", &[("v0'", Swap), ("v0", Swap), ("v1", Inp), ("v2", Swap), ("w_3", Swap)]),
        (
            "R_1",
            "v1",
            &[
                ("v0'", Swap),
                ("v0", Swap),
                ("v1", Inp),
                ("v2", Swap),
                ("w_1", Swap),
                ("w_2", Swap),
                ("w_3", Swap),
                ("w_4", Swap),
            ],
        ),
        ("R_2", "v0", &[("v0", Inp), ("v1", Swap), ("v3", Swap), ("w_1", Swap)]),
        ("R_3", "v0", &[("v0", Inp), ("w_0", Swap), ("w_1", Swap), ("w_2", Swap)]),
    ];
    let ts = example_b_g();
    table
        .iter()
        .map(|&(name, event, sigs)| {
            let mut sig = vec![Interaction::Nop; ts.num_events()];
            for &(e, i) in sigs {
                sig[ts.event_id(e).expect("fixture event")] = i;
            }
            let region = complete_region(&ts, nop_inp_swap(), false, &sig).expect("consistent fixture");
            DecoratedRegion { name, event, region }
        })
        .collect()
}

/// Text of the fixture called `name`, in the matching file format.
pub fn render(name: &str) -> Option<String> {
    Some(match name {
        "A" => chain_a().serialize(),
        "B" => split_b().serialize(),
        "N" => two_place_net().serialize(),
        "G" => example_graph().serialize(),
        "A_G" => example_a_g().serialize(),
        "B_G" => example_b_g().serialize(),
        "type" => format!("{}\n", nop_inp_swap()),
        "regions" => {
            let ts = example_b_g();
            decorated_regions()
                .iter()
                .map(|f| format!("# {} excludes {}\n{}", f.name, f.event, f.region.dump(&ts)))
                .collect()
        }
        _ => return None,
    })
}
