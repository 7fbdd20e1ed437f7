//! Nets synthesized from witnesses, with round-trip verification.

use thiserror::Error;

use crate::net::{BooleanNet, NetError};
use crate::region::Atom;
use crate::separation::{decide_property, Property, Witness};
use crate::simulation::{check_relation, Mode};
use crate::ts::TransitionSystem;
use crate::types::BooleanType;

/// Cap on reachable markings explored during verification.
pub const VERIFY_MARKING_LIMIT: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthesisError {
    #[error("unsolvable atom {0}")]
    Unsolvable(String, Atom),
    #[error("synthesized net does not implement the system")]
    VerificationFailed,
    #[error(transparent)]
    Net(#[from] NetError),
}

#[derive(Debug, Clone)]
pub struct SynthesisResult {
    pub net: BooleanNet,
    pub witness: Witness,
    pub mode: Mode,
    pub verified: bool,
}

/// One place `R<k>` per region, one transition per event.
pub fn net_from_witness(ts: &TransitionSystem, ty: BooleanType, witness: &Witness) -> Result<BooleanNet, NetError> {
    let places = (1..=witness.regions.len()).map(|k| format!("R{k}")).collect();
    let transitions = ts.events().to_vec();
    let flow = (0..ts.num_events())
        .map(|e| witness.regions.iter().map(|r| r.sig[e]).collect())
        .collect();
    let m0 = witness.regions.iter().map(|r| r.sup[ts.initial()]).collect();
    BooleanNet::new(ts.name(), ty, places, transitions, flow, m0)
}

pub fn synthesize(ts: &TransitionSystem, ty: BooleanType, mode: Mode) -> Result<SynthesisResult, SynthesisError> {
    let witness = decide_property(ts, ty, Property::for_mode(mode))
        .map_err(|a| SynthesisError::Unsolvable(a.display(ts).to_string(), a))?;
    let net = net_from_witness(ts, ty, &witness)?;
    if !verify_implementation(ts, &net, mode)? {
        return Err(SynthesisError::VerificationFailed);
    }
    Ok(SynthesisResult {
        net,
        witness,
        mode,
        verified: true,
    })
}

/// Whether the reachability graph of `net` implements `ts` under `mode`.
///
/// Exploration is bounded by [`VERIFY_MARKING_LIMIT`] markings rather than by
/// place count, since synthesized nets often have many places but few markings.
pub fn verify_implementation(ts: &TransitionSystem, net: &BooleanNet, mode: Mode) -> Result<bool, NetError> {
    let rg = net.explore(VERIFY_MARKING_LIMIT)?;
    let mut ea: Vec<&String> = ts.events().iter().collect();
    let mut eb: Vec<&String> = rg.ts.events().iter().collect();
    ea.sort();
    eb.sort();
    if ea != eb {
        return Ok(false);
    }
    Ok(check_relation(ts, &rg.ts, mode)?)
}
