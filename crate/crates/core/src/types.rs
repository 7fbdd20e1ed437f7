//! Boolean interactions and Boolean types.
//!
//! An interaction is a partial function on `{0,1}`. A type is a nonempty set of
//! interactions, stored as a bitmask over [`Interaction::ALL`].

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("unknown interaction `{0}`")]
    UnknownInteraction(String),
    #[error("empty type")]
    EmptyType,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Interaction {
    Nop,
    Inp,
    Out,
    Set,
    Res,
    Swap,
    Used,
    Free,
}

impl Interaction {
    /// Canonical order, also used for display and type strings.
    pub const ALL: [Interaction; 8] = [
        Interaction::Nop,
        Interaction::Inp,
        Interaction::Out,
        Interaction::Set,
        Interaction::Res,
        Interaction::Swap,
        Interaction::Used,
        Interaction::Free,
    ];

    /// Order in which solvers try signature values.
    pub const BRANCHING: [Interaction; 8] = [
        Interaction::Nop,
        Interaction::Swap,
        Interaction::Inp,
        Interaction::Out,
        Interaction::Used,
        Interaction::Free,
        Interaction::Set,
        Interaction::Res,
    ];

    pub fn apply(self, x: bool) -> Option<bool> {
        use Interaction::*;
        match (self, x) {
            (Nop, x) => Some(x),
            (Inp, true) => Some(false),
            (Inp, false) => None,
            (Out, false) => Some(true),
            (Out, true) => None,
            (Set, _) => Some(true),
            (Res, _) => Some(false),
            (Swap, x) => Some(!x),
            (Used, true) => Some(true),
            (Used, false) => None,
            (Free, false) => Some(false),
            (Free, true) => None,
        }
    }

    pub fn is_defined(self, x: bool) -> bool {
        self.apply(x).is_some()
    }

    /// True when the inverse relation of `apply` is again a partial function.
    pub fn has_functional_inverse(self) -> bool {
        !matches!(self, Interaction::Set | Interaction::Res)
    }

    /// Value whose image is `y`, when unique.
    pub fn preimage(self, y: bool) -> Option<bool> {
        let mut found = None;
        for x in [false, true] {
            if self.apply(x) == Some(y) {
                if found.is_some() {
                    return None;
                }
                found = Some(x);
            }
        }
        found
    }

    pub fn name(self) -> &'static str {
        use Interaction::*;
        match self {
            Nop => "nop",
            Inp => "inp",
            Out => "out",
            Set => "set",
            Res => "res",
            Swap => "swap",
            Used => "used",
            Free => "free",
        }
    }

    pub(crate) fn index(self) -> usize {
        self as usize
    }

    pub(crate) fn bit(self) -> u8 {
        1 << self.index()
    }

    /// The interaction obtained by complementing the bit on both sides.
    pub fn complement(self) -> Interaction {
        use Interaction::*;
        match self {
            Inp => Out,
            Out => Inp,
            Set => Res,
            Res => Set,
            Used => Free,
            Free => Used,
            other => other,
        }
    }
}

impl fmt::Display for Interaction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Interaction {
    type Err = TypeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Interaction::ALL
            .iter()
            .copied()
            .find(|i| i.name() == s)
            .ok_or_else(|| TypeError::UnknownInteraction(s.to_string()))
    }
}

/// A nonempty set of interactions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BooleanType {
    mask: u8,
}

impl BooleanType {
    pub fn new<I: IntoIterator<Item = Interaction>>(members: I) -> Result<Self, TypeError> {
        let mask = members.into_iter().fold(0u8, |m, i| m | i.bit());
        if mask == 0 {
            return Err(TypeError::EmptyType);
        }
        Ok(BooleanType { mask })
    }

    pub fn parse(spec: &str) -> Result<Self, TypeError> {
        let mut members = Vec::new();
        for tag in spec.split(',') {
            let tag = tag.trim();
            if tag.is_empty() {
                continue;
            }
            members.push(tag.parse::<Interaction>()?);
        }
        BooleanType::new(members)
    }

    pub fn contains(&self, i: Interaction) -> bool {
        self.mask & i.bit() != 0
    }

    pub fn mask(&self) -> u8 {
        self.mask
    }

    pub fn members(&self) -> impl Iterator<Item = Interaction> + '_ {
        Interaction::ALL.into_iter().filter(|i| self.contains(*i))
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn has_set_or_res(&self) -> bool {
        self.contains(Interaction::Set) || self.contains(Interaction::Res)
    }

    pub fn has_inp_or_out(&self) -> bool {
        self.contains(Interaction::Inp) || self.contains(Interaction::Out)
    }

    /// True when some member is undefined somewhere, i.e. ESSP atoms can be solved at all.
    pub fn has_partial(&self) -> bool {
        self.members().any(|i| !i.is_defined(false) || !i.is_defined(true))
    }

    /// Edges `x -i-> i(x)` of the type graph on `{0,1}`.
    pub fn type_ts(&self) -> TypeGraph {
        let mut edges = Vec::new();
        for i in self.members() {
            for x in [false, true] {
                if let Some(y) = i.apply(x) {
                    edges.push((x, i, y));
                }
            }
        }
        TypeGraph { edges }
    }
}

impl fmt::Display for BooleanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.members().map(Interaction::name).collect();
        f.write_str(&names.join(","))
    }
}

impl FromStr for BooleanType {
    type Err = TypeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BooleanType::parse(s)
    }
}

/// The type viewed as a graph on the two bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeGraph {
    pub edges: Vec<(bool, Interaction, bool)>,
}

impl TypeGraph {
    pub fn has_edge(&self, x: bool, i: Interaction, y: bool) -> bool {
        self.edges.contains(&(x, i, y))
    }
}
