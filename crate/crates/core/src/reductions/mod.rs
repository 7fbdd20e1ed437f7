//! Vertex cover on graphs of degree at most three, and the gadget systems that
//! reduce it to the modification problems.

mod gadget;

use std::collections::HashMap;
use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::budget::{NodeBudget, SearchBudgetExceeded};
use crate::modify::{apply_plan, decide_with, Kind, ModificationPlan};
use crate::separation::{decide_property, Property};
use crate::simulation::Mode;
use crate::ts::{valid_identifier, TransitionSystem};
use crate::types::{BooleanType, Interaction};

pub use gadget::{build_gadget, cover_to_solution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("lambda {lambda} exceeds the vertex count {n}")]
    LambdaOutOfRange { lambda: usize, n: usize },
    #[error("not a vertex cover: edge {{{0},{1}}} is uncovered")]
    NotACover(String, String),
    #[error("cover of size {size} exceeds lambda {lambda}")]
    CoverTooLarge { size: usize, lambda: usize },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

/// A graph in which every vertex lies on one to three edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph3B {
    name: Option<String>,
    vertices: Vec<String>,
    /// Vertex index pairs `(i0, i1)` with `i0 < i1`.
    edges: Vec<(usize, usize)>,
}

impl Graph3B {
    pub fn new(name: Option<&str>, vertices: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self, ReductionError> {
        let bad = |m: String| ReductionError::InvalidGraph(m);
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if !valid_identifier(v) {
                return Err(bad(format!("bad vertex name `{v}`")));
            }
            if index.insert(v.as_str(), i).is_some() {
                return Err(bad(format!("duplicate vertex `{v}`")));
            }
        }
        let mut degree = vec![0usize; vertices.len()];
        let mut norm = Vec::with_capacity(edges.len());
        for &(u, v) in &edges {
            if u >= vertices.len() || v >= vertices.len() {
                return Err(bad(format!("edge ({u},{v}) out of range")));
            }
            if u == v {
                return Err(bad(format!("self-loop at `{}`", vertices[u])));
            }
            let e = (u.min(v), u.max(v));
            if norm.contains(&e) {
                return Err(bad(format!("duplicate edge {{{},{}}}", vertices[u], vertices[v])));
            }
            norm.push(e);
            degree[u] += 1;
            degree[v] += 1;
        }
        for (v, d) in vertices.iter().zip(&degree) {
            if *d == 0 || *d > 3 {
                return Err(bad(format!("vertex `{v}` lies on {d} edges")));
            }
        }
        Ok(Graph3B {
            name: name.map(str::to_string),
            vertices,
            edges: norm,
        })
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_cover(&self, cover: &[usize]) -> bool {
        self.uncovered(cover).is_none()
    }

    fn uncovered(&self, cover: &[usize]) -> Option<(usize, usize)> {
        self.edges
            .iter()
            .copied()
            .find(|(u, v)| !cover.contains(u) && !cover.contains(v))
    }

    /// Parses `graph`, `vertex` and `edge` lines. Vertices not declared are
    /// added in order of first mention.
    pub fn parse(text: &str) -> Result<Self, ReductionError> {
        let mut name = None;
        let mut vertices: Vec<String> = Vec::new();
        let mut edges = Vec::new();
        let index = |vs: &mut Vec<String>, v: &str| match vs.iter().position(|x| x == v) {
            Some(i) => i,
            None => {
                vs.push(v.to_string());
                vs.len() - 1
            }
        };
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                [] => {}
                ["graph", n] => name = Some(n.to_string()),
                ["vertex", v] => {
                    if vertices.iter().any(|x| x == v) {
                        return Err(ReductionError::InvalidGraph(format!("duplicate vertex `{v}`")));
                    }
                    vertices.push(v.to_string());
                }
                ["edge", u, v] => {
                    let u = index(&mut vertices, u);
                    let v = index(&mut vertices, v);
                    edges.push((u, v));
                }
                _ => {
                    return Err(ReductionError::Syntax {
                        line: no + 1,
                        message: format!("cannot parse `{}`", line.trim()),
                    })
                }
            }
        }
        Graph3B::new(name.as_deref(), vertices, edges)
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        if let Some(n) = &self.name {
            let _ = writeln!(out, "graph {n}");
        }
        for v in &self.vertices {
            let _ = writeln!(out, "vertex {v}");
        }
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "edge {} {}", self.vertices[u], self.vertices[v]);
        }
        out
    }
}

/// Smallest vertex cover of size at most `lambda`, lexicographically least among
/// the smallest, or `None`.
pub fn brute_force_vc(g: &Graph3B, lambda: usize) -> Option<Vec<usize>> {
    let n = g.vertices.len();
    for size in 0..=lambda.min(n) {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            if g.is_cover(&combo) {
                return Some(combo);
            }
            // Next combination in lexicographic order.
            let mut i = size;
            while i > 0 && combo[i - 1] == n - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            combo[i - 1] += 1;
            for j in i..size {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Directed,
    /// Every arc paired with a reverse arc carrying the same label.
    Bidirectional,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Directed => "directed",
            Variant::Bidirectional => "bidirectional",
        }
    }

    pub fn parse(s: &str) -> Option<Variant> {
        match s {
            "directed" => Some(Variant::Directed),
            "bidirectional" => Some(Variant::Bidirectional),
            _ => None,
        }
    }

    /// Bidirectional gadgets are needed when the only partial interactions are
    /// used and free and the ESSP is required.
    pub fn for_type(ty: BooleanType, mode: Mode) -> Variant {
        let uses_test = ty.contains(Interaction::Used) || ty.contains(Interaction::Free);
        if mode != Mode::Embed && !ty.has_inp_or_out() && uses_test {
            Variant::Bidirectional
        } else {
            Variant::Directed
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GadgetSpec {
    pub problem: Kind,
    pub variant: Variant,
    pub lambda: usize,
}

#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub gadget: TransitionSystem,
    pub kappa: usize,
    pub cover: Option<Vec<usize>>,
    pub plan: Option<ModificationPlan>,
    /// Whether the plan built from the cover is within budget and yields the property.
    pub cover_plan_ok: Option<bool>,
}

impl EquivalenceReport {
    pub fn agrees(&self) -> bool {
        self.cover.is_some() == self.plan.is_some()
    }
}

/// Compares the vertex-cover answer with the modification solver on the gadget.
pub fn check_equivalence(
    g: &Graph3B,
    spec: GadgetSpec,
    ty: BooleanType,
    mode: Mode,
    budget: &NodeBudget,
) -> Result<EquivalenceReport, SearchBudgetExceeded> {
    let (gadget, kappa) = build_gadget(g, spec).expect("lambda checked by the caller");
    let cover = brute_force_vc(g, spec.lambda);
    let plan = decide_with(&gadget, ty, spec.problem, mode, kappa, budget)?;
    let cover_plan_ok = cover.as_ref().map(|c| {
        cover_to_solution(g, spec, c).is_ok_and(|p| {
            p.cost <= kappa
                && apply_plan(&gadget, &p)
                    .is_ok_and(|b| decide_property(&b, ty, Property::for_mode(mode)).is_ok())
        })
    });
    Ok(EquivalenceReport {
        gadget,
        kappa,
        cover,
        plan,
        cover_plan_ok,
    })
}
