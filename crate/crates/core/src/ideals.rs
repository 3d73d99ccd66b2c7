//! Invariant saturated ideals of the vertex algebra `C^{N0}` and the quotient
//! systems they define.
//!
//! An ideal is the span of `{E_i : i in W}` for a vertex subset `W`. It is
//! invariant when `W` is forward-closed under every symbol, and saturated
//! when every vertex whose whole out-neighborhood lies in `W` is itself in
//! `W`. Invariant saturated ideals are in inclusion-preserving bijection with
//! the gauge-invariant ideals of the crossed product.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Edge, GraphError, LabeledGraph};
use crate::subshift::SupportSet;

pub const DEFAULT_IDEAL_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("vertex count {vertices} exceeds enumeration cap {cap}")]
    CapExceeded { vertices: usize, cap: usize },
    #[error("vertex set is not invariant and saturated")]
    NotInvariantSaturated,
    #[error("quotient by the full vertex set is the zero system")]
    FullIdeal,
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdealSubset {
    pub vertices: SupportSet,
    pub invariant: bool,
    pub saturated: bool,
}

impl IdealSubset {
    pub fn is_invariant_saturated(&self) -> bool {
        self.invariant && self.saturated
    }
}

pub fn is_forward_closed(g: &LabeledGraph, w: &SupportSet) -> bool {
    w.vertices()
        .iter()
        .all(|&v| g.out_edges(v).all(|e| w.contains(e.target)))
}

/// Vertices outside `w` whose entire out-neighborhood is inside `w`.
fn saturation_defects(g: &LabeledGraph, w: &SupportSet) -> Vec<usize> {
    (0..g.vertex_count())
        .filter(|&v| !w.contains(v) && g.out_edges(v).all(|e| w.contains(e.target)))
        .collect()
}

pub fn is_saturated(g: &LabeledGraph, w: &SupportSet) -> bool {
    saturation_defects(g, w).is_empty()
}

/// Smallest saturated superset of `w`.
pub fn saturate(g: &LabeledGraph, w: &SupportSet) -> SupportSet {
    let mut current = w.clone();
    loop {
        let add = saturation_defects(g, &current);
        if add.is_empty() {
            return current;
        }
        current = current.union(&SupportSet::from_iter_unsorted(add));
    }
}

pub fn classify_subset(g: &LabeledGraph, w: &SupportSet) -> Result<IdealSubset, IdealError> {
    if let Some(&v) = w.vertices().iter().find(|&&v| v >= g.vertex_count()) {
        return Err(IdealError::VertexOutOfRange(v));
    }
    Ok(IdealSubset {
        vertices: w.clone(),
        invariant: is_forward_closed(g, w),
        saturated: is_saturated(g, w),
    })
}

/// All invariant saturated vertex sets, by size and then lexicographically.
/// Always contains the empty set and the full vertex set.
pub fn enumerate_invariant_saturated(
    g: &LabeledGraph,
    cap: usize,
) -> Result<Vec<IdealSubset>, IdealError> {
    let n = g.vertex_count();
    if n > cap || n >= usize::BITS as usize {
        return Err(IdealError::CapExceeded { vertices: n, cap });
    }
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << n) {
        let w = SupportSet::from_iter_unsorted((0..n).filter(|&v| mask >> v & 1 == 1));
        let c = classify_subset(g, &w)?;
        if c.is_invariant_saturated() {
            out.push(c);
        }
    }
    out.sort_by(|a, b| {
        a.vertices
            .len()
            .cmp(&b.vertices.len())
            .then_with(|| a.vertices.cmp(&b.vertices))
    });
    Ok(out)
}

/// Covering pairs `(i, j)` of the inclusion order on `ideals`: `ideals[i]` is
/// strictly inside `ideals[j]` with nothing in between.
pub fn hasse_edges(ideals: &[IdealSubset]) -> Vec<(usize, usize)> {
    let below = |a: usize, b: usize| {
        a != b
            && ideals[a].vertices.is_subset(&ideals[b].vertices)
            && ideals[a].vertices != ideals[b].vertices
    };
    let mut out = Vec::new();
    for i in 0..ideals.len() {
        for j in 0..ideals.len() {
            if below(i, j) && !(0..ideals.len()).any(|k| below(i, k) && below(k, j)) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Restriction of the graph to the vertices outside the ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientSystem {
    pub vertices: Vec<String>,
    /// Symbols that still label a surviving edge, in original order.
    pub surviving_alphabet: Vec<String>,
    /// `(source, target, label)` by name.
    pub edges: Vec<(String, String, String)>,
    pub graph: Result<LabeledGraph, GraphError>,
}

impl QuotientSystem {
    pub fn is_valid(&self) -> bool {
        self.graph.is_ok()
    }
}

pub fn quotient_system(g: &LabeledGraph, w: &SupportSet) -> Result<QuotientSystem, IdealError> {
    let c = classify_subset(g, w)?;
    if !c.is_invariant_saturated() {
        return Err(IdealError::NotInvariantSaturated);
    }
    if w.len() == g.vertex_count() {
        return Err(IdealError::FullIdeal);
    }
    let keep: Vec<usize> = (0..g.vertex_count()).filter(|&v| !w.contains(v)).collect();
    let new_index = |v: usize| keep.binary_search(&v).ok();
    let mut used = vec![false; g.symbol_count()];
    let mut kept_edges = Vec::new();
    for e in g.edges() {
        if let (Some(s), Some(t)) = (new_index(e.source), new_index(e.target)) {
            used[e.label] = true;
            kept_edges.push((s, t, e.label));
        }
    }
    let symbols: Vec<usize> = (0..g.symbol_count()).filter(|&a| used[a]).collect();
    let vertices: Vec<String> = keep.iter().map(|&v| g.vertex_name(v).to_string()).collect();
    let surviving_alphabet: Vec<String> = symbols
        .iter()
        .map(|&a| g.symbol_name(a).to_string())
        .collect();
    let edges_idx: Vec<Edge> = kept_edges
        .iter()
        .map(|&(source, target, label)| Edge {
            source,
            target,
            label: symbols.binary_search(&label).expect("used symbol"),
        })
        .collect();
    let edges = kept_edges
        .iter()
        .map(|&(s, t, a)| {
            (
                vertices[s].clone(),
                vertices[t].clone(),
                g.symbol_name(a).to_string(),
            )
        })
        .collect();
    let graph = LabeledGraph::from_parts(vertices.clone(), surviving_alphabet.clone(), edges_idx);
    Ok(QuotientSystem {
        vertices,
        surviving_alphabet,
        edges,
        graph,
    })
}
