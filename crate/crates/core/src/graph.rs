//! Finite left-resolving labeled graphs and their symbol matrices.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Incoming,
    Outgoing,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Incoming => "incoming",
            Direction::Outgoing => "outgoing",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind")]
pub enum GraphError {
    #[error("graph has no vertices or no symbols")]
    EmptyGraph,
    #[error("duplicate vertex `{vertex}`")]
    DuplicateVertex { vertex: String },
    #[error("duplicate symbol `{symbol}`")]
    DuplicateSymbol { symbol: String },
    #[error("edge {edge} refers to unknown vertex `{vertex}`")]
    UnknownVertex { edge: usize, vertex: String },
    #[error("edge {edge} refers to unknown symbol `{symbol}`")]
    UnknownSymbol { edge: usize, symbol: String },
    #[error("edges {first} and {second} are identical ({source_vertex} -> {target} : {symbol})")]
    DuplicateEdge {
        first: usize,
        second: usize,
        source_vertex: String,
        target: String,
        symbol: String,
    },
    #[error("not left-resolving: edges {first} and {second} both enter `{vertex}` with label `{symbol}`")]
    NotLeftResolving {
        vertex: String,
        symbol: String,
        first: usize,
        second: usize,
    },
    #[error("not essential: vertex `{vertex}` has no {missing} edge")]
    NotEssential { vertex: String, missing: Direction },
    #[error("symbol `{symbol}` labels no edge")]
    UnusedSymbol { symbol: String },
}

/// An unvalidated graph description, referencing vertices and symbols by name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawGraph {
    pub vertices: Vec<String>,
    pub alphabet: Vec<String>,
    pub edges: Vec<(String, String, String)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub label: usize,
}

/// A validated labeled graph: left-resolving, essential, every symbol used.
///
/// Vertices and symbols are indexed by declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    vertices: Vec<String>,
    alphabet: Vec<String>,
    edges: Vec<Edge>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
}

pub fn validate_graph(raw: &RawGraph) -> Result<LabeledGraph, GraphError> {
    if raw.vertices.is_empty() || raw.alphabet.is_empty() {
        return Err(GraphError::EmptyGraph);
    }
    let mut seen = BTreeSet::new();
    for v in &raw.vertices {
        if !seen.insert(v.as_str()) {
            return Err(GraphError::DuplicateVertex { vertex: v.clone() });
        }
    }
    let mut seen = BTreeSet::new();
    for s in &raw.alphabet {
        if !seen.insert(s.as_str()) {
            return Err(GraphError::DuplicateSymbol { symbol: s.clone() });
        }
    }
    let vertex_index = |edge: usize, name: &str| {
        raw.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| GraphError::UnknownVertex {
                edge,
                vertex: name.to_string(),
            })
    };
    let mut edges = Vec::with_capacity(raw.edges.len());
    for (k, (src, dst, sym)) in raw.edges.iter().enumerate() {
        let source = vertex_index(k, src)?;
        let target = vertex_index(k, dst)?;
        let label = raw.alphabet.iter().position(|s| s == sym).ok_or_else(|| {
            GraphError::UnknownSymbol {
                edge: k,
                symbol: sym.clone(),
            }
        })?;
        edges.push(Edge {
            source,
            target,
            label,
        });
    }
    LabeledGraph::from_parts(raw.vertices.clone(), raw.alphabet.clone(), edges)
}

impl LabeledGraph {
    /// Builds from index-based edges, checking every graph invariant.
    pub fn from_parts(
        vertices: Vec<String>,
        alphabet: Vec<String>,
        edges: Vec<Edge>,
    ) -> Result<Self, GraphError> {
        let n = vertices.len();
        if n == 0 || alphabet.is_empty() {
            return Err(GraphError::EmptyGraph);
        }
        assert!(
            edges
                .iter()
                .all(|e| e.source < n && e.target < n && e.label < alphabet.len()),
            "edge index out of range"
        );

        let mut first_seen = std::collections::HashMap::new();
        for (k, e) in edges.iter().enumerate() {
            if let Some(&j) = first_seen.get(e) {
                return Err(GraphError::DuplicateEdge {
                    first: j,
                    second: k,
                    source_vertex: vertices[e.source].clone(),
                    target: vertices[e.target].clone(),
                    symbol: alphabet[e.label].clone(),
                });
            }
            first_seen.insert(*e, k);
        }

        // (target, label) -> first edge index
        let mut entering = std::collections::HashMap::new();
        for (k, e) in edges.iter().enumerate() {
            if let Some(&j) = entering.get(&(e.target, e.label)) {
                return Err(GraphError::NotLeftResolving {
                    vertex: vertices[e.target].clone(),
                    symbol: alphabet[e.label].clone(),
                    first: j,
                    second: k,
                });
            }
            entering.insert((e.target, e.label), k);
        }

        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        for (k, e) in edges.iter().enumerate() {
            out_edges[e.source].push(k);
            in_edges[e.target].push(k);
        }
        for v in 0..n {
            if in_edges[v].is_empty() {
                return Err(GraphError::NotEssential {
                    vertex: vertices[v].clone(),
                    missing: Direction::Incoming,
                });
            }
            if out_edges[v].is_empty() {
                return Err(GraphError::NotEssential {
                    vertex: vertices[v].clone(),
                    missing: Direction::Outgoing,
                });
            }
        }
        let mut used = vec![false; alphabet.len()];
        for e in &edges {
            used[e.label] = true;
        }
        if let Some(s) = used.iter().position(|u| !u) {
            return Err(GraphError::UnusedSymbol {
                symbol: alphabet[s].clone(),
            });
        }

        Ok(Self {
            vertices,
            alphabet,
            edges,
            out_edges,
            in_edges,
        })
    }

    /// Single vertex `v` with one loop per symbol.
    pub fn full_shift(symbols: &[&str]) -> Self {
        let edges = (0..symbols.len())
            .map(|label| Edge {
                source: 0,
                target: 0,
                label,
            })
            .collect();
        Self::from_parts(
            vec!["v".to_string()],
            symbols.iter().map(|s| s.to_string()).collect(),
            edges,
        )
        .expect("full shift is always valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn symbol_count(&self) -> usize {
        self.alphabet.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn symbol_name(&self, s: usize) -> &str {
        &self.alphabet[s]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        self.alphabet.iter().position(|s| s == name)
    }

    /// Edges leaving `v`, as indices into [`Self::edges`].
    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = &Edge> + '_ {
        self.out_edges[v].iter().map(move |&k| &self.edges[k])
    }

    pub fn in_edges(&self, v: usize) -> impl Iterator<Item = &Edge> + '_ {
        self.in_edges[v].iter().map(move |&k| &self.edges[k])
    }

    pub fn out_edge_indices(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_edges[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_edges[v].len()
    }

    pub fn to_raw(&self) -> RawGraph {
        RawGraph {
            vertices: self.vertices.clone(),
            alphabet: self.alphabet.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| {
                    (
                        self.vertices[e.source].clone(),
                        self.vertices[e.target].clone(),
                        self.alphabet[e.label].clone(),
                    )
                })
                .collect(),
        }
    }

    pub fn symbol_matrices(&self) -> SymbolMatrixFamily {
        let n = self.vertex_count();
        let mut per_symbol = vec![vec![0u8; n * n]; self.symbol_count()];
        let mut adjacency = vec![0u32; n * n];
        for e in &self.edges {
            per_symbol[e.label][e.source * n + e.target] = 1;
            adjacency[e.source * n + e.target] += 1;
        }
        SymbolMatrixFamily {
            size: n,
            per_symbol,
            adjacency,
        }
    }

    pub fn pair_graph(&self) -> PairGraph {
        let n = self.vertex_count();
        let mut edges = Vec::new();
        for u in 0..n {
            for u2 in 0..n {
                for e in self.out_edges(u) {
                    for f in self.out_edges(u2) {
                        edges.push(PairEdge {
                            from: (u, u2),
                            to: (e.target, f.target),
                            labels_equal: e.label == f.label,
                        });
                    }
                }
            }
        }
        PairGraph {
            vertex_count: n,
            edges,
        }
    }
}

/// The 0/1 matrices `M_a(i, j)` (an `a`-labeled edge `i -> j` exists) and
/// their sum, the adjacency matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolMatrixFamily {
    size: usize,
    per_symbol: Vec<Vec<u8>>,
    adjacency: Vec<u32>,
}

impl SymbolMatrixFamily {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn symbol_count(&self) -> usize {
        self.per_symbol.len()
    }

    pub fn entry(&self, symbol: usize, i: usize, j: usize) -> u8 {
        self.per_symbol[symbol][i * self.size + j]
    }

    pub fn adjacency(&self, i: usize, j: usize) -> u32 {
        self.adjacency[i * self.size + j]
    }

    pub fn symbol_matrix(&self, symbol: usize) -> Vec<Vec<u8>> {
        self.per_symbol[symbol]
            .chunks(self.size)
            .map(<[u8]>::to_vec)
            .collect()
    }

    pub fn adjacency_matrix(&self) -> Vec<Vec<u32>> {
        self.adjacency
            .chunks(self.size)
            .map(<[u32]>::to_vec)
            .collect()
    }

    /// Zeroes one symbol matrix. Used to build deliberately broken families.
    pub fn with_symbol_zeroed(&self, symbol: usize) -> Self {
        let mut out = self.clone();
        for (k, x) in out.per_symbol[symbol].iter_mut().enumerate() {
            out.adjacency[k] -= u32::from(*x);
            *x = 0;
        }
        out
    }

    /// Rebuilds the edge list `(source, target, label)` in canonical order.
    pub fn edge_list(&self) -> Vec<Edge> {
        let n = self.size;
        let mut out = Vec::new();
        for (label, m) in self.per_symbol.iter().enumerate() {
            for (k, &x) in m.iter().enumerate() {
                if x != 0 {
                    out.push(Edge {
                        source: k / n,
                        target: k % n,
                        label,
                    });
                }
            }
        }
        out.sort();
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairEdge {
    pub from: (usize, usize),
    pub to: (usize, usize),
    pub labels_equal: bool,
}

/// Product graph on `V x V`: one edge per ordered pair of edges.
#[derive(Debug, Clone)]
pub struct PairGraph {
    vertex_count: usize,
    pub edges: Vec<PairEdge>,
}

impl PairGraph {
    pub fn node_count(&self) -> usize {
        self.vertex_count * self.vertex_count
    }
}
