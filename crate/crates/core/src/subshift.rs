//! The presented subshift: support dynamics, admissible words, finite
//! lambda-graph truncations, and invariance under rotation decoration.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::angle::ExactAngle;
use crate::graph::{LabeledGraph, SymbolMatrixFamily};

pub const DEFAULT_WORD_CAP: usize = 12;
pub const LAMBDA_DEPTH_CAP: usize = 16;
pub const SUBSET_GUARD: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubshiftError {
    #[error("{what} {requested} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        requested: usize,
        cap: usize,
    },
}

/// A finite word over the alphabet, stored as symbol indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[usize] {
        &self.0
    }

    pub fn display<'a>(&'a self, g: &'a LabeledGraph) -> WordDisplay<'a> {
        WordDisplay {
            word: self,
            graph: g,
        }
    }

    /// Parses space-separated symbol names.
    pub fn parse(g: &LabeledGraph, text: &str) -> Option<Self> {
        text.split_whitespace()
            .map(|s| g.symbol_index(s))
            .collect::<Option<Vec<_>>>()
            .map(Word)
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    graph: &'a LabeledGraph,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, &s) in self.word.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            f.write_str(self.graph.symbol_name(s))?;
        }
        Ok(())
    }
}

/// A set of vertex indices, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct SupportSet(Vec<usize>);

impl SupportSet {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn full(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn singleton(v: usize) -> Self {
        Self(vec![v])
    }

    pub fn from_iter_unsorted(it: impl IntoIterator<Item = usize>) -> Self {
        let set: BTreeSet<usize> = it.into_iter().collect();
        Self(set.into_iter().collect())
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset(&self, other: &SupportSet) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    pub fn union(&self, other: &SupportSet) -> SupportSet {
        Self::from_iter_unsorted(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn names(&self, g: &LabeledGraph) -> Vec<String> {
        self.0
            .iter()
            .map(|&v| g.vertex_name(v).to_string())
            .collect()
    }
}

/// Forward image of `s` along `symbol`-labeled edges.
pub fn rho_support(g: &LabeledGraph, s: &SupportSet, symbol: usize) -> SupportSet {
    SupportSet::from_iter_unsorted(
        s.vertices()
            .iter()
            .flat_map(|&v| g.out_edges(v))
            .filter(|e| e.label == symbol)
            .map(|e| e.target),
    )
}

/// Support reached from `start` after reading `w`.
pub fn support_after(g: &LabeledGraph, start: &SupportSet, w: &Word) -> SupportSet {
    let mut s = start.clone();
    for &a in w.symbols() {
        if s.is_empty() {
            break;
        }
        s = rho_support(g, &s, a);
    }
    s
}

pub fn is_admissible(g: &LabeledGraph, w: &Word) -> bool {
    !support_after(g, &SupportSet::full(g.vertex_count()), w).is_empty()
}

/// All admissible words of length `k`, in lexicographic order with respect
/// to the declared alphabet order.
pub fn admissible_words(
    g: &LabeledGraph,
    k: usize,
    cap: usize,
) -> Result<Vec<Word>, SubshiftError> {
    if k > cap {
        return Err(SubshiftError::CapExceeded {
            what: "word length",
            requested: k,
            cap,
        });
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(k);
    extend_words(
        g,
        &SupportSet::full(g.vertex_count()),
        k,
        &mut prefix,
        &mut out,
    );
    Ok(out)
}

fn extend_words(
    g: &LabeledGraph,
    support: &SupportSet,
    remaining: usize,
    prefix: &mut Vec<usize>,
    out: &mut Vec<Word>,
) {
    if remaining == 0 {
        out.push(Word(prefix.clone()));
        return;
    }
    for a in 0..g.symbol_count() {
        let next = rho_support(g, support, a);
        if !next.is_empty() {
            prefix.push(a);
            extend_words(g, &next, remaining - 1, prefix, out);
            prefix.pop();
        }
    }
}

/// Finite truncation of the canonical lambda-graph presentation: level `l`
/// holds the distinct supports of `rho_mu(1)` over admissible `mu` of length
/// `l`. Connecting maps between levels are not represented.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LambdaGraphTruncation {
    pub levels: Vec<Vec<SupportSet>>,
    /// `transitions[l]` lists `(i, symbol, j)`: vertex `i` at level `l` goes
    /// to vertex `j` at level `l + 1` reading `symbol`.
    pub transitions: Vec<Vec<(usize, usize, usize)>>,
}

impl LambdaGraphTruncation {
    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    /// Dense 0/1 matrix for `symbol` between level `l` and `l + 1`.
    pub fn level_matrix(&self, l: usize, symbol: usize) -> Vec<Vec<u8>> {
        let mut m = vec![vec![0u8; self.levels[l + 1].len()]; self.levels[l].len()];
        for &(i, a, j) in &self.transitions[l] {
            if a == symbol {
                m[i][j] = 1;
            }
        }
        m
    }
}

pub fn build_lambda_truncation(
    g: &LabeledGraph,
    depth: usize,
) -> Result<LambdaGraphTruncation, SubshiftError> {
    if depth > LAMBDA_DEPTH_CAP {
        return Err(SubshiftError::CapExceeded {
            what: "lambda-graph depth",
            requested: depth,
            cap: LAMBDA_DEPTH_CAP,
        });
    }
    let mut levels = vec![vec![SupportSet::full(g.vertex_count())]];
    let mut transitions = Vec::with_capacity(depth);
    for _ in 0..depth {
        let current = levels.last().expect("level 0 exists");
        let mut next: BTreeSet<SupportSet> = BTreeSet::new();
        let mut raw = Vec::new();
        for (i, s) in current.iter().enumerate() {
            for a in 0..g.symbol_count() {
                let t = rho_support(g, s, a);
                if !t.is_empty() {
                    next.insert(t.clone());
                    raw.push((i, a, t));
                }
            }
            if next.len() > SUBSET_GUARD {
                return Err(SubshiftError::CapExceeded {
                    what: "level vertex count",
                    requested: next.len(),
                    cap: SUBSET_GUARD,
                });
            }
        }
        let next: Vec<SupportSet> = next.into_iter().collect();
        let trans = raw
            .into_iter()
            .map(|(i, a, t)| (i, a, next.binary_search(&t).expect("inserted above")))
            .collect();
        transitions.push(trans);
        levels.push(next);
    }
    Ok(LambdaGraphTruncation {
        levels,
        transitions,
    })
}

/// Formal sum of rotations `sum_k n_k e^{2 pi i theta_k}` with positive
/// multiplicities; zero iff empty.
pub type FormalSum = BTreeMap<ExactAngle, u64>;

/// Symbol matrices whose nonzero entries carry the rotation angle of their
/// label, i.e. the angle-decorated tensor system.
#[derive(Debug, Clone)]
pub struct DecoratedFamily {
    size: usize,
    /// `per_symbol[a]` lists `(i, j, angle)` for each nonzero entry.
    per_symbol: Vec<Vec<(usize, usize, ExactAngle)>>,
}

impl DecoratedFamily {
    pub fn new(family: &SymbolMatrixFamily, angles: &[ExactAngle]) -> Self {
        assert_eq!(family.symbol_count(), angles.len(), "one angle per symbol");
        let n = family.size();
        let per_symbol = (0..family.symbol_count())
            .map(|a| {
                let mut entries = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        if family.entry(a, i, j) != 0 {
                            entries.push((i, j, angles[a].clone()));
                        }
                    }
                }
                entries
            })
            .collect();
        Self {
            size: n,
            per_symbol,
        }
    }

    pub fn symbol_count(&self) -> usize {
        self.per_symbol.len()
    }

    /// `rho_a` applied to a vector of formal sums indexed by vertex.
    pub fn apply(&self, v: &[FormalSum], symbol: usize) -> Vec<FormalSum> {
        let mut out = vec![FormalSum::new(); self.size];
        for (i, j, angle) in &self.per_symbol[symbol] {
            for (phase, mult) in &v[*i] {
                let slot = out[*j].entry(phase + angle).or_insert(0);
                *slot = slot.saturating_add(*mult);
            }
        }
        out
    }

    pub fn unit(&self) -> Vec<FormalSum> {
        vec![FormalSum::from([(ExactAngle::zero(), 1)]); self.size]
    }

    /// Words of length `k` with `rho_mu(1) != 0`, lexicographic order.
    pub fn nonvanishing_words(&self, k: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        self.extend(&self.unit(), k, &mut prefix, &mut out);
        out
    }

    fn extend(
        &self,
        v: &[FormalSum],
        remaining: usize,
        prefix: &mut Vec<usize>,
        out: &mut Vec<Word>,
    ) {
        if remaining == 0 {
            out.push(Word(prefix.clone()));
            return;
        }
        for a in 0..self.symbol_count() {
            let next = self.apply(v, a);
            if next.iter().any(|s| !s.is_empty()) {
                prefix.push(a);
                self.extend(&next, remaining - 1, prefix, out);
                prefix.pop();
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecorationCheck {
    pub equal: bool,
    pub counterexample: Option<Word>,
}

/// Compares the language of a decorated family with the graph's own
/// admissible words for every length up to `k`.
pub fn compare_decorated_language(
    g: &LabeledGraph,
    decorated: &DecoratedFamily,
    k: usize,
    cap: usize,
) -> Result<DecorationCheck, SubshiftError> {
    for len in 0..=k {
        let base: BTreeSet<Word> = admissible_words(g, len, cap)?.into_iter().collect();
        let deco: BTreeSet<Word> = decorated.nonvanishing_words(len).into_iter().collect();
        if let Some(w) = base.symmetric_difference(&deco).next() {
            return Ok(DecorationCheck {
                equal: false,
                counterexample: Some(w.clone()),
            });
        }
    }
    Ok(DecorationCheck {
        equal: true,
        counterexample: None,
    })
}

pub fn decorated_subshift_equals_base(
    g: &LabeledGraph,
    angles: &[ExactAngle],
    k: usize,
) -> Result<DecorationCheck, SubshiftError> {
    let decorated = DecoratedFamily::new(&g.symbol_matrices(), angles);
    compare_decorated_language(g, &decorated, k, DEFAULT_WORD_CAP)
}
