#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use sofic_rot::graph::{Edge, LabeledGraph};
use sofic_rot::ExactAngle;

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("{prefix}{k}")).collect()
}

/// One optional source per `(target, label)` slot keeps the graph left-resolving
/// by construction; retried until it is essential and uses every symbol.
pub fn random_graph<R: Rng>(rng: &mut R, max_vertices: usize, max_symbols: usize) -> LabeledGraph {
    loop {
        let n0 = rng.gen_range(1..=max_vertices);
        let n = rng.gen_range(1..=max_symbols);
        let density = rng.gen_range(0.4..0.9);
        let mut edges = Vec::new();
        for target in 0..n0 {
            for label in 0..n {
                if rng.gen_bool(density) {
                    edges.push(Edge {
                        source: rng.gen_range(0..n0),
                        target,
                        label,
                    });
                }
            }
        }
        if let Ok(g) = LabeledGraph::from_parts(names("v", n0), names("s", n), edges) {
            return g;
        }
    }
}

/// Every essential left-resolving graph on `n0` vertices and `n` symbols,
/// one optional source per `(target, label)` slot.
pub fn all_graphs(n0: usize, n: usize) -> Vec<LabeledGraph> {
    let slots = n0 * n;
    let choices = (n0 + 1) as u64;
    let total = choices.pow(slots as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let mut edges = Vec::new();
        for slot in 0..slots {
            let pick = (c % choices) as usize;
            c /= choices;
            if pick > 0 {
                edges.push(Edge {
                    source: pick - 1,
                    target: slot / n,
                    label: slot % n,
                });
            }
        }
        if let Ok(g) = LabeledGraph::from_parts(names("v", n0), names("s", n), edges) {
            out.push(g);
        }
    }
    out
}

/// Depth-first search over paths of length `len` from `v`, stopping at the
/// second distinct label word.
pub fn two_label_words_from(g: &LabeledGraph, v: usize, len: usize) -> bool {
    fn go(
        g: &LabeledGraph,
        v: usize,
        left: usize,
        word: &mut Vec<usize>,
        first: &mut Option<Vec<usize>>,
    ) -> bool {
        if left == 0 {
            return match first {
                None => {
                    *first = Some(word.clone());
                    false
                }
                Some(w) => w != word,
            };
        }
        for e in g.out_edges(v) {
            word.push(e.label);
            let found = go(g, e.target, left - 1, word, first);
            word.pop();
            if found {
                return true;
            }
        }
        false
    }
    go(g, v, len, &mut Vec::new(), &mut None)
}

pub fn random_angle<R: Rng>(rng: &mut R) -> ExactAngle {
    let q = rng.gen_range(1..=8i64);
    let p = rng.gen_range(0..q);
    let mut coefficients = Vec::new();
    for gen in ["g1", "g2"] {
        if rng.gen_bool(0.4) {
            let num = rng.gen_range(-3..=3i64);
            let den = rng.gen_range(1..=3i64);
            coefficients.push((
                gen.to_string(),
                BigRational::new(BigInt::from(num), BigInt::from(den)),
            ));
        }
    }
    ExactAngle::from_parts(BigRational::new(p.into(), q.into()), coefficients)
}

pub fn golden_values() -> std::collections::BTreeMap<String, f64> {
    [
        ("g1".to_string(), sofic_rot::oracles::GOLDEN_DEFAULT),
        ("g2".to_string(), std::f64::consts::SQRT_2 - 1.0),
    ]
    .into_iter()
    .collect()
}
