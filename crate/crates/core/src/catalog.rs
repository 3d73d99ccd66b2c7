//! Bundled example systems.

use crate::format::{parse_system, System};
use crate::graph::LabeledGraph;

pub const FULLSHIFT2: &str = include_str!("../systems/fullshift2.sds");
pub const FULLSHIFT2_HALF: &str = include_str!("../systems/fullshift2_half.sds");
pub const FULLSHIFT3: &str = include_str!("../systems/fullshift3.sds");
pub const GOLDEN_MEAN: &str = include_str!("../systems/golden_mean.sds");
pub const REDUCIBLE3: &str = include_str!("../systems/reducible3.sds");
pub const TWO_COMPONENT: &str = include_str!("../systems/two_component.sds");
pub const TWO_CYCLE: &str = include_str!("../systems/two_cycle.sds");

/// `(name, document)` for every bundled system.
pub const ALL: &[(&str, &str)] = &[
    ("fullshift2", FULLSHIFT2),
    ("fullshift2_half", FULLSHIFT2_HALF),
    ("fullshift3", FULLSHIFT3),
    ("golden_mean", GOLDEN_MEAN),
    ("reducible3", REDUCIBLE3),
    ("two_component", TWO_COMPONENT),
    ("two_cycle", TWO_CYCLE),
];

pub fn system(doc: &str) -> System {
    parse_system(doc).expect("bundled systems are valid")
}

pub fn all() -> Vec<(&'static str, System)> {
    ALL.iter().map(|(name, doc)| (*name, system(doc))).collect()
}

pub fn golden_mean() -> LabeledGraph {
    system(GOLDEN_MEAN).graph
}

pub fn reducible3() -> LabeledGraph {
    system(REDUCIBLE3).graph
}

pub fn two_component() -> LabeledGraph {
    system(TWO_COMPONENT).graph
}

pub fn two_cycle() -> LabeledGraph {
    system(TWO_CYCLE).graph
}

/// Single vertex with `n` loops labeled `s1..sn`.
pub fn n_loop(n: usize) -> LabeledGraph {
    let names: Vec<String> = (1..=n).map(|k| format!("s{k}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    LabeledGraph::full_shift(&refs)
}
