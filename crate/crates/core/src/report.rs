//! The combined analysis report emitted by `analyze`.

use serde::Serialize;

use crate::format::{LoadError, System};
use crate::graph::LabeledGraph;
use crate::ideals::{enumerate_invariant_saturated, hasse_edges, quotient_system, IdealError};
use crate::ktheory::{k_rotation_ck, KGroups};
use crate::verdicts::{
    condition_i, fullshift_f_simplicity, fullshift_uniform_distribution, g_minimality,
    irrational_cycle, is_irreducible, pure_infiniteness_o, simplicity_o, tags, Certificate,
    Verdict, VerdictReport,
};

pub const TOOL_NAME: &str = "sofic-rot";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct Ordering {
    pub vertices: Vec<String>,
    pub alphabet: Vec<String>,
    pub angles: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Validation {
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<ErrorDetail>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum ErrorDetail {
    Graph(crate::graph::GraphError),
    Parse { line: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct FullshiftSection {
    #[serde(rename = "F_simple")]
    pub f_simple: VerdictReport,
    pub uniformly_distributed: VerdictReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuotientEntry {
    pub vertices: Vec<String>,
    pub surviving_alphabet: Vec<String>,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdealEntry {
    pub vertices: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quotient: Option<QuotientEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdealSection {
    pub lattice: Vec<IdealEntry>,
    /// Covering pairs `(lower, upper)` as indices into `lattice`.
    pub hasse: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub tool: String,
    pub version: String,
    pub input_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ordering: Option<Ordering>,
    pub validation: Validation,
    #[serde(rename = "condition_I")]
    pub condition_i: Option<VerdictReport>,
    pub irreducible: Option<VerdictReport>,
    pub irrational_cycle: Option<VerdictReport>,
    pub g_minimal: Option<VerdictReport>,
    #[serde(rename = "simple_O")]
    pub simple_o: Option<VerdictReport>,
    #[serde(rename = "purely_infinite_O")]
    pub purely_infinite_o: Option<VerdictReport>,
    pub fullshift: Option<FullshiftSection>,
    pub k_theory: Option<KGroups>,
    pub ideals: Option<IdealSection>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy)]
pub struct ReportOptions {
    pub ideal_cap: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            ideal_cap: crate::ideals::DEFAULT_IDEAL_CAP,
        }
    }
}

fn not_full_shift() -> VerdictReport {
    VerdictReport {
        verdict: Verdict::Unknown,
        theorem: tags::FULLSHIFT_F.to_string(),
        derived: false,
        certificate: Certificate::NotApplicable {
            reason: "graph is not a single-vertex full shift".to_string(),
        },
        conclusions: Vec::new(),
    }
}

impl AnalysisReport {
    fn empty(digest: &str) -> Self {
        Self {
            tool: TOOL_NAME.to_string(),
            version: TOOL_VERSION.to_string(),
            input_digest: digest.to_string(),
            ordering: None,
            validation: Validation {
                ok: true,
                error: None,
                detail: None,
            },
            condition_i: None,
            irreducible: None,
            irrational_cycle: None,
            g_minimal: None,
            simple_o: None,
            purely_infinite_o: None,
            fullshift: None,
            k_theory: None,
            ideals: None,
            warnings: Vec::new(),
        }
    }

    pub fn failed(err: &LoadError, digest: &str) -> Self {
        let mut r = Self::empty(digest);
        r.validation = Validation {
            ok: false,
            error: Some(err.to_string()),
            detail: Some(match err {
                LoadError::Graph(g) => ErrorDetail::Graph(g.clone()),
                LoadError::Parse(p) => ErrorDetail::Parse {
                    line: match p {
                        crate::format::ParseError::Syntax { line, .. }
                        | crate::format::ParseError::Angle { line, .. } => *line,
                    },
                },
            }),
        };
        r
    }

    /// Header, ordering and validation only.
    pub fn build_header(sys: &System, digest: &str) -> Self {
        let mut r = Self::empty(digest);
        r.ordering = Some(Ordering {
            vertices: sys.graph.vertices().to_vec(),
            alphabet: sys.graph.alphabet().to_vec(),
            angles: sys
                .angles
                .angles()
                .iter()
                .map(ToString::to_string)
                .collect(),
        });
        r
    }

    pub fn build(sys: &System, digest: &str, options: ReportOptions) -> Self {
        let g = &sys.graph;
        let theta = &sys.angles;
        let mut r = Self::build_header(sys, digest);
        r.condition_i = Some(condition_i(g));
        r.irreducible = Some(is_irreducible(g));
        r.irrational_cycle = Some(irrational_cycle(g, theta));
        r.g_minimal = Some(g_minimality(g, theta));
        r.simple_o = Some(simplicity_o(g, theta));
        r.purely_infinite_o = Some(pure_infiniteness_o(g, theta));
        r.fullshift = Some(if g.vertex_count() == 1 && g.symbol_count() >= 2 {
            FullshiftSection {
                f_simple: fullshift_f_simplicity(theta.angles()).expect("at least two angles"),
                uniformly_distributed: fullshift_uniform_distribution(theta.angles())
                    .expect("at least two angles"),
            }
        } else {
            FullshiftSection {
                f_simple: not_full_shift(),
                uniformly_distributed: VerdictReport {
                    theorem: tags::FULLSHIFT_UD.to_string(),
                    ..not_full_shift()
                },
            }
        });
        r.k_theory = Some(k_rotation_ck(g));
        match ideal_section(g, options.ideal_cap) {
            Ok(section) => r.ideals = Some(section),
            Err(e) => r.warnings.push(format!("ideal lattice skipped: {e}")),
        }
        r
    }
}

pub fn ideal_section(g: &LabeledGraph, cap: usize) -> Result<IdealSection, IdealError> {
    let list = enumerate_invariant_saturated(g, cap)?;
    let hasse = hasse_edges(&list);
    let lattice = list
        .iter()
        .map(|ideal| IdealEntry {
            vertices: ideal.vertices.names(g),
            quotient: quotient_system(g, &ideal.vertices)
                .ok()
                .map(|q| QuotientEntry {
                    valid: q.is_valid(),
                    error: q.graph.as_ref().err().map(ToString::to_string),
                    vertices: q.vertices,
                    surviving_alphabet: q.surviving_alphabet,
                }),
        })
        .collect();
    Ok(IdealSection { lattice, hasse })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn full_two_shift_report() {
        let r = AnalysisReport::build(
            &catalog::system(catalog::FULLSHIFT2),
            "x",
            ReportOptions::default(),
        );
        assert_eq!(r.simple_o.as_ref().unwrap().verdict, Verdict::Yes);
        assert_eq!(r.purely_infinite_o.as_ref().unwrap().verdict, Verdict::Yes);
        assert_eq!(r.fullshift.as_ref().unwrap().f_simple.verdict, Verdict::Yes);
        assert!(r.k_theory.as_ref().unwrap().k0.is_trivial());
        assert_eq!(r.ideals.as_ref().unwrap().lattice.len(), 2);
    }

    #[test]
    fn non_full_shift_marks_section_not_applicable() {
        let r = AnalysisReport::build(
            &catalog::system(catalog::GOLDEN_MEAN),
            "x",
            ReportOptions::default(),
        );
        let f = r.fullshift.unwrap();
        assert_eq!(f.f_simple.verdict, Verdict::Unknown);
        assert!(matches!(
            f.f_simple.certificate,
            Certificate::NotApplicable { .. }
        ));
    }

    #[test]
    fn ideal_cap_becomes_warning() {
        let r = AnalysisReport::build(
            &catalog::system(catalog::REDUCIBLE3),
            "x",
            ReportOptions { ideal_cap: 2 },
        );
        assert!(r.ideals.is_none());
        assert_eq!(r.warnings.len(), 1);
    }
}
