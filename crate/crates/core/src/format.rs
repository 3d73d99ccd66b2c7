//! Line-oriented input documents.
//!
//! ```text
//! [generators]
//! g1 = 0.618033988749894   # optional numeric value, used by oracles only
//! [alphabet]
//! a = 0
//! b = 1*g1                 # angle omitted means 0
//! [vertices]
//! v
//! [edges]
//! v -> v : a
//! v -> v : b
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::angle::{parse_angle, AngleError, ExactAngle, GeneratorContext};
use crate::graph::{validate_graph, GraphError, LabeledGraph, RawGraph};
use crate::verdicts::AngleAssignment;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Angle { line: usize, source: AngleError },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Generators,
    Alphabet,
    Vertices,
    Edges,
}

/// A syntactically valid document whose graph has not been validated yet.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemDocument {
    pub context: GeneratorContext,
    pub generator_values: BTreeMap<String, f64>,
    pub raw: RawGraph,
    /// One angle per entry of `raw.alphabet`.
    pub angles: Vec<ExactAngle>,
}

/// A validated graph together with its rotation decoration.
#[derive(Debug, Clone, PartialEq)]
pub struct System {
    pub context: GeneratorContext,
    pub generator_values: BTreeMap<String, f64>,
    pub graph: LabeledGraph,
    pub angles: AngleAssignment,
}

fn check_name(line: usize, name: &str, what: &str) -> Result<(), ParseError> {
    let bad = name.is_empty()
        || name
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '#' | ':' | '=' | '[' | ']'))
        || name.contains("->");
    if bad {
        Err(ParseError::Syntax {
            line,
            message: format!("invalid {what} name `{name}`"),
        })
    } else {
        Ok(())
    }
}

pub fn parse_document(text: &str) -> Result<SystemDocument, ParseError> {
    let mut context = GeneratorContext::new();
    let mut generator_values = BTreeMap::new();
    let mut raw = RawGraph::default();
    let mut angle_src: Vec<(usize, Option<String>)> = Vec::new();
    let mut section = None;

    for (idx, full_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = full_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let syntax = |message: String| ParseError::Syntax { line, message };
        if content.starts_with('[') {
            let name = content
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .map(str::trim)
                .ok_or_else(|| syntax(format!("malformed section header `{content}`")))?;
            section = Some(match name {
                "generators" => Section::Generators,
                "alphabet" => Section::Alphabet,
                "vertices" => Section::Vertices,
                "edges" => Section::Edges,
                other => return Err(syntax(format!("unknown section `[{other}]`"))),
            });
            continue;
        }
        match section {
            None => return Err(syntax("content before first section header".into())),
            Some(Section::Generators) => {
                let (name, desc) = match content.split_once('=') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (content, ""),
                };
                check_name(line, name, "generator")?;
                context
                    .declare(name, desc)
                    .map_err(|source| ParseError::Angle { line, source })?;
                if let Ok(v) = desc.parse::<f64>() {
                    generator_values.insert(name.to_string(), v);
                }
            }
            Some(Section::Alphabet) => {
                let (name, expr) = match content.split_once('=') {
                    Some((n, e)) => (n.trim(), Some(e.trim().to_string())),
                    None => (content, None),
                };
                check_name(line, name, "symbol")?;
                raw.alphabet.push(name.to_string());
                angle_src.push((line, expr));
            }
            Some(Section::Vertices) => {
                check_name(line, content, "vertex")?;
                raw.vertices.push(content.to_string());
            }
            Some(Section::Edges) => {
                let (src, rest) = content.split_once("->").ok_or_else(|| {
                    syntax(format!("expected `src -> dst : symbol`, got `{content}`"))
                })?;
                let (dst, sym) = rest.split_once(':').ok_or_else(|| {
                    syntax(format!("expected `src -> dst : symbol`, got `{content}`"))
                })?;
                let (src, dst, sym) = (src.trim(), dst.trim(), sym.trim());
                check_name(line, src, "vertex")?;
                check_name(line, dst, "vertex")?;
                check_name(line, sym, "symbol")?;
                raw.edges
                    .push((src.to_string(), dst.to_string(), sym.to_string()));
            }
        }
    }

    let mut angles = Vec::with_capacity(angle_src.len());
    for (line, expr) in angle_src {
        let angle = match expr {
            Some(e) => parse_angle(&e).map_err(|source| ParseError::Angle { line, source })?,
            None => ExactAngle::zero(),
        };
        context
            .check(&angle)
            .map_err(|source| ParseError::Angle { line, source })?;
        angles.push(angle);
    }

    Ok(SystemDocument {
        context,
        generator_values,
        raw,
        angles,
    })
}

impl SystemDocument {
    pub fn validate(self) -> Result<System, GraphError> {
        let graph = validate_graph(&self.raw)?;
        let angles =
            AngleAssignment::new(&graph, self.angles).expect("one angle per parsed symbol");
        Ok(System {
            context: self.context,
            generator_values: self.generator_values,
            graph,
            angles,
        })
    }
}

impl System {
    /// Builds the full shift on `angles.len()` symbols `s1, s2, ...`,
    /// declaring every generator the angles mention.
    pub fn full_shift(angles: Vec<ExactAngle>) -> Self {
        let names: Vec<String> = (1..=angles.len()).map(|k| format!("s{k}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let graph = LabeledGraph::full_shift(&refs);
        let mut context = GeneratorContext::new();
        let gens: std::collections::BTreeSet<String> = angles
            .iter()
            .flat_map(|a| a.generators().map(str::to_string))
            .collect();
        for g in gens {
            context.declare(g, "").expect("distinct");
        }
        let angles = AngleAssignment::new(&graph, angles).expect("sized to the alphabet");
        Self {
            context,
            generator_values: BTreeMap::new(),
            graph,
            angles,
        }
    }

    /// Serializes back into the input format; reparsing yields an equal system.
    pub fn to_document(&self) -> String {
        let mut out = String::new();
        if !self.context.is_empty() {
            out.push_str("[generators]\n");
            for g in self.context.ids() {
                match self.generator_values.get(g) {
                    Some(v) => writeln!(out, "{g} = {v:?}").unwrap(),
                    None => {
                        let desc = self.context.description(g).unwrap_or("");
                        if desc.is_empty() {
                            writeln!(out, "{g}").unwrap();
                        } else {
                            writeln!(out, "{g} = {desc}").unwrap();
                        }
                    }
                }
            }
        }
        out.push_str("[alphabet]\n");
        for (k, s) in self.graph.alphabet().iter().enumerate() {
            writeln!(out, "{s} = {}", self.angles.angle(k)).unwrap();
        }
        out.push_str("[vertices]\n");
        for v in self.graph.vertices() {
            writeln!(out, "{v}").unwrap();
        }
        out.push_str("[edges]\n");
        for e in self.graph.edges() {
            writeln!(
                out,
                "{} -> {} : {}",
                self.graph.vertex_name(e.source),
                self.graph.vertex_name(e.target),
                self.graph.symbol_name(e.label)
            )
            .unwrap();
        }
        out
    }
}

pub fn parse_system(text: &str) -> Result<System, LoadError> {
    Ok(parse_document(text)?.validate()?)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
