//! Labeled-graph rotation systems: languages, verdicts, K-theory and ideals.

pub mod angle;
pub mod catalog;
pub mod format;
pub mod graph;
pub mod ideals;
pub mod ktheory;
pub mod linalg;
pub mod oracles;
pub mod report;
pub mod subshift;
pub mod verdicts;

pub use angle::{parse_angle, AngleError, ExactAngle, GeneratorContext};
pub use format::{parse_document, parse_system, LoadError, ParseError, System, SystemDocument};
pub use graph::{validate_graph, Edge, GraphError, LabeledGraph, RawGraph, SymbolMatrixFamily};
pub use linalg::{smith_normal_form, AbelianGroupPresentation, IntMatrix, SmithForm};
pub use report::{AnalysisReport, ReportOptions};
pub use subshift::{SupportSet, Word};
pub use verdicts::{AngleAssignment, Certificate, Verdict, VerdictReport};
