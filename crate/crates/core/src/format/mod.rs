//! Text formats: the JSON graph document and DOT export.

pub mod document;
pub mod dot;

pub use document::{parse_graph, serialize_graph, DocumentError, GraphDocument, Metadata, FORMAT_VERSION};
pub use dot::{export_dot, tournament_to_dot, witness_to_dot, DotBudgetError, DEFAULT_DOT_BUDGET};
