//! The versioned JSON graph document.
//!
//! ```json
//! {
//!   "version": 1,
//!   "k": 2,
//!   "n": 2,
//!   "part_of": [1, 2],
//!   "edges": [[1, 2]]
//! }
//! ```
//!
//! `part_of[v - 1]` is the part of vertex `v`; `edges` lists directed pairs
//! `[from, to]`. Serialization sorts edges lexicographically.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Digraph, Part, PartiteDigraph, Tournament, Vertex, Violation};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl Metadata {
    pub fn is_empty(&self) -> bool {
        self == &Metadata::default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub version: u32,
    pub k: usize,
    pub n: usize,
    pub part_of: Vec<Part>,
    pub edges: Vec<[Vertex; 2]>,
    #[serde(default, skip_serializing_if = "Metadata::is_empty")]
    pub metadata: Metadata,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported format version {found}, expected {FORMAT_VERSION}")]
    Version { found: u32 },
    #[error("field `part_of` has {found} entries but k = {k}")]
    PartCount { k: usize, found: usize },
    #[error("edges[{index}]: vertex {vertex} outside 1..={k}")]
    EdgeOutOfRange { index: usize, vertex: Vertex, k: usize },
    #[error("edges[{index}]: duplicate edge {from}->{to}")]
    DuplicateEdge { index: usize, from: Vertex, to: Vertex },
    #[error("invalid tournament: {0}")]
    Invalid(Violation),
}

impl From<Violation> for DocumentError {
    fn from(v: Violation) -> Self {
        DocumentError::Invalid(v)
    }
}

impl GraphDocument {
    pub fn from_tournament(t: &Tournament, metadata: Metadata) -> Self {
        let mut edges: Vec<[Vertex; 2]> = t.arcs().map(|(a, b)| [a, b]).collect();
        edges.sort_unstable();
        GraphDocument {
            version: FORMAT_VERSION,
            k: t.order(),
            n: t.part_count(),
            part_of: t.part_assignment().to_vec(),
            edges,
            metadata,
        }
    }

    /// Checks the document's own consistency and builds the digraph without
    /// validating tournament invariants.
    pub fn to_digraph(&self) -> Result<Digraph, DocumentError> {
        if self.version != FORMAT_VERSION {
            return Err(DocumentError::Version { found: self.version });
        }
        if self.part_of.len() != self.k {
            return Err(DocumentError::PartCount {
                k: self.k,
                found: self.part_of.len(),
            });
        }
        let mut g = Digraph::new(self.n, self.part_of.clone());
        for (index, &[from, to]) in self.edges.iter().enumerate() {
            for vertex in [from, to] {
                if vertex == 0 || vertex > self.k {
                    return Err(DocumentError::EdgeOutOfRange {
                        index,
                        vertex,
                        k: self.k,
                    });
                }
            }
            if g.has_arc(from, to) {
                return Err(DocumentError::DuplicateEdge { index, from, to });
            }
            g.add_arc(from, to);
        }
        Ok(g)
    }

    pub fn to_tournament(&self) -> Result<Tournament, DocumentError> {
        Ok(Tournament::try_from(self.to_digraph()?)?)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("document serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        serde_json::from_str(text).map_err(|e| DocumentError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }
}

/// Parses and validates a graph document.
pub fn parse_graph(text: &str) -> Result<Tournament, DocumentError> {
    GraphDocument::from_json(text)?.to_tournament()
}

/// Canonical text of a tournament: fixed field order, sorted edges.
pub fn serialize_graph(t: &Tournament) -> String {
    GraphDocument::from_tournament(t, Metadata::default()).to_json()
}
