//! Graphviz DOT export with one cluster per part.

use std::fmt::Write;

use thiserror::Error;

use crate::graph::{PartiteDigraph, Vertex};
use crate::witness::Witness;

/// Largest witness rendered to DOT by default.
pub const DEFAULT_DOT_BUDGET: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("witness has {order} vertices, over the DOT budget of {budget}")]
pub struct DotBudgetError {
    pub order: usize,
    pub budget: usize,
}

/// Renders `g` with parts as `cluster_<i>` subgraphs and arcs in
/// lexicographic order. `name` gives each vertex its node identifier.
pub fn export_dot<G, F>(g: &G, mut name: F) -> String
where
    G: PartiteDigraph + ?Sized,
    F: FnMut(Vertex) -> String,
{
    let names: Vec<String> = g.vertices().map(&mut name).collect();
    let mut out = String::new();
    writeln!(out, "digraph G {{").unwrap();
    for (i, members) in g.part_members().iter().enumerate() {
        writeln!(out, "  subgraph cluster_{} {{", i + 1).unwrap();
        writeln!(out, "    label=\"V{}\";", i + 1).unwrap();
        for &v in members {
            writeln!(out, "    \"{}\";", names[v - 1]).unwrap();
        }
        writeln!(out, "  }}").unwrap();
    }
    for u in g.vertices() {
        for v in g.vertices() {
            if g.has_arc(u, v) {
                writeln!(out, "  \"{}\" -> \"{}\";", names[u - 1], names[v - 1]).unwrap();
            }
        }
    }
    writeln!(out, "}}").unwrap();
    out
}

pub fn tournament_to_dot<G: PartiteDigraph + ?Sized>(g: &G) -> String {
    export_dot(g, |v| v.to_string())
}

/// DOT for a witness, nodes named `x#b`.
pub fn witness_to_dot(w: &Witness, budget: usize) -> Result<String, DotBudgetError> {
    if w.order() > budget {
        return Err(DotBudgetError {
            order: w.order(),
            budget,
        });
    }
    Ok(export_dot(w, |id| w.vertex_name(id)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Tournament;
    use crate::normalize::normalize;
    use crate::witness::build_witness;

    fn arrows(dot: &str) -> usize {
        dot.lines().filter(|l| l.contains("->")).count()
    }

    #[test]
    fn smallest_tournament_has_one_arrow() {
        let t = Tournament::new(2, vec![1, 2], [(1, 2)]).unwrap();
        let dot = tournament_to_dot(&t);
        assert_eq!(arrows(&dot), 1);
        assert!(dot.contains("\"1\" -> \"2\";"));
        assert!(dot.contains("subgraph cluster_2"));
    }

    #[test]
    fn smallest_witness_has_four_arrows() {
        let t = Tournament::new(2, vec![1, 2], [(1, 2)]).unwrap();
        let w = build_witness(&normalize(&t)).unwrap();
        let dot = witness_to_dot(&w, DEFAULT_DOT_BUDGET).unwrap();
        assert_eq!(arrows(&dot), 4);
        assert!(dot.contains("\"1#00\" -> \"2#00\";"));
        assert_eq!(witness_to_dot(&w, 3), Err(DotBudgetError { order: 4, budget: 3 }));
    }
}
