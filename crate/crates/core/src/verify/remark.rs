//! Checking that a witness also serves every smaller n-partite tournament.

use std::ops::ControlFlow;

use thiserror::Error;

use crate::graph::{validate_substructure, PartialMap, PartiteDigraph, Vertex, Violation};
use crate::verify::enumerate::enumerate_partial_automorphisms;
use crate::verify::oracle::{find_extending_automorphism, for_each_embedding, OracleError, DEFAULT_ORACLE_BUDGET};
use crate::witness::Witness;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RemarkOptions {
    /// Largest domain of the partial automorphisms checked.
    pub domain_cap: usize,
    pub oracle_budget: usize,
    /// Embedded copies tried before giving up.
    pub max_embeddings: usize,
}

impl Default for RemarkOptions {
    fn default() -> Self {
        RemarkOptions {
            domain_cap: usize::MAX,
            oracle_budget: DEFAULT_ORACLE_BUDGET,
            max_embeddings: 1 << 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemarkReport {
    /// `embedding[v - 1]` is the witness vertex carrying `v`.
    pub embedding: Vec<Vertex>,
    /// Partial automorphisms of the embedded copy confirmed extendable.
    pub checked: usize,
    /// Copies examined, including the accepted one.
    pub embeddings_tried: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RemarkError {
    #[error("small structure is invalid: {0}")]
    Invalid(Violation),
    #[error("small structure has {order} vertices, more than the {k} of the source")]
    TooManyVertices { order: usize, k: usize },
    #[error("small structure has {parts} parts, more than the witness's {n}")]
    TooManyParts { parts: usize, n: usize },
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("no embedding into the witness")]
    NoEmbedding,
    #[error("no embedded copy works; on the first, partial automorphism {phi} does not extend ({tried} copies tried)")]
    NotExtendable { phi: PartialMap, tried: usize },
}

impl From<Violation> for RemarkError {
    fn from(v: Violation) -> Self {
        RemarkError::Invalid(v)
    }
}

/// Looks for a copy of `small` in `w` all of whose partial automorphisms
/// (domain up to `options.domain_cap`) extend to automorphisms of `w`, as
/// confirmed by the search oracle. Copies are tried in the order of
/// [`for_each_embedding`].
///
/// `small` may have a single part; it must not have more vertices than the
/// source of `w` or more parts than `w`.
pub fn verify_remark<A: PartiteDigraph + ?Sized>(
    w: &Witness,
    small: &A,
    options: &RemarkOptions,
) -> Result<RemarkReport, RemarkError> {
    validate_substructure(small)?;
    if small.order() > w.k() {
        return Err(RemarkError::TooManyVertices {
            order: small.order(),
            k: w.k(),
        });
    }
    if small.part_count() > w.n() {
        return Err(RemarkError::TooManyParts {
            parts: small.part_count(),
            n: w.n(),
        });
    }
    if w.order() > options.oracle_budget {
        return Err(OracleError::TooLarge {
            order: w.order(),
            budget: options.oracle_budget,
        }
        .into());
    }
    let phis: Vec<PartialMap> = enumerate_partial_automorphisms(small, options.domain_cap).collect();
    let mut tried = 0;
    let mut first_failure = None;
    let mut outcome = None;
    for_each_embedding(small, w, |embedding| {
        tried += 1;
        for phi in &phis {
            let moved = phi.transport(|v| embedding[v - 1]);
            match find_extending_automorphism(w, &moved, options.oracle_budget) {
                Ok(Some(_)) => {}
                Ok(None) => {
                    first_failure.get_or_insert_with(|| phi.clone());
                    return if tried < options.max_embeddings {
                        ControlFlow::Continue(())
                    } else {
                        ControlFlow::Break(())
                    };
                }
                Err(e) => {
                    outcome = Some(Err(e.into()));
                    return ControlFlow::Break(());
                }
            }
        }
        outcome = Some(Ok(RemarkReport {
            embedding: embedding.to_vec(),
            checked: phis.len(),
            embeddings_tried: tried,
        }));
        ControlFlow::Break(())
    });
    match (outcome, first_failure) {
        (Some(result), _) => result,
        (None, Some(phi)) => Err(RemarkError::NotExtendable { phi, tried }),
        (None, None) => Err(RemarkError::NoEmbedding),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Digraph, Tournament};
    use crate::normalize::normalize;
    use crate::witness::build_witness;

    fn w4() -> (Tournament, Witness) {
        let t = Tournament::from_orientation(2, vec![1, 1, 2, 2], |x, y| (x + y) % 3 == 0).unwrap();
        let w = build_witness(&normalize(&t)).unwrap();
        (t, w)
    }

    #[test]
    fn source_itself_passes() {
        let (t, w) = w4();
        let report = verify_remark(&w, &t, &RemarkOptions::default()).unwrap();
        assert!(report.checked > 0);
    }

    #[test]
    fn single_vertex_passes() {
        let (_, w) = w4();
        let report = verify_remark(&w, &Digraph::new(1, vec![1]), &RemarkOptions::default()).unwrap();
        assert_eq!(report.checked, 2);
    }

    #[test]
    fn three_vertex_example_passes() {
        // parts {a}, {b, c}; a -> b, c -> a
        let (_, w) = w4();
        let a = Tournament::new(2, vec![1, 2, 2], [(1, 2), (3, 1)]).unwrap();
        assert!(verify_remark(&w, &a, &RemarkOptions::default()).is_ok());
    }

    #[test]
    fn independent_triple_needs_a_later_copy() {
        let (_, w) = w4();
        let report = verify_remark(&w, &Digraph::new(1, vec![1; 3]), &RemarkOptions::default()).unwrap();
        assert!(report.embeddings_tried > 1);
        assert_eq!(report.checked, 34);
        let capped = RemarkOptions {
            max_embeddings: 1,
            ..RemarkOptions::default()
        };
        assert!(matches!(
            verify_remark(&w, &Digraph::new(1, vec![1; 3]), &capped),
            Err(RemarkError::NotExtendable { tried: 1, .. })
        ));
    }

    #[test]
    fn out_of_scope_inputs_are_rejected() {
        let (_, w) = w4();
        let big = Digraph::new(1, vec![1; 5]);
        assert_eq!(
            verify_remark(&w, &big, &RemarkOptions::default()),
            Err(RemarkError::TooManyVertices { order: 5, k: 4 })
        );
        let tri = Tournament::new(3, vec![1, 2, 3], [(1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(
            verify_remark(&w, &tri, &RemarkOptions::default()),
            Err(RemarkError::TooManyParts { parts: 3, n: 2 })
        );
    }
}
