//! Construction-independent checks on maps between partite digraphs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{PartialMap, PartiteDigraph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapViolation {
    #[error("map has {actual} entries, expected {expected}")]
    WrongLength { expected: usize, actual: usize },
    #[error("vertex {vertex} is sent to {image}, outside the target")]
    OutOfRange { vertex: Vertex, image: Vertex },
    #[error("vertices {first} and {second} are both sent to {image}")]
    NotInjective {
        first: Vertex,
        second: Vertex,
        image: Vertex,
    },
    #[error("part relation not preserved at ({u}, {v})")]
    PartRelation { u: Vertex, v: Vertex },
    #[error("orientation not preserved at ({u}, {v})")]
    Orientation { u: Vertex, v: Vertex },
}

/// Checks that `map` (with `map[v - 1]` the image of `v`) is injective, sends
/// same-part pairs exactly to same-part pairs, and preserves both arc
/// directions of every pair. Pairs `u < v` are scanned lexicographically and
/// the first failure is returned.
pub fn verify_embedding<S, T>(source: &S, target: &T, map: &[Vertex]) -> Result<(), MapViolation>
where
    S: PartiteDigraph + ?Sized,
    T: PartiteDigraph + ?Sized,
{
    let k = source.order();
    if map.len() != k {
        return Err(MapViolation::WrongLength {
            expected: k,
            actual: map.len(),
        });
    }
    let mut preimage = vec![0; target.order()];
    for (i, &image) in map.iter().enumerate() {
        let vertex = i + 1;
        if image == 0 || image > target.order() {
            return Err(MapViolation::OutOfRange { vertex, image });
        }
        let slot = &mut preimage[image - 1];
        if *slot != 0 {
            return Err(MapViolation::NotInjective {
                first: *slot,
                second: vertex,
                image,
            });
        }
        *slot = vertex;
    }
    for u in 1..=k {
        let fu = map[u - 1];
        for v in u + 1..=k {
            let fv = map[v - 1];
            if source.same_part(u, v) != target.same_part(fu, fv) {
                return Err(MapViolation::PartRelation { u, v });
            }
            if source.has_arc(u, v) != target.has_arc(fu, fv)
                || source.has_arc(v, u) != target.has_arc(fv, fu)
            {
                return Err(MapViolation::Orientation { u, v });
            }
        }
    }
    Ok(())
}

/// Whether `theta` is an automorphism of `g`: a bijection of its vertices
/// that preserves the part relation and the orientation of every pair.
pub fn verify_automorphism<G: PartiteDigraph + ?Sized>(g: &G, theta: &[Vertex]) -> Result<(), MapViolation> {
    verify_embedding(g, g, theta)
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("θ({vertex}) = {actual}, but φ({vertex}) = {expected}")]
pub struct ExtensionMismatch {
    pub vertex: Vertex,
    pub expected: Vertex,
    pub actual: Vertex,
}

/// Whether `theta` agrees with `phi` on the domain of `phi`. A domain vertex
/// outside `theta` reports `actual = 0`.
pub fn verify_extends(theta: &[Vertex], phi: &PartialMap) -> Result<(), ExtensionMismatch> {
    for (vertex, expected) in phi.iter() {
        let actual = vertex
            .checked_sub(1)
            .and_then(|i| theta.get(i))
            .copied()
            .unwrap_or(0);
        if actual != expected {
            return Err(ExtensionMismatch {
                vertex,
                expected,
                actual,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Tournament;
    use crate::normalize::normalize;
    use crate::witness::build_witness;

    #[test]
    fn identity_is_an_automorphism() {
        let t = Tournament::from_orientation(2, vec![1, 1, 2, 2], |x, y| x + y != 5).unwrap();
        let w = build_witness(&normalize(&t)).unwrap();
        let id: Vec<_> = w.vertices().collect();
        assert_eq!(verify_automorphism(&w, &id), Ok(()));
    }

    #[test]
    fn single_bit_flip_breaks_orientation() {
        let t = Tournament::from_orientation(2, vec![1, 1, 2, 2], |_, _| true).unwrap();
        let w = build_witness(&normalize(&t)).unwrap();
        let order = w.order();
        for id in w.vertices() {
            // Swap id with the vertex differing in its lowest free bit.
            let v = w.vertex(id);
            let y = (1..=w.k()).rev().find(|&y| !w.source().same_part(v.base(), y)).unwrap();
            let other = w.id_of(&v.with_value(y, !v.value(y))).unwrap();
            let mut theta: Vec<_> = (1..=order).collect();
            theta.swap(id - 1, other - 1);
            // Oracle: scan every pair against the rule-derived arcs.
            let broken = (1..=order).any(|a| {
                (1..=order).any(|b| a != b && w.rule_arc(a, b) != w.rule_arc(theta[a - 1], theta[b - 1]))
            });
            assert!(broken);
            assert!(matches!(
                verify_automorphism(&w, &theta),
                Err(MapViolation::Orientation { .. })
            ));
        }
    }

    #[test]
    fn bijectivity_and_length_are_checked() {
        let t = Tournament::new(2, vec![1, 2], [(1, 2)]).unwrap();
        assert_eq!(
            verify_automorphism(&t, &[1]),
            Err(MapViolation::WrongLength { expected: 2, actual: 1 })
        );
        assert_eq!(
            verify_automorphism(&t, &[2, 2]),
            Err(MapViolation::NotInjective {
                first: 1,
                second: 2,
                image: 2
            })
        );
        assert_eq!(
            verify_automorphism(&t, &[2, 1]),
            Err(MapViolation::Orientation { u: 1, v: 2 })
        );
        assert_eq!(
            verify_automorphism(&t, &[3, 1]),
            Err(MapViolation::OutOfRange { vertex: 1, image: 3 })
        );
    }

    #[test]
    fn extends_examples() {
        let id = [1, 2, 3, 4];
        assert_eq!(verify_extends(&id, &PartialMap::new()), Ok(()));
        assert_eq!(verify_extends(&id, &PartialMap::identity_on([1, 3])), Ok(()));
        let phi = PartialMap::from_pairs([(1, 2)]).unwrap();
        assert_eq!(
            verify_extends(&id, &phi),
            Err(ExtensionMismatch {
                vertex: 1,
                expected: 2,
                actual: 1
            })
        );
    }
}
