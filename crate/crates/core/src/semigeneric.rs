//! The semi-generic parity condition on n-partite tournaments.

use serde::{Deserialize, Serialize};

use crate::graph::{Part, PartiteDigraph, Vertex};

/// Two vertices `left` of one part and two vertices `right` of another part
/// with an odd number of arcs from `left` to `right`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemigenericViolation {
    pub parts: (Part, Part),
    pub left: (Vertex, Vertex),
    pub right: (Vertex, Vertex),
    /// Number of arcs from `left` into `right` (1 or 3).
    pub forward_arcs: usize,
}

/// The first quadruple breaking the parity condition, scanning part pairs
/// `i < j` and then vertex pairs in ascending order.
///
/// Checking `i < j` suffices: the arcs from the `j` pair to the `i` pair
/// number `4 - forward_arcs`, which has the same parity.
pub fn semigeneric_violation<G: PartiteDigraph + ?Sized>(g: &G) -> Option<SemigenericViolation> {
    let members = g.part_members();
    let pairs_of = |part: &[Vertex]| -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for (i, &a) in part.iter().enumerate() {
            for &b in &part[i + 1..] {
                out.push((a, b));
            }
        }
        out
    };
    for i in 0..members.len() {
        let left_pairs = pairs_of(&members[i]);
        if left_pairs.is_empty() {
            continue;
        }
        for (j, right) in members.iter().enumerate().skip(i + 1) {
            let right_pairs = pairs_of(right);
            for &(a, b) in &left_pairs {
                for &(c, d) in &right_pairs {
                    let forward_arcs = [(a, c), (a, d), (b, c), (b, d)]
                        .into_iter()
                        .filter(|&(u, v)| g.has_arc(u, v))
                        .count();
                    if forward_arcs % 2 == 1 {
                        return Some(SemigenericViolation {
                            parts: (i + 1, j + 1),
                            left: (a, b),
                            right: (c, d),
                            forward_arcs,
                        });
                    }
                }
            }
        }
    }
    None
}

pub fn is_semigeneric<G: PartiteDigraph + ?Sized>(g: &G) -> bool {
    semigeneric_violation(g).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Tournament;

    #[test]
    fn uniform_direction_is_semigeneric() {
        let t = Tournament::from_orientation(2, vec![1, 1, 2, 2], |_, _| true).unwrap();
        assert!(is_semigeneric(&t));
    }

    #[test]
    fn odd_quadruple_is_found() {
        // a=1, b=2, c=3, d=4: a->c, a->d, b->c, d->b
        let t = Tournament::new(2, vec![1, 1, 2, 2], [(1, 3), (1, 4), (2, 3), (4, 2)]).unwrap();
        assert_eq!(
            semigeneric_violation(&t),
            Some(SemigenericViolation {
                parts: (1, 2),
                left: (1, 2),
                right: (3, 4),
                forward_arcs: 3,
            })
        );
    }

    #[test]
    fn singleton_parts_are_vacuously_semigeneric() {
        let t = Tournament::from_orientation(3, vec![1, 2, 3], |x, y| x + y != 4).unwrap();
        assert!(is_semigeneric(&t));
        let t = Tournament::from_orientation(2, vec![1, 2, 2], |x, y| x + y == 3).unwrap();
        assert!(is_semigeneric(&t));
    }
}
