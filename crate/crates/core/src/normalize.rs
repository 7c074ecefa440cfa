//! Relabeling and padding a tournament so that its parts are contiguous,
//! ascending and of equal size.

use crate::graph::{PartiteDigraph, Part, Tournament, Vertex};

/// A tournament on `1..=k` whose parts are the intervals
/// `(i - 1) * m + 1 ..= i * m`, together with the record of how it was
/// obtained from the original input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedTournament {
    tournament: Tournament,
    part_size: usize,
    /// `relabel[v - 1]` is the label of original vertex `v`.
    relabel: Vec<Vertex>,
    /// `original[label - 1]` is the original vertex, `None` for padding.
    original: Vec<Option<Vertex>>,
    padding: Vec<Vertex>,
}

/// Pads and relabels `t`.
///
/// Within each part, original vertices come first in ascending original
/// order, followed by the padding vertices needed to reach the largest part
/// size. Every arc touching a padding vertex points from the smaller label to
/// the larger one. Parts keep their indices.
pub fn normalize(t: &Tournament) -> NormalizedTournament {
    let n = t.part_count();
    let members = t.part_members();
    let m = members.iter().map(Vec::len).max().unwrap_or(0);
    let k = n * m;

    let mut relabel = vec![0; t.order()];
    let mut original = vec![None; k];
    let mut padding = Vec::new();
    let mut part_of = Vec::with_capacity(k);
    for (i, part) in members.iter().enumerate() {
        let base = i * m;
        for (offset, &v) in part.iter().enumerate() {
            relabel[v - 1] = base + offset + 1;
            original[base + offset] = Some(v);
        }
        padding.extend(base + part.len() + 1..=base + m);
        part_of.extend(std::iter::repeat_n(i + 1, m));
    }

    let tournament = Tournament::from_orientation(n, part_of, |x, y| {
        match (original[x - 1], original[y - 1]) {
            (Some(a), Some(b)) => t.has_arc(a, b),
            _ => true,
        }
    })
    .expect("padded relabeling of a valid tournament is a tournament");

    NormalizedTournament {
        tournament,
        part_size: m,
        relabel,
        original,
        padding,
    }
}

impl NormalizedTournament {
    pub fn tournament(&self) -> &Tournament {
        &self.tournament
    }

    /// `k`, the number of vertices after padding.
    pub fn k(&self) -> usize {
        self.tournament.order()
    }

    /// `n`, the number of parts.
    pub fn n(&self) -> usize {
        self.tournament.part_count()
    }

    /// `m = k / n`, the common part size.
    pub fn part_size(&self) -> usize {
        self.part_size
    }

    /// New label of an original vertex.
    pub fn relabel(&self, v: Vertex) -> Vertex {
        self.relabel[v - 1]
    }

    pub fn relabeling(&self) -> &[Vertex] {
        &self.relabel
    }

    /// Original vertex carrying `label`, or `None` for padding.
    pub fn original_of(&self, label: Vertex) -> Option<Vertex> {
        self.original[label - 1]
    }

    pub fn padding(&self) -> &[Vertex] {
        &self.padding
    }

    pub fn is_padding(&self, label: Vertex) -> bool {
        self.original[label - 1].is_none()
    }

    /// Number of vertices of the input before padding.
    pub fn original_order(&self) -> usize {
        self.relabel.len()
    }

    /// Whether the relabeling is the identity and nothing was padded.
    pub fn is_identity(&self) -> bool {
        self.padding.is_empty() && self.relabel.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// Vertices of part `i`, i.e. `(i - 1) * m + 1 ..= i * m`.
    pub fn part_range(&self, part: Part) -> std::ops::RangeInclusive<Vertex> {
        (part - 1) * self.part_size + 1..=part * self.part_size
    }
}

impl PartiteDigraph for NormalizedTournament {
    fn order(&self) -> usize {
        self.tournament.order()
    }
    fn part_count(&self) -> usize {
        self.tournament.part_count()
    }
    fn part_of(&self, v: Vertex) -> Part {
        self.tournament.part_of(v)
    }
    fn has_arc(&self, from: Vertex, to: Vertex) -> bool {
        self.tournament.has_arc(from, to)
    }
}

/// Whether `t` already has contiguous ascending parts of equal size.
pub fn is_normalized<G: PartiteDigraph + ?Sized>(t: &G) -> bool {
    let n = t.part_count();
    if n == 0 || !t.order().is_multiple_of(n) {
        return false;
    }
    let m = t.order() / n;
    t.vertices().all(|v| t.part_of(v) == (v - 1) / m + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sizes(parts: &[usize]) -> Tournament {
        let part_of: Vec<_> = parts
            .iter()
            .enumerate()
            .flat_map(|(i, &s)| std::iter::repeat_n(i + 1, s))
            .collect();
        Tournament::from_orientation(parts.len(), part_of, |x, y| x % 2 == y % 2).unwrap()
    }

    #[test]
    fn already_normalized_is_identity() {
        let t = sizes(&[2, 2]);
        let norm = normalize(&t);
        assert!(norm.is_identity());
        assert_eq!(norm.tournament(), &t);
    }

    #[test]
    fn unequal_parts_are_padded() {
        let norm = normalize(&sizes(&[2, 1]));
        assert_eq!((norm.k(), norm.part_size()), (4, 2));
        assert_eq!(norm.padding(), &[4]);
        assert!(is_normalized(norm.tournament()));
    }

    #[test]
    fn three_parts_pad_to_largest() {
        // m = max(1, 1, 3) = 3, padding = (3-1) + (3-1) + 0 = 4.
        let norm = normalize(&sizes(&[1, 1, 3]));
        assert_eq!((norm.k(), norm.part_size(), norm.padding().len()), (9, 3, 4));
        assert_eq!(norm.padding(), &[2, 3, 5, 6]);
    }

    #[test]
    fn interleaved_parts_are_made_contiguous() {
        // parts: 1 -> {1, 3}, 2 -> {2, 4, 5}
        let t = Tournament::from_orientation(2, vec![1, 2, 1, 2, 2], |x, y| x * y % 3 != 0).unwrap();
        let norm = normalize(&t);
        assert_eq!(norm.relabeling(), &[1, 4, 2, 5, 6]);
        assert_eq!(norm.padding(), &[3]);
        for x in t.vertices() {
            for y in t.vertices() {
                if x != y {
                    assert_eq!(t.has_arc(x, y), norm.has_arc(norm.relabel(x), norm.relabel(y)));
                }
            }
        }
        // padding arcs go from smaller to larger label
        assert!(norm.has_arc(3, 4) && norm.has_arc(3, 5) && norm.has_arc(3, 6));
        assert_eq!(norm.original_of(3), None);
        assert_eq!(norm.original_of(4), Some(2));
    }

    #[test]
    fn normalize_is_idempotent() {
        let once = normalize(&sizes(&[3, 1, 2]));
        let twice = normalize(once.tournament());
        assert!(twice.is_identity());
        assert_eq!(twice.tournament(), once.tournament());
    }
}
