//! n-partite digraphs, validated tournaments, partial maps and permutations.
//!
//! Vertices and parts are 1-based throughout: a structure of order `k` has
//! vertices `1..=k`, and a structure with `n` parts uses part indices `1..=n`.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A vertex identifier, `1..=order`.
pub type Vertex = usize;
/// A part index, `1..=part_count`.
pub type Part = usize;

/// Read-only view of a directed graph whose vertices carry a part label.
///
/// Implemented by the raw [`Digraph`], the validated [`Tournament`] and the
/// witness, so validation and verification code is written once.
pub trait PartiteDigraph {
    fn order(&self) -> usize;

    fn part_count(&self) -> usize;

    fn part_of(&self, v: Vertex) -> Part;

    /// Whether the arc `from -> to` is present.
    fn has_arc(&self, from: Vertex, to: Vertex) -> bool;

    fn same_part(&self, u: Vertex, v: Vertex) -> bool {
        self.part_of(u) == self.part_of(v)
    }

    fn vertices(&self) -> RangeInclusive<Vertex> {
        1..=self.order()
    }

    /// Vertices of each part, indexed by `part - 1`, each list ascending.
    fn part_members(&self) -> Vec<Vec<Vertex>> {
        let mut members = vec![Vec::new(); self.part_count()];
        for v in self.vertices() {
            let p = self.part_of(v);
            if (1..=members.len()).contains(&p) {
                members[p - 1].push(v);
            }
        }
        members
    }
}

impl<G: PartiteDigraph + ?Sized> PartiteDigraph for &G {
    fn order(&self) -> usize {
        (**self).order()
    }
    fn part_count(&self) -> usize {
        (**self).part_count()
    }
    fn part_of(&self, v: Vertex) -> Part {
        (**self).part_of(v)
    }
    fn has_arc(&self, from: Vertex, to: Vertex) -> bool {
        (**self).has_arc(from, to)
    }
}

/// A directed graph with a part assignment and no validity guarantees.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Digraph {
    part_count: usize,
    part_of: Vec<Part>,
    adjacency: Vec<bool>,
}

impl Digraph {
    /// A graph without arcs. `part_of[v - 1]` is the part of vertex `v`.
    pub fn new(part_count: usize, part_of: Vec<Part>) -> Self {
        let k = part_of.len();
        Digraph {
            part_count,
            part_of,
            adjacency: vec![false; k * k],
        }
    }

    pub fn with_arcs<I>(part_count: usize, part_of: Vec<Part>, arcs: I) -> Self
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Digraph::new(part_count, part_of);
        for (from, to) in arcs {
            g.add_arc(from, to);
        }
        g
    }

    /// Adds `from -> to`.
    ///
    /// # Panics
    /// Panics if either endpoint is outside `1..=order`.
    pub fn add_arc(&mut self, from: Vertex, to: Vertex) {
        let idx = self.index(from, to);
        self.adjacency[idx] = true;
    }

    pub fn remove_arc(&mut self, from: Vertex, to: Vertex) {
        let idx = self.index(from, to);
        self.adjacency[idx] = false;
    }

    /// All arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        let k = self.order();
        self.adjacency
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(move |(i, _)| (i / k + 1, i % k + 1))
    }

    pub fn part_assignment(&self) -> &[Part] {
        &self.part_of
    }

    fn index(&self, from: Vertex, to: Vertex) -> usize {
        let k = self.order();
        assert!(
            (1..=k).contains(&from) && (1..=k).contains(&to),
            "arc {from}->{to} outside 1..={k}"
        );
        (from - 1) * k + (to - 1)
    }
}

impl PartiteDigraph for Digraph {
    fn order(&self) -> usize {
        self.part_of.len()
    }
    fn part_count(&self) -> usize {
        self.part_count
    }
    fn part_of(&self, v: Vertex) -> Part {
        self.part_of[v - 1]
    }
    fn has_arc(&self, from: Vertex, to: Vertex) -> bool {
        self.adjacency[self.index(from, to)]
    }
}

/// The first broken tournament invariant found by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    #[error("too few parts: n = {part_count}, at least 2 required")]
    TooFewParts { part_count: usize },
    #[error("vertex {vertex} assigned to part {part}, outside 1..={part_count}")]
    PartOutOfRange {
        vertex: Vertex,
        part: Part,
        part_count: usize,
    },
    #[error("part {part} is empty")]
    EmptyPart { part: Part },
    #[error("self-loop at {vertex}")]
    SelfLoop { vertex: Vertex },
    #[error("intra-part edge {from}->{to}")]
    IntraPartEdge { from: Vertex, to: Vertex },
    #[error("antisymmetry at {{{x},{y}}}")]
    Antisymmetry { x: Vertex, y: Vertex },
    #[error("completeness at {{{x},{y}}}: no edge between different parts")]
    MissingEdge { x: Vertex, y: Vertex },
}

/// Checks every n-partite tournament invariant and reports the first failure.
///
/// Structural checks (part count, part range, empty parts) come first, then
/// pairs `(x, y)` with `x <= y` are scanned in lexicographic order.
pub fn validate<G: PartiteDigraph + ?Sized>(g: &G) -> Result<(), Violation> {
    if g.part_count() < 2 {
        return Err(Violation::TooFewParts {
            part_count: g.part_count(),
        });
    }
    validate_substructure(g)
}

/// Like [`validate`] but accepts a single part, i.e. any induced
/// substructure of an n-partite tournament.
pub fn validate_substructure<G: PartiteDigraph + ?Sized>(g: &G) -> Result<(), Violation> {
    let n = g.part_count();
    let mut seen = vec![false; n];
    for v in g.vertices() {
        let part = g.part_of(v);
        if part == 0 || part > n {
            return Err(Violation::PartOutOfRange {
                vertex: v,
                part,
                part_count: n,
            });
        }
        seen[part - 1] = true;
    }
    if let Some(p) = seen.iter().position(|s| !s) {
        return Err(Violation::EmptyPart { part: p + 1 });
    }
    let k = g.order();
    for x in 1..=k {
        if g.has_arc(x, x) {
            return Err(Violation::SelfLoop { vertex: x });
        }
        for y in x + 1..=k {
            let forward = g.has_arc(x, y);
            let backward = g.has_arc(y, x);
            if g.same_part(x, y) {
                if forward {
                    return Err(Violation::IntraPartEdge { from: x, to: y });
                }
                if backward {
                    return Err(Violation::IntraPartEdge { from: y, to: x });
                }
            } else if forward && backward {
                return Err(Violation::Antisymmetry { x, y });
            } else if !forward && !backward {
                return Err(Violation::MissingEdge { x, y });
            }
        }
    }
    Ok(())
}

/// A finite n-partite tournament, validated on construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tournament(Digraph);

impl Tournament {
    pub fn new<I>(part_count: usize, part_of: Vec<Part>, arcs: I) -> Result<Self, Violation>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        Tournament::try_from(Digraph::with_arcs(part_count, part_of, arcs))
    }

    /// Builds a tournament from a part assignment and a rule choosing, for
    /// every cross-part pair `x < y`, whether the arc is `x -> y` (`true`)
    /// or `y -> x` (`false`).
    pub fn from_orientation<F>(
        part_count: usize,
        part_of: Vec<Part>,
        mut forward: F,
    ) -> Result<Self, Violation>
    where
        F: FnMut(Vertex, Vertex) -> bool,
    {
        let mut g = Digraph::new(part_count, part_of);
        let k = g.order();
        for x in 1..=k {
            for y in x + 1..=k {
                if g.part_of(x) != g.part_of(y) {
                    if forward(x, y) {
                        g.add_arc(x, y);
                    } else {
                        g.add_arc(y, x);
                    }
                }
            }
        }
        Tournament::try_from(g)
    }

    pub fn as_digraph(&self) -> &Digraph {
        &self.0
    }

    pub fn into_digraph(self) -> Digraph {
        self.0
    }

    pub fn arcs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.0.arcs()
    }

    pub fn part_assignment(&self) -> &[Part] {
        self.0.part_assignment()
    }
}

impl TryFrom<Digraph> for Tournament {
    type Error = Violation;

    fn try_from(g: Digraph) -> Result<Self, Violation> {
        validate(&g)?;
        Ok(Tournament(g))
    }
}

impl PartiteDigraph for Tournament {
    fn order(&self) -> usize {
        self.0.order()
    }
    fn part_count(&self) -> usize {
        self.0.part_count()
    }
    fn part_of(&self, v: Vertex) -> Part {
        self.0.part_of(v)
    }
    fn has_arc(&self, from: Vertex, to: Vertex) -> bool {
        self.0.has_arc(from, to)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("vertex {vertex} appears twice in the domain")]
    DuplicateSource { vertex: Vertex },
    #[error("vertex {image} is the image of both {first} and {second}")]
    NotInjective {
        image: Vertex,
        first: Vertex,
        second: Vertex,
    },
}

/// An injective map from a finite set of vertices to vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "Vec<(Vertex, Vertex)>", try_from = "Vec<(Vertex, Vertex)>")]
pub struct PartialMap {
    pairs: BTreeMap<Vertex, Vertex>,
}

impl PartialMap {
    pub fn new() -> Self {
        PartialMap::default()
    }

    pub fn from_pairs<I>(pairs: I) -> Result<Self, MapError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut map = BTreeMap::new();
        let mut inverse = BTreeMap::new();
        for (x, y) in pairs {
            if map.insert(x, y).is_some() {
                return Err(MapError::DuplicateSource { vertex: x });
            }
            if let Some(first) = inverse.insert(y, x) {
                return Err(MapError::NotInjective {
                    image: y,
                    first,
                    second: x,
                });
            }
        }
        Ok(PartialMap { pairs: map })
    }

    pub fn identity_on<I: IntoIterator<Item = Vertex>>(domain: I) -> Self {
        PartialMap {
            pairs: domain.into_iter().map(|x| (x, x)).collect(),
        }
    }

    pub fn get(&self, x: Vertex) -> Option<Vertex> {
        self.pairs.get(&x).copied()
    }

    pub fn contains(&self, x: Vertex) -> bool {
        self.pairs.contains_key(&x)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Pairs in ascending order of source.
    pub fn iter(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.pairs.iter().map(|(&x, &y)| (x, y))
    }

    pub fn domain(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.pairs.keys().copied()
    }

    pub fn image(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.pairs.values().copied()
    }

    pub fn inverse(&self) -> PartialMap {
        PartialMap {
            pairs: self.pairs.iter().map(|(&x, &y)| (y, x)).collect(),
        }
    }

    pub fn restrict<F: FnMut(Vertex) -> bool>(&self, mut keep: F) -> PartialMap {
        PartialMap {
            pairs: self
                .pairs
                .iter()
                .filter(|(&x, _)| keep(x))
                .map(|(&x, &y)| (x, y))
                .collect(),
        }
    }

    /// Conjugates the map by an injection `f`: `f(x) -> f(self(x))`.
    pub fn transport<F: FnMut(Vertex) -> Vertex>(&self, mut f: F) -> PartialMap {
        PartialMap {
            pairs: self.pairs.iter().map(|(&x, &y)| (f(x), f(y))).collect(),
        }
    }
}

impl From<PartialMap> for Vec<(Vertex, Vertex)> {
    fn from(map: PartialMap) -> Self {
        map.pairs.into_iter().collect()
    }
}

impl TryFrom<Vec<(Vertex, Vertex)>> for PartialMap {
    type Error = MapError;

    fn try_from(pairs: Vec<(Vertex, Vertex)>) -> Result<Self, MapError> {
        PartialMap::from_pairs(pairs)
    }
}

impl std::fmt::Display for PartialMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("{")?;
        for (i, (x, y)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}->{y}")?;
        }
        f.write_str("}")
    }
}

/// Whether `p` is an isomorphism between the substructures of `g` induced on
/// its domain and on its image.
pub fn is_partial_automorphism<G: PartiteDigraph + ?Sized>(g: &G, p: &PartialMap) -> bool {
    let range = 1..=g.order();
    if !p.iter().all(|(x, y)| range.contains(&x) && range.contains(&y)) {
        return false;
    }
    let pairs: Vec<_> = p.iter().collect();
    for (i, &(x, px)) in pairs.iter().enumerate() {
        for &(y, py) in &pairs[i + 1..] {
            if g.same_part(x, y) != g.same_part(px, py)
                || g.has_arc(x, y) != g.has_arc(px, py)
                || g.has_arc(y, x) != g.has_arc(py, px)
            {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not a permutation of 1..={len}: {reason}")]
pub struct PermutationError {
    pub len: usize,
    pub reason: String,
}

/// A bijection of `1..=len`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<usize>", try_from = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(len: usize) -> Self {
        Permutation {
            images: (1..=len).collect(),
        }
    }

    /// `images[i - 1]` is the image of `i`.
    pub fn from_images(images: Vec<usize>) -> Result<Self, PermutationError> {
        let len = images.len();
        let mut hit = vec![false; len];
        for (i, &y) in images.iter().enumerate() {
            if y == 0 || y > len {
                return Err(PermutationError {
                    len,
                    reason: format!("{} maps to {y}", i + 1),
                });
            }
            if std::mem::replace(&mut hit[y - 1], true) {
                return Err(PermutationError {
                    len,
                    reason: format!("{y} is hit twice"),
                });
            }
        }
        Ok(Permutation { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &y) in self.images.iter().enumerate() {
            inv[y - 1] = i + 1;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &y)| y == i + 1)
    }

    /// Whether the permutation agrees with `map` on its domain.
    pub fn extends(&self, map: &PartialMap) -> bool {
        map.iter()
            .all(|(x, y)| (1..=self.len()).contains(&x) && self.apply(x) == y)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = PermutationError;

    fn try_from(images: Vec<usize>) -> Result<Self, PermutationError> {
        Permutation::from_images(images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(arcs: &[(Vertex, Vertex)]) -> Digraph {
        Digraph::with_arcs(2, vec![1, 2], arcs.iter().copied())
    }

    #[test]
    fn smallest_instance_is_valid() {
        assert_eq!(validate(&pair(&[(1, 2)])), Ok(()));
    }

    #[test]
    fn both_directions_break_antisymmetry() {
        let err = validate(&pair(&[(1, 2), (2, 1)])).unwrap_err();
        assert_eq!(err, Violation::Antisymmetry { x: 1, y: 2 });
        assert_eq!(err.to_string(), "antisymmetry at {1,2}");
    }

    #[test]
    fn intra_part_edge_is_reported() {
        let g = Digraph::with_arcs(2, vec![1, 1, 2], [(1, 2), (1, 3), (2, 3)]);
        assert_eq!(
            validate(&g),
            Err(Violation::IntraPartEdge { from: 1, to: 2 })
        );
        assert!(validate(&g).unwrap_err().to_string().starts_with("intra-part edge"));
    }

    #[test]
    fn missing_cross_edge_is_reported() {
        let g = Digraph::with_arcs(2, vec![1, 2, 2], [(1, 2)]);
        assert_eq!(validate(&g), Err(Violation::MissingEdge { x: 1, y: 3 }));
    }

    #[test]
    fn structural_violations() {
        assert_eq!(
            validate(&Digraph::new(1, vec![1])),
            Err(Violation::TooFewParts { part_count: 1 })
        );
        assert_eq!(
            validate(&Digraph::new(3, vec![1, 2])),
            Err(Violation::EmptyPart { part: 3 })
        );
        assert_eq!(
            validate(&Digraph::new(2, vec![1, 3])),
            Err(Violation::PartOutOfRange {
                vertex: 2,
                part: 3,
                part_count: 2
            })
        );
        let mut g = pair(&[(1, 2)]);
        g.add_arc(2, 2);
        assert_eq!(validate(&g), Err(Violation::SelfLoop { vertex: 2 }));
        assert_eq!(validate_substructure(&Digraph::new(1, vec![1])), Ok(()));
    }

    #[test]
    fn first_violation_follows_lexicographic_scan() {
        // {1,3} is missing and {2,3} doubled; {1,3} comes first.
        let g = Digraph::with_arcs(2, vec![1, 1, 2], [(2, 3), (3, 2)]);
        assert_eq!(validate(&g), Err(Violation::MissingEdge { x: 1, y: 3 }));
    }

    #[test]
    fn partial_automorphism_examples() {
        let t = Tournament::new(2, vec![1, 2], [(1, 2)]).unwrap();
        assert!(is_partial_automorphism(&t, &PartialMap::new()));
        for x in 1..=2 {
            for y in 1..=2 {
                let p = PartialMap::from_pairs([(x, y)]).unwrap();
                assert!(is_partial_automorphism(&t, &p));
            }
        }
        let swap = PartialMap::from_pairs([(1, 2), (2, 1)]).unwrap();
        assert!(!is_partial_automorphism(&t, &swap));
        let out_of_range = PartialMap::from_pairs([(1, 3)]).unwrap();
        assert!(!is_partial_automorphism(&t, &out_of_range));
    }

    #[test]
    fn partial_map_rejects_non_injective_input() {
        assert_eq!(
            PartialMap::from_pairs([(1, 2), (3, 2)]),
            Err(MapError::NotInjective {
                image: 2,
                first: 1,
                second: 3
            })
        );
        assert_eq!(
            PartialMap::from_pairs([(1, 2), (1, 3)]),
            Err(MapError::DuplicateSource { vertex: 1 })
        );
    }

    #[test]
    fn permutation_roundtrip() {
        let p = Permutation::from_images(vec![2, 3, 1]).unwrap();
        assert_eq!(p.inverse().images(), &[3, 1, 2]);
        assert!(Permutation::from_images(vec![1, 1]).is_err());
        assert!(Permutation::from_images(vec![0]).is_err());
        assert!(Permutation::identity(4).is_identity());
    }

    #[test]
    fn tournament_from_orientation_matches_arcs() {
        let t = Tournament::from_orientation(2, vec![1, 1, 2, 2], |x, y| (x + y) % 2 == 0).unwrap();
        assert!(t.has_arc(1, 3));
        assert!(t.has_arc(4, 1));
        assert!(t.has_arc(3, 2));
        assert!(t.has_arc(2, 4));
        assert_eq!(t.arcs().count(), 4);
    }
}
