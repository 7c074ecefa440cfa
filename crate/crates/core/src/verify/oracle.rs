//! Backtracking search for automorphisms extending a partial map.
//!
//! The search only queries parts and arcs through [`PartiteDigraph`], so it
//! knows nothing about valuation functions or flip tables and can be used to
//! cross-check the explicit extension.

use std::ops::ControlFlow;

use itertools::Itertools;
use thiserror::Error;

use crate::graph::{is_partial_automorphism, PartialMap, PartiteDigraph, Vertex};

/// Largest structure the oracle will search by default.
pub const DEFAULT_ORACLE_BUDGET: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("structure has {order} vertices, over the search budget of {budget}")]
    TooLarge { order: usize, budget: usize },
    #[error("input map {map} is not a partial automorphism")]
    NotPartialAutomorphism { map: PartialMap },
}

/// Whether some automorphism of `g` extends `phi`, with the default budget.
pub fn oracle_extendable<G: PartiteDigraph + ?Sized>(g: &G, phi: &PartialMap) -> Result<bool, OracleError> {
    Ok(find_extending_automorphism(g, phi, DEFAULT_ORACLE_BUDGET)?.is_some())
}

/// Searches for an automorphism of `g` extending `phi`. The result maps
/// vertex `v` to `result[v - 1]`.
///
/// Every part permutation compatible with `phi` and the part sizes is tried
/// in turn. Within one, vertices are assigned most-constrained first, trying
/// images in ascending order, and each assignment prunes the candidate sets
/// of all unassigned vertices.
pub fn find_extending_automorphism<G: PartiteDigraph + ?Sized>(
    g: &G,
    phi: &PartialMap,
    budget: usize,
) -> Result<Option<Vec<Vertex>>, OracleError> {
    let order = g.order();
    if order > budget {
        return Err(OracleError::TooLarge { order, budget });
    }
    if !is_partial_automorphism(g, phi) {
        return Err(OracleError::NotPartialAutomorphism { map: phi.clone() });
    }
    let members = g.part_members();
    let n = members.len();
    let required: Vec<(usize, usize)> = phi
        .iter()
        .map(|(x, y)| (g.part_of(x) - 1, g.part_of(y) - 1))
        .collect();

    for sigma in (0..n).permutations(n) {
        let compatible = required.iter().all(|&(p, q)| sigma[p] == q)
            && (0..n).all(|p| members[p].len() == members[sigma[p]].len());
        if !compatible {
            continue;
        }
        let mut search = Search::new(g, &members, &sigma);
        if let Some(found) = search.run(phi) {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

struct Search<'a, G: ?Sized> {
    g: &'a G,
    order: usize,
    stride: usize,
    /// Candidate images of vertex `v` at bits `(v - 1) * stride ..`.
    domains: Vec<u64>,
    assigned: Vec<Vertex>,
    trail: Vec<(usize, u64)>,
}

impl<'a, G: PartiteDigraph + ?Sized> Search<'a, G> {
    fn new(g: &'a G, members: &[Vec<Vertex>], sigma: &[usize]) -> Self {
        let order = g.order();
        let stride = order.div_ceil(64).max(1);
        let mut domains = vec![0u64; order * stride];
        for v in 1..=order {
            let row = (v - 1) * stride;
            for &t in &members[sigma[g.part_of(v) - 1]] {
                domains[row + (t - 1) / 64] |= 1 << ((t - 1) % 64);
            }
        }
        Search {
            g,
            order,
            stride,
            domains,
            assigned: vec![0; order],
            trail: Vec::new(),
        }
    }

    fn run(&mut self, phi: &PartialMap) -> Option<Vec<Vertex>> {
        for (x, y) in phi.iter() {
            if !self.domain_contains(x, y) {
                return None;
            }
            self.assigned[x - 1] = y;
            if !self.propagate(x, y) {
                return None;
            }
        }
        self.solve().then(|| self.assigned.clone())
    }

    fn domain_contains(&self, v: Vertex, t: Vertex) -> bool {
        self.domains[(v - 1) * self.stride + (t - 1) / 64] >> ((t - 1) % 64) & 1 == 1
    }

    fn domain_size(&self, v: Vertex) -> u32 {
        let row = (v - 1) * self.stride;
        self.domains[row..row + self.stride].iter().map(|w| w.count_ones()).sum()
    }

    fn candidates(&self, v: Vertex) -> Vec<Vertex> {
        let row = (v - 1) * self.stride;
        let mut out = Vec::new();
        for (i, &word) in self.domains[row..row + self.stride].iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(i * 64 + b + 1);
                bits &= bits - 1;
            }
        }
        out
    }

    /// Removes from every unassigned domain the images incompatible with
    /// `v -> t`. Returns false if some domain empties.
    fn propagate(&mut self, v: Vertex, t: Vertex) -> bool {
        let g = self.g;
        for u in 1..=self.order {
            if self.assigned[u - 1] != 0 {
                continue;
            }
            let (uv, vu) = (g.has_arc(u, v), g.has_arc(v, u));
            let same = g.same_part(u, v);
            let row = (u - 1) * self.stride;
            let mut empty = true;
            for i in 0..self.stride {
                let word = self.domains[row + i];
                let mut bits = word;
                let mut removed = 0u64;
                while bits != 0 {
                    let b = bits.trailing_zeros() as usize;
                    let c = i * 64 + b + 1;
                    if c == t
                        || g.same_part(c, t) != same
                        || g.has_arc(c, t) != uv
                        || g.has_arc(t, c) != vu
                    {
                        removed |= 1 << b;
                    }
                    bits &= bits - 1;
                }
                if removed != 0 {
                    self.domains[row + i] = word & !removed;
                    self.trail.push((row + i, removed));
                }
                if self.domains[row + i] != 0 {
                    empty = false;
                }
            }
            if empty {
                return false;
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (slot, removed) = self.trail.pop().expect("trail above mark");
            self.domains[slot] |= removed;
        }
    }

    fn solve(&mut self) -> bool {
        let next = (1..=self.order)
            .filter(|&v| self.assigned[v - 1] == 0)
            .min_by_key(|&v| (self.domain_size(v), v));
        let Some(v) = next else {
            return true;
        };
        for t in self.candidates(v) {
            let mark = self.trail.len();
            self.assigned[v - 1] = t;
            if self.propagate(v, t) && self.solve() {
                return true;
            }
            self.undo(mark);
            self.assigned[v - 1] = 0;
        }
        false
    }
}

/// Backtracking search for an embedding of `source` into `target`: an
/// injection preserving the part relation and arc directions.
pub fn find_embedding<S, T>(source: &S, target: &T) -> Option<Vec<Vertex>>
where
    S: PartiteDigraph + ?Sized,
    T: PartiteDigraph + ?Sized,
{
    let mut found = None;
    for_each_embedding(source, target, |e| {
        found = Some(e.to_vec());
        ControlFlow::Break(())
    });
    found
}

/// Calls `visit` on every embedding of `source` into `target`, in
/// lexicographic order of image tuples, until it returns `Break`.
pub fn for_each_embedding<S, T, F>(source: &S, target: &T, mut visit: F)
where
    S: PartiteDigraph + ?Sized,
    T: PartiteDigraph + ?Sized,
    F: FnMut(&[Vertex]) -> ControlFlow<()>,
{
    fn go<S, T, F>(source: &S, target: &T, current: &mut Vec<Vertex>, visit: &mut F) -> ControlFlow<()>
    where
        S: PartiteDigraph + ?Sized,
        T: PartiteDigraph + ?Sized,
        F: FnMut(&[Vertex]) -> ControlFlow<()>,
    {
        let x = current.len() + 1;
        if x > source.order() {
            return visit(current);
        }
        for c in target.vertices() {
            let ok = current.iter().enumerate().all(|(i, &d)| {
                let y = i + 1;
                d != c
                    && source.same_part(x, y) == target.same_part(c, d)
                    && source.has_arc(x, y) == target.has_arc(c, d)
                    && source.has_arc(y, x) == target.has_arc(d, c)
            });
            if ok {
                current.push(c);
                go(source, target, current, visit)?;
                current.pop();
            }
        }
        ControlFlow::Continue(())
    }
    let mut current = Vec::with_capacity(source.order());
    let _ = go(source, target, &mut current, &mut visit);
}
