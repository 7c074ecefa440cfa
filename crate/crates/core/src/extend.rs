//! Extending a partial automorphism of the embedded copy `ψ(G)` to an
//! automorphism `θ` of the witness.
//!
//! The input map induces a partial permutation of source vertices and of
//! parts. Both are completed to total permutations `ι̂` (parts) and `φ̂`
//! (vertices) with `φ̂` carrying part `i` onto part `ι̂(i)`. A flip table then
//! decides for each pair `{x, y}` which endpoint valuations get the bit at the
//! other endpoint negated, and `θ` moves `(x, χ)` to the valuation over
//! `φ̂(x)` whose bit at `φ̂(y)` is `χ(y)`, negated when the flip bit
//! `F_{x,y}(x)` is set.

use rand::seq::SliceRandom;
use rand::RngCore;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{is_partial_automorphism, PartialMap, Part, PartiteDigraph, Permutation, Vertex};
use crate::normalize::NormalizedTournament;
use crate::witness::{position_bit, ValuationVertex, Witness};

/// Witnesses at least this large compute `θ` in parallel.
const PARALLEL_THETA_THRESHOLD: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtendError {
    #[error("witness vertex {vertex} is not in the witness")]
    OutOfRange { vertex: Vertex },
    #[error("domain vertex {vertex} is not in the embedded copy ψ(G)")]
    DomainOutsideEmbedding { vertex: Vertex },
    #[error("image vertex {vertex} is not in the embedded copy ψ(G)")]
    ImageOutsideEmbedding { vertex: Vertex },
    #[error("map is not a partial automorphism of the witness")]
    NotPartialAutomorphism,
    #[error("part {part} is sent to both {first} and {second}")]
    IllDefinedPartMap { part: Part, first: Part, second: Part },
    #[error("parts {first} and {second} are both sent to {image}")]
    PartMapNotInjective { image: Part, first: Part, second: Part },
    #[error("vertex map sends {vertex} to {image}, outside part {expected}")]
    PartInconsistent {
        vertex: Vertex,
        image: Vertex,
        expected: Part,
    },
    #[error("flip conditions disagree on pair {{{x},{y}}}")]
    FlipInconsistency { x: Vertex, y: Vertex },
}

/// The maps induced on source vertices and on parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedMaps {
    pub vertices: PartialMap,
    pub parts: PartialMap,
}

/// Reads off `x -> π(φ(ψ(x)))` and the part map it induces.
pub fn induced_maps(w: &Witness, phi: &PartialMap) -> Result<InducedMaps, ExtendError> {
    let order = w.order();
    let mut pairs = Vec::with_capacity(phi.len());
    for (u, v) in phi.iter() {
        for vertex in [u, v] {
            if vertex == 0 || vertex > order {
                return Err(ExtendError::OutOfRange { vertex });
            }
        }
        let x = w
            .psi_preimage(u)
            .ok_or(ExtendError::DomainOutsideEmbedding { vertex: u })?;
        let y = w
            .psi_preimage(v)
            .ok_or(ExtendError::ImageOutsideEmbedding { vertex: v })?;
        pairs.push((x, y));
    }
    let vertices = PartialMap::from_pairs(pairs).expect("ψ is injective");

    let g = w.source();
    let mut part_pairs: Vec<(Part, Part)> = Vec::new();
    for (x, y) in vertices.iter() {
        let (from, to) = (g.part_of(x), g.part_of(y));
        match part_pairs.iter().find(|&&(p, _)| p == from) {
            Some(&(_, seen)) if seen != to => {
                return Err(ExtendError::IllDefinedPartMap {
                    part: from,
                    first: seen,
                    second: to,
                })
            }
            Some(_) => {}
            None => {
                if let Some(&(other, _)) = part_pairs.iter().find(|&&(_, q)| q == to) {
                    return Err(ExtendError::PartMapNotInjective {
                        image: to,
                        first: other,
                        second: from,
                    });
                }
                part_pairs.push((from, to));
            }
        }
    }
    let parts = PartialMap::from_pairs(part_pairs).expect("checked injective above");
    Ok(InducedMaps { vertices, parts })
}

fn reborrow<'a>(rng: &'a mut Option<&mut dyn RngCore>) -> Option<&'a mut dyn RngCore> {
    match rng {
        Some(r) => Some(&mut **r),
        None => None,
    }
}

/// Completes a partial permutation of `1..=len` by matching the unmapped
/// sources to the unused targets, both ascending unless `rng` shuffles the
/// targets.
fn complete(map: &PartialMap, sources: &[usize], targets: &[usize], rng: Option<&mut dyn RngCore>, out: &mut [usize]) {
    let free_sources: Vec<_> = sources.iter().copied().filter(|&s| !map.contains(s)).collect();
    let used: std::collections::BTreeSet<_> = map.image().collect();
    let mut free_targets: Vec<_> = targets.iter().copied().filter(|t| !used.contains(t)).collect();
    if let Some(rng) = rng {
        free_targets.shuffle(rng);
    }
    debug_assert_eq!(free_sources.len(), free_targets.len());
    for (s, t) in free_sources.into_iter().zip(free_targets) {
        out[s - 1] = t;
    }
}

fn complete_parts_inner(iota: &PartialMap, n: usize, rng: Option<&mut dyn RngCore>) -> Permutation {
    let mut images = vec![0; n];
    for (p, q) in iota.iter() {
        images[p - 1] = q;
    }
    let all: Vec<_> = (1..=n).collect();
    complete(iota, &all, &all, rng, &mut images);
    Permutation::from_images(images).expect("completion of a partial permutation")
}

/// `ι̂`: extends a partial permutation of parts `1..=n`, matching unmapped
/// parts ascending to unused parts ascending.
pub fn complete_parts(iota: &PartialMap, n: usize) -> Permutation {
    complete_parts_inner(iota, n, None)
}

/// Like [`complete_parts`] with the unused parts matched in random order.
pub fn complete_parts_shuffled(iota: &PartialMap, n: usize, rng: &mut dyn RngCore) -> Permutation {
    complete_parts_inner(iota, n, Some(rng))
}

fn complete_vertices_inner(
    vertex_map: &PartialMap,
    iota_hat: &Permutation,
    g: &NormalizedTournament,
    mut rng: Option<&mut dyn RngCore>,
) -> Result<Permutation, ExtendError> {
    let mut images = vec![0; g.k()];
    for (x, y) in vertex_map.iter() {
        let expected = iota_hat.apply(g.part_of(x));
        if y == 0 || y > g.k() || g.part_of(y) != expected {
            return Err(ExtendError::PartInconsistent {
                vertex: x,
                image: y,
                expected,
            });
        }
        images[x - 1] = y;
    }
    for part in 1..=g.n() {
        let sources: Vec<_> = g.part_range(part).collect();
        let targets: Vec<_> = g.part_range(iota_hat.apply(part)).collect();
        complete(vertex_map, &sources, &targets, reborrow(&mut rng), &mut images);
    }
    Ok(Permutation::from_images(images).expect("part-wise completion of a partial permutation"))
}

/// `φ̂`: extends the vertex map to a permutation of `1..=k` sending part `i`
/// onto part `ι̂(i)`. Within each part, unmapped sources ascending are
/// matched to unused targets ascending.
pub fn complete_vertices(
    vertex_map: &PartialMap,
    iota_hat: &Permutation,
    g: &NormalizedTournament,
) -> Result<Permutation, ExtendError> {
    complete_vertices_inner(vertex_map, iota_hat, g, None)
}

pub fn complete_vertices_shuffled(
    vertex_map: &PartialMap,
    iota_hat: &Permutation,
    g: &NormalizedTournament,
    rng: &mut dyn RngCore,
) -> Result<Permutation, ExtendError> {
    complete_vertices_inner(vertex_map, iota_hat, g, Some(rng))
}

/// For every pair `{x, y}`, the bits `F_{x,y}(x)` and `F_{x,y}(y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipTable {
    k: usize,
    /// `own[(x - 1) * k + (y - 1)] = F_{x,y}(x)`.
    own: Vec<bool>,
}

impl FlipTable {
    fn zeros(k: usize) -> Self {
        FlipTable {
            k,
            own: vec![false; k * k],
        }
    }

    fn set(&mut self, x: Vertex, y: Vertex, fx: bool, fy: bool) {
        self.own[(x - 1) * self.k + (y - 1)] = fx;
        self.own[(y - 1) * self.k + (x - 1)] = fy;
    }

    /// `F_{x,y}(x)`: whether `θ` negates the bit at `y` of valuations over `x`.
    pub fn flips(&self, x: Vertex, y: Vertex) -> bool {
        self.own[(x - 1) * self.k + (y - 1)]
    }

    /// `(F_{x,y}(x), F_{x,y}(y))`.
    pub fn entry(&self, x: Vertex, y: Vertex) -> (bool, bool) {
        (self.flips(x, y), self.flips(y, x))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Pairs `x < y` whose entry is not `(0, 0)`.
    pub fn flipped_pairs(&self) -> impl Iterator<Item = ((Vertex, Vertex), (bool, bool))> + '_ {
        (1..=self.k)
            .flat_map(move |x| (x + 1..=self.k).map(move |y| (x, y)))
            .map(|(x, y)| ((x, y), self.entry(x, y)))
            .filter(|&(_, (a, b))| a || b)
    }
}

/// Computes the flip table from the vertex-level map and its completion.
///
/// For `x < y` in different parts, write `(i)` for "`x` is in the domain and
/// `ψ(x)(y) != ψ(φ̂x)(φ̂y)`" and `(ii)` for "`y` is in the domain and
/// `ψ(y)(x) != ψ(φ̂y)(φ̂x)`". When `φ̂x < φ̂y` the entry is `(1, 1)` if `(i)`
/// or `(ii)` holds, else `(0, 0)`. When `φ̂x > φ̂y`, `(ii)` is taken with `=`
/// instead of `!=` and the entry is `(1, 0)` if either holds, else `(0, 1)`.
/// Same-part pairs get `(0, 0)`.
///
/// When both endpoints are in the domain the two conditions must agree; a
/// disagreement means the map does not preserve the arc between them.
pub fn compute_flips(
    w: &Witness,
    vertex_map: &PartialMap,
    phi_hat: &Permutation,
) -> Result<FlipTable, ExtendError> {
    let g = w.source();
    let k = g.k();
    let psi: Vec<ValuationVertex> = w.psi_image().iter().map(|&id| w.vertex(id)).collect();
    let bit = |x: Vertex, y: Vertex| psi[x - 1].value(y);

    let mut table = FlipTable::zeros(k);
    for x in 1..=k {
        for y in x + 1..=k {
            if g.same_part(x, y) {
                continue;
            }
            let (hx, hy) = (phi_hat.apply(x), phi_hat.apply(y));
            let x_moved = bit(x, y) != bit(hx, hy);
            let y_moved = bit(y, x) != bit(hy, hx);
            let in_x = vertex_map.contains(x);
            let in_y = vertex_map.contains(y);
            let (cond_i, cond_ii) = if hx < hy {
                (in_x && x_moved, in_y && y_moved)
            } else {
                (in_x && x_moved, in_y && !y_moved)
            };
            if in_x && in_y && cond_i != cond_ii {
                return Err(ExtendError::FlipInconsistency { x, y });
            }
            let hit = cond_i || cond_ii;
            if hx < hy {
                table.set(x, y, hit, hit);
            } else {
                table.set(x, y, hit, !hit);
            }
        }
    }
    Ok(table)
}

/// The extension `θ` with every ingredient used to build it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionCertificate {
    pub phi: PartialMap,
    pub induced: InducedMaps,
    pub iota_hat: Permutation,
    pub phi_hat: Permutation,
    pub flips: FlipTable,
    /// `theta[id - 1] = θ(id)` over witness vertex ids.
    pub theta: Vec<Vertex>,
}

impl ExtensionCertificate {
    pub fn theta(&self, id: Vertex) -> Vertex {
        self.theta[id - 1]
    }
}

/// Applies `θ` to a single valuation vertex.
pub fn apply_theta(
    v: &ValuationVertex,
    phi_hat: &Permutation,
    flips: &FlipTable,
) -> ValuationVertex {
    let x = v.base();
    let mut word = 0;
    for y in (1..=flips.k()).filter(|&y| y != x) {
        if v.value(y) != flips.flips(x, y) {
            word |= position_bit(phi_hat.apply(y));
        }
    }
    ValuationVertex::from_word(phi_hat.apply(x), word)
}

/// Builds `θ` for a partial automorphism `phi` of the witness whose domain
/// and image lie in `ψ(G)`, using ascending completions.
pub fn extend_automorphism(w: &Witness, phi: &PartialMap) -> Result<ExtensionCertificate, ExtendError> {
    extend_inner(w, phi, None)
}

/// Like [`extend_automorphism`] with randomly chosen completions `ι̂`, `φ̂`.
pub fn extend_automorphism_shuffled(
    w: &Witness,
    phi: &PartialMap,
    rng: &mut dyn RngCore,
) -> Result<ExtensionCertificate, ExtendError> {
    extend_inner(w, phi, Some(rng))
}

fn extend_inner(
    w: &Witness,
    phi: &PartialMap,
    mut rng: Option<&mut dyn RngCore>,
) -> Result<ExtensionCertificate, ExtendError> {
    let induced = induced_maps(w, phi)?;
    if !is_partial_automorphism(w, phi) {
        return Err(ExtendError::NotPartialAutomorphism);
    }
    let g = w.source();
    let iota_hat = complete_parts_inner(&induced.parts, g.n(), reborrow(&mut rng));
    let phi_hat = complete_vertices_inner(&induced.vertices, &iota_hat, g, rng)?;
    let flips = compute_flips(w, &induced.vertices, &phi_hat)?;

    let image_of = |id: Vertex| {
        let moved = apply_theta(&w.vertex(id), &phi_hat, &flips);
        w.id_of(&moved)
            .expect("θ keeps same-part positions at zero")
    };
    let theta = if w.order() >= PARALLEL_THETA_THRESHOLD {
        (1..=w.order()).into_par_iter().map(image_of).collect()
    } else {
        (1..=w.order()).map(image_of).collect()
    };

    Ok(ExtensionCertificate {
        phi: phi.clone(),
        induced,
        iota_hat,
        phi_hat,
        flips,
        theta,
    })
}
