//! Generators for normalized n-partite tournaments.

use rand::Rng;

use crate::graph::{Part, Tournament, Vertex};

/// Part assignment with `n` contiguous parts of size `m`.
pub fn contiguous_parts(n: usize, m: usize) -> Vec<Part> {
    (1..=n).flat_map(|p| std::iter::repeat_n(p, m)).collect()
}

/// Cross-part pairs `x < y` of the contiguous `n`-part layout on `k`
/// vertices, in lexicographic order.
pub fn cross_pairs(n: usize, k: usize) -> Vec<(Vertex, Vertex)> {
    let m = k / n;
    let mut pairs = Vec::new();
    for x in 1..=k {
        for y in x + 1..=k {
            if (x - 1) / m != (y - 1) / m {
                pairs.push((x, y));
            }
        }
    }
    pairs
}

/// Every normalized tournament with `n` parts on `k` vertices. The `i`-th
/// one orients the `j`-th cross pair `x < y` as `x -> y` iff bit `j` of `i`
/// is set.
///
/// # Panics
/// Panics unless `n >= 2` divides `k` and there are fewer than 64 cross
/// pairs.
pub fn normalized_tournaments(n: usize, k: usize) -> impl Iterator<Item = Tournament> {
    assert!(n >= 2 && k >= n && k.is_multiple_of(n), "need n >= 2 dividing k");
    let pairs = cross_pairs(n, k);
    assert!(pairs.len() < 64, "too many orientations to enumerate");
    let parts = contiguous_parts(n, k / n);
    (0u64..1 << pairs.len()).map(move |mask| {
        let mut arcs = Vec::with_capacity(pairs.len());
        for (j, &(x, y)) in pairs.iter().enumerate() {
            arcs.push(if mask >> j & 1 == 1 { (x, y) } else { (y, x) });
        }
        Tournament::new(n, parts.clone(), arcs).expect("every cross pair oriented once")
    })
}

/// A normalized tournament with every cross pair oriented by a fair coin.
pub fn random_normalized_tournament<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Tournament {
    assert!(n >= 2 && k >= n && k.is_multiple_of(n), "need n >= 2 dividing k");
    Tournament::from_orientation(n, contiguous_parts(n, k / n), |_, _| rng.random_bool(0.5))
        .expect("every cross pair oriented once")
}

/// A uniformly random relabeling of vertices and renaming of parts of `t`.
pub fn random_relabeling<R: Rng + ?Sized>(t: &Tournament, rng: &mut R) -> Tournament {
    use crate::graph::PartiteDigraph;
    use rand::seq::SliceRandom;

    let mut vertex_perm: Vec<Vertex> = t.vertices().collect();
    vertex_perm.shuffle(rng);
    let mut part_perm: Vec<Part> = (1..=t.part_count()).collect();
    part_perm.shuffle(rng);

    let mut part_of = vec![0; t.order()];
    for v in t.vertices() {
        part_of[vertex_perm[v - 1] - 1] = part_perm[t.part_of(v) - 1];
    }
    let arcs = t
        .arcs()
        .map(|(a, b)| (vertex_perm[a - 1], vertex_perm[b - 1]));
    Tournament::new(t.part_count(), part_of, arcs).expect("relabeling preserves validity")
}
