//! Enumeration and sampling of partial automorphisms.

use itertools::Itertools;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::graph::{PartialMap, PartiteDigraph, Vertex};

/// Every partial automorphism of `g` with at most `max_dom` domain vertices,
/// each exactly once: by domain size, then domain as an ascending vertex
/// list, then image tuple, all lexicographically.
pub fn enumerate_partial_automorphisms<G: PartiteDigraph + ?Sized>(
    g: &G,
    max_dom: usize,
) -> impl Iterator<Item = PartialMap> + '_ {
    let k = g.order();
    (0..=max_dom.min(k)).flat_map(move |size| {
        (1..=k)
            .combinations(size)
            .flat_map(move |domain| images_for(g, &domain).into_iter().map(move |img| {
                PartialMap::from_pairs(domain.iter().copied().zip(img)).expect("injective by construction")
            }))
    })
}

pub fn count_partial_automorphisms<G: PartiteDigraph + ?Sized>(g: &G, max_dom: usize) -> usize {
    enumerate_partial_automorphisms(g, max_dom).count()
}

/// Whether `c` may be the image of `domain[len]` given the images chosen for
/// the earlier domain vertices.
fn consistent<G: PartiteDigraph + ?Sized>(g: &G, domain: &[Vertex], images: &[Vertex], c: Vertex) -> bool {
    let x = domain[images.len()];
    domain.iter().zip(images).all(|(&y, &d)| {
        d != c
            && g.same_part(x, y) == g.same_part(c, d)
            && g.has_arc(x, y) == g.has_arc(c, d)
            && g.has_arc(y, x) == g.has_arc(d, c)
    })
}

/// All image tuples making `domain` the domain of a partial automorphism,
/// in lexicographic order.
fn images_for<G: PartiteDigraph + ?Sized>(g: &G, domain: &[Vertex]) -> Vec<Vec<Vertex>> {
    fn go<G: PartiteDigraph + ?Sized>(g: &G, domain: &[Vertex], current: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
        if current.len() == domain.len() {
            out.push(current.clone());
            return;
        }
        for c in g.vertices() {
            if consistent(g, domain, current, c) {
                current.push(c);
                go(g, domain, current, out);
                current.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(g, domain, &mut Vec::with_capacity(domain.len()), &mut out);
    out
}

/// A random partial automorphism: a uniform domain size in `0..=max_dom`,
/// a uniform domain of that size, then images chosen vertex by vertex among
/// the consistent candidates, restarting on a dead end.
pub fn random_partial_automorphism<G, R>(g: &G, max_dom: usize, rng: &mut R) -> PartialMap
where
    G: PartiteDigraph + ?Sized,
    R: Rng + ?Sized,
{
    let k = g.order();
    let size = rng.random_range(0..=max_dom.min(k));
    let mut domain: Vec<Vertex> = (1..=k).collect();
    domain.shuffle(rng);
    domain.truncate(size);
    domain.sort_unstable();

    let mut images = Vec::with_capacity(size);
    'restart: loop {
        images.clear();
        while images.len() < size {
            let candidates: Vec<_> = g
                .vertices()
                .filter(|&c| consistent(g, &domain, &images, c))
                .collect();
            match candidates.choose(rng) {
                Some(&c) => images.push(c),
                None => continue 'restart,
            }
        }
        break;
    }
    PartialMap::from_pairs(domain.into_iter().zip(images)).expect("injective by construction")
}

/// Uniform sample of `size` items from `items` (reservoir sampling), kept in
/// stream order.
pub fn reservoir_sample<I, R>(items: I, size: usize, rng: &mut R) -> Vec<I::Item>
where
    I: IntoIterator,
    R: Rng + ?Sized,
{
    let mut reservoir: Vec<(usize, I::Item)> = Vec::with_capacity(size);
    for (i, item) in items.into_iter().enumerate() {
        if i < size {
            reservoir.push((i, item));
        } else {
            let j = rng.random_range(0..=i);
            if j < size {
                reservoir[j] = (i, item);
            }
        }
    }
    reservoir.sort_by_key(|&(i, _)| i);
    reservoir.into_iter().map(|(_, item)| item).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_partial_automorphism, Digraph, Tournament};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn map(pairs: &[(Vertex, Vertex)]) -> PartialMap {
        PartialMap::from_pairs(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn smallest_instance_in_order() {
        let t = Tournament::new(2, vec![1, 2], [(1, 2)]).unwrap();
        let all: Vec<_> = enumerate_partial_automorphisms(&t, 2).collect();
        assert_eq!(
            all,
            vec![
                map(&[]),
                map(&[(1, 1)]),
                map(&[(1, 2)]),
                map(&[(2, 1)]),
                map(&[(2, 2)]),
                map(&[(1, 1), (2, 2)]),
            ]
        );
    }

    #[test]
    fn zero_domain_and_single_vertex() {
        let t = Tournament::new(2, vec![1, 2], [(2, 1)]).unwrap();
        assert_eq!(enumerate_partial_automorphisms(&t, 0).collect::<Vec<_>>(), vec![map(&[])]);
        let single = Digraph::new(1, vec![1]);
        assert_eq!(count_partial_automorphisms(&single, 1), 2);
    }

    #[test]
    fn random_maps_are_partial_automorphisms() {
        let t = Tournament::from_orientation(3, vec![1, 1, 2, 2, 3, 3], |x, y| (x * y) % 4 < 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let p = random_partial_automorphism(&t, 6, &mut rng);
            assert!(is_partial_automorphism(&t, &p));
            assert!(p.domain().tuple_windows().all(|(a, b)| a < b));
        }
    }

    #[test]
    fn reservoir_keeps_stream_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = reservoir_sample(0..100, 10, &mut rng);
        assert_eq!(s.len(), 10);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(reservoir_sample(0..3, 10, &mut rng), vec![0, 1, 2]);
    }
}
