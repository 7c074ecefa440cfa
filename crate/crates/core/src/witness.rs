//! The valuation-function witness for a normalized n-partite tournament.
//!
//! Every vertex of the witness is a pair `(x, χ)` where `x` is a vertex of the
//! source tournament and `χ` assigns a bit to every other vertex, with all
//! positions in the part of `x` forced to zero. Two witness vertices over
//! bases `x` and `y` in different parts are joined by exactly one arc:
//! `(x, χ) -> (y, ξ)` iff `x > y` and `χ(y) != ξ(x)`, or `x < y` and
//! `χ(y) == ξ(x)`.
//!
//! Witness vertices are numbered `1..=k * 2^(k - m)`, ascending by base
//! vertex and then by valuation word read as a binary number whose most
//! significant digit is position 1.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Part, PartiteDigraph, Vertex};
use crate::normalize::NormalizedTournament;

/// Default upper bound on the number of witness vertices.
pub const DEFAULT_VERTEX_BUDGET: u64 = 1 << 24;
/// Witnesses up to this order store their arcs as a bit matrix.
pub const DEFAULT_MATERIALIZE_LIMIT: usize = 4096;
/// Valuation words are `u64`, so the source may have at most 64 vertices.
pub const MAX_SOURCE_ORDER: usize = 64;

/// Bit carrying position `y` of a valuation word. Position 1 is the most
/// significant bit, so numeric order of words matches their string order.
#[inline]
pub(crate) const fn position_bit(y: Vertex) -> u64 {
    1u64 << (64 - y)
}

/// One witness vertex: a base vertex and a valuation of the other vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ValuationVertex {
    base: Vertex,
    word: u64,
}

impl ValuationVertex {
    /// Builds a valuation over `base` from the positions set to 1.
    pub fn new<I: IntoIterator<Item = Vertex>>(base: Vertex, ones: I) -> Self {
        let word = ones.into_iter().fold(0, |w, y| w | position_bit(y));
        ValuationVertex { base, word }
    }

    pub(crate) const fn from_word(base: Vertex, word: u64) -> Self {
        ValuationVertex { base, word }
    }

    /// The projection back to the source vertex.
    pub fn base(&self) -> Vertex {
        self.base
    }

    pub fn word(&self) -> u64 {
        self.word
    }

    /// The bit at position `y`.
    pub fn value(&self, y: Vertex) -> bool {
        self.word & position_bit(y) != 0
    }

    pub fn with_value(self, y: Vertex, bit: bool) -> Self {
        let word = if bit {
            self.word | position_bit(y)
        } else {
            self.word & !position_bit(y)
        };
        ValuationVertex { word, ..self }
    }

    /// External name `x#b`, `b` being the `k` bits of the word.
    pub fn name(&self, k: usize) -> String {
        let bits: String = (1..=k)
            .map(|y| if self.value(y) { '1' } else { '0' })
            .collect();
        format!("{}#{}", self.base, bits)
    }

    /// Parses a name produced by [`ValuationVertex::name`].
    pub fn parse_name(name: &str) -> Option<(Self, usize)> {
        let (base, bits) = name.split_once('#')?;
        let base: Vertex = base.parse().ok()?;
        if bits.len() > MAX_SOURCE_ORDER || base == 0 {
            return None;
        }
        let mut word = 0;
        for (i, c) in bits.chars().enumerate() {
            match c {
                '0' => {}
                '1' => word |= position_bit(i + 1),
                _ => return None,
            }
        }
        Some((ValuationVertex { base, word }, bits.len()))
    }
}

/// Arc direction between witness vertices over bases in different parts:
/// `true` iff the arc goes from `a` to `b`.
#[inline]
pub fn arc_between(a: &ValuationVertex, b: &ValuationVertex) -> bool {
    let ab = a.value(b.base);
    let ba = b.value(a.base);
    if a.base > b.base {
        ab != ba
    } else {
        ab == ba
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("witness would have k*2^(k-m) = {size} vertices, over the budget of {budget}")]
    TooLarge { size: u128, budget: u64 },
    #[error("source has {k} vertices; valuation words hold at most {MAX_SOURCE_ORDER}")]
    SourceTooLarge { k: usize },
    #[error("k = {k} is not divisible by n = {n}")]
    NotDivisible { k: usize, n: usize },
    #[error("n = {n}: at least 2 parts required")]
    TooFewParts { n: usize },
}

/// Exact witness order for a normalized source with `k` vertices in `n`
/// parts: `k * 2^(k - k/n)`.
pub fn witness_size(k: usize, n: usize) -> Result<u128, WitnessError> {
    if n < 2 {
        return Err(WitnessError::TooFewParts { n });
    }
    if !k.is_multiple_of(n) {
        return Err(WitnessError::NotDivisible { k, n });
    }
    let free = k - k / n;
    if free >= 120 {
        return Err(WitnessError::SourceTooLarge { k });
    }
    Ok(k as u128 * (1u128 << free))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WitnessOptions {
    pub vertex_budget: u64,
    pub materialize_limit: usize,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions {
            vertex_budget: DEFAULT_VERTEX_BUDGET,
            materialize_limit: DEFAULT_MATERIALIZE_LIMIT,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct BitMatrix {
    stride: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    fn get(&self, row: usize, col: usize) -> bool {
        self.words[row * self.stride + col / 64] >> (col % 64) & 1 == 1
    }
}

/// The witness `H` for a normalized tournament, with its canonical
/// embedding.
#[derive(Clone, PartialEq, Eq)]
pub struct Witness {
    source: NormalizedTournament,
    free_bits: usize,
    free_masks: Vec<u64>,
    embedding: Vec<Vertex>,
    arcs: Option<BitMatrix>,
}

/// The canonical embedding: `ψ(x)` sets position `y` iff `y < x` and the
/// source has the arc `x -> y`.
pub fn embed(g: &NormalizedTournament) -> Vec<ValuationVertex> {
    g.vertices()
        .map(|x| ValuationVertex::new(x, (1..x).filter(|&y| g.has_arc(x, y))))
        .collect()
}

pub fn build_witness(g: &NormalizedTournament) -> Result<Witness, WitnessError> {
    build_witness_with(g, &WitnessOptions::default())
}

pub fn build_witness_with(
    g: &NormalizedTournament,
    options: &WitnessOptions,
) -> Result<Witness, WitnessError> {
    let k = g.k();
    if k > MAX_SOURCE_ORDER {
        return Err(WitnessError::SourceTooLarge { k });
    }
    let size = witness_size(k, g.n())?;
    if size > options.vertex_budget as u128 {
        return Err(WitnessError::TooLarge {
            size,
            budget: options.vertex_budget,
        });
    }
    let free_masks = g
        .vertices()
        .map(|x| {
            g.vertices()
                .filter(|&y| !g.same_part(x, y))
                .fold(0, |w, y| w | position_bit(y))
        })
        .collect();
    let mut witness = Witness {
        source: g.clone(),
        free_bits: k - g.part_size(),
        free_masks,
        embedding: Vec::new(),
        arcs: None,
    };
    witness.embedding = embed(g)
        .iter()
        .map(|v| witness.id_of(v).expect("ψ(x) is a valuation for x"))
        .collect();
    if size as usize <= options.materialize_limit {
        witness.arcs = Some(witness.arc_matrix());
    }
    Ok(witness)
}

impl Witness {
    pub fn source(&self) -> &NormalizedTournament {
        &self.source
    }

    pub fn k(&self) -> usize {
        self.source.k()
    }

    pub fn n(&self) -> usize {
        self.source.n()
    }

    pub fn part_size(&self) -> usize {
        self.source.part_size()
    }

    /// Number of valuations per base vertex, `2^(k - m)`.
    pub fn fiber_size(&self) -> usize {
        1 << self.free_bits
    }

    /// The valuation vertex numbered `id`.
    pub fn vertex(&self, id: Vertex) -> ValuationVertex {
        let index = id - 1;
        let base = (index >> self.free_bits) + 1;
        let rank = (index & (self.fiber_size() - 1)) as u64;
        ValuationVertex::from_word(base, deposit(rank, self.free_masks[base - 1]))
    }

    /// Identifier of a valuation vertex, `None` if it is not a vertex of this
    /// witness (base out of range or a forced-zero position set).
    pub fn id_of(&self, v: &ValuationVertex) -> Option<Vertex> {
        if v.base == 0 || v.base > self.k() {
            return None;
        }
        let mask = self.free_masks[v.base - 1];
        if v.word & !mask != 0 {
            return None;
        }
        Some(((v.base - 1) << self.free_bits) + extract(v.word, mask) as usize + 1)
    }

    /// π: the base vertex of witness vertex `id`.
    pub fn project(&self, id: Vertex) -> Vertex {
        ((id - 1) >> self.free_bits) + 1
    }

    /// ψ(x) as a witness vertex id.
    pub fn psi(&self, x: Vertex) -> Vertex {
        self.embedding[x - 1]
    }

    /// `psi_image()[x - 1] = ψ(x)`.
    pub fn psi_image(&self) -> &[Vertex] {
        &self.embedding
    }

    /// The source vertex `x` with `ψ(x) = id`, if any.
    pub fn psi_preimage(&self, id: Vertex) -> Option<Vertex> {
        if id == 0 || id > self.order() {
            return None;
        }
        let x = self.project(id);
        (self.embedding[x - 1] == id).then_some(x)
    }

    pub fn vertex_name(&self, id: Vertex) -> String {
        self.vertex(id).name(self.k())
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<Vertex> {
        let (v, width) = ValuationVertex::parse_name(name)?;
        if width != self.k() {
            return None;
        }
        self.id_of(&v)
    }

    /// All witness vertices in identifier order.
    pub fn valuation_vertices(&self) -> impl Iterator<Item = ValuationVertex> + '_ {
        self.vertices().map(|id| self.vertex(id))
    }

    /// Whether arcs are stored rather than recomputed per query.
    pub fn is_materialized(&self) -> bool {
        self.arcs.is_some()
    }

    /// Arc query evaluated from the orientation rule, ignoring any stored
    /// matrix.
    pub fn rule_arc(&self, from: Vertex, to: Vertex) -> bool {
        let a = self.vertex(from);
        let b = self.vertex(to);
        !self.source.same_part(a.base, b.base) && arc_between(&a, &b)
    }

    fn arc_matrix(&self) -> BitMatrix {
        let order = self.order();
        let stride = order.div_ceil(64);
        let mut words = vec![0u64; order * stride];
        words
            .par_chunks_mut(stride)
            .enumerate()
            .for_each(|(row, chunk)| {
                for col in 0..order {
                    if self.rule_arc(row + 1, col + 1) {
                        chunk[col / 64] |= 1 << (col % 64);
                    }
                }
            });
        BitMatrix { stride, words }
    }
}

impl PartiteDigraph for Witness {
    fn order(&self) -> usize {
        self.k() << self.free_bits
    }

    fn part_count(&self) -> usize {
        self.n()
    }

    fn part_of(&self, v: Vertex) -> Part {
        self.source.part_of(self.project(v))
    }

    fn has_arc(&self, from: Vertex, to: Vertex) -> bool {
        match &self.arcs {
            Some(m) => m.get(from - 1, to - 1),
            None => self.rule_arc(from, to),
        }
    }
}

impl fmt::Debug for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Witness")
            .field("k", &self.k())
            .field("n", &self.n())
            .field("order", &self.order())
            .field("materialized", &self.is_materialized())
            .finish()
    }
}

/// Packs the bits of `word` selected by `mask` into the low bits of the
/// result, preserving their relative order.
fn extract(word: u64, mut mask: u64) -> u64 {
    let mut out = 0;
    let mut bit = 1;
    while mask != 0 {
        let low = mask & mask.wrapping_neg();
        if word & low != 0 {
            out |= bit;
        }
        bit <<= 1;
        mask ^= low;
    }
    out
}

/// Inverse of [`extract`].
fn deposit(mut bits: u64, mut mask: u64) -> u64 {
    let mut out = 0;
    while mask != 0 {
        let low = mask & mask.wrapping_neg();
        if bits & 1 != 0 {
            out |= low;
        }
        bits >>= 1;
        mask ^= low;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{validate, Tournament};
    use crate::normalize::normalize;

    fn two(edge: (Vertex, Vertex)) -> NormalizedTournament {
        normalize(&Tournament::new(2, vec![1, 2], [edge]).unwrap())
    }

    #[test]
    fn smallest_witness_by_hand() {
        let w = build_witness(&two((1, 2))).unwrap();
        assert_eq!(w.order(), 4);
        let names: Vec<_> = w.vertices().map(|id| w.vertex_name(id)).collect();
        assert_eq!(names, ["1#00", "1#01", "2#00", "2#10"]);
        // χ1 -> χ2 iff χ1(2) == χ2(1), since 1 < 2.
        let expected = [
            (1, 3), // 1#00 -> 2#00
            (4, 1), // 2#10 -> 1#00
            (3, 2), // 2#00 -> 1#01
            (2, 4), // 1#01 -> 2#10
        ];
        let arcs: Vec<_> = w
            .vertices()
            .flat_map(|u| w.vertices().map(move |v| (u, v)))
            .filter(|&(u, v)| w.has_arc(u, v))
            .collect();
        let mut want = expected.to_vec();
        want.sort();
        assert_eq!(arcs, want);
        assert_eq!(validate(&w), Ok(()));
    }

    #[test]
    fn embedding_by_hand() {
        let w = build_witness(&two((1, 2))).unwrap();
        assert_eq!(w.vertex(w.psi(1)).word(), 0);
        assert_eq!(w.vertex(w.psi(2)).word(), 0);
        assert!(w.has_arc(w.psi(1), w.psi(2)));

        let w = build_witness(&two((2, 1))).unwrap();
        assert!(w.vertex(w.psi(2)).value(1));
        assert!(w.has_arc(w.psi(2), w.psi(1)));
        assert!(!w.has_arc(w.psi(1), w.psi(2)));
    }

    #[test]
    fn sizes_match_counts() {
        assert_eq!(witness_size(2, 2), Ok(4));
        assert_eq!(witness_size(6, 3), Ok(96));
        assert_eq!(witness_size(4, 4), Ok(32));
        assert_eq!(witness_size(5, 2), Err(WitnessError::NotDivisible { k: 5, n: 2 }));
        assert_eq!(witness_size(4, 1), Err(WitnessError::TooFewParts { n: 1 }));
    }

    #[test]
    fn id_roundtrip_and_rejection() {
        let t = Tournament::from_orientation(3, vec![1, 1, 2, 2, 3, 3], |x, y| (x ^ y) & 1 == 0)
            .unwrap();
        let w = build_witness(&normalize(&t)).unwrap();
        assert_eq!(w.order(), 96);
        let mut prev = None;
        for id in w.vertices() {
            let v = w.vertex(id);
            assert_eq!(w.id_of(&v), Some(id));
            assert_eq!(w.vertex_by_name(&w.vertex_name(id)), Some(id));
            assert!(prev < Some(v));
            prev = Some(v);
        }
        // position 2 is in the part of vertex 1
        assert_eq!(w.id_of(&ValuationVertex::new(1, [2])), None);
        assert_eq!(w.id_of(&ValuationVertex::new(7, [])), None);
    }

    #[test]
    fn budget_is_enforced() {
        let t = Tournament::from_orientation(2, vec![1, 1, 2, 2], |_, _| true).unwrap();
        let opts = WitnessOptions {
            vertex_budget: 15,
            ..WitnessOptions::default()
        };
        assert_eq!(
            build_witness_with(&normalize(&t), &opts).unwrap_err(),
            WitnessError::TooLarge { size: 16, budget: 15 }
        );
    }

    #[test]
    fn stored_and_rule_arcs_agree() {
        let t = Tournament::from_orientation(2, vec![1, 1, 2, 2], |x, y| x + y == 5).unwrap();
        let g = normalize(&t);
        let stored = build_witness(&g).unwrap();
        let implicit = build_witness_with(
            &g,
            &WitnessOptions {
                materialize_limit: 0,
                ..WitnessOptions::default()
            },
        )
        .unwrap();
        assert!(stored.is_materialized() && !implicit.is_materialized());
        for u in stored.vertices() {
            for v in stored.vertices() {
                assert_eq!(stored.has_arc(u, v), implicit.has_arc(u, v));
            }
        }
    }

    #[test]
    fn extract_deposit_inverse() {
        let mask = 0b1011_0010u64 << 50;
        for bits in 0..16 {
            assert_eq!(extract(deposit(bits, mask), mask), bits);
        }
    }
}
