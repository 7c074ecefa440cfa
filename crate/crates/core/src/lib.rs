//! Extension of partial automorphisms for finite n-partite tournaments.
//!
//! Given an n-partite tournament `G`, [`normalize`] pads and relabels it so
//! its parts are contiguous and equally sized, [`build_witness`] constructs
//! the tournament `H` of all valuation functions together with the
//! embedding `ψ: G -> H`, and [`extend_automorphism`] turns any partial
//! automorphism of `ψ(G)` into an explicit automorphism `θ` of `H`.
//! The [`verify`] module checks these objects without reusing the
//! construction.

pub mod extend;
pub mod format;
pub mod generate;
pub mod graph;
pub mod normalize;
pub mod semigeneric;
pub mod verify;
pub mod witness;

pub use extend::{
    complete_parts, complete_vertices, compute_flips, extend_automorphism, extend_automorphism_shuffled,
    induced_maps, ExtendError, ExtensionCertificate, FlipTable, InducedMaps,
};
pub use graph::{
    is_partial_automorphism, validate, validate_substructure, Digraph, MapError, Part, PartialMap,
    PartiteDigraph, Permutation, Tournament, Vertex, Violation,
};
pub use normalize::{is_normalized, normalize, NormalizedTournament};
pub use semigeneric::{is_semigeneric, semigeneric_violation, SemigenericViolation};
pub use witness::{
    build_witness, build_witness_with, embed, witness_size, ValuationVertex, Witness, WitnessError,
    WitnessOptions,
};
