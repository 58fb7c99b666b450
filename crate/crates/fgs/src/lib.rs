//! Free-group sandwich toolkit.
//!
//! Given a finite basis E and a finite set Z of words in the free group on
//! E, this crate brackets the subgroup ⟨Z⟩ between two free-product factors:
//!
//! * the upper layer — a basis of the smallest free factor containing ⟨Z⟩,
//!   found by the Whitehead cut-vertex reduction;
//! * the lower layer — a basis E″ of the whole group maximizing
//!   |E″ ∩ ⟨Z⟩|, found by exploring the boundary operation on Stallings
//!   core graphs.
//!
//! The `oracles` module holds independent word-level brute-force checks used
//! by the test suites.

pub mod boundary;
pub mod cli;
pub mod core_graph;
pub mod error;
pub mod explorer;
pub mod oracles;
pub mod whitehead;
pub mod words;

#[cfg(test)]
mod testutil;

pub use boundary::{boundary, boundary_step, check_boundary_membership, BoundaryStep};
pub use core_graph::{core_of, fold, lollipop, trim, wedge, CanonicalKey, CoreGraph, LabeledGraph};
pub use error::{Error, Result};
pub use explorer::{
    best_node, enumerate_cuts, explore, sandwich, ExplorationGraph, ExploreLimits, SandwichResult,
};
pub use oracles::{
    nielsen_reduce, oracle_membership, primitivity_oracle, whitehead_search, NielsenSet,
};
pub use whitehead::{
    closure_basis, cut_subroutine, cut_vertex_algorithm, find_cut_vertex, is_subbasis,
    whitehead_graph, whitehead_graph_rel_support, Cut, ReductionTrace, SubbasisOutcome, WhGraph,
};
pub use words::{Alphabet, GeneratorMap, Letter, LetterSet, Word, WordSet};
