//! Minimum algebraic connectivity of connected cubic bipartite graphs.
//!
//! The crate builds the path-like extremal graph `H_2n`, computes Laplacian
//! spectra and Fiedler vectors with a dense Jacobi solver, runs the
//! connectivity-decreasing two-edge swap as a descent, counts perfect
//! matchings exactly, and exhaustively certifies extremality for small orders.

pub mod cache;
pub mod canon;
pub mod descent;
pub mod enumeration;
pub mod error;
pub mod graph;
pub mod graph6;
pub mod linalg;
pub mod matchings;
pub mod spectral;

pub use canon::{canonical_form, canonical_graph, CanonicalForm};
pub use descent::{descend, find_qualifying_swaps, swap_edges, DescentTrace, SwapCandidate, TerminalReason};
pub use enumeration::{enumerate_cubic_bipartite, EnumerationRecord};
pub use error::{Error, Result};
pub use graph::{build_h2n, path_graph, BipartiteGraph, Graph, IndependentEdgePair};
pub use graph6::{decode_graph6, encode_graph6};
pub use matchings::{count_perfect_matchings, Biadjacency};
pub use spectral::{algebraic_connectivity, SpectralResult};
