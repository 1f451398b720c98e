//! Decomposing graphs into two subgraphs that each admit a neighbour-sum-distinguishing
//! `{1,2}`-edge-weighting.
//!
//! The crate is organised around the stages of the construction:
//!
//! - [`graph`]: the immutable [`Graph`] type, edge-list I/O and seeded generators;
//! - [`euler`]: balanced two-way edge splits along Eulerian tours;
//! - [`decompose`]: far-degree edge separation, per-vertex moduli `y_v`, and the
//!   pair-colour partition rules that split the remaining edges;
//! - [`lll`]: uniform pair sampling and Moser–Tardos resampling of bad events;
//! - [`dcs`]: degree-constrained subgraphs with modular degree targets;
//! - [`weighter`]: residue lists, target assignment, `{1,2}`-weightings and the
//!   end-to-end pipeline producing a [`Certificate`];
//! - [`verify`]: independent checkers and brute-force oracles.
//!
//! All randomness flows from explicit `u64` seeds through [`rng::Rng`] (ChaCha8), so every
//! run is reproducible bit-for-bit.
//!
//! ```
//! use nsd22::{decompose, graph, verify};
//!
//! let (g, pairs) = decompose::knsq_assignment(4).unwrap();
//! let all: Vec<usize> = (0..g.edge_count()).collect();
//! let outcome = decompose::apply_rules(&g, &all, &pairs);
//! assert_eq!(outcome.h1.len() + outcome.h2.len(), g.edge_count());
//!
//! let k3 = graph::Graph::complete(3);
//! assert!(verify::brute_force_nsd(&k3, 2, verify::DEFAULT_BRUTE_LIMIT).unwrap().is_none());
//! ```

pub mod bench;
pub mod dcs;
pub mod decompose;
pub mod euler;
pub mod graph;
pub mod lll;
pub mod rational;
pub mod rng;
pub mod verify;
pub mod weighter;

pub use graph::{EdgeBipartition, EdgeId, Graph, GraphError, Rule, Side, Vertex};
pub use rational::Rational;
pub use weighter::{Certificate, Verdict};
