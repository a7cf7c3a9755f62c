//! Decomposable (chordal) random graphs through their tree-dependent
//! bipartite representation.
//!
//! A decomposable graph is modelled as the projection of a bipartite state
//! `Z` between clique-nodes and graph nodes, where the clique-nodes are
//! connected by a latent tree `T` and every graph node's clique memberships
//! induce a connected subtree of `T`. This crate provides:
//!
//! * the core entities ([`model`]): point sets, latent trees, bipartite
//!   states and projected graphs;
//! * the link function `W` and its integrals ([`kernel`]);
//! * junction-tree combinatorics: permissible moves, junction-property
//!   verification, observed-tree derivation ([`treeops`]);
//! * the `Z -> G` projection and maximality repair ([`projection`]);
//! * generative samplers: sequential, Markov stopped process, tree-edge
//!   updates and the joint iterative scheme ([`sampler`]);
//! * closed-form clique-degree expectations and Monte-Carlo checks
//!   ([`analytics`]);
//! * likelihood factorization and conjugate posterior machinery
//!   ([`inference`]);
//! * independent brute-force ground truth ([`oracle`]).
//!
//! Numeric code is generic over the scalar type through [`Real`], with
//! `f64`-specialized aliases exported at the crate root.

pub mod analytics;
pub mod error;
pub mod inference;
pub mod io;
pub mod kernel;
pub mod model;
pub mod oracle;
pub mod projection;
pub mod quad;
pub mod real;
pub mod sampler;
pub mod stats;
pub mod treeops;

pub use error::{Error, Result};
pub use model::{BipartiteState, CliqueId, DecomposableGraph, LatentTree, NodeId};
pub use real::Real;
pub use treeops::Strictness;

/// Default-precision kernel.
pub type Kernel64 = kernel::Kernel<f64>;
/// Single-precision kernel.
pub type Kernel32 = kernel::Kernel<f32>;
/// Default-precision point set.
pub type PointSet64 = model::PointSet<f64>;
/// Default-precision truncation window.
pub type Window64 = model::TruncationWindow<f64>;
/// Default-precision sampler configuration.
pub type SamplerConfig64 = sampler::SamplerConfig<f64>;
/// Default-precision finiteness report.
pub type FinitenessReport64 = kernel::FinitenessReport<f64>;
