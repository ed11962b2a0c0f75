//! Snippet-space Laplacians of strongly repulsive one-dimensional fermionic
//! mixtures, built as weighted Schreier graphs of the symmetric group.
//!
//! A mixture with populations `ν = (N₁, …, N_κ)` has `D_ν = N!/(N₁!…N_κ!)`
//! distinct orderings of its components along the line ("snippets"). The
//! exchange matrix acting on those orderings is the Laplacian of the
//! Schreier graph `X(𝔖_ν ⊂ 𝔖_N, S_C)` whose edges are adjacent
//! transpositions weighted by the exchange constants `α_k`.
//!
//! The crate provides:
//!
//! - [`combinatorics`]: partitions, dominance order, tableaux, hook lengths
//!   and Kostka numbers.
//! - [`snippets`]: permutations, coset (snippet) enumeration and coset signs.
//! - [`graph`]: the weighted Schreier graph, its sparse Laplacian, structural
//!   predicates, Cartesian products and DOT/JSON export.
//! - [`spectral`]: dense and Krylov eigensolvers, the weighted path spectrum,
//!   hook-shape eigenvalue sums and the spectral gap.
//! - [`irreps`]: Young's orthogonal form and the block decomposition of the
//!   spectrum by symmetry class.
//! - [`weights`]: exchange-constant sets (uniform, box, random, file).
//! - [`physics`]: ground states, energy slopes, Lieb-Mattis ordering, the
//!   sign-flip construction and the interchange-process random walk.

pub mod combinatorics;
mod error;
pub mod graph;
pub mod irreps;
pub mod physics;
pub mod snippets;
pub mod spectral;
pub mod weights;

pub use combinatorics::{Partition, Tableau};
pub use error::{Error, Result};
pub use graph::{SchreierGraph, WeightedGraph};
pub use snippets::{Perm, Snippet, SnippetSpace};
pub use spectral::SpectrumMultiset;
pub use weights::{Provenance, WeightSet};
