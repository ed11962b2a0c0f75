//! Integer partitions, Young tableaux, hook lengths and Kostka numbers.
//!
//! Partitions are enumerated in reverse lexicographic order and standard
//! tableaux in row-reading lexicographic order, so every matrix built from
//! them has a reproducible basis.

mod kostka;
mod partition;
mod tableau;

pub use kostka::kostka_number;
pub use partition::{partitions_of, reverse_lex, Partition, MAX_PARTITION_N};
pub use tableau::{
    irrep_dimension, standard_tableaux, standard_tableaux_capped, Tableau, DEFAULT_TABLEAU_CAP,
};

/// `μ ⊵ ν`; free-function form of [`Partition::dominates`].
pub fn dominates(mu: &Partition, nu: &Partition) -> crate::Result<bool> {
    mu.dominates(nu)
}

/// Free-function form of [`Partition::conjugate`].
pub fn conjugate(mu: &Partition) -> Partition {
    mu.conjugate()
}
