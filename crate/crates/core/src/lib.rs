//! Free products of binary operads.
//!
//! * [`comb`]: integer partitions and orbit counts.
//! * [`dims`]: the dimension recursion for `O₁ ∗ O₂`, numeric and symbolic.
//! * [`trees`]: explicit bases of two-colored alternating trees, grafting
//!   for `As ∗ As`, and pattern-avoidance counts for quotients.
//! * [`shuffle`]: shuffle-tree monomials, rewriting, overlaps and
//!   confluence checks.
//! * [`spnet`]: series-parallel networks and MacMahon numbers.

pub mod comb;
pub mod dims;
pub mod error;
pub mod shuffle;
pub mod spnet;
pub mod trees;

pub use error::{CombError, DimsError, ShuffleError, SpnetError, TreeError};
