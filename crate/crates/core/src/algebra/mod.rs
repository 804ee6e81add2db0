//! Exact linear algebra: integer normal forms and rational subspaces.

mod rational;
mod smith;

pub use rational::{q, rank_q, QMatrix};
pub use smith::{divisors_of_dense, elementary_divisors, normalize_torsion, Divisors, SparseMatrix};
