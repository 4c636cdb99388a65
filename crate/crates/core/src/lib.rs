//! A desk-scale laboratory for sum-product growth in matrix rings over
//! finite fields.
//!
//! Everything here is exact and small enough to enumerate: arithmetic in
//! `F_q` (q ≤ 64) and in the matrix ring `M_n(F_q)`, dense subsets of the
//! ring with their sumsets, product sets and solution counters, the
//! closed-form rank statistics those counters must match, the bipartite
//! product graphs with their Cayley decompositions, spectral-gap
//! measurements along two independent routes, and a harness that
//! instantiates each growth inequality at concrete parameters and reports
//! the constant it actually attains.
//!
//! The crate favors brute force with closed forms as cross-checks (and
//! vice versa); nothing is sampled where it can be enumerated.

pub mod bitset;
pub mod counting;
pub mod error;
pub mod field;
pub mod graphs;
pub mod matrix;
pub mod rng;
pub mod sets;
pub mod spectral;
pub mod verify;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
