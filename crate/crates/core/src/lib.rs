//! Equitable 2-partitions of Hamming graphs H(n,q) with the second
//! eigenvalue: verification, constructions, exhaustive search and
//! classification, plus the eigenfunction tools behind them.

pub mod bitset;
pub mod construct;
pub mod eigen;
pub mod error;
pub mod hamming;
pub mod io;
pub mod parallel;
pub mod partition;
pub mod search;

pub use bitset::Bitset;
pub use error::{Error, Result};
pub use hamming::{Automorphism, GraphParams};
pub use partition::{QuotientMatrix, RPartition, TwoPartition};
