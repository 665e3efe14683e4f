//! Matroid-constrained many-to-one matching markets with ties.
//!
//! Doctors hold weak preference orders over their incident edges; hospitals
//! accept independent sets of a matroid over theirs, ranked by additive
//! utilities. The crate provides the matroid exchange machinery (fundamental
//! circuits, base exchanges, exchange orderings), checkers for weak, strong,
//! and super stability, and brute-force core membership in three blocking
//! regimes, all on exhaustively enumerable instances.

pub mod cli;
pub mod core;
pub mod files;
pub mod harness;
pub mod market;
pub mod matroid;
pub mod matroid_impls;
pub mod sets;
pub mod stability;
