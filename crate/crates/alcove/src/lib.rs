//! Exact-arithmetic triangulations of lattice polytopes.
//!
//! The crate builds triangulations (pulling, dicing, canonical refinements of
//! dilations, products/joins/chimneys/fiber and semidirect products) and checks
//! their properties (unimodular, full, flag, regular, compressed, integrally
//! closed) over arbitrary-precision integers and rationals. Every regularity
//! claim is backed by a machine-checkable certificate; there is no floating
//! point anywhere.
//!
//! Start with the `examples/` directory: each example is a runnable tour of one
//! capability. The `alcove` binary exposes the same operations on text files.

pub mod exact;
pub mod polytope;
pub mod subdivision;
pub mod regular;
pub mod builders;
pub mod constructions;
pub mod kmw;
pub mod catalog;
pub mod io;
pub mod cli;

pub use exact::{Int, Rat};
