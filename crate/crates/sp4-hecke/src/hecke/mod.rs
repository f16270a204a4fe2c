//! Hecke algebras `H(K, χ)`: coset tables, convolution, supports and structure constants.

pub mod algebra;
pub mod coset;
pub mod gauss;
pub mod iso;
pub mod lattice;
pub mod presented;
pub mod products;
pub mod support;
pub mod words;

pub use algebra::{Class, HeckeAlgebra, HeckeElement};
pub use coset::{CosetSet, CosetTable, Key, Setting};
