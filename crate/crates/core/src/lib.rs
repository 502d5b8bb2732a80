//! Exact filtered F-crystals over truncated Witt vectors of finite fields.
//!
//! The crate is organized bottom-up:
//!
//! - [`witt`]: the Galois ring `W_n(F_{p^a})`, its Frobenius, Teichmüller
//!   lifts and the divided-power exponential and logarithm.
//! - [`semilinear`]: matrices over `W_n(k)` and over Z, Smith normal form,
//!   filtered F-modules with σ-linear `F` and σ⁻¹-linear `V`, tensor
//!   products, twisted duals and Newton slopes.
//! - [`blocks`]: the standard building blocks (Tate objects, lattice, torus
//!   and elliptic blocks).
//! - [`motive`]: crystalline realizations of explicitly presented 1-motives,
//!   their Cartier duals, pairings and the structural property report.
//! - [`simplicial`]: component complexes of truncated simplicial schemes,
//!   cocharacter groups, divisor lattices and the weight-graded rank ledger.
//! - [`doc`]: the JSON document formats.

pub mod blocks;
pub mod doc;
pub mod error;
pub mod motive;
pub mod semilinear;
pub mod simplicial;
pub mod witt;

pub use error::{Error, ErrorKind, Result};
