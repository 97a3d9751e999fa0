//! Random `d`-regular `r`-uniform hypergraphs.
//!
//! The crate is `no_std` (it needs `alloc`) and contains every algorithm:
//! hypergraph representation and metrics, degree-preserving edge switchings,
//! exact enumeration and uniform samplers, subgraph census and packing,
//! overlapping Hamilton cycles, and one-sided F-freeness testers running
//! against a query oracle. File formats, parallel experiment drivers and
//! the command line live in the `rrhg` companion crate.
#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod census;
pub mod combinatorics;
pub mod hypergraph;
pub mod patterns;
pub mod property_testing;
pub mod sampler;
pub mod spanning;
pub mod switching;
pub mod text;

pub use hypergraph::{Distance, EdgeKey, Hypergraph, HypergraphError, Vertex};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// The random generator used across the crate.
pub type Rng = ChaCha8Rng;

/// Independent generator for trial `index` of an experiment seeded with `master`.
///
/// Streams never overlap, so trials can run in any order (or in parallel)
/// and still reproduce bit for bit.
pub fn seed_stream(master: u64, index: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng
}
