//! Linear probing under k-independent hashing.
//!
//! The crate is split into five layers:
//!
//! - [`hash`]: polynomial, linear, simple-tabulation and truly-random hash
//!   families, with exhaustive independence verification for tiny primes.
//! - [`probing`]: an exact cyclic linear-probing table with refill deletion,
//!   plus run and dyadic-interval analytics.
//! - [`filter`]: an approximate-membership filter that stores b-bit
//!   signatures in a linear-probing layout.
//! - [`moments`]: exact and sampled central moments of sums of independent
//!   0/1 variables, and the tail bounds derived from them. Generic over the
//!   floating-point scalar.
//! - [`harness`]: deterministic experiments that emit CSV/JSON rows.

pub mod filter;
pub mod harness;
pub mod hash;
pub mod keys;
pub mod moments;
pub mod probing;
pub mod seed;

/// An element of the key universe.
pub type Key = u64;


pub use filter::{FilterMode, FilterParams, SignatureFilter};
pub use moments::{BernoulliProfile, Real, TailReport};
pub use probing::{DyadicInterval, ProbeTable, Run};
pub use hash::{
    DrawnHash, HashFamily, LinearHash, PolynomialHash, PrimeField, SlotHash, TabulationHash,
    TrulyRandomHash,
};

/// Double-precision Bernoulli profile; the scalar used by the harness.
pub type Profile = BernoulliProfile<f64>;
/// Single-precision Bernoulli profile.
pub type Profile32 = BernoulliProfile<f32>;
pub type Tail = TailReport<f64>;
