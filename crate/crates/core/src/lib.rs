//! Exact and certified routes to `lcm{1, ..., n}`.
//!
//! The least common multiple of `1..=n` equals half the square of the
//! product of `2 sin(πr)` over the Farey fractions `0 < r <= 1/2` of order
//! `n`, and also a product of `2π / Γ(r)²` over all interior Farey
//! fractions. This crate evaluates those products (and the family of
//! sine, cosine and Gamma identities around them) as rigorous ball
//! enclosures and certifies the exact integer they round to, checking it
//! against big-integer oracles.
//!
//! Modules:
//! - [`numtheory`]: exact oracles (lcm, totient, factorization, prime-power classes)
//! - [`farey`]: reduced fractions and Farey sequence enumeration
//! - [`cyclotomic`]: exact cyclotomic polynomials
//! - [`hpreal`]: ball arithmetic and the transcendental evaluators
//! - [`identities`]: the verification engine

pub mod cyclotomic;
pub mod error;
pub mod farey;
pub mod hpreal;
pub mod identities;
pub mod numtheory;

pub use error::{Error, Result};
