//! Arbitrary-precision real enclosures.
//!
//! A [`Ball`] is a dyadic midpoint with an upper-bounded radius ([`Mag`]).
//! The transcendental functions here only cover what the product identities
//! need: π, `sin(πr)`/`cos(πr)` at rational `r`, `exp`, `ln`, `sqrt` and
//! `ln Γ` at rationals in `(0, 1]`. Each evaluates a fixed-point series at
//! the (exact) midpoint, accounts every truncation in integer units of the
//! last place, and then widens by a Lipschitz bound for the input radius.

mod ball;
mod elementary;
mod gamma;
mod mag;
mod table;

pub use ball::Ball;
pub use elementary::{cos_pi_frac, ln2_ball, pi_ball, sin_pi_frac};
pub use gamma::{bernoulli_even, ln_gamma_frac, LnGamma};
pub use mag::Mag;
pub use table::TrigTable;

use crate::error::{domain, Result};

/// Working mantissa precision in bits (at least 16).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(u32);

impl Precision {
    pub const MIN_BITS: u32 = 16;

    pub fn new(bits: u32) -> Result<Self> {
        if bits < Self::MIN_BITS {
            return domain("Precision::new", bits, "bits >= 16");
        }
        Ok(Precision(bits))
    }

    pub fn bits(&self) -> u32 {
        self.0
    }

    /// `self` plus `extra` guard bits.
    pub fn guarded(&self, extra: u32) -> Precision {
        Precision(self.0 + extra)
    }
}

/// Free-function spellings of the ball primitives.
pub fn ball_mul(a: &Ball, b: &Ball, p: Precision) -> Ball {
    a.mul(b, p)
}

pub fn ball_add(a: &Ball, b: &Ball, p: Precision) -> Ball {
    a.add(b, p)
}

pub fn ball_sqrt(a: &Ball, p: Precision) -> Result<Ball> {
    a.sqrt(p)
}

pub fn ball_exp(a: &Ball, p: Precision) -> Result<Ball> {
    a.exp(p)
}

pub fn ball_ln(a: &Ball, p: Precision) -> Result<Ball> {
    a.ln(p)
}

pub fn ball_scale_by_int(a: &Ball, k: i64, p: Precision) -> Ball {
    a.scale_by_int(k, p)
}

pub fn round_to_integer(b: &Ball) -> Option<num_bigint::BigInt> {
    b.round_to_integer()
}
