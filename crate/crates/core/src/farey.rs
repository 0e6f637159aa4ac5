//! Reduced fractions in `[0, 1]` and streaming enumeration of Farey
//! sequences.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{domain, Result};
use crate::numtheory::{gcd, totient};

/// A reduced fraction `numerator / denominator` with value in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fraction {
    numerator: u64,
    denominator: u64,
}

impl Fraction {
    pub const ZERO: Fraction = Fraction {
        numerator: 0,
        denominator: 1,
    };
    pub const HALF: Fraction = Fraction {
        numerator: 1,
        denominator: 2,
    };
    pub const ONE: Fraction = Fraction {
        numerator: 1,
        denominator: 1,
    };

    /// Reduces `numerator / denominator`; rejects values outside `[0, 1]`.
    pub fn new(numerator: u64, denominator: u64) -> Result<Self> {
        if denominator == 0 {
            return domain("Fraction::new", denominator, "denominator >= 1");
        }
        if numerator > denominator {
            return domain("Fraction::new", numerator, "numerator <= denominator");
        }
        let g = gcd(numerator, denominator);
        Ok(Fraction {
            numerator: numerator / g,
            denominator: denominator / g,
        })
    }

    pub fn numerator(&self) -> u64 {
        self.numerator
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    /// `1 - self`.
    pub fn complement(&self) -> Fraction {
        Fraction {
            numerator: self.denominator - self.numerator,
            denominator: self.denominator,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.numerator as u128 * other.denominator as u128;
        let rhs = other.numerator as u128 * self.denominator as u128;
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// Walks `F(order)` left to right with the neighbor recurrence, holding
/// only the two most recent terms.
#[derive(Debug, Clone)]
pub struct FareyCursor {
    order: u64,
    previous: Fraction,
    current: Fraction,
    started: bool,
    done: bool,
}

impl FareyCursor {
    pub fn new(order: u64) -> Result<Self> {
        if order == 0 {
            return domain("farey_sequence", order, "order >= 1");
        }
        Ok(FareyCursor {
            order,
            previous: Fraction::ZERO,
            current: Fraction {
                numerator: 1,
                denominator: order,
            },
            started: false,
            done: false,
        })
    }

    pub fn order(&self) -> u64 {
        self.order
    }
}

impl Iterator for FareyCursor {
    type Item = Fraction;

    fn next(&mut self) -> Option<Fraction> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.previous);
        }
        let emitted = self.current;
        if emitted == Fraction::ONE {
            self.done = true;
            return Some(emitted);
        }
        let (a, b) = (self.previous.numerator, self.previous.denominator);
        let (c, d) = (self.current.numerator, self.current.denominator);
        let k = (self.order + b) / d;
        self.previous = self.current;
        self.current = Fraction {
            numerator: k * c - a,
            denominator: k * d - b,
        };
        Some(emitted)
    }
}

/// `F(order)`, from `0/1` to `1/1` ascending.
pub fn farey_sequence(order: u64) -> Result<FareyCursor> {
    FareyCursor::new(order)
}

/// `|F(order)| = 1 + Σ_{m <= order} φ(m)`.
pub fn farey_count(order: u64) -> Result<u64> {
    if order == 0 {
        return domain("farey_count", order, "order >= 1");
    }
    let mut total = 1;
    for m in 1..=order {
        total += totient(m)?;
    }
    Ok(total)
}

/// Number of fractions strictly inside `(0, 1)`.
pub fn farey_interior_count(order: u64) -> Result<u64> {
    Ok(farey_count(order)? - 2)
}

/// Terms of `F(order)` in `(0, 1/2]` (or `(0, 1/2)` without the midpoint),
/// ascending.
pub fn farey_half(order: u64, include_half: bool) -> Result<impl Iterator<Item = Fraction>> {
    Ok(farey_sequence(order)?
        .skip(1)
        .take_while(move |r| {
            if include_half {
                *r <= Fraction::HALF
            } else {
                *r < Fraction::HALF
            }
        }))
}

/// Interior points of `F(order)`: the index set `0 < r < 1`.
pub fn farey_interior(order: u64) -> Result<impl Iterator<Item = Fraction>> {
    Ok(farey_sequence(order)?
        .skip(1)
        .take_while(|r| *r < Fraction::ONE))
}
