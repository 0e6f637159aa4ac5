//! `ln Γ` at rationals in `(0, 1]` by shifted Stirling series.

use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ball::Ball;
use super::elementary::pi_ball;
use super::mag::Mag;
use super::Precision;
use crate::error::{domain, Result};
use crate::farey::Fraction;

static BERNOULLI: RwLock<Vec<BigRational>> = RwLock::new(Vec::new());

/// Tangent numbers `T_1..=T_n` (1, 2, 16, 272, ...), integer-only.
fn tangent_numbers(n: usize) -> Vec<BigInt> {
    let mut t = vec![BigInt::zero(); n + 1];
    if n == 0 {
        return t;
    }
    t[1] = BigInt::one();
    for k in 2..=n {
        t[k] = &t[k - 1] * (k - 1);
    }
    for k in 2..=n {
        for j in k..=n {
            t[j] = &t[j - 1] * (j - k) + &t[j] * (j - k + 2);
        }
    }
    t
}

/// `B_{2k}` for `k >= 1`, memoized process-wide.
pub fn bernoulli_even(k: usize) -> BigRational {
    assert!(k >= 1, "B_0 is not served here");
    if let Some(b) = BERNOULLI.read().expect("bernoulli cache poisoned").get(k - 1) {
        return b.clone();
    }
    let n = k.next_power_of_two().max(64);
    let t = tangent_numbers(n);
    let values: Vec<BigRational> = (1..=n)
        .map(|j| {
            // B_2j = (-1)^(j-1) 2j T_j / (4^j (4^j - 1))
            let four_j = BigInt::one() << (2 * j);
            let den = &four_j * (&four_j - 1u32);
            let num = &t[j] * (2 * j);
            let r = BigRational::new(num, den);
            if j % 2 == 0 {
                -r
            } else {
                r
            }
        })
        .collect();
    let mut cache = BERNOULLI.write().expect("bernoulli cache poisoned");
    if cache.len() < values.len() {
        *cache = values;
    }
    cache[k - 1].clone()
}

/// Reusable `ln Γ` evaluator for one working precision: holds `½ ln 2π`
/// and the Stirling coefficients `B_2k / (2k (2k - 1))` as balls.
#[derive(Debug, Clone)]
pub struct LnGamma {
    out: Precision,
    work: Precision,
    shift: u64,
    half_ln_2pi: Ball,
    ln_2pi: Ball,
    coeffs: Vec<Ball>,
}

impl LnGamma {
    pub fn new(p: Precision) -> Self {
        let work = p.guarded(32);
        let w = work.bits() as i64;
        // The argument is moved to x >= shift before the series is used;
        // with x about w/2 the terms fall below 2^-w in a few dozen steps.
        let shift = (w as u64 / 2).max(10);
        let two_pi = pi_ball(work.guarded(8)).mul_2exp(1);
        let ln_2pi = two_pi.ln(work).expect("2π is positive");
        let half_ln_2pi = ln_2pi.mul_2exp(-1);
        let log2_shift = (shift as f64).log2();
        let mut coeffs = Vec::new();
        for k in 1.. {
            let c = stirling_coefficient(k, work);
            let est = c.mag_upper().log2_ceil().unwrap_or(i64::MIN / 4) as f64
                - (2 * k - 1) as f64 * log2_shift;
            coeffs.push(c);
            if est < -(w as f64) - 8.0 || k > 4 * w as usize {
                break;
            }
        }
        LnGamma {
            out: p,
            work,
            shift,
            half_ln_2pi,
            ln_2pi,
            coeffs,
        }
    }

    pub fn precision(&self) -> Precision {
        self.out
    }

    /// `ln 2π` at the working precision.
    pub fn ln_2pi(&self) -> &Ball {
        &self.ln_2pi
    }

    /// Enclosure of `ln Γ(r)`, `0 < r <= 1`, radius at most `2^(8 - bits)`.
    pub fn ln_gamma_frac(&self, r: Fraction) -> Result<Ball> {
        if r.numerator() == 0 {
            return domain("ln_gamma_frac", 0, "0 < r <= 1 (pole at 0)");
        }
        if r == Fraction::ONE {
            return Ok(Ball::zero());
        }
        Ok(self.ln_gamma_ratio(r.numerator(), r.denominator()).rounded(self.out.guarded(8)))
    }

    /// `ln Γ(a/b)` for `0 < a/b`, at the working precision.
    fn ln_gamma_ratio(&self, a: u64, b: u64) -> Ball {
        let wp = self.work;
        let m = self.shift;
        let bb = BigInt::from(b);
        // ln Γ(r) = ln Γ(r + m) - ln Π_{j<m} (r + j)
        //         = ln Γ(x) - ln Π_{j<m} (a + j b) + m ln b
        let rising: BigInt = (0..m).map(|j| BigInt::from(a + j * b)).product();
        let top = BigInt::from(a + m * b);
        let ln_b = Ball::from_int(bb.clone()).ln(wp).expect("b >= 1");
        let ln_top = Ball::from_int(top.clone()).ln(wp).expect("positive");
        let ln_rising = Ball::from_int(rising).ln(wp).expect("positive");
        let ln_x = ln_top.sub(&ln_b, wp);

        // (x - 1/2) ln x - x + ½ ln 2π
        let x_minus_half = Ball::from_ratio(&(&top * 2u32 - &bb), &(&bb * 2u32), wp);
        let x = Ball::from_ratio(&top, &bb, wp);
        let mut acc = x_minus_half
            .mul(&ln_x, wp)
            .sub(&x, wp)
            .add(&self.half_ln_2pi, wp);

        // Σ c_k / x^(2k-1); the first omitted term, doubled, bounds the rest.
        let y = Ball::from_ratio(&bb, &top, wp);
        let y2 = y.sqr(wp);
        let mut pw = y;
        let threshold = -(wp.bits() as i64);
        let mut remainder = None;
        for k in 1.. {
            let c = if k <= self.coeffs.len() {
                self.coeffs[k - 1].clone()
            } else {
                stirling_coefficient(k, wp)
            };
            let term = c.mul(&pw, wp);
            if k > 1 && term.mag_upper().lt_pow2(threshold) {
                remainder = Some(term.mag_upper().mul_u64(2));
                break;
            }
            acc = acc.add(&term, wp);
            pw = pw.mul(&y2, wp);
        }
        let tail = remainder.unwrap_or(Mag::ZERO);
        acc.with_radius(tail)
            .sub(&ln_rising, wp)
            .add(&ln_b.scale_by_int(m as i64, wp), wp)
    }
}

fn stirling_coefficient(k: usize, p: Precision) -> Ball {
    let b = bernoulli_even(k);
    let den = b.denom() * BigInt::from(2 * k * (2 * k - 1));
    Ball::from_ratio(b.numer(), &den, p)
}

/// One-shot `ln Γ(r)`; build an [`LnGamma`] for repeated calls.
pub fn ln_gamma_frac(r: Fraction, p: Precision) -> Result<Ball> {
    LnGamma::new(p).ln_gamma_frac(r)
}
