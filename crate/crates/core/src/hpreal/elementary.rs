//! π, ln 2, sin/cos at rational multiples of π, and `exp`/`ln`/`sqrt` on
//! balls.
//!
//! Series are summed in fixed point with `w` fractional bits. Every floor
//! costs at most one unit (`2^-w`); the loops count those units explicitly
//! and the total becomes part of the radius.

use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::ball::{Ball, Dyadic};
use super::mag::Mag;
use super::Precision;
use crate::error::{Error, Result};
use crate::farey::Fraction;

/// Guard bits carried through every series.
const GUARD: u32 = 40;

/// `floor(d * 2^w)`; the second value is true when the conversion was exact.
fn to_fixed(d: &Dyadic, w: u32) -> (BigInt, bool) {
    let e = d.exp + w as i64;
    if e >= 0 {
        (&d.man << e as usize, true)
    } else {
        let shifted = &d.man >> (-e) as usize;
        let exact = (&shifted << (-e) as usize) == d.man;
        (shifted, exact)
    }
}

fn fixed_ball(value: BigInt, err_units: u64, w: u32) -> Ball {
    Ball::exact(value, -(w as i64)).with_radius(Mag::from_u64_2exp(err_units, -(w as i64)))
}

/// `Σ ± floor(2^w / q^(2j+1)) / (2j+1)`: atan(1/q) when alternating,
/// atanh(1/q) otherwise. Returns the sum and its error in units.
fn arctan_inv(q: u64, w: u32, alternating: bool) -> (BigInt, u64) {
    let q2 = BigInt::from(q * q);
    let mut p = (BigInt::one() << w as usize) / q;
    let mut sum = p.clone();
    let mut err = 1u64;
    let mut j = 1u64;
    loop {
        p /= &q2;
        if p.is_zero() {
            // remaining tail < 2 units * 1/(1 - 1/q^2)
            err += 3;
            break;
        }
        let term = &p / (2 * j + 1);
        if alternating && j % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        err += 2;
        j += 1;
    }
    (sum, err)
}

struct ConstCache {
    slot: RwLock<Option<(u32, BigInt, u64)>>,
    compute: fn(u32) -> (BigInt, u64),
}

impl ConstCache {
    const fn new(compute: fn(u32) -> (BigInt, u64)) -> Self {
        ConstCache {
            slot: RwLock::new(None),
            compute,
        }
    }

    fn get(&self, w: u32) -> Ball {
        if let Some((cw, v, e)) = self.slot.read().expect("constant cache poisoned").as_ref() {
            if *cw >= w {
                let shift = cw - w;
                let v = v >> shift as usize;
                // scaled error plus the floor of the shift
                let e = e.checked_shr(shift).unwrap_or(0) + 2;
                return fixed_ball(v, e, w);
            }
        }
        let target = w.next_multiple_of(256).max(512);
        let (v, e) = (self.compute)(target);
        let mut slot = self.slot.write().expect("constant cache poisoned");
        if slot.as_ref().is_none_or(|(cw, _, _)| *cw < target) {
            *slot = Some((target, v.clone(), e));
        }
        drop(slot);
        self.get(w)
    }
}

fn compute_pi(w: u32) -> (BigInt, u64) {
    // Machin: π = 16 atan(1/5) - 4 atan(1/239)
    let (a, ea) = arctan_inv(5, w, true);
    let (b, eb) = arctan_inv(239, w, true);
    (a * 16 - b * 4, 16 * ea + 4 * eb)
}

fn compute_ln2(w: u32) -> (BigInt, u64) {
    // ln 2 = 2 atanh(1/3)
    let (a, ea) = arctan_inv(3, w, false);
    (a * 2, 2 * ea)
}

static PI: ConstCache = ConstCache::new(compute_pi);
static LN2: ConstCache = ConstCache::new(compute_ln2);

/// Enclosure of π with radius at most `2^(2 - bits)`.
pub fn pi_ball(p: Precision) -> Ball {
    PI.get(p.bits() + GUARD).rounded(p.guarded(8))
}

pub fn ln2_ball(p: Precision) -> Ball {
    LN2.get(p.bits() + GUARD).rounded(p.guarded(8))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Trig {
    Sin,
    Cos,
}

/// sin or cos of `x = X / 2^w`, `0 <= x <= 1`, by Taylor series.
fn trig_series(kind: Trig, x: &BigInt, w: u32) -> (BigInt, u64) {
    let one = BigInt::one() << w as usize;
    let x2 = (x * x) >> w as usize;
    let (mut t, offset) = match kind {
        Trig::Sin => (x.clone(), 1u64),
        Trig::Cos => (one, 0u64),
    };
    let mut sum = t.clone();
    let mut e = 0u64;
    let mut err = 0u64;
    let mut j = 1u64;
    loop {
        let d = (2 * j + offset - 1) * (2 * j + offset);
        t = ((&t * &x2) >> w as usize) / d;
        e += 3;
        if t.is_zero() {
            // alternating, decreasing: tail bounded by this term's true size
            err += e;
            break;
        }
        if j % 2 == 1 {
            sum -= &t;
        } else {
            sum += &t;
        }
        err += e;
        j += 1;
    }
    (sum, err)
}

/// sin/cos of `π · num/den` for `0 <= num/den <= 1/4`.
fn trig_small(kind: Trig, num: u64, den: u64, p: Precision) -> Ball {
    let w = p.bits() + GUARD;
    let wp = working(w);
    let x = PI
        .get(w + 8)
        .mul_int(&BigInt::from(num), wp.guarded(8))
        .div_int(&BigInt::from(den), wp.guarded(8));
    let (fx, exact) = to_fixed(&x.mid(), w);
    let mut rad = x.radius();
    if !exact {
        rad = rad.add(Mag::pow2(-(w as i64)));
    }
    let (s, err) = trig_series(kind, &fx, w);
    // both functions are 1-Lipschitz
    fixed_ball(s, err, w).with_radius(rad).rounded(p.guarded(8))
}

fn working(bits: u32) -> Precision {
    Precision::new(bits).expect("working precision above minimum")
}

fn half() -> Ball {
    Ball::exact(BigInt::one(), -1)
}

/// `sin(π r)` when it is a dyadic rational (0, 1/2 or 1).
pub(crate) fn exact_sin_pi(r: Fraction) -> Option<Ball> {
    let t = r.min(r.complement());
    match (t.numerator(), t.denominator()) {
        (0, _) => Some(Ball::zero()),
        (1, 6) => Some(half()),
        (1, 2) => Some(Ball::one()),
        _ => None,
    }
}

/// `cos(π r)` when it is a dyadic rational (0, ±1/2 or ±1).
pub(crate) fn exact_cos_pi(r: Fraction) -> Option<Ball> {
    let flip = r > Fraction::HALF;
    let t = if flip { r.complement() } else { r };
    let v = match (t.numerator(), t.denominator()) {
        (0, _) => Ball::one(),
        (1, 3) => half(),
        (1, 2) => Ball::zero(),
        _ => return None,
    };
    Some(if flip { v.neg() } else { v })
}

/// Enclosure of `sin(π r)`, `r` in `[0, 1]`, radius at most `2^(4 - bits)`.
/// Exact at 0, 1/6, 1/2, 5/6, 1.
pub fn sin_pi_frac(r: Fraction, p: Precision) -> Ball {
    if let Some(v) = exact_sin_pi(r) {
        return v;
    }
    let t = r.min(r.complement());
    let (a, b) = (t.numerator(), t.denominator());
    if 4 * a <= b {
        trig_small(Trig::Sin, a, b, p)
    } else {
        // sin(πt) = cos(π(1/2 - t))
        trig_small(Trig::Cos, b - 2 * a, 2 * b, p)
    }
}

/// Enclosure of `cos(π r)`, `r` in `[0, 1]`, radius at most `2^(4 - bits)`.
/// Exact at 0, 1/3, 1/2, 2/3, 1.
pub fn cos_pi_frac(r: Fraction, p: Precision) -> Ball {
    if let Some(v) = exact_cos_pi(r) {
        return v;
    }
    let flip = r > Fraction::HALF;
    let t = if flip { r.complement() } else { r };
    let (a, b) = (t.numerator(), t.denominator());
    let v = if 4 * a <= b {
        trig_small(Trig::Cos, a, b, p)
    } else {
        trig_small(Trig::Sin, b - 2 * a, 2 * b, p)
    };
    if flip {
        v.neg()
    } else {
        v
    }
}

/// `exp(x)` for `|x| <= 1/2` at `X / 2^w`.
fn exp_series(x: &BigInt, w: u32) -> (BigInt, u64) {
    let one = BigInt::one() << w as usize;
    let ax = x.abs();
    let neg = x.is_negative();
    let mut t = one.clone();
    let mut sum = one;
    let mut e = 0u64;
    let mut err = 0u64;
    let mut j = 1u64;
    loop {
        t = ((&t * &ax) >> w as usize) / j;
        e += 2;
        if t.is_zero() {
            err += 2 * e;
            break;
        }
        if neg && j % 2 == 1 {
            sum -= &t;
        } else {
            sum += &t;
        }
        err += e;
        j += 1;
    }
    (sum, err)
}

/// `Σ z^(2j+1) / (2j+1)` (atanh) for `0 <= z <= 0.2` at `Z / 2^w`.
fn atanh_series(z: &BigInt, w: u32) -> (BigInt, u64) {
    let z2 = (z * z) >> w as usize;
    let mut pw = z.clone();
    let mut sum = z.clone();
    let mut err = 0u64;
    let mut j = 1u64;
    loop {
        pw = (&pw * &z2) >> w as usize;
        if pw.is_zero() {
            err += 4;
            break;
        }
        sum += &pw / (2 * j + 1);
        err += 4;
        j += 1;
    }
    (sum, err)
}

impl Ball {
    /// Natural logarithm; the ball must lie strictly inside `(0, ∞)`.
    pub fn ln(&self, p: Precision) -> Result<Ball> {
        let lower = self.mag_lower();
        let (man, _) = self.mid_parts();
        if lower.is_zero() || !man.is_positive() {
            return Err(Error::BallDomain {
                op: "ln",
                detail: format!("{self:?} is not strictly positive"),
            });
        }
        let w = p.bits() + GUARD;
        let m = self.rounded(working(w + 8));
        let (man, exp) = m.mid_parts();
        let bits = man.bits();
        // mid = 2^k * man / D,  man / D in [1/√2, √2]
        let mut k = exp + bits as i64 - 1;
        let mut d = BigInt::one() << (bits - 1) as usize;
        if man * man > (&d * &d) << 1usize {
            d <<= 1usize;
            k += 1;
        }
        let numer = man - &d;
        let denom = man + &d;
        let z = (numer.abs() << w as usize) / &denom;
        let (s, err) = atanh_series(&z, w);
        // z truncation shifts atanh by < 1.1 units
        let ln_f = fixed_ball(s, err + 2, w).mul_2exp(1);
        let ln_f = if numer.is_negative() { ln_f.neg() } else { ln_f };
        let wp = working(w);
        let ln_mid = ln_f.add(&LN2.get(w + 16).scale_by_int(k, working(w + 16)), wp);
        // |ln x - ln mid| <= rad / (mid - rad)
        let lip = if m.radius().is_zero() {
            Mag::ZERO
        } else {
            m.radius().div(m.mag_lower())
        };
        Ok(ln_mid.with_radius(lip).rounded(p.guarded(8)))
    }

    /// Exponential. Inputs with radius above 1 get a coarse but valid radius.
    pub fn exp(&self, p: Precision) -> Result<Ball> {
        let approx = self.mid_f64();
        if !approx.is_finite() || approx.abs() > 1e15 {
            return Err(Error::BallDomain {
                op: "exp",
                detail: format!("argument {self:?} out of range"),
            });
        }
        let w = p.bits() + GUARD;
        let k = (approx / std::f64::consts::LN_2).round() as i64;
        let extra = 64 - k.unsigned_abs().leading_zeros();
        let wk = working(w + extra + 8);
        let t = self.sub(&LN2.get(w + extra + 16).scale_by_int(k, wk), wk);
        let (ft, exact) = to_fixed(&t.mid(), w);
        let half = BigInt::one() << (w - 1) as usize;
        if ft.abs() > (&half + (&half >> 2usize)) {
            return Err(Error::BallDomain {
                op: "exp",
                detail: "argument reduction failed".into(),
            });
        }
        let mut r = t.radius();
        if !exact {
            r = r.add(Mag::pow2(-(w as i64)));
        }
        let (s, err) = exp_series(&ft, w);
        let e_mid = fixed_ball(s, err, w);
        // |exp(tm + δ) - exp(tm)| <= exp(tm) (e^|δ| - 1)
        let spread = if r.is_zero() {
            Mag::ZERO
        } else if r.lt_pow2(0) {
            e_mid.mag_upper().mul(r).mul_u64(3)
        } else {
            let rf = r.to_f64();
            if rf > 700.0 {
                return Err(Error::BallDomain {
                    op: "exp",
                    detail: "radius too large".into(),
                });
            }
            e_mid.mag_upper().mul(Mag::from_f64_upper(rf.exp() * 2.0))
        };
        Ok(e_mid.with_radius(spread).mul_2exp(k).rounded(p.guarded(8)))
    }

    /// Square root; rejects enclosures reaching below zero.
    pub fn sqrt(&self, p: Precision) -> Result<Ball> {
        let mid = self.mid();
        let lower = mid.sub(&Dyadic::from_mag(self.radius()));
        if lower.is_negative() {
            return Err(Error::BallDomain {
                op: "sqrt",
                detail: format!("{self:?} reaches below zero"),
            });
        }
        if mid.man.is_zero() {
            return Ok(Ball::zero());
        }
        let w = p.bits() + 16;
        let root_mid = isqrt_dyadic(&mid, w);
        if self.radius().is_zero() {
            return Ok(root_mid.rounded(p.guarded(8)));
        }
        if lower.man.is_zero() {
            // [0, 2 mid]: centre and radius both √(2 mid)/2
            let hi = isqrt_dyadic(&mid.add(&Dyadic::from_mag(self.radius())), w);
            let r = hi.mag_upper().mul_2exp(-1);
            return Ok(hi.mul_2exp(-1).rounded(p).with_radius(r.add(hi.radius())));
        }
        let root_lower = isqrt_dyadic(&lower, w);
        let denom = root_lower.mag_lower().mul_2exp(1);
        Ok(root_mid.with_radius(self.radius().div(denom)).rounded(p.guarded(8)))
    }
}

/// `√d` with about `w` significant bits, as a ball.
fn isqrt_dyadic(d: &Dyadic, w: u32) -> Ball {
    let (mut man, mut exp) = (d.man.clone(), d.exp);
    if exp % 2 != 0 {
        man <<= 1usize;
        exp -= 1;
    }
    let want = 2 * w as i64 + 2;
    let s = ((want - man.bits() as i64) / 2).max(0) + 1;
    let scaled = man << (2 * s) as usize;
    let root = scaled.sqrt();
    let e = exp / 2 - s;
    let exact = &root * &root == scaled;
    let b = Ball::exact(root, e);
    if exact {
        b
    } else {
        b.with_radius(Mag::pow2(e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prec(b: u32) -> Precision {
        Precision::new(b).unwrap()
    }

    fn frac(a: u64, b: u64) -> Fraction {
        Fraction::new(a, b).unwrap()
    }

    /// Decimal digits of π (OEIS A000796), independent of the series above.
    const PI_DIGITS: &str = "3.14159265358979323846264338327950288419716939937510582097494459230781640628620899862803482534211706798214808651328230664709384460955058223172535940812848111745028410270193852110555964462294895493038196";

    fn decimal_ratio(s: &str) -> (BigInt, BigInt) {
        let (i, f) = s.split_once('.').unwrap();
        let num: BigInt = format!("{i}{f}").parse().unwrap();
        (num, BigInt::from(10).pow(f.len() as u32))
    }

    /// Does the ball meet `[num/den - 10^-digits, num/den + 10^-digits]`?
    fn near_decimal(b: &Ball, s: &str) -> bool {
        let (num, den) = decimal_ratio(s);
        let p = prec(800);
        let target = Ball::from_ratio(&num, &den, p).with_radius(Mag::from_f64_upper(
            10f64.powi(-(s.len() as i32 - 3)),
        ));
        b.overlaps(&target)
    }

    #[test]
    fn pi_contract() {
        let p64 = pi_ball(prec(64));
        assert!(near_decimal(&p64, &PI_DIGITS[..30]));
        let (num, den) = decimal_ratio(PI_DIGITS);
        let p600 = pi_ball(prec(600));
        // the 200-digit literal is within 10^-200 of π
        assert!(p600.overlaps(&Ball::from_ratio(&num, &den, prec(800)).with_radius(Mag::pow2(-660))));
        for bits in [16, 64, 256, 1000] {
            let r = pi_ball(prec(bits)).radius().log2_ceil().unwrap();
            assert!(r <= 2 - bits as i64, "bits {bits}: radius 2^{r}");
        }
        assert!(pi_ball(prec(256)).is_within(&pi_ball(prec(64))));
    }

    #[test]
    fn exact_trig_points() {
        let p = prec(64);
        assert_eq!(sin_pi_frac(frac(1, 2), p), Ball::one());
        assert_eq!(sin_pi_frac(frac(1, 6), p), half());
        assert_eq!(sin_pi_frac(frac(5, 6), p), half());
        assert_eq!(sin_pi_frac(frac(0, 1), p), Ball::zero());
        assert_eq!(sin_pi_frac(frac(1, 1), p), Ball::zero());
        assert_eq!(cos_pi_frac(frac(1, 2), p), Ball::zero());
        assert_eq!(cos_pi_frac(frac(1, 3), p), half());
        assert_eq!(cos_pi_frac(frac(2, 3), p), half().neg());
        assert_eq!(cos_pi_frac(frac(1, 1), p), Ball::one().neg());
    }

    #[test]
    fn sine_and_cosine_of_pi_over_five() {
        // values from the closed forms sqrt((5 - √5)/8) and (1 + √5)/4
        let s = sin_pi_frac(frac(1, 5), prec(64));
        let c = cos_pi_frac(frac(1, 5), prec(64));
        assert!(near_decimal(&s, "0.5877852522924731"));
        assert!(near_decimal(&c, "0.8090169943749474"));
        assert!(s.radius().log2_ceil().unwrap() <= 4 - 64);
    }

    #[test]
    fn exp_ln_sqrt_basics() {
        let p = prec(128);
        assert_eq!(Ball::zero().exp(p).unwrap().round_to_integer(), Some(BigInt::one()));
        let e = Ball::one().exp(p).unwrap();
        assert!(near_decimal(&e, "2.718281828459045235360287471352"));
        let l = Ball::from_int(10).ln(p).unwrap();
        assert!(near_decimal(&l, "2.302585092994045684017991454684"));
        let back = l.exp(p).unwrap();
        assert!(back.contains_int(&BigInt::from(10)));
        let r2 = Ball::from_int(2).sqrt(p).unwrap();
        assert!(near_decimal(&r2, "1.414213562373095048801688724209"));
        assert!(Ball::from_int(-1).sqrt(p).is_err());
        assert!(Ball::zero().ln(p).is_err());
        assert_eq!(Ball::from_int(9).sqrt(p).unwrap(), Ball::from_int(3));
        let neg = Ball::from_int(-30).exp(p).unwrap();
        assert!(near_decimal(&neg, "0.0000000000000935762296884017"));
    }

    #[test]
    fn ln2_matches_literal() {
        let l = ln2_ball(prec(100));
        assert!(near_decimal(&l, "0.693147180559945309417232121458176568"));
    }
}
