//! Midpoint–radius enclosures over dyadic midpoints.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::mag::Mag;
use super::Precision;
use crate::error::{Error, Result};

/// Exact `man * 2^exp`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Dyadic {
    pub man: BigInt,
    pub exp: i64,
}

impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Self {
        Dyadic { man, exp }
    }

    pub fn from_mag(m: Mag) -> Self {
        let (man, exp) = m.to_dyadic();
        Dyadic { man, exp }
    }

    fn align(&self, other: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = self.exp.min(other.exp);
        (
            &self.man << (self.exp - e) as usize,
            &other.man << (other.exp - e) as usize,
            e,
        )
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let (a, b, e) = self.align(other);
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        let (a, b, e) = self.align(other);
        Dyadic::new(a - b, e)
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic::new(self.man.abs(), self.exp)
    }

    pub fn cmp_value(&self, other: &Dyadic) -> Ordering {
        let (a, b, _) = self.align(other);
        a.cmp(&b)
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }
}

/// A real number known to lie in `[mid - rad, mid + rad]`.
///
/// Operations take the target [`Precision`] for the result midpoint; the
/// rounding error is folded into the radius, so every result encloses the
/// exact operation applied to any members of the inputs.
/// Equality compares values: midpoints as numbers, radii as bounds.
#[derive(Clone)]
pub struct Ball {
    man: BigInt,
    exp: i64,
    rad: Mag,
}

/// Truncates `man` to `prec` significant bits; returns the rounding error bound.
fn round_mantissa(man: BigInt, exp: i64, prec: u32) -> (BigInt, i64, Mag) {
    let bits = man.bits();
    if bits <= prec as u64 {
        return (man, exp, Mag::ZERO);
    }
    let shift = bits - prec as u64;
    // floor shift for either sign: error strictly below 2^(exp + shift)
    let exact = man.trailing_zeros().is_some_and(|t| t >= shift);
    let rounded = man >> shift as usize;
    let e = exp + shift as i64;
    (rounded, e, if exact { Mag::ZERO } else { Mag::pow2(e) })
}

impl PartialEq for Ball {
    fn eq(&self, o: &Ball) -> bool {
        self.rad == o.rad && self.mid().cmp_value(&o.mid()) == Ordering::Equal
    }
}

impl Eq for Ball {}

impl Ball {
    pub fn zero() -> Ball {
        Ball::exact(BigInt::zero(), 0)
    }

    pub fn one() -> Ball {
        Ball::from_int(1)
    }

    /// `man * 2^exp` with zero radius.
    pub fn exact(man: BigInt, exp: i64) -> Ball {
        Ball {
            man,
            exp,
            rad: Mag::ZERO,
        }
    }

    pub fn from_int(v: impl Into<BigInt>) -> Ball {
        Ball::exact(v.into(), 0)
    }

    pub fn with_radius(mut self, rad: Mag) -> Ball {
        self.rad = self.rad.add(rad);
        self
    }

    /// Enclosure of `num / den`.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: Precision) -> Ball {
        assert!(!den.is_zero(), "ratio with zero denominator");
        if num.is_zero() {
            return Ball::zero();
        }
        let p = prec.bits() as i64;
        // scale so the quotient carries about `prec` bits
        let shift = (p + den.bits() as i64 - num.bits() as i64 + 1).max(0);
        let scaled = num << shift as usize;
        let (q, r) = scaled.div_rem(den);
        if r.is_zero() {
            let (m, e, err) = round_mantissa(q, -shift, prec.bits());
            return Ball { man: m, exp: e, rad: err };
        }
        // truncated quotient: |exact - q| < 1 unit
        let (m, e, err) = round_mantissa(q, -shift, prec.bits());
        Ball {
            man: m,
            exp: e,
            rad: err.add(Mag::pow2(-shift)),
        }
    }

    pub fn from_u64_ratio(num: u64, den: u64, prec: Precision) -> Ball {
        Ball::from_ratio(&BigInt::from(num), &BigInt::from(den), prec)
    }

    pub fn radius(&self) -> Mag {
        self.rad
    }

    pub(crate) fn mid(&self) -> Dyadic {
        Dyadic::new(self.man.clone(), self.exp)
    }

    pub fn mid_parts(&self) -> (&BigInt, i64) {
        (&self.man, self.exp)
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// `|mid|` upper bound.
    pub fn mid_mag(&self) -> Mag {
        Mag::from_bigint_upper(&self.man, self.exp)
    }

    /// Upper bound of `|x|` over the ball.
    pub fn mag_upper(&self) -> Mag {
        self.mid_mag().add(self.rad)
    }

    /// Lower bound of `|x|` over the ball; zero when the ball straddles 0.
    pub fn mag_lower(&self) -> Mag {
        let m = self.mid().abs();
        let lower = m.sub(&Dyadic::from_mag(self.rad));
        if lower.man.is_positive() {
            Mag::from_bigint_lower(&lower.man, lower.exp)
        } else {
            Mag::ZERO
        }
    }

    pub fn rounded(&self, prec: Precision) -> Ball {
        let (man, exp, err) = round_mantissa(self.man.clone(), self.exp, prec.bits());
        Ball {
            man,
            exp,
            rad: self.rad.add(err),
        }
    }

    pub fn neg(&self) -> Ball {
        Ball {
            man: -&self.man,
            exp: self.exp,
            rad: self.rad,
        }
    }

    /// Reflects a ball with negative midpoint; the radius is kept.
    pub fn abs(&self) -> Ball {
        if self.man.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn add(&self, o: &Ball, prec: Precision) -> Ball {
        if self.man.is_zero() {
            return o.rounded(prec).with_radius(self.rad);
        }
        if o.man.is_zero() {
            return self.rounded(prec).with_radius(o.rad);
        }
        let top_a = self.exp + self.man.bits() as i64;
        let top_b = o.exp + o.man.bits() as i64;
        let cutoff = top_a.max(top_b) - prec.bits() as i64 - 8;
        // Operands entirely below the result's precision go to the radius.
        if top_b < cutoff {
            return self.rounded(prec).with_radius(o.mag_upper());
        }
        if top_a < cutoff {
            return o.rounded(prec).with_radius(self.mag_upper());
        }
        let sum = self.mid().add(&o.mid());
        let (man, exp, err) = round_mantissa(sum.man, sum.exp, prec.bits());
        Ball {
            man,
            exp,
            rad: self.rad.add(o.rad).add(err),
        }
    }

    pub fn sub(&self, o: &Ball, prec: Precision) -> Ball {
        self.add(&o.neg(), prec)
    }

    pub fn mul(&self, o: &Ball, prec: Precision) -> Ball {
        let (man, exp, err) = round_mantissa(&self.man * &o.man, self.exp + o.exp, prec.bits());
        let prop = self
            .mid_mag()
            .mul(o.rad)
            .add(o.mid_mag().mul(self.rad))
            .add(self.rad.mul(o.rad));
        Ball {
            man,
            exp,
            rad: prop.add(err),
        }
    }

    pub fn sqr(&self, prec: Precision) -> Ball {
        self.mul(self, prec)
    }

    pub fn mul_int(&self, k: &BigInt, prec: Precision) -> Ball {
        self.mul(&Ball::from_int(k.clone()), prec)
    }

    pub fn scale_by_int(&self, k: i64, prec: Precision) -> Ball {
        self.mul_int(&BigInt::from(k), prec)
    }

    /// Exact scaling by `2^e`.
    pub fn mul_2exp(&self, e: i64) -> Ball {
        Ball {
            man: self.man.clone(),
            exp: self.exp + e,
            rad: self.rad.mul_2exp(e),
        }
    }

    pub fn div(&self, o: &Ball, prec: Precision) -> Result<Ball> {
        let denom_lower = o.mag_lower();
        if denom_lower.is_zero() {
            return Err(Error::BallDomain {
                op: "div",
                detail: "divisor contains zero".into(),
            });
        }
        if self.man.is_zero() && self.rad.is_zero() {
            return Ok(Ball::zero());
        }
        let p = prec.bits() as i64;
        let shift = (p + o.man.bits() as i64 - self.man.bits() as i64 + 2).max(0);
        let (q, r) = (&self.man << shift as usize).div_rem(&o.man);
        let qexp = self.exp - shift - o.exp;
        let trunc = if r.is_zero() { Mag::ZERO } else { Mag::pow2(qexp) };
        let (man, exp, err) = round_mantissa(q, qexp, prec.bits());
        // |a/b - ma/mb| <= (ra + |ma/mb| rb) / (|mb| - rb)
        let quot_mag = Mag::from_bigint_upper(&man, exp).add(err).add(trunc);
        let prop = if self.rad.is_zero() && o.rad.is_zero() {
            Mag::ZERO
        } else {
            self.rad.add(quot_mag.mul(o.rad)).div(denom_lower)
        };
        Ok(Ball {
            man,
            exp,
            rad: prop.add(err).add(trunc),
        })
    }

    pub fn div_int(&self, k: &BigInt, prec: Precision) -> Ball {
        self.div(&Ball::from_int(k.clone()), prec)
            .expect("integer divisor is nonzero")
    }

    pub fn contains_zero(&self) -> bool {
        self.mid().abs().cmp_value(&Dyadic::from_mag(self.rad)) != Ordering::Greater
    }

    pub fn contains_int(&self, z: &BigInt) -> bool {
        let d = self.mid().sub(&Dyadic::new(z.clone(), 0)).abs();
        d.cmp_value(&Dyadic::from_mag(self.rad)) != Ordering::Greater
    }

    /// Does the ball contain `num / den` (`den > 0`)?
    pub fn contains_ratio(&self, num: &BigInt, den: &BigInt) -> bool {
        // |mid*den - num| <= rad*den
        let scaled = Dyadic::new(&self.man * den, self.exp).sub(&Dyadic::new(num.clone(), 0));
        let r = Dyadic::from_mag(self.rad);
        let r = Dyadic::new(r.man * den, r.exp);
        scaled.abs().cmp_value(&r) != Ordering::Greater
    }

    /// Do the two enclosures share a point?
    pub fn overlaps(&self, o: &Ball) -> bool {
        let d = self.mid().sub(&o.mid()).abs();
        let r = Dyadic::from_mag(self.rad.add(o.rad));
        d.cmp_value(&r) != Ordering::Greater
    }

    /// Is `self` a subset of `o`?
    pub fn is_within(&self, o: &Ball) -> bool {
        let d = self.mid().sub(&o.mid()).abs();
        let slack = Dyadic::from_mag(o.rad).sub(&Dyadic::from_mag(self.rad));
        !slack.is_negative() && d.cmp_value(&slack) != Ordering::Greater
    }

    pub fn is_positive(&self) -> bool {
        self.man.is_positive() && !self.contains_zero()
    }

    /// Rounding certificate: the unique integer `z` with radius below 1/4
    /// and `|mid - z| + rad < 1/2`.
    pub fn round_to_integer(&self) -> Option<BigInt> {
        if !self.rad.lt_pow2(-2) {
            return None;
        }
        let (z, diff) = if self.exp >= 0 {
            (&self.man << self.exp as usize, Dyadic::new(BigInt::zero(), 0))
        } else {
            let s = (-self.exp) as usize;
            let half = BigInt::one() << (s - 1);
            let z = (&self.man + half) >> s;
            let diff = Dyadic::new(&self.man - (&z << s), self.exp);
            (z, diff)
        };
        let slack = diff.abs().add(&Dyadic::from_mag(self.rad));
        (slack.cmp_value(&Dyadic::new(BigInt::one(), -1)) == Ordering::Less).then_some(z)
    }

    /// Nearest f64 to the midpoint; saturates to ±inf beyond the f64 range.
    pub fn mid_f64(&self) -> f64 {
        if self.man.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits() as i64;
        let shift = (bits - 60).max(0);
        let top: i64 = (&self.man >> shift as usize).try_into().unwrap_or(0);
        let e = self.exp + shift;
        if e > 1100 {
            return if top > 0 { f64::INFINITY } else { f64::NEG_INFINITY };
        }
        if e < -1200 {
            return 0.0;
        }
        top as f64 * 2f64.powi(e as i32)
    }

    /// Midpoint in decimal with `digits` digits after the point.
    pub fn mid_decimal(&self, digits: usize) -> String {
        let neg = self.man.is_negative();
        let abs = self.man.abs();
        let scaled = if self.exp >= 0 {
            (abs << self.exp as usize) * BigInt::from(10).pow(digits as u32)
        } else {
            (abs * BigInt::from(10).pow(digits as u32)) >> (-self.exp) as usize
        };
        let s = scaled.to_string();
        let s = if s.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
        } else {
            s
        };
        let (int, frac) = s.split_at(s.len() - digits);
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }

    /// Smallest `e` with `rad <= 2^e`; `None` for exact balls.
    pub fn radius_log2(&self) -> Option<i64> {
        self.rad.log2_ceil()
    }
}

impl fmt::Debug for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e} ± ", self.mid_f64())?;
        match self.radius_log2() {
            Some(e) => write!(f, "2^{e}]"),
            None => write!(f, "0]"),
        }
    }
}
