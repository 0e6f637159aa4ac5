//! Upper bounds for radii: a 32-bit mantissa and a binary exponent, every
//! operation rounded away from zero.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Zero;

const MAG_BITS: u32 = 32;
const MAG_LOW: u64 = 1 << (MAG_BITS - 1);

/// Nonnegative `man * 2^exp`; `man` is zero or normalized to exactly
/// [`MAG_BITS`] bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mag {
    man: u64,
    exp: i64,
}

impl Mag {
    pub const ZERO: Mag = Mag { man: 0, exp: 0 };

    fn normalize(man: u128, exp: i64, up: bool) -> Mag {
        if man == 0 {
            return Mag::ZERO;
        }
        let bits = 128 - man.leading_zeros();
        if bits > MAG_BITS {
            let shift = bits - MAG_BITS;
            let mut m = man >> shift;
            if up && (m << shift) != man {
                m += 1;
            }
            let mut e = exp + shift as i64;
            if m >> MAG_BITS != 0 {
                m >>= 1;
                e += 1;
            }
            Mag { man: m as u64, exp: e }
        } else {
            let shift = MAG_BITS - bits;
            Mag {
                man: (man << shift) as u64,
                exp: exp - shift as i64,
            }
        }
    }

    pub fn pow2(e: i64) -> Mag {
        Mag {
            man: MAG_LOW,
            exp: e - (MAG_BITS as i64 - 1),
        }
    }

    /// `v * 2^exp`, exact when `v` fits the mantissa.
    pub fn from_u64_2exp(v: u64, exp: i64) -> Mag {
        Mag::normalize(v as u128, exp, true)
    }

    pub fn from_u64(v: u64) -> Mag {
        Mag::from_u64_2exp(v, 0)
    }

    /// Upper bound for `|m| * 2^exp`.
    pub fn from_bigint_upper(m: &BigInt, exp: i64) -> Mag {
        Self::from_bigint(m, exp, true)
    }

    /// Lower bound for `|m| * 2^exp`.
    pub fn from_bigint_lower(m: &BigInt, exp: i64) -> Mag {
        Self::from_bigint(m, exp, false)
    }

    fn from_bigint(m: &BigInt, exp: i64, up: bool) -> Mag {
        if m.is_zero() {
            return Mag::ZERO;
        }
        let bits = m.bits();
        let keep = 64u64;
        if bits <= keep {
            let v = m.magnitude().iter_u64_digits().next().unwrap_or(0);
            return Mag::normalize(v as u128, exp, up);
        }
        let shift = bits - keep;
        let top = m.magnitude() >> shift;
        let v = top.iter_u64_digits().next().unwrap_or(0) as u128;
        // Discarded low bits always make the truncated mantissa an underestimate.
        let v = if up { v + 1 } else { v };
        Mag::normalize(v, exp + shift as i64, up)
    }

    /// Upper bound from a finite nonnegative float; callers use this only
    /// for coarse fallbacks.
    pub fn from_f64_upper(v: f64) -> Mag {
        assert!(v.is_finite() && v >= 0.0);
        if v == 0.0 {
            return Mag::ZERO;
        }
        let (m, e) = frexp(v);
        // m in [0.5, 1): take 53 bits, then round the mantissa up.
        let man = (m * (1u64 << 53) as f64) as u128;
        Mag::normalize(man + 1, e as i64 - 53, true)
    }

    pub fn is_zero(&self) -> bool {
        self.man == 0
    }

    pub fn add(self, o: Mag) -> Mag {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (hi, lo) = if self.exp >= o.exp { (self, o) } else { (o, self) };
        let gap = (hi.exp - lo.exp) as u64;
        if gap >= 64 {
            // lo < 2^(lo.exp + 32) <= one unit of hi's last place
            return Mag::normalize(hi.man as u128 + 1, hi.exp, true);
        }
        let wide = ((hi.man as u128) << gap) + lo.man as u128;
        Mag::normalize(wide, lo.exp, true)
    }

    pub fn mul(self, o: Mag) -> Mag {
        if self.is_zero() || o.is_zero() {
            return Mag::ZERO;
        }
        Mag::normalize(self.man as u128 * o.man as u128, self.exp + o.exp, true)
    }

    /// Upper bound for `self / o`; `o` must be nonzero (and should be a
    /// lower bound of the true divisor).
    pub fn div(self, o: Mag) -> Mag {
        assert!(!o.is_zero(), "Mag division by zero");
        if self.is_zero() {
            return Mag::ZERO;
        }
        let num = (self.man as u128) << 64;
        let q = num.div_ceil(o.man as u128);
        Mag::normalize(q, self.exp - o.exp - 64, true)
    }

    pub fn mul_u64(self, k: u64) -> Mag {
        self.mul(Mag::from_u64(k))
    }

    pub fn mul_2exp(self, e: i64) -> Mag {
        if self.is_zero() {
            self
        } else {
            Mag {
                man: self.man,
                exp: self.exp + e,
            }
        }
    }

    /// Exact value as `(mantissa, exponent)`.
    pub fn to_dyadic(self) -> (BigInt, i64) {
        (BigInt::from(self.man), self.exp)
    }

    /// Smallest `e` with `self <= 2^e`, `None` for zero.
    pub fn log2_ceil(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let bits = 64 - self.man.leading_zeros() as i64;
        let pow = self.man.is_power_of_two();
        Some(self.exp + bits - if pow { 1 } else { 0 })
    }

    /// `self < 2^e`.
    pub fn lt_pow2(&self, e: i64) -> bool {
        self.cmp(&Mag::pow2(e)) == Ordering::Less
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let e = self.exp.clamp(-2000, 2000) as i32;
        self.man as f64 * 2f64.powi(e)
    }
}

impl PartialOrd for Mag {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mag {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        // Both normalized to the same mantissa width.
        self.exp.cmp(&other.exp).then(self.man.cmp(&other.man))
    }
}

fn frexp(v: f64) -> (f64, i32) {
    let bits = v.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i32;
    if raw_exp == 0 {
        let (m, e) = frexp(v * 2f64.powi(64));
        return (m, e - 64);
    }
    let e = raw_exp - 1022;
    let m = f64::from_bits((bits & !(0x7ff << 52)) | (1022u64 << 52));
    (m, e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn val(m: Mag) -> f64 {
        m.to_f64()
    }

    #[test]
    fn normalization_and_exactness() {
        assert_eq!(val(Mag::from_u64(6)), 6.0);
        assert_eq!(val(Mag::pow2(-3)), 0.125);
        assert_eq!(Mag::pow2(-3).log2_ceil(), Some(-3));
        assert_eq!(Mag::from_u64(5).log2_ceil(), Some(3));
        assert!(Mag::from_u64(3).lt_pow2(2));
        assert!(!Mag::from_u64(4).lt_pow2(2));
    }

    #[test]
    fn arithmetic_rounds_up() {
        let third = Mag::from_u64(1).div(Mag::from_u64(3));
        assert!(val(third) >= 1.0 / 3.0);
        assert!(val(third) < 1.0 / 3.0 * (1.0 + 1e-9));
        let big = Mag::from_u64((1 << 40) + 1);
        assert!(val(big) >= ((1u64 << 40) + 1) as f64);
        let s = Mag::pow2(0).add(Mag::pow2(-200));
        assert!(val(s) > 1.0);
        let p = Mag::from_u64(u32::MAX as u64).mul(Mag::from_u64(u32::MAX as u64));
        assert!(val(p) >= (u32::MAX as f64).powi(2));
    }

    #[test]
    fn bigint_bounds_bracket() {
        // m1 * 2^e1 vs m2 * 2^e2
        fn cmp(m1: &BigInt, e1: i64, m2: &BigInt, e2: i64) -> Ordering {
            let e = e1.min(e2);
            (m1 << (e1 - e) as usize).cmp(&(m2 << (e2 - e) as usize))
        }
        for n in [BigInt::from(10).pow(40) + 7, BigInt::from(-12345), BigInt::from(1) << 200usize] {
            let abs = num_traits::Signed::abs(&n);
            let (um, ue) = Mag::from_bigint_upper(&n, -3).to_dyadic();
            let (lm, le) = Mag::from_bigint_lower(&n, -3).to_dyadic();
            assert_ne!(cmp(&um, ue, &abs, -3), Ordering::Less);
            assert_ne!(cmp(&lm, le, &abs, -3), Ordering::Greater);
        }
    }

    #[test]
    fn float_upper_bound() {
        for v in [1e-300, 0.1, 1.0, 3.5, 1e300] {
            assert!(val(Mag::from_f64_upper(v)) >= v);
        }
    }
}
