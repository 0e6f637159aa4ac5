//! Exact integer polynomials and cyclotomic polynomials.

use std::collections::HashMap;
use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Error, Result};
use crate::numtheory::{classify_prime_power, factorize};

/// Dense integer polynomial, `coefficients[i]` multiplies `X^i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coefficients: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(coefficients: Vec<BigInt>) -> Self {
        let mut p = IntPoly { coefficients };
        p.trim();
        p
    }

    pub fn from_i64(coefficients: &[i64]) -> Self {
        Self::new(coefficients.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly::default()
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `X^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut c = vec![BigInt::zero(); n + 1];
        c[0] = BigInt::from(-1);
        c[n] += 1;
        Self::new(c)
    }

    fn trim(&mut self) {
        while self.coefficients.last().is_some_and(Zero::is_zero) {
            self.coefficients.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn coefficient(&self, i: usize) -> BigInt {
        self.coefficients.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coefficients.last()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coefficients
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// `p(X^k)`.
    pub fn compose_power(&self, k: usize) -> Self {
        assert!(k >= 1);
        let Some(deg) = self.degree() else {
            return IntPoly::zero();
        };
        let mut c = vec![BigInt::zero(); deg * k + 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            c[i * k] = a.clone();
        }
        Self::new(c)
    }

    /// Quotient and remainder by a divisor with leading coefficient ±1.
    pub fn div_rem_monic(&self, divisor: &IntPoly) -> (IntPoly, IntPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap();
        assert!(lead.abs().is_one(), "divisor must have unit leading coefficient");
        let Some(nd) = self.degree().filter(|&nd| nd >= dd) else {
            return (IntPoly::zero(), self.clone());
        };
        let mut rem = self.coefficients.clone();
        let mut quot = vec![BigInt::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let q = &rem[i + dd] * lead;
            if q.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coefficients.iter().enumerate() {
                if !dc.is_zero() {
                    rem[i + j] -= &q * dc;
                }
            }
            quot[i] = q;
        }
        (IntPoly::new(quot), IntPoly::new(rem))
    }

    /// Exact division; a nonzero remainder is an error, never rounded away.
    pub fn div_exact(&self, divisor: &IntPoly) -> Result<IntPoly> {
        let (q, r) = self.div_rem_monic(divisor);
        match r.degree() {
            None => Ok(q),
            Some(degree) => Err(Error::InexactDivision { degree }),
        }
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;

    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut c = vec![BigInt::zero(); self.coefficients.len() + rhs.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coefficients.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        IntPoly::new(c)
    }
}

impl fmt::Display for IntPoly {
    /// Coefficients low to high, space separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, c) in self.coefficients.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// `Φ_n(X)`: `X^n - 1` divided exactly by `Φ_d` for every proper divisor `d`.
pub fn cyclotomic_poly(n: u64) -> Result<IntPoly> {
    if n == 0 {
        return domain("cyclotomic_poly", n, "n >= 1");
    }
    let mut memo = HashMap::new();
    cyclotomic_memo(n, &mut memo)
}

fn cyclotomic_memo(n: u64, memo: &mut HashMap<u64, IntPoly>) -> Result<IntPoly> {
    if let Some(p) = memo.get(&n) {
        return Ok(p.clone());
    }
    let mut poly = IntPoly::x_pow_minus_one(n as usize);
    for d in crate::numtheory::proper_divisors(n) {
        let phi_d = cyclotomic_memo(d, memo)?;
        poly = poly.div_exact(&phi_d)?;
    }
    memo.insert(n, poly.clone());
    Ok(poly)
}

/// `Φ_n` built only from the prime-step rules
/// `Φ_{mp}(X) = Φ_m(X^p)` when `p | m` and
/// `Φ_{mp}(X) = Φ_m(X^p) / Φ_m(X)` when `p ∤ m`, starting from `Φ_1 = X - 1`.
pub fn cyclotomic_poly_by_recursion(n: u64) -> Result<IntPoly> {
    if n == 0 {
        return domain("cyclotomic_poly_by_recursion", n, "n >= 1");
    }
    let mut m = 1u64;
    let mut poly = IntPoly::from_i64(&[-1, 1]);
    if n == 1 {
        return Ok(poly);
    }
    for pp in factorize(n)?.factors() {
        let p = pp.prime as usize;
        poly = poly.compose_power(p).div_exact(&poly)?;
        m *= pp.prime;
        for _ in 1..pp.exponent {
            poly = poly.compose_power(p);
            m *= pp.prime;
        }
    }
    debug_assert_eq!(m, n);
    Ok(poly)
}

pub fn eval_int(p: &IntPoly, x: i64) -> BigInt {
    p.eval(&BigInt::from(x))
}

/// `Φ_n(1)` from the prime-power classification alone.
pub fn phi_at_1(n: u64) -> Result<u64> {
    match n {
        0 => domain("phi_at_1", n, "n >= 1"),
        1 => Ok(0),
        _ => Ok(classify_prime_power(n).prime().unwrap_or(1)),
    }
}

/// `Φ_n(-1)` from the `2·p^α` classification alone.
pub fn phi_at_minus1(n: u64) -> Result<i64> {
    match n {
        0 => domain("phi_at_minus1", n, "n >= 1"),
        1 => Ok(-2),
        2 => Ok(0),
        _ => Ok(crate::numtheory::classify_twice_prime_power(n)?
            .map_or(1, |pp| pp.prime as i64)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::{divisors, totient};

    fn poly(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(cyclotomic_poly(1).unwrap(), poly(&[-1, 1]));
        assert_eq!(cyclotomic_poly(6).unwrap(), poly(&[1, -1, 1]));
        let p105 = cyclotomic_poly(105).unwrap();
        assert_eq!(p105.degree(), Some(48));
        assert_eq!(p105.coefficient(7), BigInt::from(-2));
        assert!(p105.coefficients()[..7].iter().all(|c| c.abs() <= BigInt::one()));
        assert!(cyclotomic_poly(0).is_err());
    }

    #[test]
    fn eval_examples() {
        assert_eq!(eval_int(&poly(&[-1, 1]), 1), BigInt::zero());
        assert_eq!(eval_int(&poly(&[1, -1, 1]), -1), BigInt::from(3));
        assert_eq!(eval_int(&poly(&[1, 0, -1, 0, 1]), 1), BigInt::one());
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(phi_at_1(8), Ok(2));
        assert_eq!(phi_at_1(12), Ok(1));
        assert_eq!(phi_at_1(1), Ok(0));
        assert_eq!(phi_at_1(2), Ok(2));
        assert_eq!(phi_at_minus1(6), Ok(3));
        assert_eq!(phi_at_minus1(9), Ok(1));
        assert_eq!(phi_at_minus1(2), Ok(0));
        assert_eq!(phi_at_minus1(1), Ok(-2));
        assert_eq!(phi_at_minus1(4), Ok(2));
    }

    #[test]
    fn inexact_division_is_an_error() {
        let err = poly(&[1, 0, 1]).div_exact(&poly(&[-1, 1])).unwrap_err();
        assert_eq!(err, Error::InexactDivision { degree: 0 });
    }

    #[test]
    fn closed_forms_match_evaluation() {
        for n in 1..=200u64 {
            let p = cyclotomic_poly(n).unwrap();
            assert_eq!(eval_int(&p, 1), BigInt::from(phi_at_1(n).unwrap()), "n = {n}");
            assert_eq!(eval_int(&p, -1), BigInt::from(phi_at_minus1(n).unwrap()), "n = {n}");
            assert_eq!(p.degree(), Some(totient(n).unwrap() as usize));
        }
    }

    #[test]
    fn divisor_product_is_x_pow_minus_one() {
        for n in 1..=100u64 {
            let product = divisors(n)
                .into_iter()
                .map(|d| cyclotomic_poly(d).unwrap())
                .fold(IntPoly::one(), |acc, p| &acc * &p);
            assert_eq!(product, IntPoly::x_pow_minus_one(n as usize), "n = {n}");
        }
    }

    #[test]
    fn prime_step_rules_hold() {
        for p in crate::numtheory::primes_upto(200) {
            for n in 1..=200 / p {
                let lhs = cyclotomic_poly(n * p).unwrap();
                let base = cyclotomic_poly(n).unwrap().compose_power(p as usize);
                if n % p == 0 {
                    assert_eq!(lhs, base, "n = {n}, p = {p}");
                } else {
                    assert_eq!(&lhs * &cyclotomic_poly(n).unwrap(), base, "n = {n}, p = {p}");
                }
            }
        }
    }

    #[test]
    fn recursion_route_agrees_with_division_route() {
        for n in 1..=300u64 {
            assert_eq!(
                cyclotomic_poly_by_recursion(n).unwrap(),
                cyclotomic_poly(n).unwrap(),
                "n = {n}"
            );
        }
    }
}
