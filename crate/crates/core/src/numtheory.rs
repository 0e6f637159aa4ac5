//! Exact integer number theory: the oracles every transcendental route is
//! checked against, and the prime-power classifications that choose each
//! identity's right-hand side.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A prime raised to a positive exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    pub prime: u64,
    pub exponent: u32,
}

impl PrimePower {
    pub fn value(&self) -> u64 {
        self.prime.pow(self.exponent)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PrimePowerClass {
    NotPrimePower,
    PrimePower(PrimePower),
}

impl PrimePowerClass {
    pub fn prime(&self) -> Option<u64> {
        match self {
            PrimePowerClass::NotPrimePower => None,
            PrimePowerClass::PrimePower(pp) => Some(pp.prime),
        }
    }

    pub fn is_prime_power(&self) -> bool {
        matches!(self, PrimePowerClass::PrimePower(_))
    }
}

/// Prime factorization, primes strictly ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    factors: Vec<PrimePower>,
}

impl Factorization {
    pub fn factors(&self) -> &[PrimePower] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|f| f.prime)
    }

    pub fn multiply_out(&self) -> u64 {
        self.factors.iter().map(PrimePower::value).product()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

/// Deterministic trial division. Adequate well past the desk-scale inputs
/// this crate sees (n in the low thousands).
pub fn factorize(n: u64) -> Result<Factorization> {
    if n < 2 {
        return domain("factorize", n, "n >= 2");
    }
    Ok(factor_unchecked(n))
}

fn factor_unchecked(mut n: u64) -> Factorization {
    let mut factors = Vec::new();
    let mut push = |prime: u64, n: &mut u64| {
        let mut exponent = 0;
        while *n % prime == 0 {
            *n /= prime;
            exponent += 1;
        }
        if exponent > 0 {
            factors.push(PrimePower { prime, exponent });
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut d = 5u64;
    // 6k ± 1 wheel
    while d.saturating_mul(d) <= n {
        push(d, &mut n);
        push(d + 2, &mut n);
        d += 6;
    }
    if n > 1 {
        factors.push(PrimePower {
            prime: n,
            exponent: 1,
        });
    }
    Factorization { factors }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && {
        let f = factor_unchecked(n);
        f.factors.len() == 1 && f.factors[0].exponent == 1
    }
}

/// Sieve of Eratosthenes, all primes `<= n`.
pub fn primes_upto(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// `lcm{1, ..., n}` as the product of the largest prime powers not
/// exceeding `n`; 1 for `n <= 1`.
pub fn lcm_upto(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for p in primes_upto(n) {
        let mut q = p;
        while let Some(next) = q.checked_mul(p).filter(|&v| v <= n) {
            q = next;
        }
        acc *= q;
    }
    acc
}

pub fn totient(n: u64) -> Result<u64> {
    match n {
        0 => domain("totient", n, "n >= 1"),
        1 => Ok(1),
        _ => Ok(factor_unchecked(n)
            .factors
            .iter()
            .map(|f| (f.prime - 1) * f.prime.pow(f.exponent - 1))
            .product()),
    }
}

pub fn classify_prime_power(n: u64) -> PrimePowerClass {
    if n < 2 {
        return PrimePowerClass::NotPrimePower;
    }
    match factor_unchecked(n).factors.as_slice() {
        [single] => PrimePowerClass::PrimePower(*single),
        _ => PrimePowerClass::NotPrimePower,
    }
}

/// Recognizes `n = 2·p^α`.
///
/// Powers of two `n = 2^e` (e >= 2) count as `2·2^(e-1)` and are reported
/// as `(2, e)`, the exponent of `n` itself; odd `p` reports `(p, α)`.
pub fn classify_twice_prime_power(n: u64) -> Result<Option<PrimePower>> {
    if n < 3 {
        return domain("classify_twice_prime_power", n, "n >= 3");
    }
    if n % 2 != 0 {
        return Ok(None);
    }
    Ok(match classify_prime_power(n / 2) {
        PrimePowerClass::NotPrimePower => None,
        PrimePowerClass::PrimePower(pp) if pp.prime == 2 => Some(PrimePower {
            prime: 2,
            exponent: pp.exponent + 1,
        }),
        PrimePowerClass::PrimePower(pp) => Some(pp),
    })
}

/// All `d` with `d | n` and `0 < d < n`, ascending.
pub fn proper_divisors(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            let e = n / d;
            if e != d && e != n {
                large.push(e);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Divisors of `n` including `n` itself, ascending; empty for 0.
pub fn divisors(n: u64) -> Vec<u64> {
    if n == 0 {
        return Vec::new();
    }
    let mut all = proper_divisors(n);
    all.push(n);
    all
}

/// lcm of the proper divisors of `n`, 1 when there are none.
pub fn lcm_bar(n: u64) -> BigInt {
    proper_divisors(n)
        .into_iter()
        .fold(BigInt::one(), |acc, d| acc.lcm(&BigInt::from(d)))
}

/// `0 < k < n` with `gcd(k, n) = 1`, ascending.
pub fn coprime_residues(n: u64) -> impl Iterator<Item = u64> {
    (1..n).filter(move |&k| gcd(k, n) == 1)
}

/// `0 < k < n` with `gcd(k, n) > 1`, ascending.
pub fn noncoprime_residues(n: u64) -> impl Iterator<Item = u64> {
    (1..n).filter(move |&k| gcd(k, n) != 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_gcd(a: u64, b: u64) -> u64 {
        (1..=a.max(b))
            .rev()
            .find(|d| a % d == 0 && b % d == 0)
            .unwrap_or(0)
    }

    fn fold_lcm(n: u64) -> BigInt {
        (1..=n).fold(BigInt::one(), |acc, k| acc.lcm(&BigInt::from(k)))
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(0, 7), 7);
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(gcd(35, 64), 1);
        assert_eq!(gcd(0, 0), 0);
        for a in 0..40 {
            for b in 0..40 {
                assert_eq!(gcd(a, b), brute_gcd(a, b), "{a} {b}");
            }
        }
    }

    #[test]
    fn lcm_upto_examples() {
        assert_eq!(lcm_upto(0), BigInt::one());
        assert_eq!(lcm_upto(1), BigInt::one());
        assert_eq!(lcm_upto(6), BigInt::from(60));
        assert_eq!(lcm_upto(10), BigInt::from(2520));
        for n in 0..=300 {
            assert_eq!(lcm_upto(n), fold_lcm(n), "n = {n}");
        }
    }

    #[test]
    fn totient_examples() {
        assert_eq!(totient(1), Ok(1));
        assert_eq!(totient(6), Ok(2));
        assert_eq!(totient(9), Ok(6));
        assert!(totient(0).is_err());
    }

    #[test]
    fn factorize_examples() {
        let f = |n| {
            factorize(n)
                .unwrap()
                .factors()
                .iter()
                .map(|p| (p.prime, p.exponent))
                .collect::<Vec<_>>()
        };
        assert_eq!(f(12), vec![(2, 2), (3, 1)]);
        assert_eq!(f(8), vec![(2, 3)]);
        assert_eq!(f(97), vec![(97, 1)]);
        assert!(factorize(1).is_err());
        assert!(factorize(0).is_err());
    }

    #[test]
    fn classification_examples() {
        assert_eq!(
            classify_prime_power(8),
            PrimePowerClass::PrimePower(PrimePower { prime: 2, exponent: 3 })
        );
        assert_eq!(classify_prime_power(12), PrimePowerClass::NotPrimePower);
        assert_eq!(classify_prime_power(1), PrimePowerClass::NotPrimePower);
        assert_eq!(classify_prime_power(0), PrimePowerClass::NotPrimePower);

        let twice = |n| classify_twice_prime_power(n).unwrap().map(|p| (p.prime, p.exponent));
        assert_eq!(twice(10), Some((5, 1)));
        assert_eq!(twice(4), Some((2, 2)));
        assert_eq!(twice(8), Some((2, 3)));
        assert_eq!(twice(15), None);
        assert_eq!(twice(3), None);
        assert_eq!(twice(12), None);
        assert!(classify_twice_prime_power(2).is_err());
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(proper_divisors(1), Vec::<u64>::new());
        assert_eq!(proper_divisors(0), Vec::<u64>::new());
        assert_eq!(proper_divisors(12), vec![1, 2, 3, 4, 6]);
        assert_eq!(proper_divisors(7), vec![1]);
        assert_eq!(proper_divisors(36), vec![1, 2, 3, 4, 6, 9, 12, 18]);
        assert_eq!(lcm_bar(1), BigInt::one());
        assert_eq!(lcm_bar(12), BigInt::from(12));
        assert_eq!(lcm_bar(7), BigInt::one());
        assert_eq!(lcm_bar(9), BigInt::from(3));
    }

    #[test]
    fn coprime_residue_examples() {
        assert_eq!(coprime_residues(1).count(), 0);
        assert_eq!(coprime_residues(6).collect::<Vec<_>>(), vec![1, 5]);
        assert_eq!(coprime_residues(8).collect::<Vec<_>>(), vec![1, 3, 5, 7]);
    }

    #[test]
    fn residue_count_is_totient() {
        // totient(1) = 1 counts k = 0; the open range 0 < k < 1 is empty
        assert_eq!(coprime_residues(1).count(), 0);
        for n in 2..=2000 {
            assert_eq!(coprime_residues(n).count() as u64, totient(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn lcm_ratio_follows_prime_power_class() {
        let mut prev = lcm_upto(1);
        for n in 2..=2000u64 {
            let cur = lcm_upto(n);
            let expected = classify_prime_power(n).prime().unwrap_or(1);
            assert_eq!(&cur / &prev, BigInt::from(expected), "n = {n}");
            assert!((&cur % &prev) == BigInt::from(0));
            prev = cur;
        }
    }

    #[test]
    fn lcm_bar_matches_divisor_fold() {
        for n in 2..=2000u64 {
            let divs: Vec<u64> = (1..n).filter(|d| n % d == 0).collect();
            let oracle = divs.iter().fold(BigInt::one(), |a, &d| a.lcm(&BigInt::from(d)));
            assert_eq!(lcm_bar(n), oracle, "n = {n}");
            let closed = match classify_prime_power(n) {
                PrimePowerClass::PrimePower(pp) => n / pp.prime,
                PrimePowerClass::NotPrimePower => n,
            };
            assert_eq!(lcm_bar(n), BigInt::from(closed), "n = {n}");
        }
    }

    #[test]
    fn factorization_multiplies_out() {
        for n in 2..=1_000_000u64 {
            let f = factorize(n).unwrap();
            assert_eq!(f.multiply_out(), n);
            let primes: Vec<_> = f.primes().collect();
            assert!(primes.windows(2).all(|w| w[0] < w[1]));
            assert!(f.factors().iter().all(|p| p.exponent >= 1 && is_prime(p.prime)));
        }
    }

    #[test]
    fn twice_prime_power_tracks_half() {
        for n in 3..=2000u64 {
            let twice = classify_twice_prime_power(n).unwrap();
            let half = n % 2 == 0 && classify_prime_power(n / 2).is_prime_power();
            assert_eq!(twice.is_some(), half, "n = {n}");
        }
    }
}
