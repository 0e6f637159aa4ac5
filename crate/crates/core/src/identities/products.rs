use num_bigint::BigInt;
use rayon::prelude::*;

use super::{drive, integer_attempt, zero_attempt, Attempt, EquationId, IdentityReport, PrecisionPlan, Status, Verdict};
use crate::cyclotomic::{cyclotomic_poly, eval_int, phi_at_1};
use crate::farey::{farey_half, farey_interior, Fraction};
use crate::hpreal::{cos_pi_frac, sin_pi_frac, Ball, LnGamma, Precision, TrigTable};
use crate::numtheory::{
    classify_prime_power, classify_twice_prime_power, coprime_residues, lcm_bar, lcm_upto,
    noncoprime_residues, totient,
};

/// Factors per parallel task. Fixed so partial products, and therefore
/// the final ball, do not depend on the number of workers.
const CHUNK: usize = 128;
/// Terms pulled from a lazy enumeration per parallel batch.
const BATCH: usize = CHUNK * 64;

fn product_of<T: Sync>(items: &[T], p: Precision, f: impl Fn(&T) -> Ball + Sync) -> Ball {
    items
        .par_chunks(CHUNK)
        .map(|c| c.iter().fold(Ball::one(), |acc, x| acc.mul(&f(x), p)))
        .collect::<Vec<_>>()
        .iter()
        .fold(Ball::one(), |acc, b| acc.mul(b, p))
}

fn sum_of<T: Sync>(items: &[T], p: Precision, f: impl Fn(&T) -> Ball + Sync) -> Ball {
    items
        .par_chunks(CHUNK)
        .map(|c| c.iter().fold(Ball::zero(), |acc, x| acc.add(&f(x), p)))
        .collect::<Vec<_>>()
        .iter()
        .fold(Ball::zero(), |acc, b| acc.add(b, p))
}

/// Product over a lazily enumerated index set, batch by batch.
fn streamed_product<T: Send + Sync>(
    mut it: impl Iterator<Item = T>,
    p: Precision,
    f: impl Fn(&T) -> Ball + Sync,
) -> Ball {
    let mut acc = Ball::one();
    loop {
        let batch: Vec<T> = it.by_ref().take(BATCH).collect();
        if batch.is_empty() {
            return acc;
        }
        acc = acc.mul(&product_of(&batch, p, &f), p);
    }
}

fn streamed_sum<T: Send + Sync>(
    mut it: impl Iterator<Item = T>,
    p: Precision,
    f: impl Fn(&T) -> Ball + Sync,
) -> Ball {
    let mut acc = Ball::zero();
    loop {
        let batch: Vec<T> = it.by_ref().take(BATCH).collect();
        if batch.is_empty() {
            return acc;
        }
        acc = acc.add(&sum_of(&batch, p, &f), p);
    }
}

fn frac(k: u64, n: u64) -> Fraction {
    Fraction::new(k, n).expect("0 <= k <= n")
}

fn two_sin(t: &TrigTable, k: u64) -> Ball {
    t.sin(k).mul_2exp(1)
}

fn two_abs_cos(t: &TrigTable, k: u64) -> Ball {
    t.cos(k).abs().mul_2exp(1)
}

/// `Π 2 sin(πk/n)` over the given residues, from one table.
fn sine_product(n: u64, ks: &[u64], p: Precision) -> Ball {
    if ks.is_empty() {
        return Ball::one();
    }
    let t = TrigTable::new(n, p);
    product_of(ks, p, |&k| two_sin(&t, k))
}

fn coprime(n: u64) -> Vec<u64> {
    coprime_residues(n).collect()
}

fn noncoprime(n: u64) -> Vec<u64> {
    noncoprime_residues(n).collect()
}

/// `p` when `n = p^α`, else 1.
fn prime_or_one(n: u64) -> u64 {
    classify_prime_power(n).prime().unwrap_or(1)
}

/// `ln 2π - 2 ln Γ(r)`.
fn log_factor(lg: &LnGamma, r: Fraction, p: Precision) -> Ball {
    let g = lg.ln_gamma_frac(r).expect("r in (0, 1)");
    lg.ln_2pi().sub(&g.mul_2exp(1), p)
}

/// Five-digit-or-so headroom for the log-space sums before `exp`.
const LOG_GUARD: u32 = 16;

/// Sine route to `LCM(n)` over the Farey half range `(0, 1/2]`.
pub fn lcm_via_farey_sine(n: u64, plan: &PrecisionPlan) -> IdentityReport {
    let expected = lcm_upto(n);
    drive(EquationId::E3, n, plan, expected.to_string(), |p| {
        let half = farey_half(n, true).expect("order >= 2");
        let prod = streamed_product(half, p, |r| sin_pi_frac(*r, p).mul_2exp(1));
        integer_attempt(prod.sqr(p).mul_2exp(-1), &expected)
    })
}

/// Gamma route to `LCM(n)` over the Farey interior, summed in log space.
pub fn lcm_via_farey_gamma(n: u64, plan: &PrecisionPlan) -> IdentityReport {
    let expected = lcm_upto(n);
    drive(EquationId::E2, n, plan, expected.to_string(), |p| {
        let wp = p.guarded(LOG_GUARD);
        let lg = LnGamma::new(wp);
        let interior = farey_interior(n).expect("order >= 2");
        let log = streamed_sum(interior, wp, |r| log_factor(&lg, *r, wp));
        exp_attempt(&log, p, &expected)
    })
}

fn exp_attempt(log: &Ball, p: Precision, expected: &BigInt) -> Attempt {
    match log.exp(p) {
        Ok(v) => integer_attempt(v, expected),
        Err(_) => Attempt {
            lhs: None,
            verdict: Verdict::Uncertain,
        },
    }
}

/// `Π_{k⊥n} Γ(k/n)² / 2π`: `1/p` for prime powers, else 1.
pub fn martin_gamma_ratio(n: u64, plan: &PrecisionPlan) -> IdentityReport {
    let class = if n >= 2 { classify_prime_power(n).prime() } else { None };
    let expected = match class {
        Some(q) => format!("1/{q}"),
        None => "1".into(),
    };
    drive(EquationId::E1, n, plan, expected, |p| {
        let wp = p.guarded(LOG_GUARD);
        let lg = LnGamma::new(wp);
        let ks = coprime(n);
        let log = sum_of(&ks, wp, |&k| log_factor(&lg, frac(k, n), wp).neg());
        let v = match log.exp(p) {
            Ok(v) => v,
            Err(_) => {
                return Attempt {
                    lhs: None,
                    verdict: Verdict::Uncertain,
                }
            }
        };
        match class {
            None => integer_attempt(v, &BigInt::from(1)),
            Some(q) => reciprocal_attempt(v, q, p),
        }
    })
}

/// `v = 1/q`: `q·v` rounds to 1 and `rad(v) < 1/(4q²)`.
fn reciprocal_attempt(v: Ball, q: u64, p: Precision) -> Attempt {
    let scaled = v.scale_by_int(q as i64, p);
    let tight = v.radius().mul_u64(4 * q * q).lt_pow2(0);
    let verdict = match scaled.round_to_integer() {
        Some(z) if z == BigInt::from(1) && tight => Verdict::Certified {
            value: format!("1/{q}"),
        },
        Some(z) if z != BigInt::from(1) => Verdict::Mismatch {
            value: format!("{z}/{q}"),
        },
        _ => Verdict::Uncertain,
    };
    Attempt {
        lhs: Some(v),
        verdict,
    }
}

/// `Π_{k⊥n} 2 sin(πk/n)`: `p` for `n = p^α`, else 1 (empty for `n <= 1`).
pub fn product_sine_coprime(n: u64, plan: &PrecisionPlan) -> IdentityReport {
    let expected = BigInt::from(if n <= 1 { 1 } else { phi_at_1(n).expect("n >= 2") });
    drive(EquationId::E4, n, plan, expected.to_string(), |p| {
        let ks = if n <= 1 { Vec::new() } else { coprime(n) };
        integer_attempt(sine_product(n, &ks, p), &expected)
    })
}

/// `Π_{k⊥̸n} 2 sin(πk/n)`: `n/p` for `n = p^α`, else `n`.
pub fn product_sine_noncoprime(n: u64, plan: &PrecisionPlan) -> IdentityReport {
    let expected = BigInt::from(if n <= 1 { 1 } else { n / prime_or_one(n) });
    drive(EquationId::E9, n, plan, expected.to_string(), |p| {
        integer_attempt(sine_product(n, &noncoprime(n), p), &expected)
    })
}

/// The non-coprime sine product against the lcm of the proper divisors.
pub fn lcm_bar_via_sine(n: u64, plan: &PrecisionPlan) -> IdentityReport {
    let expected = if n >= 1 { lcm_bar(n) } else { BigInt::from(1) };
    drive(EquationId::E10, n, plan, expected.to_string(), |p| {
        integer_attempt(sine_product(n, &noncoprime(n), p), &expected)
    })
}

/// `Π_{k⊥̸n} 2π / Γ²(k/n)` against the lcm of the proper divisors.
pub fn lcm_bar_via_gamma(n: u64, plan: &PrecisionPlan) -> IdentityReport {
    let expected = if n >= 1 { lcm_bar(n) } else { BigInt::from(1) };
    drive(EquationId::E11, n, plan, expected.to_string(), |p| {
        let ks = noncoprime(n);
        if ks.is_empty() {
            return integer_attempt(Ball::one(), &expected);
        }
        let wp = p.guarded(LOG_GUARD);
        let lg = LnGamma::new(wp);
        let log = sum_of(&ks, wp, |&k| log_factor(&lg, frac(k, n), wp));
        exp_attempt(&log, p, &expected)
    })
}

/// `2^(n-1) Π_{0<k<n} sin(πk/n) = n`.
pub fn product_sin_all_check(n: u64, plan: &PrecisionPlan) -> IdentityReport {
    let expected = BigInt::from(n);
    drive(EquationId::E7, n, plan, expected.to_string(), |p| {
        let t = TrigTable::new(n, p);
        let ks: Vec<u64> = (1..n).collect();
        let prod = product_of(&ks, p, |&k| t.sin(k));
        integer_attempt(prod.mul_2exp(n as i64 - 1), &expected)
    })
}

/// Coprime times non-coprime sine products equal `n`.
pub fn partition_identity_check(n: u64, plan: &PrecisionPlan) -> IdentityReport {
    let expected = BigInt::from(n);
    drive(EquationId::E8, n, plan, expected.to_string(), |p| {
        let t = TrigTable::new(n, p);
        let a = product_of(&coprime(n), p, |&k| two_sin(&t, k));
        let b = product_of(&noncoprime(n), p, |&k| two_sin(&t, k));
        integer_attempt(a.mul(&b, p), &expected)
    })
}

fn coprime_cos_product(n: u64, p: Precision) -> Ball {
    let t = TrigTable::new(n, p);
    product_of(&coprime(n), p, |&k| two_abs_cos(&t, k))
}

/// `Π_{k⊥n} 2|cos(πk/n)|`: `p` for `n = 2p^α`, else 1.
pub fn product_cos_coprime(n: u64, plan: &PrecisionPlan) -> IdentityReport {
    let expected = match classify_twice_prime_power(n) {
        Ok(Some(pp)) => BigInt::from(pp.prime),
        _ => BigInt::from(1),
    };
    drive(EquationId::E12, n, plan, expected.to_string(), |p| {
        integer_attempt(coprime_cos_product(n, p), &expected)
    })
}

/// The same cosine product against `|Φ_n(-1)|` from the polynomial itself.
pub fn phi_minus1_product_check(n: u64, plan: &PrecisionPlan) -> IdentityReport {
    let expected = if n >= 3 {
        let phi = cyclotomic_poly(n).expect("n >= 1");
        let v = eval_int(&phi, -1);
        if v < BigInt::from(0) {
            -v
        } else {
            v
        }
    } else {
        BigInt::from(0)
    };
    drive(EquationId::PhiM1, n, plan, expected.to_string(), |p| {
        integer_attempt(coprime_cos_product(n, p), &expected)
    })
}

/// `(Π_{r∈F(n), 0<r<1/2} 2 cos(πr))² = LCM(⌊n/2⌋)`.
pub fn lcm_half_via_farey_cos(n: u64, plan: &PrecisionPlan) -> IdentityReport {
    let expected = lcm_upto(n / 2);
    drive(EquationId::E12F, n, plan, expected.to_string(), |p| {
        let open = farey_half(n, false).expect("order >= 2");
        let prod = streamed_product(open, p, |r| cos_pi_frac(*r, p).mul_2exp(1));
        integer_attempt(prod.sqr(p), &expected)
    })
}

/// `Π_{1<=k<=⌊n/2⌋} 2 cos(πk/n)`: 1 for odd `n`; 0 for even `n`.
///
/// For even `n` the factor at `k = n/2` is `cos(π/2)`, zero by
/// construction. The remaining factors over `0 < k < n`, in absolute value,
/// must multiply to `n/2`; by symmetry that is the square of the product
/// over `0 < k < n/2`.
pub fn cos_half_product(n: u64, plan: &PrecisionPlan) -> IdentityReport {
    let even = n % 2 == 0;
    let expected = if even {
        format!("0 (other factors {})", n / 2)
    } else {
        "1".to_string()
    };
    let mut report = drive(EquationId::E13, n, plan, expected, |p| {
        let t = TrigTable::new(n, p);
        if even {
            let ks: Vec<u64> = (1..n / 2).collect();
            let rest = product_of(&ks, p, |&k| two_abs_cos(&t, k)).sqr(p);
            let mut a = integer_attempt(rest, &BigInt::from(n / 2));
            if let Verdict::Certified { value } | Verdict::Mismatch { value } = &mut a.verdict {
                *value = format!("0 (other factors {value})");
            }
            a
        } else {
            let ks: Vec<u64> = (1..=n / 2).collect();
            integer_attempt(product_of(&ks, p, |&k| two_abs_cos(&t, k)), &BigInt::from(1))
        }
    });
    if even && report.status == Status::Verified {
        report.detail = format!("structural zero factor at k = {}; certified", n / 2);
    }
    report
}

/// The multiplication theorem at `N = φ(n) + 1`, as a log-space difference
/// `½ ln N + Σ_{0<k<=N} ln Γ(k/N) - (φ(n)/2) ln 2π`.
pub fn multiplication_theorem_check(n: u64, plan: &PrecisionPlan) -> IdentityReport {
    drive(EquationId::E14, n, plan, "0".into(), |p| {
        let phi = totient(n).expect("n >= 2");
        let big_n = phi + 1;
        let lg = LnGamma::new(p);
        let ks: Vec<u64> = (1..=big_n).collect();
        let s = sum_of(&ks, p, |&k| lg.ln_gamma_frac(frac(k, big_n)).expect("k > 0"));
        let half_ln_n = Ball::from_int(big_n).ln(p).expect("N >= 2").mul_2exp(-1);
        let rhs = lg.ln_2pi().scale_by_int(phi as i64, p).mul_2exp(-1);
        zero_attempt(half_ln_n.add(&s, p).sub(&rhs, p), p.bits())
    })
}

/// `Σ_{k⊥n} ln Γ(k/n) - ½ ln N - Σ_{0<k<N} ln Γ(k/N)`, `N = φ(n) + 1`, for
/// `n` not a prime power.
pub fn gamma_coprime_identity_check(n: u64, plan: &PrecisionPlan) -> IdentityReport {
    drive(EquationId::Gci, n, plan, "0".into(), |p| {
        let phi = totient(n).expect("n >= 2");
        let big_n = phi + 1;
        let lg = LnGamma::new(p);
        let lhs = sum_of(&coprime(n), p, |&k| lg.ln_gamma_frac(frac(k, n)).expect("k > 0"));
        let ks: Vec<u64> = (1..big_n).collect();
        let rhs = sum_of(&ks, p, |&k| lg.ln_gamma_frac(frac(k, big_n)).expect("k > 0"));
        let half_ln_n = Ball::from_int(big_n).ln(p).expect("N >= 2").mul_2exp(-1);
        zero_attempt(lhs.sub(&half_ln_n, p).sub(&rhs, p), p.bits())
    })
}

/// `LCM(n) / LCM(n-1)` against the prime-power classification, exactly.
pub fn gut_ratio_check(n: u64) -> IdentityReport {
    let expected = BigInt::from(if n >= 3 { prime_or_one(n) } else { 1 });
    let mut report = drive(EquationId::Gut, n, &PrecisionPlan::default(), expected.to_string(), |_| {
        let (a, b) = (lcm_upto(n), lcm_upto(n - 1));
        let value = if &a % &b == BigInt::from(0) {
            (&a / &b).to_string()
        } else {
            format!("{a}/{b}")
        };
        let verdict = if value == expected.to_string() {
            Verdict::Certified { value }
        } else {
            Verdict::Mismatch { value }
        };
        Attempt { lhs: None, verdict }
    });
    // exact integer arithmetic; no precision involved
    report.bits_used = 0;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::verify_range;

    fn plan() -> PrecisionPlan {
        PrecisionPlan::default()
    }

    #[track_caller]
    fn verified(r: IdentityReport, value: &str) {
        assert_eq!(r.status, Status::Verified, "{} n={}: {}", r.equation, r.n, r.detail);
        assert_eq!(r.value.as_deref(), Some(value), "{} n={}", r.equation, r.n);
    }

    #[test]
    fn sine_farey_route() {
        verified(lcm_via_farey_sine(2, &plan()), "2");
        verified(lcm_via_farey_sine(3, &plan()), "6");
        verified(lcm_via_farey_sine(10, &plan()), "2520");
        assert_eq!(lcm_via_farey_sine(1, &plan()).status, Status::Skipped);
    }

    #[test]
    fn gamma_farey_route() {
        verified(lcm_via_farey_gamma(2, &plan()), "2");
        verified(lcm_via_farey_gamma(4, &plan()), "12");
        verified(lcm_via_farey_gamma(6, &plan()), "60");
    }

    #[test]
    fn gamma_ratio() {
        verified(martin_gamma_ratio(12, &plan()), "1");
        verified(martin_gamma_ratio(9, &plan()), "1/3");
        verified(martin_gamma_ratio(2, &plan()), "1/2");
    }

    #[test]
    fn coprime_and_noncoprime_sines() {
        verified(product_sine_coprime(2, &plan()), "2");
        verified(product_sine_coprime(12, &plan()), "1");
        verified(product_sine_coprime(0, &plan()), "1");
        verified(product_sine_noncoprime(1, &plan()), "1");
        verified(product_sine_noncoprime(8, &plan()), "4");
        verified(product_sine_noncoprime(12, &plan()), "12");
        verified(lcm_bar_via_sine(1, &plan()), "1");
        verified(lcm_bar_via_sine(12, &plan()), "12");
        verified(lcm_bar_via_sine(9, &plan()), "3");
        verified(lcm_bar_via_gamma(1, &plan()), "1");
        verified(lcm_bar_via_gamma(4, &plan()), "2");
        verified(lcm_bar_via_gamma(12, &plan()), "12");
    }

    #[test]
    fn full_and_partitioned_sines() {
        for (n, v) in [(2, "2"), (4, "4"), (12, "12")] {
            verified(product_sin_all_check(n, &plan()), v);
        }
        for (n, v) in [(6, "6"), (8, "8"), (2, "2")] {
            verified(partition_identity_check(n, &plan()), v);
        }
    }

    #[test]
    fn cosine_products() {
        verified(product_cos_coprime(10, &plan()), "5");
        verified(product_cos_coprime(4, &plan()), "2");
        verified(product_cos_coprime(15, &plan()), "1");
        verified(phi_minus1_product_check(6, &plan()), "3");
        verified(phi_minus1_product_check(12, &plan()), "1");
        verified(phi_minus1_product_check(4, &plan()), "2");
        verified(lcm_half_via_farey_cos(5, &plan()), "2");
        verified(lcm_half_via_farey_cos(4, &plan()), "2");
        verified(lcm_half_via_farey_cos(2, &plan()), "1");
    }

    #[test]
    fn half_cosine_parity() {
        verified(cos_half_product(3, &plan()), "1");
        verified(cos_half_product(5, &plan()), "1");
        let r = cos_half_product(4, &plan());
        verified(r.clone(), "0 (other factors 2)");
        assert!(r.detail.contains("k = 2"));
        verified(cos_half_product(2, &plan()), "0 (other factors 1)");
    }

    #[test]
    fn gamma_multiplication_and_coprime_identity() {
        let p = PrecisionPlan::fixed(256).unwrap();
        for n in [2, 3, 7] {
            let r = multiplication_theorem_check(n, &p);
            verified(r.clone(), "0");
            assert!(r.lhs.unwrap().radius_log2.unwrap() < -128);
        }
        for n in [6, 10] {
            verified(gamma_coprime_identity_check(n, &p), "0");
        }
        assert_eq!(gamma_coprime_identity_check(8, &p).status, Status::Skipped);
    }

    #[test]
    fn gut_ratio() {
        verified(gut_ratio_check(6), "1");
        verified(gut_ratio_check(9), "3");
        verified(gut_ratio_check(7), "7");
        assert_eq!(gut_ratio_check(2).status, Status::Skipped);
    }

    #[test]
    fn range_examples() {
        let e4 = verify_range(EquationId::E4, 0, 30, &plan(), 2);
        assert_eq!(e4.len(), 31);
        assert!(e4.iter().all(|r| r.status == Status::Verified));
        let e12 = verify_range(EquationId::E12, 0, 30, &plan(), 2);
        for r in &e12 {
            let want = if r.n <= 2 { Status::Skipped } else { Status::Verified };
            assert_eq!(r.status, want, "n = {}", r.n);
        }
        let gci = verify_range(EquationId::Gci, 2, 20, &plan(), 2);
        let skipped: Vec<u64> = gci.iter().filter(|r| r.status == Status::Skipped).map(|r| r.n).collect();
        assert_eq!(skipped, vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19]);
        assert!(gci.iter().all(|r| r.status != Status::Failed));
    }

    #[test]
    fn exhausted_precision_is_a_failure_not_a_mismatch() {
        // 64 bits cannot separate LCM(200), which has ~280 bits
        let r = lcm_via_farey_sine(200, &PrecisionPlan::fixed(64).unwrap());
        assert_eq!(r.status, Status::Failed);
        assert!(r.detail.starts_with("precision exhausted"), "{}", r.detail);
        assert_eq!(r.value, None);
    }

    #[test]
    fn retry_doubles_from_a_low_start() {
        let p = PrecisionPlan::new(Some(64), None).unwrap();
        let r = lcm_via_farey_sine(120, &p);
        verified(r.clone(), &lcm_upto(120).to_string());
        assert!(r.retries >= 1);
        assert_eq!(r.bits_used, 64 << r.retries);
    }
}
