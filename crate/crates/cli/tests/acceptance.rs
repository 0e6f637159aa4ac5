//! Acceptance suite: twelve criteria, one PASS/FAIL line each.
//!
//! Expected values come from oracles written here from scratch (gcd folds,
//! trial division), not from the library's own number theory, except
//! where a criterion is about the library's exact routines themselves.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use sinelcm::cyclotomic::{cyclotomic_poly, eval_int, phi_at_1, phi_at_minus1, IntPoly};
use sinelcm::identities::{verify_range, EquationId, IdentityReport, PrecisionPlan, Status};

/// Largest radius accepted on a rounding certificate.
const CERTIFICATE_RADIUS_LOG2: i64 = -2;
/// Working precision and radius bound for the log-space Gamma identities.
const GAMMA_BITS: u32 = 256;
const GAMMA_RADIUS_LOG2: i64 = -128;
const E3_BUDGET: Duration = Duration::from_secs(300);
const E2_BUDGET: Duration = Duration::from_secs(120);

fn lcm_fold(n: u64) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc.lcm(&BigInt::from(k)))
}

fn proper_divisor_lcm(n: u64) -> BigInt {
    (1..n).filter(|d| n % d == 0).fold(BigInt::from(1), |acc, d| acc.lcm(&BigInt::from(d)))
}

/// `Some(p)` when `n = p^a`, `a >= 1`.
fn prime_power_base(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n % d == 0).unwrap();
    let mut m = n;
    while m % p == 0 {
        m /= p;
    }
    (m == 1).then_some(p)
}

fn say(line: String) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

struct Suite {
    failures: Vec<u32>,
}

impl Suite {
    fn criterion(&mut self, id: u32, title: &str, f: impl FnOnce() -> Result<String, String>) {
        let t = Instant::now();
        let r = f();
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(summary) => say(format!("criterion {id:>2} PASS  {title}: {summary} [{secs:.1}s]")),
            Err(reason) => {
                say(format!("criterion {id:>2} FAIL  {title}: {reason} [{secs:.1}s]"));
                self.failures.push(id);
            }
        }
    }
}

fn plan() -> PrecisionPlan {
    PrecisionPlan::default()
}

/// Every report Verified with the expected value, certificates tight.
fn expect_values(
    reports: &[IdentityReport],
    want: impl Fn(u64) -> String,
) -> Result<usize, String> {
    for r in reports {
        if r.status != Status::Verified {
            return Err(format!("{} n={} {:?}: {}", r.equation, r.n, r.status, r.detail));
        }
        let got = r.value.as_deref().unwrap_or("");
        if got != want(r.n) {
            return Err(format!("{} n={}: certified {got}, oracle {}", r.equation, r.n, want(r.n)));
        }
        if let Some(lhs) = &r.lhs {
            if lhs.radius_log2.is_some_and(|e| e > CERTIFICATE_RADIUS_LOG2) {
                return Err(format!("{} n={}: radius 2^{:?}", r.equation, r.n, lhs.radius_log2));
            }
        }
    }
    Ok(reports.len())
}

fn verified_integers(reports: &[IdentityReport]) -> String {
    reports
        .iter()
        .map(|r| format!("{} {:?} {}\n", r.n, r.status, r.value.as_deref().unwrap_or("-")))
        .collect()
}

#[test]
fn acceptance() {
    let mut s = Suite { failures: Vec::new() };
    let mut e3_single = Vec::new();

    s.criterion(1, "sine Farey product equals lcm(1..n), 2 <= n <= 300", || {
        let t = Instant::now();
        e3_single = verify_range(EquationId::E3, 2, 300, &plan(), 1);
        let elapsed = t.elapsed();
        let k = expect_values(&e3_single, |n| lcm_fold(n).to_string())?;
        if elapsed > E3_BUDGET {
            return Err(format!("took {elapsed:?}, budget {E3_BUDGET:?}"));
        }
        let bits = e3_single.last().unwrap().bits_used;
        Ok(format!("{k} exact, {bits} bits at n = 300, {:.1}s single-threaded", elapsed.as_secs_f64()))
    });

    s.criterion(2, "Gamma Farey product equals lcm(1..n), 2 <= n <= 100", || {
        let t = Instant::now();
        let rs = verify_range(EquationId::E2, 2, 100, &plan(), 1);
        let elapsed = t.elapsed();
        let k = expect_values(&rs, |n| lcm_fold(n).to_string())?;
        if elapsed > E2_BUDGET {
            return Err(format!("took {elapsed:?}, budget {E2_BUDGET:?}"));
        }
        Ok(format!("{k} exact, {:.1}s", elapsed.as_secs_f64()))
    });

    s.criterion(3, "coprime sine product is p at prime powers else 1, 0 <= n <= 1000", || {
        let rs = verify_range(EquationId::E4, 0, 1000, &plan(), 0);
        let k = expect_values(&rs, |n| prime_power_base(n).unwrap_or(1).to_string())?;
        Ok(format!("{k} certified"))
    });

    s.criterion(4, "non-coprime sine product is n/p or n and lcm of proper divisors, 1 <= n <= 1000", || {
        let e9 = verify_range(EquationId::E9, 1, 1000, &plan(), 0);
        let k9 = expect_values(&e9, |n| match prime_power_base(n) {
            Some(p) => (n / p).to_string(),
            None if n == 1 => "1".into(),
            None => n.to_string(),
        })?;
        let e10 = verify_range(EquationId::E10, 1, 1000, &plan(), 0);
        let k10 = expect_values(&e10, |n| proper_divisor_lcm(n).to_string())?;
        Ok(format!("{k9} + {k10} certified"))
    });

    s.criterion(5, "coprime cosine product is p iff n = 2p^a else 1, 3 <= n <= 1000", || {
        let rs = verify_range(EquationId::E12, 3, 1000, &plan(), 0);
        let k = expect_values(&rs, |n| {
            let p = if n % 2 == 0 { prime_power_base(n / 2) } else { None };
            // n = 2^e with e >= 2 is 2 * 2^(e-1)
            let p = p.or((n.is_power_of_two() && n >= 4).then_some(2));
            p.unwrap_or(1).to_string()
        })?;
        Ok(format!("{k} certified"))
    });

    s.criterion(6, "squared Farey cosine product equals lcm(1..floor(n/2)), 2 <= n <= 200", || {
        let rs = verify_range(EquationId::E12F, 2, 200, &plan(), 0);
        let k = expect_values(&rs, |n| lcm_fold(n / 2).to_string())?;
        Ok(format!("{k} exact"))
    });

    s.criterion(7, "half cosine product: 1 for odd n, structural 0 with rest n/2 for even, n <= 1000", || {
        let rs = verify_range(EquationId::E13, 2, 1000, &plan(), 0);
        let k = expect_values(&rs, |n| {
            if n % 2 == 1 {
                "1".into()
            } else {
                format!("0 (other factors {})", n / 2)
            }
        })?;
        for r in rs.iter().filter(|r| r.n % 2 == 0) {
            if !r.detail.contains(&format!("zero factor at k = {}", r.n / 2)) {
                return Err(format!("n={}: zero not structural: {}", r.n, r.detail));
            }
        }
        Ok(format!("{k} certified"))
    });

    s.criterion(8, "2^(n-1) times the sine product is n, 2 <= n <= 500", || {
        let rs = verify_range(EquationId::E7, 2, 500, &plan(), 0);
        Ok(format!("{} certified", expect_values(&rs, |n| n.to_string())?))
    });

    s.criterion(9, "cyclotomic closed forms, prime-step recursions and the -2 coefficient", || {
        let mut polys = vec![IntPoly::zero()];
        for n in 1..=200u64 {
            let phi = cyclotomic_poly(n).map_err(|e| e.to_string())?;
            let at1 = eval_int(&phi, 1);
            let atm1 = eval_int(&phi, -1);
            if at1 != BigInt::from(phi_at_1(n).unwrap()) || atm1 != BigInt::from(phi_at_minus1(n).unwrap()) {
                return Err(format!("closed form at n = {n}: {at1}, {atm1}"));
            }
            polys.push(phi);
        }
        let mut steps = 0;
        for n in 1..=200u64 {
            for p in (2..=200 / n).filter(|&p| prime_power_base(p) == Some(p)) {
                let np = (n * p) as usize;
                let lifted = polys[n as usize].compose_power(p as usize);
                let ok = if n % p == 0 {
                    polys[np] == lifted
                } else {
                    &polys[np] * &polys[n as usize] == lifted
                };
                if !ok {
                    return Err(format!("recursion fails at n = {n}, p = {p}"));
                }
                steps += 1;
            }
        }
        let c = cyclotomic_poly(105).unwrap().coefficient(7);
        if c != BigInt::from(-2) {
            return Err(format!("coefficient of X^7 in Phi_105 is {c}"));
        }
        Ok(format!("200 closed-form pairs, {steps} recursion identities, Phi_105[7] = -2"))
    });

    s.criterion(10, "multiplication theorem and coprime Gamma identity at 256 bits, n <= 50", || {
        let fixed = PrecisionPlan::fixed(GAMMA_BITS).unwrap();
        let e14 = verify_range(EquationId::E14, 2, 50, &fixed, 0);
        let gci = verify_range(EquationId::Gci, 2, 50, &fixed, 0);
        let mut checked = 0;
        for r in e14.iter().chain(&gci) {
            let skip_ok = r.equation == EquationId::Gci && prime_power_base(r.n).is_some();
            if skip_ok {
                if r.status != Status::Skipped {
                    return Err(format!("GCI n={} should be skipped", r.n));
                }
                continue;
            }
            if r.status != Status::Verified || r.bits_used != GAMMA_BITS {
                return Err(format!("{} n={} {:?}: {}", r.equation, r.n, r.status, r.detail));
            }
            let e = r.lhs.as_ref().and_then(|l| l.radius_log2).unwrap_or(i64::MIN);
            if e >= GAMMA_RADIUS_LOG2 {
                return Err(format!("{} n={}: radius 2^{e}", r.equation, r.n));
            }
            checked += 1;
        }
        let gci_count = (2..=50).filter(|&n| prime_power_base(n).is_none()).count();
        if checked != 49 + gci_count {
            return Err(format!("checked {checked} identities"));
        }
        Ok(format!("49 E14 + {gci_count} GCI differences enclose 0 with radius < 2^{GAMMA_RADIUS_LOG2}"))
    });

    s.criterion(11, "offline OEIS regression against bundled fixtures, 200 terms", || {
        let mut lines = Vec::new();
        for id in ["A003418", "A048671"] {
            let o = Command::new(env!("CARGO_BIN_EXE_sinelcm"))
                .args(["oeis-check", id, "--upto", "200", "--offline", "--format", "json"])
                .env_remove(sinelcm_cli::oeis::BASE_ENV)
                .output()
                .map_err(|e| e.to_string())?;
            let v: serde_json::Value = serde_json::from_slice(&o.stdout).map_err(|e| e.to_string())?;
            let mismatches = v["mismatches"].as_array().map_or(usize::MAX, Vec::len);
            let checked = v["checked"].as_u64().unwrap_or(0);
            if o.status.code() != Some(0) || mismatches != 0 || checked < 200 {
                return Err(format!("{id}: exit {:?}, {checked} checked, {mismatches} mismatches", o.status.code()));
            }
            lines.push(format!("{id} {checked} terms"));
        }
        Ok(format!("{}, 0 mismatches", lines.join(", ")))
    });

    s.criterion(12, "criterion-1 run with 1 and 8 workers is byte-identical", || {
        if e3_single.is_empty() {
            return Err("criterion 1 produced no reports".into());
        }
        let eight = verify_range(EquationId::E3, 2, 300, &plan(), 8);
        let (a, b) = (verified_integers(&e3_single), verified_integers(&eight));
        if a != b {
            let n = a.lines().zip(b.lines()).position(|(x, y)| x != y);
            return Err(format!("outputs differ at line {n:?}"));
        }
        // stronger than required: the balls themselves agree
        let same_bits = e3_single.iter().zip(&eight).all(|(x, y)| x.bits_used == y.bits_used && x.lhs == y.lhs);
        if !same_bits {
            return Err("balls differ between worker counts".into());
        }
        Ok(format!("{} lines identical", a.lines().count()))
    });

    assert!(s.failures.is_empty(), "failed criteria: {:?}", s.failures);
}
