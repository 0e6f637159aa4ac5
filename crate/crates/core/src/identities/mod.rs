//! Certified verification of the sine, cosine and Gamma product identities.
//!
//! Every check evaluates its product as a [`Ball`] at a planned precision,
//! then asks for a certificate against an exact right-hand side computed by
//! the integer oracles (`lcm_upto`, `lcm_bar`, the prime-power classifiers,
//! cyclotomic evaluation). An uncertain outcome doubles the precision up to
//! the plan's ceiling; a certified wrong value fails at once.

mod products;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::farey::{farey_count, farey_interior_count};
use crate::hpreal::{Ball, Precision};
use crate::numtheory::{classify_prime_power, totient};

pub use products::{
    cos_half_product, gamma_coprime_identity_check, gut_ratio_check, lcm_bar_via_gamma,
    lcm_bar_via_sine, lcm_half_via_farey_cos, lcm_via_farey_gamma, lcm_via_farey_sine,
    martin_gamma_ratio, multiplication_theorem_check, partition_identity_check,
    phi_minus1_product_check, product_cos_coprime, product_sin_all_check, product_sine_coprime,
    product_sine_noncoprime,
};

/// The identities this module can check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EquationId {
    E1,
    E2,
    E3,
    E4,
    E7,
    E8,
    E9,
    E10,
    E11,
    E12,
    E12F,
    E13,
    #[serde(rename = "PHI_M1")]
    PhiM1,
    E14,
    #[serde(rename = "GCI")]
    Gci,
    #[serde(rename = "GUT")]
    Gut,
}

impl EquationId {
    pub const ALL: [EquationId; 16] = [
        EquationId::E1,
        EquationId::E2,
        EquationId::E3,
        EquationId::E4,
        EquationId::E7,
        EquationId::E8,
        EquationId::E9,
        EquationId::E10,
        EquationId::E11,
        EquationId::E12,
        EquationId::E12F,
        EquationId::E13,
        EquationId::PhiM1,
        EquationId::E14,
        EquationId::Gci,
        EquationId::Gut,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EquationId::E1 => "E1",
            EquationId::E2 => "E2",
            EquationId::E3 => "E3",
            EquationId::E4 => "E4",
            EquationId::E7 => "E7",
            EquationId::E8 => "E8",
            EquationId::E9 => "E9",
            EquationId::E10 => "E10",
            EquationId::E11 => "E11",
            EquationId::E12 => "E12",
            EquationId::E12F => "E12F",
            EquationId::E13 => "E13",
            EquationId::PhiM1 => "PHI_M1",
            EquationId::E14 => "E14",
            EquationId::Gci => "GCI",
            EquationId::Gut => "GUT",
        }
    }

    /// One-line statement of the identity.
    pub fn statement(self) -> &'static str {
        match self {
            EquationId::E1 => "prod_{k coprime n} Gamma(k/n)^2 / 2pi = 1/p (n = p^a) or 1",
            EquationId::E2 => "prod_{r in F(n), 0<r<1} 2pi / Gamma(r)^2 = LCM(n)",
            EquationId::E3 => "(1/2) (prod_{r in F(n), 0<r<=1/2} 2 sin(pi r))^2 = LCM(n)",
            EquationId::E4 => "prod_{k coprime n} 2 sin(pi k/n) = p (n = p^a) or 1",
            EquationId::E7 => "2^(n-1) prod_{0<k<n} sin(pi k/n) = n",
            EquationId::E8 => "coprime sine product * non-coprime sine product = n",
            EquationId::E9 => "prod_{k not coprime n} 2 sin(pi k/n) = n/p (n = p^a) or n",
            EquationId::E10 => "prod_{k not coprime n} 2 sin(pi k/n) = lcm of proper divisors",
            EquationId::E11 => "prod_{k not coprime n} 2pi / Gamma(k/n)^2 = lcm of proper divisors",
            EquationId::E12 => "prod_{k coprime n} 2 |cos(pi k/n)| = p (n = 2 p^a) or 1",
            EquationId::E12F => "(prod_{r in F(n), 0<r<1/2} 2 cos(pi r))^2 = LCM(floor(n/2))",
            EquationId::E13 => "prod_{1<=k<=n/2} 2 cos(pi k/n) = 1 (n odd) or 0 (n even)",
            EquationId::PhiM1 => "prod_{k coprime n} 2 |cos(pi k/n)| = |Phi_n(-1)|",
            EquationId::E14 => "sqrt(N) prod_{0<k<=N} Gamma(k/N) = (2pi)^((N-1)/2), N = phi(n)+1",
            EquationId::Gci => "prod_{k coprime n} Gamma(k/n) = sqrt(N) prod_{0<k<N} Gamma(k/N)",
            EquationId::Gut => "LCM(n) / LCM(n-1) = p (n = p^a) or 1",
        }
    }

    /// Range of `n` over which the identity is claimed.
    pub fn window(self) -> Window {
        let (min_n, excludes_prime_powers) = match self {
            EquationId::E4 => (0, false),
            EquationId::E9 | EquationId::E10 | EquationId::E11 => (1, false),
            EquationId::E1
            | EquationId::E2
            | EquationId::E3
            | EquationId::E7
            | EquationId::E8
            | EquationId::E12F
            | EquationId::E13
            | EquationId::E14 => (2, false),
            EquationId::Gci => (2, true),
            EquationId::E12 | EquationId::PhiM1 | EquationId::Gut => (3, false),
        };
        Window {
            min_n,
            excludes_prime_powers,
        }
    }

    /// Number of factors (or summands) the left-hand side has at `n`.
    pub fn factor_count(self, n: u64) -> u64 {
        if !self.window().contains(n) {
            return 0;
        }
        let phi = if n == 0 { 0 } else { totient(n).expect("n >= 1") };
        let coprime = if n <= 1 { 0 } else { phi };
        let noncoprime = n.saturating_sub(1) - coprime;
        match self {
            EquationId::E1 | EquationId::E4 | EquationId::E12 | EquationId::PhiM1 => coprime,
            EquationId::E2 => farey_interior_count(n).expect("n >= 2"),
            EquationId::E3 => (farey_count(n).expect("n >= 2") - 1) / 2,
            EquationId::E12F => (farey_count(n).expect("n >= 2") - 3) / 2,
            EquationId::E7 | EquationId::E8 => n - 1,
            EquationId::E9 | EquationId::E10 | EquationId::E11 => noncoprime,
            EquationId::E13 => n / 2,
            EquationId::E14 => phi + 1,
            EquationId::Gci => 2 * phi,
            EquationId::Gut => 0,
        }
    }
}

impl fmt::Display for EquationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EquationId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.trim().to_ascii_uppercase();
        EquationId::ALL
            .into_iter()
            .find(|e| e.as_str() == upper)
            .ok_or_else(|| Error::UnknownEquation(s.to_string()))
    }
}

/// `n >= min_n`, optionally excluding prime powers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub min_n: u64,
    pub excludes_prime_powers: bool,
}

impl Window {
    pub fn contains(&self, n: u64) -> bool {
        n >= self.min_n && !(self.excludes_prime_powers && classify_prime_power(n).is_prime_power())
    }

    fn describe(&self) -> String {
        if self.excludes_prime_powers {
            format!("n >= {} and n not a prime power", self.min_n)
        } else {
            format!("n >= {}", self.min_n)
        }
    }
}

/// `64 + ceil(1.5 n) + ceil(log2(factor_count + 1))` bits.
///
/// The largest product value is `LCM(n) = e^{psi(n)}`, about `1.44 n` bits;
/// the last term covers rounding errors accumulated over the factors.
pub fn plan_precision(n: u64, factor_count: u64) -> Precision {
    let three_halves = (3 * n).div_ceil(2);
    let x = factor_count + 1;
    let log = if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros() as u64
    };
    let bits = 64 + three_halves + log;
    Precision::new(u32::try_from(bits).expect("precision beyond u32")).expect("bits >= 64")
}

/// Starting precision and ceiling for the doubling retry loop.
///
/// Unset fields are derived per `n`: the start from [`plan_precision`] and
/// the ceiling as 16 times the start.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PrecisionPlan {
    initial_bits: Option<u32>,
    max_bits: Option<u32>,
}

pub const MIN_PLAN_BITS: u32 = 64;
pub const CEILING_FACTOR: u32 = 16;

impl PrecisionPlan {
    pub fn adaptive() -> Self {
        PrecisionPlan::default()
    }

    /// Exactly `bits`, no retries.
    pub fn fixed(bits: u32) -> Result<Self> {
        PrecisionPlan::new(Some(bits), Some(bits))
    }

    pub fn new(initial_bits: Option<u32>, max_bits: Option<u32>) -> Result<Self> {
        for b in initial_bits.iter().chain(max_bits.iter()) {
            if *b < MIN_PLAN_BITS {
                return crate::error::domain("PrecisionPlan", *b, "bits >= 64");
            }
        }
        if let (Some(i), Some(m)) = (initial_bits, max_bits) {
            if m < i {
                return crate::error::domain("PrecisionPlan", m, "max_bits >= initial_bits");
            }
        }
        Ok(PrecisionPlan {
            initial_bits,
            max_bits,
        })
    }

    /// Keeps the start, caps retries at `max_bits`.
    pub fn with_max_bits(self, max_bits: u32) -> Result<Self> {
        PrecisionPlan::new(self.initial_bits, Some(max_bits))
    }

    /// `(initial, max)` for one evaluation.
    pub fn resolve(&self, n: u64, factor_count: u64) -> (u32, u32) {
        let initial = self
            .initial_bits
            .unwrap_or_else(|| plan_precision(n, factor_count).bits());
        let initial = match self.max_bits {
            Some(m) => initial.min(m),
            None => initial,
        };
        let max = self
            .max_bits
            .unwrap_or(initial.saturating_mul(CEILING_FACTOR));
        (initial, max.max(initial))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Verified,
    Failed,
    Skipped,
}

/// Midpoint and radius exponent of the left-hand side ball.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallSummary {
    /// Midpoint in decimal, 20 digits after the point.
    pub midpoint: String,
    /// Smallest `e` with `radius <= 2^e`; absent for exact balls.
    pub radius_log2: Option<i64>,
}

impl BallSummary {
    pub const DIGITS: usize = 20;

    pub fn of(b: &Ball) -> Self {
        BallSummary {
            midpoint: b.mid_decimal(Self::DIGITS),
            radius_log2: b.radius_log2(),
        }
    }
}

/// Outcome of one identity at one `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub equation: EquationId,
    pub n: u64,
    pub status: Status,
    pub detail: String,
    /// The certified value, in full decimal (or `1/p` for reciprocal values).
    pub value: Option<String>,
    /// The exact right-hand side.
    pub expected: String,
    pub lhs: Option<BallSummary>,
    pub bits_used: u32,
    pub retries: u32,
    pub factor_count: u64,
    pub elapsed_us: u64,
}

impl IdentityReport {
    pub fn is_failed(&self) -> bool {
        self.status == Status::Failed
    }

    fn skipped(eq: EquationId, n: u64) -> Self {
        IdentityReport {
            equation: eq,
            n,
            status: Status::Skipped,
            detail: format!("outside validity window: {}", eq.window().describe()),
            value: None,
            expected: String::new(),
            lhs: None,
            bits_used: 0,
            retries: 0,
            factor_count: 0,
            elapsed_us: 0,
        }
    }
}

/// What one evaluation at a fixed precision established.
pub(crate) enum Verdict {
    /// Certificate obtained and it matches.
    Certified { value: String },
    /// Certificate obtained for a different value.
    Mismatch { value: String },
    /// The ball is too wide to decide.
    Uncertain,
}

pub(crate) struct Attempt {
    pub lhs: Option<Ball>,
    pub verdict: Verdict,
}

/// Rounding certificate for an integer right-hand side.
pub(crate) fn integer_attempt(lhs: Ball, expected: &BigInt) -> Attempt {
    let verdict = match lhs.round_to_integer() {
        Some(z) if &z == expected => Verdict::Certified {
            value: z.to_string(),
        },
        Some(z) => Verdict::Mismatch {
            value: z.to_string(),
        },
        None => Verdict::Uncertain,
    };
    Attempt {
        lhs: Some(lhs),
        verdict,
    }
}

/// Zero enclosure for a log-space difference, radius below `2^-(bits/2)`.
pub(crate) fn zero_attempt(diff: Ball, bits: u32) -> Attempt {
    let tight = diff.radius().lt_pow2(-((bits / 2) as i64));
    let verdict = if !tight {
        Verdict::Uncertain
    } else if diff.contains_zero() {
        Verdict::Certified { value: "0".into() }
    } else {
        Verdict::Mismatch {
            value: diff.mid_decimal(BallSummary::DIGITS),
        }
    };
    Attempt {
        lhs: Some(diff),
        verdict,
    }
}

/// Runs `eval` with doubling precision until it decides.
pub(crate) fn drive(
    eq: EquationId,
    n: u64,
    plan: &PrecisionPlan,
    expected: String,
    eval: impl Fn(Precision) -> Attempt,
) -> IdentityReport {
    if !eq.window().contains(n) {
        return IdentityReport::skipped(eq, n);
    }
    let start = Instant::now();
    let factor_count = eq.factor_count(n);
    let (mut bits, max) = plan.resolve(n, factor_count);
    let mut retries = 0;
    let report = |status, detail: String, value, lhs: Option<Ball>, bits, retries| {
        IdentityReport {
            equation: eq,
            n,
            status,
            detail,
            value,
            expected: expected.clone(),
            lhs: lhs.as_ref().map(BallSummary::of),
            bits_used: bits,
            retries,
            factor_count,
            elapsed_us: start.elapsed().as_micros() as u64,
        }
    };
    loop {
        let p = Precision::new(bits).expect("plan bits >= 64");
        let attempt = eval(p);
        match attempt.verdict {
            Verdict::Certified { value } => {
                return report(Status::Verified, "certified".into(), Some(value), attempt.lhs, bits, retries)
            }
            Verdict::Mismatch { value } => {
                let detail = format!("mismatch: certified {value}, expected {expected}");
                return report(Status::Failed, detail, Some(value), attempt.lhs, bits, retries);
            }
            Verdict::Uncertain if bits >= max => {
                let detail = format!("precision exhausted at {bits} bits");
                return report(Status::Failed, detail, None, attempt.lhs, bits, retries);
            }
            Verdict::Uncertain => {
                bits = bits.saturating_mul(2).min(max);
                retries += 1;
            }
        }
    }
}

/// Checks one identity at one `n`.
pub fn verify(eq: EquationId, n: u64, plan: &PrecisionPlan) -> IdentityReport {
    match eq {
        EquationId::E1 => martin_gamma_ratio(n, plan),
        EquationId::E2 => lcm_via_farey_gamma(n, plan),
        EquationId::E3 => lcm_via_farey_sine(n, plan),
        EquationId::E4 => product_sine_coprime(n, plan),
        EquationId::E7 => product_sin_all_check(n, plan),
        EquationId::E8 => partition_identity_check(n, plan),
        EquationId::E9 => product_sine_noncoprime(n, plan),
        EquationId::E10 => lcm_bar_via_sine(n, plan),
        EquationId::E11 => lcm_bar_via_gamma(n, plan),
        EquationId::E12 => product_cos_coprime(n, plan),
        EquationId::E12F => lcm_half_via_farey_cos(n, plan),
        EquationId::E13 => cos_half_product(n, plan),
        EquationId::PhiM1 => phi_minus1_product_check(n, plan),
        EquationId::E14 => multiplication_theorem_check(n, plan),
        EquationId::Gci => gamma_coprime_identity_check(n, plan),
        EquationId::Gut => gut_ratio_check(n),
    }
}

/// One report per `n` in `lo..=hi`, ordered by `n`, computed on a pool of
/// `workers` threads (0 means rayon's default). An empty range gives an
/// empty list.
///
/// Products are split into fixed-size chunks independent of the worker
/// count, so the balls, and with them every status, are identical for any
/// pool size.
pub fn verify_range(
    eq: EquationId,
    lo: u64,
    hi: u64,
    plan: &PrecisionPlan,
    workers: usize,
) -> Vec<IdentityReport> {
    if lo > hi {
        return Vec::new();
    }
    let run = || (lo..=hi).into_par_iter().map(|n| verify(eq, n, plan)).collect();
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(run),
        Err(_) => (lo..=hi).map(|n| verify(eq, n, plan)).collect(),
    }
}
