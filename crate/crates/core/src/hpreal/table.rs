use super::ball::Ball;
use super::elementary::{cos_pi_frac, exact_cos_pi, exact_sin_pi, sin_pi_frac};
use super::Precision;
use crate::farey::Fraction;

/// `sin(πk/n)` and `cos(πk/n)` for every `0 <= k <= n`.
///
/// Built from one direct evaluation of `e^{iπ/n}` and repeated complex
/// multiplication up to `k = n/2`; the upper half follows from
/// `sin(π - θ) = sin θ`, `cos(π - θ) = -cos θ`. Points where the direct
/// evaluators are exact use those exact values.
#[derive(Debug, Clone)]
pub struct TrigTable {
    n: u64,
    sin: Vec<Ball>,
    cos: Vec<Ball>,
}

impl TrigTable {
    pub fn new(n: u64, p: Precision) -> Self {
        assert!(n >= 1, "table denominator must be positive");
        let half = (n / 2) as usize;
        let guard = 16 + 2 * (64 - n.leading_zeros());
        let wp = p.guarded(guard);
        let step = Fraction::new(1, n).expect("1/n is in [0, 1]");
        let (ws, wc) = (sin_pi_frac(step, wp), cos_pi_frac(step, wp));
        let mut sin = Vec::with_capacity(half + 1);
        let mut cos = Vec::with_capacity(half + 1);
        let (mut s, mut c) = (Ball::zero(), Ball::one());
        for k in 0..=half as u64 {
            if k > 0 {
                let ns = s.mul(&wc, wp).add(&c.mul(&ws, wp), wp);
                let nc = c.mul(&wc, wp).sub(&s.mul(&ws, wp), wp);
                (s, c) = (ns, nc);
            }
            let r = Fraction::new(k, n).expect("k <= n");
            sin.push(exact_sin_pi(r).unwrap_or_else(|| s.rounded(p.guarded(8))));
            cos.push(exact_cos_pi(r).unwrap_or_else(|| c.rounded(p.guarded(8))));
        }
        TrigTable { n, sin, cos }
    }

    pub fn denominator(&self) -> u64 {
        self.n
    }

    pub fn sin(&self, k: u64) -> Ball {
        assert!(k <= self.n);
        let m = k.min(self.n - k) as usize;
        self.sin[m].clone()
    }

    pub fn cos(&self, k: u64) -> Ball {
        assert!(k <= self.n);
        if 2 * k <= self.n {
            self.cos[k as usize].clone()
        } else {
            self.cos[(self.n - k) as usize].neg()
        }
    }
}
