//! Ordinary continued fraction counterpart of the level quantities, used for
//! `α` with unbounded partial quotients.
//!
//! Everything here works on a finite truncation: `α = [0; a_1, …, a_m]` and
//! `β = Σ_{k≤len} b_k D_k` with `D_k = q_{k−1}α − p_{k−1}` and `len < m`.
//! Nothing is claimed about the infinite liminf.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ncf::finite_rcf_value;

/// Exact per-level data for a truncated `(α, β)` pair.
#[derive(Clone, Debug, Serialize)]
pub struct RegularTrace {
    pub alpha_digits: Vec<u32>,
    pub digits: Vec<u32>,
    #[serde(skip)]
    alpha: BigRational,
    /// `q_{-1}, q_0, q_1, …` stored from index `-1`.
    #[serde(skip)]
    q: Vec<BigInt>,
    #[serde(skip)]
    p: Vec<BigInt>,
}

impl RegularTrace {
    pub fn new(alpha_digits: &[u32], digits: &[u32]) -> Result<Self> {
        if alpha_digits.contains(&0) {
            return Err(Error::InvalidInput("partial quotients must be positive".into()));
        }
        if digits.len() >= alpha_digits.len() {
            return Err(Error::OutOfRange(
                "need more partial quotients of alpha than digits of beta".into(),
            ));
        }
        for (k, (&b, &a)) in digits.iter().zip(alpha_digits).enumerate() {
            if b > a {
                return Err(Error::InvalidInput(format!("digit {} exceeds a_{}", k + 1, k + 1)));
            }
        }
        let mut q = vec![BigInt::zero(), BigInt::one()];
        let mut p = vec![BigInt::one(), BigInt::zero()];
        for &a in alpha_digits {
            let next_q = &q[q.len() - 1] * a + &q[q.len() - 2];
            let next_p = &p[p.len() - 1] * a + &p[p.len() - 2];
            q.push(next_q);
            p.push(next_p);
        }
        Ok(RegularTrace {
            alpha_digits: alpha_digits.to_vec(),
            digits: digits.to_vec(),
            alpha: finite_rcf_value(alpha_digits),
            q,
            p,
        })
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }

    /// `q_i` for `i ≥ -1`.
    pub fn q(&self, i: isize) -> &BigInt {
        &self.q[(i + 1) as usize]
    }

    fn p(&self, i: isize) -> &BigInt {
        &self.p[(i + 1) as usize]
    }

    /// `D_k = q_{k−1}α − p_{k−1}`, alternating in sign.
    pub fn d(&self, k: usize) -> BigRational {
        let i = k as isize - 1;
        &self.alpha * BigRational::from_integer(self.q(i).clone()) - BigRational::from_integer(self.p(i).clone())
    }

    pub fn beta(&self) -> BigRational {
        self.tail(1)
    }

    /// `Σ_{k ≥ from} b_k D_k`.
    pub fn tail(&self, from: usize) -> BigRational {
        (from..=self.digits.len())
            .filter(|&k| self.digits[k - 1] != 0)
            .map(|k| self.d(k) * BigRational::from_integer(self.digits[k - 1].into()))
            .fold(BigRational::zero(), |acc, x| acc + x)
    }

    /// `Q_n = Σ_{k≤n} b_k q_{k−1}`.
    pub fn count(&self, n: usize) -> BigInt {
        (1..=n).map(|k| self.q(k as isize - 1) * self.digits[k - 1]).sum()
    }

    /// `q_n|D_n|`.
    pub fn scale(&self, n: usize) -> BigRational {
        BigRational::from_integer(self.q(n as isize).clone()) * self.d(n).abs()
    }

    /// `λ_n` from the product of `q_n|D_n|`, the scaled count and the scaled
    /// tail.
    pub fn lambda(&self, n: usize) -> BigRational {
        let qn = BigRational::from_integer(self.q(n as isize).clone());
        let count = BigRational::from_integer(self.count(n)) / qn;
        let tail = (self.tail(n + 1) / self.d(n)).abs();
        self.scale(n) * count * tail
    }

    /// `Q_n‖Q_nα − β‖` evaluated directly.
    pub fn direct_lambda(&self, n: usize) -> BigRational {
        let count = self.count(n);
        let x = &self.alpha * BigRational::from_integer(count.clone()) - self.beta();
        let frac = &x - x.floor();
        let dist = frac.clone().min(BigRational::one() - frac);
        dist * BigRational::from_integer(count)
    }
}

/// `λ♯_n` for digits `b` over the truncated `α = [0; a_1, …]`.
pub fn lambda_sharp(digits: &[u32], alpha_digits: &[u32], n: usize) -> Result<BigRational> {
    let t = RegularTrace::new(alpha_digits, digits)?;
    if n == 0 || n > digits.len() {
        return Err(Error::OutOfRange(format!("level {n} outside 1..={}", digits.len())));
    }
    Ok(t.lambda(n))
}

fn local_min(t: &RegularTrace, n: usize) -> BigRational {
    let here = t.lambda(n);
    if n > 1 {
        here.min(t.lambda(n - 1))
    } else {
        here
    }
}

/// Changes `b_n` at each scheduled index so that `min(λ_n, λ_{n−1})` lands
/// in `[c, c + 2/a_n]`, leaving the other digits alone.
pub fn adjust_digits_unbounded(
    digits: &[u32],
    alpha_digits: &[u32],
    target: &BigRational,
    schedule: &[usize],
) -> Result<Vec<u32>> {
    if !target.is_positive() {
        return Err(Error::OutOfRange("target must be positive".into()));
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("schedule must be increasing".into()));
    }
    for w in schedule.windows(2) {
        if alpha_digits.get(w[1] - 1) <= alpha_digits.get(w[0] - 1) {
            return Err(Error::InvalidInput(
                "partial quotients along the schedule must increase".into(),
            ));
        }
    }
    let mut out = digits.to_vec();
    for &n in schedule {
        if n == 0 || n > digits.len() {
            return Err(Error::OutOfRange(format!("scheduled index {n} outside the digits")));
        }
        let a = alpha_digits[n - 1];
        let ceiling = target + BigRational::new(2.into(), a.into());
        let mut best: Option<(BigRational, u32)> = None;
        for v in 0..=a {
            out[n - 1] = v;
            let t = RegularTrace::new(alpha_digits, &out)?;
            let m = local_min(&t, n);
            if &m >= target && m <= ceiling && best.as_ref().is_none_or(|(b, _)| m < *b) {
                best = Some((m, v));
            }
        }
        match best {
            Some((_, v)) => out[n - 1] = v,
            None => return Err(Error::TargetUnreachable { index: n }),
        }
    }
    Ok(out)
}
