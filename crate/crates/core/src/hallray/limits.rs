//! Digit windows around a schedule `K(1) < K(2) < …` and their limits.
//!
//! For an eventually periodic `α` and a schedule that stays on one residue of
//! the period, the backward window `a_K, a_{K−1}, …` and the forward window
//! `a_{K+1}, a_{K+2}, …` are the same for every `K`, so both limits are
//! periodic expansions that can be written down directly.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ncf::NcfExpansion;
use crate::numerics::Surd;

/// How the schedule is generated: `K(i)` is the first index at or above
/// `scale·i·(i+3)` (and past the preperiod) whose offset into the period is
/// `phase`, bumped by whole periods so that consecutive gaps strictly grow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchedulePolicy {
    pub phase: usize,
    pub scale: usize,
    pub len: usize,
}

impl Default for SchedulePolicy {
    fn default() -> Self {
        SchedulePolicy {
            phase: 0,
            scale: 1,
            len: 40,
        }
    }
}

/// The schedule together with `α⁻` (backward limit) and `α⁺` (forward limit).
#[derive(Clone, Debug)]
pub struct LimitPair {
    pub schedule: Vec<usize>,
    pub alpha: NcfExpansion,
    pub alpha_minus: NcfExpansion,
    pub alpha_plus: NcfExpansion,
}

impl LimitPair {
    /// `D⁺_k = α⁺_1⋯α⁺_k`.
    pub fn d_plus(&self, k: usize) -> Result<Surd> {
        self.alpha_plus.d(k)
    }

    /// `D⁻_k = α⁻_1⋯α⁻_k`.
    pub fn d_minus(&self, k: usize) -> Result<Surd> {
        self.alpha_minus.d(k)
    }

    /// `1/(1 − α⁻α⁺)`, the limit of `q_{K(i)}D_{K(i)}`.
    pub fn junction_factor(&self) -> Result<Surd> {
        let m = self.alpha_minus.exact_value("alpha minus")?;
        let p = self.alpha_plus.exact_value("alpha plus")?;
        Ok((&Surd::one() - &(&m * &p)).recip())
    }

    pub fn to_json(&self, digits: usize) -> Result<Value> {
        let word = |e: &NcfExpansion| {
            let w = e.require_periodic()?;
            Ok::<_, Error>(json!({"preperiod": w.preperiod, "period": w.period}))
        };
        let d_plus: Vec<String> = (1..=digits)
            .map(|k| self.d_plus(k).map(|d| d.to_decimal(20)))
            .collect::<Result<_>>()?;
        Ok(json!({
            "schedule": self.schedule,
            "alphaMinus": word(&self.alpha_minus)?,
            "alphaPlus": word(&self.alpha_plus)?,
            "alphaMinusValue": self.alpha_minus.exact_value("alpha minus")?.to_decimal(30),
            "alphaPlusValue": self.alpha_plus.exact_value("alpha plus")?.to_decimal(30),
            "dPlus": d_plus,
        }))
    }
}

fn schedule(pre: usize, period: usize, policy: SchedulePolicy) -> Vec<usize> {
    let phase = policy.phase % period;
    let scale = policy.scale.max(1);
    let mut out: Vec<usize> = Vec::with_capacity(policy.len);
    for i in 1..=policy.len {
        let floor = (scale * i * (i + 3)).max(pre + 1);
        let offset = (floor - pre) % period;
        let mut k = floor + (period + phase - offset) % period;
        if let [.., before, last] = out[..] {
            while k <= last || k - last <= last - before {
                k += period;
            }
        } else if let Some(&last) = out.last() {
            while k <= last {
                k += period;
            }
        }
        out.push(k);
    }
    out
}

/// Schedule and limit quotients for an eventually periodic `α`.
///
/// `phase` counts from the first periodic digit: with `phase = 0` every
/// `a_{K(i)+1}` is the first letter of the period.
pub fn limit_pair(alpha: &NcfExpansion, policy: SchedulePolicy) -> Result<LimitPair> {
    let word = alpha.periodic_word().ok_or(Error::NotEventuallyPeriodic)?;
    alpha.structural_bounds()?;
    let (pre, period) = (word.preperiod.len(), word.period.len());
    let phase = policy.phase % period;
    let forward: Vec<u32> = (0..period).map(|j| word.period[(phase + j) % period]).collect();
    let backward: Vec<u32> = (1..=period)
        .map(|j| word.period[(phase + period * j - j) % period])
        .collect();
    Ok(LimitPair {
        schedule: schedule(pre, period, policy),
        alpha: alpha.clone(),
        alpha_minus: NcfExpansion::periodic(&[], &backward)?,
        alpha_plus: NcfExpansion::periodic(&[], &forward)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn periodic_digits(e: &NcfExpansion) -> Vec<u32> {
        let w = e.require_periodic().unwrap();
        w.prefix(6)
    }

    #[test]
    fn even_phase_of_five_three() {
        let alpha = NcfExpansion::periodic(&[], &[5, 3]).unwrap();
        let pair = limit_pair(&alpha, SchedulePolicy::default()).unwrap();
        assert_eq!(periodic_digits(&pair.alpha_minus), vec![3, 5, 3, 5, 3, 5]);
        assert_eq!(periodic_digits(&pair.alpha_plus), vec![5, 3, 5, 3, 5, 3]);
        assert!(pair.schedule.iter().all(|k| k % 2 == 0));
    }

    #[test]
    fn odd_phase_of_five_three() {
        let alpha = NcfExpansion::periodic(&[], &[5, 3]).unwrap();
        let policy = SchedulePolicy {
            phase: 1,
            ..SchedulePolicy::default()
        };
        let pair = limit_pair(&alpha, policy).unwrap();
        assert_eq!(periodic_digits(&pair.alpha_minus), vec![5, 3, 5, 3, 5, 3]);
        assert_eq!(periodic_digits(&pair.alpha_plus), vec![3, 5, 3, 5, 3, 5]);
        assert!(pair.schedule.iter().all(|k| k % 2 == 1));
    }

    #[test]
    fn windows_match_the_limits() {
        let alpha = NcfExpansion::periodic(&[7, 2], &[4, 2, 3]).unwrap();
        for phase in 0..3 {
            let policy = SchedulePolicy {
                phase,
                scale: 1,
                len: 12,
            };
            let pair = limit_pair(&alpha, policy).unwrap();
            for &k in &pair.schedule[2..] {
                for j in 1..=6 {
                    assert_eq!(alpha.digit(k + j).unwrap(), pair.alpha_plus.digit(j).unwrap());
                    if k + 1 - j > 2 {
                        assert_eq!(alpha.digit(k + 1 - j).unwrap(), pair.alpha_minus.digit(j).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn preperiod_does_not_change_the_limits() {
        let plain = NcfExpansion::periodic(&[], &[4, 2, 3]).unwrap();
        let with_head = NcfExpansion::periodic(&[9, 2, 6], &[4, 2, 3]).unwrap();
        let a = limit_pair(&plain, SchedulePolicy::default()).unwrap();
        let b = limit_pair(&with_head, SchedulePolicy::default()).unwrap();
        assert_eq!(periodic_digits(&a.alpha_plus), periodic_digits(&b.alpha_plus));
        assert_eq!(periodic_digits(&a.alpha_minus), periodic_digits(&b.alpha_minus));
    }

    #[test]
    fn gaps_strictly_grow() {
        let alpha = NcfExpansion::periodic(&[2], &[3, 2, 2, 5]).unwrap();
        let pair = limit_pair(&alpha, SchedulePolicy::default()).unwrap();
        let gaps: Vec<usize> = pair.schedule.windows(2).map(|w| w[1] - w[0]).collect();
        assert!(gaps.windows(2).all(|g| g[1] > g[0]), "{gaps:?}");
    }

    #[test]
    fn junction_factor_is_the_limit_of_q_d() {
        let alpha = NcfExpansion::periodic(&[], &[5, 3]).unwrap();
        let pair = limit_pair(&alpha, SchedulePolicy::default()).unwrap();
        let k = pair.schedule[4];
        let qd = &alpha.d(k).unwrap().mul_int(alpha.q(k).unwrap());
        let gap = (qd - &pair.junction_factor().unwrap()).abs();
        assert!(gap.to_f64() < 1e-12);
    }

    #[test]
    fn rejects_non_periodic_input() {
        let alpha = NcfExpansion::from_handle(crate::numerics::RealHandle::rational(3, 7)).unwrap();
        assert!(limit_pair(&alpha, SchedulePolicy::default()).is_err());
    }
}
