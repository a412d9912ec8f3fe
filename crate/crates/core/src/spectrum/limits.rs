//! Exact liminfs for eventually periodic `α` and eventually periodic digits.
//!
//! Along indices `n` of one phase, `Q_n/q_n`, `q_nD_n` and `β_{n+1}` converge
//! to values read off the backward and forward digit words, so each phase
//! contributes an exact limit for `λ_n` and one for `ρ_n`.

use std::collections::HashMap;

use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ncf::NcfExpansion;
use crate::numerics::{surd_from_periodic_rcf, Surd};
use crate::word::PeriodicWord;

/// Limits of `λ_n` and `ρ_n` along one residue class of `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhaseLimit {
    /// A representative index in the periodic regime.
    pub index: usize,
    pub lambda: Surd,
    pub rho: Surd,
    pub is_short: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicLimits {
    pub phases: Vec<PhaseLimit>,
    /// `min` over phases of both limits.
    pub value: Surd,
}

/// The ingredients of one phase limit.
pub(crate) struct PhaseData {
    /// `α⁻`, the purely periodic expansion read backwards from `n`.
    pub backward_alpha: NcfExpansion,
    /// `β⁻ = Σ_{m≥1} b_{n+1−m} D⁻_m`, the limit of `Q_n/q_n`.
    pub backward_beta: Surd,
    /// `α⁺ = α_{n+1}`.
    pub forward_alpha: Surd,
    /// `β⁺ = β_{n+1}`.
    pub forward_beta: Surd,
}

impl PhaseData {
    /// `1/(1 − α⁻α⁺)`, the limit of `q_nD_n`.
    pub fn scale(&self) -> Surd {
        let am = self.backward_alpha.value().expect("periodic");
        (&Surd::one() - &(&am * &self.forward_alpha)).recip()
    }
}

fn backward_period(word: &PeriodicWord, n: usize, len: usize) -> Vec<u32> {
    (0..len).map(|m| word.get(n - 1 - m)).collect()
}

pub(crate) fn phase_data(beta_word: &PeriodicWord, alpha: &NcfExpansion, n: usize, block: usize) -> Result<PhaseData> {
    let aw = alpha.require_periodic()?;
    let a_back = backward_period(aw, n, aw.period.len());
    let b_back = backward_period(beta_word, n, block);
    let backward_alpha = NcfExpansion::periodic(&[], &a_back)?;
    let backward_beta = backward_alpha.weighted_sum(&PeriodicWord::purely_periodic(b_back)?)?;
    let forward = alpha.shifted(n)?;
    let forward_beta = forward.weighted_sum(&beta_word.shift(n))?;
    Ok(PhaseData {
        backward_alpha,
        backward_beta,
        forward_alpha: alpha.alpha_i(n + 1)?,
        forward_beta,
    })
}

/// Whether the digits `b_1..b_n` end in `a_m−1, a_{m+1}−2, …, a_n−2`.
pub(crate) fn ends_short(beta_word: &PeriodicWord, alpha: &NcfExpansion, n: usize) -> Result<bool> {
    for k in (1..=n).rev() {
        let (b, a) = (beta_word.get(k - 1), alpha.digit(k)?);
        if b + 1 == a {
            return Ok(true);
        }
        if b + 2 != a {
            return Ok(false);
        }
    }
    Ok(false)
}

/// Exact `min{liminf λ_n, liminf ρ_n}` for an eventually periodic digit word
/// that does not terminate.
pub fn exact_periodic(beta_word: &PeriodicWord, alpha: &NcfExpansion) -> Result<PeriodicLimits> {
    let aw = alpha.require_periodic()?;
    if beta_word.is_eventually_zero() {
        return Err(Error::FiniteSupport {
            q: "eventually zero digits".into(),
        });
    }
    let start = aw.preperiod.len().max(beta_word.preperiod.len());
    let block = aw.period.len().lcm(&beta_word.period.len());
    let mut phases = Vec::with_capacity(block);
    for n in start + block..start + 2 * block {
        let data = phase_data(beta_word, alpha, n, block)?;
        let scale = data.scale();
        let am = data.backward_alpha.value().expect("periodic");
        let short = ends_short(beta_word, alpha, n)?;
        let lambda = &(&data.backward_beta * &scale) * &data.forward_beta;
        let rho = if short {
            let count = &(&data.backward_beta + &am) - &Surd::one();
            let gap = &(&Surd::one() - &data.forward_alpha) - &data.forward_beta;
            &(&count * &scale) * &gap
        } else {
            let count = &data.backward_beta + &am;
            &(&count * &scale) * &(&Surd::one() - &data.forward_beta)
        };
        phases.push(PhaseLimit {
            index: n,
            lambda,
            rho,
            is_short: short,
        });
    }
    let value = phases
        .iter()
        .flat_map(|p| [&p.lambda, &p.rho])
        .min()
        .expect("at least one phase")
        .clone();
    Ok(PeriodicLimits { phases, value })
}

/// Regular continued fraction digits of a quadratic surd in `(0,1)` as an
/// eventually periodic word.
pub fn regular_periodic_word(x: &Surd) -> Result<PeriodicWord> {
    let mut seen: HashMap<Surd, usize> = HashMap::new();
    let mut digits = Vec::new();
    let mut cur = x.clone();
    for step in 0..10_000 {
        if cur.is_zero() {
            return Err(Error::Terminated(digits.len()));
        }
        if let Some(&first) = seen.get(&cur) {
            return PeriodicWord::new(digits[..first].to_vec(), digits[first..].to_vec());
        }
        seen.insert(cur.clone(), step);
        let inv = cur.recip();
        let a = inv.floor();
        digits.push(
            a.to_u32()
                .ok_or_else(|| Error::OutOfRange("partial quotient exceeds u32".into()))?,
        );
        cur = &inv - &Surd::from_int(a);
    }
    Err(Error::NotEventuallyPeriodic)
}

/// `ℳ₊(α, 0) = liminf q‖qα‖` for a quadratic irrational `α`.
pub fn homogeneous_constant(alpha: &NcfExpansion) -> Result<Surd> {
    alpha.require_infinite()?;
    let x = alpha.exact_value("homogeneous constant")?;
    let word = regular_periodic_word(&x)?;
    let (pre, per) = (word.preperiod.len(), word.period.len());
    // Complete quotients 1/x_j with x_0 = α and x_{j+1} = 1/x_j − a′_{j+1}.
    let mut tails = Vec::with_capacity(pre + 2 * per + 1);
    let mut cur = x;
    for j in 0..pre + 2 * per + 1 {
        tails.push(cur.recip());
        cur = &cur.recip() - &Surd::from_int(word.get(j));
    }
    let mut best: Option<Surd> = None;
    for j in pre + per + 1..=pre + 2 * per {
        // q_n‖q_nα‖ → 1/([a′_j; a′_{j+1}, …] + [0; a′_{j−1}, a′_{j−2}, …])
        let forward = &tails[j - 1];
        let back: Vec<u32> = (0..per).map(|m| word.get(j - 2 - m)).collect();
        let backward = surd_from_periodic_rcf(&[], &back)?;
        let v = (forward + &backward).recip();
        best = Some(match best {
            Some(b) => b.min(v),
            None => v,
        });
    }
    Ok(best.expect("nonempty period"))
}
