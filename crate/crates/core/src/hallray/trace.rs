//! `λ_{K(i)}` along a glued stream, each with a certified enclosure and an
//! a priori error bound built only from the window lengths.
//!
//! Writing `λ_K = x·y·z` with `x = Q_K/q_K`, `y = q_K D_K` and `z = β_{K+1}`,
//! the limits are `β⁻`, `1/(1 − α⁻α⁺)` and `β⁺`. The bound adds up
//!
//! * `|x − β⁻|`: the exact weight mismatch over the backward window plus the
//!   largest digit tail beyond it,
//! * `|y − 1/(1 − α⁻α⁺)|`, exactly,
//! * `|z − β⁺|`: the largest digit tail beyond the forward window.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;
use crate::ncf::NcfExpansion;
use crate::numerics::Surd;
use crate::par::{self, Execution};
use crate::word::PeriodicWord;

use super::glue::{GluedBeta, Window};
use super::limits::LimitPair;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LambdaPoint {
    /// Position in the usable part of the schedule.
    pub index: usize,
    pub k: usize,
    pub lambda_lo: Surd,
    pub lambda_hi: Surd,
    /// Upper end of `|λ_K − target|`.
    pub gap: Surd,
    /// A priori bound on `|λ_K − target|`.
    pub bound: Surd,
    /// `|Q_K/q_K − β⁻|`, exactly.
    pub count_ratio_error: Surd,
    /// Upper end of `|β_{K+1} − β⁺|`.
    pub residual_error: Surd,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LambdaTrace {
    pub target: Surd,
    pub beta_minus: Surd,
    pub beta_plus: Surd,
    pub points: Vec<LambdaPoint>,
}

impl LambdaTrace {
    /// Whether both the gaps and the bounds shrink strictly from point to
    /// point, the gap at `i+1` lying below the gap at `i`.
    pub fn is_contracting(&self) -> bool {
        self.points
            .windows(2)
            .all(|p| p[1].gap < p[0].gap && p[1].bound < p[0].bound)
    }

    /// Whether every gap stays below its bound.
    pub fn within_bounds(&self) -> bool {
        self.points.iter().all(|p| p.gap <= p.bound)
    }

    pub fn to_json(&self, digits: usize) -> Value {
        let dec = |x: &Surd| x.to_decimal(digits);
        json!({
            "target": dec(&self.target),
            "betaMinus": dec(&self.beta_minus),
            "betaPlus": dec(&self.beta_plus),
            "points": self.points.iter().map(|p| json!({
                "index": p.index,
                "k": p.k,
                "lambdaLo": dec(&p.lambda_lo),
                "lambdaHi": dec(&p.lambda_hi),
                "gap": format!("{:e}", p.gap.to_f64()),
                "bound": format!("{:e}", p.bound.to_f64()),
                "countRatioError": format!("{:e}", p.count_ratio_error.to_f64()),
                "residualError": format!("{:e}", p.residual_error.to_f64()),
            })).collect::<Vec<_>>(),
        })
    }
}

/// `Σ_{j>m} (a_j − 1)·D_j` for a purely periodic expansion.
fn largest_tail(e: &NcfExpansion, m: usize) -> Result<Surd> {
    let shifted = e.shifted(m)?;
    let w = shifted.require_periodic()?;
    let top = PeriodicWord::new(
        w.preperiod.iter().map(|a| a - 1).collect(),
        w.period.iter().map(|a| a - 1).collect(),
    )?;
    Ok(&e.d(m)? * &shifted.weighted_sum(&top)?)
}

/// `e` as a value of `α⁻`, `f` as a value of `α⁺_{r+1}`, and the target
/// `e·f·D⁺_r/(1 − α⁻α⁺)` together with `β⁻ = e` and `β⁺ = f·D⁺_r`.
pub fn target_value(glued: &GluedBeta, pair: &LimitPair) -> Result<(Surd, Surd, Surd)> {
    let beta_minus = pair.alpha_minus.weighted_sum(&glued.e)?;
    let f = pair.alpha_plus.shifted(glued.r)?.weighted_sum(&glued.f)?;
    let beta_plus = &f * &pair.d_plus(glued.r)?;
    let target = &(&beta_minus * &beta_plus) * &pair.junction_factor()?;
    Ok((target, beta_minus, beta_plus))
}

struct Shared<'a> {
    glued: &'a GluedBeta,
    pair: &'a LimitPair,
    counts: Vec<BigInt>,
    suffix: Vec<Surd>,
    d_last: Surd,
    target: Surd,
    beta_minus: Surd,
    beta_plus: Surd,
    junction: Surd,
}

impl Shared<'_> {
    fn point(&self, index: usize, prev: &Window, win: &Window) -> Result<LambdaPoint> {
        let alpha = &self.pair.alpha;
        let k = win.k;
        let count = Surd::from_int(self.counts[k].clone());
        let lambda_lo = &count * &self.suffix[k];
        let lambda_hi = &count * &(&self.suffix[k] + &self.d_last);
        let lo_gap = (&lambda_lo - &self.target).abs();
        let hi_gap = (&lambda_hi - &self.target).abs();
        let gap = lo_gap.max(hi_gap);

        let q_k = alpha.q(k)?;
        let ratio = Surd::from_rational(&BigRational::new(self.counts[k].clone(), q_k.clone()));
        let count_ratio_error = (&ratio - &self.beta_minus).abs();
        let d_k = alpha.d(k)?;
        let z_lo = &self.suffix[k] / &d_k;
        let z_hi = &(&self.suffix[k] + &self.d_last) / &d_k;
        let residual_error = (&z_lo - &self.beta_plus).abs().max((&z_hi - &self.beta_plus).abs());

        // Backward window [v, K] of the previous gap carries e_1, …, e_m.
        let m_minus = k - prev.v + 1;
        let mut weighted = BigInt::zero();
        let mut limit_weighted = Surd::zero();
        for j in 1..=m_minus {
            let e_j = self.glued.e.get(j - 1);
            if e_j != 0 {
                weighted += alpha.q(k - j)? * e_j;
                limit_weighted = &limit_weighted + &self.pair.d_minus(j)?.mul_int(e_j);
            }
        }
        let mut rev_tail = BigInt::zero();
        for j in m_minus + 1..=k {
            rev_tail += alpha.q(k - j)? * (alpha.digit(k + 1 - j)? - 1);
        }
        let mismatch = (&Surd::from_rational(&BigRational::new(weighted, q_k.clone())) - &limit_weighted).abs();
        let rev_tail = Surd::from_rational(&BigRational::new(rev_tail, q_k.clone()));
        let dx = &mismatch + &rev_tail.max(largest_tail(&self.pair.alpha_minus, m_minus)?);

        let y = d_k.mul_int(q_k);
        let dy = (&y - &self.junction).abs();
        let dz = largest_tail(&self.pair.alpha_plus, win.u - k)?;
        let z_top = &self.beta_plus + &dz;
        let bound = &(&(&(&dx * &y) * &z_top) + &(&(&self.beta_minus * &dy) * &z_top))
            + &(&(&self.beta_minus * &self.junction) * &dz);
        Ok(LambdaPoint {
            index,
            k,
            lambda_lo,
            lambda_hi,
            gap,
            bound,
            count_ratio_error,
            residual_error,
        })
    }
}

/// Evaluates `λ_{K(i)}` at every schedule point that has a full backward
/// window in front of it and a full forward window behind it.
pub fn lambda_trace(glued: &GluedBeta, pair: &LimitPair, exec: Execution) -> Result<LambdaTrace> {
    let alpha = &pair.alpha;
    let len = glued.len();
    let mut counts = Vec::with_capacity(len + 1);
    counts.push(BigInt::zero());
    for j in 1..=len {
        let next = counts[j - 1].clone() + alpha.q(j - 1)? * glued.digit(j);
        counts.push(next);
    }
    let mut suffix = vec![Surd::zero(); len + 1];
    for j in (1..=len).rev() {
        let b = glued.digit(j);
        suffix[j - 1] = if b == 0 {
            suffix[j].clone()
        } else {
            &suffix[j] + &alpha.d(j)?.mul_int(b)
        };
    }
    let (target, beta_minus, beta_plus) = target_value(glued, pair)?;
    let shared = Shared {
        glued,
        pair,
        counts,
        suffix,
        d_last: alpha.d(len)?,
        target: target.clone(),
        beta_minus: beta_minus.clone(),
        beta_plus: beta_plus.clone(),
        junction: pair.junction_factor()?,
    };
    let jobs: Vec<usize> = (1..glued.windows.len()).collect();
    let points = par::map_collect(exec, &jobs, |&i| {
        shared.point(i, &glued.windows[i - 1], &glued.windows[i])
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(LambdaTrace {
        target,
        beta_minus,
        beta_plus,
        points,
    })
}

/// `Σ_k b_k D_k` over the generated digits, widened by `D_len` for the rest.
pub fn beta_enclosure(glued: &GluedBeta, alpha: &NcfExpansion) -> Result<(Surd, Surd)> {
    let mut total = Surd::zero();
    for j in 1..=glued.len() {
        let b = glued.digit(j);
        if b != 0 {
            total = &total + &alpha.d(j)?.mul_int(b);
        }
    }
    let hi = &total + &alpha.d(glued.len())?;
    Ok((total, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hallray::glue::glue_beta;
    use crate::hallray::limits::{limit_pair, SchedulePolicy};

    fn setup() -> (LimitPair, GluedBeta) {
        let alpha = NcfExpansion::periodic(&[], &[5, 3]).unwrap();
        let policy = SchedulePolicy {
            phase: 0,
            scale: 3,
            len: 12,
        };
        let pair = limit_pair(&alpha, policy).unwrap();
        let ones = PeriodicWord::purely_periodic(vec![1]).unwrap();
        let g = glue_beta(&ones, &ones, 9, 1, &pair).unwrap();
        (pair, g)
    }

    #[test]
    fn lambda_matches_the_direct_product() {
        let (pair, g) = setup();
        let t = lambda_trace(&g, &pair, Execution::Sequential).unwrap();
        let p = &t.points[1];
        // Independent recomputation of Q_K and D_K β_{K+1}.
        let alpha = &pair.alpha;
        let mut count = BigInt::zero();
        for j in 1..=p.k {
            count += alpha.q(j - 1).unwrap() * g.digit(j);
        }
        let mut tail = Surd::zero();
        for j in p.k + 1..=g.len() {
            tail = &tail + &alpha.d(j).unwrap().mul_int(g.digit(j));
        }
        assert_eq!(p.lambda_lo, &Surd::from_int(count) * &tail);
        assert!(p.lambda_lo < p.lambda_hi);
    }

    #[test]
    fn gaps_contract_and_respect_bounds() {
        let (pair, g) = setup();
        let t = lambda_trace(&g, &pair, Execution::Parallel).unwrap();
        assert!(t.points.len() >= 5);
        assert!(t.within_bounds());
        assert!(t.is_contracting());
        let last = t.points.last().unwrap();
        assert!(last.count_ratio_error.to_f64() < 1e-6);
        assert!(last.residual_error.to_f64() < 1e-6);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let (pair, g) = setup();
        let a = lambda_trace(&g, &pair, Execution::Sequential).unwrap();
        let b = lambda_trace(&g, &pair, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn enclosure_brackets_the_digit_sum() {
        let (pair, g) = setup();
        let (lo, hi) = beta_enclosure(&g, &pair.alpha).unwrap();
        assert!(lo.is_positive() && lo < hi);
        assert!(hi.to_f64() < 1e-20);
    }
}
