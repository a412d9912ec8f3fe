use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expansions::{lattice_point, DavenportRecursion};
use crate::ncf::NcfExpansion;
use crate::numerics::Surd;

/// One level `n` of the approximation bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceLevel {
    pub n: usize,
    pub digit: u32,
    /// `Q_n = Σ_{k≤n} b_k q_{k−1}`, the count of the left endpoint.
    pub left_count: BigInt,
    /// `Q′_n`, the count of the right endpoint.
    pub right_count: BigInt,
    pub lambda: Surd,
    pub rho: Surd,
    /// `β` sits in a short interval at this level.
    pub is_short: bool,
}

/// Per-level `(Q_n, Q′_n, λ_n, ρ_n)` for a fixed `(α, β)`.
#[derive(Clone, Debug, Serialize)]
pub struct ApproxTrace {
    pub levels: Vec<TraceLevel>,
    #[serde(skip)]
    beta: Surd,
    #[serde(skip)]
    alpha: Surd,
}

impl ApproxTrace {
    pub fn level(&self, n: usize) -> &TraceLevel {
        &self.levels[n - 1]
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// `Q_n‖Q_nα − β‖`, computed directly from the counts.
    pub fn direct_lambda(&self, n: usize) -> Surd {
        count_distance(&self.level(n).left_count, &self.alpha, &self.beta)
    }

    /// `Q′_n‖Q′_nα − β‖`, computed directly from the counts.
    pub fn direct_rho(&self, n: usize) -> Surd {
        count_distance(&self.level(n).right_count, &self.alpha, &self.beta)
    }
}

/// `q‖qα − β‖` exactly.
pub fn count_distance(q: &BigInt, alpha: &Surd, beta: &Surd) -> Surd {
    let x = &alpha.mul_int(q.clone()) - beta;
    let frac = &x - &Surd::from_int(x.floor());
    let other = &Surd::one() - &frac;
    frac.min(other).mul_int(q.clone())
}

/// Fails with `FiniteSupport` when `β = qα − p`, reporting `q`.
pub(crate) fn reject_lattice_point(digits: &[u32], alpha: &NcfExpansion) -> Error {
    match lattice_point(digits, alpha) {
        Ok((q, _)) => Error::FiniteSupport { q: q.to_string() },
        Err(_) => Error::FiniteSupport { q: "0".into() },
    }
}

/// Builds the trace of `β` to the given depth.
pub fn trace(beta: &Surd, alpha: &NcfExpansion, depth: usize) -> Result<ApproxTrace> {
    alpha.require_infinite()?;
    let alpha_value = alpha.exact_value("trace")?;
    if beta.is_negative() || *beta >= Surd::one() {
        return Err(Error::OutOfRange("beta must lie in [0,1)".into()));
    }
    let mut rec = DavenportRecursion::new(beta.clone(), alpha);
    if rec.residual().is_zero() {
        return Err(Error::FiniteSupport { q: "0".into() });
    }
    let mut digits = Vec::with_capacity(depth);
    let mut levels = Vec::with_capacity(depth);
    let mut left = BigInt::zero();
    // Whether the digits end in a run `a_m−1, a_{m+1}−2, …, a_n−2`.
    let mut in_short = false;
    for n in 1..=depth {
        let b = rec.step()?;
        digits.push(b);
        let a = alpha.digit(n)?;
        let q_prev = alpha.q(n - 1)?;
        let q_n = alpha.q(n)?;
        left += &q_prev * b;
        in_short = b + 1 == a || (in_short && b + 2 == a);
        let residual = rec.residual().clone();
        if residual.is_zero() {
            return Err(reject_lattice_point(&digits, alpha));
        }
        debug_assert_eq!(in_short, left >= &q_n - &q_prev);
        let d_n = alpha.d(n)?;
        let right = if in_short {
            &left + &q_prev - &q_n
        } else {
            &left + &q_prev
        };
        let lambda = &d_n.mul_int(left.clone()) * &residual;
        let gap = if in_short {
            &(&Surd::one() - &alpha.alpha_i(n + 1)?) - &residual
        } else {
            &Surd::one() - &residual
        };
        let rho = &d_n.mul_int(right.clone()) * &gap;
        levels.push(TraceLevel {
            n,
            digit: b,
            left_count: left.clone(),
            right_count: right,
            lambda,
            rho,
            is_short: in_short,
        });
    }
    Ok(ApproxTrace {
        levels,
        beta: beta.clone(),
        alpha: alpha_value,
    })
}

/// `min{λ_n, ρ_n, λ_{n+1}, ρ_{n+1}}`, the level-`n` lower bound on
/// `q‖qα − β‖` for `q_n ≤ q < q_{n+1}`.
pub fn level_lower_bound(t: &ApproxTrace, n: usize) -> Surd {
    let a = t.level(n);
    let b = t.level(n + 1);
    [&a.lambda, &a.rho, &b.lambda, &b.rho]
        .into_iter()
        .min()
        .expect("four values")
        .clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::PeriodicWord;

    fn five_three() -> NcfExpansion {
        NcfExpansion::periodic(&[], &[5, 3]).unwrap()
    }

    #[test]
    fn lambda_and_rho_match_direct_distances() {
        let e = five_three();
        let beta = e
            .weighted_sum(&PeriodicWord::purely_periodic(vec![1]).unwrap())
            .unwrap();
        let t = trace(&beta, &e, 30).unwrap();
        for n in 1..=30 {
            assert_eq!(t.level(n).lambda, t.direct_lambda(n), "lambda at {n}");
            assert_eq!(t.level(n).rho, t.direct_rho(n), "rho at {n}");
        }
    }

    #[test]
    fn zero_digit_repeats_lambda_and_short_repeats_rho() {
        let e = NcfExpansion::periodic(&[], &[4, 3, 5]).unwrap();
        let beta = Surd::from_ratio(3, 7);
        let t = trace(&beta, &e, 40).unwrap();
        let mut saw_zero = false;
        let mut saw_short = false;
        for n in 2..=40 {
            let (prev, cur) = (t.level(n - 1), t.level(n));
            assert!(cur.left_count >= prev.left_count);
            assert!(cur.left_count < e.q(n).unwrap());
            assert_eq!(cur.left_count >= e.q(n - 1).unwrap(), cur.digit != 0);
            if cur.digit == 0 {
                saw_zero = true;
                assert_eq!(cur.lambda, prev.lambda);
            }
            if cur.is_short {
                saw_short = true;
                assert_eq!(cur.rho, prev.rho);
            }
        }
        assert!(saw_zero && saw_short);
    }

    #[test]
    fn lattice_points_are_rejected() {
        let e = five_three();
        let beta = &e.value().unwrap().mul_int(13) - &Surd::from_int(2);
        assert_eq!(
            trace(&beta, &e, 10).unwrap_err(),
            Error::FiniteSupport { q: "13".into() }
        );
    }
}
