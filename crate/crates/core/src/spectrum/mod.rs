//! `ℳ₊(α,β)` and `ℳ(α,β)`: per-level bookkeeping, exact periodic limits,
//! truncated estimates and a brute-force oracle.

pub mod limits;
pub mod oracle;
pub mod sharp;
pub mod structure;
pub mod trace;

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::expansions::{davenport_periodic, PERIOD_SEARCH_STEPS};
use crate::ncf::NcfExpansion;
use crate::numerics::Surd;

pub use limits::{exact_periodic, homogeneous_constant, PeriodicLimits, PhaseLimit};
pub use oracle::{gda_check, mplus_oracle, OracleTable, OracleWindow};
pub use sharp::{adjust_digits_unbounded, lambda_sharp, RegularTrace};
pub use structure::theorem98967_check;
pub use trace::{count_distance, level_lower_bound, trace, ApproxTrace, TraceLevel};

/// Fractional bits kept when a heuristic bound is rounded to a rational.
const BOUND_BITS: u32 = 96;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Formula,
    Oracle,
    ExactPeriodic,
}

/// A bracket `[lower, upper]` around a liminf.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumEstimate {
    pub lower: Surd,
    pub upper: Surd,
    pub depth_used: usize,
    pub method: Method,
    /// `β` was a lattice point `qα − p` and the homogeneous constant was used.
    pub routed_homogeneous: bool,
}

impl SpectrumEstimate {
    fn exact(value: Surd, depth_used: usize, routed_homogeneous: bool) -> Self {
        SpectrumEstimate {
            lower: value.clone(),
            upper: value,
            depth_used,
            method: Method::ExactPeriodic,
            routed_homogeneous,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    pub fn contains(&self, x: &Surd) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    pub fn to_json(&self, digits: usize) -> Value {
        json!({
            "lower": self.lower.to_decimal(digits),
            "upper": self.upper.to_decimal(digits),
            "lower_exact": self.lower,
            "upper_exact": self.upper,
            "depth_used": self.depth_used,
            "method": self.method,
            "routed_homogeneous": self.routed_homogeneous,
        })
    }
}

fn homogeneous(alpha: &NcfExpansion, depth: usize) -> Result<SpectrumEstimate> {
    Ok(SpectrumEstimate::exact(homogeneous_constant(alpha)?, depth, true))
}

/// Estimates `ℳ₊(α,β)` from the levels `depth/2..=depth`.
///
/// Periodic `α` with `β` in the same quadratic field has eventually periodic
/// digits, and the exact liminf is returned. Otherwise the bracket is the
/// observed minimum over the upper half of the levels with a tail allowance
/// below it.
pub fn mplus_truncated(beta: &Surd, alpha: &NcfExpansion, depth: usize) -> Result<SpectrumEstimate> {
    alpha.require_infinite()?;
    if depth < 2 {
        return Err(Error::OutOfRange("depth must be at least 2".into()));
    }
    if beta.is_zero() {
        return homogeneous(alpha, depth);
    }
    if alpha.periodic_word().is_some() {
        match davenport_periodic(beta, alpha, PERIOD_SEARCH_STEPS) {
            Ok(word) if word.is_eventually_zero() => return homogeneous(alpha, depth),
            Ok(word) => {
                let limits = exact_periodic(&word, alpha)?;
                return Ok(SpectrumEstimate::exact(limits.value, depth, false));
            }
            Err(Error::NotEventuallyPeriodic) => {}
            Err(e) => return Err(e),
        }
    }
    let t = match trace(beta, alpha, depth) {
        Ok(t) => t,
        Err(Error::FiniteSupport { .. }) => return homogeneous(alpha, depth),
        Err(e) => return Err(e),
    };
    let half = (depth / 2).max(1);
    let upper = (half..=depth)
        .map(|n| t.level(n).lambda.clone().min(t.level(n).rho.clone()))
        .min()
        .expect("nonempty range");
    // Shifting β by up to D_depth moves each λ_n, ρ_n with n ≥ half by at most
    // q_nD_n·D_depth/D_half.
    let d_depth = alpha.d(depth)?;
    let d_half = alpha.d(half)?;
    let mut slack = Surd::zero();
    for n in half..=depth {
        let scale = alpha.d(n)?.mul_int(alpha.q(n)?);
        slack = slack.max(scale);
    }
    let slack = &(&slack * &d_depth) / &d_half;
    let raw = &upper - &slack;
    let lower = if raw.is_negative() {
        Surd::zero()
    } else {
        round_down(&raw)
    };
    Ok(SpectrumEstimate {
        lower,
        upper,
        depth_used: depth,
        method: Method::Formula,
        routed_homogeneous: false,
    })
}

fn round_down(x: &Surd) -> Surd {
    Surd::from_ratio(x.floor_scaled(BOUND_BITS), BigInt::from(1) << BOUND_BITS)
}

/// `ℳ(α,β) = min(ℳ₊(α,β), ℳ₊(α,−β))`.
pub fn two_sided(beta: &Surd, alpha: &NcfExpansion, depth: usize) -> Result<SpectrumEstimate> {
    let plus = mplus_truncated(beta, alpha, depth)?;
    let mirrored = if beta.is_zero() {
        Surd::zero()
    } else {
        &Surd::one() - beta
    };
    let minus = mplus_truncated(&mirrored, alpha, depth)?;
    let method = if plus.method == Method::ExactPeriodic && minus.method == Method::ExactPeriodic {
        Method::ExactPeriodic
    } else {
        Method::Formula
    };
    Ok(SpectrumEstimate {
        lower: plus.lower.clone().min(minus.lower.clone()),
        upper: plus.upper.clone().min(minus.upper.clone()),
        depth_used: depth,
        method,
        routed_homogeneous: plus.routed_homogeneous && minus.routed_homogeneous,
    })
}
