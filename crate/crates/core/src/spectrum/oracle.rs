//! Brute-force `min q‖qα − β‖` over dyadic windows of `q`.
//!
//! Every `q` is exact and `α`, `β` are held as 128-bit fixed-point
//! enclosures, so each window minimum comes with a certified lower and upper
//! end. Windows are split into chunks and scanned in parallel.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::trace::{count_distance, level_lower_bound, trace};
use crate::error::{Error, Result};
use crate::ncf::NcfExpansion;
use crate::numerics::fixed::{scaled_dist, FracEnclosure, U256};
use crate::numerics::{RealHandle, Surd};
use crate::par::{self, Execution};

/// Bits requested from the inputs before rounding to 128-bit fixed point.
const INPUT_BITS: u32 = 160;
const CHUNK: u64 = 1 << 15;

/// `min q‖qα − β‖` over `q_lo ≤ q ≤ q_hi`, enclosed in `[min_lo, min_hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleWindow {
    pub q_lo: u64,
    pub q_hi: u64,
    pub min_lo: BigRational,
    pub min_hi: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleTable {
    pub windows: Vec<OracleWindow>,
}

impl OracleTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("q_window_lo,q_window_hi,min_value_lo,min_value_hi\n");
        for w in &self.windows {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                w.q_lo,
                w.q_hi,
                decimal(&w.min_lo, 18, false),
                decimal(&w.min_hi, 18, true)
            );
        }
        out
    }

    /// `[min, max]` of the window minima over the last `late` full windows.
    pub fn bracket(&self, late: usize) -> Option<(BigRational, BigRational)> {
        let full: Vec<&OracleWindow> = self.windows.iter().filter(|w| w.q_hi + 1 == 2 * w.q_lo).collect();
        let tail = &full[full.len().saturating_sub(late.max(1))..];
        let lo = tail.iter().map(|w| w.min_lo.clone()).min()?;
        let hi = tail.iter().map(|w| w.min_hi.clone()).max()?;
        Some((lo, hi))
    }

    /// The bracket over the upper half (on a log scale) of the full windows.
    ///
    /// A window whose range misses every near-minimal `q` reports a minimum
    /// above the liminf, and one that catches them reports a value close to
    /// it, so both ends need several periods of the level structure.
    pub fn late_bracket(&self) -> Option<(BigRational, BigRational)> {
        let full = self.windows.iter().filter(|w| w.q_hi + 1 == 2 * w.q_lo).count();
        self.bracket(full.div_ceil(2))
    }
}

/// Decimal rendering rounded outward.
fn decimal(x: &BigRational, digits: usize, up: bool) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = x * BigRational::from_integer(scale.clone());
    let n = if up { scaled.ceil() } else { scaled.floor() }.to_integer();
    let int = &n / &scale;
    let frac = &n % &scale;
    format!("{int}.{:0>width$}", frac.to_string(), width = digits)
}

fn enclose(x: &RealHandle) -> Result<FracEnclosure> {
    let (lo, hi) = x.enclosure(INPUT_BITS)?;
    FracEnclosure::from_bounds(&lo, &hi)
}

fn window_min(alpha: &FracEnclosure, beta: &FracEnclosure, qs: std::ops::Range<u64>) -> (U256, U256) {
    let mut best = (U256::MAX, U256::MAX);
    for q in qs {
        let (lo, hi) = scaled_dist(q, alpha, beta);
        if lo < best.0 {
            best.0 = lo;
        }
        if hi < best.1 {
            best.1 = hi;
        }
    }
    best
}

fn scan(exec: Execution, alpha: &FracEnclosure, beta: &FracEnclosure, lo: u64, hi: u64) -> (U256, U256) {
    par::reduce_chunks(
        exec,
        lo..hi + 1,
        CHUNK,
        (U256::MAX, U256::MAX),
        |r| window_min(alpha, beta, r),
        |a, b| (a.0.min(b.0), a.1.min(b.1)),
    )
}

/// Window minima of `q‖qα − β‖` for `q` in `[2^j, 2^{j+1})`, up to `qmax`.
pub fn mplus_oracle(beta: &RealHandle, alpha: &NcfExpansion, qmax: u64, exec: Execution) -> Result<OracleTable> {
    alpha.require_infinite()?;
    if qmax == 0 {
        return Err(Error::OutOfRange("qmax must be at least 1".into()));
    }
    if qmax > 1 << 40 {
        return Err(Error::OutOfRange(
            "qmax above 2^40 is outside the fixed-point range".into(),
        ));
    }
    let a = enclose(alpha.source())?;
    let b = enclose(beta)?;
    let mut windows = Vec::new();
    let mut lo = 1u64;
    while lo <= qmax {
        let hi = (2 * lo - 1).min(qmax);
        let (min_lo, min_hi) = scan(exec, &a, &b, lo, hi);
        windows.push(OracleWindow {
            q_lo: lo,
            q_hi: hi,
            min_lo: min_lo.to_rational(),
            min_hi: min_hi.to_rational(),
        });
        lo *= 2;
    }
    Ok(OracleTable { windows })
}

/// Result of comparing the level bound with exhaustive minima.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GdaReport {
    pub levels_checked: usize,
    pub q_checked: u64,
    /// `q` values the fixed-point screen could not decide.
    pub exact_fallbacks: u64,
    /// `(n, q)` pairs with `q‖qα − β‖` below the level bound.
    pub violations: Vec<(usize, u64)>,
}

/// Checks `q‖qα − β‖ ≥ min{λ_n, ρ_n, λ_{n+1}, ρ_{n+1}}` for every
/// `q_n ≤ q < q_{n+1}` and `n ≤ levels`.
pub fn gda_check(beta: &Surd, alpha: &NcfExpansion, levels: usize, exec: Execution) -> Result<GdaReport> {
    let t = trace(beta, alpha, levels + 1)?;
    let alpha_value = alpha.exact_value("level bound check")?;
    let a = enclose(alpha.source())?;
    let b = enclose(&RealHandle::from_surd(beta.clone()))?;
    let mut report = GdaReport::default();
    for n in 1..=levels {
        let q_lo = alpha
            .q(n)?
            .to_u64()
            .ok_or_else(|| Error::OutOfRange("q_n above u64".into()))?;
        let q_hi = alpha
            .q(n + 1)?
            .to_u64()
            .ok_or_else(|| Error::OutOfRange("q_n above u64".into()))?;
        if q_hi > 1 << 40 {
            return Err(Error::OutOfRange("level too deep for the fixed-point scan".into()));
        }
        let bound = level_lower_bound(&t, n);
        let cut = bound.floor_scaled(128);
        // The screen passes when the certified lower end is at least
        // floor(bound·2^128) + 1, which implies the value exceeds the bound.
        let threshold = U256::from_bigint(&(BigInt::one() + &cut)).unwrap_or(U256::MAX);
        let (checked, suspects) = par::reduce_chunks(
            exec,
            q_lo..q_hi,
            CHUNK,
            (0u64, Vec::new()),
            |r| {
                let mut s = Vec::new();
                let count = r.end - r.start;
                for q in r {
                    let (lo, _) = scaled_dist(q, &a, &b);
                    if lo < threshold {
                        s.push(q);
                    }
                }
                (count, s)
            },
            |mut x, y| {
                x.0 += y.0;
                x.1.extend(y.1);
                x
            },
        );
        report.q_checked += checked;
        report.exact_fallbacks += suspects.len() as u64;
        for q in suspects {
            if count_distance(&BigInt::from(q), &alpha_value, beta) < bound {
                report.violations.push((n, q));
            }
        }
        report.levels_checked += 1;
    }
    Ok(report)
}
