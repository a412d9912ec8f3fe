//! Hall's ray: explicit `β` realizing `ℳ₊(α,β) = e·f·D⁺_r/(1 − α⁻α⁺)` and the
//! chain of intervals those values fill.

pub mod chain;
pub mod glue;
pub mod limits;
pub mod trace;

use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cantor::{Dissection, DissectionNode, SetKind};
use crate::error::{Error, Result};
use crate::expansions::SurdInterval;
use crate::numerics::Surd;
use crate::par::Execution;
use crate::spectrum::mplus_oracle;
use crate::word::PeriodicWord;

pub use chain::{chain_at, chain_from, ray_chain, ChainLink, ChainReport};
pub use glue::{glue_beta, GluedBeta, Window};
pub use limits::{limit_pair, LimitPair, SchedulePolicy};
pub use trace::{beta_enclosure, lambda_trace, target_value, LambdaPoint, LambdaTrace};

fn nonempty_children(diss: &Dissection, node: &DissectionNode) -> Result<Vec<DissectionNode>> {
    Ok(diss.children(node)?.into_iter().filter(|c| !c.is_empty()).collect())
}

/// Walks `depth` levels down, taking the first nonempty child (or the last
/// when `last` is set) at every step.
fn walk(diss: &Dissection, depth: usize, last: bool) -> Result<DissectionNode> {
    let pick = |mut v: Vec<DissectionNode>| {
        if last {
            v.pop()
        } else {
            v.into_iter().next()
        }
    };
    let roots: Vec<DissectionNode> = diss.roots()?.into_iter().filter(|c| !c.is_empty()).collect();
    let mut node = pick(roots).ok_or(Error::EmptyNode)?;
    for _ in 0..depth {
        node = pick(nonempty_children(diss, &node)?).ok_or(Error::EmptyNode)?;
    }
    Ok(node)
}

/// A concrete pair of set elements to glue: the lower end of the leftmost
/// `E(α⁻,s)` node and the upper end of the rightmost `F(α⁺_{r+1},s)` node at
/// the given depth.
pub fn witness_words(pair: &LimitPair, r: usize, s: usize, depth: usize) -> Result<(PeriodicWord, PeriodicWord)> {
    let e_diss = Dissection::new(SetKind::E, &pair.alpha_minus, s)?;
    let f_diss = Dissection::new(SetKind::F, &pair.alpha_plus.shifted(r)?, s)?;
    let (e, _) = e_diss.endpoint_words(&walk(&e_diss, depth, false)?)?;
    let (_, f) = f_diss.endpoint_words(&walk(&f_diss, depth, true)?)?;
    Ok((e, f))
}

/// Brute-force minima of `q‖qα − β‖` against the target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleCheck {
    pub qmax: u64,
    /// Certified lower end of the smallest window minimum.
    pub min_lo: BigRational,
    pub late_bracket: Option<(BigRational, BigRational)>,
    pub tolerance: Surd,
    /// No window minimum falls below `target − tolerance`.
    pub holds: bool,
}

/// Scans `q ≤ qmax` with `β` enclosed by its generated digits; the tolerance
/// is the error bound at the last traced point.
pub fn oracle_check(
    glued: &GluedBeta,
    pair: &LimitPair,
    lambda: &LambdaTrace,
    qmax: u64,
    exec: Execution,
) -> Result<OracleCheck> {
    let (lo, hi) = beta_enclosure(glued, &pair.alpha)?;
    let beta = SurdInterval { lo, hi }.to_handle();
    let table = mplus_oracle(&beta, &pair.alpha, qmax, exec)?;
    let min_lo = table
        .windows
        .iter()
        .map(|w| w.min_lo.clone())
        .min()
        .ok_or_else(|| Error::OutOfRange("empty oracle table".into()))?;
    let tolerance = lambda
        .points
        .last()
        .map(|p| p.bound.clone())
        .ok_or_else(|| Error::ScheduleTooTight("no traced point".into()))?;
    let floor = &lambda.target - &tolerance;
    Ok(OracleCheck {
        qmax,
        holds: Surd::from_rational(&min_lo) >= floor,
        min_lo,
        late_bracket: table.late_bracket(),
        tolerance,
    })
}

/// Everything the `construct` and `chain` commands print.
#[derive(Clone, Debug)]
pub struct HallRayReport {
    pub r: usize,
    pub s: usize,
    pub glued: GluedBeta,
    pub lambda: LambdaTrace,
    pub oracle: Option<OracleCheck>,
    pub chain: Option<ChainReport>,
}

impl HallRayReport {
    pub fn to_json(&self, digits: usize) -> Value {
        let oracle = self.oracle.as_ref().map(|o| {
            json!({
                "qmax": o.qmax,
                "minLo": o.min_lo.to_string(),
                "lateBracket": o.late_bracket.as_ref().map(|(a, b)| json!([a.to_string(), b.to_string()])),
                "tolerance": format!("{:e}", o.tolerance.to_f64()),
                "holds": o.holds,
            })
        });
        json!({
            "r": self.r,
            "s": self.s,
            "target": self.lambda.target.to_decimal(digits),
            "beta": self.glued.to_json(),
            "lambdaTrace": self.lambda.to_json(digits)["points"],
            "oracleBracket": oracle,
            "chain": self.chain.as_ref().map(|c| c.to_json(digits)),
        })
    }
}

/// Glues `β` for the given words, traces `λ_{K(i)}` and optionally runs the
/// oracle up to `qmax`.
pub fn construct(
    pair: &LimitPair,
    e: &PeriodicWord,
    f: &PeriodicWord,
    r: usize,
    s: usize,
    qmax: Option<u64>,
    exec: Execution,
) -> Result<HallRayReport> {
    let glued = glue_beta(e, f, r, s, pair)?;
    let lambda = lambda_trace(&glued, pair, exec)?;
    let oracle = match qmax {
        Some(q) => Some(oracle_check(&glued, pair, &lambda, q, exec)?),
        None => None,
    };
    Ok(HallRayReport {
        r,
        s,
        glued,
        lambda,
        oracle,
        chain: None,
    })
}
