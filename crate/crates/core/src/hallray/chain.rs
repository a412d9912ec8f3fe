//! The intervals `[P₁, P₂]·D⁺_r/(1 − α⁻α⁺)` for consecutive `r` and whether
//! neighbours overlap.

use std::ops::RangeInclusive;

use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cantor::product_window;
use crate::error::{Error, Result};
use crate::numerics::Surd;

use super::limits::LimitPair;

/// Largest `s` tried when searching for a chain that overlaps throughout.
const MAX_S: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainLink {
    pub r: usize,
    pub s: usize,
    pub lo: Surd,
    pub hi: Surd,
    /// Both overlap inequalities with the interval for `r + 1` hold.
    pub overlaps_next: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub s0: usize,
    pub r0: usize,
    pub links: Vec<ChainLink>,
    pub all_overlap: bool,
    /// `hi` strictly decreases from the second link on.
    pub right_ends_decreasing: bool,
    /// `[lo of the last link, hi of the first]` when every link overlaps.
    pub covered: Option<(Surd, Surd)>,
}

impl ChainReport {
    pub fn to_json(&self, digits: usize) -> Value {
        json!({
            "s0": self.s0,
            "r0": self.r0,
            "allOverlap": self.all_overlap,
            "rightEndsDecreasing": self.right_ends_decreasing,
            "covered": self.covered.as_ref().map(|(lo, hi)| json!([lo.to_decimal(digits), hi.to_decimal(digits)])),
            "chain": self.links.iter().map(|l| json!({
                "r": l.r,
                "s": l.s,
                "lo": l.lo.to_decimal(digits),
                "hi": l.hi.to_decimal(digits),
                "overlapsNext": l.overlaps_next,
            })).collect::<Vec<_>>(),
        })
    }
}

struct Params {
    n: usize,
    l: usize,
    ratio: BigRational,
}

impl Params {
    fn of(pair: &LimitPair) -> Result<Self> {
        let b = pair.alpha.structural_bounds()?;
        Ok(Params {
            n: b.two_run_bound as usize,
            l: b.zero_block_factor.max(1) as usize,
            ratio: b.ratio,
        })
    }

    fn s_of(&self, r: usize) -> usize {
        r / self.l
    }

    /// `R^{2s} ≤ (1 − R^{s−N})²·(1 − R^{s′−N})·t` and
    /// `R^{2s′}·t ≤ (1 − R^{s′−N})²·(1 − R^{s−N})` with `t = α⁺_{r+1}`.
    fn overlap(&self, s: usize, s_next: usize, t: &Surd) -> bool {
        let pow = |e: usize| Surd::from_rational(&num_traits::pow(self.ratio.clone(), e));
        let one = Surd::one();
        let gap = &one - &pow(s - self.n);
        let gap_next = &one - &pow(s_next - self.n);
        let upper = &pow(2 * s_next) * t <= &(&gap_next * &gap_next) * &gap;
        let lower = pow(2 * s) <= &(&(&gap * &gap) * &gap_next) * t;
        upper && lower
    }
}

fn interval(pair: &LimitPair, p: &Params, r: usize, junction: &Surd) -> Result<(usize, Surd, Surd)> {
    let s = p.s_of(r);
    let w = product_window(p.n, s)?;
    if !w.nonempty {
        return Err(Error::OutOfRange(format!("P₁ > P₂ at s = {s}")));
    }
    let scale = &pair.d_plus(r)? * junction;
    Ok((
        s,
        &Surd::from_rational(&w.p1) * &scale,
        &Surd::from_rational(&w.p2) * &scale,
    ))
}

/// One link per `r` in the range, with `s = ⌊r/L⌋`. Every `s` must exceed `N`
/// and give a nonempty window.
pub fn ray_chain(pair: &LimitPair, r_range: RangeInclusive<usize>) -> Result<Vec<ChainLink>> {
    let p = Params::of(pair)?;
    let junction = pair.junction_factor()?;
    let mut links = Vec::new();
    for r in r_range {
        let (s, lo, hi) = interval(pair, &p, r, &junction)?;
        let s_next = p.s_of(r + 1);
        let t = pair.alpha_plus.alpha_i(r + 1)?;
        links.push(ChainLink {
            r,
            s,
            lo,
            hi,
            overlaps_next: p.overlap(s, s_next, &t),
        });
    }
    Ok(links)
}

fn report(s0: usize, r0: usize, links: Vec<ChainLink>) -> ChainReport {
    let all_overlap = links.iter().all(|l| l.overlaps_next);
    let right_ends_decreasing = links
        .iter()
        .skip(1)
        .collect::<Vec<_>>()
        .windows(2)
        .all(|w| w[1].hi < w[0].hi);
    let covered =
        (all_overlap && !links.is_empty()).then(|| (links.last().expect("nonempty").lo.clone(), links[0].hi.clone()));
    ChainReport {
        s0,
        r0,
        links,
        all_overlap,
        right_ends_decreasing,
        covered,
    }
}

/// Raises `s₀` from `s_min` until every link for `r ∈ [s₀L, s₀L + count]`
/// overlaps its successor, and reports that chain.
pub fn chain_from(pair: &LimitPair, s_min: usize, count: usize) -> Result<ChainReport> {
    let p = Params::of(pair)?;
    for s0 in s_min.max(p.n + 1)..=MAX_S {
        if !product_window(p.n, s0)?.nonempty {
            continue;
        }
        let r0 = s0 * p.l;
        let links = ray_chain(pair, r0..=r0 + count)?;
        if links.iter().all(|l| l.overlaps_next) {
            return Ok(report(s0, r0, links));
        }
    }
    Err(Error::OutOfRange(format!("no s ≤ {MAX_S} gives an overlapping chain")))
}

/// The chain starting at `r0` exactly, whether or not it overlaps.
pub fn chain_at(pair: &LimitPair, r0: usize, count: usize) -> Result<ChainReport> {
    let p = Params::of(pair)?;
    let links = ray_chain(pair, r0..=r0 + count)?;
    Ok(report(p.s_of(r0), r0, links))
}

#[cfg(test)]
fn endpoint_overlap(a: &ChainLink, b: &ChainLink) -> bool {
    b.lo <= a.hi && a.lo <= b.hi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hallray::limits::{limit_pair, SchedulePolicy};
    use crate::ncf::NcfExpansion;

    fn pair_of(period: &[u32]) -> LimitPair {
        let alpha = NcfExpansion::periodic(&[], period).unwrap();
        limit_pair(&alpha, SchedulePolicy::default()).unwrap()
    }

    #[test]
    fn flags_agree_with_endpoint_comparison() {
        for period in [&[5, 3][..], &[3, 2, 2], &[4, 2, 3]] {
            let pair = pair_of(period);
            let p = Params::of(&pair).unwrap();
            let s = (p.n + 1..).find(|&s| product_window(p.n, s).unwrap().nonempty).unwrap();
            let r0 = s * p.l;
            let links = ray_chain(&pair, r0..=r0 + 25).unwrap();
            for w in links.windows(2) {
                assert_eq!(w[0].overlaps_next, endpoint_overlap(&w[0], &w[1]), "r = {}", w[0].r);
            }
        }
    }

    #[test]
    fn five_three_chain_overlaps_from_a_raised_start() {
        let pair = pair_of(&[5, 3]);
        let rep = chain_from(&pair, 1, 20).unwrap();
        assert!(rep.all_overlap);
        assert!(rep.right_ends_decreasing);
        assert_eq!(rep.links.len(), 21);
        assert!(rep.covered.is_some());
        // The smallest admissible start does not overlap everywhere.
        let early = chain_at(&pair, 2 * 9, 20).unwrap();
        assert!(!early.all_overlap);
        assert!(rep.s0 > 2);
    }

    #[test]
    fn links_shrink_towards_zero() {
        let pair = pair_of(&[3, 2, 2]);
        let rep = chain_from(&pair, 1, 40).unwrap();
        let shrink = &rep.links.last().unwrap().hi / &rep.links[0].hi;
        assert!(shrink.to_f64() < 1e-3, "{}", shrink.to_f64());
    }

    #[test]
    fn small_s_is_rejected() {
        let pair = pair_of(&[5, 3]);
        assert!(ray_chain(&pair, 9..=12).is_err());
    }

    #[test]
    fn interval_matches_the_window() {
        let pair = pair_of(&[5, 3]);
        let link = &ray_chain(&pair, 27..=27).unwrap()[0];
        let w = product_window(1, 3).unwrap();
        let scale = &pair.d_plus(27).unwrap() * &pair.junction_factor().unwrap();
        assert_eq!(link.s, 3);
        assert_eq!(link.lo, &Surd::from_rational(&w.p1) * &scale);
        assert_eq!(link.hi, &Surd::from_rational(&w.p2) * &scale);
        assert!(link.lo < link.hi);
    }
}
