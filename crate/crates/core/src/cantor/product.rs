//! The interval `[P₁, P₂]` inside `E(α⁻,s)·F(α⁺,s)` and a constructive search
//! for a factorization of a given target.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use super::dissection::{Dissection, DissectionNode};
use super::SetKind;
use crate::error::{Error, Result};
use crate::ncf::NcfExpansion;
use crate::numerics::Surd;
use crate::word::PeriodicWord;

/// Nodes the witness search may visit before giving up.
const SEARCH_BUDGET: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductWindow {
    pub p1: BigRational,
    pub p2: BigRational,
    pub s: usize,
    pub n: usize,
    pub ratio: BigRational,
    pub nonempty: bool,
}

/// `P₁ = R^{2s}/(1−R^{s−N})²` and `P₂ = 1 − R^{s−N}` with `R = N/(N+1)`.
pub fn product_window(n: usize, s: usize) -> Result<ProductWindow> {
    if n == 0 || s <= n {
        return Err(Error::OutOfRange(format!("need 1 ≤ N < s, got N = {n}, s = {s}")));
    }
    let ratio = BigRational::new(BigInt::from(n), BigInt::from(n + 1));
    let gap = num_traits::pow(ratio.clone(), s - n);
    let p2 = BigRational::one() - gap;
    let p1 = num_traits::pow(ratio.clone(), 2 * s) / (&p2 * &p2);
    Ok(ProductWindow {
        nonempty: p2 >= p1,
        p1,
        p2,
        s,
        n,
        ratio,
    })
}

/// `e ∈ E(α⁻,s)` and `f ∈ F(α⁺,s)` with `|e·f − target| ≤ error_bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductWitness {
    pub e: PeriodicWord,
    pub f: PeriodicWord,
    pub e_value: Surd,
    pub f_value: Surd,
    pub product: Surd,
    /// Width of the product of the two final intervals.
    pub error_bound: Surd,
    pub nodes_visited: usize,
}

struct Search<'a> {
    e: &'a Dissection,
    f: &'a Dissection,
    target: Surd,
    depth: usize,
    visited: usize,
}

fn contains(a: &DissectionNode, b: &DissectionNode, t: &Surd) -> bool {
    let (alo, ahi) = a.bounds().expect("nonempty");
    let (blo, bhi) = b.bounds().expect("nonempty");
    &(alo * blo) <= t && t <= &(ahi * bhi)
}

/// Whether `a` is longer than `b` on a log scale.
fn log_longer(a: &DissectionNode, b: &DissectionNode) -> bool {
    let (alo, ahi) = a.bounds().expect("nonempty");
    let (blo, bhi) = b.bounds().expect("nonempty");
    ahi * blo >= bhi * alo
}

impl Search<'_> {
    fn descend(&mut self, e: DissectionNode, f: DissectionNode) -> Result<Option<(DissectionNode, DissectionNode)>> {
        self.visited += 1;
        if self.visited > SEARCH_BUDGET {
            return Err(Error::TargetUnreachable { index: self.depth });
        }
        let e_done = e.level() >= self.depth;
        let f_done = f.level() >= self.depth;
        if e_done && f_done {
            return Ok(Some((e, f)));
        }
        let split_e = !e_done && (f_done || log_longer(&e, &f));
        if split_e {
            for child in self.e.children(&e)?.into_iter().filter(|c| !c.is_empty()) {
                if contains(&child, &f, &self.target) {
                    if let Some(found) = self.descend(child, f.clone())? {
                        return Ok(Some(found));
                    }
                }
            }
        } else {
            for child in self.f.children(&f)?.into_iter().filter(|c| !c.is_empty()) {
                if contains(&e, &child, &self.target) {
                    if let Some(found) = self.descend(e.clone(), child)? {
                        return Ok(Some(found));
                    }
                }
            }
        }
        Ok(None)
    }
}

/// Descends both dissections to `depth` digits, keeping the target inside
/// the product of the current intervals, and returns the lower endpoints of
/// the final pair.
pub fn product_contains_interval_witness(
    alpha_minus: &NcfExpansion,
    alpha_plus: &NcfExpansion,
    s: usize,
    target: &BigRational,
    depth: usize,
) -> Result<ProductWitness> {
    let n = (alpha_minus.structural_bounds()?.two_run_bound).max(alpha_plus.structural_bounds()?.two_run_bound);
    let window = product_window(n as usize, s)?;
    if target < &window.p1 || target > &window.p2 || !target.is_positive() {
        return Err(Error::TargetOutsideWindow);
    }
    let e = Dissection::new(SetKind::E, alpha_minus, s)?;
    let f = Dissection::new(SetKind::F, alpha_plus, s)?;
    let mut search = Search {
        e: &e,
        f: &f,
        target: Surd::from_rational(target),
        depth,
        visited: 0,
    };
    let f_root = f.roots()?.remove(0);
    for e_root in e.roots()?.into_iter().filter(|r| !r.is_empty()) {
        if f_root.is_empty() || !contains(&e_root, &f_root, &search.target) {
            continue;
        }
        if let Some((en, fn_)) = search.descend(e_root, f_root.clone())? {
            let (e_word, _) = e.endpoint_words(&en)?;
            let (f_word, _) = f.endpoint_words(&fn_)?;
            let (elo, ehi) = en.bounds().expect("nonempty");
            let (flo, fhi) = fn_.bounds().expect("nonempty");
            return Ok(ProductWitness {
                e: e_word,
                f: f_word,
                product: elo * flo,
                error_bound: &(ehi * fhi) - &(elo * flo),
                e_value: elo.clone(),
                f_value: flo.clone(),
                nodes_visited: search.visited,
            });
        }
    }
    Err(Error::TargetUnreachable { index: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cantor::{membership_e, membership_f};

    #[test]
    fn window_for_n1_s10() {
        let w = product_window(1, 10).unwrap();
        let p2 = BigRational::new(511.into(), 512.into());
        assert_eq!(w.p2, p2);
        let p1 = BigRational::new(1.into(), BigInt::from(1u64 << 20)) / (&p2 * &p2);
        assert_eq!(w.p1, p1);
        assert!(w.nonempty);
        assert_eq!(w.ratio, BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn window_for_n1_s20_is_wide() {
        let w = product_window(1, 20).unwrap();
        let tiny = BigRational::new(1.into(), BigInt::from(10u64).pow(10));
        assert!(w.p1 < tiny && tiny < w.p2);
    }

    #[test]
    fn small_s_window_can_be_empty() {
        // N = 3, s = 4: R^8 against (1 − R)² with R = 3/4.
        let w = product_window(3, 4).unwrap();
        assert!(!w.nonempty);
        assert!(product_window(2, 2).is_err());
    }

    fn five_three() -> NcfExpansion {
        NcfExpansion::periodic(&[], &[5, 3]).unwrap()
    }

    #[test]
    fn witness_for_interior_target() {
        let (am, ap) = (NcfExpansion::periodic(&[], &[3, 5]).unwrap(), five_three());
        let target = BigRational::new(1.into(), 3.into());
        let w = product_contains_interval_witness(&am, &ap, 6, &target, 8).unwrap();
        assert!(membership_e(&w.e, &am, 6, 100).unwrap());
        assert!(membership_f(&w.f, &ap, 6, 100).unwrap());
        assert_eq!(w.product, &w.e_value * &w.f_value);
        let gap = (&w.product - &Surd::from_rational(&target)).abs();
        assert!(gap <= w.error_bound);
        assert!(w.error_bound.to_f64() < 1e-3);
    }

    #[test]
    fn witness_at_top_of_window() {
        let ap = five_three();
        let win = product_window(1, 6).unwrap();
        let w = product_contains_interval_witness(&ap, &ap, 6, &win.p2, 6).unwrap();
        let gap = (&w.product - &Surd::from_rational(&win.p2)).abs();
        assert!(gap <= w.error_bound);
    }

    #[test]
    fn target_below_window_is_rejected() {
        let ap = five_three();
        let win = product_window(1, 6).unwrap();
        let below = &win.p1 / BigRational::from_integer(2.into());
        assert_eq!(
            product_contains_interval_witness(&ap, &ap, 6, &below, 4).err(),
            Some(Error::TargetOutsideWindow)
        );
    }
}
