//! Ostrowski numeration of integers and Davenport expansions of reals.
//!
//! Both systems share one forbidden pattern: a block `aᵢ−1, a_{i+1}−2, …,
//! a_{j−1}−2, a_j−1` with `j > i`. [`forbidden_block_at`] finds it in either.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ncf::NcfExpansion;
use crate::numerics::real::{rational_floor, Interval};
use crate::numerics::{RealHandle, Surd};
use crate::word::PeriodicWord;

/// Steps spent looking for a repeated Davenport state.
pub const PERIOD_SEARCH_STEPS: usize = 4096;

/// Coefficients `c₁, …, cₙ` with `q = Σ c_k q_{k−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OstrowskiExpansion {
    pub coefficients: Vec<u32>,
}

impl OstrowskiExpansion {
    pub fn value(&self, alpha: &NcfExpansion) -> Result<BigInt> {
        let mut total = BigInt::zero();
        for (k, &c) in self.coefficients.iter().enumerate() {
            total += alpha.q(k)? * c;
        }
        Ok(total)
    }
}

/// Greedy Ostrowski expansion of `q ≥ 1`.
pub fn ostrowski(q: &BigInt, alpha: &NcfExpansion) -> Result<OstrowskiExpansion> {
    if !q.is_positive() {
        return Err(Error::InvalidInput("Ostrowski expansion needs q ≥ 1".into()));
    }
    let n = alpha.level_of(q)? + 1;
    let mut coefficients = vec![0u32; n];
    let mut rem = q.clone();
    for k in (1..=n).rev() {
        let base = alpha.q(k - 1)?;
        let (c, r) = rem.div_rem(&base);
        coefficients[k - 1] = c.to_u32().expect("coefficient below a_k");
        rem = r;
    }
    Ok(OstrowskiExpansion { coefficients })
}

/// Start of the first forbidden block `aᵢ−1, (a−2)…, a_j−1` (`j > i`) in
/// `digits`, reported as `(i, j)` with 1-based indices.
pub fn forbidden_block_at(digits: &[u32], alpha: &NcfExpansion) -> Result<Option<(usize, usize)>> {
    let mut open: Option<usize> = None;
    for (idx, &c) in digits.iter().enumerate() {
        let k = idx + 1;
        let a = alpha.digit(k)?;
        if c == a - 1 {
            if let Some(i) = open {
                return Ok(Some((i, k)));
            }
            open = Some(k);
        } else if c + 2 != a {
            open = None;
        }
    }
    Ok(None)
}

fn digits_in_bounds(digits: &[u32], alpha: &NcfExpansion) -> Result<bool> {
    for (idx, &c) in digits.iter().enumerate() {
        if c >= alpha.digit(idx + 1)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `c` is an admissible Ostrowski coefficient vector.
pub fn ostrowski_validate(c: &[u32], alpha: &NcfExpansion) -> Result<bool> {
    match c.last() {
        None | Some(0) => return Ok(false),
        _ => {}
    }
    Ok(digits_in_bounds(c, alpha)? && forbidden_block_at(c, alpha)?.is_none())
}

/// A closed interval with quadratic-surd endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurdInterval {
    pub lo: Surd,
    pub hi: Surd,
}

impl SurdInterval {
    pub fn point(x: Surd) -> Self {
        SurdInterval { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> Surd {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Surd) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn to_handle(&self) -> RealHandle {
        if self.lo == self.hi {
            return RealHandle::from_surd(self.lo.clone());
        }
        let bits = 256;
        let scale = BigInt::one() << bits;
        let lo = BigRational::new(self.lo.floor_scaled(bits), scale.clone());
        let hi = BigRational::new(self.hi.floor_scaled(bits) + 1, scale);
        RealHandle::Approx(Interval::new(lo, hi).expect("ordered endpoints"))
    }
}

/// A prefix of the Davenport digits of `β` relative to `α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DavenportDigits {
    pub digits: Vec<u32>,
    /// Number of digits after which every digit vanishes, when known.
    pub finite_support: Option<usize>,
    /// Exact residual `β_{n+1}` after the last listed digit.
    pub residual: Option<Surd>,
    /// The full digit word, when it was recognized as eventually periodic.
    pub periodic: Option<PeriodicWord>,
}

impl DavenportDigits {
    /// Digit `b_k` (1-based), zero beyond a known finite support.
    pub fn get(&self, k: usize) -> Option<u32> {
        if let Some(w) = &self.periodic {
            return Some(w.get(k - 1));
        }
        if let Some(&b) = self.digits.get(k - 1) {
            return Some(b);
        }
        self.finite_support.map(|_| 0)
    }

    pub fn to_json(&self, alpha: &NcfExpansion) -> Value {
        let alpha_ref = match alpha.periodic_word() {
            Some(w) => json!({"preperiod": w.preperiod, "period": w.period}),
            None => json!(alpha.source()),
        };
        json!({
            "alpha": alpha_ref,
            "digits": self.digits,
            "finiteSupport": self.finite_support,
            "periodic": self.periodic.as_ref().map(|w| json!({"preperiod": w.preperiod, "period": w.period})),
        })
    }
}

/// Exact Davenport recursion `b_i = ⌊β_i/α_i⌋`, `β_{i+1} = β_i/α_i − b_i`.
pub struct DavenportRecursion<'a> {
    alpha: &'a NcfExpansion,
    beta: Surd,
    index: usize,
}

impl<'a> DavenportRecursion<'a> {
    pub fn new(beta: Surd, alpha: &'a NcfExpansion) -> Self {
        DavenportRecursion { alpha, beta, index: 1 }
    }

    /// The current residual `β_i`, where `i` is the index of the next digit.
    pub fn residual(&self) -> &Surd {
        &self.beta
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// Produces `b_i` and advances to `β_{i+1}`.
    pub fn step(&mut self) -> Result<u32> {
        let ratio = &self.beta / &self.alpha.alpha_i(self.index)?;
        let b = ratio.floor();
        self.beta = &ratio - &Surd::from_int(b.clone());
        self.index += 1;
        b.to_u32()
            .ok_or_else(|| Error::OutOfRange("Davenport digit out of range".into()))
    }
}

fn check_unit(beta: &RealHandle) -> Result<()> {
    let zero = BigRational::zero();
    let one = BigRational::one();
    if crate::numerics::compare(beta, &zero)? == Ordering::Less
        || crate::numerics::compare(beta, &one)? != Ordering::Less
    {
        return Err(Error::OutOfRange("beta must lie in [0,1)".into()));
    }
    Ok(())
}

fn shares_field(x: &Surd, y: &Surd) -> bool {
    match (x.radicand(), y.radicand()) {
        (Some(a), Some(b)) => a == b,
        _ => true,
    }
}

/// The first `n` Davenport digits of `β ∈ [0,1)` relative to `α`.
pub fn davenport_digits(beta: &RealHandle, alpha: &NcfExpansion, n: usize) -> Result<DavenportDigits> {
    check_unit(beta)?;
    let alpha_value = alpha.exact_value("Davenport digits")?;
    if let Some(b) = beta.exact().filter(|b| shares_field(b, &alpha_value)) {
        return exact_digits(b, alpha, n);
    }
    interval_digits(beta, alpha, n)
}

fn exact_digits(beta: Surd, alpha: &NcfExpansion, n: usize) -> Result<DavenportDigits> {
    let mut rec = DavenportRecursion::new(beta, alpha);
    let mut digits = Vec::with_capacity(n);
    let mut finite_support = None;
    if rec.residual().is_zero() {
        finite_support = Some(0);
    }
    while digits.len() < n {
        if finite_support.is_some() {
            digits.push(0);
            continue;
        }
        digits.push(rec.step()?);
        if rec.residual().is_zero() {
            finite_support = Some(digits.len());
        }
    }
    let residual = if finite_support.is_some() {
        Surd::zero()
    } else {
        rec.residual().clone()
    };
    Ok(DavenportDigits {
        digits,
        finite_support,
        residual: Some(residual),
        periodic: None,
    })
}

fn interval_digits(beta: &RealHandle, alpha: &NcfExpansion, n: usize) -> Result<DavenportDigits> {
    let mut bits = 64u32;
    loop {
        let (lo, hi) = beta.enclosure(bits)?;
        let mut x = Surd::from_rational(&lo);
        let mut y = Surd::from_rational(&hi);
        let mut digits = Vec::with_capacity(n);
        for k in 1..=n {
            let a = alpha.alpha_i(k)?;
            let (rx, ry) = (&x / &a, &y / &a);
            let (bx, by) = (rx.floor(), ry.floor());
            if bx != by {
                break;
            }
            x = &rx - &Surd::from_int(bx.clone());
            y = &ry - &Surd::from_int(bx.clone());
            digits.push(bx.to_u32().expect("digit fits u32"));
        }
        if digits.len() == n {
            return Ok(DavenportDigits {
                digits,
                finite_support: None,
                residual: None,
                periodic: None,
            });
        }
        let floor = match beta {
            RealHandle::Approx(iv) => iv.floor_bits(),
            _ => crate::numerics::DEFAULT_FLOOR_BITS,
        };
        if bits >= floor {
            return Err(Error::PrecisionExhausted { floor_bits: floor });
        }
        bits = (bits * 2).min(floor);
    }
}

/// Runs the exact recursion until the state `(phase of i, β_i)` repeats and
/// returns the eventually periodic digit word.
pub fn davenport_periodic(beta: &Surd, alpha: &NcfExpansion, max_steps: usize) -> Result<PeriodicWord> {
    check_unit(&RealHandle::from_surd(beta.clone()))?;
    let value = alpha.exact_value("Davenport digits")?;
    if !shares_field(beta, &value) {
        return Err(Error::NotEventuallyPeriodic);
    }
    let mut rec = DavenportRecursion::new(beta.clone(), alpha);
    let mut seen: HashMap<(usize, Surd), usize> = HashMap::new();
    let mut digits = Vec::new();
    for _ in 0..max_steps {
        if rec.residual().is_zero() {
            return Ok(PeriodicWord::finite(digits).normalized());
        }
        let key = (alpha.phase(rec.index()), rec.residual().clone());
        if let Some(&start) = seen.get(&key) {
            let word = PeriodicWord::new(digits[..start].to_vec(), digits[start..].to_vec())?;
            return Ok(word.normalized());
        }
        seen.insert(key, digits.len());
        digits.push(rec.step()?);
    }
    Err(Error::NotEventuallyPeriodic)
}

/// `Σ_{k≤depth} b_k D_k`, widened by the tail bound `[0, D_depth]` unless the
/// digits are known to stop.
pub fn davenport_sum(d: &DavenportDigits, alpha: &NcfExpansion, depth: usize) -> Result<SurdInterval> {
    let mut total = Surd::zero();
    for k in 1..=depth {
        let b = d
            .get(k)
            .ok_or_else(|| Error::InvalidInput(format!("digit {k} requested beyond the computed prefix")))?;
        if b != 0 {
            total = &total + &alpha.d(k)?.mul_int(b);
        }
    }
    let exact = match (&d.periodic, d.finite_support) {
        (Some(w), _) => w.support_len().is_some_and(|s| s <= depth),
        (None, Some(s)) => s <= depth,
        (None, None) => false,
    };
    if exact {
        return Ok(SurdInterval::point(total));
    }
    let hi = &total + &alpha.d(depth)?;
    Ok(SurdInterval { lo: total, hi })
}

/// Whether a digit word obeys the digit bounds and contains no forbidden
/// block within its first `scan` letters; for periodic words the infinite
/// tail `aᵢ−1, a_{i+1}−2, a_{i+2}−2, …` is also excluded.
pub fn davenport_valid(word: &PeriodicWord, alpha: &NcfExpansion, scan: usize) -> Result<bool> {
    let prefix = word.prefix(scan);
    if !digits_in_bounds(&prefix, alpha)? || forbidden_block_at(&prefix, alpha)?.is_some() {
        return Ok(false);
    }
    Ok(!has_maximal_tail(word, alpha)?)
}

fn has_maximal_tail(word: &PeriodicWord, alpha: &NcfExpansion) -> Result<bool> {
    if word.is_eventually_zero() {
        return Ok(false);
    }
    let Some(aw) = alpha.periodic_word() else {
        return Ok(false);
    };
    let start = word.preperiod.len().max(aw.preperiod.len());
    let p = word.period.len().lcm(&aw.period.len());
    for k in start + 1..=start + p {
        if word.get(k - 1) + 2 != alpha.digit(k)? {
            return Ok(false);
        }
    }
    // The periodic part is all `a−2`; the tail is forbidden iff the last
    // letter before it that is not `a−2` equals `a−1`.
    for k in (1..=start).rev() {
        let (b, a) = (word.get(k - 1), alpha.digit(k)?);
        if b + 2 != a {
            return Ok(b + 1 == a);
        }
    }
    Ok(false)
}

/// Rewrites a digit word to the canonical Davenport digits of its value.
pub fn davenport_canonicalize(word: &PeriodicWord, alpha: &NcfExpansion) -> Result<PeriodicWord> {
    let scan = word.preperiod.len() + 2 * word.period.len() + 2;
    for k in 1..=scan {
        if word.get(k - 1) >= alpha.digit(k)? {
            return Err(Error::NotCanonicalizable(format!("digit {k} exceeds a_k − 1")));
        }
    }
    let value = alpha.weighted_sum(word)?;
    if value.is_negative() || value >= Surd::one() {
        return Err(Error::NotCanonicalizable("the digit word sums to 1 or more".into()));
    }
    davenport_periodic(&value, alpha, PERIOD_SEARCH_STEPS)
}

/// `(q, p)` with `q = Σ b_k q_{k−1}` and `p = Σ b_k p_{k−1}` for a finite
/// digit list.
pub fn lattice_point(digits: &[u32], alpha: &NcfExpansion) -> Result<(BigInt, BigInt)> {
    if digits.iter().all(|&b| b == 0) {
        return Err(Error::ZeroDigits);
    }
    let mut q = BigInt::zero();
    let mut p = BigInt::zero();
    for (idx, &b) in digits.iter().enumerate() {
        if b != 0 {
            q += alpha.q(idx)? * b;
            p += alpha.p(idx)? * b;
        }
    }
    Ok((q, p))
}

/// `(qα − ⌊qα⌋, ⌊qα⌋)` exactly.
pub fn fractional_multiple(q: &BigInt, alpha: &NcfExpansion) -> Result<(Surd, BigInt)> {
    let x = alpha.exact_value("fractional part")?.mul_int(q.clone());
    let p = x.floor();
    Ok((&x - &Surd::from_int(p.clone()), p))
}

/// Floor of a rational, re-exported for callers working with rational β.
pub fn floor_rational(r: &BigRational) -> BigInt {
    rational_floor(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn five_three() -> NcfExpansion {
        NcfExpansion::periodic(&[], &[5, 3]).unwrap()
    }

    fn golden() -> NcfExpansion {
        NcfExpansion::periodic(&[2], &[3]).unwrap()
    }

    #[test]
    fn ostrowski_examples() {
        let g = golden();
        assert_eq!(ostrowski(&7.into(), &g).unwrap().coefficients, vec![0, 1, 1]);
        assert!(ostrowski_validate(&[0, 1, 1], &g).unwrap());
        // q = q_3 = 13 is a single coefficient at index 4.
        assert_eq!(ostrowski(&13.into(), &g).unwrap().coefficients, vec![0, 0, 0, 1]);
        // q_k − 1 = (a₁−2, …, a_{k−1}−2, a_k−1)
        let e = five_three();
        let q4 = e.q(4).unwrap();
        let c = ostrowski(&(q4 - 1), &e).unwrap();
        assert_eq!(c.coefficients, vec![3, 1, 3, 2]);
    }

    #[test]
    fn ostrowski_rejections() {
        let e = five_three();
        assert!(!ostrowski_validate(&[4, 2], &e).unwrap());
        assert!(!ostrowski_validate(&[], &e).unwrap());
        assert!(!ostrowski_validate(&[1, 0], &e).unwrap());
        assert!(!ostrowski_validate(&[5], &e).unwrap());
    }

    #[test]
    fn davenport_of_alpha_and_zero() {
        let e = five_three();
        let d = davenport_digits(e.source(), &e, 4).unwrap();
        assert_eq!(d.digits, vec![1, 0, 0, 0]);
        assert_eq!(d.finite_support, Some(1));
        let z = davenport_digits(&RealHandle::rational(0, 1), &e, 3).unwrap();
        assert_eq!(z.digits, vec![0, 0, 0]);
        assert_eq!(davenport_sum(&z, &e, 3).unwrap(), SurdInterval::point(Surd::zero()));
    }

    #[test]
    fn thirteen_alpha() {
        let e = five_three();
        let (beta, p) = fractional_multiple(&13.into(), &e).unwrap();
        let d = davenport_digits(&RealHandle::from_surd(beta.clone()), &e, 4).unwrap();
        assert_eq!(d.digits, vec![3, 2, 0, 0]);
        assert_eq!(lattice_point(&d.digits, &e).unwrap(), (13.into(), p));
        let s = davenport_sum(&d, &e, 4).unwrap();
        assert_eq!(s, SurdInterval::point(beta));
    }

    #[test]
    fn lattice_of_unit_digit_and_eq31() {
        let e = five_three();
        assert_eq!(lattice_point(&[1], &e).unwrap(), (1.into(), 0.into()));
        assert_eq!(lattice_point(&[0, 0], &e), Err(Error::ZeroDigits));
        let (q, _) = lattice_point(&[3, 1, 4], &e).unwrap();
        assert_eq!(q, e.q(3).unwrap() - 1);
    }

    #[test]
    fn rational_beta_sum_encloses() {
        let e = five_three();
        let beta = RealHandle::rational(1, 3);
        let d = davenport_digits(&beta, &e, 30).unwrap();
        let s = davenport_sum(&d, &e, 30).unwrap();
        assert!(s.contains(&Surd::from_ratio(1, 3)));
        assert_eq!(s.width(), e.d(30).unwrap());
        assert!(forbidden_block_at(&d.digits, &e).unwrap().is_none());
    }

    #[test]
    fn canonicalize_rewrites_maximal_tail() {
        let e = NcfExpansion::periodic(&[], &[6, 4]).unwrap();
        // (2, a₂−1, a₃−2, a₄−2, …) ↦ (3, 0, 0, …)
        let mut pre = vec![2, 3];
        pre.push(4);
        let word = PeriodicWord::new(pre, vec![2, 4]).unwrap();
        let c = davenport_canonicalize(&word, &e).unwrap();
        assert_eq!(c, PeriodicWord::finite(vec![3]));
        assert_eq!(e.weighted_sum(&c).unwrap(), e.weighted_sum(&word).unwrap());
        // already canonical
        let w = PeriodicWord::finite(vec![1, 2]);
        assert_eq!(davenport_canonicalize(&w, &e).unwrap(), w);
    }

    #[test]
    fn canonicalize_rejects_value_one() {
        let e = five_three();
        let word = PeriodicWord::new(vec![4], vec![1, 3]).unwrap();
        assert!(matches!(
            davenport_canonicalize(&word, &e),
            Err(Error::NotCanonicalizable(_))
        ));
    }

    #[test]
    fn periodic_beta_detected() {
        let e = five_three();
        let word = PeriodicWord::purely_periodic(vec![1, 1]).unwrap();
        let beta = e.weighted_sum(&word).unwrap();
        let found = davenport_periodic(&beta, &e, 100).unwrap();
        assert_eq!(found, word.normalized());
        assert!(davenport_valid(&found, &e, 50).unwrap());
    }

    #[test]
    fn approximate_beta_digits() {
        let e = five_three();
        let root = crate::numerics::real::sqrt_handle(2, 256);
        let (lo, hi) = root.enclosure(200).unwrap();
        let one = BigRational::one();
        let beta = RealHandle::interval(lo - &one, hi - &one).unwrap();
        let d = davenport_digits(&beta, &e, 20).unwrap();
        let s = davenport_sum(&d, &e, 20).unwrap();
        let r2 = Surd::new((-1).into(), 1.into(), 1.into(), 2.into());
        assert!(s.lo.to_f64() <= r2.to_f64() && r2.to_f64() <= s.hi.to_f64());
    }
}
