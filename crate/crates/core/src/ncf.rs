//! Negative continued fractions `α = 1/(a₁ − 1/(a₂ − …))` with `aᵢ ≥ 2`.
//!
//! An [`NcfExpansion`] owns its source value and memoizes digits and
//! convergents as they are requested. Eventually periodic expansions (the
//! exact class every spectrum computation relies on) also carry the periodic
//! digit word and a table of complete quotients.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::numerics::real::{rational_ceil, Interval};
use crate::numerics::{compare, surd_from_periodic_ncf, surd_from_periodic_rcf, RealHandle, Surd};
use crate::word::PeriodicWord;

/// Steps of exact recursion spent looking for a repeated complete quotient.
const PERIOD_SEARCH_LIMIT: usize = 10_000;

/// A finite run of partial quotients, flagged when the expansion has ended.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DigitPrefix {
    pub digits: Vec<u32>,
    pub terminated: bool,
}

enum Kind {
    Periodic {
        word: PeriodicWord,
        value: Surd,
        quotients: Vec<Surd>,
    },
    Finite {
        digits: Vec<u32>,
    },
    Approx,
}

#[derive(Default)]
struct Cache {
    approx_digits: Vec<u32>,
    approx_interval: Option<Interval>,
    p: Vec<BigInt>,
    q: Vec<BigInt>,
}

pub struct NcfExpansion {
    source: RealHandle,
    kind: Kind,
    cache: RwLock<Cache>,
}

impl std::fmt::Debug for NcfExpansion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.kind {
            Kind::Periodic { word, .. } => write!(f, "NcfExpansion({:?};{:?})", word.preperiod, word.period),
            Kind::Finite { digits } => write!(f, "NcfExpansion({digits:?}, terminated)"),
            Kind::Approx => write!(f, "NcfExpansion({:?})", self.source),
        }
    }
}

impl Clone for NcfExpansion {
    fn clone(&self) -> Self {
        let kind = match &self.kind {
            Kind::Periodic { word, value, quotients } => Kind::Periodic {
                word: word.clone(),
                value: value.clone(),
                quotients: quotients.clone(),
            },
            Kind::Finite { digits } => Kind::Finite { digits: digits.clone() },
            Kind::Approx => Kind::Approx,
        };
        NcfExpansion::with_kind(self.source.clone(), kind)
    }
}

impl NcfExpansion {
    fn with_kind(source: RealHandle, kind: Kind) -> Self {
        let cache = Cache {
            p: vec![BigInt::zero()],
            q: vec![BigInt::one()],
            ..Cache::default()
        };
        NcfExpansion {
            source,
            kind,
            cache: RwLock::new(cache),
        }
    }

    /// The eventually periodic expansion `⟨pre…, period, period, …⟩`.
    pub fn periodic(preperiod: &[u32], period: &[u32]) -> Result<Self> {
        let value = surd_from_periodic_ncf(preperiod, period)?;
        let word = PeriodicWord::new(preperiod.to_vec(), period.to_vec())?.normalized();
        Ok(Self::from_periodic_parts(word, value))
    }

    fn from_periodic_parts(word: PeriodicWord, value: Surd) -> Self {
        let count = word.preperiod.len() + word.period.len();
        let mut quotients = Vec::with_capacity(count);
        let mut x = value.clone();
        for i in 0..count {
            quotients.push(x.clone());
            x = &Surd::from_int(word.get(i)) - &x.recip();
        }
        Self::with_kind(
            RealHandle::from_surd(value.clone()),
            Kind::Periodic { word, value, quotients },
        )
    }

    /// The real `[0; pre…, period, …]` given by regular continued fraction
    /// digits, re-expanded as a negative continued fraction.
    pub fn from_regular_periodic(preperiod: &[u32], period: &[u32]) -> Result<Self> {
        let word = regular_periodic_to_negative(preperiod, period)?;
        let value = surd_from_periodic_rcf(preperiod, period)?;
        let expected = surd_from_periodic_ncf(&word.preperiod, &word.period)?;
        debug_assert_eq!(value, expected);
        Ok(Self::from_periodic_parts(word.normalized(), value))
    }

    /// Expansion of an arbitrary handle in `(0,1)`. Quadratic surds are
    /// recognized as eventually periodic, rationals expand to termination,
    /// and approximate handles expand lazily by interval refinement.
    pub fn from_handle(x: RealHandle) -> Result<Self> {
        let zero = BigRational::zero();
        let one = BigRational::one();
        if compare(&x, &zero)? != std::cmp::Ordering::Greater || compare(&x, &one)? != std::cmp::Ordering::Less {
            return Err(Error::OutOfRange("NCF source must lie in (0,1)".into()));
        }
        match &x {
            RealHandle::Rational(r) => {
                let digits = rational_ncf(r);
                Ok(Self::with_kind(x.clone(), Kind::Finite { digits }))
            }
            RealHandle::Quadratic(s) => {
                let word = detect_period(s)?;
                Ok(Self::from_periodic_parts(word.normalized(), s.clone()))
            }
            RealHandle::Approx(iv) => {
                let exp = Self::with_kind(x.clone(), Kind::Approx);
                exp.cache.write().unwrap().approx_interval = Some(iv.clone());
                Ok(exp)
            }
        }
    }

    pub fn source(&self) -> &RealHandle {
        &self.source
    }

    /// The exact value when it is rational or a quadratic surd.
    pub fn value(&self) -> Option<Surd> {
        self.source.exact()
    }

    pub fn exact_value(&self, what: &str) -> Result<Surd> {
        self.source.require_exact(what)
    }

    pub fn periodic_word(&self) -> Option<&PeriodicWord> {
        match &self.kind {
            Kind::Periodic { word, .. } => Some(word),
            _ => None,
        }
    }

    /// The periodic word, or `NotEventuallyPeriodic`.
    pub fn require_periodic(&self) -> Result<&PeriodicWord> {
        match &self.kind {
            Kind::Periodic { word, .. } => Ok(word),
            Kind::Finite { digits } => Err(Error::Terminated(digits.len())),
            Kind::Approx => Err(Error::NotEventuallyPeriodic),
        }
    }

    /// Number of digits when the expansion terminates (rational source).
    pub fn terminated_at(&self) -> Option<usize> {
        match &self.kind {
            Kind::Finite { digits } => Some(digits.len()),
            _ => None,
        }
    }

    /// Rejects rational sources, whose expansion ends.
    pub fn require_infinite(&self) -> Result<()> {
        match self.terminated_at() {
            Some(n) => Err(Error::Terminated(n)),
            None => Ok(()),
        }
    }

    /// Partial quotient `aᵢ`, for `i ≥ 1`.
    pub fn digit(&self, i: usize) -> Result<u32> {
        assert!(i >= 1, "digits are indexed from 1");
        match &self.kind {
            Kind::Periodic { word, .. } => Ok(word.get(i - 1)),
            Kind::Finite { digits } => digits.get(i - 1).copied().ok_or(Error::Terminated(digits.len())),
            Kind::Approx => {
                self.extend_approx(i)?;
                Ok(self.cache.read().unwrap().approx_digits[i - 1])
            }
        }
    }

    /// The first `n` partial quotients, or fewer with `terminated` set.
    pub fn digits(&self, n: usize) -> Result<DigitPrefix> {
        if let Kind::Finite { digits } = &self.kind {
            let terminated = n >= digits.len();
            return Ok(DigitPrefix {
                digits: digits[..n.min(digits.len())].to_vec(),
                terminated,
            });
        }
        let digits = (1..=n).map(|i| self.digit(i)).collect::<Result<_>>()?;
        Ok(DigitPrefix {
            digits,
            terminated: false,
        })
    }

    fn extend_approx(&self, n: usize) -> Result<()> {
        if self.cache.read().unwrap().approx_digits.len() >= n {
            return Ok(());
        }
        let mut cache = self.cache.write().unwrap();
        let mut iv = cache.approx_interval.clone().expect("approx source");
        loop {
            let digits = interval_ncf_prefix(iv.lo(), iv.hi(), n);
            if digits.len() >= n {
                cache.approx_digits = digits;
                cache.approx_interval = Some(iv);
                return Ok(());
            }
            if iv.at_floor() {
                return Err(Error::PrecisionExhausted {
                    floor_bits: iv.floor_bits(),
                });
            }
            let next = (iv.bits().max(16) * 2).min(iv.floor_bits());
            iv = iv.refined(next)?;
        }
    }

    fn ensure_convergents(&self, n: usize) -> Result<()> {
        if self.cache.read().unwrap().q.len() > n {
            return Ok(());
        }
        // Collect digits first: approximate expansions take the write lock.
        let start = self.cache.read().unwrap().q.len();
        let digits: Vec<u32> = (start..=n).map(|i| self.digit(i)).collect::<Result<_>>()?;
        let mut cache = self.cache.write().unwrap();
        for (i, a) in (start..=n).zip(digits) {
            if cache.q.len() > i {
                continue;
            }
            let (pp, qp) = if i >= 2 {
                (cache.p[i - 2].clone(), cache.q[i - 2].clone())
            } else {
                (-BigInt::one(), BigInt::zero())
            };
            let a = BigInt::from(a);
            let p = &a * &cache.p[i - 1] - pp;
            let q = &a * &cache.q[i - 1] - qp;
            cache.p.push(p);
            cache.q.push(q);
        }
        Ok(())
    }

    /// Convergent numerator `pᵢ` (`p₀ = 0`).
    pub fn p(&self, i: usize) -> Result<BigInt> {
        self.ensure_convergents(i)?;
        Ok(self.cache.read().unwrap().p[i].clone())
    }

    /// Convergent denominator `qᵢ` (`q₀ = 1`).
    pub fn q(&self, i: usize) -> Result<BigInt> {
        self.ensure_convergents(i)?;
        Ok(self.cache.read().unwrap().q[i].clone())
    }

    /// `(p_{i−1}, q_{i−1})`, with `(p₋₁, q₋₁) = (−1, 0)`.
    pub fn pq_before(&self, i: usize) -> Result<(BigInt, BigInt)> {
        if i == 0 {
            return Ok((-BigInt::one(), BigInt::zero()));
        }
        Ok((self.p(i - 1)?, self.q(i - 1)?))
    }

    /// `(pᵢ, qᵢ)` for `i = 0..=n`.
    pub fn convergents(&self, n: usize) -> Result<Vec<(BigInt, BigInt)>> {
        self.ensure_convergents(n)?;
        let cache = self.cache.read().unwrap();
        Ok((0..=n).map(|i| (cache.p[i].clone(), cache.q[i].clone())).collect())
    }

    /// Largest `n` with `qₙ ≤ bound`.
    pub fn level_of(&self, bound: &BigInt) -> Result<usize> {
        let mut n = 0;
        while &self.q(n + 1)? <= bound {
            n += 1;
        }
        Ok(n)
    }

    /// `D_k = α₁⋯α_k = q_{k−1}α − p_{k−1}`, exactly.
    pub fn d(&self, k: usize) -> Result<Surd> {
        let alpha = self.exact_value("D_k")?;
        if let Some(n) = self.terminated_at() {
            if k > n + 1 {
                return Err(Error::Terminated(n));
            }
        }
        let (p, q) = if let Some(n) = self.terminated_at().filter(|&n| k == n + 1) {
            (self.p(n)?, self.q(n)?)
        } else {
            self.pq_before(k)?
        };
        Ok(&alpha.mul_int(q) - &Surd::from_int(p))
    }

    /// Complete quotient `αᵢ = ⟨aᵢ, a_{i+1}, …⟩`, for `i ≥ 1`.
    pub fn alpha_i(&self, i: usize) -> Result<Surd> {
        assert!(i >= 1, "complete quotients are indexed from 1");
        match &self.kind {
            Kind::Periodic { word, quotients, .. } => Ok(quotients[word.canonical_index(i - 1)].clone()),
            Kind::Finite { .. } => Ok(&self.d(i)? / &self.d(i - 1)?),
            Kind::Approx => Err(Error::Inexact("complete quotients of an approximate source".into())),
        }
    }

    /// Reversed quotient `ᾱᵢ = ⟨aᵢ, …, a₁⟩ = q_{i−1}/qᵢ`.
    pub fn reversed_quotient(&self, i: usize) -> Result<BigRational> {
        Ok(BigRational::new(self.q(i - 1)?, self.q(i)?))
    }

    /// Smallest index `j ≥ 1` whose digit tail equals the tail from `i`.
    pub fn phase(&self, i: usize) -> usize {
        match &self.kind {
            Kind::Periodic { word, .. } => word.canonical_index(i - 1) + 1,
            _ => i,
        }
    }

    /// The expansion of `α_{k+1}`, i.e. the digits from index `k+1` on.
    pub fn shifted(&self, k: usize) -> Result<NcfExpansion> {
        if k == 0 {
            return Ok(self.clone());
        }
        match &self.kind {
            Kind::Periodic { word, .. } => {
                let w = word.shift(k);
                let value = self.alpha_i(k + 1)?;
                Ok(Self::from_periodic_parts(w.normalized(), value))
            }
            Kind::Finite { digits } => {
                if k >= digits.len() {
                    return Err(Error::Terminated(digits.len()));
                }
                let value = self.alpha_i(k + 1)?.to_rational().expect("rational");
                Ok(Self::with_kind(
                    RealHandle::Rational(value),
                    Kind::Finite {
                        digits: digits[k..].to_vec(),
                    },
                ))
            }
            Kind::Approx => Err(Error::Inexact("shifting an approximate expansion".into())),
        }
    }

    /// Exact value of `Σ_{k≥1} w_k D_k` for an eventually periodic word `w`
    /// (letters indexed from 0 for `k = 1`).
    pub fn weighted_sum(&self, w: &PeriodicWord) -> Result<Surd> {
        if let Some(len) = w.support_len() {
            let mut total = Surd::zero();
            for k in 1..=len {
                let c = w.get(k - 1);
                if c != 0 {
                    total = &total + &self.d(k)?.mul_int(c);
                }
            }
            return Ok(total);
        }
        let aw = self.require_periodic()?;
        let t = aw.preperiod.len().max(w.preperiod.len());
        let p = aw.period.len().lcm(&w.period.len());
        let mut head = Surd::zero();
        for k in 1..=t {
            head = &head + &self.d(k)?.mul_int(w.get(k - 1));
        }
        let mut block = Surd::zero();
        for k in t + 1..=t + p {
            block = &block + &self.d(k)?.mul_int(w.get(k - 1));
        }
        let ratio = &self.d(t + p)? / &self.d(t)?;
        let tail = &block / &(&Surd::one() - &ratio);
        Ok(&head + &tail)
    }

    /// Structural bounds of the digit stream.
    pub fn structural_bounds(&self) -> Result<StructuralBounds> {
        match &self.kind {
            Kind::Periodic { word, .. } => structural_bounds(&DigitDescription::EventuallyPeriodic(word.clone())),
            Kind::Finite { digits } => Err(Error::Terminated(digits.len())),
            Kind::Approx => structural_bounds(&DigitDescription::Unbounded),
        }
    }

    /// JSON view with the first `n` digits and convergents.
    pub fn to_json(&self, n: usize) -> Result<Value> {
        let prefix = self.digits(n)?;
        let m = prefix.digits.len();
        let conv: Vec<Value> = self
            .convergents(m)?
            .into_iter()
            .map(|(p, q)| json!([int_json(&p), int_json(&q)]))
            .collect();
        let periodic = match self.periodic_word() {
            Some(w) => json!({"preperiod": w.preperiod, "period": w.period}),
            None => Value::Null,
        };
        Ok(json!({
            "digits": prefix.digits,
            "terminated": prefix.terminated,
            "periodic": periodic,
            "convergents": conv,
        }))
    }
}

/// Integers as JSON numbers when they fit in 64 bits, strings otherwise.
pub fn int_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

/// First `n` partial quotients of `x`.
pub fn ncf_digits(x: &RealHandle, n: usize) -> Result<DigitPrefix> {
    NcfExpansion::from_handle(x.clone())?.digits(n)
}

fn rational_ncf(r: &BigRational) -> Vec<u32> {
    let mut out = Vec::new();
    let mut x = r.clone();
    while !x.is_zero() {
        let inv = x.recip();
        let a = rational_ceil(&inv);
        out.push(a.to_u32().expect("digit fits u32"));
        x = BigRational::from_integer(a) - inv;
    }
    out
}

fn detect_period(x: &Surd) -> Result<PeriodicWord> {
    let mut seen: HashMap<Surd, usize> = HashMap::new();
    let mut digits = Vec::new();
    let mut cur = x.clone();
    for step in 0..PERIOD_SEARCH_LIMIT {
        if let Some(&start) = seen.get(&cur) {
            return PeriodicWord::new(digits[..start].to_vec(), digits[start..].to_vec());
        }
        seen.insert(cur.clone(), step);
        let inv = cur.recip();
        let a = inv.ceil();
        digits.push(
            a.to_u32()
                .ok_or_else(|| Error::OutOfRange("partial quotient exceeds u32".into()))?,
        );
        cur = &Surd::from_int(a) - &inv;
    }
    Err(Error::NotEventuallyPeriodic)
}

/// Common NCF prefix of the two endpoints of `[lo, hi] ⊂ (0,1)`, at most `n`
/// digits. Every real in the interval shares this prefix.
fn interval_ncf_prefix(lo: &BigRational, hi: &BigRational, n: usize) -> Vec<u32> {
    let mut out = Vec::new();
    let (mut x, mut y) = (lo.clone(), hi.clone());
    while out.len() < n {
        if !x.is_positive() || y >= BigRational::one() {
            break;
        }
        let (ix, iy) = (x.recip(), y.recip());
        let (ax, ay) = (rational_ceil(&ix), rational_ceil(&iy));
        if ax != ay {
            break;
        }
        out.push(ax.to_u32().expect("digit fits u32"));
        let a = BigRational::from_integer(ax);
        x = &a - ix;
        y = &a - iy;
    }
    out
}

/// Value of the finite expansion `⟨a₁, …, aₙ⟩`.
pub fn finite_ncf_value(digits: &[u32]) -> BigRational {
    digits.iter().rev().fold(BigRational::zero(), |acc, &a| {
        (BigRational::from_integer(a.into()) - acc).recip()
    })
}

/// Value of the regular continued fraction `[0; a₁, …, aₙ]`.
pub fn finite_rcf_value(digits: &[u32]) -> BigRational {
    digits.iter().rev().fold(BigRational::zero(), |acc, &a| {
        (BigRational::from_integer(a.into()) + acc).recip()
    })
}

/// Rewrites regular continued fraction digits `a′₁, a′₂, …` as
/// `a′₁+1, 2^(a′₂−1), a′₃+2, 2^(a′₄−1), a′₅+2, …`.
pub fn regular_to_negative(regular: &[u32]) -> Result<Vec<u32>> {
    if regular.is_empty() {
        return Err(Error::InvalidInput("empty digit list".into()));
    }
    if regular.contains(&0) {
        return Err(Error::InvalidInput(
            "regular continued fraction digits must be positive".into(),
        ));
    }
    Ok(map_regular(regular, true))
}

fn map_regular(regular: &[u32], leading: bool) -> Vec<u32> {
    let mut out = Vec::new();
    for (i, &a) in regular.iter().enumerate() {
        if i % 2 == 0 {
            out.push(if i == 0 && leading { a + 1 } else { a + 2 });
        } else {
            out.extend(std::iter::repeat_n(2, (a - 1) as usize));
        }
    }
    out
}

/// Inverse of [`regular_to_negative`]. Runs of 2s give the even-indexed
/// regular digits; a trailing even-indexed 1 leaves no trace and is lost.
pub fn negative_to_regular(negative: &[u32]) -> Result<Vec<u32>> {
    let Some((&first, rest)) = negative.split_first() else {
        return Err(Error::InvalidInput("empty digit list".into()));
    };
    if negative.iter().any(|&a| a < 2) {
        return Err(Error::InvalidInput(
            "negative continued fraction digits must be at least 2".into(),
        ));
    }
    let mut out = vec![first - 1];
    let mut twos = 0u32;
    for &a in rest {
        if a == 2 {
            twos += 1;
        } else {
            out.push(twos + 1);
            out.push(a - 2);
            twos = 0;
        }
    }
    if twos > 0 {
        out.push(twos + 1);
    }
    Ok(out)
}

/// Negative continued fraction word of `[0; pre…, period, …]`.
pub fn regular_periodic_to_negative(preperiod: &[u32], period: &[u32]) -> Result<PeriodicWord> {
    if period.is_empty() || preperiod.iter().chain(period).any(|&a| a == 0) {
        return Err(Error::InvalidInput(
            "regular digits must be positive with a nonempty period".into(),
        ));
    }
    // Align so the preperiod is nonempty with even length and the period has
    // even length; then the period starts on an odd (`+2`) position.
    let mut period = period.to_vec();
    if period.len() % 2 == 1 {
        period.extend_from_within(..);
    }
    let mut pre = preperiod.to_vec();
    if pre.len() % 2 == 1 {
        pre.push(period[0]);
        period.rotate_left(1);
    }
    if pre.is_empty() {
        pre.extend_from_slice(&period);
    }
    PeriodicWord::new(map_regular(&pre, true), map_regular(&period, false))
}

/// How much is known about a digit stream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DigitDescription {
    EventuallyPeriodic(PeriodicWord),
    Unbounded,
}

/// Digit bound, bound on runs of 2s, and the derived gap multiplier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructuralBounds {
    /// Largest partial quotient.
    pub max_digit: u32,
    /// One more than the longest run of consecutive 2s.
    pub two_run_bound: u32,
    /// Smallest `L` with `R^L ≤ (1−R)(1−R²)/(M^N(M²−1))`.
    pub zero_block_factor: u32,
    /// `R = N/(N+1)`, an upper bound on every reversed quotient.
    #[serde(serialize_with = "ser_rational")]
    pub ratio: BigRational,
}

fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

pub fn structural_bounds(desc: &DigitDescription) -> Result<StructuralBounds> {
    let DigitDescription::EventuallyPeriodic(word) = desc else {
        return Err(Error::UnboundedInput);
    };
    if word.period.iter().all(|&a| a == 2) {
        return Err(Error::UnboundedInput);
    }
    let scan: Vec<u32> = word
        .preperiod
        .iter()
        .chain(word.period.iter().cycle().take(3 * word.period.len()))
        .copied()
        .collect();
    let max_digit = *scan.iter().max().expect("nonempty");
    let mut longest = 0u32;
    let mut run = 0u32;
    for &a in &scan {
        run = if a == 2 { run + 1 } else { 0 };
        longest = longest.max(run);
    }
    let n = longest + 1;
    let ratio = BigRational::new(n.into(), (n + 1).into());
    let one = BigRational::one();
    let m = BigRational::from_integer(max_digit.into());
    let rhs = (&one - &ratio) * (&one - &ratio * &ratio) / (num_traits::pow(m.clone(), n as usize) * (&m * &m - &one));
    let mut l = 0u32;
    let mut power = one;
    while power > rhs {
        power *= &ratio;
        l += 1;
    }
    Ok(StructuralBounds {
        max_digit,
        two_run_bound: n,
        zero_block_factor: l,
        ratio,
    })
}
