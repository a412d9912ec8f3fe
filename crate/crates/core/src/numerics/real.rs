use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::{Serialize, Serializer};

use super::surd::Surd;
use crate::error::{Error, Result};

/// Default refinement floor for approximate handles: intervals are refined to
/// width `2^-256` before a comparison gives up.
pub const DEFAULT_FLOOR_BITS: u32 = 256;

/// Produces an enclosure of width at most `2^-bits` on request.
pub type Refiner = Arc<dyn Fn(u32) -> (BigRational, BigRational) + Send + Sync>;

/// A rational interval known to contain a real number, optionally refinable.
#[derive(Clone)]
pub struct Interval {
    lo: BigRational,
    hi: BigRational,
    bits: u32,
    refiner: Option<Refiner>,
    floor_bits: u32,
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidInput("interval with lo > hi".into()));
        }
        Ok(Interval {
            lo,
            hi,
            bits: 0,
            refiner: None,
            floor_bits: DEFAULT_FLOOR_BITS,
        })
    }

    /// An interval backed by a refinement callback. The callback must return
    /// nested enclosures of width at most `2^-bits`.
    pub fn refinable(refiner: Refiner, floor_bits: u32) -> Self {
        let (lo, hi) = refiner(16);
        Interval {
            lo,
            hi,
            bits: 16,
            refiner: Some(refiner),
            floor_bits,
        }
    }

    pub fn with_floor(mut self, floor_bits: u32) -> Self {
        self.floor_bits = floor_bits;
        self
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn floor_bits(&self) -> u32 {
        self.floor_bits
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// A new interval of width at most `2^-bits` (or the tightest available).
    pub fn refined(&self, bits: u32) -> Result<Interval> {
        if bits <= self.bits || self.lo == self.hi {
            return Ok(self.clone());
        }
        let Some(refiner) = &self.refiner else {
            return Err(Error::PrecisionExhausted { floor_bits: self.bits });
        };
        let bits = bits.min(self.floor_bits);
        let (lo, hi) = refiner(bits);
        let lo = if lo > self.lo { lo } else { self.lo.clone() };
        let hi = if hi < self.hi { hi } else { self.hi.clone() };
        if lo > hi {
            return Err(Error::InvalidInput(
                "refinement callback returned a non-nested interval".into(),
            ));
        }
        Ok(Interval {
            lo,
            hi,
            bits,
            refiner: self.refiner.clone(),
            floor_bits: self.floor_bits,
        })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn at_floor(&self) -> bool {
        self.refiner.is_none() || self.bits >= self.floor_bits
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// A real number: exact rational, exact quadratic surd, or a refinable
/// enclosure.
#[derive(Clone, Debug)]
pub enum RealHandle {
    Rational(BigRational),
    Quadratic(Surd),
    Approx(Interval),
}

impl RealHandle {
    pub fn rational<P: Into<BigInt>, Q: Into<BigInt>>(p: P, q: Q) -> Self {
        RealHandle::Rational(BigRational::new(p.into(), q.into()))
    }

    /// Wraps a surd, collapsing to `Rational` when it has no radical part.
    pub fn from_surd(x: Surd) -> Self {
        match x.to_rational() {
            Some(r) => RealHandle::Rational(r),
            None => RealHandle::Quadratic(x),
        }
    }

    pub fn interval(lo: BigRational, hi: BigRational) -> Result<Self> {
        Ok(RealHandle::Approx(Interval::new(lo, hi)?))
    }

    /// The exact value, if this handle carries one.
    pub fn exact(&self) -> Option<Surd> {
        match self {
            RealHandle::Rational(r) => Some(Surd::from_rational(r)),
            RealHandle::Quadratic(s) => Some(s.clone()),
            RealHandle::Approx(_) => None,
        }
    }

    pub fn require_exact(&self, what: &str) -> Result<Surd> {
        self.exact()
            .ok_or_else(|| Error::Inexact(format!("{what} needs an exact rational or surd value")))
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, RealHandle::Approx(_))
    }

    /// Rational enclosure of width at most `2^-bits`.
    pub fn enclosure(&self, bits: u32) -> Result<(BigRational, BigRational)> {
        match self {
            RealHandle::Rational(r) => Ok((r.clone(), r.clone())),
            RealHandle::Quadratic(s) => {
                let scale = BigInt::one() << bits;
                let lo = s.floor_scaled(bits);
                let hi = &lo + 1;
                Ok((BigRational::new(lo, scale.clone()), BigRational::new(hi, scale)))
            }
            RealHandle::Approx(iv) => {
                let mut cur = iv.clone();
                let target = BigRational::new(BigInt::one(), BigInt::one() << bits);
                while cur.width() > target {
                    if cur.at_floor() {
                        return Err(Error::PrecisionExhausted {
                            floor_bits: cur.floor_bits,
                        });
                    }
                    cur = cur.refined((cur.bits.max(16) * 2).min(cur.floor_bits))?;
                }
                Ok((cur.lo, cur.hi))
            }
        }
    }

    /// Best-effort `f64` for display only.
    pub fn to_f64(&self) -> f64 {
        match self {
            RealHandle::Rational(r) => Surd::from_rational(r).to_f64(),
            RealHandle::Quadratic(s) => s.to_f64(),
            RealHandle::Approx(iv) => {
                let mid = (iv.lo.clone() + iv.hi.clone()) / BigInt::from(2);
                Surd::from_rational(&mid).to_f64()
            }
        }
    }

    /// Decimal rendering truncated to `digits` places; approximate handles
    /// render their midpoint.
    pub fn to_decimal(&self, digits: usize) -> String {
        match self.exact() {
            Some(s) => s.to_decimal(digits),
            None => {
                let RealHandle::Approx(iv) = self else { unreachable!() };
                let mid = (iv.lo.clone() + iv.hi.clone()) / BigInt::from(2);
                Surd::from_rational(&mid).to_decimal(digits)
            }
        }
    }
}

impl From<Surd> for RealHandle {
    fn from(s: Surd) -> Self {
        RealHandle::from_surd(s)
    }
}

impl From<BigRational> for RealHandle {
    fn from(r: BigRational) -> Self {
        RealHandle::Rational(r)
    }
}

impl Serialize for RealHandle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(2))?;
        match self {
            RealHandle::Rational(r) => {
                m.serialize_entry("kind", "rational")?;
                m.serialize_entry("value", &r.to_string())?;
            }
            RealHandle::Quadratic(q) => {
                m.serialize_entry("kind", "quadratic")?;
                m.serialize_entry("value", q)?;
            }
            RealHandle::Approx(iv) => {
                m.serialize_entry("kind", "interval")?;
                m.serialize_entry("value", &[iv.lo.to_string(), iv.hi.to_string()])?;
            }
        }
        m.end()
    }
}

/// Exact ordering of `x` against the rational `r`. Approximate handles are
/// refined until the enclosure excludes `r`.
pub fn compare(x: &RealHandle, r: &BigRational) -> Result<Ordering> {
    match x {
        RealHandle::Rational(q) => Ok(q.cmp(r)),
        RealHandle::Quadratic(s) => Ok(s.cmp(&Surd::from_rational(r))),
        RealHandle::Approx(iv) => {
            let mut cur = iv.clone();
            loop {
                if r < &cur.lo {
                    return Ok(Ordering::Greater);
                }
                if r > &cur.hi {
                    return Ok(Ordering::Less);
                }
                if cur.lo == cur.hi {
                    return Ok(Ordering::Equal);
                }
                if cur.at_floor() {
                    return Err(Error::PrecisionExhausted {
                        floor_bits: cur.floor_bits,
                    });
                }
                let next = (cur.bits.max(16) * 2).min(cur.floor_bits);
                cur = cur.refined(next)?;
            }
        }
    }
}

/// Enclosure of `√n` for a positive integer, as a refinable handle.
pub fn sqrt_handle(n: u64, floor_bits: u32) -> RealHandle {
    let refiner: Refiner = Arc::new(move |bits: u32| {
        let scaled = BigInt::from(n) << (2 * bits);
        let lo = scaled.sqrt();
        let hi = if &lo * &lo == scaled { lo.clone() } else { &lo + 1 };
        let den = BigInt::one() << bits;
        (BigRational::new(lo, den.clone()), BigRational::new(hi, den))
    });
    RealHandle::Approx(Interval::refinable(refiner, floor_bits))
}

/// `⌊x⌋` for a rational.
pub fn rational_floor(r: &BigRational) -> BigInt {
    r.numer().div_floor(r.denom())
}

/// `⌈x⌉` for a rational.
pub fn rational_ceil(r: &BigRational) -> BigInt {
    -rational_floor(&-r)
}
