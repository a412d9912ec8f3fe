//! Exact arithmetic in a real quadratic field.
//!
//! A [`Surd`] is `(a + b√d)/c` with big-integer coefficients. The radicand is
//! shared between operands; mixing two distinct irrational radicands is a
//! programming error and panics. Rationals are surds with `b = 0` and carry
//! no radicand, so they combine with anything.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Surd {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: Arc<BigInt>,
}

fn zero_radicand() -> Arc<BigInt> {
    thread_local! {
        static ZERO: Arc<BigInt> = Arc::new(BigInt::zero());
    }
    ZERO.with(Arc::clone)
}

/// Splits `n > 0` as `f² · d` with `d` square-free (trial division up to 10⁶,
/// then a perfect-square test on the cofactor).
pub fn squarefree_decompose(n: &BigInt) -> (BigInt, BigInt) {
    assert!(n.is_positive(), "radicand must be positive");
    let mut rem = n.clone();
    let mut f = BigInt::one();
    let mut d = BigInt::one();
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(1_000_000u32);
    while &p * &p <= rem && p <= limit {
        let p2 = &p * &p;
        while (&rem % &p2).is_zero() {
            rem /= &p2;
            f *= &p;
        }
        if (&rem % &p).is_zero() {
            rem /= &p;
            d *= &p;
        }
        p += 1u32;
    }
    if rem > BigInt::one() {
        let r = rem.sqrt();
        if &r * &r == rem {
            f *= r;
        } else {
            d *= rem;
        }
    }
    (f, d)
}

impl Surd {
    /// `(a + b√d)/c`, normalized. `d` must be non-negative; square factors are
    /// pulled out and `d ∈ {0, 1}` collapses to a rational.
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        assert!(!c.is_zero(), "zero denominator");
        assert!(!d.is_negative(), "negative radicand");
        if b.is_zero() || d.is_zero() {
            return Self::normalized(a, BigInt::zero(), c, zero_radicand());
        }
        let (f, core) = squarefree_decompose(&d);
        let b = b * f;
        if core.is_one() {
            return Self::normalized(a + b, BigInt::zero(), c, zero_radicand());
        }
        Self::normalized(a, b, c, Arc::new(core))
    }

    /// The `(p + √d)/q` form.
    pub fn from_parts(p: BigInt, q: BigInt, d: BigInt) -> Self {
        Self::new(p, BigInt::one(), q, d)
    }

    pub fn from_int<T: Into<BigInt>>(n: T) -> Self {
        Self::normalized(n.into(), BigInt::zero(), BigInt::one(), zero_radicand())
    }

    pub fn from_ratio<T: Into<BigInt>, U: Into<BigInt>>(p: T, q: U) -> Self {
        Self::normalized(p.into(), BigInt::zero(), q.into(), zero_radicand())
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Self::from_ratio(r.numer().clone(), r.denom().clone())
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    fn normalized(mut a: BigInt, mut b: BigInt, mut c: BigInt, d: Arc<BigInt>) -> Self {
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() && !g.is_zero() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        let d = if b.is_zero() { zero_radicand() } else { d };
        Surd { a, b, c, d }
    }

    pub fn coeffs(&self) -> (&BigInt, &BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.c, &self.d)
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| BigRational::new(self.a.clone(), self.c.clone()))
    }

    pub fn radicand(&self) -> Option<&BigInt> {
        (!self.b.is_zero()).then(|| self.d.as_ref())
    }

    fn shared_radicand(&self, other: &Surd) -> Arc<BigInt> {
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, _) => other.d.clone(),
            (_, true) => self.d.clone(),
            _ => {
                assert!(
                    Arc::ptr_eq(&self.d, &other.d) || self.d == other.d,
                    "surds over different radicands ({} vs {})",
                    self.d,
                    other.d
                );
                self.d.clone()
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Sign of `a + b√d` (the denominator is kept positive).
    pub fn signum(&self) -> Ordering {
        let sa = self.a.sign();
        let sb = self.b.sign();
        let ord = |s: Sign| match s {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        };
        if sb == Sign::NoSign {
            return ord(sa);
        }
        if sa == Sign::NoSign || sa == sb {
            return ord(sb);
        }
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * self.d.as_ref();
        if a2 > b2d {
            ord(sa)
        } else {
            ord(sb)
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Surd {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Surd {
        assert!(!self.is_zero(), "reciprocal of zero");
        if self.b.is_zero() {
            return Self::normalized(self.c.clone(), BigInt::zero(), self.a.clone(), zero_radicand());
        }
        let norm = &self.a * &self.a - &self.b * &self.b * self.d.as_ref();
        Self::normalized(&self.c * &self.a, -(&self.c * &self.b), norm, self.d.clone())
    }

    /// Galois conjugate `(a − b√d)/c`.
    pub fn conjugate(&self) -> Surd {
        Surd {
            a: self.a.clone(),
            b: -self.b.clone(),
            c: self.c.clone(),
            d: self.d.clone(),
        }
    }

    /// `⌊b√d⌋`; exact since `√d` is irrational whenever `b ≠ 0`.
    fn floor_b_sqrt_d(&self) -> BigInt {
        if self.b.is_zero() {
            return BigInt::zero();
        }
        let r = (&self.b * &self.b * self.d.as_ref()).sqrt();
        if self.b.is_positive() {
            r
        } else {
            -r - 1
        }
    }

    pub fn floor(&self) -> BigInt {
        let t = &self.a + self.floor_b_sqrt_d();
        t.div_floor(&self.c)
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// `⌊x · 2^bits⌋`.
    pub fn floor_scaled(&self, bits: u32) -> BigInt {
        (self * &Surd::from_int(BigInt::one() << bits)).floor()
    }

    pub fn mul_int<T: Into<BigInt>>(&self, k: T) -> Surd {
        let k = k.into();
        Self::normalized(&self.a * &k, &self.b * &k, self.c.clone(), self.d.clone())
    }

    pub fn pow(&self, e: u32) -> Surd {
        let mut acc = Surd::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        // Scale by powers of two until 64 significant bits are in hand, so
        // ratios of huge coefficients and tiny values both come out right.
        let mut bits = 80u32;
        let scaled = loop {
            let scaled = self.floor_scaled(bits);
            if scaled.bits() >= 64 || bits >= 1200 {
                break scaled;
            }
            bits += 256;
        };
        let excess = scaled.bits().saturating_sub(64);
        let top = (&scaled >> excess).to_f64().unwrap_or(f64::NAN);
        let exp = excess as i32 - bits as i32;
        top * 2f64.powi(exp / 2) * 2f64.powi(exp - exp / 2)
    }

    /// Decimal string truncated (toward −∞) to `digits` places.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = num_traits::pow(BigInt::from(10u32), digits);
        let v = (self * &Surd::from_int(scale.clone())).floor();
        let (int, frac) = v.div_mod_floor(&scale);
        if digits == 0 {
            return int.to_string();
        }
        let neg = int.is_negative();
        let (int, frac) = if neg && !frac.is_zero() {
            (int + 1, &scale - frac)
        } else {
            (int, frac)
        };
        let sign = if neg && int.is_zero() { "-" } else { "" };
        format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits)
    }

    pub fn min(self, other: Surd) -> Surd {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Surd) -> Surd {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            if self.c.is_one() {
                write!(f, "{}", self.a)
            } else {
                write!(f, "{}/{}", self.a, self.c)
            }
        } else {
            write!(f, "({} + {}*sqrt({}))/{}", self.a, self.b, self.d, self.c)
        }
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl<'a> Add<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn add(self, rhs: &Surd) -> Surd {
        let d = self.shared_radicand(rhs);
        if self.c == rhs.c {
            return Surd::normalized(&self.a + &rhs.a, &self.b + &rhs.b, self.c.clone(), d);
        }
        Surd::normalized(
            &self.a * &rhs.c + &rhs.a * &self.c,
            &self.b * &rhs.c + &rhs.b * &self.c,
            &self.c * &rhs.c,
            d,
        )
    }
}

impl<'a> Sub<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn sub(self, rhs: &Surd) -> Surd {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn mul(self, rhs: &Surd) -> Surd {
        let d = self.shared_radicand(rhs);
        let a = &self.a * &rhs.a + &self.b * &rhs.b * d.as_ref();
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Surd::normalized(a, b, &self.c * &rhs.c, d)
    }
}

impl<'a> Div<&'a Surd> for &'a Surd {
    type Output = Surd;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Surd) -> Surd {
        self * &rhs.recip()
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd {
            a: -self.a.clone(),
            b: -self.b.clone(),
            c: self.c.clone(),
            d: self.d.clone(),
        }
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Surd> for Surd {
            type Output = Surd;
            fn $m(self, rhs: Surd) -> Surd {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Surd> for Surd {
            type Output = Surd;
            fn $m(self, rhs: &Surd) -> Surd {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Surd> for &'a Surd {
            type Output = Surd;
            fn $m(self, rhs: Surd) -> Surd {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl From<i64> for Surd {
    fn from(n: i64) -> Self {
        Surd::from_int(n)
    }
}

impl From<BigInt> for Surd {
    fn from(n: BigInt) -> Self {
        Surd::from_int(n)
    }
}

impl From<&BigRational> for Surd {
    fn from(r: &BigRational) -> Self {
        Surd::from_rational(r)
    }
}

#[derive(Serialize, Deserialize)]
struct SurdRepr {
    a: String,
    b: String,
    c: String,
    d: String,
}

impl Serialize for Surd {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SurdRepr {
            a: self.a.to_string(),
            b: self.b.to_string(),
            c: self.c.to_string(),
            d: self.d.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Surd {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = SurdRepr::deserialize(de)?;
        let p = |s: &str| s.parse::<BigInt>().map_err(D::Error::custom);
        let c = p(&r.c)?;
        if c.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(Surd::new(p(&r.a)?, p(&r.b)?, c, p(&r.d)?))
    }
}
