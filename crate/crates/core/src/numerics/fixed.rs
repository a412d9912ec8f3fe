//! 128-bit fixed-point enclosures of `q·‖qα − β‖`.
//!
//! A real `x ∈ [0,1)` is held as `lo / 2^128` together with an integer width
//! so that `x ∈ [lo, lo + width] / 2^128`. Multiplying by an integer `q` and
//! reducing mod 1 is a wrapping multiply, which keeps the brute-force scan
//! in registers. Products `q·‖·‖` need up to 192 bits and live in [`U256`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::real::{rational_ceil, rational_floor};
use crate::error::{Error, Result};

const HALF: u128 = 1 << 127;

/// Unsigned 256-bit integer, ordered by `(hi, lo)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct U256 {
    pub hi: u128,
    pub lo: u128,
}

impl U256 {
    pub const MAX: U256 = U256 {
        hi: u128::MAX,
        lo: u128::MAX,
    };

    pub fn to_bigint(self) -> BigInt {
        (BigInt::from(self.hi) << 128) + BigInt::from(self.lo)
    }

    /// `None` for negative values and values of 2^256 or more.
    pub fn from_bigint(x: &BigInt) -> Option<U256> {
        if x.sign() == num_bigint::Sign::Minus {
            return None;
        }
        let mask = (BigInt::one() << 128) - 1;
        let lo = (x & &mask).to_u128()?;
        let hi = (x >> 128u32).to_u128()?;
        Some(U256 { hi, lo })
    }

    /// Reads the value as a multiple of `2^-128`.
    pub fn to_rational(self) -> BigRational {
        BigRational::new(self.to_bigint(), BigInt::one() << 128)
    }
}

/// Full product of a `u64` and a `u128`.
pub fn mul_u64_u128(a: u64, b: u128) -> U256 {
    let a = a as u128;
    let b_lo = b as u64 as u128;
    let b_hi = b >> 64;
    let p0 = a * b_lo;
    let p1 = a * b_hi;
    let (lo, carry) = p0.overflowing_add(p1 << 64);
    U256 {
        hi: (p1 >> 64) + carry as u128,
        lo,
    }
}

/// A real in `[0,1)` (or a residue mod 1) enclosed as `[lo, lo+width]·2^-128`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FracEnclosure {
    pub lo: u128,
    pub width: u128,
}

impl FracEnclosure {
    /// Encloses the residue class of `[lo, hi]` mod 1. Fails if the interval
    /// is too wide to be represented.
    pub fn from_bounds(lo: &BigRational, hi: &BigRational) -> Result<Self> {
        let scale = BigRational::from_integer(BigInt::one() << 128);
        let lo_scaled = rational_floor(&(lo * &scale));
        let hi_scaled = rational_ceil(&(hi * &scale));
        let width = (&hi_scaled - &lo_scaled)
            .to_u128()
            .ok_or_else(|| Error::InvalidInput("enclosure wider than the fixed-point range".into()))?;
        let modulus = BigInt::one() << 128;
        let mut residue: BigInt = lo_scaled % &modulus;
        if residue < BigInt::zero() {
            residue += &modulus;
        }
        Ok(FracEnclosure {
            lo: residue.to_u128().expect("residue below 2^128"),
            width: width.max(1),
        })
    }

    /// `q·x − y` mod 1 with the propagated width.
    pub fn scaled_minus(&self, q: u64, other: &FracEnclosure) -> FracEnclosure {
        let qa = (q as u128).wrapping_mul(self.lo);
        let qw = (q as u128).saturating_mul(self.width);
        FracEnclosure {
            lo: qa.wrapping_sub(other.lo).wrapping_sub(other.width),
            width: qw.saturating_add(other.width),
        }
    }

    /// Enclosure of the distance to the nearest integer, as `(lo, hi)` in
    /// units of `2^-128`.
    pub fn dist(&self) -> (u128, u128) {
        let a = self.lo;
        let w = self.width;
        let b = a.wrapping_add(w);
        let (ta, tb) = (tent(a), tent(b));
        let lower = if a.wrapping_neg() <= w || a == 0 { 0 } else { ta.min(tb) };
        let upper = if HALF.wrapping_sub(a) <= w { HALF } else { ta.max(tb) };
        (lower, upper)
    }
}

fn tent(x: u128) -> u128 {
    x.min(x.wrapping_neg())
}

/// Enclosure of `q·‖qα − β‖`, scaled by `2^128`.
pub fn scaled_dist(q: u64, alpha: &FracEnclosure, beta: &FracEnclosure) -> (U256, U256) {
    let (lo, hi) = alpha.scaled_minus(q, beta).dist();
    (mul_u64_u128(q, lo), mul_u64_u128(q, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wide_multiply() {
        let p = mul_u64_u128(u64::MAX, u128::MAX);
        let expect = BigInt::from(u64::MAX) * BigInt::from(u128::MAX);
        assert_eq!(p.to_bigint(), expect);
        assert_eq!(mul_u64_u128(3, 5), U256 { hi: 0, lo: 15 });
        assert_eq!(U256::from_bigint(&expect), Some(p));
        assert_eq!(U256::from_bigint(&BigInt::from(-1)), None);
    }

    #[test]
    fn ordering_is_lexicographic() {
        assert!(U256 { hi: 1, lo: 0 } > U256 { hi: 0, lo: u128::MAX });
    }

    #[test]
    fn distance_of_exact_quarter() {
        let x = FracEnclosure::from_bounds(
            &BigRational::new(1.into(), 4.into()),
            &BigRational::new(1.into(), 4.into()),
        )
        .unwrap();
        let zero = FracEnclosure { lo: 0, width: 0 };
        let (lo, hi) = x.scaled_minus(3, &zero).dist();
        // 3/4 is at distance 1/4 from 1
        assert!(lo <= 1u128 << 126 && (1u128 << 126) <= hi);
        assert!(hi - lo <= 8);
    }

    #[test]
    fn straddling_zero_gives_zero_lower() {
        let e = FracEnclosure {
            lo: u128::MAX - 3,
            width: 10,
        };
        assert_eq!(e.dist().0, 0);
    }

    #[test]
    fn straddling_half_gives_half_upper() {
        let e = FracEnclosure { lo: HALF - 2, width: 5 };
        assert_eq!(e.dist().1, HALF);
    }
}
