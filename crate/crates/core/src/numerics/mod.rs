//! Number representations used by every digit algorithm.
//!
//! Digit decisions (`⌈1/x⌉`, `⌊x/y⌋`, comparisons) are made exactly on
//! [`Surd`] values, or on refinable rational intervals for inputs that are
//! only known approximately. The [`fixed`] submodule holds the 128-bit
//! certified kernel used by the brute-force oracle.

pub mod fixed;
pub mod real;
pub mod surd;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
pub use real::{compare, Interval, RealHandle, DEFAULT_FLOOR_BITS};
pub use surd::Surd;

/// 2×2 integer matrix acting on reals as a Möbius map `z ↦ (az+b)/(cz+d)`.
#[derive(Clone, Debug)]
struct Mobius([BigInt; 4]);

impl Mobius {
    fn identity() -> Self {
        Mobius([BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()])
    }

    fn then(&self, other: &Mobius) -> Mobius {
        let [a, b, c, d] = &self.0;
        let [e, f, g, h] = &other.0;
        Mobius([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }

    fn apply(&self, z: &Surd) -> Surd {
        let [a, b, c, d] = &self.0;
        let num = &z.mul_int(a.clone()) + &Surd::from_int(b.clone());
        let den = &z.mul_int(c.clone()) + &Surd::from_int(d.clone());
        &num / &den
    }

    /// Roots of `cz² + (d−a)z − b = 0`, the fixed points of the map.
    fn fixed_points(&self) -> Vec<Surd> {
        let [a, b, c, d] = &self.0;
        if c.is_zero() {
            let slope = d - a;
            if slope.is_zero() {
                return Vec::new();
            }
            return vec![Surd::from_ratio(b.clone(), slope)];
        }
        let lin = a - d;
        let disc = &lin * &lin + BigInt::from(4) * b * c;
        if disc < BigInt::zero() {
            return Vec::new();
        }
        let two_c = BigInt::from(2) * c;
        let plus = Surd::new(lin.clone(), BigInt::one(), two_c.clone(), disc.clone());
        let minus = Surd::new(lin, -BigInt::one(), two_c, disc);
        if plus == minus {
            vec![plus]
        } else {
            vec![plus, minus]
        }
    }
}

fn ncf_step(a: u32) -> Mobius {
    // z ↦ 1/(a − z)
    Mobius([BigInt::zero(), BigInt::one(), -BigInt::one(), BigInt::from(a)])
}

fn rcf_step(a: u32) -> Mobius {
    // z ↦ 1/(a + z)
    Mobius([BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::from(a)])
}

fn in_open_unit(x: &Surd) -> bool {
    x.is_positive() && *x < Surd::one()
}

/// Exact value of `⟨pre…, period, period, …⟩` as a quadratic surd.
pub fn surd_from_periodic_ncf(preperiod: &[u32], period: &[u32]) -> Result<Surd> {
    if period.is_empty() {
        return Err(Error::InvalidInput("period must be nonempty".into()));
    }
    if let Some(bad) = preperiod.iter().chain(period).find(|&&a| a < 2) {
        return Err(Error::InvalidInput(format!(
            "negative continued fraction digits must be at least 2, got {bad}"
        )));
    }
    if period.iter().all(|&a| a == 2) {
        return Err(Error::DegeneratePeriod);
    }
    let cycle = period.iter().fold(Mobius::identity(), |m, &a| m.then(&ncf_step(a)));
    let root = cycle
        .fixed_points()
        .into_iter()
        .filter(in_open_unit)
        .find(|y| reproduces_ncf(y, period))
        .ok_or(Error::NotInUnitInterval)?;
    let head = preperiod.iter().fold(Mobius::identity(), |m, &a| m.then(&ncf_step(a)));
    Ok(head.apply(&root))
}

/// Exact value of the regular continued fraction `[0; pre…, period, …]`.
pub fn surd_from_periodic_rcf(preperiod: &[u32], period: &[u32]) -> Result<Surd> {
    if period.is_empty() {
        return Err(Error::InvalidInput("period must be nonempty".into()));
    }
    if preperiod.iter().chain(period).any(|&a| a == 0) {
        return Err(Error::InvalidInput(
            "regular continued fraction digits must be positive".into(),
        ));
    }
    let cycle = period.iter().fold(Mobius::identity(), |m, &a| m.then(&rcf_step(a)));
    let root = cycle
        .fixed_points()
        .into_iter()
        .find(in_open_unit)
        .ok_or(Error::NotInUnitInterval)?;
    let head = preperiod.iter().fold(Mobius::identity(), |m, &a| m.then(&rcf_step(a)));
    Ok(head.apply(&root))
}

fn reproduces_ncf(y: &Surd, period: &[u32]) -> bool {
    let mut x = y.clone();
    for &a in period {
        if !in_open_unit(&x) {
            return false;
        }
        let inv = x.recip();
        if inv.ceil() != BigInt::from(a) {
            return false;
        }
        x = &Surd::from_int(a) - &inv;
    }
    true
}
