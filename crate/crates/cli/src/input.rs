//! Parsing of the `α` and `β` specifications accepted on the command line.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use inhomog_core::{NcfExpansion, PeriodicWord, RealHandle, Surd};

/// A malformed flag value. Reported with exit status 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn digit_list(s: &str) -> anyhow::Result<Vec<u32>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|d| {
            d.trim()
                .parse::<u32>()
                .map_err(|_| usage(format!("`{d}` is not a digit")))
        })
        .collect()
}

fn pre_and_period(body: &str, what: &str) -> anyhow::Result<(Vec<u32>, Vec<u32>)> {
    let (pre, period) = body
        .split_once(';')
        .ok_or_else(|| usage(format!("{what} needs the form `pre;period`, got `{body}`")))?;
    let period = digit_list(period)?;
    if period.is_empty() {
        return Err(usage(format!("{what} has an empty period")));
    }
    Ok((digit_list(pre)?, period))
}

fn ratio(body: &str) -> anyhow::Result<(BigInt, BigInt)> {
    let (p, q) = body
        .split_once('/')
        .ok_or_else(|| usage(format!("expected `p/q`, got `{body}`")))?;
    let p: BigInt = p.trim().parse().map_err(|_| usage(format!("bad numerator `{p}`")))?;
    let q: BigInt = q.trim().parse().map_err(|_| usage(format!("bad denominator `{q}`")))?;
    if q == BigInt::from(0) {
        return Err(usage("zero denominator"));
    }
    Ok((p, q))
}

/// `ncf:pre;period`, `rcf:pre;period` or `rational:p/q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlphaSpec {
    Negative { pre: Vec<u32>, period: Vec<u32> },
    Regular { pre: Vec<u32>, period: Vec<u32> },
    Rational { p: BigInt, q: BigInt },
}

impl FromStr for AlphaSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| usage(format!("alpha `{s}` lacks a `ncf:`, `rcf:` or `rational:` prefix")))?;
        match kind {
            "ncf" => {
                let (pre, period) = pre_and_period(body, "ncf")?;
                Ok(AlphaSpec::Negative { pre, period })
            }
            "rcf" => {
                let (pre, period) = pre_and_period(body, "rcf")?;
                Ok(AlphaSpec::Regular { pre, period })
            }
            "rational" => {
                let (p, q) = ratio(body)?;
                Ok(AlphaSpec::Rational { p, q })
            }
            other => Err(usage(format!("unknown alpha kind `{other}`"))),
        }
    }
}

impl AlphaSpec {
    pub fn expansion(&self) -> inhomog_core::Result<NcfExpansion> {
        match self {
            AlphaSpec::Negative { pre, period } => NcfExpansion::periodic(pre, period),
            AlphaSpec::Regular { pre, period } => NcfExpansion::from_regular_periodic(pre, period),
            AlphaSpec::Rational { p, q } => NcfExpansion::from_handle(RealHandle::rational(p.clone(), q.clone())),
        }
    }
}

/// `β` as a rational `p/q` or as Davenport digits relative to `α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BetaSpec {
    Rational(BigInt, BigInt),
    Digits(PeriodicWord),
}

impl BetaSpec {
    pub fn parse(rational: Option<&str>, digits: Option<&str>) -> anyhow::Result<BetaSpec> {
        match (rational, digits) {
            (Some(r), None) => {
                let (p, q) = ratio(r)?;
                Ok(BetaSpec::Rational(p, q))
            }
            (None, Some(d)) => {
                let word = if d.contains(';') {
                    let (pre, period) = pre_and_period(d, "beta digits")?;
                    PeriodicWord::new(pre, period)?
                } else {
                    PeriodicWord::finite(digit_list(d)?)
                };
                Ok(BetaSpec::Digits(word))
            }
            _ => Err(usage("give exactly one of --beta and --beta-digits")),
        }
    }

    pub fn value(&self, alpha: &NcfExpansion) -> inhomog_core::Result<Surd> {
        match self {
            BetaSpec::Rational(p, q) => Ok(Surd::from_ratio(p.clone(), q.clone())),
            BetaSpec::Digits(word) => alpha.weighted_sum(word),
        }
    }
}

/// `auto` or an explicit number.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Auto {
    Auto,
    Value(usize),
}

impl FromStr for Auto {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(Auto::Auto);
        }
        s.parse()
            .map(Auto::Value)
            .map_err(|_| format!("expected `auto` or a nonnegative integer, got `{s}`"))
    }
}
