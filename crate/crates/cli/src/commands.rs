//! One adapter per subcommand: build library inputs, call the library,
//! render the result.

use std::fmt::Write as _;

use anyhow::Result;
use num_bigint::BigInt;
use serde_json::{json, Value};

use inhomog_core::cantor::{dissect, hall_condition_check, smallest_passing_s, Dissection, SetKind};
use inhomog_core::expansions::{davenport_digits, davenport_sum, ostrowski, ostrowski_validate};
use inhomog_core::figure::run_figure;
use inhomog_core::hallray::{chain_at, chain_from, construct, limit_pair, witness_words, SchedulePolicy};
use inhomog_core::ncf::int_json;
use inhomog_core::spectrum::{mplus_oracle, mplus_truncated, two_sided};
use inhomog_core::{Execution, NcfExpansion, RealHandle};

use crate::input::{AlphaSpec, Auto, BetaSpec, UsageError};
use crate::Format;

fn unsupported(cmd: &str, format: Format) -> anyhow::Error {
    UsageError(format!("`{cmd}` does not support --format {format:?}").to_lowercase()).into()
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

pub fn ncf(alpha: &AlphaSpec, terms: usize, format: Format, precision: usize) -> Result<String> {
    let a = alpha.expansion()?;
    match format {
        Format::Json => {
            let mut v = a.to_json(terms)?;
            v["value"] = json!(a.source().to_decimal(precision));
            Ok(pretty(&v))
        }
        Format::Csv => {
            let prefix = a.digits(terms)?;
            let conv = a.convergents(prefix.digits.len())?;
            let mut out = String::from("i,digit,p,q\n");
            for (i, (d, (p, q))) in prefix.digits.iter().zip(conv).enumerate() {
                let _ = writeln!(out, "{},{d},{p},{q}", i + 1);
            }
            Ok(out)
        }
        Format::Svg => Err(unsupported("ncf", format)),
    }
}

pub fn ostrowski_cmd(alpha: &AlphaSpec, q: &BigInt, format: Format) -> Result<String> {
    let a = alpha.expansion()?;
    let exp = ostrowski(q, &a)?;
    match format {
        Format::Json => Ok(pretty(&json!({
            "q": int_json(q),
            "coefficients": exp.coefficients,
            "valid": ostrowski_validate(&exp.coefficients, &a)?,
        }))),
        Format::Csv => {
            let mut out = String::from("k,coefficient,q_k_minus_1\n");
            for (k, c) in exp.coefficients.iter().enumerate() {
                let _ = writeln!(out, "{},{c},{}", k + 1, a.q(k)?);
            }
            Ok(out)
        }
        Format::Svg => Err(unsupported("ostrowski", format)),
    }
}

pub fn davenport(alpha: &AlphaSpec, beta: &BetaSpec, depth: usize, format: Format, precision: usize) -> Result<String> {
    let a = alpha.expansion()?;
    let b = beta.value(&a)?;
    let digits = davenport_digits(&RealHandle::from_surd(b), &a, depth)?;
    match format {
        Format::Json => {
            let sum = davenport_sum(&digits, &a, depth)?;
            let mut v = digits.to_json(&a);
            v["sum"] = json!([sum.lo.to_decimal(precision), sum.hi.to_decimal(precision)]);
            Ok(pretty(&v))
        }
        Format::Csv => {
            let mut out = String::from("k,digit\n");
            for (k, d) in digits.digits.iter().enumerate() {
                let _ = writeln!(out, "{},{d}", k + 1);
            }
            Ok(out)
        }
        Format::Svg => Err(unsupported("davenport", format)),
    }
}

pub fn spectrum(
    alpha: &AlphaSpec,
    beta: &BetaSpec,
    depth: usize,
    both_sides: bool,
    format: Format,
    precision: usize,
) -> Result<String> {
    let a = alpha.expansion()?;
    let b = beta.value(&a)?;
    let est = if both_sides {
        two_sided(&b, &a, depth)?
    } else {
        mplus_truncated(&b, &a, depth)?
    };
    match format {
        Format::Json => Ok(pretty(&est.to_json(precision))),
        Format::Csv => {
            let v = est.to_json(precision);
            Ok(format!(
                "lower,upper,depth_used,method,routed_homogeneous\n{},{},{},{},{}\n",
                v["lower"].as_str().unwrap_or_default(),
                v["upper"].as_str().unwrap_or_default(),
                est.depth_used,
                v["method"].as_str().unwrap_or_default(),
                est.routed_homogeneous
            ))
        }
        Format::Svg => Err(unsupported("spectrum", format)),
    }
}

pub fn oracle(alpha: &AlphaSpec, beta: &BetaSpec, qmax: u64, exec: Execution, format: Format) -> Result<String> {
    let a = alpha.expansion()?;
    a.require_infinite()?;
    let b = beta.value(&a)?;
    let table = mplus_oracle(&RealHandle::from_surd(b), &a, qmax, exec)?;
    match format {
        Format::Json => {
            let windows: Vec<Value> = table
                .windows
                .iter()
                .map(|w| {
                    json!({
                        "qLo": w.q_lo,
                        "qHi": w.q_hi,
                        "minLo": w.min_lo.to_string(),
                        "minHi": w.min_hi.to_string(),
                    })
                })
                .collect();
            let bracket = table
                .late_bracket()
                .map(|(lo, hi)| json!([lo.to_string(), hi.to_string()]));
            Ok(pretty(
                &json!({"qmax": qmax, "windows": windows, "lateBracket": bracket}),
            ))
        }
        Format::Csv => Ok(table.to_csv()),
        Format::Svg => Err(unsupported("oracle", format)),
    }
}

pub fn dissect_cmd(
    alpha: &AlphaSpec,
    set: SetKind,
    s: usize,
    depth: usize,
    exec: Execution,
    format: Format,
    precision: usize,
) -> Result<String> {
    let a = alpha.expansion()?;
    let tree = dissect(set, &a, s, depth, exec)?;
    match format {
        Format::Json => Ok(pretty(&tree.to_json(precision))),
        Format::Svg => Ok(tree.to_svg()),
        Format::Csv => Err(unsupported("dissect", format)),
    }
}

pub fn hallcheck(
    alpha: &AlphaSpec,
    s: Auto,
    depth: usize,
    max_s: usize,
    exec: Execution,
    format: Format,
) -> Result<String> {
    if format != Format::Json {
        return Err(unsupported("hallcheck", format));
    }
    let a = alpha.expansion()?;
    let v = match s {
        Auto::Auto => match smallest_passing_s(&a, depth, max_s, exec)? {
            Some(found) => json!({
                "s": found.s,
                "depth": depth,
                "passes": true,
                "e": found.e,
                "f": found.f,
            }),
            None => json!({"s": null, "depth": depth, "maxS": max_s, "passes": false}),
        },
        Auto::Value(s) => {
            let e = hall_condition_check(&Dissection::new(SetKind::E, &a, s)?, depth, exec)?;
            let f = hall_condition_check(&Dissection::new(SetKind::F, &a, s)?, depth, exec)?;
            json!({
                "s": s,
                "depth": depth,
                "passes": e.passes() && f.passes(),
                "e": e,
                "f": f,
            })
        }
    };
    Ok(pretty(&v))
}

pub struct ConstructArgs {
    pub s: Auto,
    pub r: Auto,
    pub policy: SchedulePolicy,
    pub word_depth: usize,
    pub hall_depth: usize,
    pub qmax: Option<u64>,
}

fn resolve_s(a: &NcfExpansion, s: Auto, hall_depth: usize, exec: Execution) -> Result<usize> {
    match s {
        Auto::Value(s) => Ok(s),
        Auto::Auto => smallest_passing_s(a, hall_depth, 40, exec)?
            .map(|found| found.s)
            .ok_or_else(|| inhomog_core::Error::HallConditionFailed { depth: hall_depth }.into()),
    }
}

pub fn construct_cmd(
    alpha: &AlphaSpec,
    args: &ConstructArgs,
    exec: Execution,
    format: Format,
    precision: usize,
) -> Result<String> {
    if format != Format::Json {
        return Err(unsupported("construct", format));
    }
    let a = alpha.expansion()?;
    let s = resolve_s(&a, args.s, args.hall_depth, exec)?;
    let r = match args.r {
        Auto::Value(r) => r,
        Auto::Auto => s * a.structural_bounds()?.zero_block_factor as usize,
    };
    let pair = limit_pair(&a, args.policy)?;
    let (e, f) = witness_words(&pair, r, s, args.word_depth)?;
    let report = construct(&pair, &e, &f, r, s, args.qmax, exec)?;
    Ok(pretty(&report.to_json(precision)))
}

pub fn chain(alpha: &AlphaSpec, r0: Auto, count: usize, format: Format, precision: usize) -> Result<String> {
    let a = alpha.expansion()?;
    let pair = limit_pair(&a, SchedulePolicy::default())?;
    let report = match r0 {
        Auto::Auto => chain_from(&pair, 1, count)?,
        Auto::Value(r0) => chain_at(&pair, r0, count)?,
    };
    match format {
        Format::Json => Ok(pretty(&report.to_json(precision))),
        Format::Csv => {
            let mut out = String::from("r,s,lo,hi,overlaps_next\n");
            for link in &report.links {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    link.r,
                    link.s,
                    link.lo.to_decimal(precision),
                    link.hi.to_decimal(precision),
                    link.overlaps_next
                );
            }
            Ok(out)
        }
        Format::Svg => Err(unsupported("chain", format)),
    }
}

pub fn figure(alpha: &AlphaSpec, levels: usize, format: Format, precision: usize) -> Result<String> {
    let a = alpha.expansion()?;
    let fig = run_figure(&a, levels)?;
    match format {
        Format::Svg => Ok(fig.to_svg()),
        Format::Json => {
            let rows: Vec<Value> = (1..fig.levels.len())
                .map(|n| {
                    let c = fig.counts(n);
                    let segments: Vec<Value> = fig.levels[n]
                        .iter()
                        .map(|s| {
                            json!({
                                "start": s.start.to_decimal(precision),
                                "length": s.length.to_decimal(precision),
                                "long": s.long,
                                "parent": s.parent,
                            })
                        })
                        .collect();
                    json!({"level": n, "long": c.long, "short": c.short, "segments": segments})
                })
                .collect();
            Ok(pretty(&json!({"levels": rows})))
        }
        Format::Csv => {
            let mut out = String::from("level,index,start,length,kind,parent\n");
            for (n, row) in fig.levels.iter().enumerate().skip(1) {
                for (i, s) in row.iter().enumerate() {
                    let _ = writeln!(
                        out,
                        "{n},{i},{},{},{},{}",
                        s.start.to_decimal(precision),
                        s.length.to_decimal(precision),
                        if s.long { "long" } else { "short" },
                        s.parent.map_or(String::new(), |p| p.to_string())
                    );
                }
            }
            Ok(out)
        }
    }
}
