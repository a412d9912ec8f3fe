//! End-to-end acceptance checks, one test per criterion.
//!
//! Each test writes a single `criterion N: PASS|FAIL ...` line straight to
//! stdout so the summary is visible without `--nocapture`.

use std::collections::BTreeMap;
use std::io::Write as _;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use inhomog_core::cantor::{product_window, smallest_passing_s};
use inhomog_core::expansions::{davenport_digits, davenport_sum, davenport_valid, ostrowski, ostrowski_validate};
use inhomog_core::figure::{run_figure, Counts};
use inhomog_core::hallray::{chain_from, construct, limit_pair, witness_words, SchedulePolicy};
use inhomog_core::spectrum::{exact_periodic, gda_check, mplus_oracle};
use inhomog_core::{Execution, NcfExpansion, PeriodicWord, RealHandle, Surd};

fn report(n: u32, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "criterion {n}: {verdict}  {detail}");
    let _ = out.flush();
}

fn five_three() -> NcfExpansion {
    NcfExpansion::periodic(&[], &[5, 3]).unwrap()
}

fn three_two_two() -> NcfExpansion {
    NcfExpansion::periodic(&[], &[3, 2, 2]).unwrap()
}

/// Valid, normalized, purely periodic digit words over `⟨5,3⟩` with period
/// length 1, 2 or 4 and value below 1.
fn periodic_streams(alpha: &NcfExpansion) -> Vec<PeriodicWord> {
    let mut words = Vec::new();
    for len in [1usize, 2, 4] {
        let total: u32 = (0..len).map(|k| alpha.digit(k + 1).unwrap()).product();
        for code in 0..total {
            let mut c = code;
            let mut period = Vec::with_capacity(len);
            for k in 0..len {
                let a = alpha.digit(k + 1).unwrap();
                period.push(c % a);
                c /= a;
            }
            let w = PeriodicWord::purely_periodic(period).unwrap();
            if w.normalized() != w || w.is_eventually_zero() || !davenport_valid(&w, alpha, 40).unwrap() {
                continue;
            }
            if alpha.weighted_sum(&w).unwrap() >= Surd::one() {
                continue;
            }
            words.push(w);
        }
    }
    words
}

#[test]
fn criterion_1_exact_value_inside_oracle_bracket() {
    let alpha = five_three();
    let started = Instant::now();
    let all = periodic_streams(&alpha);
    assert!(all.len() >= 20, "only {} streams", all.len());
    let stride = all.len() / 20;
    let chosen: Vec<&PeriodicWord> = all.iter().step_by(stride).take(20).collect();
    let mut outside = Vec::new();
    for w in &chosen {
        let exact = exact_periodic(w, &alpha).unwrap().value;
        let beta = RealHandle::from_surd(alpha.weighted_sum(w).unwrap());
        let table = mplus_oracle(&beta, &alpha, 1_000_000, Execution::Parallel).unwrap();
        let (lo, hi) = table.late_bracket().unwrap();
        let inside = Surd::from_rational(&lo) <= exact && exact <= Surd::from_rational(&hi);
        if !inside {
            outside.push(w.period.clone());
        }
    }
    let elapsed = started.elapsed();
    let pass = outside.is_empty() && elapsed <= Duration::from_secs(60);
    report(
        1,
        pass,
        &format!(
            "{} streams, {} outside their bracket, {:.1}s",
            chosen.len(),
            outside.len(),
            elapsed.as_secs_f64()
        ),
    );
    assert!(outside.is_empty(), "outside: {outside:?}");
    assert!(elapsed <= Duration::from_secs(60), "took {elapsed:?}");
}

/// A random eventually periodic `α` with digits in `2..=4` and a random
/// rational `β`, drawn until `q_23` stays small enough for the scan.
fn random_pair(rng: &mut ChaCha8Rng) -> (NcfExpansion, Surd) {
    loop {
        let pre_len = rng.gen_range(0..3);
        let per_len = rng.gen_range(1..5);
        let draw = |rng: &mut ChaCha8Rng| {
            let x: f64 = rng.gen();
            if x < 0.7 {
                2
            } else if x < 0.9 {
                3
            } else {
                4
            }
        };
        let pre: Vec<u32> = (0..pre_len).map(|_| draw(rng)).collect();
        let mut per: Vec<u32> = (0..per_len).map(|_| draw(rng)).collect();
        if per.iter().all(|&a| a == 2) {
            per[0] = 3;
        }
        let alpha = NcfExpansion::periodic(&pre, &per).unwrap();
        if alpha.q(23).unwrap() > BigInt::from(3_000_000u64) {
            continue;
        }
        let den: i64 = rng.gen_range(2..1000);
        let num: i64 = rng.gen_range(1..den);
        return (alpha, Surd::from_ratio(num, den));
    }
}

#[test]
fn criterion_2_level_lower_bound_survey() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut violations = 0usize;
    let mut scanned = 0u64;
    for _ in 0..200 {
        let (alpha, beta) = random_pair(&mut rng);
        let rep = gda_check(&beta, &alpha, 22, Execution::Parallel).unwrap();
        assert_eq!(rep.levels_checked, 22);
        violations += rep.violations.len();
        scanned += rep.q_checked;
    }
    let pass = violations == 0;
    report(
        2,
        pass,
        &format!("200 pairs, {scanned} q scanned, {violations} violations"),
    );
    assert!(pass);
}

/// Number of admissible coefficient vectors for every `q ≤ limit`.
fn count_valid_vectors(alpha: &NcfExpansion, limit: u64) -> BTreeMap<u64, Vec<Vec<u32>>> {
    let mut bases = Vec::new();
    let mut k = 0;
    loop {
        let q = alpha.q(k).unwrap().to_u64().unwrap();
        if q > limit {
            break;
        }
        bases.push(q);
        k += 1;
    }
    let mut found: BTreeMap<u64, Vec<Vec<u32>>> = BTreeMap::new();
    let mut prefix = Vec::new();
    extend(alpha, &bases, limit, 0, &mut prefix, &mut found);
    found
}

fn extend(
    alpha: &NcfExpansion,
    bases: &[u64],
    limit: u64,
    total: u64,
    prefix: &mut Vec<u32>,
    found: &mut BTreeMap<u64, Vec<Vec<u32>>>,
) {
    if total > 0 && ostrowski_validate(prefix, alpha).unwrap() {
        found.entry(total).or_default().push(prefix.clone());
    }
    let k = prefix.len();
    if k == bases.len() {
        return;
    }
    let a = alpha.digit(k + 1).unwrap();
    for c in 0..a {
        let next = total + u64::from(c) * bases[k];
        if next > limit {
            break;
        }
        prefix.push(c);
        extend(alpha, bases, limit, next, prefix, found);
        prefix.pop();
    }
}

#[test]
fn criterion_3_ostrowski_uniqueness() {
    let alphas = [
        five_three(),
        three_two_two(),
        NcfExpansion::periodic(&[2, 4], &[3, 2]).unwrap(),
    ];
    let mut failures = Vec::new();
    for (i, alpha) in alphas.iter().enumerate() {
        let found = count_valid_vectors(alpha, 500);
        for q in 1..=500u64 {
            let greedy = ostrowski(&BigInt::from(q), alpha).unwrap().coefficients;
            match found.get(&q).map(Vec::as_slice) {
                Some([only]) if *only == greedy => {}
                other => failures.push(format!("alpha {i}, q = {q}: {other:?} vs greedy {greedy:?}")),
            }
        }
        for q in 1..=100_000u64 {
            let exp = ostrowski(&BigInt::from(q), alpha).unwrap();
            if !ostrowski_validate(&exp.coefficients, alpha).unwrap() || exp.value(alpha).unwrap() != BigInt::from(q) {
                failures.push(format!("alpha {i}, q = {q}: greedy output invalid"));
            }
        }
    }
    let pass = failures.is_empty();
    report(3, pass, &format!("3 alphas, {} failures", failures.len()));
    assert!(pass, "{:?}", &failures[..failures.len().min(5)]);
}

#[test]
fn criterion_4_davenport_round_trip() {
    let alphas = [five_three(), three_two_two()];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut failures = Vec::new();
    for i in 0..1000 {
        let alpha = &alphas[i % alphas.len()];
        let den: i64 = rng.gen_range(2..100_000);
        let num: i64 = rng.gen_range(0..den);
        let beta = Surd::from_ratio(num, den);
        let digits = davenport_digits(&RealHandle::from_surd(beta.clone()), alpha, 60).unwrap();
        let sum = davenport_sum(&digits, alpha, 60).unwrap();
        let narrow = sum.width() <= alpha.d(60).unwrap();
        let valid = davenport_valid(&PeriodicWord::finite(digits.digits.clone()), alpha, 60).unwrap();
        if !(narrow && sum.contains(&beta) && valid) {
            failures.push(format!("{num}/{den}"));
        }
    }
    let pass = failures.is_empty();
    report(4, pass, &format!("1000 rationals, {} failures", failures.len()));
    assert!(pass, "{failures:?}");
}

#[test]
fn criterion_5_hall_condition() {
    let mut details = Vec::new();
    let mut pass = true;
    for (name, alpha) in [("<5,3>", five_three()), ("<3,2,2>", three_two_two())] {
        match smallest_passing_s(&alpha, 10, 40, Execution::Parallel).unwrap() {
            Some(found) => {
                let bad = found.e.violation_count + found.f.violation_count;
                pass &= bad == 0 && found.e.depth == 10 && found.f.depth == 10;
                details.push(format!(
                    "{name} s0 = {} ({} pairs, {bad} violations)",
                    found.s,
                    found.e.pairs_checked + found.f.pairs_checked
                ));
            }
            None => {
                pass = false;
                details.push(format!("{name} no passing s up to 40"));
            }
        }
    }
    report(5, pass, &details.join("; "));
    assert!(pass);
}

#[test]
fn criterion_6_product_window() {
    let w = product_window(1, 10).unwrap();
    let p2 = BigRational::new(511.into(), 512.into());
    let half = BigRational::new(1.into(), 2.into());
    let p1 = num_traits::pow(half, 20) / (&p2 * &p2);
    let pass = w.p2 == p2 && w.p1 == p1 && w.p2 >= w.p1 && w.nonempty;
    report(6, pass, &format!("P1 = {}, P2 = {}", w.p1, w.p2));
    assert!(pass);
    assert!(w.p1 < BigRational::one());
}

#[test]
fn criterion_7_constructive_witness() {
    let started = Instant::now();
    let alpha = five_three();
    let s0 = smallest_passing_s(&alpha, 10, 40, Execution::Parallel)
        .unwrap()
        .unwrap()
        .s;
    let l = alpha.structural_bounds().unwrap().zero_block_factor as usize;
    let r = s0 * l;
    let policy = SchedulePolicy {
        phase: 0,
        scale: 3,
        len: 15,
    };
    let pair = limit_pair(&alpha, policy).unwrap();
    let (e, f) = witness_words(&pair, r, s0, 3).unwrap();
    let rep = construct(&pair, &e, &f, r, s0, Some(10_000_000), Execution::Parallel).unwrap();
    let trace = &rep.lambda;
    let window: Vec<_> = trace.points.iter().filter(|p| (5..=12).contains(&p.index)).collect();
    let decreasing = window.len() == 8 && window.windows(2).all(|p| p[1].gap < p[0].gap);
    let last = trace.points.last().unwrap();
    let below_bound = last.gap <= last.bound;
    let oracle = rep.oracle.as_ref().unwrap();
    let elapsed = started.elapsed();
    let pass = decreasing && below_bound && oracle.holds && elapsed <= Duration::from_secs(600);
    report(
        7,
        pass,
        &format!(
            "s0 = {s0}, r = {r}, target {:.6e}, final gap {:.3e} <= bound {:.3e}, oracle q <= 1e7 holds: {}, {:.1}s",
            trace.target.to_f64(),
            last.gap.to_f64(),
            last.bound.to_f64(),
            oracle.holds,
            elapsed.as_secs_f64()
        ),
    );
    assert!(decreasing, "gaps over i = 5..12 do not decrease");
    assert!(below_bound);
    assert!(oracle.holds);
    assert!(elapsed <= Duration::from_secs(600));
}

#[test]
fn criterion_8_chain_overlap() {
    let alpha = five_three();
    let s0 = smallest_passing_s(&alpha, 10, 40, Execution::Parallel)
        .unwrap()
        .unwrap()
        .s;
    let pair = limit_pair(&alpha, SchedulePolicy::default()).unwrap();
    let chain = chain_from(&pair, s0, 20).unwrap();
    let pass = chain.links.len() == 21 && chain.all_overlap && chain.right_ends_decreasing;
    report(
        8,
        pass,
        &format!(
            "r0 = {} (s = {}), {} links, all overlap: {}, right ends decreasing: {}",
            chain.r0,
            chain.s0,
            chain.links.len(),
            chain.all_overlap,
            chain.right_ends_decreasing
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_9_figure_counts() {
    let alpha = five_three();
    let fig = run_figure(&alpha, 2).unwrap();
    let level1 = fig.counts(1) == Counts { long: 4, short: 1 };
    let in_long = (0..4).all(|p| fig.children_counts(2, p) == Counts { long: 2, short: 1 });
    let in_short = fig.children_counts(2, 4) == Counts { long: 1, short: 1 };
    let alpha_value = alpha.exact_value("figure").unwrap();
    let long_width = fig.levels[1].iter().filter(|s| s.long).all(|s| s.length == alpha_value);
    let svg = fig.to_svg();
    let identical = run_figure(&five_three(), 2).unwrap().to_svg().into_bytes() == svg.as_bytes();
    let pass = level1 && in_long && in_short && long_width && identical;
    report(
        9,
        pass,
        &format!(
            "level 1 {:?}, level 2 {:?}, svg {} bytes identical: {identical}",
            fig.counts(1),
            fig.counts(2),
            svg.len()
        ),
    );
    assert!(pass);
}
