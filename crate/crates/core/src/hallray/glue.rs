//! Assembly of a digit stream `b_1, b_2, …` whose `λ_{K(i)}` converge to
//! `e·f·D⁺_r/(1 − α⁻α⁺)`.
//!
//! Between consecutive schedule points the stream reads
//!
//! ```text
//! K(i) | r zeros, f_1, f_2, … | a−2 … a−3 … a−2 | …, e_2, e_1 | K(i+1)
//!      (K(i), u(i)]            (u(i), v(i))       [v(i), K(i+1)]
//! ```
//!
//! and every digit up to the first usable schedule point is zero.

use serde::Serialize;
use serde_json::{json, Value};

use crate::cantor::{membership_e, membership_f};
use crate::error::{Error, Result};
use crate::expansions::{forbidden_block_at, DavenportDigits};
use crate::spectrum::theorem98967_check;
use crate::word::PeriodicWord;

use super::limits::LimitPair;

/// Digits of `e` and `f` checked against their sets.
const MEMBERSHIP_SCAN: usize = 400;

/// Breakpoints for one gap of the schedule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Window {
    pub k: usize,
    pub u: usize,
    pub w: usize,
    pub v: usize,
    pub next_k: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluedBeta {
    pub digits: DavenportDigits,
    /// Index into the schedule of the first gap that carries the pattern.
    pub start: usize,
    /// The schedule restricted to `K(start), K(start+1), …`.
    pub schedule: Vec<usize>,
    pub windows: Vec<Window>,
    pub e: PeriodicWord,
    pub f: PeriodicWord,
    pub r: usize,
    pub s: usize,
}

impl GluedBeta {
    /// `b_j` for `1 ≤ j ≤` the number of generated digits.
    pub fn digit(&self, j: usize) -> u32 {
        self.digits.digits[j - 1]
    }

    pub fn len(&self) -> usize {
        self.digits.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.digits.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "digits": self.digits.digits,
            "start": self.start,
            "schedule": self.schedule,
            "windows": self.windows,
            "e": {"preperiod": self.e.preperiod, "period": self.e.period},
            "f": {"preperiod": self.f.preperiod, "period": self.f.period},
            "r": self.r,
            "s": self.s,
        })
    }
}

struct Pieces<'a> {
    e: &'a PeriodicWord,
    f: &'a PeriodicWord,
    r: usize,
}

impl Pieces<'_> {
    /// `b⁺_j`: `r` zeros, then the digits of `f`.
    fn plus(&self, j: usize) -> u32 {
        if j <= self.r {
            0
        } else {
            self.f.get(j - self.r - 1)
        }
    }

    /// `b⁻_j = e_j`.
    fn minus(&self, j: usize) -> u32 {
        self.e.get(j - 1)
    }
}

/// Offsets `0, 1, −1, 2, −2, …` up to `reach`.
fn outward(reach: usize) -> impl Iterator<Item = isize> {
    (0..=reach as isize).flat_map(|d| if d == 0 { vec![0] } else { vec![d, -d] })
}

fn place(pair: &LimitPair, pieces: &Pieces, k: usize, next_k: usize, n: usize, pre: usize) -> Result<Option<Window>> {
    let gap = next_k - k;
    let third = gap / 3;
    let reach = third / 2;
    for du in outward(reach) {
        let u = (k + third) as isize + du;
        if u <= (k + pieces.r) as isize {
            continue;
        }
        let u = u as usize;
        if pieces.plus(u - k) == 0 {
            continue;
        }
        let Some(w) = (u + 1..=u + n).find(|&j| pair.alpha.digit(j).is_ok_and(|a| a >= 3)) else {
            continue;
        };
        for dv in outward(reach) {
            let v = (next_k - third) as isize + dv;
            if v <= (u + n) as isize || v <= w as isize || v <= pre as isize || v as usize > next_k {
                continue;
            }
            let v = v as usize;
            if pieces.minus(next_k - v + 1) == 0 {
                continue;
            }
            return Ok(Some(Window { k, u, w, v, next_k }));
        }
    }
    Ok(None)
}

/// Builds the digits of `β` for `e ∈ E(α⁻,s)` and `f ∈ F(α⁺_{r+1},s)`.
///
/// The windows are placed at the thirds of each gap and moved outward until
/// `b_{u(i)}` and `b_{v(i)}` are nonzero. Gaps too short for that are skipped
/// at the start of the schedule; a short gap after a usable one is an error.
pub fn glue_beta(e: &PeriodicWord, f: &PeriodicWord, r: usize, s: usize, pair: &LimitPair) -> Result<GluedBeta> {
    let alpha = &pair.alpha;
    let bounds = alpha.structural_bounds()?;
    let n = bounds.two_run_bound as usize;
    if s < n {
        return Err(Error::SBelowN { s, n });
    }
    let l = bounds.zero_block_factor as usize;
    if r < s * l {
        return Err(Error::OutOfRange(format!("r = {r} is below s·L = {}", s * l)));
    }
    if !membership_e(e, &pair.alpha_minus, s, MEMBERSHIP_SCAN)? {
        return Err(Error::InvalidEF("e is not in E(α⁻, s)".into()));
    }
    let f_alpha = pair.alpha_plus.shifted(r)?;
    if !membership_f(f, &f_alpha, s, MEMBERSHIP_SCAN)? {
        return Err(Error::InvalidEF("f is not in F(α⁺_{r+1}, s)".into()));
    }
    let pre = alpha.require_periodic()?.preperiod.len();
    let pieces = Pieces { e, f, r };
    let sched = &pair.schedule;
    let mut placed: Vec<Option<Window>> = Vec::with_capacity(sched.len());
    for gap in sched.windows(2) {
        placed.push(place(pair, &pieces, gap[0], gap[1], n, pre)?);
    }
    let last_gap = placed.iter().rposition(Option::is_none).map_or(0, |i| i + 1);
    if last_gap >= placed.len() {
        return Err(Error::ScheduleTooTight(format!(
            "the last of {} gaps cannot hold r = {r} zeros and both windows",
            placed.len()
        )));
    }
    let start = last_gap;
    let windows: Vec<Window> = placed[start..].iter().map(|w| w.expect("placed")).collect();
    let end = windows.last().expect("nonempty").next_k;
    let mut digits = vec![0u32; end];
    for win in &windows {
        for j in win.k + 1..=win.u {
            digits[j - 1] = pieces.plus(j - win.k);
        }
        for j in win.u + 1..win.v {
            let a = alpha.digit(j)?;
            digits[j - 1] = if j == win.w { a - 3 } else { a - 2 };
        }
        for j in win.v..=win.next_k {
            digits[j - 1] = pieces.minus(win.next_k - j + 1);
        }
    }
    for (j, &b) in digits.iter().enumerate() {
        if b >= alpha.digit(j + 1)? {
            return Err(Error::InvalidEF(format!("digit {} exceeds a − 1", j + 1)));
        }
    }
    if let Some((i, j)) = forbidden_block_at(&digits, alpha)? {
        return Err(Error::InvalidEF(format!("forbidden block at {i}..={j}")));
    }
    let schedule = sched[start..].to_vec();
    if !theorem98967_check(&digits, alpha, r, s, &schedule)? {
        return Err(Error::InvalidEF("block conditions on the glued digits fail".into()));
    }
    Ok(GluedBeta {
        digits: DavenportDigits {
            digits,
            finite_support: None,
            residual: None,
            periodic: None,
        },
        start,
        schedule,
        windows,
        e: e.clone(),
        f: f.clone(),
        r,
        s,
    })
}
