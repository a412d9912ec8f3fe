//! Digit patterns under which `ℳ₊` is read off a subsequence of `λ_n`.

use crate::error::Result;
use crate::ncf::NcfExpansion;

/// Whether the digit prefix `b_1, b_2, …` satisfies the block conditions for
/// parameters `r`, `s` and the schedule `k(1) < k(2) < …`:
///
/// 1. `b_{k(i)+1..=k(i)+r}` are all zero,
/// 2. no `N+s` consecutive zeros lie in `(k(i)+r, k(i+1)]`,
/// 3. no block `a_j−1, a_{j+1}−2, …, a_{j+N+s−1}−2` occurs.
///
/// Only schedule gaps that fit in the prefix are checked. A schedule violating
/// `r ≥ sL` or `k(i+1) > k(i)+r`, and a prefix of zeros, give `false`.
pub fn theorem98967_check(
    digits: &[u32],
    alpha: &NcfExpansion,
    r: usize,
    s: usize,
    schedule: &[usize],
) -> Result<bool> {
    let bounds = alpha.structural_bounds()?;
    let run = bounds.two_run_bound as usize + s;
    if s == 0 || r < s * bounds.zero_block_factor as usize || schedule.is_empty() {
        return Ok(false);
    }
    if schedule.windows(2).any(|w| w[1] <= w[0] + r) {
        return Ok(false);
    }
    if digits.iter().all(|&b| b == 0) {
        return Ok(false);
    }
    let b = |k: usize| digits[k - 1];
    for (i, &k) in schedule.iter().enumerate() {
        if k + r > digits.len() {
            break;
        }
        if (k + 1..=k + r).any(|j| b(j) != 0) {
            return Ok(false);
        }
        let Some(&next) = schedule.get(i + 1) else { break };
        if next > digits.len() {
            break;
        }
        let mut zeros = 0;
        for j in k + r + 1..=next {
            zeros = if b(j) == 0 { zeros + 1 } else { 0 };
            if zeros >= run {
                return Ok(false);
            }
        }
    }
    let mut short = 0;
    for j in 1..=digits.len() {
        let a = alpha.digit(j)?;
        short = if b(j) + 1 == a {
            1
        } else if short > 0 && b(j) + 2 == a {
            short + 1
        } else {
            0
        };
        if short >= run {
            return Ok(false);
        }
    }
    Ok(true)
}
