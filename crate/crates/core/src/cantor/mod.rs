//! The Cantor sets `E(α,s)` and `F(α,s)`: digit-constrained subsets of
//! `[0,1]` whose product contains an interval once `s` is large.
//!
//! `F(α,s)` forbids `s+1` zeros in a row and the block `a_i−1, a_{i+1}−2, …,
//! a_{i+s}−2`. `E(α,s)` forbids the zeros as well and the block `a_i−2, …,
//! a_{i+s−1}−2, a_{i+s}−1`. Both are built as nested interval dissections
//! indexed by digit prefixes.

mod automaton;
pub mod dissection;
pub mod hall;
pub mod product;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::ncf::NcfExpansion;
use crate::word::PeriodicWord;

pub use dissection::{dissect, endpoints, Dissection, DissectionNode, DissectionTree, EndpointCheck, EndpointReport};
pub use hall::{hall_condition_check, smallest_passing_s, HallReport, HallViolation, PassingS};
pub use product::{product_contains_interval_witness, product_window, ProductWindow, ProductWitness};

/// Which of the two sets a dissection builds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SetKind {
    E,
    F,
}

/// Node families: `C` for `F(α,s)`, `A` and `B` for `E(α,s)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    A,
    B,
    C,
}

fn membership(set: SetKind, digits: &PeriodicWord, alpha: &NcfExpansion, s: usize, scan: usize) -> Result<bool> {
    let s = u16::try_from(s).map_err(|_| crate::Error::OutOfRange("s above 65535".into()))?;
    automaton::scan_word(automaton::Rules { set, s }, alpha, digits, scan)
}

/// Whether the first `scan` digits avoid the blocks forbidden in `F(α,s)`.
pub fn membership_f(digits: &PeriodicWord, alpha: &NcfExpansion, s: usize, scan: usize) -> Result<bool> {
    membership(SetKind::F, digits, alpha, s, scan)
}

/// Whether the first `scan` digits avoid the blocks forbidden in `E(α,s)`.
///
/// The tail `a_i−1, a_{i+1}−2, a_{i+2}−2, …` is not a Davenport expansion
/// but its value is a limit point of the set, so it is accepted.
pub fn membership_e(digits: &PeriodicWord, alpha: &NcfExpansion, s: usize, scan: usize) -> Result<bool> {
    membership(SetKind::E, digits, alpha, s, scan)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn five_three() -> NcfExpansion {
        NcfExpansion::periodic(&[], &[5, 3]).unwrap()
    }

    #[test]
    fn all_ones_is_in_both_sets() {
        let ones = PeriodicWord::purely_periodic(vec![1]).unwrap();
        for s in 1..5 {
            assert!(membership_f(&ones, &five_three(), s, 100).unwrap());
            assert!(membership_e(&ones, &five_three(), s, 100).unwrap());
        }
    }

    #[test]
    fn zero_block_is_in_neither_set() {
        let w = PeriodicWord::new(vec![1, 0, 0, 0, 0], vec![1]).unwrap();
        assert!(!membership_f(&w, &five_three(), 3, 100).unwrap());
        assert!(!membership_e(&w, &five_three(), 3, 100).unwrap());
        let zeros = PeriodicWord::purely_periodic(vec![0]).unwrap();
        assert!(!membership_e(&zeros, &five_three(), 3, 100).unwrap());
    }

    #[test]
    fn f_pattern_is_rejected_by_f_only() {
        // 4, 1, 3, 1 is a_1−1 followed by three a−2 digits.
        let w = PeriodicWord::new(vec![4, 1, 3, 1], vec![1]).unwrap();
        assert!(!membership_f(&w, &five_three(), 3, 100).unwrap());
        assert!(membership_e(&w, &five_three(), 3, 100).unwrap());
    }

    #[test]
    fn e_pattern_is_rejected_by_e_only() {
        // 3, 1, 3, 2 is three a−2 digits followed by a_4−1.
        let w = PeriodicWord::new(vec![3, 1, 3, 2], vec![1]).unwrap();
        assert!(!membership_e(&w, &five_three(), 3, 100).unwrap());
        assert!(membership_f(&w, &five_three(), 3, 100).unwrap());
    }

    #[test]
    fn twos_tail_after_a_prefix_is_in_e() {
        // c, a_{n+1}−2, a_{n+2}−2, … with c = (1, 2).
        let w = PeriodicWord::new(vec![1, 2], vec![3, 1]).unwrap();
        assert!(membership_e(&w, &five_three(), 3, 100).unwrap());
        // The same tail behind a_1−1 is the upper end of B().
        let top = PeriodicWord::new(vec![4], vec![1, 3]).unwrap();
        assert!(membership_e(&top, &five_three(), 3, 100).unwrap());
    }
}
