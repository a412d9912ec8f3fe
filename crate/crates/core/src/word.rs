use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An eventually periodic digit word `pre, period, period, …`, indexed from 0.
///
/// Finite words are encoded with the period `[0]`, so "digits beyond the end
/// are zero" falls out of the same representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PeriodicWord {
    pub preperiod: Vec<u32>,
    pub period: Vec<u32>,
}

impl PeriodicWord {
    pub fn new(preperiod: Vec<u32>, period: Vec<u32>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidInput("period must be nonempty".into()));
        }
        Ok(PeriodicWord { preperiod, period })
    }

    pub fn finite(digits: Vec<u32>) -> Self {
        PeriodicWord {
            preperiod: digits,
            period: vec![0],
        }
    }

    pub fn purely_periodic(period: Vec<u32>) -> Result<Self> {
        Self::new(Vec::new(), period)
    }

    pub fn get(&self, i: usize) -> u32 {
        let pre = self.preperiod.len();
        if i < pre {
            self.preperiod[i]
        } else {
            self.period[(i - pre) % self.period.len()]
        }
    }

    pub fn prefix(&self, n: usize) -> Vec<u32> {
        (0..n).map(|i| self.get(i)).collect()
    }

    /// The word with its first `k` letters removed.
    pub fn shift(&self, k: usize) -> PeriodicWord {
        let pre = self.preperiod.len();
        if k <= pre {
            PeriodicWord {
                preperiod: self.preperiod[k..].to_vec(),
                period: self.period.clone(),
            }
        } else {
            let r = (k - pre) % self.period.len();
            let mut period = self.period[r..].to_vec();
            period.extend_from_slice(&self.period[..r]);
            PeriodicWord {
                preperiod: Vec::new(),
                period,
            }
        }
    }

    /// True when every letter from some point on is zero.
    pub fn is_eventually_zero(&self) -> bool {
        self.period.iter().all(|&d| d == 0)
    }

    /// Index after the last nonzero letter, for eventually-zero words.
    pub fn support_len(&self) -> Option<usize> {
        if !self.is_eventually_zero() {
            return None;
        }
        Some(self.preperiod.iter().rposition(|&d| d != 0).map_or(0, |i| i + 1))
    }

    /// Smallest index with the same infinite tail as `i`.
    pub fn canonical_index(&self, i: usize) -> usize {
        let pre = self.preperiod.len();
        if i < pre {
            i
        } else {
            pre + (i - pre) % self.period.len()
        }
    }

    /// Shortest equivalent representation: minimal period, then minimal
    /// preperiod.
    pub fn normalized(&self) -> PeriodicWord {
        let p = &self.period;
        let len = (1..=p.len())
            .find(|&l| p.len().is_multiple_of(l) && (0..p.len()).all(|i| p[i] == p[i % l]))
            .unwrap_or(p.len());
        let mut pre = self.preperiod.clone();
        let mut period = p[..len].to_vec();
        while let Some(&last) = pre.last() {
            if last != *period.last().unwrap() {
                break;
            }
            pre.pop();
            period.rotate_right(1);
        }
        PeriodicWord { preperiod: pre, period }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_and_shift() {
        let w = PeriodicWord::new(vec![7], vec![1, 2, 3]).unwrap();
        assert_eq!(w.prefix(6), vec![7, 1, 2, 3, 1, 2]);
        assert_eq!(w.shift(3).prefix(4), vec![3, 1, 2, 3]);
        assert_eq!(w.canonical_index(5), 2);
    }

    #[test]
    fn normalization() {
        let w = PeriodicWord::new(vec![4, 1, 2], vec![1, 2, 1, 2]).unwrap();
        let n = w.normalized();
        assert_eq!(n, PeriodicWord::new(vec![4], vec![1, 2]).unwrap());
        assert_eq!(n.prefix(9), w.prefix(9));
    }

    #[test]
    fn finite_support() {
        let w = PeriodicWord::finite(vec![3, 2, 0, 0]);
        assert_eq!(w.support_len(), Some(2));
        assert_eq!(w.get(10), 0);
    }
}
