//! Hall's first condition for the logarithm of a dissection: the gap between
//! two neighbouring intervals may be no longer than either of them.
//!
//! For neighbours `C₁ < C₂` this is `lo₁·lo₂ ≤ hi₁²` together with
//! `lo₂² ≤ hi₁·hi₂`, which is checked exactly.

use std::sync::atomic::{AtomicBool, Ordering};

use serde::Serialize;

use super::dissection::{Dissection, DissectionNode};
use super::{NodeKind, SetKind};
use crate::error::Result;
use crate::ncf::NcfExpansion;
use crate::par::{self, Execution};

/// Violations kept verbatim; the rest are only counted.
const KEPT_VIOLATIONS: usize = 32;
/// Subtrees handed out for parallel checking.
const FRONTIER: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HallViolation {
    pub level: usize,
    pub left: Vec<u32>,
    pub right: Vec<u32>,
    /// Whether `lo₁·lo₂ ≤ hi₁²` held.
    pub left_gap_ok: bool,
    /// Whether `lo₂² ≤ hi₁·hi₂` held.
    pub right_gap_ok: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HallReport {
    pub depth: usize,
    pub nodes_visited: u64,
    pub pairs_checked: u64,
    pub violation_count: u64,
    pub violations: Vec<HallViolation>,
    /// Neighbouring `C` nodes whose last digits are not consecutive.
    pub nonconsecutive_pairs: u64,
    /// The scan stopped at the first violation.
    pub stopped_early: bool,
}

impl HallReport {
    pub fn passes(&self) -> bool {
        self.violation_count == 0
    }

    fn merge(&mut self, other: HallReport) {
        self.nodes_visited += other.nodes_visited;
        self.pairs_checked += other.pairs_checked;
        self.violation_count += other.violation_count;
        self.nonconsecutive_pairs += other.nonconsecutive_pairs;
        self.stopped_early |= other.stopped_early;
        for v in other.violations {
            if self.violations.len() < KEPT_VIOLATIONS {
                self.violations.push(v);
            }
        }
    }

    fn check_siblings(&mut self, nodes: &[DissectionNode]) {
        let live: Vec<&DissectionNode> = nodes.iter().filter(|n| !n.is_empty()).collect();
        for pair in live.windows(2) {
            let (l, r) = (pair[0], pair[1]);
            let (l_lo, l_hi) = l.bounds().expect("nonempty");
            let (r_lo, r_hi) = r.bounds().expect("nonempty");
            let left_gap_ok = (l_lo * r_lo) <= (l_hi * l_hi);
            let right_gap_ok = (r_lo * r_lo) <= (l_hi * r_hi);
            self.pairs_checked += 1;
            if l.kind == NodeKind::C && r.kind == NodeKind::C {
                let (a, b) = (l.prefix.last(), r.prefix.last());
                if let (Some(&a), Some(&b)) = (a, b) {
                    if b != a + 1 {
                        self.nonconsecutive_pairs += 1;
                    }
                }
            }
            if !(left_gap_ok && right_gap_ok) {
                self.violation_count += 1;
                if self.violations.len() < KEPT_VIOLATIONS {
                    self.violations.push(HallViolation {
                        level: l.level(),
                        left: l.prefix.clone(),
                        right: r.prefix.clone(),
                        left_gap_ok,
                        right_gap_ok,
                    });
                }
            }
        }
    }
}

struct Scan<'a> {
    diss: &'a Dissection,
    depth: usize,
    stop_early: bool,
    stop: &'a AtomicBool,
}

impl Scan<'_> {
    fn halted(&self, report: &HallReport) -> bool {
        self.stop_early && (report.violation_count > 0 || self.stop.load(Ordering::Relaxed))
    }

    fn visit(&self, node: &DissectionNode, report: &mut HallReport) -> Result<()> {
        if node.level() >= self.depth || self.halted(report) {
            return Ok(());
        }
        let children = self.diss.children(node)?;
        report.nodes_visited += children.len() as u64;
        report.check_siblings(&children);
        if self.stop_early && report.violation_count > 0 {
            self.stop.store(true, Ordering::Relaxed);
            return Ok(());
        }
        for child in children.iter().filter(|c| !c.is_empty()) {
            self.visit(child, report)?;
        }
        Ok(())
    }
}

fn run(diss: &Dissection, depth: usize, exec: Execution, stop_early: bool) -> Result<HallReport> {
    let stop = AtomicBool::new(false);
    let scan = Scan {
        diss,
        depth,
        stop_early,
        stop: &stop,
    };
    let mut report = HallReport {
        depth,
        ..HallReport::default()
    };
    let mut frontier = diss.roots()?;
    report.nodes_visited += frontier.len() as u64;
    report.check_siblings(&frontier);
    frontier.retain(|n| !n.is_empty());
    // Expand breadth-first until there is enough independent work.
    while !frontier.is_empty() && frontier.len() < FRONTIER && frontier[0].level() < depth && !scan.halted(&report) {
        let mut next = Vec::new();
        for node in &frontier {
            let children = diss.children(node)?;
            report.nodes_visited += children.len() as u64;
            report.check_siblings(&children);
            next.extend(children.into_iter().filter(|c| !c.is_empty()));
        }
        frontier = next;
    }
    if scan.halted(&report) {
        report.stopped_early = true;
        return Ok(report);
    }
    let parts = par::map_collect(exec, &frontier, |node| {
        let mut part = HallReport::default();
        scan.visit(node, &mut part).map(|_| part)
    });
    for part in parts {
        report.merge(part?);
    }
    report.stopped_early = stop_early && report.violation_count > 0;
    Ok(report)
}

/// Checks every pair of neighbouring nonempty siblings down to `depth`.
pub fn hall_condition_check(diss: &Dissection, depth: usize, exec: Execution) -> Result<HallReport> {
    run(diss, depth, exec, false)
}

/// The smallest passing `s` with the reports for both sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PassingS {
    pub s: usize,
    pub e: HallReport,
    pub f: HallReport,
}

/// Smallest `s` in `N..=max_s` for which both dissections of `α` pass to
/// `depth`, or `None`.
pub fn smallest_passing_s(
    alpha: &NcfExpansion,
    depth: usize,
    max_s: usize,
    exec: Execution,
) -> Result<Option<PassingS>> {
    let start = alpha.structural_bounds()?.two_run_bound as usize;
    for s in start..=max_s {
        let f_diss = Dissection::new(SetKind::F, alpha, s)?;
        if !run(&f_diss, depth, exec, true)?.passes() {
            continue;
        }
        let e_diss = Dissection::new(SetKind::E, alpha, s)?;
        if !run(&e_diss, depth, exec, true)?.passes() {
            continue;
        }
        let f = hall_condition_check(&f_diss, depth, exec)?;
        let e = hall_condition_check(&e_diss, depth, exec)?;
        return Ok(Some(PassingS { s, e, f }));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_child_levels_pass_vacuously() {
        let e = NcfExpansion::periodic(&[], &[5, 3]).unwrap();
        let diss = Dissection::new(SetKind::F, &e, 3).unwrap();
        let r = hall_condition_check(&diss, 0, Execution::Sequential).unwrap();
        assert!(r.passes());
        assert_eq!(r.pairs_checked, 0);
    }

    #[test]
    fn sequential_and_parallel_reports_agree() {
        let e = NcfExpansion::periodic(&[], &[5, 3]).unwrap();
        for set in [SetKind::E, SetKind::F] {
            let diss = Dissection::new(set, &e, 4).unwrap();
            let a = hall_condition_check(&diss, 5, Execution::Sequential).unwrap();
            let b = hall_condition_check(&diss, 5, Execution::Parallel).unwrap();
            assert_eq!(a.pairs_checked, b.pairs_checked);
            assert_eq!(a.violation_count, b.violation_count);
            assert!(a.pairs_checked > 100);
        }
    }

    #[test]
    fn large_s_passes_at_small_depth() {
        let e = NcfExpansion::periodic(&[], &[5, 3]).unwrap();
        let found = smallest_passing_s(&e, 5, 40, Execution::default()).unwrap().unwrap();
        assert!(found.e.passes() && found.f.passes());
        assert_eq!(found.f.nonconsecutive_pairs, 0);
    }
}
