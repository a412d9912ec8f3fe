//! Nested interval dissections of `E(α,s)` and `F(α,s)`.
//!
//! A `C` node is the hull of the points of `F(α,s)` whose digits start with
//! the node prefix `c_1, …, c_n`. An `A` node keeps the points of `E(α,s)`
//! with that prefix lying in `[S, S + D_n − D_{n+1}]`, a `B` node those in
//! `(S + D_n − D_{n+1}, S + D_n]`, where `S = Σ c_k D_k`.
//!
//! Endpoints are the values of the lexicographically extreme admissible
//! continuations, found with the automaton in [`super::automaton`]. They are
//! exact surds, and a node is empty precisely when no continuation exists.

use std::fmt::Write as _;
use std::sync::Mutex;

use serde::Serialize;
use serde_json::{json, Value};

use super::automaton::{Automaton, Cursor, Mode, Side};
use super::{NodeKind, SetKind};
use crate::error::{Error, Result};
use crate::ncf::{NcfExpansion, StructuralBounds};
use crate::numerics::Surd;
use crate::par::{self, Execution};
use crate::word::PeriodicWord;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DissectionNode {
    pub kind: NodeKind,
    pub prefix: Vec<u32>,
    /// `S = Σ c_k D_k` over the prefix.
    pub sum: Surd,
    /// `None` for an empty node.
    pub lower: Option<Surd>,
    pub upper: Option<Surd>,
    #[serde(skip)]
    cursor: Option<Cursor>,
}

impl DissectionNode {
    pub fn level(&self) -> usize {
        self.prefix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_none()
    }

    pub fn bounds(&self) -> Option<(&Surd, &Surd)> {
        Some((self.lower.as_ref()?, self.upper.as_ref()?))
    }

    fn mode(&self) -> Mode {
        match self.kind {
            NodeKind::A => Mode::AtMostTwos,
            NodeKind::B => Mode::AboveTwos,
            NodeKind::C => Mode::Free,
        }
    }
}

/// A lazily explored dissection of one set for fixed `α` and `s`.
pub struct Dissection {
    set: SetKind,
    s: usize,
    bounds: StructuralBounds,
    alpha: NcfExpansion,
    auto: Automaton,
    d: Mutex<Vec<Surd>>,
}

impl Dissection {
    pub fn new(set: SetKind, alpha: &NcfExpansion, s: usize) -> Result<Self> {
        alpha.require_periodic()?;
        let bounds = alpha.structural_bounds()?;
        let n = bounds.two_run_bound as usize;
        if s < n {
            return Err(Error::SBelowN { s, n });
        }
        Ok(Dissection {
            set,
            s,
            bounds,
            alpha: alpha.clone(),
            auto: Automaton::new(set, alpha, s)?,
            d: Mutex::new(vec![Surd::one()]),
        })
    }

    pub fn set(&self) -> SetKind {
        self.set
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn alpha(&self) -> &NcfExpansion {
        &self.alpha
    }

    /// `N`, one more than the longest run of 2s among the partial quotients.
    pub fn two_run_bound(&self) -> usize {
        self.bounds.two_run_bound as usize
    }

    /// `D_k`, with `D_0 = 1`.
    pub fn d(&self, k: usize) -> Result<Surd> {
        let mut cache = self.d.lock().expect("cache lock");
        while cache.len() <= k {
            let next = self.alpha.d(cache.len())?;
            cache.push(next);
        }
        Ok(cache[k].clone())
    }

    fn build(&self, kind: NodeKind, prefix: Vec<u32>, sum: Surd, cursor: Option<Cursor>) -> Result<DissectionNode> {
        let mut node = DissectionNode {
            kind,
            prefix,
            sum,
            lower: None,
            upper: None,
            cursor,
        };
        let Some(c) = cursor else { return Ok(node) };
        let n = node.level();
        let state = c.with_mode(node.mode());
        if !self.auto.is_live(n, state) {
            return Ok(node);
        }
        let dn = self.d(n)?;
        node.lower = Some(&node.sum + &(&dn * &self.auto.tail(n, state, Side::Lower)?));
        node.upper = Some(&node.sum + &(&dn * &self.auto.tail(n, state, Side::Upper)?));
        Ok(node)
    }

    fn check_kind(&self, kind: NodeKind) -> Result<()> {
        let fits = match self.set {
            SetKind::F => kind == NodeKind::C,
            SetKind::E => kind != NodeKind::C,
        };
        if fits {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "{kind:?} nodes do not belong to the {:?} dissection",
                self.set
            )))
        }
    }

    /// `C()` for `F`, or `A()` and `B()` for `E`.
    pub fn roots(&self) -> Result<Vec<DissectionNode>> {
        let kinds: &[NodeKind] = match self.set {
            SetKind::F => &[NodeKind::C],
            SetKind::E => &[NodeKind::A, NodeKind::B],
        };
        kinds
            .iter()
            .map(|&k| self.build(k, Vec::new(), Surd::zero(), Some(Cursor::START)))
            .collect()
    }

    /// The node of the given kind and prefix, built from scratch.
    pub fn node(&self, kind: NodeKind, prefix: &[u32]) -> Result<DissectionNode> {
        self.check_kind(kind)?;
        let mut sum = Surd::zero();
        for (k, &c) in prefix.iter().enumerate() {
            if c != 0 {
                sum = &sum + &self.d(k + 1)?.mul_int(c);
            }
        }
        self.build(kind, prefix.to_vec(), sum, self.auto.run(prefix))
    }

    /// The next stage of the dissection below `node`, in increasing order.
    /// Empty children are kept and flagged; an empty node has no children.
    pub fn children(&self, node: &DissectionNode) -> Result<Vec<DissectionNode>> {
        if node.is_empty() {
            return Ok(Vec::new());
        }
        let n = node.level();
        let a = self.auto.digit_at_phase(self.auto.phase(n));
        let plan: Vec<(NodeKind, u32)> = match node.kind {
            NodeKind::C => (0..a).map(|c| (NodeKind::C, c)).collect(),
            NodeKind::A => (0..=a - 2)
                .flat_map(|c| {
                    let b = (c + 3 <= a).then_some((NodeKind::B, c));
                    std::iter::once((NodeKind::A, c)).chain(b)
                })
                .collect(),
            NodeKind::B => vec![(NodeKind::B, a - 2), (NodeKind::A, a - 1)],
        };
        let step = self.d(n + 1)?;
        let free = node.cursor.expect("nonempty nodes have a cursor");
        plan.into_iter()
            .map(|(kind, c)| {
                let mut prefix = node.prefix.clone();
                prefix.push(c);
                let sum = if c == 0 {
                    node.sum.clone()
                } else {
                    &node.sum + &step.mul_int(c)
                };
                self.build(kind, prefix, sum, self.auto.rules.step(a, c, free))
            })
            .collect()
    }

    /// Digit words of the lower and upper endpoints.
    pub fn endpoint_words(&self, node: &DissectionNode) -> Result<(PeriodicWord, PeriodicWord)> {
        if node.is_empty() {
            return Err(Error::EmptyNode);
        }
        let c = node
            .cursor
            .expect("nonempty nodes have a cursor")
            .with_mode(node.mode());
        Ok((
            self.auto.extreme_word(&node.prefix, c, Side::Lower),
            self.auto.extreme_word(&node.prefix, c, Side::Upper),
        ))
    }
}

/// One of the endpoint estimates for a node, evaluated exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndpointCheck {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndpointReport {
    pub lower: Surd,
    pub upper: Surd,
    pub lower_word: PeriodicWord,
    pub upper_word: PeriodicWord,
    pub checks: Vec<EndpointCheck>,
}

impl EndpointReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.holds).map(|c| c.name).collect()
    }
}

/// Length of the trailing block `a_m−1, a_{m+1}−2, …, a_n−2`, or 0.
fn short_suffix(prefix: &[u32], alpha: &NcfExpansion) -> Result<usize> {
    for k in (1..=prefix.len()).rev() {
        let a = alpha.digit(k)?;
        if prefix[k - 1] + 1 == a {
            return Ok(prefix.len() - k + 1);
        }
        if prefix[k - 1] + 2 != a {
            return Ok(0);
        }
    }
    Ok(0)
}

/// Exact endpoints of a nonempty node with their digit words, plus the
/// standard estimates for them.
pub fn endpoints(diss: &Dissection, node: &DissectionNode) -> Result<EndpointReport> {
    let (lo, hi) = node.bounds().ok_or(Error::EmptyNode)?;
    let (lower_word, upper_word) = diss.endpoint_words(node)?;
    let n = node.level();
    let s = diss.s();
    let big_n = diss.two_run_bound();
    let sum = &node.sum;
    let d = |k: usize| diss.d(k);
    let mut checks = Vec::new();
    let mut check = |name, holds| checks.push(EndpointCheck { name, holds });
    match node.kind {
        NodeKind::C => {
            check(
                "within_parent_window",
                &(sum + &d(n + s + 1)?) <= lo && hi <= &(sum + &d(n)?),
            );
            let t = node.prefix.iter().rev().take_while(|&&c| c == 0).count();
            let lower_cap = if t == 0 {
                sum + &d(n + s)?
            } else {
                &(sum + &d(n + 1)?) + &d(n + s)?
            };
            check("lower_near_prefix", lo < &lower_cap);
            let u = short_suffix(&node.prefix, diss.alpha())?;
            let upper_floor = if u == 0 {
                &(sum + &d(n)?) - &d(n + s - big_n)?
            } else {
                sum + &d(n + big_n + 1)?
            };
            check("upper_near_next_prefix", hi > &upper_floor);
        }
        NodeKind::A => {
            let top = &(sum + &d(n)?) - &d(n + 1)?;
            check("within_window", &(sum + &d(n + s + 1)?) <= lo && hi <= &top);
            check("upper_is_twos_tail", hi == &top);
            check("lower_below_twos_tail", lo < &(&top - &d(n + 3 * big_n)?));
            let left_b = match node.prefix.split_last() {
                None => true,
                Some((&0, _)) => false,
                Some((&c, head)) => {
                    let mut p = head.to_vec();
                    p.push(c - 1);
                    !diss.node(NodeKind::B, &p)?.is_empty()
                }
            };
            if left_b {
                check("lower_near_prefix", lo < &(sum + &d(n + s)?));
            }
        }
        NodeKind::B => {
            let split = &(sum + &d(n)?) - &d(n + 1)?;
            let top = sum + &d(n)?;
            check("within_window", &(&split + &d(n + s + 1)?) <= lo && hi <= &top);
            check("upper_is_next_prefix", hi == &top);
            check("lower_estimate", lo < &(&(&split + &d(n + 2)?) + &d(n + s)?));
            let sharper = match node.prefix.last() {
                None => true,
                Some(&c) => c + 2 != diss.alpha().digit(n)? && !diss.node(NodeKind::A, &node.prefix)?.is_empty(),
            };
            if sharper {
                check("lower_near_split", lo < &(&split + &d(n + s)?));
            }
        }
    }
    Ok(EndpointReport {
        lower: lo.clone(),
        upper: hi.clone(),
        lower_word,
        upper_word,
        checks,
    })
}

/// A materialized dissection, one vector of nodes per level.
#[derive(Clone, Debug, Serialize)]
pub struct DissectionTree {
    pub set: SetKind,
    pub s: usize,
    pub depth: usize,
    pub levels: Vec<Vec<TreeNode>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TreeNode {
    pub node: DissectionNode,
    /// Index of the parent in the previous level.
    pub parent: Option<usize>,
}

/// Builds every node down to `depth` breadth-first.
pub fn dissect(set: SetKind, alpha: &NcfExpansion, s: usize, depth: usize, exec: Execution) -> Result<DissectionTree> {
    let diss = Dissection::new(set, alpha, s)?;
    let roots = diss.roots()?;
    let mut levels = vec![roots
        .into_iter()
        .map(|node| TreeNode { node, parent: None })
        .collect::<Vec<_>>()];
    for _ in 0..depth {
        let prev = levels.last().expect("root level");
        let live: Vec<usize> = (0..prev.len()).filter(|&i| !prev[i].node.is_empty()).collect();
        let groups = par::map_collect(exec, &live, |&i| diss.children(&prev[i].node));
        let mut next = Vec::new();
        for (&i, group) in live.iter().zip(groups) {
            next.extend(group?.into_iter().map(|node| TreeNode { node, parent: Some(i) }));
        }
        levels.push(next);
    }
    Ok(DissectionTree { set, s, depth, levels })
}

const SVG_WIDTH: f64 = 1000.0;
const ROW: f64 = 28.0;

impl DissectionTree {
    pub fn nonempty(&self, level: usize) -> impl Iterator<Item = &DissectionNode> {
        self.levels[level].iter().map(|t| &t.node).filter(|n| !n.is_empty())
    }

    pub fn to_json(&self, digits: usize) -> Value {
        let levels: Vec<Value> = self
            .levels
            .iter()
            .map(|level| {
                level
                    .iter()
                    .map(|t| {
                        let n = &t.node;
                        json!({
                            "kind": n.kind,
                            "prefix": n.prefix,
                            "parent": t.parent,
                            "empty": n.is_empty(),
                            "lower": n.lower.as_ref().map(|x| x.to_decimal(digits)),
                            "upper": n.upper.as_ref().map(|x| x.to_decimal(digits)),
                        })
                    })
                    .collect()
            })
            .collect();
        json!({"set": self.set, "s": self.s, "depth": self.depth, "levels": levels})
    }

    /// Interval diagram with one row per level.
    pub fn to_svg(&self) -> String {
        let (lo, hi) = self
            .nonempty(0)
            .filter_map(|n| n.bounds())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), (l, u)| {
                (a.min(l.to_f64()), b.max(u.to_f64()))
            });
        let span = if hi > lo { hi - lo } else { 1.0 };
        let height = ROW * self.levels.len() as f64 + 10.0;
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{height:.0}" viewBox="0 0 {w} {height:.0}">"#,
            w = SVG_WIDTH + 80.0
        );
        for (row, _) in self.levels.iter().enumerate() {
            let y = 5.0 + ROW * row as f64;
            let _ = writeln!(
                out,
                r#"  <text x="0" y="{:.1}" font-size="12">n={row}</text>"#,
                y + 14.0
            );
            for n in self.nonempty(row) {
                let (l, u) = n.bounds().expect("nonempty");
                let x = 60.0 + SVG_WIDTH * (l.to_f64() - lo) / span;
                let w = (SVG_WIDTH * (u.to_f64() - l.to_f64()) / span).max(0.5);
                let fill = match n.kind {
                    NodeKind::A => "#4c78a8",
                    NodeKind::B => "#f58518",
                    NodeKind::C => "#54a24b",
                };
                let _ = writeln!(
                    out,
                    r#"  <rect x="{x:.4}" y="{y:.1}" width="{w:.4}" height="{:.1}" fill="{fill}"/>"#,
                    ROW - 8.0
                );
            }
        }
        out.push_str("</svg>\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cantor::{membership_e, membership_f};

    fn five_three() -> NcfExpansion {
        NcfExpansion::periodic(&[], &[5, 3]).unwrap()
    }

    fn in_set(set: SetKind, w: &PeriodicWord, alpha: &NcfExpansion, s: usize) -> bool {
        match set {
            SetKind::E => membership_e(w, alpha, s, 100).unwrap(),
            SetKind::F => membership_f(w, alpha, s, 100).unwrap(),
        }
    }

    #[test]
    fn s_below_n_is_rejected() {
        let e = NcfExpansion::periodic(&[], &[3, 2, 2]).unwrap();
        assert_eq!(
            Dissection::new(SetKind::F, &e, 2).err(),
            Some(Error::SBelowN { s: 2, n: 3 })
        );
    }

    #[test]
    fn roots_of_e_split_at_one_minus_alpha() {
        let e = five_three();
        let diss = Dissection::new(SetKind::E, &e, 3).unwrap();
        let roots = diss.roots().unwrap();
        let split = &Surd::one() - &e.d(1).unwrap();
        let (alo, ahi) = roots[0].bounds().unwrap();
        let (blo, bhi) = roots[1].bounds().unwrap();
        assert!(alo.is_positive() && ahi == &split);
        assert!(blo > &split && bhi == &Surd::one());
    }

    #[test]
    fn lower_end_of_c_root_is_every_fourth_d() {
        let e = five_three();
        let diss = Dissection::new(SetKind::F, &e, 3).unwrap();
        let root = &diss.roots().unwrap()[0];
        let (lw, _) = diss.endpoint_words(root).unwrap();
        assert_eq!(lw, PeriodicWord::purely_periodic(vec![0, 0, 0, 1]).unwrap());
        // Σ_{j≥1} D_{4j} = D_4/(1 − D_4) because the period of α divides 4.
        let d4 = e.d(4).unwrap();
        let expected = &d4 / &(&Surd::one() - &d4);
        assert_eq!(root.lower.as_ref().unwrap(), &expected);
    }

    #[test]
    fn upper_end_of_c_root_follows_the_ladder() {
        // With s = 2: a−1, a−2, then a−3 at the last index with a ≥ 3.
        let e = five_three();
        let diss = Dissection::new(SetKind::F, &e, 2).unwrap();
        let root = &diss.roots().unwrap()[0];
        let (_, uw) = diss.endpoint_words(root).unwrap();
        assert_eq!(uw.prefix(6), vec![4, 1, 2, 2, 3, 0]);
    }

    /// Lower end: the prefix, zeros up to a run of `s`, then `1` and blocks
    /// of `s` zeros closed by `1`.
    fn spaced_ones(prefix: &[u32], s: usize, len: usize) -> Vec<u32> {
        let t = prefix.iter().rev().take_while(|&&c| c == 0).count();
        let mut w = prefix.to_vec();
        w.extend(std::iter::repeat_n(0, s - t));
        w.push(1);
        while w.len() < len {
            w.extend(std::iter::repeat_n(0, s));
            w.push(1);
        }
        w.truncate(len);
        w
    }

    /// Upper end: from the start of the trailing short block, each rung is
    /// the last index with `a ≥ 3` within `s+1` of the previous one; digits
    /// are `a−1` just after a rung, `a−3` on a rung and `a−2` elsewhere.
    fn ladder(prefix: &[u32], alpha: &NcfExpansion, s: usize, len: usize) -> Vec<u32> {
        let n = prefix.len();
        let u = short_suffix(prefix, alpha).unwrap();
        let mut rungs = vec![n - u];
        while *rungs.last().unwrap() < len + 2 {
            let p = *rungs.last().unwrap();
            let k = (p + 2..=p + s + 1)
                .rev()
                .find(|&k| alpha.digit(k).unwrap() >= 3)
                .unwrap();
            rungs.push(k);
        }
        (1..=len)
            .map(|i| {
                let a = alpha.digit(i).unwrap();
                if i <= rungs[0] {
                    prefix[i - 1]
                } else if rungs.iter().any(|&k| i == k + 1) {
                    a - 1
                } else if rungs[1..].contains(&i) {
                    a - 3
                } else {
                    a - 2
                }
            })
            .collect()
    }

    #[test]
    fn c_endpoints_match_explicit_words() {
        for period in [vec![5, 3], vec![3, 2, 2], vec![4, 2, 3]] {
            let e = NcfExpansion::periodic(&[], &period).unwrap();
            let n = e.structural_bounds().unwrap().two_run_bound as usize;
            for s in n..n + 3 {
                let diss = Dissection::new(SetKind::F, &e, s).unwrap();
                let tree = dissect(SetKind::F, &e, s, 4, Execution::Sequential).unwrap();
                for level in 0..=4 {
                    for node in tree.nonempty(level) {
                        let (lw, uw) = diss.endpoint_words(node).unwrap();
                        assert_eq!(lw.prefix(50), spaced_ones(&node.prefix, s, 50));
                        assert_eq!(uw.prefix(50), ladder(&node.prefix, &e, s, 50));
                    }
                }
            }
        }
    }

    #[test]
    fn endpoint_words_sum_to_endpoints_and_lie_in_the_set() {
        let e = five_three();
        for set in [SetKind::E, SetKind::F] {
            let tree = dissect(set, &e, 3, 3, Execution::Sequential).unwrap();
            let diss = Dissection::new(set, &e, 3).unwrap();
            for level in 0..=3 {
                for node in tree.nonempty(level) {
                    let (lw, uw) = diss.endpoint_words(node).unwrap();
                    assert_eq!(&e.weighted_sum(&lw).unwrap(), node.lower.as_ref().unwrap());
                    assert_eq!(&e.weighted_sum(&uw).unwrap(), node.upper.as_ref().unwrap());
                    assert!(in_set(set, &lw, &e, 3) && in_set(set, &uw, &e, 3), "{:?}", node.prefix);
                }
            }
        }
    }

    #[test]
    fn children_nest_and_are_ordered() {
        let e = five_three();
        for set in [SetKind::E, SetKind::F] {
            let tree = dissect(set, &e, 3, 4, Execution::Sequential).unwrap();
            for level in 1..=4 {
                let nodes = &tree.levels[level];
                for t in nodes.iter().filter(|t| !t.node.is_empty()) {
                    let parent = &tree.levels[level - 1][t.parent.unwrap()].node;
                    let (plo, phi) = parent.bounds().unwrap();
                    let (lo, hi) = t.node.bounds().unwrap();
                    assert!(plo <= lo && hi <= phi);
                }
                let live: Vec<_> = tree.nonempty(level).collect();
                for w in live.windows(2) {
                    assert!(w[0].upper.as_ref().unwrap() < w[1].lower.as_ref().unwrap());
                }
            }
        }
    }

    #[test]
    fn f_gaps_contain_the_next_prefix_sum() {
        let e = five_three();
        let diss = Dissection::new(SetKind::F, &e, 3).unwrap();
        let tree = dissect(SetKind::F, &e, 3, 3, Execution::Sequential).unwrap();
        for level in 1..=3 {
            let live: Vec<_> = tree.nonempty(level).collect();
            for w in live.windows(2) {
                if w[0].prefix[..level - 1] != w[1].prefix[..level - 1] {
                    continue;
                }
                let anchor = diss.node(NodeKind::C, &w[1].prefix).unwrap().sum;
                assert!(w[0].upper.as_ref().unwrap() <= &anchor);
                assert!(&anchor <= w[1].lower.as_ref().unwrap());
            }
        }
    }

    #[test]
    fn endpoint_estimates_hold_for_five_three() {
        let e = five_three();
        for set in [SetKind::E, SetKind::F] {
            let tree = dissect(set, &e, 3, 4, Execution::Sequential).unwrap();
            let diss = Dissection::new(set, &e, 3).unwrap();
            for level in 0..=4 {
                for node in tree.nonempty(level) {
                    let r = endpoints(&diss, node).unwrap();
                    assert!(r.all_hold(), "{:?} {:?}: {:?}", node.kind, node.prefix, r.failures());
                }
            }
        }
    }

    #[test]
    fn empty_node_has_no_endpoints() {
        let e = five_three();
        let diss = Dissection::new(SetKind::F, &e, 2).unwrap();
        let node = diss.node(NodeKind::C, &[0, 0, 0]).unwrap();
        assert!(node.is_empty());
        assert_eq!(endpoints(&diss, &node).err(), Some(Error::EmptyNode));
        assert!(diss.children(&node).unwrap().is_empty());
    }

    #[test]
    fn node_from_scratch_matches_tree() {
        let e = five_three();
        let diss = Dissection::new(SetKind::E, &e, 3).unwrap();
        let tree = dissect(SetKind::E, &e, 3, 3, Execution::Parallel).unwrap();
        for t in &tree.levels[3] {
            assert_eq!(diss.node(t.node.kind, &t.node.prefix).unwrap(), t.node);
        }
    }

    #[test]
    fn dumps_are_deterministic() {
        let e = five_three();
        let a = dissect(SetKind::E, &e, 3, 2, Execution::Parallel).unwrap();
        let b = dissect(SetKind::E, &e, 3, 2, Execution::Sequential).unwrap();
        assert_eq!(a.to_svg(), b.to_svg());
        assert_eq!(a.to_json(12), b.to_json(12));
        assert!(a.to_svg().starts_with("<svg"));
    }
}
