//! The homogeneous tree `T_p` hanging from a reference end.
//!
//! A vertex is stored as `(level, digits)`: `level` is the Busemann height
//! (predecessors sit one level lower, successors one level higher) and
//! `digits` lists the edge labels on the ray coming down from the reference
//! end, oldest first, so the last entry labels the edge entering the vertex.
//! The infinite prefix of zeros is never stored; a canonical digit list has no
//! leading zero.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bfs::{bfs_ball, Ball};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TreeVertex {
    level: i64,
    digits: Vec<u32>,
}

fn strip_leading_zeros(mut digits: Vec<u32>) -> Vec<u32> {
    let nz = digits.iter().position(|&d| d != 0).unwrap_or(digits.len());
    digits.drain(..nz);
    digits
}

impl TreeVertex {
    /// Builds a vertex, normalizing away leading zeros. Digits are not checked
    /// against a branching number; use [`Tree::vertex`] for that.
    pub fn new(level: i64, digits: Vec<u32>) -> Self {
        Self {
            level,
            digits: strip_leading_zeros(digits),
        }
    }

    /// The vertex `(0, ...000)`.
    pub fn origin() -> Self {
        Self::new(0, Vec::new())
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn predecessor(&self) -> Self {
        let mut digits = self.digits.clone();
        digits.pop();
        Self {
            level: self.level - 1,
            digits,
        }
    }

    /// Successor along the edge labelled `label` (no range check).
    pub fn child(&self, label: u32) -> Self {
        let mut digits = self.digits.clone();
        if !(digits.is_empty() && label == 0) {
            digits.push(label);
        }
        Self {
            level: self.level + 1,
            digits,
        }
    }

    /// In-place [`TreeVertex::predecessor`].
    pub fn pop_to_predecessor(&mut self) {
        self.digits.pop();
        self.level -= 1;
    }

    /// In-place [`TreeVertex::child`].
    pub fn push_child(&mut self, label: u32) {
        if !(self.digits.is_empty() && label == 0) {
            self.digits.push(label);
        }
        self.level += 1;
    }

    /// The ancestor on level `level`, or `None` when `level` is below `self`.
    pub fn ancestor_at(&self, level: i64) -> Option<Self> {
        if level > self.level {
            return None;
        }
        let drop = (self.level - level) as usize;
        let keep = self.digits.len().saturating_sub(drop);
        Some(Self {
            level,
            digits: self.digits[..keep].to_vec(),
        })
    }

    /// Label of the edge entering the ancestor on level `level`.
    pub fn digit_at(&self, level: i64) -> Option<u32> {
        if level > self.level {
            return None;
        }
        let from_end = (self.level - level) as usize;
        let len = self.digits.len();
        Some(if from_end < len {
            self.digits[len - 1 - from_end]
        } else {
            0
        })
    }

    /// Same vertex with the label entering its ancestor on `level` replaced.
    fn with_digit_at(&self, level: i64, value: u32) -> Self {
        let from_end = (self.level - level) as usize;
        let mut digits = self.digits.clone();
        if from_end >= digits.len() {
            let pad = from_end + 1 - digits.len();
            let mut padded = vec![0; pad];
            padded.extend_from_slice(&digits);
            digits = padded;
        }
        let idx = digits.len() - 1 - from_end;
        digits[idx] = value;
        Self::new(self.level, digits)
    }

    /// True when `self` lies on the geodesic from the reference end to `other`.
    pub fn is_ancestor_or_equal(&self, other: &Self) -> bool {
        other.ancestor_at(self.level).as_ref() == Some(self)
    }

    /// The confluent `x ⋏ y`: the common ancestor of maximal level.
    pub fn confluent(&self, other: &Self) -> Self {
        let level = self.level.min(other.level);
        let a = self.ancestor_at(level).expect("level is not below self");
        let b = other.ancestor_at(level).expect("level is not below other");
        let len = a.digits.len().max(b.digits.len());
        let pad = |d: &[u32], i: usize| -> u32 {
            let off = len - d.len();
            if i < off {
                0
            } else {
                d[i - off]
            }
        };
        let first_diff = (0..len).find(|&i| pad(&a.digits, i) != pad(&b.digits, i));
        match first_diff {
            None => a,
            Some(i) => a
                .ancestor_at(level - (len - i) as i64)
                .expect("ancestor above a"),
        }
    }

    /// Geodesic distance, counted through the confluent.
    pub fn distance(&self, other: &Self) -> u64 {
        let c = self.confluent(other);
        ((self.level - c.level) + (other.level - c.level)) as u64
    }
}

impl Ord for TreeVertex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.level
            .cmp(&other.level)
            .then(self.digits.len().cmp(&other.digits.len()))
            .then_with(|| self.digits.cmp(&other.digits))
    }
}

impl PartialOrd for TreeVertex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `level:digits`, e.g. `0:11`. Digits are base-36 characters; when any digit
/// is 36 or larger they are written in decimal separated by dots.
impl fmt::Display for TreeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.level)?;
        if self.digits.iter().all(|&d| d < 36) {
            for &d in &self.digits {
                write!(f, "{}", char::from_digit(d, 36).expect("digit < 36"))?;
            }
        } else {
            let parts: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
            write!(f, "{}", parts.join("."))?;
        }
        Ok(())
    }
}

impl FromStr for TreeVertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParams(format!("bad tree vertex `{s}` (expected level:digits)"));
        let (level, digits) = s.split_once(':').ok_or_else(bad)?;
        let level: i64 = level.trim().parse().map_err(|_| bad())?;
        let digits = digits.trim();
        let digits: Vec<u32> = if digits.contains('.') {
            digits
                .split('.')
                .map(|t| t.parse::<u32>().map_err(|_| bad()))
                .collect::<Result<_>>()?
        } else {
            digits
                .chars()
                .map(|c| c.to_digit(36).ok_or_else(bad))
                .collect::<Result<_>>()?
        };
        Ok(TreeVertex::new(level, digits))
    }
}

/// A point of the metric tree: a vertex or an interior point of an edge.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum TreePoint {
    Vertex(TreeVertex),
    /// The point at distance `offset` from `child`'s predecessor on the edge
    /// towards `child`; `0 < offset < 1`.
    Edge { child: TreeVertex, offset: f64 },
}

impl TreePoint {
    /// Point on the edge from `child`'s predecessor to `child`; an offset of
    /// zero yields the predecessor itself.
    pub fn on_edge(child: TreeVertex, offset: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&offset) {
            return Err(Error::InvalidParams(format!(
                "edge offset {offset} outside [0, 1)"
            )));
        }
        if offset == 0.0 {
            return Ok(TreePoint::Vertex(child.predecessor()));
        }
        Ok(TreePoint::Edge { child, offset })
    }

    /// Real-valued Busemann height: the parent's level plus the offset.
    pub fn height(&self) -> f64 {
        match self {
            TreePoint::Vertex(v) => v.level as f64,
            TreePoint::Edge { child, offset } => (child.level - 1) as f64 + offset,
        }
    }

    /// The nearest vertex at or below the point (the child of an edge point).
    pub fn lower_vertex(&self) -> &TreeVertex {
        match self {
            TreePoint::Vertex(v) | TreePoint::Edge { child: v, .. } => v,
        }
    }

    /// True when both points lie on one geodesic descending from the
    /// reference end, i.e. the tree path between them is height-monotone.
    pub fn comparable(&self, other: &TreePoint) -> bool {
        let (hi, lo) = if self.height() <= other.height() {
            (self, other)
        } else {
            (other, self)
        };
        hi.lower_vertex().is_ancestor_or_equal(lo.lower_vertex())
    }

    /// The ancestor confluent of the two points. For comparable points this is
    /// the higher one; otherwise it is a vertex above both.
    pub fn confluent(&self, other: &TreePoint) -> TreePoint {
        if self.comparable(other) {
            if self.height() <= other.height() {
                self.clone()
            } else {
                other.clone()
            }
        } else {
            TreePoint::Vertex(self.lower_vertex().confluent(other.lower_vertex()))
        }
    }

    /// Distance in the metric tree with unit-length edges.
    pub fn distance(&self, other: &TreePoint) -> f64 {
        let c = self.confluent(other).height();
        (self.height() - c) + (other.height() - c)
    }

    /// Applies `f` to the underlying vertices, keeping the edge offset.
    pub fn map_vertex<F: Fn(&TreeVertex) -> TreeVertex>(&self, f: F) -> TreePoint {
        match self {
            TreePoint::Vertex(v) => TreePoint::Vertex(f(v)),
            TreePoint::Edge { child, offset } => TreePoint::Edge {
                child: f(child),
                offset: *offset,
            },
        }
    }
}

/// An end of the tree: the reference end, or an eventually-zero lower end.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TreeEnd {
    /// The reference end `ϖ`.
    Top,
    /// The ray through `anchor` continuing with label 0 forever. The anchor
    /// is canonical: no trailing zero digit, level 0 for the all-zero line.
    Lower { anchor: TreeVertex },
}

impl TreeEnd {
    /// The lower end obtained by descending from `v` along label 0.
    pub fn zero_ray(v: &TreeVertex) -> Self {
        let mut anchor = v.clone();
        while anchor.digits.last() == Some(&0) {
            anchor = anchor.predecessor();
        }
        if anchor.digits.is_empty() {
            anchor.level = 0;
        }
        TreeEnd::Lower { anchor }
    }

    /// The vertex on `level` of the geodesic from `ϖ` to this lower end.
    pub fn ray_vertex(&self, level: i64) -> Option<TreeVertex> {
        match self {
            TreeEnd::Top => None,
            TreeEnd::Lower { anchor } => Some(if level <= anchor.level {
                anchor.ancestor_at(level).expect("level below anchor")
            } else {
                let mut v = anchor.clone();
                for _ in anchor.level..level {
                    v = v.child(0);
                }
                v
            }),
        }
    }

    fn anchor_level(&self) -> Option<i64> {
        match self {
            TreeEnd::Top => None,
            TreeEnd::Lower { anchor } => Some(anchor.level),
        }
    }
}

/// Either a vertex or an end; the arguments of root confluents and the
/// ultrametric.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TreeTarget {
    Vertex(TreeVertex),
    End(TreeEnd),
}

impl TreeTarget {
    fn deepest_level(&self) -> Option<i64> {
        match self {
            TreeTarget::Vertex(v) => Some(v.level),
            TreeTarget::End(e) => e.anchor_level(),
        }
    }

    /// Representative vertex on `level`, valid for confluent computations with
    /// anything no deeper than `level`.
    fn probe(&self, level: i64) -> Option<TreeVertex> {
        match self {
            TreeTarget::Vertex(v) => Some(v.clone()),
            TreeTarget::End(e) => e.ray_vertex(level),
        }
    }
}

impl From<TreeVertex> for TreeTarget {
    fn from(v: TreeVertex) -> Self {
        TreeTarget::Vertex(v)
    }
}

impl From<TreeEnd> for TreeTarget {
    fn from(e: TreeEnd) -> Self {
        TreeTarget::End(e)
    }
}

/// Ancestor confluent of two targets other than `ϖ`.
fn meet(a: &TreeTarget, b: &TreeTarget) -> Option<TreeVertex> {
    let level = a.deepest_level()?.max(b.deepest_level()?);
    Some(a.probe(level)?.confluent(&b.probe(level)?))
}

/// Subtree swap at `apex`: exchanges the branches below two successors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubtreeSwap {
    apex: TreeVertex,
    branch_a: u32,
    branch_b: u32,
}

impl SubtreeSwap {
    pub fn apex(&self) -> &TreeVertex {
        &self.apex
    }

    pub fn branches(&self) -> (u32, u32) {
        (self.branch_a, self.branch_b)
    }

    pub fn apply(&self, v: &TreeVertex) -> TreeVertex {
        let below = self.apex.level + 1;
        if v.level < below || !self.apex.is_ancestor_or_equal(v) {
            return v.clone();
        }
        let d = v.digit_at(below).expect("v is below the apex");
        let swapped = if d == self.branch_a {
            self.branch_b
        } else if d == self.branch_b {
            self.branch_a
        } else {
            return v.clone();
        };
        v.with_digit_at(below, swapped)
    }
}

/// `T_p`: every vertex has one predecessor and `p` successors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tree {
    p: u32,
}

impl Tree {
    pub fn new(p: u32) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidParams(format!("branching number p = {p} < 2")));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Validated vertex constructor.
    pub fn vertex(&self, level: i64, digits: Vec<u32>) -> Result<TreeVertex> {
        if let Some(&digit) = digits.iter().find(|&&d| d >= self.p) {
            return Err(Error::DigitOutOfRange { digit, p: self.p });
        }
        Ok(TreeVertex::new(level, digits))
    }

    pub fn check(&self, v: &TreeVertex) -> Result<()> {
        match v.digits.iter().find(|&&d| d >= self.p) {
            Some(&digit) => Err(Error::DigitOutOfRange { digit, p: self.p }),
            None => Ok(()),
        }
    }

    pub fn successors(&self, v: &TreeVertex) -> Vec<TreeVertex> {
        (0..self.p).map(|l| v.child(l)).collect()
    }

    /// Predecessor followed by the `p` successors.
    pub fn neighbors(&self, v: &TreeVertex) -> Vec<TreeVertex> {
        let mut out = Vec::with_capacity(self.p as usize + 1);
        out.push(v.predecessor());
        out.extend(self.successors(v));
        out
    }

    /// Neighbors in the grandmother graph: the tree edges plus an edge from
    /// every vertex to its second predecessor. Degree `p² + p + 2`.
    pub fn grandmother_neighbors(&self, v: &TreeVertex) -> Vec<TreeVertex> {
        let pred = v.predecessor();
        let grand = pred.predecessor();
        let mut out = vec![pred, grand];
        for s in self.successors(v) {
            out.extend(self.successors(&s));
            out.push(s);
        }
        out
    }

    pub fn ball(&self, center: &TreeVertex, radius: u32) -> Ball<TreeVertex> {
        bfs_ball(center.clone(), radius, |v| self.neighbors(v))
    }

    pub fn grandmother_ball(&self, center: &TreeVertex, radius: u32) -> Ball<TreeVertex> {
        bfs_ball(center.clone(), radius, |v| self.grandmother_neighbors(v))
    }

    /// `d(x, x⋏o) − d(o, x⋏o)`, the finite-stage value of the Busemann limit
    /// along rays to the reference end. Always equals `x.level − o.level`.
    pub fn busemann_limit_check(&self, x: &TreeVertex, o: &TreeVertex) -> i64 {
        let c = x.confluent(o);
        (x.level - c.level) - (o.level - c.level)
    }

    /// Last common vertex of the geodesics from `o` towards `w` and `z`.
    pub fn confluent_from_root(
        &self,
        w: &TreeTarget,
        z: &TreeTarget,
        o: &TreeVertex,
    ) -> Result<TreeVertex> {
        if w == z {
            return match w {
                TreeTarget::Vertex(v) => Ok(v.clone()),
                TreeTarget::End(_) => Err(Error::IdenticalEnds),
            };
        }
        let root = TreeTarget::Vertex(o.clone());
        // where each geodesic from o stops climbing; None means it climbs forever
        let turn_w = meet(&root, w);
        let turn_z = meet(&root, z);
        Ok(match (turn_w, turn_z) {
            (None, None) => unreachable!("two distinct targets cannot both be the top end"),
            (Some(a), None) | (None, Some(a)) => a,
            (Some(a), Some(b)) => match a.level.cmp(&b.level) {
                Ordering::Greater => a,
                Ordering::Less => b,
                Ordering::Equal => meet(w, z).expect("neither target is the top end"),
            },
        })
    }

    /// `θ(w, z) = exp(−d(o, w ∧ z))`, and 0 on the diagonal.
    pub fn ultrametric(&self, w: &TreeTarget, z: &TreeTarget, o: &TreeVertex) -> f64 {
        if w == z {
            return 0.0;
        }
        let c = self
            .confluent_from_root(w, z, o)
            .expect("distinct targets always have a confluent");
        (-(o.distance(&c) as f64)).exp()
    }

    pub fn swap(&self, apex: TreeVertex, branch_a: u32, branch_b: u32) -> Result<SubtreeSwap> {
        if branch_a == branch_b {
            return Err(Error::InvalidParams("swap branches must differ".into()));
        }
        for d in [branch_a, branch_b] {
            if d >= self.p {
                return Err(Error::DigitOutOfRange { digit: d, p: self.p });
            }
        }
        Ok(SubtreeSwap {
            apex,
            branch_a,
            branch_b,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(level: i64, digits: &[u32]) -> TreeVertex {
        TreeVertex::new(level, digits.to_vec())
    }

    #[test]
    fn predecessor_drops_the_last_label() {
        assert_eq!(v(0, &[1, 1]).predecessor(), v(-1, &[1]));
        assert_eq!(v(0, &[]).predecessor(), v(-1, &[]));
        assert_eq!(v(5, &[2]).predecessor(), v(4, &[]));
    }

    #[test]
    fn leading_zeros_are_normalized() {
        assert_eq!(v(3, &[0, 0, 1, 0]), v(3, &[1, 0]));
        assert_eq!(v(0, &[]).child(0), v(1, &[]));
    }

    #[test]
    fn successors_are_distinct_children() {
        let t = Tree::new(2).unwrap();
        assert_eq!(t.successors(&v(0, &[])), vec![v(1, &[]), v(1, &[1])]);
        let t3 = Tree::new(3).unwrap();
        let x = v(-2, &[2, 0, 1]);
        let s = t3.successors(&x);
        assert_eq!(s.len(), 3);
        assert!(s.iter().all(|c| c.predecessor() == x));
        assert!(s[0] != s[1] && s[1] != s[2] && s[0] != s[2]);
    }

    #[test]
    fn confluent_examples() {
        let x = v(0, &[1, 1]);
        let o = v(0, &[]);
        assert_eq!(x.confluent(&x), x);
        assert_eq!(x.confluent(&o), v(-2, &[]));
        assert_eq!(x.confluent(&x.predecessor()), x.predecessor());
    }

    #[test]
    fn distance_examples() {
        let x = v(0, &[1, 1]);
        assert_eq!(x.distance(&x), 0);
        assert_eq!(x.distance(&v(0, &[])), 4);
        assert_eq!(x.distance(&x.predecessor()), 1);
    }

    #[test]
    fn busemann_examples() {
        let t = Tree::new(2).unwrap();
        let o = v(0, &[]);
        assert_eq!(t.busemann_limit_check(&o, &o), 0);
        assert_eq!(t.busemann_limit_check(&v(0, &[1, 1]), &o), 0);
        assert_eq!(t.busemann_limit_check(&o.predecessor(), &o), -1);
    }

    #[test]
    fn root_confluent_examples() {
        let t = Tree::new(2).unwrap();
        let o = v(0, &[1]);
        let s = t.successors(&o);
        let w: TreeTarget = s[0].clone().into();
        let z: TreeTarget = s[1].clone().into();
        assert_eq!(t.confluent_from_root(&w, &w, &o).unwrap(), s[0]);
        assert_eq!(t.confluent_from_root(&w, &z, &o).unwrap(), o);

        // zero-end anchored below o passes through o
        let top = TreeTarget::End(TreeEnd::Top);
        let low = TreeTarget::End(TreeEnd::zero_ray(&s[0].child(1)));
        assert_eq!(t.confluent_from_root(&top, &low, &o).unwrap(), o);

        assert_eq!(
            t.confluent_from_root(&top, &top, &o),
            Err(Error::IdenticalEnds)
        );
    }

    #[test]
    fn zero_ray_is_canonical() {
        let a = TreeEnd::zero_ray(&v(4, &[1, 0, 0]));
        let b = TreeEnd::zero_ray(&v(2, &[1]));
        assert_eq!(a, b);
        assert_eq!(TreeEnd::zero_ray(&v(7, &[])), TreeEnd::zero_ray(&v(-3, &[])));
        assert_eq!(b.ray_vertex(5), Some(v(5, &[1, 0, 0, 0])));
        assert_eq!(b.ray_vertex(1), Some(v(1, &[])));
    }

    #[test]
    fn ultrametric_examples() {
        let t = Tree::new(3).unwrap();
        let o = v(0, &[2]);
        let s = t.successors(&o);
        let w: TreeTarget = s[1].clone().into();
        let z: TreeTarget = s[2].clone().into();
        assert_eq!(t.ultrametric(&w, &w, &o), 0.0);
        assert_eq!(t.ultrametric(&w, &z, &o), 1.0);
    }

    #[test]
    fn grandmother_degree() {
        let t = Tree::new(2).unwrap();
        let n = t.grandmother_neighbors(&v(0, &[1]));
        assert_eq!(n.len(), 8);
        let t3 = Tree::new(3).unwrap();
        assert_eq!(t3.grandmother_neighbors(&v(0, &[])).len(), 14);
    }

    #[test]
    fn swap_fixes_apex_and_exchanges_children() {
        let t = Tree::new(3).unwrap();
        let apex = v(0, &[1]);
        let s = t.swap(apex.clone(), 0, 2).unwrap();
        assert_eq!(s.apply(&apex), apex);
        assert_eq!(s.apply(&apex.child(0)), apex.child(2));
        assert_eq!(s.apply(&apex.child(2)), apex.child(0));
        assert_eq!(s.apply(&apex.child(1)), apex.child(1));
        assert_eq!(s.apply(&apex.child(2).child(1)), apex.child(0).child(1));
        // the all-zero line below an apex on it
        let s0 = t.swap(v(0, &[]), 0, 1).unwrap();
        assert_eq!(s0.apply(&v(2, &[])), v(2, &[1, 0]));
        assert!(t.swap(apex, 1, 1).is_err());
    }

    #[test]
    fn display_round_trip() {
        let x = v(-3, &[1, 0, 2]);
        assert_eq!(x.to_string(), "-3:102");
        assert_eq!("-3:102".parse::<TreeVertex>().unwrap(), x);
        assert_eq!("0:".parse::<TreeVertex>().unwrap(), TreeVertex::origin());
        let big = v(1, &[40, 3]);
        assert_eq!(big.to_string(), "1:40.3");
        assert_eq!("1:40.3".parse::<TreeVertex>().unwrap(), big);
        assert!("nonsense".parse::<TreeVertex>().is_err());
    }

    #[test]
    fn tree_points() {
        let x = v(1, &[1]);
        let e = TreePoint::on_edge(x.clone(), 0.25).unwrap();
        assert_eq!(e.height(), 0.25);
        assert_eq!(TreePoint::on_edge(x.clone(), 0.0).unwrap(), TreePoint::Vertex(v(0, &[])));
        assert!(TreePoint::on_edge(x.clone(), 1.0).is_err());
        let top = TreePoint::Vertex(v(0, &[]));
        assert!(e.comparable(&top));
        let other = TreePoint::on_edge(v(1, &[]), 0.5).unwrap();
        assert!(!e.comparable(&other));
        assert!((e.distance(&other) - 0.75).abs() < 1e-15);
        assert!((e.distance(&TreePoint::Vertex(x.child(0))) - 1.75).abs() < 1e-15);
    }
}
