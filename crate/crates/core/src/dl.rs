//! Diestel-Leader graphs `DL(p,q)`.
//!
//! A vertex is a pair `(x₁, x₂) ∈ T_p × T_q` with `𝔥(x₁) + 𝔥(x₂) = 0`, and
//! `(x₁, x₂) ~ (y₁, y₂)` when both coordinates are tree neighbors. Every edge
//! moves one coordinate to a successor and the other to its predecessor.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bfs::{bfs_ball, Ball};
use crate::error::{Error, Result};
use crate::tree::{Tree, TreeEnd, TreeVertex};
use crate::wreath::{Config, LampEl};

/// Default cap on BFS radii.
pub const DEFAULT_RADIUS_CAP: u32 = 8;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DlVertex {
    pub x1: TreeVertex,
    pub x2: TreeVertex,
}

impl DlVertex {
    pub fn new(x1: TreeVertex, x2: TreeVertex) -> Result<Self> {
        if x1.level() + x2.level() != 0 {
            return Err(Error::InvalidParams(format!(
                "levels {} and {} do not sum to zero",
                x1.level(),
                x2.level()
            )));
        }
        Ok(Self { x1, x2 })
    }

    pub fn origin() -> Self {
        Self {
            x1: TreeVertex::origin(),
            x2: TreeVertex::origin(),
        }
    }

    /// Horoplane index `k` of `H_{k,−k}`.
    pub fn level(&self) -> i64 {
        self.x1.level()
    }

    /// Image of a lamplighter element in `DL(p,p)`: the configuration is split
    /// at the lamplighter's position `k`; `(−∞, k]` read downwards gives `x₁`
    /// on level `k` and `[k+1, ∞)` read upwards gives `x₂` on level `−k`.
    pub fn from_lamplighter(g: &LampEl) -> Self {
        let k = g.pos;
        let x1 = g.eta.to_vertex(k);
        let upper: Vec<(i64, u32)> = g.eta.iter().filter(|&(x, _)| x > k).collect();
        let x2 = match upper.last() {
            None => TreeVertex::new(-k, Vec::new()),
            Some(&(highest, _)) => {
                let mut digits = vec![0; (highest - k) as usize];
                for (x, v) in upper {
                    // σ(n) = η(k + 1 − n); the last stored digit is σ(0)
                    digits[(highest - x) as usize] = v;
                }
                TreeVertex::new(-k, digits)
            }
        };
        Self { x1, x2 }
    }

    /// Inverse of [`DlVertex::from_lamplighter`].
    pub fn to_lamplighter(&self, p: u32) -> LampEl {
        let k = self.x1.level();
        let mut eta = Config::from_vertex(p, &self.x1);
        for (j, &d) in self.x2.digits().iter().rev().enumerate() {
            eta.set(k + 1 + j as i64, d);
        }
        LampEl::new(eta, k)
    }
}

impl fmt::Display for DlVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.x1, self.x2)
    }
}

/// `level:digits/level:digits`.
impl FromStr for DlVertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s.split_once('/').ok_or_else(|| {
            Error::InvalidParams(format!("bad DL vertex `{s}` (expected x1/x2)"))
        })?;
        DlVertex::new(a.parse()?, b.parse()?)
    }
}

/// An element `(g₁, g₂)` of the product of two lamplighter groups with
/// `Φ(g₁) + Φ(g₂) = 0`, acting on `DL(p,q)` coordinatewise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AEl {
    pub g1: LampEl,
    pub g2: LampEl,
}

impl AEl {
    pub fn new(g1: LampEl, g2: LampEl) -> Result<Self> {
        if g1.phi() + g2.phi() != 0 {
            return Err(Error::InvalidParams(format!(
                "height shifts {} and {} do not cancel",
                g1.phi(),
                g2.phi()
            )));
        }
        Ok(Self { g1, g2 })
    }

    pub fn identity(p: u32, q: u32) -> Self {
        Self {
            g1: LampEl::identity(p),
            g2: LampEl::identity(q),
        }
    }

    pub fn compose(&self, h: &AEl) -> Result<AEl> {
        Ok(AEl {
            g1: self.g1.compose(&h.g1)?,
            g2: self.g2.compose(&h.g2)?,
        })
    }

    pub fn inverse(&self) -> AEl {
        AEl {
            g1: self.g1.inverse(),
            g2: self.g2.inverse(),
        }
    }

    pub fn phi(&self) -> i64 {
        self.g1.phi()
    }
}

/// A point of the boundary `(∂̂T_p × {ϖ₂}) ∪ ({ϖ₁} × ∂̂T_q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DlBoundaryPoint {
    /// `(ξ₁, ϖ₂)` with `ξ₁` a lower end of `T_p`.
    LowerEnd1 { xi1: TreeEnd },
    /// `(x₁, ϖ₂)` with `x₁` a vertex of `T_p`.
    Vertex1 { x1: TreeVertex },
    /// `(ϖ₁, ξ₂)`.
    LowerEnd2 { xi2: TreeEnd },
    /// `(ϖ₁, x₂)`.
    Vertex2 { x2: TreeVertex },
    /// `(ϖ₁, ϖ₂)`.
    TopTop,
}

/// Outcome of the finite-horizon limit classifier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Limit {
    Point(DlBoundaryPoint),
    Undecided,
}

/// The two structural vertex sets of the non-Cayley argument.
#[derive(Clone, Debug)]
pub struct KpqWitness {
    /// `{(o₁, x₂) : x₂⁻ = o₂⁻}`, `q` vertices on the horoplane of `o`.
    pub a: Vec<DlVertex>,
    /// `{(x₁, o₂⁻) : x₁⁻ = o₁}`, `p` vertices one horoplane lower.
    pub b: Vec<DlVertex>,
    /// Every `A`-`B` pair is an edge.
    pub complete: bool,
    /// `B` equals the set of neighbors of `A` on the lower horoplane.
    pub b_is_neighborhood: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DlGraph {
    t1: Tree,
    t2: Tree,
    radius_cap: u32,
}

impl DlGraph {
    pub fn new(p: u32, q: u32) -> Result<Self> {
        Ok(Self {
            t1: Tree::new(p)?,
            t2: Tree::new(q)?,
            radius_cap: DEFAULT_RADIUS_CAP,
        })
    }

    pub fn with_radius_cap(mut self, cap: u32) -> Self {
        self.radius_cap = cap;
        self
    }

    pub fn p(&self) -> u32 {
        self.t1.p()
    }

    pub fn q(&self) -> u32 {
        self.t2.p()
    }

    pub fn radius_cap(&self) -> u32 {
        self.radius_cap
    }

    pub fn check(&self, v: &DlVertex) -> Result<()> {
        self.t1.check(&v.x1)?;
        self.t2.check(&v.x2)
    }

    /// The `p + q` neighbors: `p` moves with `x₁` stepping to a successor and
    /// `x₂` to its predecessor, then `q` moves the other way round.
    pub fn neighbors(&self, v: &DlVertex) -> Vec<DlVertex> {
        let mut out = Vec::with_capacity((self.p() + self.q()) as usize);
        let x2_up = v.x2.predecessor();
        for s in self.t1.successors(&v.x1) {
            out.push(DlVertex {
                x1: s,
                x2: x2_up.clone(),
            });
        }
        let x1_up = v.x1.predecessor();
        for s in self.t2.successors(&v.x2) {
            out.push(DlVertex {
                x1: x1_up.clone(),
                x2: s,
            });
        }
        out
    }

    pub fn are_adjacent(&self, u: &DlVertex, v: &DlVertex) -> bool {
        (v.x1.predecessor() == u.x1 && u.x2.predecessor() == v.x2)
            || (u.x1.predecessor() == v.x1 && v.x2.predecessor() == u.x2)
    }

    pub fn bfs_ball(&self, origin: &DlVertex, radius: u32) -> Result<Ball<DlVertex>> {
        if radius > self.radius_cap {
            return Err(Error::RadiusTooLarge {
                radius,
                cap: self.radius_cap,
            });
        }
        Ok(bfs_ball(origin.clone(), radius, |v| self.neighbors(v)))
    }

    /// Graph distance `d(x₁,y₁) + d(x₂,y₂) − |𝔥(x₁) − 𝔥(y₁)|`.
    pub fn formula_dist(&self, u: &DlVertex, v: &DlVertex) -> u64 {
        let d1 = u.x1.distance(&v.x1);
        let d2 = u.x2.distance(&v.x2);
        d1 + d2 - u.x1.level().abs_diff(v.x1.level())
    }

    pub fn kpq_witness(&self, o: &DlVertex) -> KpqWitness {
        let o2_up = o.x2.predecessor();
        let a: Vec<DlVertex> = self
            .t2
            .successors(&o2_up)
            .into_iter()
            .map(|x2| DlVertex {
                x1: o.x1.clone(),
                x2,
            })
            .collect();
        let b: Vec<DlVertex> = self
            .t1
            .successors(&o.x1)
            .into_iter()
            .map(|x1| DlVertex {
                x1,
                x2: o2_up.clone(),
            })
            .collect();

        let complete = a
            .iter()
            .all(|u| b.iter().all(|w| self.are_adjacent(u, w)));

        let lower = o.level() + 1;
        let mut hood: Vec<DlVertex> = a
            .iter()
            .flat_map(|u| self.neighbors(u))
            .filter(|w| w.level() == lower)
            .collect();
        hood.sort();
        hood.dedup();
        let mut b_sorted = b.clone();
        b_sorted.sort();
        let b_is_neighborhood = hood == b_sorted;

        KpqWitness {
            a,
            b,
            complete,
            b_is_neighborhood,
        }
    }

    pub fn a_act(&self, g: &AEl, v: &DlVertex) -> Result<DlVertex> {
        Ok(DlVertex {
            x1: g.g1.act_checked(self.p(), &v.x1)?,
            x2: g.g2.act_checked(self.q(), &v.x2)?,
        })
    }

    /// An element of the group mapping `u` to `v`.
    pub fn a_transporter(&self, u: &DlVertex, v: &DlVertex) -> AEl {
        AEl {
            g1: LampEl::transporter(self.p(), &u.x1, &v.x1),
            g2: LampEl::transporter(self.q(), &u.x2, &v.x2),
        }
    }

    /// `(p/q)^{Φ(g₁)}`, multiplicative, identically 1 exactly when `p = q`.
    pub fn modular_candidate(&self, g: &AEl) -> f64 {
        (self.p() as f64 / self.q() as f64).powi(g.phi() as i32)
    }

    /// Classifies the boundary limit of a finite sequence from the pattern of
    /// its second half. A coordinate that keeps descending along one ray
    /// converges to the lower end through its last vertex (continued along
    /// label 0); a coordinate whose confluent with the tail's first entry
    /// climbs monotonically escapes to the top end. Anything else is
    /// `Undecided`.
    pub fn classify_limit(&self, seq: &[DlVertex]) -> Limit {
        if seq.len() < 2 {
            return Limit::Undecided;
        }
        let start = (seq.len() / 2).min(seq.len() - 2);
        let tail = &seq[start..];
        let first: Vec<TreeVertex> = tail.iter().map(|v| v.x1.clone()).collect();
        let second: Vec<TreeVertex> = tail.iter().map(|v| v.x2.clone()).collect();

        let last = tail.last().expect("tail has at least two entries");
        let point = match (trend(&first), trend(&second)) {
            (Trend::Descends, Trend::Escapes) => DlBoundaryPoint::LowerEnd1 {
                xi1: TreeEnd::zero_ray(&last.x1),
            },
            (Trend::Constant, Trend::Escapes) => DlBoundaryPoint::Vertex1 {
                x1: last.x1.clone(),
            },
            (Trend::Escapes, Trend::Descends) => DlBoundaryPoint::LowerEnd2 {
                xi2: TreeEnd::zero_ray(&last.x2),
            },
            (Trend::Escapes, Trend::Constant) => DlBoundaryPoint::Vertex2 {
                x2: last.x2.clone(),
            },
            (Trend::Escapes, Trend::Escapes) => DlBoundaryPoint::TopTop,
            _ => return Limit::Undecided,
        };
        Limit::Point(point)
    }
}

#[derive(Debug, PartialEq, Eq)]
enum Trend {
    Constant,
    /// Each entry is a descendant of the previous one, and the level grows.
    Descends,
    /// The confluent with the first entry climbs monotonically and strictly.
    Escapes,
    Other,
}

fn trend(seq: &[TreeVertex]) -> Trend {
    let first = &seq[0];
    if seq.iter().all(|v| v == first) {
        return Trend::Constant;
    }
    let descends = seq.windows(2).all(|w| w[0].is_ancestor_or_equal(&w[1]));
    if descends && seq.last().expect("non-empty").level() > first.level() {
        return Trend::Descends;
    }
    let levels: Vec<i64> = seq.iter().map(|v| first.confluent(v).level()).collect();
    let monotone = levels.windows(2).all(|w| w[1] <= w[0]);
    if monotone && *levels.last().expect("non-empty") < first.level() {
        return Trend::Escapes;
    }
    Trend::Other
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tv(level: i64, digits: &[u32]) -> TreeVertex {
        TreeVertex::new(level, digits.to_vec())
    }

    fn dv(a: TreeVertex, b: TreeVertex) -> DlVertex {
        DlVertex::new(a, b).unwrap()
    }

    #[test]
    fn degree_is_p_plus_q() {
        let g = DlGraph::new(2, 3).unwrap();
        let o = DlVertex::origin();
        assert_eq!(g.neighbors(&o).len(), 5);
        // moving down in the first tree sends x2 to o2⁻ in all p results
        let down: Vec<_> = g.neighbors(&o).into_iter().take(2).collect();
        assert!(down.iter().all(|v| v.x2 == o.x2.predecessor()));
    }

    #[test]
    fn rejects_unbalanced_levels() {
        assert!(DlVertex::new(tv(1, &[]), tv(0, &[])).is_err());
    }

    #[test]
    fn formula_examples() {
        let g = DlGraph::new(2, 3).unwrap();
        let o = DlVertex::origin();
        assert_eq!(g.formula_dist(&o, &o), 0);
        for n in g.neighbors(&o) {
            assert_eq!(g.formula_dist(&o, &n), 1);
        }
        let sib = dv(tv(0, &[]), tv(0, &[2]));
        assert_eq!(g.formula_dist(&o, &sib), 2);
    }

    #[test]
    fn small_balls() {
        let g = DlGraph::new(2, 2).unwrap();
        let o = DlVertex::origin();
        assert_eq!(g.bfs_ball(&o, 0).unwrap().len(), 1);
        let b1 = g.bfs_ball(&o, 1).unwrap();
        assert_eq!(b1.len(), 5);
        assert_eq!(b1.edges.len(), 4);
        assert_eq!(
            g.bfs_ball(&o, 9).unwrap_err(),
            Error::RadiusTooLarge { radius: 9, cap: 8 }
        );
        assert!(g.with_radius_cap(9).bfs_ball(&o, 2).is_ok());
    }

    #[test]
    fn kpq_sizes() {
        let g = DlGraph::new(2, 3).unwrap();
        let o = DlVertex::origin();
        let w = g.kpq_witness(&o);
        assert_eq!((w.a.len(), w.b.len()), (3, 2));
        assert!(w.complete && w.b_is_neighborhood);
        assert!(w.a.contains(&o));
    }

    #[test]
    fn lamplighter_encoding_round_trip() {
        let mut eta = Config::zero(3);
        eta.set(-2, 1);
        eta.set(1, 2);
        eta.set(4, 1);
        let g = LampEl::new(eta, 1);
        let v = DlVertex::from_lamplighter(&g);
        assert_eq!(v.x1, tv(1, &[1, 0, 0, 2]));
        // σ(0) = η(2), σ(−1) = η(3), σ(−2) = η(4)
        assert_eq!(v.x2, tv(-1, &[1, 0, 0]));
        assert_eq!(v.to_lamplighter(3), g);
        assert_eq!(DlVertex::from_lamplighter(&LampEl::identity(2)), DlVertex::origin());
    }

    #[test]
    fn transporter_and_modular() {
        let g = DlGraph::new(2, 3).unwrap();
        let o = DlVertex::origin();
        let v = dv(tv(2, &[1, 0, 1]), tv(-2, &[2]));
        let a = g.a_transporter(&o, &v);
        assert_eq!(g.a_act(&a, &o).unwrap(), v);
        assert_eq!(a.phi(), 2);
        assert!((g.modular_candidate(&a) - (2.0f64 / 3.0).powi(2)).abs() < 1e-15);
        assert_eq!(g.modular_candidate(&AEl::identity(2, 3)), 1.0);
        let sq = DlGraph::new(3, 3).unwrap();
        let b = sq.a_transporter(&o, &dv(tv(-4, &[]), tv(4, &[1])));
        assert_eq!(sq.modular_candidate(&b), 1.0);
    }

    #[test]
    fn display_round_trip() {
        let v = dv(tv(1, &[1, 0]), tv(-1, &[2]));
        assert_eq!(v.to_string(), "1:10/-1:2");
        assert_eq!("1:10/-1:2".parse::<DlVertex>().unwrap(), v);
        assert!("1:10/0:".parse::<DlVertex>().is_err());
    }

    #[test]
    fn classify_downward_shift() {
        let g = DlGraph::new(2, 3).unwrap();
        let seq: Vec<DlVertex> = (0..12)
            .map(|n| dv(tv(n, &[]), tv(-n, &[])))
            .collect();
        assert_eq!(
            g.classify_limit(&seq),
            Limit::Point(DlBoundaryPoint::LowerEnd1 {
                xi1: TreeEnd::zero_ray(&TreeVertex::origin())
            })
        );
        let up: Vec<DlVertex> = (0..12)
            .map(|n| dv(tv(-n, &[]), tv(n, &[])))
            .collect();
        assert_eq!(
            g.classify_limit(&up),
            Limit::Point(DlBoundaryPoint::LowerEnd2 {
                xi2: TreeEnd::zero_ray(&TreeVertex::origin())
            })
        );
    }

    #[test]
    fn classify_horizontal_escape_and_bounded_window() {
        let g = DlGraph::new(2, 2).unwrap();
        let far = |n: usize| {
            let mut d = vec![1];
            d.extend(std::iter::repeat_n(0, n));
            tv(0, &d)
        };
        let seq: Vec<DlVertex> = (0..10).map(|n| dv(far(n), far(n))).collect();
        assert_eq!(g.classify_limit(&seq), Limit::Point(DlBoundaryPoint::TopTop));

        let o = DlVertex::origin();
        let n = g.neighbors(&o)[1].clone();
        let bounce: Vec<DlVertex> = (0..10)
            .map(|i| if i % 2 == 0 { o.clone() } else { n.clone() })
            .collect();
        assert_eq!(g.classify_limit(&bounce), Limit::Undecided);
        assert_eq!(g.classify_limit(&[o]), Limit::Undecided);
    }

    #[test]
    fn classify_fixed_first_coordinate() {
        let g = DlGraph::new(2, 2).unwrap();
        // x1 fixed on level 0, x2 wanders away along its horocycle
        let seq: Vec<DlVertex> = (0..8)
            .map(|n| {
                let mut d = vec![1];
                d.extend(std::iter::repeat_n(0, n));
                dv(tv(0, &[1]), tv(0, &d))
            })
            .collect();
        assert_eq!(
            g.classify_limit(&seq),
            Limit::Point(DlBoundaryPoint::Vertex1 { x1: tv(0, &[1]) })
        );
    }
}
