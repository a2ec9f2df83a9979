//! The lamplighter group `Z_p wr Z` and its action on `T_p`.
//!
//! An element `(η, k)` is a finitely supported lamp configuration `η: Z → Z_p`
//! together with the lamplighter's position `k`. The group law is
//! `(η, k)(η', k') = (η + L_k η', k + k')` with `L_k η'(x) = η'(x − k)`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tree::TreeVertex;

/// Finitely supported function `Z → Z_p`; zero values are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Config {
    p: u32,
    support: BTreeMap<i64, u32>,
}

impl Config {
    pub fn zero(p: u32) -> Self {
        Self {
            p,
            support: BTreeMap::new(),
        }
    }

    /// The configuration `δ_at^value`.
    pub fn delta(p: u32, at: i64, value: u32) -> Self {
        let mut c = Self::zero(p);
        c.set(at, value);
        c
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn get(&self, x: i64) -> u32 {
        self.support.get(&x).copied().unwrap_or(0)
    }

    pub fn set(&mut self, x: i64, value: u32) {
        let value = value % self.p;
        if value == 0 {
            self.support.remove(&x);
        } else {
            self.support.insert(x, value);
        }
    }

    /// Adds `value` to the lamp at `x`.
    pub fn bump(&mut self, x: i64, value: u32) {
        let v = (self.get(x) + value % self.p) % self.p;
        self.set(x, v);
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, u32)> + '_ {
        self.support.iter().map(|(&k, &v)| (k, v))
    }

    pub fn support_len(&self) -> usize {
        self.support.len()
    }

    /// `L_k η`, i.e. `x ↦ η(x − k)`.
    pub fn shifted(&self, k: i64) -> Self {
        Self {
            p: self.p,
            support: self.support.iter().map(|(&x, &v)| (x + k, v)).collect(),
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            p: self.p,
            support: self.support.iter().map(|(&x, &v)| (x, self.p - v)).collect(),
        }
    }

    pub fn add(&self, other: &Config) -> Result<Self> {
        check_moduli(self.p, other.p)?;
        let mut out = self.clone();
        for (x, v) in other.iter() {
            out.bump(x, v);
        }
        Ok(out)
    }

    /// Restriction to `(−∞, upto]`.
    pub fn restricted_upto(&self, upto: i64) -> Self {
        Self {
            p: self.p,
            support: self.support.range(..=upto).map(|(&x, &v)| (x, v)).collect(),
        }
    }

    /// Reads a tree vertex on level `k` as the configuration on `(−∞, k]`
    /// whose value at `k + n` is the label `σ(n)`.
    pub fn from_vertex(p: u32, v: &TreeVertex) -> Self {
        let mut c = Self::zero(p);
        let digits = v.digits();
        let top = v.level();
        for (j, &d) in digits.iter().rev().enumerate() {
            c.set(top - j as i64, d);
        }
        c
    }

    /// Inverse of [`Config::from_vertex`] after restricting to `(−∞, level]`.
    pub fn to_vertex(&self, level: i64) -> TreeVertex {
        let part: Vec<(i64, u32)> = self.support.range(..=level).map(|(&x, &v)| (x, v)).collect();
        let Some(&(lowest, _)) = part.first() else {
            return TreeVertex::new(level, Vec::new());
        };
        let mut digits = vec![0; (level - lowest + 1) as usize];
        for (x, v) in part {
            digits[(x - lowest) as usize] = v;
        }
        TreeVertex::new(level, digits)
    }
}

fn check_moduli(left: u32, right: u32) -> Result<()> {
    if left != right {
        return Err(Error::ModulusMismatch { left, right });
    }
    Ok(())
}

/// An element `(η, k)` of `Z_p wr Z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LampEl {
    pub eta: Config,
    pub pos: i64,
}

impl LampEl {
    pub fn new(eta: Config, pos: i64) -> Self {
        Self { eta, pos }
    }

    pub fn identity(p: u32) -> Self {
        Self::new(Config::zero(p), 0)
    }

    pub fn modulus(&self) -> u32 {
        self.eta.p
    }

    pub fn is_identity(&self) -> bool {
        self.pos == 0 && self.eta.is_zero()
    }

    pub fn compose(&self, h: &LampEl) -> Result<LampEl> {
        Ok(LampEl {
            eta: self.eta.add(&h.eta.shifted(self.pos))?,
            pos: self.pos + h.pos,
        })
    }

    pub fn inverse(&self) -> LampEl {
        LampEl {
            eta: self.eta.shifted(-self.pos).negated(),
            pos: -self.pos,
        }
    }

    /// The homomorphism `Φ` to `Z`: the height shift of the tree action.
    pub fn phi(&self) -> i64 {
        self.pos
    }

    /// In-place right multiplication by `(δ_at^value, step)`, the shape of
    /// every standard generator. Used by the walk sampler.
    pub fn push_generator(&mut self, at: i64, value: u32, step: i64) {
        self.eta.bump(self.pos + at, value);
        self.pos += step;
    }

    /// The tree automorphism of `T_p` induced by this element. It preserves
    /// the predecessor relation and shifts every level by `pos`.
    pub fn act(&self, v: &TreeVertex) -> TreeVertex {
        let zeta = Config::from_vertex(self.eta.p, v).shifted(self.pos);
        let top = v.level() + self.pos;
        let sum = self
            .eta
            .restricted_upto(top)
            .add(&zeta)
            .expect("same modulus by construction");
        sum.to_vertex(top)
    }

    /// Checked variant of [`LampEl::act`] for a tree with branching `p`.
    pub fn act_checked(&self, p: u32, v: &TreeVertex) -> Result<TreeVertex> {
        check_moduli(self.eta.p, p)?;
        Ok(self.act(v))
    }

    /// An element mapping `u` to `v`.
    pub fn transporter(p: u32, u: &TreeVertex, v: &TreeVertex) -> LampEl {
        let pos = v.level() - u.level();
        let target = Config::from_vertex(p, v);
        let moved = Config::from_vertex(p, u).shifted(pos).negated();
        let eta = target.add(&moved).expect("same modulus");
        LampEl { eta, pos }
    }
}

impl fmt::Display for LampEl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        let mut first = true;
        for (x, v) in self.eta.iter() {
            if !first {
                write!(f, "+")?;
            }
            write!(f, "{v}@{x}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ", {})", self.pos)
    }
}

/// `Z_p wr Z` as a parameter object.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lamplighter {
    p: u32,
}

impl Lamplighter {
    pub fn new(p: u32) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidParams(format!("lamp modulus p = {p} < 2")));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn identity(&self) -> LampEl {
        LampEl::identity(self.p)
    }

    /// `{(δ_1^ℓ, 1), (δ_0^ℓ, −1) : ℓ ∈ Z_p}`: step right then set the lamp at
    /// the arrival point, or set the lamp at the departure point then step
    /// left. The value `ℓ = 0` gives the pure moves.
    pub fn generators(&self) -> Vec<LampEl> {
        let right = (0..self.p).map(|l| LampEl::new(Config::delta(self.p, 1, l), 1));
        let left = (0..self.p).map(|l| LampEl::new(Config::delta(self.p, 0, l), -1));
        right.chain(left).collect()
    }

    /// Right multiplication by every generator: the Cayley-graph neighbors.
    pub fn cayley_neighbors(&self, g: &LampEl) -> Vec<LampEl> {
        self.generators()
            .iter()
            .map(|s| g.compose(s).expect("same modulus"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(p: u32, lamps: &[(i64, u32)], pos: i64) -> LampEl {
        let mut eta = Config::zero(p);
        for &(x, v) in lamps {
            eta.set(x, v);
        }
        LampEl::new(eta, pos)
    }

    #[test]
    fn compose_examples() {
        let g = el(2, &[(0, 1)], 1);
        let h = el(2, &[(0, 1)], -1);
        assert_eq!(g.compose(&h).unwrap(), el(2, &[(0, 1), (1, 1)], 0));
        assert_eq!(LampEl::identity(2).compose(&g).unwrap(), g);
        assert!(g.compose(&g.inverse()).unwrap().is_identity());
    }

    #[test]
    fn inverse_examples() {
        assert!(LampEl::identity(3).inverse().is_identity());
        assert_eq!(el(2, &[(0, 1)], 1).inverse(), el(2, &[(-1, 1)], -1));
        let g = el(5, &[(3, 2), (-1, 4)], 7);
        assert_eq!(g.inverse().inverse(), g);
        assert!(g.inverse().compose(&g).unwrap().is_identity());
    }

    #[test]
    fn moduli_must_match() {
        let g = el(2, &[], 1);
        let h = el(3, &[], 1);
        assert_eq!(
            g.compose(&h),
            Err(Error::ModulusMismatch { left: 2, right: 3 })
        );
        assert!(g.act_checked(3, &TreeVertex::origin()).is_err());
    }

    #[test]
    fn generators_are_symmetric() {
        let ll = Lamplighter::new(2).unwrap();
        let gens = ll.generators();
        assert_eq!(gens.len(), 4);
        for s in &gens {
            assert!(!s.is_identity());
            assert!(gens.contains(&s.inverse()));
        }
        let l3 = Lamplighter::new(3).unwrap();
        // inverse of (δ_1^ℓ, 1) is (δ_0^{−ℓ}, −1)
        assert_eq!(el(3, &[(1, 1)], 1).inverse(), el(3, &[(0, 2)], -1));
        assert_eq!(l3.generators().len(), 6);
    }

    #[test]
    fn vertex_config_round_trip() {
        let v = TreeVertex::new(4, vec![2, 0, 1, 0]);
        let c = Config::from_vertex(3, &v);
        assert_eq!(c.get(4), 0);
        assert_eq!(c.get(3), 1);
        assert_eq!(c.get(1), 2);
        assert_eq!(c.to_vertex(4), v);
        assert_eq!(c.to_vertex(3), v.predecessor());
    }

    #[test]
    fn action_basics() {
        let o = TreeVertex::origin();
        let x = TreeVertex::new(0, vec![1, 1]);
        assert_eq!(LampEl::identity(2).act(&x), x);
        let g = LampEl::transporter(2, &o, &x);
        assert_eq!(g.act(&o), x);
        assert_eq!(g.pos, 0);
        let stab = LampEl::transporter(2, &x, &x);
        assert_eq!(stab.act(&x), x);
        let back = LampEl::transporter(2, &x, &o);
        assert_eq!(back.compose(&g).unwrap().act(&o), o);
    }

    #[test]
    fn action_shifts_levels() {
        let g = el(3, &[(-2, 1), (4, 2)], 3);
        let v = TreeVertex::new(-1, vec![2, 1]);
        let w = g.act(&v);
        assert_eq!(w.level() - v.level(), g.phi());
        assert_eq!(g.act(&v.predecessor()), w.predecessor());
    }
}
