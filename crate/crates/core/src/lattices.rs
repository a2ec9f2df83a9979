//! Lattices in `Sol(p,p)`: the semidirect product `Z² ⋊_A Z` for a
//! hyperbolic `A ∈ SL₂(Z)`, its embedding through the eigenbasis of `A`, and
//! exact arithmetic in the Baumslag-Solitar group `BS(1,p)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sol::{Sol, SolEl};

/// A 2×2 integer matrix of determinant 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMat2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl IntMat2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a
            .checked_mul(d)
            .zip(b.checked_mul(c))
            .and_then(|(x, y)| x.checked_sub(y))
            .ok_or(Error::Overflow)?;
        if det != 1 {
            return Err(Error::NotUnimodular { det });
        }
        Ok(Self { a, b, c, d })
    }

    pub const IDENTITY: IntMat2 = IntMat2 {
        a: 1,
        b: 0,
        c: 0,
        d: 1,
    };

    pub fn trace(&self) -> i64 {
        self.a + self.d
    }

    /// The inverse `(d −b; −c a)`.
    pub fn inverse(&self) -> Self {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn mul(&self, o: &IntMat2) -> Result<Self> {
        let e = |x: i64, y: i64, z: i64, w: i64| {
            x.checked_mul(y)
                .zip(z.checked_mul(w))
                .and_then(|(s, t)| s.checked_add(t))
                .ok_or(Error::Overflow)
        };
        Ok(Self {
            a: e(self.a, o.a, self.b, o.c)?,
            b: e(self.a, o.b, self.b, o.d)?,
            c: e(self.c, o.a, self.d, o.c)?,
            d: e(self.c, o.b, self.d, o.d)?,
        })
    }

    pub fn apply(&self, v: (i64, i64)) -> Result<(i64, i64)> {
        let e = |x: i64, y: i64, z: i64, w: i64| {
            x.checked_mul(y)
                .zip(z.checked_mul(w))
                .and_then(|(s, t)| s.checked_add(t))
                .ok_or(Error::Overflow)
        };
        Ok((e(self.a, v.0, self.b, v.1)?, e(self.c, v.0, self.d, v.1)?))
    }

    /// `A^m` for any integer `m`, by repeated squaring.
    pub fn pow(&self, m: i64) -> Result<Self> {
        let mut base = if m < 0 { self.inverse() } else { *self };
        let mut e = m.unsigned_abs();
        let mut acc = Self::IDENTITY;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }
}

/// An element `((k, l), m)` of `Z² ⋊_A Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SdEl {
    pub k: i64,
    pub l: i64,
    pub m: i64,
}

impl SdEl {
    pub const IDENTITY: SdEl = SdEl { k: 0, l: 0, m: 0 };

    pub fn new(k: i64, l: i64, m: i64) -> Self {
        Self { k, l, m }
    }
}

/// `(k, l, m)(k', l', m') = ((k, l) + A^m (k', l'), m + m')`.
pub fn sd_mul(g: &SdEl, h: &SdEl, a: &IntMat2) -> Result<SdEl> {
    let (x, y) = a.pow(g.m)?.apply((h.k, h.l))?;
    Ok(SdEl {
        k: g.k.checked_add(x).ok_or(Error::Overflow)?,
        l: g.l.checked_add(y).ok_or(Error::Overflow)?,
        m: g.m.checked_add(h.m).ok_or(Error::Overflow)?,
    })
}

pub fn sd_inverse(g: &SdEl, a: &IntMat2) -> Result<SdEl> {
    let (x, y) = a.pow(-g.m)?.apply((g.k, g.l))?;
    Ok(SdEl {
        k: x.checked_neg().ok_or(Error::Overflow)?,
        l: y.checked_neg().ok_or(Error::Overflow)?,
        m: g.m.checked_neg().ok_or(Error::Overflow)?,
    })
}

/// The 3×3 matrix `(A^m  (k,l)ᵀ; 0 0 1)` of a semidirect product element.
pub fn sd_matrix(g: &SdEl, a: &IntMat2) -> Result<[[f64; 3]; 3]> {
    let am = a.pow(g.m)?;
    Ok([
        [am.a as f64, am.b as f64, g.k as f64],
        [am.c as f64, am.d as f64, g.l as f64],
        [0.0, 0.0, 1.0],
    ])
}

/// Eigen-decomposition of a hyperbolic `A`: `A·P = P·diag(λ, 1/λ)` with
/// `P = (α β; γ δ)`, `α = 1` and `det P = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenData {
    pub lambda: f64,
    /// `log λ`, the parameter of the target `Sol(p,p)`.
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl EigenData {
    /// `B = (α 0 β; γ 0 δ; 0 1 0)`.
    pub fn b_matrix(&self) -> [[f64; 3]; 3] {
        [
            [self.alpha, 0.0, self.beta],
            [self.gamma, 0.0, self.delta],
            [0.0, 1.0, 0.0],
        ]
    }

    pub fn b_inverse(&self) -> [[f64; 3]; 3] {
        // P has determinant 1, so B⁻¹ has the adjugate of P in its corners
        [
            [self.delta, -self.beta, 0.0],
            [0.0, 0.0, 1.0],
            [-self.gamma, self.alpha, 0.0],
        ]
    }

    pub fn sol(&self) -> Sol {
        Sol::new(self.p, self.p).expect("log λ > 0")
    }

    /// `|A·P − P·diag(λ, 1/λ)|_∞`.
    pub fn residual(&self, a: &IntMat2) -> f64 {
        let (al, be, ga, de) = (self.alpha, self.beta, self.gamma, self.delta);
        let ap = [
            a.a as f64 * al + a.b as f64 * ga,
            a.a as f64 * be + a.b as f64 * de,
            a.c as f64 * al + a.d as f64 * ga,
            a.c as f64 * be + a.d as f64 * de,
        ];
        let pd = [
            al * self.lambda,
            be / self.lambda,
            ga * self.lambda,
            de / self.lambda,
        ];
        ap.iter()
            .zip(pd)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    pub fn det(&self) -> f64 {
        self.alpha * self.delta - self.beta * self.gamma
    }
}

pub fn eigen_data(a: &IntMat2) -> Result<EigenData> {
    let t = a.trace();
    if t <= 2 {
        return Err(Error::TraceTooSmall { trace: t });
    }
    let tf = t as f64;
    let lambda = (tf + (tf * tf - 4.0).sqrt()) / 2.0;
    // b ≠ 0 here: b = 0 would force a·d = 1, hence trace ±2
    let bf = a.b as f64;
    let gamma = (lambda - a.a as f64) / bf;
    let second = (1.0 / lambda - a.a as f64) / bf;
    let det0 = second - gamma;
    Ok(EigenData {
        lambda,
        p: lambda.ln(),
        alpha: 1.0,
        beta: 1.0 / det0,
        gamma,
        delta: second / det0,
    })
}

/// `(k, l, m) ↦ (δk − βl, −γk + αl, m) ∈ Sol(log λ, log λ)`.
pub fn embed(g: &SdEl, e: &EigenData) -> SolEl {
    let (k, l) = (g.k as f64, g.l as f64);
    SolEl::new(
        e.delta * k - e.beta * l,
        -e.gamma * k + e.alpha * l,
        g.m as f64,
    )
}

pub fn mat3_mul(x: &[[f64; 3]; 3], y: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = (0..3).map(|k| x[i][k] * y[k][j]).sum();
        }
    }
    out
}

/// Largest entrywise gap between `B⁻¹·M(g)·B` and the Sol matrix of
/// `embed(g)`.
pub fn conjugation_residual(g: &SdEl, a: &IntMat2, e: &EigenData) -> Result<f64> {
    let m = sd_matrix(g, a)?;
    let conj = mat3_mul(&mat3_mul(&e.b_inverse(), &m), &e.b_matrix());
    let target = e.sol().matrix(&embed(g, e));
    let mut worst = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            worst = worst.max((conj[i][j] - target[i][j]).abs());
        }
    }
    Ok(worst)
}

/// The matrix `(p^m  k/p^l; 0 1)` of `BS(1,p)` with exact entries, kept with
/// `p ∤ k` unless `l = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BsEl {
    p: u32,
    pub m: i64,
    k: BigInt,
    l: u32,
}

impl BsEl {
    pub fn new(p: u32, m: i64, k: impl Into<BigInt>, l: u32) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidParams(format!("BS modulus p = {p} < 2")));
        }
        Ok(Self::reduced(p, m, k.into(), l))
    }

    pub fn identity(p: u32) -> Result<Self> {
        Self::new(p, 0, 0, 0)
    }

    fn reduced(p: u32, m: i64, mut k: BigInt, mut l: u32) -> Self {
        let pb = BigInt::from(p);
        if k.is_zero() {
            l = 0;
        }
        while l > 0 && (&k % &pb).is_zero() {
            k /= &pb;
            l -= 1;
        }
        Self { p, m, k, l }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Numerator and denominator exponent of the translation `k / p^l`.
    pub fn translation(&self) -> (&BigInt, u32) {
        (&self.k, self.l)
    }

    pub fn mul(&self, h: &BsEl) -> Result<BsEl> {
        if self.p != h.p {
            return Err(Error::ModulusMismatch {
                left: self.p,
                right: h.p,
            });
        }
        let pb = BigInt::from(self.p);
        // p^m · k'/p^{l'}, as a fraction over p^{l2}
        let (k2, l2) = if self.m >= 0 {
            (&h.k * pb.pow(self.m as u32), h.l)
        } else {
            (h.k.clone(), h.l + self.m.unsigned_abs() as u32)
        };
        let l = l2.max(self.l);
        let k = k2 * pb.pow(l - l2) + &self.k * pb.pow(l - self.l);
        let m = self.m.checked_add(h.m).ok_or(Error::Overflow)?;
        Ok(Self::reduced(self.p, m, k, l))
    }

    pub fn pow(&self, n: u32) -> Result<BsEl> {
        let mut acc = Self::identity(self.p)?;
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for BsEl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}^{}, {}", self.p, self.m, self.k)?;
        if self.l > 0 {
            write!(f, "/{}^{}", self.p, self.l)?;
        }
        write!(f, ")")
    }
}

/// Checks `a·b = b^p·a` for `a = (p, 0; 0, 1)` and `b = (1, 1; 0, 1)`.
pub fn bs_relation_check(p: u32) -> Result<bool> {
    let a = BsEl::new(p, 1, 0, 0)?;
    let b = BsEl::new(p, 0, 1, 0)?;
    Ok(a.mul(&b)? == b.pow(p)?.mul(&a)?)
}
