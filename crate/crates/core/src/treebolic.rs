//! Treebolic space `HT(p,q)`: pairs `(w, z)` of a point of the metric tree
//! `T_p` and a point of the sliced plane `H_q` with `𝔥(w) = log_q(Im z)`.
//!
//! The tree keeps the orientation of [`crate::tree`]: successors sit one level
//! higher, so the strips of the successors of `v` are glued above the
//! bifurcation line `L_v = {Im z = q^{𝔥(v)}}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::{dist_h, AffHEl, HPoint, SlicedPlane};
use crate::tree::{Tree, TreePoint};
use crate::wreath::LampEl;

/// Relative tolerance of the incidence check `𝔥(w) = log_q(Im z)`.
pub const INCIDENCE_TOL: f64 = 1e-9;

/// Coarse samples in the crossing-point search.
pub const COARSE_SAMPLES: usize = 64;

/// Golden-section stopping width.
pub const GOLDEN_TOL: f64 = 1e-9;

/// Slack used when the bound report decides an inequality.
pub const BOUND_SLACK: f64 = 1e-8;

/// `δ = log(1 + √2)`.
pub fn delta() -> f64 {
    (1.0 + 2.0f64.sqrt()).ln()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HtPoint {
    pub w: TreePoint,
    pub z: HPoint,
}

/// Minimizer of `d_H(z₁, z) + d_H(z, z₂)` over a bifurcation line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Crossing {
    pub x: f64,
    pub line_im: f64,
    pub value: f64,
}

/// Both readings of the two-sided comparison between `d_HT` and
/// `d_H(z₁,z₂) + (log q)·d_T(w₁,w₂) − correction`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub d_ht: f64,
    pub delta: f64,
    /// Correction `|Im z₁ − Im z₂|`.
    pub literal_middle: f64,
    pub literal_lower_ok: bool,
    pub literal_upper_ok: bool,
    /// Correction `|log Im z₁ − log Im z₂|`.
    pub log_middle: f64,
    pub log_lower_ok: bool,
    pub log_upper_ok: bool,
}

impl BoundReport {
    pub fn literal_holds(&self) -> bool {
        self.literal_lower_ok && self.literal_upper_ok
    }

    pub fn log_holds(&self) -> bool {
        self.log_lower_ok && self.log_upper_ok
    }
}

/// An element `(g₁, g₂)` with `g₁` in the lamplighter group of `T_p` and
/// `g₂ = (n, b)` in the affine group of `H_q`, subject to `Φ(g₁) = n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BEl {
    pub g1: LampEl,
    pub g2: AffHEl,
}

impl BEl {
    pub fn new(g1: LampEl, g2: AffHEl) -> Result<Self> {
        if g1.phi() != g2.n {
            return Err(Error::InvalidParams(format!(
                "tree shift {} differs from plane shift {}",
                g1.phi(),
                g2.n
            )));
        }
        Ok(Self { g1, g2 })
    }

    pub fn identity(p: u32) -> Self {
        Self {
            g1: LampEl::identity(p),
            g2: AffHEl::identity(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Treebolic {
    tree: Tree,
    plane: SlicedPlane,
}

impl Treebolic {
    pub fn new(p: u32, q: f64) -> Result<Self> {
        if q.is_nan() || q <= 1.0 + 1e-9 {
            return Err(Error::InvalidParams(format!(
                "q = {q} must exceed 1 + 1e-9 to separate the bifurcation lines"
            )));
        }
        Ok(Self {
            tree: Tree::new(p)?,
            plane: SlicedPlane::new(q)?,
        })
    }

    pub fn p(&self) -> u32 {
        self.tree.p()
    }

    pub fn q(&self) -> f64 {
        self.plane.q()
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn plane(&self) -> &SlicedPlane {
        &self.plane
    }

    /// The point over `w` with real part `x`; the imaginary part is forced.
    pub fn point(&self, w: TreePoint, x: f64) -> HtPoint {
        let y = self.plane.height_to_im(w.height());
        HtPoint {
            w,
            z: HPoint { x, y },
        }
    }

    /// Checks the incidence relation and builds the point.
    pub fn checked_point(&self, w: TreePoint, z: HPoint) -> Result<HtPoint> {
        self.check_incidence(&w, z)?;
        Ok(HtPoint { w, z })
    }

    fn check_incidence(&self, w: &TreePoint, z: HPoint) -> Result<()> {
        let tree = w.height();
        let plane = self.plane.busemann(z);
        if (tree - plane).abs() > INCIDENCE_TOL * tree.abs().max(1.0) {
            return Err(Error::IncidenceViolation { tree, plane });
        }
        Ok(())
    }

    /// True when both points lie on a common copy of `H_q`.
    pub fn same_sheet(&self, w1: &TreePoint, w2: &TreePoint) -> bool {
        w1.comparable(w2)
    }

    /// The minimizing crossing of the bifurcation line separating `a` and
    /// `b`, or `None` when they share a sheet.
    pub fn crossing(&self, a: &HtPoint, b: &HtPoint) -> Option<Crossing> {
        if self.same_sheet(&a.w, &b.w) {
            return None;
        }
        let v = a.w.confluent(&b.w);
        let line_im = self.plane.height_to_im(v.height());
        let cost = |x: f64| {
            let z = HPoint { x, y: line_im };
            dist_h(a.z, z) + dist_h(z, b.z)
        };
        let reach = dist_h(a.z, b.z) * line_im + 1.0;
        let lo = a.z.x.min(b.z.x) - reach;
        let hi = a.z.x.max(b.z.x) + reach;
        let (x, value) = multistart_min(cost, lo, hi);
        Some(Crossing { x, line_im, value })
    }

    pub fn dist(&self, a: &HtPoint, b: &HtPoint) -> f64 {
        match self.crossing(a, b) {
            None => dist_h(a.z, b.z),
            Some(c) => c.value,
        }
    }

    pub fn bound_check(&self, a: &HtPoint, b: &HtPoint) -> BoundReport {
        let d_ht = self.dist(a, b);
        let delta = delta();
        let base = dist_h(a.z, b.z) + self.q().ln() * a.w.distance(&b.w);
        let literal_middle = base - (a.z.y - b.z.y).abs();
        let log_middle = base - (a.z.y.ln() - b.z.y.ln()).abs();
        BoundReport {
            d_ht,
            delta,
            literal_middle,
            literal_lower_ok: d_ht <= literal_middle + BOUND_SLACK,
            literal_upper_ok: literal_middle <= d_ht + 2.0 * delta + BOUND_SLACK,
            log_middle,
            log_lower_ok: d_ht <= log_middle + BOUND_SLACK,
            log_upper_ok: log_middle <= d_ht + 2.0 * delta + BOUND_SLACK,
        }
    }

    pub fn b_act(&self, g: &BEl, pt: &HtPoint) -> Result<HtPoint> {
        if g.g1.modulus() != self.p() {
            return Err(Error::ModulusMismatch {
                left: g.g1.modulus(),
                right: self.p(),
            });
        }
        let w = pt.w.map_vertex(|v| g.g1.act(v));
        let z = self.plane.apply(&g.g2, pt.z);
        self.check_incidence(&w, z)?;
        Ok(HtPoint { w, z })
    }

    pub fn b_compose(&self, g: &BEl, h: &BEl) -> Result<BEl> {
        Ok(BEl {
            g1: g.g1.compose(&h.g1)?,
            g2: self.plane.compose(&g.g2, &h.g2),
        })
    }

    /// Modular function `(p/q)^{Φ(g₁)}`.
    pub fn b_modular(&self, g: &BEl) -> f64 {
        (self.p() as f64 / self.q()).powi(g.g1.phi() as i32)
    }
}

/// Coarse grid over `[lo, hi]`, then golden-section refinement around every
/// grid-local minimum. Ties go to the smaller abscissa.
fn multistart_min<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> (f64, f64) {
    let n = COARSE_SAMPLES;
    let step = (hi - lo) / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
    let fs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();

    let mut best = (xs[0], fs[0]);
    for i in 0..n {
        let left_ok = i == 0 || fs[i] <= fs[i - 1];
        let right_ok = i == n - 1 || fs[i] <= fs[i + 1];
        if !(left_ok && right_ok) {
            continue;
        }
        let a = xs[i.saturating_sub(1)];
        let b = xs[(i + 1).min(n - 1)];
        let cand = golden_section(&f, a, b);
        let cand = if fs[i] < cand.1 { (xs[i], fs[i]) } else { cand };
        if cand.1 < best.1 || (cand.1 == best.1 && cand.0 < best.0) {
            best = cand;
        }
    }
    best
}

fn golden_section<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> (f64, f64) {
    let inv_phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > GOLDEN_TOL {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    [(c, fc), (x, fx), (d, fd)]
        .into_iter()
        .fold((x, fx), |acc, p| if p.1 < acc.1 { p } else { acc })
}
