//! Upper half-plane geometry: the hyperbolic metric, the sliced plane `H_q`
//! with its affine group, and the logarithmic models `H(p)` of curvature `−p²`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The point `x + iy` of the upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
}

impl HPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if y.is_nan() || y <= 0.0 || !x.is_finite() || !y.is_finite() {
            return Err(Error::InvalidParams(format!(
                "({x}, {y}) is not in the upper half-plane"
            )));
        }
        Ok(Self { x, y })
    }

    /// `i`.
    pub fn i() -> Self {
        Self { x: 0.0, y: 1.0 }
    }
}

/// Hyperbolic distance, evaluated as `arccosh(1 + |z₁−z₂|²/(2y₁y₂))`.
///
/// The arccosh is rewritten through `arccosh(1 + 2s²) = 2 asinh(s)`, which
/// keeps full relative precision for nearby points as well as distant ones.
pub fn dist_h(a: HPoint, b: HPoint) -> f64 {
    let chord = (a.x - b.x).hypot(a.y - b.y);
    2.0 * (chord / (2.0 * (a.y * b.y).sqrt())).asinh()
}

/// The log-quotient form `log((|z₁−z̄₂| + |z₁−z₂|)/(|z₁−z̄₂| − |z₁−z₂|))`.
/// Loses precision for far-apart points; kept as a cross-check.
pub fn dist_h_log_form(a: HPoint, b: HPoint) -> f64 {
    let to_conj = (a.x - b.x).hypot(a.y + b.y);
    let direct = (a.x - b.x).hypot(a.y - b.y);
    ((to_conj + direct) / (to_conj - direct)).ln()
}

/// Literal `arccosh(1 + |z₁−z₂|²/(2y₁y₂))`.
pub fn dist_h_arccosh(a: HPoint, b: HPoint) -> f64 {
    let sq = (a.x - b.x).powi(2) + (a.y - b.y).powi(2);
    (1.0 + sq / (2.0 * a.y * b.y)).acosh()
}

/// The map `z ↦ qⁿ z + b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffHEl {
    pub n: i64,
    pub b: f64,
}

impl AffHEl {
    pub fn new(n: i64, b: f64) -> Self {
        Self { n, b }
    }

    pub fn identity() -> Self {
        Self { n: 0, b: 0.0 }
    }
}

/// The sliced hyperbolic plane `H_q` with Busemann function `log_q(Im z)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlicedPlane {
    q: f64,
}

impl SlicedPlane {
    pub fn new(q: f64) -> Result<Self> {
        if q.is_nan() || q <= 1.0 || !q.is_finite() {
            return Err(Error::InvalidParams(format!("slicing parameter q = {q} must exceed 1")));
        }
        Ok(Self { q })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn busemann(&self, z: HPoint) -> f64 {
        z.y.ln() / self.q.ln()
    }

    /// `Im z` on the horocycle of height `h`.
    pub fn height_to_im(&self, h: f64) -> f64 {
        self.q.powf(h)
    }

    pub fn apply(&self, g: &AffHEl, z: HPoint) -> HPoint {
        let s = self.q.powi(g.n as i32);
        HPoint {
            x: s * z.x + g.b,
            y: s * z.y,
        }
    }

    pub fn compose(&self, g: &AffHEl, h: &AffHEl) -> AffHEl {
        AffHEl {
            n: g.n + h.n,
            b: self.q.powi(g.n as i32) * h.b + g.b,
        }
    }

    pub fn inverse(&self, g: &AffHEl) -> AffHEl {
        let s = self.q.powi(-g.n as i32);
        AffHEl { n: -g.n, b: -s * g.b }
    }

    /// Modular function `q^{−n}`.
    pub fn modular(&self, g: &AffHEl) -> f64 {
        self.q.powi(-g.n as i32)
    }
}

/// A point `(x, z)` of a logarithmic model `H(p)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogPoint {
    pub x: f64,
    pub z: f64,
}

impl LogPoint {
    pub fn new(x: f64, z: f64) -> Self {
        Self { x, z }
    }
}

/// `H(p)`: the plane `R²` with `ds² = e^{−2pz}dx² + dz²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogPlane {
    p: f64,
}

impl LogPlane {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p <= 0.0 || !p.is_finite() {
            return Err(Error::InvalidParams(format!("curvature parameter p = {p} must be positive")));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Rescaled upper half-plane image `p·x + i·e^{pz}`; the map multiplies
    /// lengths by exactly `p`.
    pub fn to_half_plane(&self, a: LogPoint) -> HPoint {
        HPoint {
            x: self.p * a.x,
            y: (self.p * a.z).exp(),
        }
    }

    pub fn from_half_plane(&self, w: HPoint) -> LogPoint {
        LogPoint {
            x: w.x / self.p,
            z: w.y.ln() / self.p,
        }
    }

    pub fn dist(&self, a: LogPoint, b: LogPoint) -> f64 {
        dist_h(self.to_half_plane(a), self.to_half_plane(b)) / self.p
    }

    pub fn geodesic(&self, a: LogPoint, b: LogPoint) -> Geodesic {
        Geodesic::new(self.to_half_plane(a), self.to_half_plane(b))
    }
}

/// A hyperbolic geodesic segment in the upper half-plane, parametrized
/// proportionally to arc length.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Geodesic {
    /// Vertical segment; arc length is linear in `log y`.
    Vertical { x: f64, log_y1: f64, log_y2: f64 },
    /// Arc of the circle with center `(center, 0)`; the arc-length
    /// coordinate is `s = log tan(θ/2)` for the polar angle `θ`.
    Arc { center: f64, radius: f64, s1: f64, s2: f64 },
}

impl Geodesic {
    pub fn new(a: HPoint, b: HPoint) -> Self {
        let scale = a.y.max(b.y).max(a.x.abs()).max(b.x.abs()).max(1.0);
        if (a.x - b.x).abs() <= 1e-13 * scale {
            return Geodesic::Vertical {
                x: 0.5 * (a.x + b.x),
                log_y1: a.y.ln(),
                log_y2: b.y.ln(),
            };
        }
        let center = ((b.x * b.x + b.y * b.y) - (a.x * a.x + a.y * a.y)) / (2.0 * (b.x - a.x));
        let radius = (a.x - center).hypot(a.y);
        let s_of = |w: HPoint| {
            let theta = w.y.atan2(w.x - center);
            (theta / 2.0).tan().ln()
        };
        Geodesic::Arc {
            center,
            radius,
            s1: s_of(a),
            s2: s_of(b),
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            Geodesic::Vertical { log_y1, log_y2, .. } => (log_y2 - log_y1).abs(),
            Geodesic::Arc { s1, s2, .. } => (s2 - s1).abs(),
        }
    }

    /// The point at fraction `t ∈ [0, 1]` of the arc length.
    pub fn point_at(&self, t: f64) -> HPoint {
        match *self {
            Geodesic::Vertical { x, log_y1, log_y2 } => HPoint {
                x,
                y: (log_y1 + t * (log_y2 - log_y1)).exp(),
            },
            Geodesic::Arc {
                center,
                radius,
                s1,
                s2,
            } => {
                let s = s1 + t * (s2 - s1);
                // θ = 2 atan(e^s): cos θ = −tanh s, sin θ = 1/cosh s
                HPoint {
                    x: center - radius * s.tanh(),
                    y: radius / s.cosh(),
                }
            }
        }
    }

    /// Fraction at which the highest point is reached, if it is strictly
    /// inside the segment.
    pub fn apex_fraction(&self) -> Option<f64> {
        match *self {
            Geodesic::Vertical { .. } => None,
            Geodesic::Arc { s1, s2, .. } => {
                if s1 * s2 < 0.0 {
                    Some(s1 / (s1 - s2))
                } else {
                    None
                }
            }
        }
    }

    /// Fractions in `[0, 1]` at which the segment passes height `y`, in
    /// increasing order (at most two).
    pub fn fractions_at_height(&self, y: f64) -> Vec<f64> {
        let in_range = |t: &f64| (-1e-12..=1.0 + 1e-12).contains(t);
        let mut out: Vec<f64> = match *self {
            Geodesic::Vertical { log_y1, log_y2, .. } => {
                if log_y1 == log_y2 {
                    return if y.ln() == log_y1 { vec![0.0] } else { Vec::new() };
                }
                vec![(y.ln() - log_y1) / (log_y2 - log_y1)]
            }
            Geodesic::Arc { radius, s1, s2, .. } => {
                if s1 == s2 {
                    return vec![0.0];
                }
                let mag = (radius / y).max(1.0).acosh();
                vec![(-mag - s1) / (s2 - s1), (mag - s1) / (s2 - s1)]
            }
        };
        out.retain(in_range);
        for t in &mut out {
            *t = t.clamp(0.0, 1.0);
        }
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    pub fn first_fraction_at_height(&self, y: f64) -> Option<f64> {
        self.fractions_at_height(y).first().copied()
    }

    pub fn last_fraction_at_height(&self, y: f64) -> Option<f64> {
        self.fractions_at_height(y).last().copied()
    }
}
