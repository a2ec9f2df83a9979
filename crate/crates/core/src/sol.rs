//! `Sol(p,q)`: `R³` with `ds² = e^{−2pz}dx² + e^{2qz}dy² + dz²`, which is also
//! the Lie group with law `(a,b,c)·(x,y,z) = (e^{pc}x + a, e^{−qc}y + b, c + z)`.
//!
//! Distances are not known in closed form. [`Sol::sandwich`] brackets them
//! between the larger of the two projected hyperbolic distances and the
//! upper bound `d_{H(p)} + d_{H(q)} − |z₁ − z₂|`; [`Sol::dist_upper`] finds an
//! explicit short path by minimizing a discretized length functional.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::{LogPlane, LogPoint};

/// Segments in an optimized path.
pub const DEFAULT_SEGMENTS: usize = 64;
pub const MAX_ITERATIONS: usize = 500;
/// Stop once an optimizer step moves the path by less than this.
pub const STEP_TOL: f64 = 1e-8;
/// Resolution at which the unoptimized two-phase curve is also measured.
pub const DENSE_SEED_SEGMENTS: usize = 8192;
const LBFGS_MEMORY: usize = 8;

// 4-point Gauss-Legendre rule on [0, 1]
const GAUSS_NODES: [f64; 4] = [
    0.5 - 0.5 * 0.861_136_311_594_052_6,
    0.5 - 0.5 * 0.339_981_043_584_856_3,
    0.5 + 0.5 * 0.339_981_043_584_856_3,
    0.5 + 0.5 * 0.861_136_311_594_052_6,
];
const GAUSS_WEIGHTS: [f64; 4] = [
    0.5 * 0.347_854_845_137_453_8,
    0.5 * 0.652_145_154_862_546_1,
    0.5 * 0.652_145_154_862_546_1,
    0.5 * 0.347_854_845_137_453_8,
];

/// Group element `(a, b, c)`, equally the point `(x, y, z)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolEl {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl SolEl {
    pub const IDENTITY: SolEl = SolEl {
        a: 0.0,
        b: 0.0,
        c: 0.0,
    };

    pub fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    fn lerp(&self, other: &SolEl, t: f64) -> SolEl {
        SolEl {
            a: self.a + t * (other.a - self.a),
            b: self.b + t * (other.b - self.b),
            c: self.c + t * (other.c - self.c),
        }
    }
}

/// Samples of a path with fixed endpoints; consecutive samples are joined by
/// coordinate-linear segments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolPath {
    points: Vec<SolEl>,
}

impl SolPath {
    pub fn new(points: Vec<SolEl>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidParams("a path needs at least one segment".into()));
        }
        Ok(Self { points })
    }

    pub fn straight(a: SolEl, b: SolEl, segments: usize) -> Self {
        let n = segments.max(1);
        Self {
            points: (0..=n).map(|i| a.lerp(&b, i as f64 / n as f64)).collect(),
        }
    }

    pub fn points(&self) -> &[SolEl] {
        &self.points
    }

    pub fn segments(&self) -> usize {
        self.points.len() - 1
    }

    /// The path with a midpoint inserted into every segment.
    pub fn refined(&self) -> SolPath {
        let mut points = Vec::with_capacity(2 * self.points.len() - 1);
        for w in self.points.windows(2) {
            points.push(w[0]);
            points.push(w[0].lerp(&w[1], 0.5));
        }
        points.push(*self.points.last().expect("non-empty"));
        SolPath { points }
    }

    pub fn map<F: Fn(&SolEl) -> SolEl>(&self, f: F) -> SolPath {
        SolPath {
            points: self.points.iter().map(f).collect(),
        }
    }
}

/// Outcome of [`Sol::dist_upper`].
#[derive(Clone, Debug, PartialEq)]
pub struct UpperEstimate {
    /// Length of the best path found; always an upper bound for the distance
    /// up to quadrature error.
    pub value: f64,
    /// False when the optimizer hit the iteration cap (non-convergence).
    pub converged: bool,
    pub iterations: usize,
    pub path: SolPath,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sol {
    p: f64,
    q: f64,
}

impl Sol {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p > 0.0 && q > 0.0) || !p.is_finite() || !q.is_finite() {
            return Err(Error::InvalidParams(format!(
                "Sol parameters must be positive (p = {p}, q = {q})"
            )));
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn mul(&self, g: &SolEl, h: &SolEl) -> SolEl {
        SolEl {
            a: (self.p * g.c).exp() * h.a + g.a,
            b: (-self.q * g.c).exp() * h.b + g.b,
            c: g.c + h.c,
        }
    }

    pub fn inverse(&self, g: &SolEl) -> SolEl {
        SolEl {
            a: -(-self.p * g.c).exp() * g.a,
            b: -(self.q * g.c).exp() * g.b,
            c: -g.c,
        }
    }

    pub fn matrix(&self, g: &SolEl) -> [[f64; 3]; 3] {
        [
            [(self.p * g.c).exp(), g.a, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, g.b, (-self.q * g.c).exp()],
        ]
    }

    /// Modular function `e^{(q−p)c}`.
    pub fn modular(&self, g: &SolEl) -> f64 {
        ((self.q - self.p) * g.c).exp()
    }

    /// `(x, y, z) ↦ ((x, z), (y, −z)) ∈ H(p) × H(q)`.
    pub fn projections(&self, pt: &SolEl) -> (LogPoint, LogPoint) {
        (LogPoint::new(pt.a, pt.c), LogPoint::new(pt.b, -pt.c))
    }

    fn planes(&self) -> (LogPlane, LogPlane) {
        (
            LogPlane::new(self.p).expect("validated"),
            LogPlane::new(self.q).expect("validated"),
        )
    }

    /// `(max(d_{H(p)}, d_{H(q)}), d_{H(p)} + d_{H(q)} − |z₁ − z₂|)`.
    pub fn sandwich(&self, a: &SolEl, b: &SolEl) -> (f64, f64) {
        let (hp, hq) = self.planes();
        let (a1, a2) = self.projections(a);
        let (b1, b2) = self.projections(b);
        let dp = hp.dist(a1, b1);
        let dq = hq.dist(a2, b2);
        (dp.max(dq), dp + dq - (a.c - b.c).abs())
    }

    fn integrand(&self, z: f64, d: &SolEl) -> f64 {
        ((-2.0 * self.p * z).exp() * d.a * d.a + (2.0 * self.q * z).exp() * d.b * d.b + d.c * d.c)
            .sqrt()
    }

    pub fn segment_length(&self, from: &SolEl, to: &SolEl) -> f64 {
        let d = SolEl::new(to.a - from.a, to.b - from.b, to.c - from.c);
        GAUSS_NODES
            .iter()
            .zip(GAUSS_WEIGHTS)
            .map(|(&t, w)| w * self.integrand(from.c + t * d.c, &d))
            .sum()
    }

    /// Length of the piecewise-linear path under the Sol metric, each segment
    /// integrated with a 4-point Gauss rule.
    pub fn path_length(&self, path: &SolPath) -> f64 {
        path.points
            .windows(2)
            .map(|w| self.segment_length(&w[0], &w[1]))
            .sum()
    }

    /// Segment length and its gradient with respect to both endpoints.
    fn segment_grad(&self, from: &SolEl, to: &SolEl) -> (f64, [f64; 3], [f64; 3]) {
        let d = [to.a - from.a, to.b - from.b, to.c - from.c];
        let mut len = 0.0;
        let mut g_from = [0.0; 3];
        let mut g_to = [0.0; 3];
        for (&t, w) in GAUSS_NODES.iter().zip(GAUSS_WEIGHTS) {
            let z = from.c + t * d[2];
            let ex = (-2.0 * self.p * z).exp();
            let ey = (2.0 * self.q * z).exp();
            let f = (ex * d[0] * d[0] + ey * d[1] * d[1] + d[2] * d[2]).sqrt();
            len += w * f;
            if f < 1e-300 {
                continue;
            }
            let dd = [ex * d[0] / f, ey * d[1] / f, d[2] / f];
            let dz = (-self.p * ex * d[0] * d[0] + self.q * ey * d[1] * d[1]) / f;
            for k in 0..3 {
                g_to[k] += w * dd[k];
                g_from[k] -= w * dd[k];
            }
            g_to[2] += w * t * dz;
            g_from[2] += w * (1.0 - t) * dz;
        }
        (len, g_from, g_to)
    }

    /// Discrete energy `N·Σ ℓᵢ²` and its gradient. Its minimizers are the
    /// length-minimizing polylines with equally long segments.
    fn energy_and_grad(&self, pts: &[SolEl], grad: &mut [[f64; 3]]) -> f64 {
        for g in grad.iter_mut() {
            *g = [0.0; 3];
        }
        let n = (pts.len() - 1) as f64;
        let mut total = 0.0;
        for i in 0..pts.len() - 1 {
            let (l, gf, gt) = self.segment_grad(&pts[i], &pts[i + 1]);
            total += n * l * l;
            for k in 0..3 {
                grad[i][k] += 2.0 * n * l * gf[k];
                grad[i + 1][k] += 2.0 * n * l * gt[k];
            }
        }
        total
    }

    /// Inverse of the metric at each interior sample, scaled like the
    /// diagonal blocks of the energy's Hessian.
    fn preconditioner(&self, pts: &[SolEl]) -> Vec<f64> {
        let scale = 1.0 / (4.0 * (pts.len() - 1) as f64);
        pts[1..pts.len() - 1]
            .iter()
            .flat_map(|pt| {
                [
                    scale * (2.0 * self.p * pt.c).exp(),
                    scale * (-2.0 * self.q * pt.c).exp(),
                    scale,
                ]
            })
            .collect()
    }

    fn energy_of(&self, pts: &[SolEl]) -> f64 {
        let n = (pts.len() - 1) as f64;
        pts.windows(2)
            .map(|w| n * self.segment_length(&w[0], &w[1]).powi(2))
            .sum()
    }

    /// Shortens the path by minimizing its discrete energy over the interior
    /// samples with L-BFGS and a backtracking line search; the endpoints stay
    /// fixed. The reported value is the length of the final path.
    pub fn optimize(&self, seed: &SolPath) -> UpperEstimate {
        let n = seed.points.len();
        let mut pts = seed.points.clone();
        let mut grad3 = vec![[0.0; 3]; n];
        let mut energy = self.energy_and_grad(&pts, &mut grad3);
        if n <= 2 {
            return UpperEstimate {
                value: self.path_length(seed),
                converged: true,
                iterations: 0,
                path: seed.clone(),
            };
        }
        let flat = |g: &[[f64; 3]]| -> Vec<f64> { g[1..n - 1].iter().flatten().copied().collect() };
        let mut g = flat(&grad3);
        let mut history: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
        let mut trial = pts.clone();
        let mut converged = false;
        let mut iterations = 0;

        while iterations < MAX_ITERATIONS {
            iterations += 1;
            let precond = self.preconditioner(&pts);
            let mut d = lbfgs_direction(&g, &precond, &history);
            let mut slope = dot(&g, &d);
            if slope >= 0.0 {
                history.clear();
                d = g.iter().zip(&precond).map(|(v, p)| -v * p).collect();
                slope = dot(&g, &d);
            }
            if slope == 0.0 {
                converged = true;
                break;
            }
            let mut alpha = 1.0;
            let mut accepted = false;
            for _ in 0..60 {
                for i in 1..n - 1 {
                    let j = 3 * (i - 1);
                    trial[i] = SolEl::new(
                        pts[i].a + alpha * d[j],
                        pts[i].b + alpha * d[j + 1],
                        pts[i].c + alpha * d[j + 2],
                    );
                }
                if self.energy_of(&trial) <= energy + 1e-4 * alpha * slope {
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if !accepted {
                if history.is_empty() {
                    // no descent left at working precision
                    converged = true;
                    break;
                }
                history.clear();
                continue;
            }
            std::mem::swap(&mut pts, &mut trial);
            energy = self.energy_and_grad(&pts, &mut grad3);
            let g_new = flat(&grad3);
            let step: Vec<f64> = d.iter().map(|v| alpha * v).collect();
            let dg: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
            let sy = dot(&step, &dg);
            if sy > 1e-14 * norm(&step) * norm(&dg) {
                if history.len() == LBFGS_MEMORY {
                    history.pop_front();
                }
                history.push_back((step.clone(), dg, 1.0 / sy));
            }
            g = g_new;
            trial.clone_from(&pts);
            if norm(&step) < STEP_TOL {
                converged = true;
                break;
            }
        }

        UpperEstimate {
            value: self.path_length_of(&pts),
            converged,
            iterations,
            path: SolPath { points: pts },
        }
    }

    fn path_length_of(&self, pts: &[SolEl]) -> f64 {
        pts.windows(2).map(|w| self.segment_length(&w[0], &w[1])).sum()
    }

    /// A path realizing the upper sandwich bound: with `z₁ ≤ z₂`, first the
    /// part of the `H(q)` geodesic that dips below `z₁` and comes back, then
    /// both geodesics' monotone parts run simultaneously from `z₁` to `z₂`,
    /// then the part of the `H(p)` geodesic that overshoots `z₂`.
    pub fn two_phase_seed(&self, a: &SolEl, b: &SolEl, segments: usize) -> SolPath {
        if a.c > b.c {
            let mut path = self.two_phase_seed(b, a, segments);
            path.points.reverse();
            return path;
        }
        let segments = segments.max(3);
        let (hp, hq) = self.planes();
        let gp = hp.geodesic(LogPoint::new(a.a, a.c), LogPoint::new(b.a, b.c));
        let gq = hq.geodesic(LogPoint::new(a.b, -a.c), LogPoint::new(b.b, -b.c));

        // phase A: the dip of the H(q) geodesic, which by symmetry returns
        // to its starting height at twice the apex fraction
        let t_ret = gq.apex_fraction().map_or(0.0, |t| (2.0 * t).min(1.0));
        // phase C: the overshoot of the H(p) geodesic above z₂
        let top = (self.p * b.c).exp();
        let t_mid = gp.first_fraction_at_height(top).unwrap_or(1.0);

        let len_a = gq.length() * t_ret / self.q;
        let len_c = gp.length() * (1.0 - t_mid) / self.p;
        let len_b = gp.length() * t_mid / self.p + gq.length() * (1.0 - t_ret) / self.q;
        let counts = allocate(segments, [len_a, len_b, len_c], [t_ret > 0.0, b.c > a.c, t_mid < 1.0]);

        let q_point = |t: f64| {
            let w = gq.point_at(t);
            (w.x / self.q, -w.y.ln() / self.q)
        };
        let p_point = |t: f64| {
            let w = gp.point_at(t);
            (w.x / self.p, w.y.ln() / self.p)
        };

        let mut points = vec![*a];
        for i in 1..=counts[0] {
            let (y, z) = q_point(t_ret * i as f64 / counts[0] as f64);
            points.push(SolEl::new(a.a, y, z));
        }
        if counts[0] > 0 {
            points.last_mut().expect("non-empty").c = a.c;
        }
        let mut y_mid = points.last().expect("non-empty").b;
        for i in 1..=counts[1] {
            let s = i as f64 / counts[1] as f64;
            let z = a.c + (b.c - a.c) * 0.5 * (1.0 - (std::f64::consts::PI * s).cos());
            let x = gp
                .first_fraction_at_height((self.p * z).exp())
                .map_or(a.a, |t| p_point(t).0);
            let y = gq
                .last_fraction_at_height((-self.q * z).exp())
                .map_or(y_mid, |t| q_point(t).0);
            points.push(SolEl::new(x, y, z));
        }
        if counts[1] > 0 {
            y_mid = b.b;
            let last = points.last_mut().expect("non-empty");
            last.b = b.b;
            last.c = b.c;
        }
        for i in 1..=counts[2] {
            let t = t_mid + (1.0 - t_mid) * i as f64 / counts[2] as f64;
            let (x, z) = p_point(t);
            points.push(SolEl::new(x, y_mid, z));
        }
        *points.last_mut().expect("non-empty") = *b;
        SolPath { points }
    }

    /// Optimizes at a coarse resolution, then repeatedly doubles it by
    /// inserting midpoints and optimizes again, up to `segments`.
    pub fn optimize_multilevel(&self, coarse: SolPath, segments: usize) -> UpperEstimate {
        let mut path = coarse;
        let mut iterations = 0;
        loop {
            let est = self.optimize(&path);
            iterations += est.iterations;
            if est.path.segments() >= segments {
                return UpperEstimate { iterations, ..est };
            }
            path = est.path.refined();
        }
    }

    /// Shortest of three polylines: the straight seed and the two-phase seed,
    /// each optimized up to `segments` segments, and the unoptimized two-phase
    /// seed sampled densely.
    pub fn dist_upper_with(&self, a: &SolEl, b: &SolEl, segments: usize) -> UpperEstimate {
        if a == b {
            return UpperEstimate {
                value: 0.0,
                converged: true,
                iterations: 0,
                path: SolPath {
                    points: vec![*a, *b],
                },
            };
        }
        let coarse = (segments / 8).max(4);
        let straight = self.optimize_multilevel(SolPath::straight(*a, *b, coarse), segments);
        let phased = self.optimize_multilevel(self.two_phase_seed(a, b, coarse), segments);
        let converged = straight.converged && phased.converged;
        let iterations = straight.iterations + phased.iterations;
        let dense = self.two_phase_seed(a, b, DENSE_SEED_SEGMENTS);
        let dense_len = self.path_length(&dense);
        let best = if phased.value <= straight.value {
            phased
        } else {
            straight
        };
        if dense_len < best.value {
            UpperEstimate {
                value: dense_len,
                converged,
                iterations,
                path: dense,
            }
        } else {
            UpperEstimate {
                converged,
                iterations,
                ..best
            }
        }
    }

    /// [`Sol::dist_upper_with`] at the default resolution.
    pub fn dist_upper(&self, a: &SolEl, b: &SolEl) -> UpperEstimate {
        self.dist_upper_with(a, b, DEFAULT_SEGMENTS)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Two-loop recursion: `−H·g` for the inverse-Hessian estimate `H` built
/// from the stored `(s, y, 1/(s·y))` pairs on top of the diagonal `precond`.
fn lbfgs_direction(
    g: &[f64],
    precond: &[f64],
    history: &VecDeque<(Vec<f64>, Vec<f64>, f64)>,
) -> Vec<f64> {
    let mut r: Vec<f64> = g.iter().map(|v| -v).collect();
    let mut alphas = Vec::with_capacity(history.len());
    for (s, y, rho) in history.iter().rev() {
        let a = rho * dot(s, &r);
        for (ri, yi) in r.iter_mut().zip(y) {
            *ri -= a * yi;
        }
        alphas.push(a);
    }
    let gamma = history.back().map_or(1.0, |(s, y, _)| {
        let yy: f64 = y.iter().zip(precond).map(|(v, d)| v * v * d).sum();
        dot(s, y) / yy
    });
    for (ri, d) in r.iter_mut().zip(precond) {
        *ri *= gamma * d;
    }
    for ((s, y, rho), a) in history.iter().zip(alphas.iter().rev()) {
        let b = rho * dot(y, &r);
        for (ri, si) in r.iter_mut().zip(s) {
            *ri += (a - b) * si;
        }
    }
    r
}

/// Splits `total` segments among the enabled phases in proportion to their
/// lengths, at least one each.
fn allocate(total: usize, lengths: [f64; 3], enabled: [bool; 3]) -> [usize; 3] {
    let mut counts = [0usize; 3];
    let active: Vec<usize> = (0..3).filter(|&i| enabled[i]).collect();
    if active.is_empty() {
        return counts;
    }
    let sum: f64 = active.iter().map(|&i| lengths[i].max(1e-12)).sum();
    let spare = total.saturating_sub(active.len());
    for &i in &active {
        counts[i] = 1 + (spare as f64 * lengths[i].max(1e-12) / sum).floor() as usize;
    }
    let used: usize = counts.iter().sum();
    // hand the rounding remainder to the longest phase
    let longest = *active
        .iter()
        .max_by(|&&i, &&j| lengths[i].total_cmp(&lengths[j]))
        .expect("non-empty");
    counts[longest] += total.saturating_sub(used);
    counts
}
