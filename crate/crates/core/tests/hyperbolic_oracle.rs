//! Distances in `H(p)` checked against geodesics shot from the first point.
//!
//! A unit-speed geodesic of `ds² = e^{−2pz}dx² + dz²` moving rightwards obeys
//! `x' = e^{pz} sin θ`, `z' = cos θ`, `θ' = p sin θ`. Larger launch angles hit
//! the vertical line through the target lower, so bisection on the angle
//! finds the geodesic and its integrated arc length is the distance.

use horo_core::hyperbolic::{LogPlane, LogPoint};

const STEP: f64 = 1e-3;
const MAX_LENGTH: f64 = 80.0;

/// Height and arc length where the geodesic launched at `theta` meets the
/// line `x = target.x`, or `None` when it dives below the target first.
fn shoot(p: f64, from: LogPoint, target: LogPoint, theta: f64) -> Option<(f64, f64)> {
    let rhs = |s: [f64; 3]| [(p * s[1]).exp() * s[2].sin(), s[2].cos(), p * s[2].sin()];
    let mut s = [from.x, from.z, theta];
    let mut len = 0.0;
    while len < MAX_LENGTH {
        if s[2] > std::f64::consts::FRAC_PI_2 && s[1] < target.z {
            return None;
        }
        let k1 = rhs(s);
        let k2 = rhs(std::array::from_fn(|i| s[i] + 0.5 * STEP * k1[i]));
        let k3 = rhs(std::array::from_fn(|i| s[i] + 0.5 * STEP * k2[i]));
        let k4 = rhs(std::array::from_fn(|i| s[i] + STEP * k3[i]));
        let next: [f64; 3] =
            std::array::from_fn(|i| s[i] + STEP / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
        if next[0] >= target.x {
            let t = (target.x - s[0]) / (next[0] - s[0]);
            return Some((s[1] + t * (next[1] - s[1]), len + t * STEP));
        }
        s = next;
        len += STEP;
    }
    None
}

fn shooting_distance(p: f64, a: LogPoint, b: LogPoint) -> f64 {
    let (a, b) = if a.x <= b.x { (a, b) } else { (b, a) };
    let mut lo = 1e-9;
    let mut hi = std::f64::consts::PI - 1e-9;
    let mut best = f64::NAN;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        match shoot(p, a, b, mid) {
            Some((z, len)) => {
                best = len;
                if z > b.z {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            None => hi = mid,
        }
    }
    best
}

fn check(p: f64, a: (f64, f64), b: (f64, f64)) {
    let plane = LogPlane::new(p).unwrap();
    let a = LogPoint::new(a.0, a.1);
    let b = LogPoint::new(b.0, b.1);
    let closed = plane.dist(a, b);
    let oracle = shooting_distance(p, a, b);
    assert!(
        (closed - oracle).abs() <= 1e-4,
        "p = {p}: {a:?} to {b:?}: closed form {closed}, shooting {oracle}"
    );
}

#[test]
fn unit_curvature_horizontal_pair() {
    check(1.0, (0.0, 0.0), (1.0, 0.0));
}

#[test]
fn assorted_curvatures_and_pairs() {
    for &p in &[0.5, 1.0, 2.0, 3.0] {
        check(p, (0.0, 0.0), (2.0, 0.0));
        check(p, (-1.0, 0.3), (0.5, -0.4));
        check(p, (0.2, -0.5), (0.25, 0.7));
        check(p, (3.0, 1.0), (-2.0, 0.0));
    }
}

#[test]
fn vertical_pairs_are_exact() {
    for &p in &[0.5, 1.0, 2.5] {
        let plane = LogPlane::new(p).unwrap();
        for &(z1, z2) in &[(0.0, 1.0), (-2.0, 3.5), (0.7, -0.2)] {
            let d = plane.dist(LogPoint::new(1.5, z1), LogPoint::new(1.5, z2));
            assert!((d - (z1 - z2).abs()).abs() <= 1e-12, "p = {p}: {d}");
        }
    }
}
