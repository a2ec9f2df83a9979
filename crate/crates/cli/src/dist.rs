//! Distance queries: the closed formula next to an independent value.

use std::fmt::Write as _;

use horo_core::bfs::bfs_distance_bidir;
use horo_core::hyperbolic::dist_h;
use horo_core::{DlGraph, DlVertex, HPoint, HtPoint, Sol, SolEl, Tree, TreePoint, TreeVertex, Treebolic};
use serde::Serialize;

use crate::error::{CliError, CliResult};

pub const DIST_SCHEMA: &str = "horo.dist-report/1";

/// Beyond this many edges the breadth-first cross-check is skipped.
pub const BFS_LIMIT: u64 = 16;

/// Samples in the brute-force scan of a bifurcation line.
pub const GRID_POINTS: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Value {
    pub method: String,
    pub value: f64,
}

impl Value {
    fn new(method: &str, value: f64) -> Self {
        Self {
            method: method.to_string(),
            value,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistReport {
    pub schema: &'static str,
    pub space: String,
    pub from: String,
    pub to: String,
    pub formula: Value,
    pub oracle: Option<Value>,
    /// `|formula − oracle|`, or for sandwiched spaces how far the estimate
    /// falls outside the bounds.
    pub gap: Option<f64>,
    /// Lower and upper bounds, for spaces that only have bounds.
    pub sandwich: Option<[f64; 2]>,
    pub converged: Option<bool>,
    /// Set when the oracle was skipped.
    pub note: Option<String>,
}

impl DistReport {
    fn new(space: String, from: &str, to: &str, formula: Value) -> Self {
        Self {
            schema: DIST_SCHEMA,
            space,
            from: from.to_string(),
            to: to.to_string(),
            formula,
            oracle: None,
            gap: None,
            sandwich: None,
            converged: None,
            note: None,
        }
    }

    fn with_oracle(mut self, oracle: Value) -> Self {
        self.gap = Some((self.formula.value - oracle.value).abs());
        self.oracle = Some(oracle);
        self
    }

    pub fn to_text(&self, exact: bool) -> String {
        let num = |x: f64| {
            if exact {
                format!("{}", x.round() as i64)
            } else {
                format!("{x:.6}")
            }
        };
        let mut out = String::new();
        let _ = writeln!(out, "space: {}", self.space);
        let _ = writeln!(out, "from: {}", self.from);
        let _ = writeln!(out, "to: {}", self.to);
        let _ = writeln!(out, "{}: {}", self.formula.method, num(self.formula.value));
        if let Some(o) = &self.oracle {
            let _ = writeln!(out, "{}: {}", o.method, num(o.value));
        }
        if let Some([lo, hi]) = self.sandwich {
            let _ = writeln!(out, "sandwich: ({}, {})", num(lo), num(hi));
        }
        if let Some(c) = self.converged {
            let _ = writeln!(out, "converged: {c}");
        }
        if let Some(g) = self.gap {
            let _ = writeln!(out, "gap: {}", if exact { num(g) } else { format!("{g:.3e}") });
        }
        if let Some(n) = &self.note {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}

fn parse_tree_vertex(tree: &Tree, token: &str) -> CliResult<TreeVertex> {
    let v: TreeVertex = token.parse().map_err(|e: horo_core::Error| CliError::parse(token, e.to_string()))?;
    tree.check(&v).map_err(|e| CliError::parse(token, e.to_string()))?;
    Ok(v)
}

fn parse_f64(token: &str, field: &str) -> CliResult<f64> {
    let x: f64 = token
        .trim()
        .parse()
        .map_err(|_| CliError::parse(token, format!("{field} is not a number")))?;
    if !x.is_finite() {
        return Err(CliError::parse(token, format!("{field} must be finite")));
    }
    Ok(x)
}

pub fn tree(p: u32, from: &str, to: &str) -> CliResult<DistReport> {
    let tree = Tree::new(p)?;
    let u = parse_tree_vertex(&tree, from)?;
    let v = parse_tree_vertex(&tree, to)?;
    let d = u.distance(&v);
    let report = DistReport::new(format!("tree({p})"), from, to, Value::new("formula", d as f64));
    Ok(bfs_check(report, d, || {
        bfs_distance_bidir(&u, &v, BFS_LIMIT as u32, |x| tree.neighbors(x))
    }))
}

pub fn dl(p: u32, q: u32, from: &str, to: &str) -> CliResult<DistReport> {
    let g = DlGraph::new(p, q)?;
    let parse = |token: &str| -> CliResult<DlVertex> {
        let v: DlVertex = token.parse().map_err(|e: horo_core::Error| CliError::parse(token, e.to_string()))?;
        g.check(&v).map_err(|e| CliError::parse(token, e.to_string()))?;
        Ok(v)
    };
    let u = parse(from)?;
    let v = parse(to)?;
    let d = g.formula_dist(&u, &v);
    let report = DistReport::new(format!("dl({p},{q})"), from, to, Value::new("formula", d as f64));
    Ok(bfs_check(report, d, || {
        bfs_distance_bidir(&u, &v, BFS_LIMIT as u32, |x| g.neighbors(x))
    }))
}

fn bfs_check<F: FnOnce() -> Option<u32>>(report: DistReport, d: u64, bfs: F) -> DistReport {
    if d > BFS_LIMIT {
        return DistReport {
            note: Some(format!("bfs skipped beyond {BFS_LIMIT} edges")),
            ..report
        };
    }
    match bfs() {
        Some(b) => report.with_oracle(Value::new("bfs", b as f64)),
        None => DistReport {
            note: Some("bfs found no path within the depth limit".into()),
            ..report
        },
    }
}

/// `level:digits@x` for a vertex, `level:digits~offset@x` for a point on the
/// edge entering that vertex.
fn parse_ht_point(ht: &Treebolic, token: &str) -> CliResult<HtPoint> {
    let (w, x) = token
        .rsplit_once('@')
        .ok_or_else(|| CliError::parse(token, "expected tree-point@x"))?;
    let x = parse_f64(x, "x")?;
    let point = match w.split_once('~') {
        None => TreePoint::Vertex(parse_tree_vertex(ht.tree(), w)?),
        Some((child, offset)) => {
            let child = parse_tree_vertex(ht.tree(), child)?;
            let offset = parse_f64(offset, "edge offset")?;
            TreePoint::on_edge(child, offset).map_err(|e| CliError::parse(token, e.to_string()))?
        }
    };
    Ok(ht.point(point, x))
}

pub fn ht(p: u32, q: f64, from: &str, to: &str) -> CliResult<DistReport> {
    let ht = Treebolic::new(p, q)?;
    let a = parse_ht_point(&ht, from)?;
    let b = parse_ht_point(&ht, to)?;
    let d = ht.dist(&a, &b);
    let report = DistReport::new(format!("ht({p},{q})"), from, to, Value::new("formula", d));
    let oracle = match ht.crossing(&a, &b) {
        None => Value::new("hyperbolic", dist_h(a.z, b.z)),
        Some(c) => Value::new("grid", grid_crossing(a.z, b.z, c.line_im)),
    };
    Ok(report.with_oracle(oracle))
}

/// Brute-force minimum of `d_H(a, z) + d_H(z, b)` over `z` on the line
/// `Im z = line_im`, sampled on a uniform grid.
fn grid_crossing(a: HPoint, b: HPoint, line_im: f64) -> f64 {
    let reach = dist_h(a, b) * line_im + 1.0;
    let lo = a.x.min(b.x) - reach;
    let hi = a.x.max(b.x) + reach;
    (0..=GRID_POINTS)
        .map(|i| {
            let z = HPoint {
                x: lo + (hi - lo) * i as f64 / GRID_POINTS as f64,
                y: line_im,
            };
            dist_h(a, z) + dist_h(z, b)
        })
        .fold(f64::INFINITY, f64::min)
}

fn parse_sol(token: &str) -> CliResult<SolEl> {
    let parts: Vec<&str> = token.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::parse(token, "expected three coordinates a,b,c"));
    }
    Ok(SolEl::new(
        parse_f64(parts[0], "a")?,
        parse_f64(parts[1], "b")?,
        parse_f64(parts[2], "c")?,
    ))
}

pub fn sol(p: f64, q: f64, from: &str, to: &str) -> CliResult<DistReport> {
    let sol = Sol::new(p, q)?;
    let a = parse_sol(from)?;
    let b = parse_sol(to)?;
    let est = sol.dist_upper(&a, &b);
    let (lo, hi) = sol.sandwich(&a, &b);
    let mut report = DistReport::new(format!("sol({p},{q})"), from, to, Value::new("upper-estimate", est.value));
    report.sandwich = Some([lo, hi]);
    report.converged = Some(est.converged);
    report.gap = Some((lo - est.value).max(est.value - hi).max(0.0));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn far_pairs_skip_bfs() {
        let r = dl(2, 2, "0:/0:", "0:1111111111/0:1111111111").unwrap();
        assert_eq!(r.formula.value, 40.0);
        assert!(r.oracle.is_none() && r.note.is_some());
    }

    #[test]
    fn ht_point_syntax() {
        let ht = Treebolic::new(2, 2.0).unwrap();
        let a = parse_ht_point(&ht, "1:1~0.25@-0.5").unwrap();
        assert_eq!(a.w.height(), 0.25);
        assert_eq!(a.z.x, -0.5);
        assert!(parse_ht_point(&ht, "1:1~1.5@0").is_err());
        assert!(parse_ht_point(&ht, "1:1").is_err());
    }

    #[test]
    fn grid_agrees_with_minimizer() {
        let r = ht(3, 1.5, "0:1@0.2", "0:2@-0.4").unwrap();
        assert_eq!(r.oracle.as_ref().unwrap().method, "grid");
        assert!(r.gap.unwrap() < 1e-6);
    }
}
