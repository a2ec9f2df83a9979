//! Self-checks that compare every closed form in the crate with an
//! independent oracle: breadth-first search, brute-force grids, exact integer
//! arithmetic or fixed-seed simulation.
//!
//! Each suite returns a [`SuiteReport`] listing its checks; a suite passes
//! when all of its checks do.

use std::collections::{BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bfs::{bfs_ball, bfs_distance_bidir, Ball};
use crate::dl::{DlGraph, DlVertex};
use crate::error::{Error, Result};
use crate::hyperbolic::{dist_h, dist_h_arccosh, dist_h_log_form, AffHEl, HPoint, SlicedPlane};
use crate::lattices::{
    bs_relation_check, conjugation_residual, eigen_data, embed, sd_inverse, sd_mul, IntMat2, SdEl,
};
use crate::sol::{Sol, SolEl};
use crate::tree::{Tree, TreePoint, TreeTarget, TreeVertex};
use crate::treebolic::{HtPoint, Treebolic};
use crate::walks::{lamplighter_walk, srw_run, WalkConfig, WalkSpace};
use crate::wreath::Lamplighter;

/// Suites named after the acceptance blocks, in the order `all` runs them.
pub const SUITES: &[&str] = &[
    "bertacchi",
    "lamplighter-iso",
    "kpq",
    "grandmother",
    "treebolic-bounds",
    "sol-sandwich",
    "lattice",
];

/// Tree, hyperbolic and random-walk suites; `all` runs them after [`SUITES`].
pub const EXTRA_SUITES: &[&str] = &["tree", "hyperbolic", "walks"];

/// Seed of the `DL(2,2)` speed run.
pub const WALK_SEED_DL22: u64 = 7;
/// Seed of the `DL(2,3)` speed run.
pub const WALK_SEED_DL23: u64 = 7;
/// Seed of the lamplighter run compared against the `DL(2,2)` run.
pub const WALK_SEED_LAMPLIGHTER: u64 = 11;
pub const WALK_STEPS: u64 = 10_000;
pub const WALK_TRIALS: u32 = 200;
pub const SPEED_THRESHOLD: f64 = 0.05;

const SUITE_SEED: u64 = 0x486f_726f;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(name: &str, checks: Vec<Check>) -> Self {
        Self {
            name: name.to_string(),
            pass: checks.iter().all(|c| c.pass),
            checks,
        }
    }
}

fn check(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        pass,
        detail: detail.into(),
    }
}

fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SUITE_SEED ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Runs one named suite, or every suite in [`SUITES`] and [`EXTRA_SUITES`]
/// for `all`.
pub fn run(name: &str) -> Result<Vec<SuiteReport>> {
    if name == "all" {
        return SUITES.iter().chain(EXTRA_SUITES).map(|s| suite(s)).collect();
    }
    Ok(vec![suite(name)?])
}

pub fn suite(name: &str) -> Result<SuiteReport> {
    match name {
        "bertacchi" => bertacchi(),
        "lamplighter-iso" => lamplighter_iso(),
        "kpq" => kpq(),
        "grandmother" => grandmother(),
        "treebolic-bounds" => treebolic_bounds(),
        "sol-sandwich" => sol_sandwich(),
        "lattice" => lattice(),
        "tree" => tree_core(),
        "hyperbolic" => hyperbolic(),
        "walks" => walks(),
        other => Err(Error::UnknownSuite(other.to_string())),
    }
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T]) -> &'a T {
    &items[rng.random_range(0..items.len())]
}

/// Closed-form `DL(p,q)` distance against BFS: from the origin to every
/// vertex of the radius-5 ball, and between 500 random pairs of it.
pub fn bertacchi() -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for (p, q) in [(2, 2), (2, 3)] {
        let g = DlGraph::new(p, q)?;
        let o = DlVertex::origin();
        let ball = g.bfs_ball(&o, 5)?;
        let bad = ball
            .vertices
            .iter()
            .zip(&ball.dist)
            .filter(|(v, &d)| g.formula_dist(&o, v) != d as u64)
            .count();
        checks.push(check(
            format!("DL({p},{q}) origin to radius-5 ball"),
            bad == 0,
            format!("{} vertices, {bad} mismatches", ball.len()),
        ));

        let mut r = rng(100 + 10 * p as u64 + q as u64);
        let mut bad = 0;
        for _ in 0..500 {
            let u = pick(&mut r, &ball.vertices);
            let v = pick(&mut r, &ball.vertices);
            let bfs = bfs_distance_bidir(u, v, 10, |x| g.neighbors(x));
            if bfs != Some(g.formula_dist(u, v) as u32) {
                bad += 1;
            }
        }
        checks.push(check(
            format!("DL({p},{q}) random in-ball pairs"),
            bad == 0,
            format!("500 pairs, {bad} mismatches"),
        ));
    }
    Ok(SuiteReport::new("bertacchi", checks))
}

/// The encoding of `Z_2 wr Z` into `DL(2,2)`: a bijection of radius-6 balls
/// that preserves adjacency, and word length equals graph distance.
pub fn lamplighter_iso() -> Result<SuiteReport> {
    let ll = Lamplighter::new(2)?;
    let g = DlGraph::new(2, 2)?;
    let cayley = bfs_ball(ll.identity(), 6, |x| ll.cayley_neighbors(x));
    let dl = g.bfs_ball(&DlVertex::origin(), 6)?;
    let image: Vec<DlVertex> = cayley.vertices.iter().map(DlVertex::from_lamplighter).collect();
    let mut checks = Vec::new();

    let distinct: BTreeSet<&DlVertex> = image.iter().collect();
    let dl_set: BTreeSet<&DlVertex> = dl.vertices.iter().collect();
    checks.push(check(
        "bijection on radius-6 balls",
        distinct.len() == image.len() && distinct == dl_set,
        format!(
            "{} group elements, {} distinct images, {} ball vertices",
            image.len(),
            distinct.len(),
            dl.len()
        ),
    ));

    let round_trip = cayley
        .vertices
        .iter()
        .zip(&image)
        .all(|(el, v)| v.to_lamplighter(2) == *el);
    checks.push(check("decoding inverts encoding", round_trip, ""));

    let edge_image: BTreeSet<(DlVertex, DlVertex)> = cayley
        .edges
        .iter()
        .map(|&(i, j)| ordered(image[i].clone(), image[j].clone()))
        .collect();
    let dl_edges: BTreeSet<(DlVertex, DlVertex)> = dl
        .edges
        .iter()
        .map(|&(i, j)| ordered(dl.vertices[i].clone(), dl.vertices[j].clone()))
        .collect();
    checks.push(check(
        "adjacency preserved both ways",
        edge_image == dl_edges,
        format!("{} Cayley edges, {} graph edges", cayley.edges.len(), dl.edges.len()),
    ));

    let mut r = rng(200);
    let gens = ll.generators();
    let mut bad = 0;
    for _ in 0..200 {
        let mut el = ll.identity();
        for _ in 0..r.random_range(1..=12) {
            el = el.compose(pick(&mut r, &gens))?;
        }
        let word = bfs_distance_bidir(&ll.identity(), &el, 12, |x| ll.cayley_neighbors(x));
        let d = g.formula_dist(&DlVertex::origin(), &DlVertex::from_lamplighter(&el));
        if word != Some(d as u32) {
            bad += 1;
        }
    }
    checks.push(check(
        "word length equals graph distance",
        bad == 0,
        format!("200 random elements, {bad} mismatches"),
    ));
    Ok(SuiteReport::new("lamplighter-iso", checks))
}

fn ordered<T: Ord>(a: T, b: T) -> (T, T) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// All-pairs distances inside a ball, by BFS over the ball's own edges.
fn ball_all_pairs<V>(ball: &Ball<V>) -> Vec<Vec<u32>> {
    let n = ball.vertices.len();
    let mut adj = vec![Vec::new(); n];
    for &(i, j) in &ball.edges {
        adj[i].push(j);
        adj[j].push(i);
    }
    (0..n)
        .map(|s| {
            let mut dist = vec![u32::MAX; n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if dist[w] == u32::MAX {
                        dist[w] = dist[v] + 1;
                        queue.push_back(w);
                    }
                }
            }
            dist
        })
        .collect()
}

/// Tree distance against BFS on the radius-6 ball of `T_3` (balls in trees
/// are convex, so in-ball BFS is exact), the Busemann limit, and the strong
/// triangle inequality of the end ultrametric on a radius-5 ball.
pub fn tree_core() -> Result<SuiteReport> {
    let t = Tree::new(3)?;
    let o = TreeVertex::origin();
    let mut checks = Vec::new();

    let ball = t.ball(&o, 6);
    let all = ball_all_pairs(&ball);
    let mut bad = 0;
    for (i, u) in ball.vertices.iter().enumerate() {
        for (j, v) in ball.vertices.iter().enumerate() {
            if u.distance(v) != all[i][j] as u64 {
                bad += 1;
            }
        }
    }
    checks.push(check(
        "distance equals BFS on radius-6 ball of T_3",
        bad == 0,
        format!("{} vertices, {bad} mismatching pairs", ball.len()),
    ));

    let mut bad = 0;
    for x in &ball.vertices {
        let direct = t.busemann_limit_check(x, &o);
        // far enough along the ray to the reference end the difference of
        // distances is constant
        let low = x.level().min(o.level()) - 3;
        let anchor = x.confluent(&o).ancestor_at(low).expect("below both");
        let far = x.distance(&anchor) as i64 - o.distance(&anchor) as i64;
        if direct != x.level() - o.level() || far != direct {
            bad += 1;
        }
    }
    checks.push(check(
        "Busemann limit equals level difference",
        bad == 0,
        format!("{} vertices, {bad} failures", ball.len()),
    ));

    let small = t.ball(&o, 5);
    let targets: Vec<TreeTarget> = small.vertices.iter().cloned().map(TreeTarget::from).collect();
    let n = targets.len();
    let mut theta = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = t.ultrametric(&targets[i], &targets[j], &o);
            theta[i][j] = d;
            theta[j][i] = d;
        }
    }
    let mut bad = 0u64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if theta[i][k] > theta[i][j].max(theta[j][k]) * (1.0 + 1e-12) {
                    bad += 1;
                }
            }
        }
    }
    checks.push(check(
        "strong triangle inequality on radius-5 ball",
        bad == 0,
        format!("{} triples, {bad} violations", (n as u64).pow(3)),
    ));
    Ok(SuiteReport::new("tree", checks))
}

/// The complete bipartite `K_{q,p}` between horoplanes.
pub fn kpq() -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for (p, q) in [(2, 2), (2, 3), (3, 2), (3, 4)] {
        let g = DlGraph::new(p, q)?;
        for o in [
            DlVertex::origin(),
            DlVertex::new(TreeVertex::new(2, vec![1, 0, 1]), TreeVertex::new(-2, vec![1]))?,
        ] {
            let w = g.kpq_witness(&o);
            let pass = w.a.len() == q as usize && w.b.len() == p as usize && w.complete && w.b_is_neighborhood;
            checks.push(check(
                format!("DL({p},{q}) at {o}"),
                pass,
                format!(
                    "|A| = {}, |B| = {}, complete = {}, B = N(A) = {}",
                    w.a.len(),
                    w.b.len(),
                    w.complete,
                    w.b_is_neighborhood
                ),
            ));
        }
    }
    Ok(SuiteReport::new("kpq", checks))
}

fn tree_adjacent(u: &TreeVertex, v: &TreeVertex) -> bool {
    u.predecessor() == *v || v.predecessor() == *u
}

fn grandmother_adjacent(u: &TreeVertex, v: &TreeVertex) -> bool {
    tree_adjacent(u, v) || u.predecessor().predecessor() == *v || v.predecessor().predecessor() == *u
}

/// A subtree swap is an automorphism of the grandmother graph fixing a
/// vertex but moving two of its successors.
pub fn grandmother() -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for p in [2, 3] {
        let t = Tree::new(p)?;
        let apex = TreeVertex::new(0, vec![1]);
        let swap = t.swap(apex.clone(), 0, 1)?;
        let ball = t.ball(&apex, 4);
        let image: Vec<TreeVertex> = ball.vertices.iter().map(|v| swap.apply(v)).collect();
        let as_set: BTreeSet<&TreeVertex> = image.iter().collect();
        let ball_set: BTreeSet<&TreeVertex> = ball.vertices.iter().collect();
        let mut tree_bad = 0;
        let mut gm_bad = 0;
        for i in 0..ball.len() {
            for j in 0..ball.len() {
                let (u, v) = (&ball.vertices[i], &ball.vertices[j]);
                if tree_adjacent(u, v) != tree_adjacent(&image[i], &image[j]) {
                    tree_bad += 1;
                }
                if grandmother_adjacent(u, v) != grandmother_adjacent(&image[i], &image[j]) {
                    gm_bad += 1;
                }
            }
        }
        checks.push(check(
            format!("T_{p} swap permutes the radius-4 ball"),
            as_set == ball_set,
            format!("{} vertices", ball.len()),
        ));
        checks.push(check(
            format!("T_{p} swap preserves both edge relations"),
            tree_bad == 0 && gm_bad == 0,
            format!("{tree_bad} tree and {gm_bad} grandmother mismatches"),
        ));
        let c0 = apex.child(0);
        let c1 = apex.child(1);
        let nontrivial = swap.apply(&apex) == apex && swap.apply(&c0) == c1 && swap.apply(&c1) == c0;
        checks.push(check(
            format!("T_{p} swap fixes the apex and exchanges two successors"),
            nontrivial,
            format!("{apex} fixed, {c0} <-> {c1}"),
        ));
    }
    Ok(SuiteReport::new("grandmother", checks))
}

/// Hyperbolic distance forms and affine isometries.
pub fn hyperbolic() -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let e_i = HPoint::new(0.0, std::f64::consts::E)?;
    let d = dist_h(HPoint::i(), e_i);
    checks.push(check(
        "d(i, e i) = 1",
        (d - 1.0).abs() < 1e-12,
        format!("{d:.17}"),
    ));

    let mut r = rng(600);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let a = HPoint::new(r.random_range(-1.0..1.0), r.random_range(0.5..2.0))?;
        let b = HPoint::new(r.random_range(-1.0..1.0), r.random_range(0.5..2.0))?;
        let main = dist_h(a, b);
        worst = worst
            .max((dist_h_log_form(a, b) - dist_h_arccosh(a, b)).abs())
            .max((main - dist_h_log_form(a, b)).abs());
    }
    checks.push(check(
        "log and arccosh forms agree",
        worst < 1e-12,
        format!("10000 pairs, worst gap {worst:.2e}"),
    ));

    let mut worst = 0.0f64;
    for q in [2.0, 3.0, 1.5] {
        let plane = SlicedPlane::new(q)?;
        for _ in 0..1000 {
            let g = AffHEl::new(r.random_range(-3..=3), r.random_range(-2.0..2.0));
            let a = HPoint::new(r.random_range(-2.0..2.0), r.random_range(0.1..4.0))?;
            let b = HPoint::new(r.random_range(-2.0..2.0), r.random_range(0.1..4.0))?;
            let moved = dist_h(plane.apply(&g, a), plane.apply(&g, b));
            worst = worst.max((moved - dist_h(a, b)).abs());
        }
    }
    checks.push(check(
        "affine maps are isometries",
        worst < 1e-10,
        format!("3000 pairs, worst gap {worst:.2e}"),
    ));
    Ok(SuiteReport::new("hyperbolic", checks))
}

fn random_descendant(r: &mut ChaCha8Rng, p: u32, base: &TreeVertex, depth: u32) -> TreeVertex {
    let mut v = base.clone();
    for _ in 0..depth {
        v = v.child(r.random_range(0..p));
    }
    v
}

/// A random point of the tree below `base` (towards larger levels), possibly
/// inside an edge.
fn random_tree_point(r: &mut ChaCha8Rng, p: u32, base: &TreeVertex, max_depth: u32) -> TreePoint {
    let depth = r.random_range(0..=max_depth);
    let v = random_descendant(r, p, base, depth);
    if r.random_bool(0.5) {
        TreePoint::Vertex(v)
    } else {
        let child = v.child(r.random_range(0..p));
        TreePoint::on_edge(child, r.random_range(0.0..1.0)).expect("offset in range")
    }
}

fn random_ht_point(r: &mut ChaCha8Rng, ht: &Treebolic, base: &TreeVertex) -> HtPoint {
    let w = random_tree_point(r, ht.p(), base, 3);
    ht.point(w, r.random_range(-3.0..3.0))
}

/// Treebolic distance: the bifurcation-line minimizer against a dense grid,
/// the triangle inequality, and both readings of the two-sided estimate.
pub fn treebolic_bounds() -> Result<SuiteReport> {
    let spaces = [
        Treebolic::new(2, 2.0)?,
        Treebolic::new(3, 2.0)?,
        Treebolic::new(2, 3.0)?,
    ];
    let mut r = rng(700);
    let mut checks = Vec::new();

    let mut worst = 0.0f64;
    let mut undercut = 0;
    for i in 0..100 {
        let ht = &spaces[i % spaces.len()];
        let p = ht.p();
        let root = TreeVertex::new(r.random_range(-1..=1), vec![]);
        let v = random_descendant(&mut r, p, &root, 2);
        let a = r.random_range(0..p);
        let b = (a + r.random_range(1..p)) % p;
        let w1 = random_tree_point(&mut r, p, &v.child(a), 1);
        let w2 = random_tree_point(&mut r, p, &v.child(b), 1);
        let x1 = r.random_range(-3.0..3.0);
        let x2 = r.random_range(-3.0..3.0);
        let pa = ht.point(w1, x1);
        let pb = ht.point(w2, x2);
        let c = ht.crossing(&pa, &pb).expect("different sheets");
        let (lo, hi) = (x1.min(x2), x1.max(x2));
        let n = 10_000;
        let grid = (0..=n)
            .map(|k| {
                let x = lo + (hi - lo) * k as f64 / n as f64;
                let z = HPoint { x, y: c.line_im };
                dist_h(pa.z, z) + dist_h(z, pb.z)
            })
            .fold(f64::INFINITY, f64::min);
        worst = worst.max((c.value - grid).abs());
        if c.value > grid + 1e-12 {
            undercut += 1;
        }
    }
    checks.push(check(
        "crossing minimizer matches grid brute force",
        worst <= 1e-6,
        format!("100 instances, worst gap {worst:.2e}, grid beat minimizer {undercut} times"),
    ));

    let base = TreeVertex::new(-2, vec![]);
    let mut worst = f64::NEG_INFINITY;
    for i in 0..1000 {
        let ht = &spaces[i % spaces.len()];
        let a = random_ht_point(&mut r, ht, &base);
        let b = random_ht_point(&mut r, ht, &base);
        let c = random_ht_point(&mut r, ht, &base);
        let excess = ht.dist(&a, &c) - ht.dist(&a, &b) - ht.dist(&b, &c);
        worst = worst.max(excess);
    }
    checks.push(check(
        "triangle inequality",
        worst <= 1e-8,
        format!("1000 triples, worst excess {worst:.2e}"),
    ));

    let mut log_fail = 0;
    let mut literal_fail = 0;
    for i in 0..1000 {
        let ht = &spaces[i % spaces.len()];
        let a = random_ht_point(&mut r, ht, &base);
        let b = random_ht_point(&mut r, ht, &base);
        let rep = ht.bound_check(&a, &b);
        if !rep.log_holds() {
            log_fail += 1;
        }
        if !rep.literal_holds() {
            literal_fail += 1;
        }
    }
    checks.push(check(
        "two-sided estimate with log heights",
        log_fail == 0,
        format!("1000 pairs, {log_fail} violations"),
    ));
    checks.push(check(
        "two-sided estimate with raw heights (reported only)",
        true,
        format!(
            "1000 pairs, {literal_fail} violations; {}",
            if literal_fail > 0 { "fails as expected" } else { "holds" }
        ),
    ));
    Ok(SuiteReport::new("treebolic-bounds", checks))
}

fn sol_gap(x: &SolEl, y: &SolEl) -> f64 {
    let scale = 1f64.max(x.a.abs()).max(x.b.abs()).max(x.c.abs());
    (x.a - y.a).abs().max((x.b - y.b).abs()).max((x.c - y.c).abs()) / scale
}

fn mat3_mul(x: &[[f64; 3]; 3], y: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| x[i][k] * y[k][j]).sum();
        }
    }
    out
}

fn random_sol(r: &mut ChaCha8Rng) -> SolEl {
    SolEl::new(
        r.random_range(-2.0..2.0),
        r.random_range(-2.0..2.0),
        r.random_range(-2.0..2.0),
    )
}

/// Sol group axioms, the matrix representation, and the distance sandwich
/// around optimized path lengths.
pub fn sol_sandwich() -> Result<SuiteReport> {
    let mut r = rng(800);
    let mut checks = Vec::new();
    for (p, q) in [(1.0, 1.0), (1.0, 2.0)] {
        let s = Sol::new(p, q)?;
        let e = SolEl::IDENTITY;
        let mut axiom = 0.0f64;
        let mut matrix = 0.0f64;
        for _ in 0..1000 {
            let (g, h, k) = (random_sol(&mut r), random_sol(&mut r), random_sol(&mut r));
            let left = s.mul(&s.mul(&g, &h), &k);
            let right = s.mul(&g, &s.mul(&h, &k));
            axiom = axiom
                .max(sol_gap(&left, &right))
                .max(sol_gap(&s.mul(&g, &e), &g))
                .max(sol_gap(&s.mul(&e, &g), &g))
                .max(sol_gap(&s.mul(&g, &s.inverse(&g)), &e))
                .max(sol_gap(&s.mul(&s.inverse(&g), &g), &e));
            let prod = mat3_mul(&s.matrix(&g), &s.matrix(&h));
            let direct = s.matrix(&s.mul(&g, &h));
            for i in 0..3 {
                for j in 0..3 {
                    let gap = (prod[i][j] - direct[i][j]).abs() / direct[i][j].abs().max(1.0);
                    matrix = matrix.max(gap);
                }
            }
        }
        checks.push(check(
            format!("Sol({p},{q}) group axioms"),
            axiom <= 1e-14,
            format!("1000 triples, worst relative gap {axiom:.2e}"),
        ));
        checks.push(check(
            format!("Sol({p},{q}) matrix homomorphism"),
            matrix <= 1e-12,
            format!("1000 pairs, worst relative gap {matrix:.2e}"),
        ));

        let mut below = 0;
        let mut above = 0;
        let mut unconverged = 0;
        let mut tightest = f64::INFINITY;
        for _ in 0..100 {
            let a = random_sol(&mut r);
            let b = random_sol(&mut r);
            let (lo, hi) = s.sandwich(&a, &b);
            let est = s.dist_upper(&a, &b);
            if est.value < lo - 1e-6 {
                below += 1;
            }
            if est.value > hi + 1e-6 {
                above += 1;
            }
            if !est.converged {
                unconverged += 1;
            }
            tightest = tightest.min(hi - est.value);
        }
        checks.push(check(
            format!("Sol({p},{q}) sandwich around path optimum"),
            below == 0 && above == 0,
            format!(
                "100 pairs, {below} below the lower bound, {above} above the upper bound, \
                 smallest margin to the upper bound {tightest:.2e}, {unconverged} unconverged"
            ),
        ));
    }
    Ok(SuiteReport::new("sol-sandwich", checks))
}

/// The lattice `Z² ⋊_A Z` inside `Sol(log λ, log λ)`.
pub fn lattice_embedding() -> Result<SuiteReport> {
    let a = IntMat2::new(2, 1, 1, 1)?;
    let e = eigen_data(&a)?;
    let mut r = rng(900);
    let mut checks = Vec::new();

    let golden = (3.0 + 5f64.sqrt()) / 2.0;
    checks.push(check(
        "eigenvalue of (2 1; 1 1)",
        (e.lambda - golden).abs() < 1e-12,
        format!("lambda = {:.17}", e.lambda),
    ));
    let res = e.residual(&a);
    checks.push(check(
        "diagonalization residual",
        res < 1e-10 && (e.det() - 1.0).abs() < 1e-12,
        format!("residual {res:.2e}, det {:.17}", e.det()),
    ));

    let mut conj = 0.0f64;
    let mut hom = 0.0f64;
    let s = e.sol();
    let random_sd = |r: &mut ChaCha8Rng| {
        SdEl::new(r.random_range(-5..=5), r.random_range(-5..=5), r.random_range(-3..=3))
    };
    for _ in 0..100 {
        let g = random_sd(&mut r);
        let h = random_sd(&mut r);
        conj = conj.max(conjugation_residual(&g, &a, &e)?);
        let lhs = embed(&sd_mul(&g, &h, &a)?, &e);
        let rhs = s.mul(&embed(&g, &e), &embed(&h, &e));
        hom = hom.max((lhs.a - rhs.a).abs().max((lhs.b - rhs.b).abs()).max((lhs.c - rhs.c).abs()));
    }
    checks.push(check(
        "conjugation by B",
        conj < 1e-9,
        format!("100 elements, worst entry gap {conj:.2e}"),
    ));
    checks.push(check(
        "embedding is a homomorphism",
        hom < 1e-9,
        format!("100 pairs, worst gap {hom:.2e}"),
    ));

    let mut bad = 0;
    for _ in 0..1000 {
        let (g, h, k) = (random_sd(&mut r), random_sd(&mut r), random_sd(&mut r));
        let assoc = sd_mul(&sd_mul(&g, &h, &a)?, &k, &a)? == sd_mul(&g, &sd_mul(&h, &k, &a)?, &a)?;
        let inv = sd_mul(&g, &sd_inverse(&g, &a)?, &a)? == SdEl::IDENTITY;
        let id = sd_mul(&g, &SdEl::IDENTITY, &a)? == g && sd_mul(&SdEl::IDENTITY, &g, &a)? == g;
        if !(assoc && inv && id) {
            bad += 1;
        }
    }
    checks.push(check(
        "semidirect product group axioms",
        bad == 0,
        format!("1000 triples, {bad} failures"),
    ));

    let mut images = Vec::new();
    for k in -4..=4 {
        for l in -4..=4 {
            for m in -4..=4 {
                images.push(embed(&SdEl::new(k, l, m), &e));
            }
        }
    }
    let mut closest = f64::INFINITY;
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            let (x, y) = (&images[i], &images[j]);
            closest = closest.min((x.a - y.a).abs().max((x.b - y.b).abs()).max((x.c - y.c).abs()));
        }
    }
    checks.push(check(
        "embedding is injective on a 9^3 grid",
        closest > 1e-9,
        format!("closest images {closest:.3e} apart"),
    ));
    let unimodular = images.iter().all(|g| s.modular(g) == 1.0);
    checks.push(check("image is unimodular", unimodular, ""));

    Ok(SuiteReport::new("lattice-embedding", checks))
}

/// The defining relation of `BS(1,p)` in exact arithmetic.
pub fn baumslag_solitar() -> Result<SuiteReport> {
    let checks = [2, 3, 5]
        .into_iter()
        .map(|p| {
            Ok(check(
                format!("BS(1,{p}) relation a b = b^{p} a"),
                bs_relation_check(p)?,
                "exact",
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport::new("baumslag-solitar", checks))
}

/// [`lattice_embedding`] and [`baumslag_solitar`] together.
pub fn lattice() -> Result<SuiteReport> {
    let mut checks = lattice_embedding()?.checks;
    checks.extend(baumslag_solitar()?.checks);
    Ok(SuiteReport::new("lattice", checks))
}

/// Fixed-seed random walks: zero speed for `DL(2,2)`, positive for
/// `DL(2,3)`, and the lamplighter walk matching the `DL(2,2)` walk.
pub fn walks() -> Result<SuiteReport> {
    let dl22 = srw_run(&WalkConfig::new(
        WalkSpace::Dl { p: 2, q: 2 },
        WALK_STEPS,
        WALK_TRIALS,
        WALK_SEED_DL22,
    )?)?;
    let dl23 = srw_run(&WalkConfig::new(
        WalkSpace::Dl { p: 2, q: 3 },
        WALK_STEPS,
        WALK_TRIALS,
        WALK_SEED_DL23,
    )?)?;
    let ll = lamplighter_walk(&WalkConfig::new(
        WalkSpace::Lamplighter { p: 2 },
        WALK_STEPS,
        WALK_TRIALS,
        WALK_SEED_LAMPLIGHTER,
    )?)?;
    let mut checks = vec![
        check(
            "DL(2,2) speed below threshold",
            dl22.speed < SPEED_THRESHOLD,
            format!("speed {:.4} +- {:.4}", dl22.speed, dl22.speed_half_width),
        ),
        check(
            "DL(2,3) speed above threshold",
            dl23.speed > SPEED_THRESHOLD,
            format!("speed {:.4} +- {:.4}", dl23.speed, dl23.speed_half_width),
        ),
    ];
    let mut worst = 0.0f64;
    let mut agree = true;
    for j in 0..dl22.checkpoints.len() {
        let gap = (dl22.mean_distance[j] - ll.mean_distance[j]).abs();
        let allowed = 3.0 * dl22.half_width[j].hypot(ll.half_width[j]);
        if gap > allowed {
            agree = false;
        }
        if allowed > 0.0 {
            worst = worst.max(gap / allowed * 3.0);
        }
    }
    checks.push(check(
        "lamplighter and DL(2,2) mean distances agree",
        agree,
        format!(
            "checkpoints {:?}, largest gap {worst:.2} combined half-widths",
            dl22.checkpoints
        ),
    ));
    Ok(SuiteReport::new("walks", checks))
}
