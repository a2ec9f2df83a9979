use horo_core::hyperbolic::dist_h;
use horo_core::lattices::{eigen_data, embed, sd_inverse, sd_mul};
use horo_core::*;
use proptest::prelude::*;

fn config(p: u32, entries: &[(i64, u32)]) -> Config {
    let mut eta = Config::zero(p);
    for &(x, v) in entries {
        eta.set(x, v);
    }
    eta
}

fn vertex(p: u32) -> impl Strategy<Value = TreeVertex> {
    (-4i64..=4, prop::collection::vec(0..p, 0..6)).prop_map(|(l, d)| TreeVertex::new(l, d))
}

fn lamp(p: u32) -> impl Strategy<Value = LampEl> {
    (prop::collection::vec((-5i64..=5, 0..p), 0..5), -4i64..=4)
        .prop_map(move |(entries, pos)| LampEl::new(config(p, &entries), pos))
}

fn lamp_at(p: u32, pos: i64) -> impl Strategy<Value = LampEl> {
    prop::collection::vec((-5i64..=5, 0..p), 0..5)
        .prop_map(move |entries| LampEl::new(config(p, &entries), pos))
}

fn dl_vertex(p: u32, q: u32) -> impl Strategy<Value = DlVertex> {
    (
        -4i64..=4,
        prop::collection::vec(0..p, 0..6),
        prop::collection::vec(0..q, 0..6),
    )
        .prop_map(|(k, d1, d2)| {
            DlVertex::new(TreeVertex::new(k, d1), TreeVertex::new(-k, d2)).unwrap()
        })
}

fn a_el(p: u32, q: u32) -> impl Strategy<Value = AEl> {
    (-3i64..=3).prop_flat_map(move |n| {
        (lamp_at(p, n), lamp_at(q, -n)).prop_map(|(g1, g2)| AEl::new(g1, g2).unwrap())
    })
}

fn sol_el() -> impl Strategy<Value = SolEl> {
    (-2.0..2.0f64, -2.0..2.0f64, -1.5..1.5f64).prop_map(|(a, b, c)| SolEl::new(a, b, c))
}

fn sol_close(x: &SolEl, y: &SolEl) -> bool {
    let close = |u: f64, v: f64| (u - v).abs() <= 1e-10 * u.abs().max(v.abs()).max(1.0);
    close(x.a, y.a) && close(x.b, y.b) && close(x.c, y.c)
}

fn hyperbolic_matrix() -> impl Strategy<Value = IntMat2> {
    prop::sample::select(vec![(2, 1, 1, 1), (3, 2, 1, 1), (1, 1, 1, 2), (5, 2, 2, 1)])
        .prop_map(|(a, b, c, d)| IntMat2::new(a, b, c, d).unwrap())
}

fn sd_el() -> impl Strategy<Value = SdEl> {
    (-20i64..=20, -20i64..=20, -3i64..=3).prop_map(|(k, l, m)| SdEl::new(k, l, m))
}

fn bs_el(p: u32) -> impl Strategy<Value = BsEl> {
    (-3i64..=3, -40i64..=40, 0u32..=3).prop_map(move |(m, k, l)| BsEl::new(p, m, k, l).unwrap())
}

fn tree_point(p: u32) -> impl Strategy<Value = TreePoint> {
    (vertex(p), prop::option::of(0.05..0.95f64)).prop_map(|(v, off)| match off {
        None => TreePoint::Vertex(v),
        Some(o) => TreePoint::on_edge(v, o).unwrap(),
    })
}

fn ht_point(ht: Treebolic) -> impl Strategy<Value = HtPoint> {
    (tree_point(ht.p()), -3.0..3.0f64).prop_map(move |(w, x)| ht.point(w, x))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn tree_successors_hang_below(v in vertex(3)) {
        let tree = Tree::new(3).unwrap();
        let succ = tree.successors(&v);
        prop_assert_eq!(succ.len(), 3);
        for (i, s) in succ.iter().enumerate() {
            prop_assert_eq!(s.predecessor(), v.clone());
            prop_assert_eq!(s.level(), v.level() + 1);
            prop_assert_eq!(s.distance(&v), 1);
            prop_assert!(!succ[..i].contains(s));
        }
    }

    #[test]
    fn tree_distance_is_a_metric(u in vertex(2), v in vertex(2), w in vertex(2)) {
        prop_assert_eq!(u.distance(&v), v.distance(&u));
        prop_assert_eq!(u.distance(&u), 0);
        prop_assert!(u.distance(&w) <= u.distance(&v) + v.distance(&w));
        let c = u.confluent(&v);
        prop_assert!(c.is_ancestor_or_equal(&u) && c.is_ancestor_or_equal(&v));
        let via = (u.level() - c.level()) + (v.level() - c.level());
        prop_assert_eq!(u.distance(&v), via as u64);
    }

    #[test]
    fn lamplighter_group_axioms(g in lamp(3), h in lamp(3), k in lamp(3)) {
        let gh_k = g.compose(&h).unwrap().compose(&k).unwrap();
        let g_hk = g.compose(&h.compose(&k).unwrap()).unwrap();
        prop_assert_eq!(gh_k, g_hk);
        let e = LampEl::identity(3);
        prop_assert_eq!(g.compose(&e).unwrap(), g.clone());
        prop_assert_eq!(e.compose(&g).unwrap(), g.clone());
        prop_assert!(g.compose(&g.inverse()).unwrap().is_identity());
        prop_assert!(g.inverse().compose(&g).unwrap().is_identity());
    }

    #[test]
    fn phi_is_a_homomorphism(g in lamp(2), h in lamp(2)) {
        prop_assert_eq!(g.compose(&h).unwrap().phi(), g.phi() + h.phi());
        prop_assert_eq!(g.inverse().phi(), -g.phi());
    }

    #[test]
    fn lamplighter_acts_by_tree_automorphisms(g in lamp(3), h in lamp(3), v in vertex(3), w in vertex(3)) {
        let gh = g.compose(&h).unwrap();
        prop_assert_eq!(g.act(&h.act(&v)), gh.act(&v));
        prop_assert_eq!(g.act(&v.predecessor()), g.act(&v).predecessor());
        prop_assert_eq!(g.act(&v).level(), v.level() + g.phi());
        prop_assert_eq!(g.act(&v).distance(&g.act(&w)), v.distance(&w));
        prop_assert_eq!(g.inverse().act(&g.act(&v)), v.clone());
    }

    #[test]
    fn transporter_moves_u_to_v(u in vertex(2), v in vertex(2)) {
        prop_assert_eq!(LampEl::transporter(2, &u, &v).act(&u), v);
    }

    #[test]
    fn dl_neighbors_have_full_degree(v in dl_vertex(2, 3)) {
        let g = DlGraph::new(2, 3).unwrap();
        let nb = g.neighbors(&v);
        prop_assert_eq!(nb.len(), 5);
        for (i, w) in nb.iter().enumerate() {
            prop_assert_eq!(g.formula_dist(&v, w), 1);
            prop_assert!(g.are_adjacent(w, &v));
            prop_assert!(!nb[..i].contains(w));
        }
    }

    #[test]
    fn dl_distance_is_a_metric(u in dl_vertex(3, 2), v in dl_vertex(3, 2), w in dl_vertex(3, 2)) {
        let g = DlGraph::new(3, 2).unwrap();
        prop_assert_eq!(g.formula_dist(&u, &v), g.formula_dist(&v, &u));
        prop_assert_eq!(g.formula_dist(&u, &u), 0);
        prop_assert!(g.formula_dist(&u, &w) <= g.formula_dist(&u, &v) + g.formula_dist(&v, &w));
        prop_assert!(g.formula_dist(&u, &v) as i64 >= (u.level() - v.level()).abs());
    }

    #[test]
    fn a_act_is_an_isometric_group_action(
        g in a_el(2, 3), h in a_el(2, 3), u in dl_vertex(2, 3), v in dl_vertex(2, 3)
    ) {
        let dl = DlGraph::new(2, 3).unwrap();
        let gh = g.compose(&h).unwrap();
        prop_assert_eq!(dl.a_act(&g, &dl.a_act(&h, &u).unwrap()).unwrap(), dl.a_act(&gh, &u).unwrap());
        let gu = dl.a_act(&g, &u).unwrap();
        prop_assert_eq!(gu.level(), u.level() + g.phi());
        prop_assert_eq!(dl.formula_dist(&gu, &dl.a_act(&g, &v).unwrap()), dl.formula_dist(&u, &v));
        for w in dl.neighbors(&u) {
            prop_assert!(dl.are_adjacent(&gu, &dl.a_act(&g, &w).unwrap()));
        }
        prop_assert_eq!(dl.a_act(&dl.a_transporter(&u, &v), &u).unwrap(), v);
    }

    #[test]
    fn encoding_round_trips(g in lamp(3), v in dl_vertex(3, 3)) {
        prop_assert_eq!(DlVertex::from_lamplighter(&g).to_lamplighter(3), g.clone());
        prop_assert_eq!(DlVertex::from_lamplighter(&v.to_lamplighter(3)), v);
        let dl = DlGraph::new(3, 3).unwrap();
        let image = DlVertex::from_lamplighter(&g);
        for s in Lamplighter::new(3).unwrap().cayley_neighbors(&g) {
            prop_assert!(dl.are_adjacent(&image, &DlVertex::from_lamplighter(&s)));
        }
    }

    #[test]
    fn sol_group_axioms(x in sol_el(), y in sol_el(), z in sol_el()) {
        let sol = Sol::new(1.0, 2.0).unwrap();
        let lhs = sol.mul(&sol.mul(&x, &y), &z);
        let rhs = sol.mul(&x, &sol.mul(&y, &z));
        prop_assert!(sol_close(&lhs, &rhs), "{lhs:?} vs {rhs:?}");
        prop_assert!(sol_close(&sol.mul(&x, &SolEl::IDENTITY), &x));
        prop_assert!(sol_close(&sol.mul(&x, &sol.inverse(&x)), &SolEl::IDENTITY));
        prop_assert!(sol_close(&sol.mul(&sol.inverse(&x), &x), &SolEl::IDENTITY));
    }

    #[test]
    fn sol_sandwich_is_ordered(x in sol_el(), y in sol_el()) {
        let sol = Sol::new(1.5, 1.0).unwrap();
        let (lo, hi) = sol.sandwich(&x, &y);
        prop_assert!(lo <= hi + 1e-12);
        let (lo_rev, hi_rev) = sol.sandwich(&y, &x);
        prop_assert!((lo - lo_rev).abs() <= 1e-10 && (hi - hi_rev).abs() <= 1e-10);
    }

    #[test]
    fn semidirect_product_axioms(a in hyperbolic_matrix(), g in sd_el(), h in sd_el(), k in sd_el()) {
        let gh_k = sd_mul(&sd_mul(&g, &h, &a).unwrap(), &k, &a).unwrap();
        let g_hk = sd_mul(&g, &sd_mul(&h, &k, &a).unwrap(), &a).unwrap();
        prop_assert_eq!(gh_k, g_hk);
        prop_assert_eq!(sd_mul(&g, &SdEl::IDENTITY, &a).unwrap(), g);
        prop_assert_eq!(sd_mul(&g, &sd_inverse(&g, &a).unwrap(), &a).unwrap(), SdEl::IDENTITY);
    }

    #[test]
    fn embedding_is_a_homomorphism(a in hyperbolic_matrix(), g in sd_el(), h in sd_el()) {
        let e = eigen_data(&a).unwrap();
        let sol = e.sol();
        let lhs = embed(&sd_mul(&g, &h, &a).unwrap(), &e);
        let rhs = sol.mul(&embed(&g, &e), &embed(&h, &e));
        let scale = lhs.a.abs().max(lhs.b.abs()).max(1.0);
        prop_assert!((lhs.a - rhs.a).abs() <= 1e-9 * scale);
        prop_assert!((lhs.b - rhs.b).abs() <= 1e-9 * scale);
        prop_assert!((lhs.c - rhs.c).abs() <= 1e-12);
    }

    #[test]
    fn baumslag_solitar_axioms(g in bs_el(3), h in bs_el(3), k in bs_el(3)) {
        let gh_k = g.mul(&h).unwrap().mul(&k).unwrap();
        let g_hk = g.mul(&h.mul(&k).unwrap()).unwrap();
        prop_assert_eq!(gh_k, g_hk);
        let e = BsEl::identity(3).unwrap();
        prop_assert_eq!(g.mul(&e).unwrap(), g.clone());
        prop_assert_eq!(e.mul(&g).unwrap(), g.clone());
        prop_assert_eq!(g.mul(&h).unwrap().m, g.m + h.m);
    }

    #[test]
    fn b_act_preserves_incidence_and_distance(
        a in ht_point(Treebolic::new(2, 2.0).unwrap()),
        b in ht_point(Treebolic::new(2, 2.0).unwrap()),
        n in -2i64..=2,
        shift in -2.0..2.0f64,
        entries in prop::collection::vec((-5i64..=5, 0u32..2), 0..5),
    ) {
        let ht = Treebolic::new(2, 2.0).unwrap();
        let g = BEl::new(LampEl::new(config(2, &entries), n), AffHEl::new(n, shift)).unwrap();
        let ga = ht.b_act(&g, &a).unwrap();
        let gb = ht.b_act(&g, &b).unwrap();
        prop_assert!(ht.checked_point(ga.w.clone(), ga.z).is_ok());
        let before = ht.dist(&a, &b);
        let after = ht.dist(&ga, &gb);
        prop_assert!((before - after).abs() <= 1e-8 * before.max(1.0), "{before} vs {after}");
    }

    #[test]
    fn single_sheet_distance_is_hyperbolic(
        v in vertex(3),
        tail in prop::collection::vec(0u32..3, 0..4),
        x1 in -3.0..3.0f64,
        x2 in -3.0..3.0f64,
    ) {
        let ht = Treebolic::new(3, 1.5).unwrap();
        let mut below = v.clone();
        for d in tail {
            below.push_child(d);
        }
        let a = ht.point(TreePoint::Vertex(v), x1);
        let b = ht.point(TreePoint::Vertex(below), x2);
        prop_assert!(ht.crossing(&a, &b).is_none());
        prop_assert_eq!(ht.dist(&a, &b), dist_h(a.z, b.z));
    }

    #[test]
    fn hyperbolic_triangle_inequality(
        x in prop::array::uniform3(-5.0..5.0f64),
        y in prop::array::uniform3(0.05..5.0f64),
    ) {
        let pts: Vec<HPoint> = (0..3).map(|i| HPoint::new(x[i], y[i]).unwrap()).collect();
        let (a, b, c) = (pts[0], pts[1], pts[2]);
        let ab = dist_h(a, b);
        let bc = dist_h(b, c);
        let ac = dist_h(a, c);
        prop_assert!(ac <= ab + bc + 1e-10 * (ab + bc).max(1.0));
        prop_assert!((ab - dist_h(b, a)).abs() <= 1e-12 * ab.max(1.0));
    }
}
