use horo_core::walks::{dl_trajectory, lamplighter_trajectory, lamplighter_walk, srw_run};
use horo_core::{DlGraph, DlVertex, WalkConfig, WalkSpace};

#[test]
fn distance_from_origin_changes_by_one_each_step() {
    let g = DlGraph::new(3, 2).unwrap();
    let origin = DlVertex::origin();
    for trial in 0..4 {
        let path = dl_trajectory(3, 2, 2000, 21, trial);
        for w in path.windows(2) {
            let a = g.formula_dist(&origin, &w[0]) as i64;
            let b = g.formula_dist(&origin, &w[1]) as i64;
            assert_eq!((a - b).abs(), 1, "bipartite walk must move a step");
        }
    }
    let g = DlGraph::new(2, 2).unwrap();
    let path = lamplighter_trajectory(2, 2000, 21, 0);
    for w in path.windows(2) {
        let a = g.formula_dist(&origin, &DlVertex::from_lamplighter(&w[0])) as i64;
        let b = g.formula_dist(&origin, &DlVertex::from_lamplighter(&w[1])) as i64;
        assert_eq!((a - b).abs(), 1);
    }
}

#[test]
fn runs_are_bit_identical_for_a_seed() {
    let cfg = WalkConfig::new(WalkSpace::Lamplighter { p: 3 }, 3000, 40, 5).unwrap();
    let a = lamplighter_walk(&cfg).unwrap();
    let b = lamplighter_walk(&cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(dl_trajectory(2, 3, 500, 8, 3), dl_trajectory(2, 3, 500, 8, 3));
    let other = lamplighter_walk(&WalkConfig { seed: 6, ..cfg }).unwrap();
    assert_ne!(a.mean_distance, other.mean_distance);
}

#[test]
fn trial_streams_differ() {
    assert_ne!(dl_trajectory(2, 3, 200, 8, 0), dl_trajectory(2, 3, 200, 8, 1));
}

#[test]
fn drift_makes_unequal_branching_faster() {
    let balanced = WalkConfig::new(WalkSpace::Dl { p: 2, q: 2 }, 5000, 100, 3).unwrap();
    let drifting = WalkConfig::new(WalkSpace::Dl { p: 2, q: 3 }, 5000, 100, 3).unwrap();
    let s22 = srw_run(&balanced).unwrap();
    let s23 = srw_run(&drifting).unwrap();
    assert!(s22.speed < s23.speed, "{} vs {}", s22.speed, s23.speed);
    assert!((s23.speed - 0.2).abs() < 0.05, "DL(2,3) speed {}", s23.speed);
    assert_eq!(s22.checkpoints, vec![0, 1, 10, 100, 1000, 5000]);
    assert!(s22.mean_distance.windows(2).all(|w| w[0] <= w[1]));
}
