//! End-to-end acceptance run: one line per criterion, non-zero exit status if
//! any criterion fails or exceeds its time budget.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use horo_core::verify::{self, SuiteReport};
use horo_core::Result;

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Option<Duration>,
    run: fn() -> Result<SuiteReport>,
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: 1,
        title: "DL distance formula equals BFS",
        budget: Some(Duration::from_secs(60)),
        run: verify::bertacchi,
    },
    Criterion {
        id: 2,
        title: "lamplighter group is the Cayley graph DL(2,2)",
        budget: None,
        run: verify::lamplighter_iso,
    },
    Criterion {
        id: 3,
        title: "tree distance, Busemann limit, end ultrametric",
        budget: None,
        run: verify::tree_core,
    },
    Criterion {
        id: 4,
        title: "complete bipartite witness",
        budget: None,
        run: verify::kpq,
    },
    Criterion {
        id: 5,
        title: "grandmother graph subtree swap",
        budget: None,
        run: verify::grandmother,
    },
    Criterion {
        id: 6,
        title: "hyperbolic distance and affine isometries",
        budget: None,
        run: verify::hyperbolic,
    },
    Criterion {
        id: 7,
        title: "treebolic distance and two-sided estimate",
        budget: None,
        run: verify::treebolic_bounds,
    },
    Criterion {
        id: 8,
        title: "Sol group law and distance sandwich",
        budget: Some(Duration::from_secs(120)),
        run: verify::sol_sandwich,
    },
    Criterion {
        id: 9,
        title: "lattice embedding into Sol",
        budget: None,
        run: verify::lattice_embedding,
    },
    Criterion {
        id: 10,
        title: "Baumslag-Solitar relation",
        budget: None,
        run: verify::baumslag_solitar,
    },
    Criterion {
        id: 11,
        title: "random walk speeds and lamplighter agreement",
        budget: Some(Duration::from_secs(90)),
        run: verify::walks,
    },
];

fn main() -> ExitCode {
    let mut failed = 0;
    for c in CRITERIA {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let in_time = c.budget.is_none_or(|b| elapsed <= b);
        let budget = c
            .budget
            .map_or(String::new(), |b| format!(", budget {}s", b.as_secs()));
        match outcome {
            Ok(report) => {
                let pass = report.pass && in_time;
                println!(
                    "criterion {:>2} {}: {} ({:.2}s{budget})",
                    c.id,
                    if pass { "PASS" } else { "FAIL" },
                    c.title,
                    elapsed.as_secs_f64()
                );
                for check in &report.checks {
                    println!(
                        "    [{}] {}{}{}",
                        if check.pass { "ok" } else { "FAIL" },
                        check.name,
                        if check.detail.is_empty() { "" } else { ": " },
                        check.detail
                    );
                }
                if !pass {
                    failed += 1;
                }
            }
            Err(e) => {
                println!("criterion {:>2} FAIL: {} (error: {e})", c.id, c.title);
                failed += 1;
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        CRITERIA.len() - failed,
        CRITERIA.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
