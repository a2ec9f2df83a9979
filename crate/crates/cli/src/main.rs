//! `horo`: constructions, distance queries, verification suites and random
//! walks on horocyclic products.

mod dist;
mod error;
mod export;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use horo_core::verify::{self, SuiteReport};
use horo_core::walks::{lamplighter_walk, srw_run};
use horo_core::{DlGraph, DlVertex, Tree, TreeVertex, WalkConfig, WalkSpace, WalkStats};
use serde::Serialize;

use error::{CliError, CliResult};
use export::{ExportGraph, Format, GraphParams};

/// Largest radius accepted for grandmother-graph balls.
const GRANDMOTHER_RADIUS_CAP: u32 = 5;

const VERIFY_SCHEMA: &str = "horo.verify-summary/1";
const WALK_SCHEMA: &str = "horo.walk-stats/1";

const COORDS_HELP: &str = "Tree vertices are written level:digits, the digits being the edge labels \
on the way down from the reference end, oldest first (e.g. 0:11, -2:, 3:102). \
DL(p,q) vertices are x1/x2 with levels summing to zero (e.g. 1:1/-1:). \
Treebolic points are vertex@x or child~offset@x for a point on the edge above child. \
Sol points are a,b,c.";

#[derive(Parser, Debug)]
#[command(name = "horo", version, about = "Computable horocyclic products", after_help = COORDS_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Export a ball of DL(p,q) or of the grandmother graph of T_p.
    Ball(BallArgs),
    /// Distance between two points, with an independent cross-check.
    Dist {
        #[command(subcommand)]
        space: DistSpace,
    },
    /// Run a verification suite and print a JSON summary.
    Verify {
        /// Suite name, or `all`.
        suite: String,
    },
    /// Simulate simple random walks and print statistics as JSON.
    Walk(WalkArgs),
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("graph").required(true).args(["dl", "grandmother"])))]
struct BallArgs {
    /// Diestel-Leader graph DL(P,Q).
    #[arg(long, num_args = 2, value_names = ["P", "Q"])]
    dl: Option<Vec<u32>>,
    /// Grandmother graph of the tree T_P.
    #[arg(long, value_name = "P")]
    grandmother: Option<u32>,
    /// Ball radius; at most 8 for DL graphs and 5 for grandmother graphs.
    #[arg(short, long)]
    radius: u32,
    /// Center vertex; defaults to the origin.
    #[arg(long, allow_hyphen_values = true)]
    center: Option<String>,
    /// dot or json.
    #[arg(long, default_value = "json")]
    format: String,
    /// Write to this file instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum DistSpace {
    /// Homogeneous tree T_p: formula against breadth-first search.
    Tree {
        #[arg(short)]
        p: u32,
        #[arg(allow_hyphen_values = true)]
        from: String,
        #[arg(allow_hyphen_values = true)]
        to: String,
        #[arg(long)]
        json: bool,
    },
    /// DL(p,q): closed formula against breadth-first search.
    Dl {
        #[arg(short)]
        p: u32,
        #[arg(short)]
        q: u32,
        #[arg(allow_hyphen_values = true)]
        from: String,
        #[arg(allow_hyphen_values = true)]
        to: String,
        #[arg(long)]
        json: bool,
    },
    /// Treebolic space HT(p,q): exact metric against a grid search.
    Ht {
        #[arg(short)]
        p: u32,
        #[arg(short)]
        q: f64,
        #[arg(allow_hyphen_values = true)]
        from: String,
        #[arg(allow_hyphen_values = true)]
        to: String,
        #[arg(long)]
        json: bool,
    },
    /// Sol(p,q): optimized path length inside the projection bounds.
    Sol {
        #[arg(short)]
        p: f64,
        #[arg(short)]
        q: f64,
        #[arg(allow_hyphen_values = true)]
        from: String,
        #[arg(allow_hyphen_values = true)]
        to: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("space").required(true).args(["dl", "lamplighter"])))]
struct WalkArgs {
    /// Walk on DL(P,Q).
    #[arg(long, num_args = 2, value_names = ["P", "Q"])]
    dl: Option<Vec<u32>>,
    /// Walk on the lamplighter group Z_P wr Z with its standard generators.
    #[arg(long, value_name = "P")]
    lamplighter: Option<u32>,
    /// Steps per trial.
    #[arg(short = 'n', long, default_value_t = 10_000)]
    steps: u64,
    /// Number of independent trials.
    #[arg(short = 'T', long, default_value_t = 200)]
    trials: u32,
    /// Seed of the random streams; required.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Serialize)]
struct VerifySummary<'a> {
    schema: &'static str,
    suite: &'a str,
    pass: bool,
    suites: &'a [SuiteReport],
}

#[derive(Serialize)]
struct WalkOutput<'a> {
    schema: &'static str,
    #[serde(flatten)]
    stats: &'a WalkStats,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run(command: Command) -> CliResult<ExitCode> {
    match command {
        Command::Ball(args) => ball(args),
        Command::Dist { space } => dist(space),
        Command::Verify { suite } => verify_cmd(&suite),
        Command::Walk(args) => walk(args),
    }
}

fn emit(text: &str, output: Option<&PathBuf>) -> CliResult<()> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn ball(args: BallArgs) -> CliResult<ExitCode> {
    let format: Format = args.format.parse()?;
    let export = if let Some(pq) = &args.dl {
        let (p, q) = (pq[0], pq[1]);
        let g = DlGraph::new(p, q)?;
        let center = match &args.center {
            None => DlVertex::origin(),
            Some(s) => {
                let v: DlVertex = s.parse().map_err(|e: horo_core::Error| CliError::parse(s, e.to_string()))?;
                g.check(&v).map_err(|e| CliError::parse(s, e.to_string()))?;
                v
            }
        };
        let ball = g.bfs_ball(&center, args.radius)?;
        ExportGraph::from_ball(GraphParams::Dl { p, q }, &ball, DlVertex::level)
    } else {
        let p = args.grandmother.expect("clap enforces one graph");
        let tree = Tree::new(p)?;
        if args.radius > GRANDMOTHER_RADIUS_CAP {
            return Err(horo_core::Error::RadiusTooLarge {
                radius: args.radius,
                cap: GRANDMOTHER_RADIUS_CAP,
            }
            .into());
        }
        let center = match &args.center {
            None => TreeVertex::origin(),
            Some(s) => {
                let v: TreeVertex = s.parse().map_err(|e: horo_core::Error| CliError::parse(s, e.to_string()))?;
                tree.check(&v).map_err(|e| CliError::parse(s, e.to_string()))?;
                v
            }
        };
        let ball = tree.grandmother_ball(&center, args.radius);
        ExportGraph::from_ball(GraphParams::Grandmother { p }, &ball, TreeVertex::level)
    };
    emit(&export.render(format)?, args.output.as_ref())?;
    Ok(ExitCode::SUCCESS)
}

fn dist(space: DistSpace) -> CliResult<ExitCode> {
    let (report, exact, json) = match space {
        DistSpace::Tree { p, from, to, json } => (dist::tree(p, &from, &to)?, true, json),
        DistSpace::Dl { p, q, from, to, json } => (dist::dl(p, q, &from, &to)?, true, json),
        DistSpace::Ht { p, q, from, to, json } => (dist::ht(p, q, &from, &to)?, false, json),
        DistSpace::Sol { p, q, from, to, json } => (dist::sol(p, q, &from, &to)?, false, json),
    };
    let text = if json {
        serde_json::to_string_pretty(&report)? + "\n"
    } else {
        report.to_text(exact)
    };
    emit(&text, None)?;
    Ok(ExitCode::SUCCESS)
}

fn verify_cmd(suite: &str) -> CliResult<ExitCode> {
    let reports = verify::run(suite)?;
    let pass = reports.iter().all(|r| r.pass);
    for r in &reports {
        eprintln!("{} {}", if r.pass { "PASS" } else { "FAIL" }, r.name);
        for c in &r.checks {
            eprintln!("  [{}] {}: {}", if c.pass { "ok" } else { "FAIL" }, c.name, c.detail);
        }
    }
    let summary = VerifySummary {
        schema: VERIFY_SCHEMA,
        suite,
        pass,
        suites: &reports,
    };
    emit(&(serde_json::to_string_pretty(&summary)? + "\n"), None)?;
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn walk(args: WalkArgs) -> CliResult<ExitCode> {
    let seed = args.seed.ok_or(CliError::MissingSeed)?;
    let stats = if let Some(pq) = &args.dl {
        let cfg = WalkConfig::new(WalkSpace::Dl { p: pq[0], q: pq[1] }, args.steps, args.trials, seed)?;
        srw_run(&cfg)?
    } else {
        let p = args.lamplighter.expect("clap enforces one space");
        let cfg = WalkConfig::new(WalkSpace::Lamplighter { p }, args.steps, args.trials, seed)?;
        lamplighter_walk(&cfg)?
    };
    let out = WalkOutput {
        schema: WALK_SCHEMA,
        stats: &stats,
    };
    emit(&(serde_json::to_string_pretty(&out)? + "\n"), None)?;
    Ok(ExitCode::SUCCESS)
}
