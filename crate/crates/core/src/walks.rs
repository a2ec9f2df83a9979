//! Simple random walks on `DL(p,q)` and on the lamplighter group.
//!
//! Every trial draws from its own ChaCha stream derived from the seed and the
//! trial index, so results are reproducible regardless of how trials are
//! scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dl::{DlGraph, DlVertex};
use crate::error::{Error, Result};
use crate::wreath::{LampEl, Lamplighter};

/// 95% normal quantile used for confidence half-widths.
const Z95: f64 = 1.96;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WalkSpace {
    Dl { p: u32, q: u32 },
    Lamplighter { p: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub space: WalkSpace,
    pub steps: u64,
    pub trials: u32,
    pub seed: u64,
}

impl WalkConfig {
    pub fn new(space: WalkSpace, steps: u64, trials: u32, seed: u64) -> Result<Self> {
        let cfg = Self {
            space,
            steps,
            trials,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.steps == 0 || self.trials == 0 {
            return Err(Error::InvalidParams(
                "a walk needs at least one step and one trial".into(),
            ));
        }
        let (p, q) = self.params();
        if p < 2 || q < 2 {
            return Err(Error::InvalidParams(format!(
                "branching numbers must be at least 2 (p = {p}, q = {q})"
            )));
        }
        Ok(())
    }

    fn params(&self) -> (u32, u32) {
        match self.space {
            WalkSpace::Dl { p, q } => (p, q),
            WalkSpace::Lamplighter { p } => (p, p),
        }
    }

    /// Times at which distances are recorded: `0`, the powers of ten below
    /// `steps`, and `steps` itself.
    pub fn checkpoints(&self) -> Vec<u64> {
        let mut out = vec![0];
        let mut t = 1u64;
        while t < self.steps {
            out.push(t);
            t = t.saturating_mul(10);
        }
        out.push(self.steps);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkStats {
    pub config: WalkConfig,
    pub checkpoints: Vec<u64>,
    pub mean_distance: Vec<f64>,
    pub half_width: Vec<f64>,
    /// `mean_distance(n) / n`.
    pub speed: f64,
    pub speed_half_width: f64,
    /// Fraction of even times `2, 4, …, ≤ n` spent at the starting vertex,
    /// averaged over trials.
    pub return_frequency: f64,
}

/// One trial's record: distances at the checkpoints and the number of even
/// times spent at the start.
struct Trial {
    distances: Vec<u64>,
    returns: u64,
}

fn trial_rng(seed: u64, trial: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// A lazy-free simple random walk step on `DL(p,q)`, done in place.
fn dl_step(p: u32, q: u32, v: &mut DlVertex, rng: &mut ChaCha8Rng) {
    let r = rng.random_range(0..p + q);
    if r < p {
        v.x1.push_child(r);
        v.x2.pop_to_predecessor();
    } else {
        v.x1.pop_to_predecessor();
        v.x2.push_child(r - p);
    }
}

fn at_origin(v: &DlVertex) -> bool {
    v.x1.level() == 0 && v.x1.digits().is_empty() && v.x2.digits().is_empty()
}

fn lamp_step(p: u32, g: &mut LampEl, rng: &mut ChaCha8Rng) {
    let r = rng.random_range(0..2 * p);
    if r < p {
        g.push_generator(1, r, 1);
    } else {
        g.push_generator(0, r - p, -1);
    }
}

/// The vertices visited by one trial of the walk on `DL(p,q)`.
pub fn dl_trajectory(p: u32, q: u32, steps: u64, seed: u64, trial: u32) -> Vec<DlVertex> {
    let mut rng = trial_rng(seed, trial);
    let mut v = DlVertex::origin();
    let mut out = vec![v.clone()];
    for _ in 0..steps {
        dl_step(p, q, &mut v, &mut rng);
        out.push(v.clone());
    }
    out
}

/// The group elements visited by one trial of the lamplighter walk.
pub fn lamplighter_trajectory(p: u32, steps: u64, seed: u64, trial: u32) -> Vec<LampEl> {
    let mut rng = trial_rng(seed, trial);
    let mut g = LampEl::identity(p);
    let mut out = vec![g.clone()];
    for _ in 0..steps {
        lamp_step(p, &mut g, &mut rng);
        out.push(g.clone());
    }
    out
}

fn run_trials<F>(cfg: &WalkConfig, trial: F) -> WalkStats
where
    F: Fn(u32, &[u64]) -> Trial + Sync,
{
    let checkpoints = cfg.checkpoints();
    let results: Vec<Trial> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| trial(i, &checkpoints))
        .collect();
    summarize(cfg, checkpoints, &results)
}

fn summarize(cfg: &WalkConfig, checkpoints: Vec<u64>, results: &[Trial]) -> WalkStats {
    let t = results.len() as f64;
    let mut mean_distance = Vec::with_capacity(checkpoints.len());
    let mut half_width = Vec::with_capacity(checkpoints.len());
    for j in 0..checkpoints.len() {
        let mean = results.iter().map(|r| r.distances[j] as f64).sum::<f64>() / t;
        let var = if results.len() > 1 {
            results
                .iter()
                .map(|r| (r.distances[j] as f64 - mean).powi(2))
                .sum::<f64>()
                / (t - 1.0)
        } else {
            0.0
        };
        mean_distance.push(mean);
        half_width.push(Z95 * var.sqrt() / t.sqrt());
    }
    let n = cfg.steps as f64;
    let even_times = (cfg.steps / 2).max(1) as f64;
    let return_frequency = if cfg.steps >= 2 {
        results.iter().map(|r| r.returns as f64 / even_times).sum::<f64>() / t
    } else {
        0.0
    };
    WalkStats {
        config: *cfg,
        speed: mean_distance.last().copied().unwrap_or(0.0) / n,
        speed_half_width: half_width.last().copied().unwrap_or(0.0) / n,
        checkpoints,
        mean_distance,
        half_width,
        return_frequency,
    }
}

/// Simple random walk on `DL(p,q)` from the origin; a lamplighter space
/// `p` is walked as `DL(p,p)`.
pub fn srw_run(cfg: &WalkConfig) -> Result<WalkStats> {
    cfg.validate()?;
    let (p, q) = cfg.params();
    let graph = DlGraph::new(p, q)?;
    let origin = DlVertex::origin();
    Ok(run_trials(cfg, |i, checkpoints| {
        let mut rng = trial_rng(cfg.seed, i);
        let mut v = origin.clone();
        let mut distances = vec![0];
        let mut next = 1;
        let mut returns = 0;
        for step in 1..=cfg.steps {
            dl_step(p, q, &mut v, &mut rng);
            if step % 2 == 0 && at_origin(&v) {
                returns += 1;
            }
            if next < checkpoints.len() && checkpoints[next] == step {
                distances.push(graph.formula_dist(&origin, &v));
                next += 1;
            }
        }
        Trial { distances, returns }
    }))
}

/// Walk on `Z_p wr Z` driven by its standard generators; distances are read
/// through the encoding into `DL(p,p)`.
pub fn lamplighter_walk(cfg: &WalkConfig) -> Result<WalkStats> {
    cfg.validate()?;
    let (p, q) = cfg.params();
    if p != q {
        return Err(Error::ParamsNotSquare { p, q });
    }
    Lamplighter::new(p)?;
    let graph = DlGraph::new(p, p)?;
    let origin = DlVertex::origin();
    Ok(run_trials(cfg, |i, checkpoints| {
        let mut rng = trial_rng(cfg.seed, i);
        let mut g = LampEl::identity(p);
        let mut distances = vec![0];
        let mut next = 1;
        let mut returns = 0;
        for step in 1..=cfg.steps {
            lamp_step(p, &mut g, &mut rng);
            if step % 2 == 0 && g.is_identity() {
                returns += 1;
            }
            if next < checkpoints.len() && checkpoints[next] == step {
                let v = DlVertex::from_lamplighter(&g);
                distances.push(graph.formula_dist(&origin, &v));
                next += 1;
            }
        }
        Trial { distances, returns }
    }))
}
