//! Breadth-first enumeration of balls in implicitly defined, locally finite graphs.
//!
//! This is the exact oracle against which every closed-form graph distance in
//! the crate is checked.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

/// A finite ball: vertices in canonical (`Ord`) order, their distances from
/// the center, and every edge of the graph with both endpoints in the ball.
#[derive(Debug, Clone)]
pub struct Ball<V> {
    pub center: V,
    pub radius: u32,
    pub vertices: Vec<V>,
    pub dist: Vec<u32>,
    /// Pairs `(i, j)` with `i < j`, sorted, no duplicates.
    pub edges: Vec<(usize, usize)>,
    index: HashMap<V, usize>,
}

impl<V: Clone + Eq + Hash + Ord> Ball<V> {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, v: &V) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn contains(&self, v: &V) -> bool {
        self.index.contains_key(v)
    }

    pub fn distance(&self, v: &V) -> Option<u32> {
        self.index_of(v).map(|i| self.dist[i])
    }
}

/// Enumerates the ball of radius `radius` around `center`.
///
/// `neighbors` must describe a symmetric relation; the edge list is built from
/// it by looking at every ball vertex's neighbors.
pub fn bfs_ball<V, F>(center: V, radius: u32, neighbors: F) -> Ball<V>
where
    V: Clone + Eq + Hash + Ord,
    F: Fn(&V) -> Vec<V>,
{
    let mut seen: HashMap<V, u32> = HashMap::new();
    let mut queue = VecDeque::new();
    seen.insert(center.clone(), 0);
    queue.push_back(center.clone());
    while let Some(v) = queue.pop_front() {
        let d = seen[&v];
        if d == radius {
            continue;
        }
        for w in neighbors(&v) {
            if !seen.contains_key(&w) {
                seen.insert(w.clone(), d + 1);
                queue.push_back(w);
            }
        }
    }

    let mut vertices: Vec<V> = seen.keys().cloned().collect();
    vertices.sort();
    let index: HashMap<V, usize> = vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), i))
        .collect();
    let dist = vertices.iter().map(|v| seen[v]).collect();

    let mut edges = Vec::new();
    for (i, v) in vertices.iter().enumerate() {
        for w in neighbors(v) {
            if let Some(&j) = index.get(&w) {
                if i < j {
                    edges.push((i, j));
                }
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();

    Ball {
        center,
        radius,
        vertices,
        dist,
        edges,
        index,
    }
}

/// Single-source distance search that stops as soon as `target` is reached.
/// Returns `None` when the target is farther than `max_depth`.
pub fn bfs_distance<V, F>(source: &V, target: &V, max_depth: u32, neighbors: F) -> Option<u32>
where
    V: Clone + Eq + Hash,
    F: Fn(&V) -> Vec<V>,
{
    if source == target {
        return Some(0);
    }
    let mut seen: HashMap<V, u32> = HashMap::new();
    let mut queue = VecDeque::new();
    seen.insert(source.clone(), 0);
    queue.push_back(source.clone());
    while let Some(v) = queue.pop_front() {
        let d = seen[&v];
        if d == max_depth {
            continue;
        }
        for w in neighbors(&v) {
            if w == *target {
                return Some(d + 1);
            }
            if !seen.contains_key(&w) {
                seen.insert(w.clone(), d + 1);
                queue.push_back(w);
            }
        }
    }
    None
}

/// Bidirectional variant of [`bfs_distance`]: grows a search from each end,
/// always expanding the smaller frontier by one full layer, until they meet.
pub fn bfs_distance_bidir<V, F>(
    source: &V,
    target: &V,
    max_depth: u32,
    neighbors: F,
) -> Option<u32>
where
    V: Clone + Eq + Hash,
    F: Fn(&V) -> Vec<V>,
{
    if source == target {
        return Some(0);
    }
    let mut seen = [HashMap::new(), HashMap::new()];
    let mut frontier = [vec![source.clone()], vec![target.clone()]];
    let mut depth = [0u32; 2];
    seen[0].insert(source.clone(), 0u32);
    seen[1].insert(target.clone(), 0u32);
    while depth[0] + depth[1] < max_depth {
        let side = usize::from(frontier[1].len() < frontier[0].len());
        if frontier[side].is_empty() {
            return None;
        }
        let other = 1 - side;
        let next_depth = depth[side] + 1;
        let mut next = Vec::new();
        let mut best: Option<u32> = None;
        for v in std::mem::take(&mut frontier[side]) {
            for w in neighbors(&v) {
                if seen[side].contains_key(&w) {
                    continue;
                }
                if let Some(&d) = seen[other].get(&w) {
                    let total = next_depth + d;
                    best = Some(best.map_or(total, |b| b.min(total)));
                }
                seen[side].insert(w.clone(), next_depth);
                next.push(w);
            }
        }
        if let Some(d) = best {
            return (d <= max_depth).then_some(d);
        }
        frontier[side] = next;
        depth[side] = next_depth;
    }
    None
}
