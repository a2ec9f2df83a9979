//! Ball exports in DOT and JSON.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::hash::Hash;
use std::str::FromStr;

use horo_core::Ball;
use serde::Serialize;

use crate::error::CliError;

pub const EXPORT_SCHEMA: &str = "horo.export-graph/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Dot,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "dot" => Ok(Format::Dot),
            "json" => Ok(Format::Json),
            other => Err(CliError::BadFormat(other.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphParams {
    Dl { p: u32, q: u32 },
    Grandmother { p: u32 },
}

impl GraphParams {
    fn dot_name(&self) -> String {
        match self {
            GraphParams::Dl { p, q } => format!("dl_{p}_{q}"),
            GraphParams::Grandmother { p } => format!("grandmother_{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metadata {
    pub graph: GraphParams,
    pub center: String,
    pub radius: u32,
    pub generator: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VertexRecord {
    pub id: usize,
    pub coords: String,
    pub level: i64,
    pub dist: u32,
}

/// A ball ready for export. Vertex ids follow the canonical vertex order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExportGraph {
    pub schema: &'static str,
    pub metadata: Metadata,
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<[usize; 2]>,
}

impl ExportGraph {
    pub fn from_ball<V, L>(graph: GraphParams, ball: &Ball<V>, level: L) -> Self
    where
        V: Clone + Eq + Hash + Ord + std::fmt::Display,
        L: Fn(&V) -> i64,
    {
        let vertices = ball
            .vertices
            .iter()
            .zip(&ball.dist)
            .enumerate()
            .map(|(id, (v, &dist))| VertexRecord {
                id,
                coords: v.to_string(),
                level: level(v),
                dist,
            })
            .collect();
        Self {
            schema: EXPORT_SCHEMA,
            metadata: Metadata {
                graph,
                center: ball.center.to_string(),
                radius: ball.radius,
                generator: format!("horo {}", env!("CARGO_PKG_VERSION")),
            },
            vertices,
            edges: ball.edges.iter().map(|&(i, j)| [i, j]).collect(),
        }
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(self)? + "\n"),
            Format::Dot => Ok(self.to_dot()),
        }
    }

    /// Undirected DOT graph; vertices of one level share a rank.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let m = &self.metadata;
        let _ = writeln!(out, "graph {} {{", m.graph.dot_name());
        let _ = writeln!(
            out,
            "  graph [schema=\"{}\", center=\"{}\", radius={}, generator=\"{}\"];",
            self.schema, m.center, m.radius, m.generator
        );
        let _ = writeln!(out, "  rankdir=BT;");
        let mut by_level: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for v in &self.vertices {
            by_level.entry(v.level).or_default().push(v.id);
        }
        for v in &self.vertices {
            let _ = writeln!(
                out,
                "  v{} [label=\"{}\", level={}, dist={}];",
                v.id, v.coords, v.level, v.dist
            );
        }
        for ids in by_level.values() {
            let names: Vec<String> = ids.iter().map(|i| format!("v{i}")).collect();
            let _ = writeln!(out, "  {{ rank=same; {}; }}", names.join("; "));
        }
        for [i, j] in &self.edges {
            let _ = writeln!(out, "  v{i} -- v{j};");
        }
        out.push_str("}\n");
        out
    }
}
