use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{SchreierGraph, SparseSym};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Json,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dot" => Ok(ExportFormat::Dot),
            "json" => Ok(ExportFormat::Json),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExportedEdge {
    pub u: usize,
    pub v: usize,
    pub k: usize,
    pub alpha: f64,
}

/// JSON form of a Schreier graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExportedGraph {
    pub n: usize,
    pub mixture: Vec<usize>,
    pub vertices: Vec<String>,
    pub signs: Vec<i8>,
    pub edges: Vec<ExportedEdge>,
}

impl ExportedGraph {
    pub fn from_graph(g: &SchreierGraph) -> Self {
        let w = g.weights();
        ExportedGraph {
            n: g.mixture().n(),
            mixture: g.mixture().parts().to_vec(),
            vertices: g.graph().labels().to_vec(),
            signs: g.space().signs().to_vec(),
            edges: g
                .edges()
                .map(|(u, v, k)| ExportedEdge {
                    u,
                    v,
                    k,
                    alpha: w.alpha(k),
                })
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            context: format!("graph json {}:{}", e.line(), e.column()),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph export is always serializable")
    }

    /// Rebuilds the Laplacian from the edge list.
    pub fn laplacian(&self) -> Result<SparseSym> {
        let n = self.vertices.len();
        if let Some(e) = self.edges.iter().find(|e| e.u >= n || e.v >= n || e.u == e.v) {
            return Err(Error::OutOfRange(format!("edge ({}, {}) on {n} vertices", e.u, e.v)));
        }
        Ok(SparseSym::laplacian(n, self.edges.iter().map(|e| (e.u, e.v, e.alpha))))
    }
}

/// DOT text: one node per line in vertex order, then one edge per line in
/// edge order, edges labelled by their generator and weight.
pub fn to_dot(g: &SchreierGraph) -> String {
    let mut out = String::new();
    let name: Vec<String> = g.mixture().parts().iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "graph schreier_{} {{", name.join("_"));
    for (i, label) in g.graph().labels().iter().enumerate() {
        let sign = if g.space().sign(i) > 0 { "+" } else { "-" };
        let _ = writeln!(out, "  {i} [label=\"{label}\", sign=\"{sign}\"];");
    }
    let w = g.weights();
    for (u, v, k) in g.edges() {
        let _ = writeln!(out, "  {u} -- {v} [label=\"α{k}\", alpha={}];", w.alpha(k));
    }
    out.push_str("}\n");
    out
}

pub fn export_graph(g: &SchreierGraph, format: ExportFormat) -> Vec<u8> {
    match format {
        ExportFormat::Dot => to_dot(g).into_bytes(),
        ExportFormat::Json => {
            let mut s = ExportedGraph::from_graph(g).to_json();
            s.push('\n');
            s.into_bytes()
        }
    }
}
