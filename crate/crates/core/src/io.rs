//! Text formats: graph files, move traces, DOT export.
//!
//! A graph file is a TOML document:
//!
//! ```text
//! # free-form provenance comments
//! vertices = [
//!   { id = "a", weight = -2 },
//!   { id = "b", weight = 0 },
//! ]
//! edges = [
//!   ["a", "b"],
//! ]
//! ```
//!
//! Ids are nonempty and drawn from `[A-Za-z0-9_.:-]`. A trace file is a graph
//! file, a line holding exactly `---`, then one move per line.

use std::fmt::Write as _;

use serde::Deserialize;
use toml::Spanned;

use crate::calculus::{Move, MoveTrace};
use crate::error::{Error, Result};
use crate::graph::{PlumbingGraph, VertexId};

/// Separates the start graph from the move list in a trace file.
pub const TRACE_SEPARATOR: &str = "---";

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    vertices: Vec<Spanned<VertexEntry>>,
    #[serde(default)]
    edges: Vec<Spanned<[Spanned<String>; 2]>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexEntry {
    id: Spanned<String>,
    weight: i64,
}

fn line_of(src: &str, offset: usize) -> usize {
    src[..offset.min(src.len())]
        .bytes()
        .filter(|&b| b == b'\n')
        .count()
        + 1
}

pub fn valid_id(id: &str) -> bool {
    !id.is_empty()
        && id
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | ':' | '-'))
}

/// Parses a graph file, rejecting exactly the documents that do not describe
/// a simple forest with unique, well-formed ids.
pub fn parse_graph(src: &str) -> Result<PlumbingGraph> {
    let doc: GraphDoc = toml::from_str(src).map_err(|e| {
        let line = e
            .span()
            .map(|s| format!("line {}: ", line_of(src, s.start)))
            .unwrap_or_default();
        Error::Parse(format!("{line}{}", e.message()))
    })?;
    let mut g = PlumbingGraph::new();
    for (i, entry) in doc.vertices.iter().enumerate() {
        let v = entry.get_ref();
        let line = line_of(src, v.id.span().start);
        if !valid_id(v.id.get_ref()) {
            return Err(Error::Parse(format!(
                "line {line}: vertices[{i}].id: invalid id {:?}",
                v.id.get_ref()
            )));
        }
        g.add_vertex(VertexId::new(v.id.get_ref().clone()), v.weight)
            .map_err(|e| Error::Parse(format!("line {line}: vertices[{i}].id: {}", inner(e))))?;
    }
    for (i, edge) in doc.edges.iter().enumerate() {
        let [u, v] = edge.get_ref();
        let line = line_of(src, edge.span().start);
        g.add_edge(
            &VertexId::new(u.get_ref().clone()),
            &VertexId::new(v.get_ref().clone()),
        )
        .map_err(|e| Error::Parse(format!("line {line}: edges[{i}]: {}", inner(e))))?;
    }
    Ok(g)
}

fn inner(e: Error) -> String {
    match e {
        Error::Domain(m) | Error::Parse(m) | Error::Move(m) => m,
        other => other.to_string(),
    }
}

/// Serializes a graph: vertices in id order, edges in lexicographic order.
pub fn write_graph(g: &PlumbingGraph) -> String {
    write_graph_with_header(g, &[])
}

/// As [`write_graph`], with `# `-prefixed comment lines first.
pub fn write_graph_with_header(g: &PlumbingGraph, header: &[&str]) -> String {
    let mut out = String::new();
    for line in header {
        let _ = writeln!(out, "# {line}");
    }
    if g.is_empty() {
        out.push_str("vertices = []\n");
    } else {
        out.push_str("vertices = [\n");
        for (id, w) in g.vertices() {
            let _ = writeln!(out, "  {{ id = \"{id}\", weight = {w} }},");
        }
        out.push_str("]\n");
    }
    if g.edge_count() == 0 {
        out.push_str("edges = []\n");
    } else {
        out.push_str("edges = [\n");
        for (u, v) in g.edges() {
            let _ = writeln!(out, "  [\"{u}\", \"{v}\"],");
        }
        out.push_str("]\n");
    }
    out
}

/// One trace line per move.
pub fn write_move(m: &Move) -> String {
    match m {
        Move::BlowDown { vertex, .. } => format!("blowdown {vertex}"),
        Move::DeleteUnitVertex { vertex, .. } => format!("delete {vertex}"),
        Move::CancelZeroPair { zero, partner, .. } => format!("cancel {zero} {partner}"),
        Move::BlowUpLeaf { anchor, new, sign } => {
            format!("blowup-leaf {anchor} {new} {}", sign_str(*sign))
        }
        Move::BlowUpEdge {
            left,
            right,
            new,
            sign,
        } => {
            format!("blowup-edge {left} {right} {new} {}", sign_str(*sign))
        }
    }
}

fn sign_str(sign: i64) -> &'static str {
    if sign > 0 {
        "+1"
    } else {
        "-1"
    }
}

/// Serializes a trace: start graph, separator, moves.
pub fn write_trace(trace: &MoveTrace) -> String {
    let mut out = write_graph(&trace.start);
    out.push_str(TRACE_SEPARATOR);
    out.push('\n');
    for m in &trace.moves {
        out.push_str(&write_move(m));
        out.push('\n');
    }
    out
}

/// A parsed but not yet replayed trace file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceFile {
    pub start: PlumbingGraph,
    pub moves: Vec<MoveSpec>,
}

/// A move as written in a trace file, before its preconditions are checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MoveSpec {
    BlowDown(VertexId),
    Delete(VertexId),
    Cancel(VertexId, VertexId),
    BlowUpLeaf(VertexId, VertexId, i64),
    BlowUpEdge(VertexId, VertexId, VertexId, i64),
}

pub fn parse_trace(src: &str) -> Result<TraceFile> {
    let lines: Vec<&str> = src.lines().collect();
    let sep = lines
        .iter()
        .position(|l| l.trim_end() == TRACE_SEPARATOR)
        .ok_or_else(|| Error::Parse(format!("trace has no `{TRACE_SEPARATOR}` separator line")))?;
    let start = parse_graph(&lines[..sep].join("\n"))?;
    let mut moves = Vec::new();
    for (k, raw) in lines[sep + 1..].iter().enumerate() {
        let line_no = sep + 2 + k;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let bad = || Error::Parse(format!("line {line_no}: malformed move `{line}`"));
        let vid = |s: &str| -> Result<VertexId> {
            if valid_id(s) {
                Ok(VertexId::new(s))
            } else {
                Err(Error::Parse(format!("line {line_no}: invalid id {s:?}")))
            }
        };
        let sign = |s: &str| -> Result<i64> {
            match s {
                "+1" | "1" => Ok(1),
                "-1" => Ok(-1),
                _ => Err(Error::Parse(format!(
                    "line {line_no}: sign must be +1 or -1, got `{s}`"
                ))),
            }
        };
        let spec = match parts.as_slice() {
            ["blowdown", v] => MoveSpec::BlowDown(vid(v)?),
            ["delete", v] => MoveSpec::Delete(vid(v)?),
            ["cancel", u, v] => MoveSpec::Cancel(vid(u)?, vid(v)?),
            ["blowup-leaf", a, n, s] => MoveSpec::BlowUpLeaf(vid(a)?, vid(n)?, sign(s)?),
            ["blowup-edge", l, r, n, s] => {
                MoveSpec::BlowUpEdge(vid(l)?, vid(r)?, vid(n)?, sign(s)?)
            }
            _ => return Err(bad()),
        };
        moves.push(spec);
    }
    Ok(TraceFile { start, moves })
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Undirected DOT rendering with weights as labels, nodes and edges in id order.
pub fn to_dot(g: &PlumbingGraph) -> String {
    let mut out = String::from("graph plumbing {\n");
    for (id, w) in g.vertices() {
        let _ = writeln!(out, "  \"{}\" [label=\"{w}\"];", dot_escape(id.as_str()));
    }
    for (u, v) in g.edges() {
        let _ = writeln!(
            out,
            "  \"{}\" -- \"{}\";",
            dot_escape(u.as_str()),
            dot_escape(v.as_str())
        );
    }
    out.push_str("}\n");
    out
}
