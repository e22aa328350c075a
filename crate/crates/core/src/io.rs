//! Plain-text edge lists and DOT export.
//!
//! An edge list has one `u v` pair of decimal ids per line. `#` starts a
//! comment, blank lines are skipped, and an optional `vertices: ...` line
//! declares vertices, which is the only way to have isolated ones.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Digraph, VertexId};

pub fn parse_edge_list(text: &str) -> Result<Digraph> {
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for (number, raw) in text.lines().enumerate() {
        let line = number + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("vertices:") {
            for token in rest.split_whitespace() {
                vertices.push(parse_id(token, line)?);
            }
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let [u, v] = tokens[..] else {
            return Err(Error::Parse { line, message: format!("expected `u v`, found {content:?}") });
        };
        edges.push((parse_id(u, line)?, parse_id(v, line)?));
    }
    vertices.extend(edges.iter().flat_map(|&(u, v)| [u, v]));
    Digraph::new(vertices, edges)
}

fn parse_id(token: &str, line: usize) -> Result<VertexId> {
    token
        .parse::<u32>()
        .map(VertexId)
        .map_err(|e| Error::Parse { line, message: format!("bad vertex id {token:?}: {e}") })
}

/// Edge list with the full vertex set declared, edges in sorted order.
/// `header` lines are written first as `#` comments.
pub fn write_edge_list(d: &Digraph, header: &[String]) -> String {
    let mut out = String::new();
    for h in header {
        writeln!(out, "# {h}").unwrap();
    }
    out.push_str("vertices:");
    for v in d.vertices() {
        write!(out, " {v}").unwrap();
    }
    out.push('\n');
    for (u, v) in d.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn to_dot(d: &Digraph, name: &str) -> String {
    let mut out = format!("digraph {name} {{\n");
    for v in d.vertices() {
        writeln!(out, "  {v};").unwrap();
    }
    for (u, v) in d.edges() {
        writeln!(out, "  {u} -> {v};").unwrap();
    }
    out.push_str("}\n");
    out
}
