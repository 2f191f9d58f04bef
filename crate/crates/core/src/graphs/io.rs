//! Plain-text graph files.
//!
//! ```text
//! n m
//! u v      (m lines, 0-based, whitespace separated)
//! ```
//!
//! On write, each edge is emitted as `u v` with `u < v` and the lines are
//! sorted lexicographically.

use std::fmt::Write as _;
use std::path::Path;

use super::{build_graph, FiniteGraph, GraphError};

pub fn format_graph(g: &FiniteGraph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").expect("writing to a String");
    }
    out
}

pub fn parse_graph(text: &str) -> Result<FiniteGraph, GraphError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(GraphError::Parse { line: 1, msg: "missing `n m` header".into() })?;
    let (n, m) = parse_pair(hline, header)?;
    let mut edges = Vec::with_capacity(m);
    for (line, l) in lines {
        edges.push(parse_pair(line, l)?);
    }
    if edges.len() != m {
        return Err(GraphError::Parse {
            line: hline,
            msg: format!("header announces {m} edges, found {}", edges.len()),
        });
    }
    build_graph(n, &edges)
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize), GraphError> {
    let err = |msg: String| GraphError::Parse { line, msg };
    let mut it = text.split_whitespace();
    let mut next = || -> Result<usize, GraphError> {
        let tok = it.next().ok_or_else(|| err("expected two integers".into()))?;
        tok.parse().map_err(|_| err(format!("`{tok}` is not a vertex index")))
    };
    let pair = (next()?, next()?);
    if it.next().is_some() {
        return Err(err("trailing tokens".into()));
    }
    Ok(pair)
}

pub fn read_graph(path: &Path) -> Result<FiniteGraph, GraphError> {
    let text = std::fs::read_to_string(path).map_err(|e| GraphError::Io(format!("{}: {e}", path.display())))?;
    parse_graph(&text)
}

pub fn write_graph(g: &FiniteGraph, path: &Path) -> Result<(), GraphError> {
    std::fs::write(path, format_graph(g)).map_err(|e| GraphError::Io(format!("{}: {e}", path.display())))
}
