//! Plain-text graph files.
//!
//! ```text
//! # comments run to end of line
//! n m
//! start treasure
//! u port_at_u v port_at_v     (m lines)
//! ```

use std::fmt::Write as _;

use super::{Edge, GraphError, PortGraph};

fn syntax(line: usize, message: impl Into<String>) -> GraphError {
    GraphError::Syntax {
        line,
        message: message.into(),
    }
}

fn numbers<const N: usize>(line: usize, text: &str, what: &str) -> Result<[usize; N], GraphError> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.len() != N {
        return Err(syntax(
            line,
            format!("expected {N} fields for {what}, found {}", tokens.len()),
        ));
    }
    let mut out = [0; N];
    for (slot, tok) in out.iter_mut().zip(&tokens) {
        *slot = tok
            .parse()
            .map_err(|_| syntax(line, format!("bad number {tok:?} in {what}")))?;
    }
    Ok(out)
}

pub fn parse_graph(text: &str) -> Result<PortGraph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (ln, header) = lines.next().ok_or_else(|| syntax(1, "missing header `n m`"))?;
    let [n, m] = numbers::<2>(ln, header, "header")?;
    let (ln, meta) = lines
        .next()
        .ok_or_else(|| syntax(ln + 1, "missing `start treasure` line"))?;
    let [start, treasure] = numbers::<2>(ln, meta, "start/treasure")?;

    let mut edges = Vec::with_capacity(m);
    let mut last = ln;
    for _ in 0..m {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| syntax(last + 1, format!("expected {m} edges, found {}", edges.len())))?;
        let [u, pu, v, pv] = numbers::<4>(ln, l, "edge")?;
        edges.push(Edge::new(u, pu, v, pv));
        last = ln;
    }
    if let Some((ln, _)) = lines.next() {
        return Err(syntax(ln, format!("trailing content after {m} edges")));
    }
    Ok(PortGraph::new(n, edges, start, treasure)?)
}

pub fn serialize_graph(g: &PortGraph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", g.node_count(), g.edges().len()).unwrap();
    writeln!(out, "{} {}", g.start(), g.treasure()).unwrap();
    for e in g.edges() {
        writeln!(out, "{} {} {} {}", e.u, e.port_u, e.v, e.port_v).unwrap();
    }
    out
}
