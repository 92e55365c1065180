//! Plain-text graph format.
//!
//! First line `p <N>`, then one edge per line: `i -> j` for a directed edge or
//! `i -- j` for an undirected one. Blank lines and `#` comments are ignored.

use crate::error::{Error, Result};
use crate::graph::{Dag, NodeId, Pdag};
use std::fmt::Write as _;

pub fn format_dag(d: &Dag) -> String {
    let mut s = format!("p {}\n", d.p());
    for (i, j) in d.edges() {
        writeln!(s, "{i} -> {j}").unwrap();
    }
    s
}

pub fn format_pdag(g: &Pdag) -> String {
    let mut s = format!("p {}\n", g.p());
    for (i, j) in g.directed_edges() {
        writeln!(s, "{i} -> {j}").unwrap();
    }
    for (i, j) in g.undirected_edges() {
        writeln!(s, "{i} -- {j}").unwrap();
    }
    s
}

type EdgeList = Vec<(NodeId, NodeId)>;

fn parse_lines(text: &str) -> Result<(u32, EdgeList, EdgeList)> {
    let mut p: Option<u32> = None;
    let mut directed = Vec::new();
    let mut undirected = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| Error::Parse(format!("line {}: {}", lineno + 1, msg));
        if p.is_none() {
            let rest = line
                .strip_prefix("p ")
                .or_else(|| line.strip_prefix("p\t"))
                .ok_or_else(|| err("expected header `p <N>`"))?;
            p = Some(
                rest.trim()
                    .parse::<u32>()
                    .map_err(|_| err("invalid node count"))?,
            );
            continue;
        }
        let (sep, bucket) = if line.contains("->") {
            ("->", &mut directed)
        } else if line.contains("--") {
            ("--", &mut undirected)
        } else {
            return Err(err("expected `i -> j` or `i -- j`"));
        };
        let mut parts = line.splitn(2, sep);
        let a = parts
            .next()
            .and_then(|s| s.trim().parse::<u32>().ok())
            .ok_or_else(|| err("invalid source node"))?;
        let b = parts
            .next()
            .and_then(|s| s.trim().parse::<u32>().ok())
            .ok_or_else(|| err("invalid target node"))?;
        bucket.push((a, b));
    }
    let p = p.ok_or_else(|| Error::Parse("missing header `p <N>`".into()))?;
    Ok((p, directed, undirected))
}

pub fn parse_dag(text: &str) -> Result<Dag> {
    let (p, directed, undirected) = parse_lines(text)?;
    if !undirected.is_empty() {
        return Err(Error::Parse(
            "undirected edges are not allowed in a DAG file".into(),
        ));
    }
    Dag::new(p, &directed)
}

pub fn parse_pdag(text: &str) -> Result<Pdag> {
    let (p, directed, undirected) = parse_lines(text)?;
    Pdag::new(p, &directed, &undirected)
}
