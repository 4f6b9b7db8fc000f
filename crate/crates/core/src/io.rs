//! Text formats.
//!
//! Graphs: `c` comment lines, a header `p ifvs <n> <m>`, then one `e <u> <v>` line per edge
//! occurrence. Disjoint instances use the header `p disifvs <n> <m>` and add `W <v>`, `R <v>`
//! and `k <int>` lines. Ids are 1-indexed in files and 0-indexed in memory.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graph::{MultiGraph, Vertex, VertexSet};
use crate::instance::DisInstance;
use crate::pipeline::{IfvsResult, PipelineStats, Status};

#[derive(Clone, Debug)]
pub enum Input {
    Graph(MultiGraph),
    Disjoint(DisInstance),
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

struct Header {
    line: usize,
    disjoint: bool,
    n: usize,
    m: usize,
}

fn parse_id(tok: Option<&str>, n: usize, line: usize) -> Result<Vertex> {
    let tok = tok.ok_or_else(|| err(line, "missing vertex id"))?;
    let id: usize = tok.parse().map_err(|_| err(line, format!("bad vertex id {tok:?}")))?;
    if id == 0 || id > n {
        return Err(err(line, format!("vertex id {id} outside 1..={n}")));
    }
    Ok(id - 1)
}

/// Parse either format.
pub fn parse_input(text: &str) -> Result<Input> {
    let mut header: Option<Header> = None;
    let mut g = MultiGraph::new();
    let mut edges = 0;
    let (mut w, mut r) = (VertexSet::new(), VertexSet::new());
    let mut k: Option<i64> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut toks = raw.split_whitespace();
        let Some(tag) = toks.next() else { continue };
        if tag == "c" {
            continue;
        }
        if tag == "p" {
            if header.is_some() {
                return Err(err(line, "second header"));
            }
            let disjoint = match toks.next() {
                Some("ifvs") => false,
                Some("disifvs") => true,
                other => return Err(err(line, format!("unknown problem {other:?}"))),
            };
            let mut num = |what: &str| -> Result<usize> {
                toks.next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| err(line, format!("header needs {what}")))
            };
            let n = num("a vertex count")?;
            let m = num("an edge count")?;
            g = MultiGraph::with_vertices(n);
            header = Some(Header { line, disjoint, n, m });
            continue;
        }
        let Some(h) = &header else {
            return Err(err(line, "line before the header"));
        };
        match tag {
            "e" => {
                let u = parse_id(toks.next(), h.n, line)?;
                let v = parse_id(toks.next(), h.n, line)?;
                g.add_edge(u, v)?;
                edges += 1;
            }
            "W" | "R" if h.disjoint => {
                let v = parse_id(toks.next(), h.n, line)?;
                let (mine, other) = if tag == "W" { (&mut w, &r) } else { (&mut r, &w) };
                if other.contains(&v) {
                    return Err(err(line, format!("vertex {} is in both W and R", v + 1)));
                }
                mine.insert(v);
            }
            "k" if h.disjoint => {
                let t = toks.next().ok_or_else(|| err(line, "missing budget"))?;
                k = Some(t.parse().map_err(|_| err(line, format!("bad budget {t:?}")))?);
            }
            other => return Err(err(line, format!("unexpected line type {other:?}"))),
        }
        if toks.next().is_some() {
            return Err(err(line, "trailing tokens"));
        }
    }
    let h = header.ok_or_else(|| err(0, "missing header"))?;
    if edges != h.m {
        return Err(err(h.line, format!("header announces {} edges, found {edges}", h.m)));
    }
    if !h.disjoint {
        return Ok(Input::Graph(g));
    }
    let k = k.ok_or_else(|| err(h.line, "missing budget line"))?;
    let inst = DisInstance::new(g, w, r, k).map_err(|e| err(h.line, e.to_string()))?;
    Ok(Input::Disjoint(inst))
}

pub fn parse_graph(text: &str) -> Result<MultiGraph> {
    match parse_input(text)? {
        Input::Graph(g) => Ok(g),
        Input::Disjoint(_) => Err(err(0, "expected a `p ifvs` graph")),
    }
}

pub fn parse_disjoint(text: &str) -> Result<DisInstance> {
    match parse_input(text)? {
        Input::Disjoint(i) => Ok(i),
        Input::Graph(_) => Err(err(0, "expected a `p disifvs` instance")),
    }
}

/// Value of the first `c k <int>` comment, used by benchmark suites to store the budget.
pub fn declared_k(text: &str) -> Option<i64> {
    text.lines().find_map(|l| {
        let mut t = l.split_whitespace();
        (t.next() == Some("c") && t.next() == Some("k")).then(|| t.next()?.parse().ok())?
    })
}

/// File ids of the live vertices: the i-th live vertex becomes `i + 1`.
fn file_ids(g: &MultiGraph) -> BTreeMap<Vertex, usize> {
    g.vertices().enumerate().map(|(i, v)| (v, i + 1)).collect()
}

fn write_edges(out: &mut String, g: &MultiGraph, ids: &BTreeMap<Vertex, usize>) {
    for (u, v, m) in g.edges() {
        for _ in 0..m {
            writeln!(out, "e {} {}", ids[&u], ids[&v]).unwrap();
        }
    }
}

/// Emit a graph. Live vertices are renumbered densely, preserving order.
pub fn emit_graph(g: &MultiGraph, comments: &[String]) -> String {
    let ids = file_ids(g);
    let mut out = String::new();
    for c in comments {
        writeln!(out, "c {c}").unwrap();
    }
    writeln!(out, "p ifvs {} {}", g.vertex_count(), g.edge_count()).unwrap();
    write_edges(&mut out, g, &ids);
    out
}

pub fn emit_disjoint(inst: &DisInstance, comments: &[String]) -> String {
    let g = inst.graph();
    let ids = file_ids(g);
    let mut out = String::new();
    for c in comments {
        writeln!(out, "c {c}").unwrap();
    }
    writeln!(out, "p disifvs {} {}", g.vertex_count(), g.edge_count()).unwrap();
    write_edges(&mut out, g, &ids);
    for v in inst.w() {
        writeln!(out, "W {}", ids[v]).unwrap();
    }
    for v in inst.r() {
        writeln!(out, "R {}", ids[v]).unwrap();
    }
    writeln!(out, "k {}", inst.k()).unwrap();
    out
}

/// A vertex set file: `v <id>` lines, bare ids, a JSON array, or a JSON result object.
/// `c` and `s` lines are skipped, so the text output of `solve` reads back.
pub fn parse_solution(text: &str, n: usize) -> Result<VertexSet> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') || trimmed.starts_with('{') {
        let value: Value = serde_json::from_str(trimmed).map_err(|e| err(e.line(), e.to_string()))?;
        let list = match &value {
            Value::Array(a) => a,
            Value::Object(o) => o
                .get("solution")
                .and_then(Value::as_array)
                .ok_or_else(|| err(1, "JSON object without a solution array"))?,
            _ => unreachable!(),
        };
        return list
            .iter()
            .map(|x| {
                let id = x.as_u64().ok_or_else(|| err(1, format!("bad vertex id {x}")))?;
                parse_id(Some(&id.to_string()), n, 1)
            })
            .collect();
    }
    let mut out = VertexSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut toks = raw.split_whitespace().peekable();
        match toks.peek() {
            None | Some(&"c") | Some(&"s") => continue,
            Some(&"v") => {
                toks.next();
            }
            _ => {}
        }
        for t in toks {
            out.insert(parse_id(Some(t), n, line)?);
        }
    }
    Ok(out)
}

/// Result document with a fixed key order.
#[derive(Serialize)]
pub struct ResultJson {
    pub status: Status,
    pub solution: Vec<usize>,
    pub size: usize,
    pub stats: PipelineStats,
}

impl ResultJson {
    /// `g` is the solved graph; solution ids are translated to file ids.
    pub fn new(g: &MultiGraph, r: &IfvsResult) -> Self {
        let ids = file_ids(g);
        let solution: Vec<usize> = r.solution.iter().flatten().map(|v| ids[v]).collect();
        Self { status: r.status, size: solution.len(), solution, stats: r.stats }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }
}

/// A search tree as JSON with pivots translated to file ids.
pub fn trace_json<T: Serialize>(g: &MultiGraph, trace: &T) -> Value {
    fn walk(v: &mut Value, ids: &BTreeMap<Vertex, usize>) {
        match v {
            Value::Object(map) => {
                for (key, child) in map.iter_mut() {
                    match (key.as_str(), child.as_u64()) {
                        ("pivot", Some(p)) => *child = Value::from(ids[&(p as usize)]),
                        _ => walk(child, ids),
                    }
                }
            }
            Value::Array(items) => items.iter_mut().for_each(|x| walk(x, ids)),
            _ => {}
        }
    }
    let ids = file_ids(g);
    let mut value = serde_json::to_value(trace).expect("plain data");
    walk(&mut value, &ids);
    value
}
