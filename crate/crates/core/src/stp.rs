//! Reading and writing instances in the SteinLib STP text format, extended
//! with real weights and a `Coordinates` section of `DD` lines.
//!
//! Vertex ids are 1-based in the text and 0-based in memory. Output is
//! deterministic: fixed section order (Comment, Graph, Terminals,
//! Coordinates), edges in canonical order, numbers with 12 significant
//! digits, LF line endings, and a final `EOF` line. The reader accepts CRLF,
//! skips sections it does not know, and completes a sparse edge list through
//! its metric closure.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{metric_closure, validate, Instance, InstanceParts, VertexId, CONSISTENCY_TOL};

pub const MAGIC: &str = "33D32945 STP File, STP Format Version 1.0";

/// A parsed document: the instance plus its comment entries and any notes
/// about how the instance was derived from the text.
#[derive(Debug, Clone, PartialEq)]
pub struct StpDocument {
    pub instance: Instance,
    /// `key value` pairs of the Comment section, quotes removed.
    pub comment: Vec<(String, String)>,
    pub notes: Vec<String>,
}

pub fn parse_stp(text: &str) -> Result<Instance> {
    parse_stp_document(text).map(|d| d.instance)
}

/// Formats a number with 12 significant digits, dropping trailing zeros.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-5..12).contains(&exp) {
        let m = trim_zeros(mantissa);
        return format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    let decimals = (11 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_stp(instance: &Instance) -> String {
    write_stp_with_comment(instance, &[])
}

/// Writes the instance with the given `key value` entries in a Comment
/// section (omitted when empty).
pub fn write_stp_with_comment(instance: &Instance, comment: &[(&str, String)]) -> String {
    let mut out = String::new();
    out.push_str(MAGIC);
    out.push_str("\n\n");
    if !comment.is_empty() {
        out.push_str("SECTION Comment\n");
        for (k, v) in comment {
            out.push_str(&format!("{k} \"{}\"\n", v.replace('"', "'")));
        }
        out.push_str("END\n\n");
    }
    let n = instance.vertex_count();
    out.push_str("SECTION Graph\n");
    out.push_str(&format!(
        "Nodes {n}\nEdges {}\n",
        n * n.saturating_sub(1) / 2
    ));
    for e in instance.edges() {
        out.push_str(&format!(
            "E {} {} {}\n",
            e.lo().0 + 1,
            e.hi().0 + 1,
            format_number(instance.edge_weight(e))
        ));
    }
    out.push_str("END\n\nSECTION Terminals\n");
    out.push_str(&format!("Terminals {}\n", instance.terminals().len()));
    for t in instance.terminals() {
        out.push_str(&format!("T {}\n", t.0 + 1));
    }
    out.push_str("END\n\n");
    if let (true, Some(coords)) = (instance.is_euclidean(), instance.coords()) {
        out.push_str("SECTION Coordinates\n");
        for (i, p) in coords.iter().enumerate() {
            let xs: Vec<String> = p.iter().map(|&x| format_number(x)).collect();
            out.push_str(&format!("DD {} {}\n", i + 1, xs.join(" ")));
        }
        out.push_str("END\n\n");
    }
    out.push_str("EOF\n");
    out
}

#[derive(Default)]
struct Graph {
    nodes: Option<usize>,
    declared_edges: Option<usize>,
    edges: BTreeMap<(usize, usize), f64>,
    edge_lines: usize,
}

struct Cursor<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn next(&mut self) -> Option<(usize, &'a str)> {
        let item = self.lines.get(self.pos).copied();
        self.pos += 1;
        item
    }
}

fn syntax(line: usize, detail: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        detail: detail.into(),
    }
}

fn parse_count(line: usize, tok: Option<&str>) -> Result<usize> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| syntax(line, "expected a non-negative integer"))
}

fn parse_index(line: usize, tok: Option<&str>, nodes: usize) -> Result<usize> {
    let raw: i64 = tok
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| syntax(line, "expected a vertex index"))?;
    if raw < 1 || raw as usize > nodes {
        return Err(Error::IndexOutOfRange {
            line,
            index: raw,
            nodes,
        });
    }
    Ok(raw as usize - 1)
}

fn parse_real(line: usize, tok: Option<&str>) -> Result<f64> {
    tok.and_then(|t| t.parse::<f64>().ok())
        .filter(|x| x.is_finite())
        .ok_or_else(|| syntax(line, "expected a finite number"))
}

pub fn parse_stp_document(text: &str) -> Result<StpDocument> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let mut cur = Cursor { lines, pos: 0 };
    match cur.next() {
        Some((_, l)) if l.to_ascii_uppercase().starts_with("33D32945") => {}
        Some((line, _)) => return Err(syntax(line, "missing STP magic header")),
        None => return Err(syntax(1, "empty document")),
    }

    let mut graph: Option<Graph> = None;
    let mut terminals: Option<Vec<usize>> = None;
    let mut coords: Option<BTreeMap<usize, Vec<f64>>> = None;
    let mut comment = Vec::new();
    let mut seen_eof = false;

    while let Some((line, l)) = cur.next() {
        let mut toks = l.split_whitespace();
        let head = toks.next().unwrap_or("").to_ascii_uppercase();
        if head == "EOF" {
            seen_eof = true;
            break;
        }
        if head != "SECTION" {
            return Err(syntax(line, format!("expected SECTION, found {l:?}")));
        }
        let name = toks.next().unwrap_or("").to_ascii_lowercase();
        match name.as_str() {
            "graph" if graph.is_none() => graph = Some(parse_graph(&mut cur)?),
            "terminals" if terminals.is_none() => {
                let nodes = graph
                    .as_ref()
                    .and_then(|g| g.nodes)
                    .ok_or_else(|| syntax(line, "Terminals section before Graph"))?;
                terminals = Some(parse_terminals(&mut cur, nodes)?);
            }
            "coordinates" if coords.is_none() => {
                let nodes = graph
                    .as_ref()
                    .and_then(|g| g.nodes)
                    .ok_or_else(|| syntax(line, "Coordinates section before Graph"))?;
                coords = Some(parse_coordinates(&mut cur, nodes)?);
            }
            "comment" if comment.is_empty() => comment = parse_comment(&mut cur)?,
            "graph" | "terminals" | "coordinates" | "comment" => {
                return Err(syntax(line, format!("section {name} repeated")));
            }
            _ => skip_section(&mut cur, line)?,
        }
    }
    if !seen_eof {
        return Err(syntax(text.lines().count().max(1), "missing EOF"));
    }
    let graph = graph.ok_or_else(|| Error::MissingSection("Graph".into()))?;
    let terminals = terminals.ok_or_else(|| Error::MissingSection("Terminals".into()))?;
    build(graph, terminals, coords, comment)
}

fn parse_graph(cur: &mut Cursor) -> Result<Graph> {
    let mut g = Graph::default();
    while let Some((line, l)) = cur.next() {
        let mut toks = l.split_whitespace();
        let head = toks.next().unwrap_or("").to_ascii_uppercase();
        match head.as_str() {
            "END" => {
                if g.nodes.is_none() {
                    return Err(syntax(line, "Graph section without Nodes"));
                }
                if let Some(m) = g.declared_edges {
                    if m != g.edge_lines {
                        return Err(syntax(
                            line,
                            format!("{m} edges declared but {} listed", g.edge_lines),
                        ));
                    }
                }
                return Ok(g);
            }
            "NODES" => g.nodes = Some(parse_count(line, toks.next())?),
            "EDGES" | "ARCS" => g.declared_edges = Some(parse_count(line, toks.next())?),
            "E" | "A" => {
                let nodes = g.nodes.ok_or_else(|| syntax(line, "edge before Nodes"))?;
                let u = parse_index(line, toks.next(), nodes)?;
                let v = parse_index(line, toks.next(), nodes)?;
                let w = parse_real(line, toks.next())?;
                if u == v {
                    return Err(syntax(line, format!("self-loop at {}", u + 1)));
                }
                if w <= 0.0 {
                    return Err(Error::NonPositiveWeight(VertexId(u), VertexId(v), w));
                }
                let key = (u.min(v), u.max(v));
                if let Some(&old) = g.edges.get(&key) {
                    if old != w {
                        return Err(Error::DuplicateEdge {
                            line,
                            u: key.0 + 1,
                            v: key.1 + 1,
                        });
                    }
                }
                g.edges.insert(key, w);
                g.edge_lines += 1;
            }
            _ => return Err(syntax(line, format!("unexpected {l:?} in Graph section"))),
        }
    }
    Err(syntax(0, "unterminated Graph section"))
}

fn parse_terminals(cur: &mut Cursor, nodes: usize) -> Result<Vec<usize>> {
    let mut declared = None;
    let mut out = Vec::new();
    while let Some((line, l)) = cur.next() {
        let mut toks = l.split_whitespace();
        let head = toks.next().unwrap_or("").to_ascii_uppercase();
        match head.as_str() {
            "END" => {
                if declared.is_some_and(|t| t != out.len()) {
                    return Err(syntax(
                        line,
                        format!(
                            "{} terminals declared but {} listed",
                            declared.unwrap(),
                            out.len()
                        ),
                    ));
                }
                out.sort_unstable();
                out.dedup();
                return Ok(out);
            }
            "TERMINALS" => declared = Some(parse_count(line, toks.next())?),
            "T" => out.push(parse_index(line, toks.next(), nodes)?),
            _ => {
                return Err(syntax(
                    line,
                    format!("unexpected {l:?} in Terminals section"),
                ))
            }
        }
    }
    Err(syntax(0, "unterminated Terminals section"))
}

fn parse_coordinates(cur: &mut Cursor, nodes: usize) -> Result<BTreeMap<usize, Vec<f64>>> {
    let mut out = BTreeMap::new();
    while let Some((line, l)) = cur.next() {
        let mut toks = l.split_whitespace();
        let head = toks.next().unwrap_or("").to_ascii_uppercase();
        match head.as_str() {
            "END" => return Ok(out),
            "DD" => {
                let i = parse_index(line, toks.next(), nodes)?;
                let p = toks
                    .map(|t| parse_real(line, Some(t)))
                    .collect::<Result<Vec<f64>>>()?;
                if p.is_empty() {
                    return Err(syntax(line, "coordinate line without values"));
                }
                if out.insert(i, p).is_some() {
                    return Err(syntax(line, format!("coordinates of {} repeated", i + 1)));
                }
            }
            _ => {
                return Err(syntax(
                    line,
                    format!("unexpected {l:?} in Coordinates section"),
                ))
            }
        }
    }
    Err(syntax(0, "unterminated Coordinates section"))
}

fn parse_comment(cur: &mut Cursor) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    while let Some((_, l)) = cur.next() {
        if l.eq_ignore_ascii_case("END") {
            return Ok(out);
        }
        let (k, v) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        out.push((k.to_string(), v.trim().trim_matches('"').to_string()));
    }
    Err(syntax(0, "unterminated Comment section"))
}

fn skip_section(cur: &mut Cursor, start: usize) -> Result<()> {
    while let Some((_, l)) = cur.next() {
        if l.eq_ignore_ascii_case("END") {
            return Ok(());
        }
    }
    Err(syntax(start, "unterminated section"))
}

fn build(
    graph: Graph,
    terminals: Vec<usize>,
    coords: Option<BTreeMap<usize, Vec<f64>>>,
    comment: Vec<(String, String)>,
) -> Result<StpDocument> {
    let n = graph.nodes.expect("checked in parse_graph");
    let term_ids: Vec<VertexId> = terminals.iter().map(|&t| VertexId(t)).collect();
    let mut notes = Vec::new();
    let complete = graph.edges.len() == n * n.saturating_sub(1) / 2;
    let base = if complete {
        let mut w = vec![vec![0.0; n]; n];
        for (&(u, v), &x) in &graph.edges {
            w[u][v] = x;
            w[v][u] = x;
        }
        Instance::complete(w, &term_ids)?
    } else {
        notes.push(format!(
            "{} of {} pairs given; completed by metric closure",
            graph.edges.len(),
            n * n.saturating_sub(1) / 2
        ));
        let edges: Vec<(VertexId, VertexId, f64)> = graph
            .edges
            .iter()
            .map(|(&(u, v), &w)| (VertexId(u), VertexId(v), w))
            .collect();
        metric_closure(n, &term_ids, &edges)?
    };
    let instance = match coords {
        None => base,
        Some(points) => {
            if points.len() != n {
                return Err(Error::Syntax {
                    line: 0,
                    detail: format!("coordinates for {} of {n} vertices", points.len()),
                });
            }
            let weights: Vec<Vec<f64>> = (0..n)
                .map(|u| {
                    (0..n)
                        .map(|v| base.weight(VertexId(u), VertexId(v)))
                        .collect()
                })
                .collect();
            let inst = Instance::from_parts_unchecked(InstanceParts {
                weights,
                terminals: term_ids,
                coords: Some(points.into_values().collect()),
                metric: base.is_metric(),
                euclidean: true,
            })?;
            let report = validate(&inst);
            if !report.ok() {
                return Err(Error::InvalidInstance(report));
            }
            notes.push(format!(
                "weights consistent with coordinates within {CONSISTENCY_TOL:e}"
            ));
            inst
        }
    };
    Ok(StpDocument {
        instance,
        comment,
        notes,
    })
}
