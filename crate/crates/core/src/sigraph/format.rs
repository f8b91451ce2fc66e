//! Line-oriented text formats.
//!
//! Graph files:
//!
//! ```text
//! sg 1
//! v 3
//! e 0 0 1 +
//! e 1 1 2 + away toward
//! ```
//!
//! `v <n>` allocates vertices `0..n`. An optional `r <ids...>` line lists ids
//! below `n` that are not present, so graphs with gaps survive a round trip.
//! Direction columns give the end directions at `u` and `v`; they must be
//! present on every edge or on none. `#` starts a comment.
//!
//! Flow files hold one `<edge-id> <integer>` per line.

use super::{Dir, IntFlow, Orientation, Sign, SignedGraph};
use crate::error::{Error, Result};

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| perr(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| perr(line, format!("bad {what} `{tok}`")))
}

fn parse_dir(tok: &str, line: usize) -> Result<Dir> {
    match tok {
        "away" => Ok(Dir::Away),
        "toward" => Ok(Dir::Toward),
        _ => Err(perr(line, format!("bad direction `{tok}`"))),
    }
}

/// Parses a graph, with its orientation when direction columns are given.
pub fn parse_sg(text: &str) -> Result<(SignedGraph, Option<Orientation>)> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, "sg 1")) => {}
        Some((n, other)) => return Err(perr(n, format!("expected header `sg 1`, found `{other}`"))),
        None => return Err(perr(1, "empty input")),
    }
    let mut g: Option<SignedGraph> = None;
    let mut removed_seen = false;
    let mut dirs: Vec<(usize, usize, [Dir; 2])> = Vec::new();
    let mut undirected = 0usize;
    let mut first_dir_line = None;
    for (n, line) in lines {
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("v") => {
                if g.is_some() {
                    return Err(perr(n, "duplicate `v` line"));
                }
                let count: usize = parse_num(toks.next(), n, "vertex count")?;
                g = Some(SignedGraph::new(count));
            }
            Some("r") => {
                let g = g.as_mut().ok_or_else(|| perr(n, "`r` before `v`"))?;
                if removed_seen || g.edge_bound() > 0 {
                    return Err(perr(n, "`r` must come once, before any edge"));
                }
                removed_seen = true;
                for tok in toks {
                    let v: usize = parse_num(Some(tok), n, "vertex id")?;
                    if !g.has_vertex(v) {
                        return Err(perr(n, format!("cannot remove vertex {v}")));
                    }
                    g.remove_vertex(v);
                }
                continue;
            }
            Some("e") => {
                let g = g.as_mut().ok_or_else(|| perr(n, "`e` before `v`"))?;
                let id: usize = parse_num(toks.next(), n, "edge id")?;
                let u: usize = parse_num(toks.next(), n, "vertex")?;
                let v: usize = parse_num(toks.next(), n, "vertex")?;
                let sign = match toks.next() {
                    Some("+") => Sign::Positive,
                    Some("-") => Sign::Negative,
                    Some(t) => return Err(perr(n, format!("bad sign `{t}`"))),
                    None => return Err(perr(n, "missing sign")),
                };
                for w in [u, v] {
                    if !g.has_vertex(w) {
                        return Err(perr(n, format!("unknown vertex {w}")));
                    }
                }
                if g.has_edge(id) {
                    return Err(perr(n, format!("duplicate edge id {id}")));
                }
                match (toks.next(), toks.next()) {
                    (None, _) => undirected += 1,
                    (Some(a), Some(b)) => {
                        dirs.push((n, id, [parse_dir(a, n)?, parse_dir(b, n)?]));
                        first_dir_line.get_or_insert(n);
                    }
                    (Some(_), None) => return Err(perr(n, "direction columns come in pairs")),
                }
                if toks.next().is_some() {
                    return Err(perr(n, "trailing tokens"));
                }
                g.insert_edge(id, u, v, sign);
            }
            Some(tok) => return Err(perr(n, format!("unknown record `{tok}`"))),
            None => unreachable!(),
        }
    }
    let g = g.ok_or_else(|| perr(1, "missing `v` line"))?;
    if !dirs.is_empty() && undirected > 0 {
        return Err(perr(first_dir_line.unwrap_or(1), "direction columns must be given on all edges or none"));
    }
    if dirs.is_empty() {
        return Ok((g, None));
    }
    let mut o = Orientation::default();
    for &(_, id, d) in &dirs {
        o.set(id, d);
    }
    o.check(&g)?;
    Ok((g, Some(o)))
}

/// Canonical text form: header, vertex count, removed ids, edges by id.
pub fn serialize_sg(g: &SignedGraph, o: Option<&Orientation>) -> String {
    let mut out = String::from("sg 1\n");
    out.push_str(&format!("v {}\n", g.vertex_bound()));
    let gaps: Vec<String> = (0..g.vertex_bound())
        .filter(|&v| !g.has_vertex(v))
        .map(|v| v.to_string())
        .collect();
    if !gaps.is_empty() {
        out.push_str(&format!("r {}\n", gaps.join(" ")));
    }
    for e in g.edges() {
        out.push_str(&format!("e {} {} {} {}", e.id, e.u, e.v, e.sign.symbol()));
        if let Some(o) = o {
            let d = o.get(e.id);
            out.push_str(&format!(" {} {}", d[0].word(), d[1].word()));
        }
        out.push('\n');
    }
    out
}

pub fn parse_flow(text: &str) -> Result<IntFlow> {
    let mut f = IntFlow::new();
    for (n, line) in content_lines(text) {
        let mut toks = line.split_whitespace();
        let e: usize = parse_num(toks.next(), n, "edge id")?;
        let x: i64 = parse_num(toks.next(), n, "flow value")?;
        if toks.next().is_some() {
            return Err(perr(n, "trailing tokens"));
        }
        if f.contains(e) {
            return Err(perr(n, format!("duplicate value for edge {e}")));
        }
        f.set(e, x);
    }
    Ok(f)
}

pub fn serialize_flow(f: &IntFlow) -> String {
    f.iter().map(|(e, x)| format!("{e} {x}\n")).collect()
}
