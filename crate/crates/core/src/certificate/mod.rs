//! Versioned text certificates for synthesized flows, and a replay that
//! re-checks every stage without searching.
//!
//! ```text
//! cert 1
//! input <sha256 of the canonical input>
//! k 8
//! uncontract <vertex> <e> <e2> <new-vertex> <new-edge>
//! begin core
//! record <kind> <step> v <ids...> e <ids...>
//! phi <edge> <0|1|2>
//! match <a> <b>
//! psi <edge> <value>
//! tau <edge> <value>
//! flow <edge> <value>
//! end
//! final <edge> <value>
//! ```
//!
//! A solution block is `core`, `oracle <k>` (holding `flow` lines) or
//! `split <c0> <c1> <c2> y <ids...>` (holding `outer` lines and one nested
//! block for the contracted side).

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::lift::{
    assemble_flow, build_auxiliary, build_tau, check_int_preflow, check_matching_hypotheses, designated_cycles,
    smooth_subdivisions,
};
use crate::preflow::{audit_preflow, normalize_cycle_signature, subdivide_for_parity, Z3Preflow};
use crate::reduce::{pull_back, split_parts, Balanced3Cut, ReductionStep};
use crate::select::{validate_cycle_list, CycleKind, CycleList, CycleListVerdict, CycleRecord, SelectionStep};
use crate::sigraph::format::serialize_sg;
use crate::sigraph::{
    boundary_at, uncontract_at, verify_flow, Dir, EdgeId, FlowVerdict, IntFlow, Orientation, SignedGraph, VertexId,
    Z3Assignment, Z3,
};
use crate::structure::recognize_fish;

/// Everything the cycle construction produced on one cubic core.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreRecord {
    pub list: CycleList,
    /// Preflow on the subdivided, normalized core.
    pub phi: Z3Assignment,
    /// Perfect matching of the auxiliary graph as vertex pairs.
    pub matching: Vec<(usize, usize)>,
    pub psi: IntFlow,
    pub tau: IntFlow,
    /// Flow on the core itself.
    pub flow: IntFlow,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Core(Box<CoreRecord>),
    Oracle { k: i64, flow: IntFlow },
    /// `inner` solves the graph with `y` contracted; `outer` is the flow on
    /// the graph with the other side contracted.
    Split { y: Vec<VertexId>, cut: [EdgeId; 3], inner: Box<Solution>, outer: IntFlow },
}

impl Solution {
    /// Which constructions produced the flow, outermost first.
    pub fn routes(&self) -> Vec<String> {
        match self {
            Solution::Core(_) => vec!["construction".into()],
            Solution::Oracle { k, .. } => vec![format!("oracle-k{k}")],
            Solution::Split { inner, .. } => {
                let mut r = vec!["split".to_string()];
                r.extend(inner.routes());
                r
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub input_hash: String,
    pub k: i64,
    pub reduction: Vec<ReductionStep>,
    pub solution: Solution,
    pub flow: IntFlow,
}

pub fn input_hash(g: &SignedGraph, o: &Orientation) -> String {
    hex::encode(Sha256::digest(serialize_sg(g, Some(o)).as_bytes()))
}

impl Certificate {
    pub fn new(
        g: &SignedGraph,
        o: &Orientation,
        k: i64,
        reduction: Vec<ReductionStep>,
        solution: Solution,
        flow: IntFlow,
    ) -> Self {
        Certificate { input_hash: input_hash(g, o), k, reduction, solution, flow }
    }

    pub fn to_text(&self) -> String {
        let mut out = vec!["cert 1".to_string(), format!("input {}", self.input_hash), format!("k {}", self.k)];
        for s in &self.reduction {
            if let ReductionStep::Uncontract { vertex, e, e2, new_vertex, new_edge } = s {
                out.push(format!("uncontract {vertex} {e} {e2} {new_vertex} {new_edge}"));
            }
        }
        write_solution(&self.solution, &mut out);
        push_values(&mut out, "final", &self.flow);
        out.push(String::new());
        out.join("\n")
    }

    pub fn parse(text: &str) -> Result<Certificate> {
        let lines: Vec<(usize, Vec<&str>)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>()))
            .filter(|(_, t)| !t.is_empty())
            .collect();
        let mut p = Parser { lines, pos: 0 };
        p.expect(&["cert", "1"])?;
        let input_hash = p.keyword_value("input")?.to_string();
        let k: i64 = p.keyword_num("k")?;
        let mut reduction = Vec::new();
        while p.peek_word() == Some("uncontract") {
            let (n, t) = p.next()?;
            let v = nums::<usize>(&t[1..], n)?;
            if v.len() != 5 {
                return Err(perr(n, "uncontract needs five ids"));
            }
            reduction.push(ReductionStep::Uncontract { vertex: v[0], e: v[1], e2: v[2], new_vertex: v[3], new_edge: v[4] });
        }
        let solution = p.solution()?;
        let flow = p.values("final")?;
        if let Some((n, _)) = p.lines.get(p.pos) {
            return Err(perr(*n, "trailing lines"));
        }
        Ok(Certificate { input_hash, k, reduction, solution, flow })
    }
}

fn push_values(out: &mut Vec<String>, word: &str, f: &IntFlow) {
    out.extend(f.iter().map(|(e, x)| format!("{word} {e} {x}")));
}

fn join(ids: &[usize]) -> String {
    ids.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn write_solution(s: &Solution, out: &mut Vec<String>) {
    match s {
        Solution::Core(rec) => {
            out.push("begin core".into());
            for r in &rec.list.records {
                out.push(format!("record {} {} v {} e {}", r.kind.word(), r.step.word(), join(&r.vertices), join(&r.edges)));
            }
            out.extend(rec.phi.iter().map(|(e, x)| format!("phi {e} {x}")));
            out.extend(rec.matching.iter().map(|(a, b)| format!("match {a} {b}")));
            push_values(out, "psi", &rec.psi);
            push_values(out, "tau", &rec.tau);
            push_values(out, "flow", &rec.flow);
        }
        Solution::Oracle { k, flow } => {
            out.push(format!("begin oracle {k}"));
            push_values(out, "flow", flow);
        }
        Solution::Split { y, cut, inner, outer } => {
            out.push(format!("begin split {} y {}", join(cut), join(y)));
            push_values(out, "outer", outer);
            write_solution(inner, out);
        }
    }
    out.push("end".into());
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn nums<T: std::str::FromStr>(toks: &[&str], line: usize) -> Result<Vec<T>> {
    toks.iter().map(|t| t.parse().map_err(|_| perr(line, format!("bad number `{t}`")))).collect()
}

struct Parser<'a> {
    lines: Vec<(usize, Vec<&'a str>)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn next(&mut self) -> Result<(usize, Vec<&'a str>)> {
        let last = self.lines.last().map_or(1, |l| l.0);
        let item = self.lines.get(self.pos).cloned().ok_or_else(|| perr(last, "unexpected end of certificate"))?;
        self.pos += 1;
        Ok(item)
    }

    fn peek_word(&self) -> Option<&'a str> {
        self.lines.get(self.pos).map(|l| l.1[0])
    }

    fn expect(&mut self, toks: &[&str]) -> Result<()> {
        let (n, t) = self.next()?;
        if t != toks {
            return Err(perr(n, format!("expected `{}`", toks.join(" "))));
        }
        Ok(())
    }

    fn keyword_value(&mut self, word: &str) -> Result<&'a str> {
        let (n, t) = self.next()?;
        if t.len() != 2 || t[0] != word {
            return Err(perr(n, format!("expected `{word} <value>`")));
        }
        Ok(t[1])
    }

    fn keyword_num<T: std::str::FromStr>(&mut self, word: &str) -> Result<T> {
        let n = self.lines.get(self.pos).map_or(0, |l| l.0);
        let v = self.keyword_value(word)?;
        v.parse().map_err(|_| perr(n, format!("bad {word} `{v}`")))
    }

    /// Consecutive `<word> <edge> <value>` lines.
    fn values(&mut self, word: &str) -> Result<IntFlow> {
        let mut f = IntFlow::new();
        while self.peek_word() == Some(word) {
            let (n, t) = self.next()?;
            let v = nums::<i64>(&t[1..], n)?;
            if v.len() != 2 || v[0] < 0 {
                return Err(perr(n, format!("expected `{word} <edge> <value>`")));
            }
            if f.contains(v[0] as usize) {
                return Err(perr(n, format!("duplicate {word} for edge {}", v[0])));
            }
            f.set(v[0] as usize, v[1]);
        }
        Ok(f)
    }

    fn solution(&mut self) -> Result<Solution> {
        let (n, t) = self.next()?;
        let sol = match t.as_slice() {
            ["begin", "core"] => {
                let mut records = Vec::new();
                while self.peek_word() == Some("record") {
                    let (n, t) = self.next()?;
                    records.push(parse_record(&t, n)?);
                }
                let mut phi = Z3Assignment::new();
                while self.peek_word() == Some("phi") {
                    let (n, t) = self.next()?;
                    let v = nums::<i64>(&t[1..], n)?;
                    if v.len() != 2 || v[0] < 0 || !(0..3).contains(&v[1]) {
                        return Err(perr(n, "expected `phi <edge> <0|1|2>`"));
                    }
                    phi.set(v[0] as usize, Z3::new(v[1]));
                }
                let mut matching = Vec::new();
                while self.peek_word() == Some("match") {
                    let (n, t) = self.next()?;
                    let v = nums::<usize>(&t[1..], n)?;
                    if v.len() != 2 {
                        return Err(perr(n, "expected `match <a> <b>`"));
                    }
                    matching.push((v[0], v[1]));
                }
                let psi = self.values("psi")?;
                let tau = self.values("tau")?;
                let flow = self.values("flow")?;
                Solution::Core(Box::new(CoreRecord { list: CycleList { records }, phi, matching, psi, tau, flow }))
            }
            ["begin", "oracle", k] => {
                let k: i64 = k.parse().map_err(|_| perr(n, "bad oracle k"))?;
                Solution::Oracle { k, flow: self.values("flow")? }
            }
            ["begin", "split", c0, c1, c2, "y", ys @ ..] => {
                let cut = nums::<usize>(&[c0, c1, c2], n)?;
                let y = nums::<usize>(ys, n)?;
                let outer = self.values("outer")?;
                let inner = Box::new(self.solution()?);
                Solution::Split { y, cut: [cut[0], cut[1], cut[2]], inner, outer }
            }
            _ => return Err(perr(n, "expected a solution block")),
        };
        self.expect(&["end"])?;
        Ok(sol)
    }
}

fn parse_record(t: &[&str], n: usize) -> Result<CycleRecord> {
    let kind = t.get(1).and_then(|w| CycleKind::from_word(w)).ok_or_else(|| perr(n, "bad record kind"))?;
    let step = t.get(2).and_then(|w| SelectionStep::from_word(w)).ok_or_else(|| perr(n, "bad selection step"))?;
    let e_at = t.iter().position(|&w| w == "e").ok_or_else(|| perr(n, "record without `e`"))?;
    if t.get(3) != Some(&"v") || e_at < 4 {
        return Err(perr(n, "record needs `v <ids> e <ids>`"));
    }
    let vertices = nums::<usize>(&t[4..e_at], n)?;
    let edges = nums::<usize>(&t[e_at + 1..], n)?;
    Ok(CycleRecord { kind, step, vertices, edges, fish: None })
}

/// Stage-by-stage outcome of a replay.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayReport {
    pub audits: Vec<(String, bool)>,
}

impl ReplayReport {
    pub fn passed(&self) -> bool {
        self.audits.iter().all(|a| a.1)
    }

    pub fn lines(&self) -> Vec<String> {
        self.audits.iter().map(|(s, ok)| format!("audit {s} {}", if *ok { "ok" } else { "FAIL" })).collect()
    }
}

struct Replay {
    audits: Vec<(String, bool)>,
}

impl Replay {
    fn note(&mut self, stage: impl Into<String>, ok: bool) -> bool {
        self.audits.push((stage.into(), ok));
        ok
    }
}

/// Re-checks `cert` against the input. No stage searches: recorded choices
/// (cycle list, matching, oracle flows) are validated, and everything else
/// is recomputed deterministically and compared.
pub fn replay(g: &SignedGraph, o: &Orientation, cert: &Certificate) -> ReplayReport {
    let mut r = Replay { audits: Vec::new() };
    r.note("input-hash", input_hash(g, o) == cert.input_hash);
    let mut h = g.clone();
    let mut oh = o.clone();
    let mut ok = true;
    for s in &cert.reduction {
        if let ReductionStep::Uncontract { vertex, e, e2, new_vertex, new_edge } = *s {
            let applied = g.has_vertex(vertex).then(|| uncontract_at(&mut h, vertex, e, e2));
            match applied {
                Some(Ok((v2, ne))) if (v2, ne) == (new_vertex, new_edge) => oh.set(ne, [Dir::Away, Dir::Toward]),
                _ => {
                    ok = false;
                    break;
                }
            }
        }
    }
    r.note("reduction", ok && h.is_cubic());
    if ok {
        if let Some(fh) = replay_solution(&h, &oh, &cert.solution, cert.k, &mut r, "") {
            let back = pull_back(&h, &oh, &fh, &cert.reduction);
            r.note("pull-back", matches!(&back, Ok((bg, _, bf)) if bg == g && *bf == cert.flow));
        }
    }
    r.note("final-flow", verify_flow(g, o, &cert.flow, cert.k).is_accept());
    ReplayReport { audits: r.audits }
}

fn replay_solution(g: &SignedGraph, o: &Orientation, s: &Solution, k: i64, r: &mut Replay, at: &str) -> Option<IntFlow> {
    match s {
        Solution::Oracle { k: ko, flow } => {
            let ok = *ko <= k && verify_flow(g, o, flow, *ko).is_accept();
            r.note(format!("{at}oracle-flow"), ok).then(|| flow.clone())
        }
        Solution::Split { y, cut, inner, outer } => {
            let mut set = g.empty_set();
            if y.iter().any(|&v| !g.has_vertex(v)) {
                r.note(format!("{at}split"), false);
                return None;
            }
            y.iter().for_each(|&v| set.insert(v));
            let parts = match split_parts(g, o, &Balanced3Cut { y: set, cut: *cut }) {
                Ok(p) => p,
                Err(_) => {
                    r.note(format!("{at}split"), false);
                    return None;
                }
            };
            r.note(format!("{at}split"), true);
            let phi_y = replay_solution(&parts.g_y, &parts.o_y, inner, k, r, &format!("{at}inner/"))?;
            let outer_ok = verify_flow(&parts.g_x, &parts.o_x, outer, k).is_accept()
                && cut.iter().all(|&e| outer.get(e) == phi_y.get(e));
            if !r.note(format!("{at}split-outer"), outer_ok) {
                return None;
            }
            let f = parts.merge(&phi_y, outer).ok()?;
            r.note(format!("{at}split-merge"), verify_flow(g, o, &f, k).is_accept()).then_some(f)
        }
        Solution::Core(rec) => replay_core(g, o, rec, r, at),
    }
}

fn replay_core(g: &SignedGraph, o: &Orientation, rec: &CoreRecord, r: &mut Replay, at: &str) -> Option<IntFlow> {
    let mut list = rec.list.clone();
    for rc in &mut list.records {
        if rc.kind == CycleKind::Fish {
            if rc.vertices.iter().any(|&v| !g.has_vertex(v)) {
                r.note(format!("{at}select"), false);
                return None;
            }
            let mut keep = g.empty_set();
            rc.vertices.iter().for_each(|&v| keep.insert(v));
            rc.fish = recognize_fish(&g.induced(&keep));
        }
    }
    let valid = list.records.iter().all(|rc| rc.vertices.iter().all(|&v| g.has_vertex(v)))
        && list.records.iter().all(|rc| rc.edges.iter().all(|&e| g.has_edge(e)))
        && !list.is_empty()
        && matches!(validate_cycle_list(g, &list), CycleListVerdict::Accept);
    if !r.note(format!("{at}select"), valid) {
        return None;
    }
    let sub = subdivide_for_parity(g, o, &list).ok()?;
    let (mut h, mut oh) = (sub.graph.clone(), sub.orientation.clone());
    normalize_cycle_signature(&mut h, &mut oh, &sub.list).ok()?;
    let pre_ok = rec.phi.covers_exactly(&h) && audit_preflow(&h, &oh, &rec.phi, &sub.list).is_ok();
    if !r.note(format!("{at}preflow"), pre_ok) {
        return None;
    }
    let pre = Z3Preflow { graph: h.clone(), orientation: oh.clone(), phi: rec.phi.clone(), negations: Vec::new() };
    let aux = build_auxiliary(&pre).ok()?;
    let hyp = designated_cycles(&aux, &sub).map(|c| check_matching_hypotheses(&aux.to_graph(), &c));
    r.note(format!("{at}matching-hypotheses"), matches!(&hyp, Ok(x) if x.hold()));
    let n = aux.vertex_count();
    let mut covered = vec![false; n];
    let mut perfect = rec.matching.len() * 2 == n;
    for &(a, b) in &rec.matching {
        let adjacent = a < n && b < n && aux.edges.iter().any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a));
        if !adjacent || covered[a] || covered[b] {
            perfect = false;
            break;
        }
        covered[a] = true;
        covered[b] = true;
    }
    if !r.note(format!("{at}matching"), perfect) {
        return None;
    }
    if !r.note(format!("{at}lift"), check_int_preflow(&h, &oh, &rec.phi, &rec.psi).is_ok()) {
        return None;
    }
    let tau_ok = build_tau(&h, &oh, &sub, &rec.psi).is_ok_and(|t| t == rec.tau);
    if !r.note(format!("{at}tau"), tau_ok) {
        return None;
    }
    let f_star = assemble_flow(&h, &oh, &rec.psi, &rec.tau).ok()?;
    let smooth_ok = smooth_subdivisions(&sub, &f_star).is_ok_and(|(bg, _, f)| bg == *g && f == rec.flow);
    let ok = smooth_ok && verify_flow(g, o, &rec.flow, 8).is_accept();
    r.note(format!("{at}assemble"), ok).then(|| rec.flow.clone())
}

/// Boundary of `f` at every vertex, for diagnostics.
pub fn boundaries(g: &SignedGraph, o: &Orientation, f: &IntFlow) -> Vec<(VertexId, i64)> {
    g.vertices().map(|v| (v, boundary_at(g, o, f, v))).collect()
}

/// Whether a flow verdict accepts, naming the first violation otherwise.
pub fn verdict_line(v: &FlowVerdict) -> String {
    match v {
        FlowVerdict::Accept => "accept".into(),
        FlowVerdict::Reject(x) => format!("reject: {x}"),
    }
}
