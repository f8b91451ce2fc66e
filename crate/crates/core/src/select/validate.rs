use std::fmt;

use super::{CycleKind, CycleList, CycleRecord, SelectionStep};
use crate::sigraph::{Cycle, EdgeId, SignedGraph, VertexSet};
use crate::structure::{block_cut_tree, doubly_straddled_four_cut, recognize_fish, straddled_three_cut};

/// The property a rejected list fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CycleListCheck {
    /// A record is not what its kind claims.
    RecordShape { index: usize },
    DisjointCover,
    FirstSpecial,
    SpecialCount,
    SpecialAttachment { index: usize },
    FishLast,
    OrdinaryInduced { index: usize },
    OrdinaryForwardEdges { index: usize },
    PositiveAttachment { index: usize },
    Parity,
    StepSequence,
    StraddledThreeCut { index: usize },
    DoublyStraddledFourCut { first: usize, second: usize },
}

impl fmt::Display for CycleListCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycleListCheck::RecordShape { index } => write!(f, "record {index} malformed"),
            CycleListCheck::DisjointCover => f.write_str("records are not a disjoint cover"),
            CycleListCheck::FirstSpecial => f.write_str("first record is not negative special"),
            CycleListCheck::SpecialCount => f.write_str("more than two negative special records"),
            CycleListCheck::SpecialAttachment { index } => write!(f, "special record {index} badly attached"),
            CycleListCheck::FishLast => f.write_str("fish record is not last"),
            CycleListCheck::OrdinaryInduced { index } => write!(f, "ordinary record {index} has a chord"),
            CycleListCheck::OrdinaryForwardEdges { index } => {
                write!(f, "ordinary record {index} has several edges to later records")
            }
            CycleListCheck::PositiveAttachment { index } => write!(f, "positive record {index} badly attached"),
            CycleListCheck::Parity => f.write_str("even ordinary plus special count is odd"),
            CycleListCheck::StepSequence => f.write_str("selection steps out of order"),
            CycleListCheck::StraddledThreeCut { index } => write!(f, "record {index} straddles a 3-edge-cut"),
            CycleListCheck::DoublyStraddledFourCut { first, second } => {
                write!(f, "records {first} and {second} straddle a common 4-edge-cut")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CycleListVerdict {
    Accept,
    Reject { check: CycleListCheck, detail: String },
}

impl CycleListVerdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, CycleListVerdict::Accept)
    }
}

fn reject(check: CycleListCheck, detail: impl Into<String>) -> CycleListVerdict {
    CycleListVerdict::Reject { check, detail: detail.into() }
}

fn record_ok(g: &SignedGraph, r: &CycleRecord) -> Result<(), String> {
    match r.kind {
        CycleKind::Fish => {
            let mut keep = g.empty_set();
            if r.vertices.iter().any(|&v| !g.has_vertex(v)) {
                return Err("unknown vertex".into());
            }
            r.vertices.iter().for_each(|&v| keep.insert(v));
            let h = g.induced(&keep);
            let mut edges: Vec<EdgeId> = h.edge_ids().collect();
            edges.sort_unstable();
            let mut mine = r.edges.clone();
            mine.sort_unstable();
            if edges != mine {
                return Err("edges are not the induced subgraph".into());
            }
            match (recognize_fish(&h), &r.fish) {
                (None, _) => Err("not a fish".into()),
                (Some(found), Some(c)) if found.distinguished != c.distinguished => {
                    Err("certificate disagrees with the subgraph".into())
                }
                _ => Ok(()),
            }
        }
        _ if r.edges.is_empty() => {
            if r.vertices.len() != 1 || !g.has_vertex(r.vertices[0]) {
                return Err("single-vertex record expected".into());
            }
            if r.kind != CycleKind::Positive {
                return Err("a single vertex is positive".into());
            }
            Ok(())
        }
        kind => {
            let c = Cycle { vertices: r.vertices.clone(), edges: r.edges.clone() };
            if !c.is_valid_in(g) {
                return Err("not a cycle".into());
            }
            if c.is_negative(g) != kind.is_negative() {
                return Err(format!("sign does not match kind {kind}"));
            }
            Ok(())
        }
    }
}

/// Checks every structural promise of a selected list against `g`.
pub fn validate_cycle_list(g: &SignedGraph, cl: &CycleList) -> CycleListVerdict {
    let recs = &cl.records;
    let bound = g.vertex_bound();
    for (i, r) in recs.iter().enumerate() {
        if let Err(d) = record_ok(g, r) {
            return reject(CycleListCheck::RecordShape { index: i }, d);
        }
    }

    // disjoint cover; owner[v] = record index
    let mut owner = vec![usize::MAX; bound];
    for (i, r) in recs.iter().enumerate() {
        for &v in &r.vertices {
            if owner[v] != usize::MAX {
                return reject(CycleListCheck::DisjointCover, format!("vertex {v} in records {} and {i}", owner[v]));
            }
            owner[v] = i;
        }
    }
    if let Some(v) = g.vertices().find(|&v| owner[v] == usize::MAX) {
        return reject(CycleListCheck::DisjointCover, format!("vertex {v} uncovered"));
    }

    if recs.first().map(|r| r.kind) != Some(CycleKind::NegativeSpecial) {
        return reject(CycleListCheck::FirstSpecial, "");
    }
    let specials: Vec<usize> = (0..recs.len()).filter(|&i| recs[i].kind == CycleKind::NegativeSpecial).collect();
    if specials.len() > 2 {
        return reject(CycleListCheck::SpecialCount, format!("records {specials:?}"));
    }

    // edges from record i to earlier / later records
    let crossing = |i: usize, earlier: bool| -> Vec<(usize, EdgeId)> {
        let mut out = Vec::new();
        for &v in &recs[i].vertices {
            for &e in g.incident(v) {
                let w = g.edge(e).other(v);
                let o = owner[w];
                if (earlier && o < i) || (!earlier && o > i && o != usize::MAX) {
                    out.push((v, e));
                }
            }
        }
        out
    };

    for &j in specials.iter().skip(1) {
        let back = crossing(j, true).len();
        let later_negative = recs[j + 1..].iter().filter(|r| r.kind.is_negative()).count();
        if !(back >= 2 || (back >= 1 && later_negative <= 2)) {
            return reject(
                CycleListCheck::SpecialAttachment { index: j },
                format!("{back} edges back, {later_negative} negative records after"),
            );
        }
    }

    if let Some(i) = recs.iter().position(|r| r.kind == CycleKind::Fish) {
        if i + 1 != recs.len() {
            return reject(CycleListCheck::FishLast, format!("fish at {i} of {}", recs.len()));
        }
    }

    for (i, r) in recs.iter().enumerate() {
        match r.kind {
            CycleKind::NegativeOrdinary => {
                let on = r.vertex_set(bound);
                if let Some(e) = g
                    .edges()
                    .find(|e| on.contains(e.u) && on.contains(e.v) && !r.edges.contains(&e.id))
                {
                    return reject(CycleListCheck::OrdinaryInduced { index: i }, format!("chord {}", e.id));
                }
                let fwd = crossing(i, false).len();
                if fwd > 1 {
                    return reject(CycleListCheck::OrdinaryForwardEdges { index: i }, format!("{fwd} edges"));
                }
            }
            CycleKind::Positive => {
                if let Err(d) = positive_attached(g, recs, &owner, i, &crossing(i, true)) {
                    return reject(CycleListCheck::PositiveAttachment { index: i }, d);
                }
            }
            _ => {}
        }
    }

    if cl.parity_count() % 2 == 1 {
        return reject(CycleListCheck::Parity, format!("count {}", cl.parity_count()));
    }

    if let Err(d) = steps_ok(recs) {
        return reject(CycleListCheck::StepSequence, d);
    }

    let even: Vec<usize> = (0..recs.len()).filter(|&i| recs[i].is_even_ordinary()).collect();
    let n = &even[..even.len().saturating_sub(2)];
    let cyc = |i: usize| recs[i].cycle().expect("ordinary record is a cycle");
    for &i in n {
        if let Some(cut) = straddled_three_cut(g, &cyc(i)) {
            return reject(CycleListCheck::StraddledThreeCut { index: i }, format!("cut {:?}", cut.edges));
        }
    }
    for (a, &i) in n.iter().enumerate() {
        for &j in &n[a + 1..] {
            if let Some(cut) = doubly_straddled_four_cut(g, &cyc(i), &cyc(j)) {
                return reject(
                    CycleListCheck::DoublyStraddledFourCut { first: i, second: j },
                    format!("cut {:?}", cut.edges),
                );
            }
        }
    }
    CycleListVerdict::Accept
}

/// Two distinct vertices with a neighbour earlier in the list, or one such
/// vertex and another on a cut edge of the graph induced by this record and
/// later ones. A single vertex needs two edges back.
fn positive_attached(
    g: &SignedGraph,
    recs: &[CycleRecord],
    owner: &[usize],
    i: usize,
    back: &[(usize, EdgeId)],
) -> Result<(), String> {
    if recs[i].is_vertex() {
        return if back.len() >= 2 { Ok(()) } else { Err(format!("{} edges back", back.len())) };
    }
    let mut xs: Vec<usize> = back.iter().map(|&(v, _)| v).collect();
    xs.sort_unstable();
    xs.dedup();
    match xs.len() {
        0 => Err("no edge back".into()),
        1 => {
            let mut keep = VertexSet::with_capacity(g.vertex_bound());
            g.vertices().filter(|&v| owner[v] >= i).for_each(|v| keep.insert(v));
            let rest = g.induced(&keep);
            let tree = block_cut_tree(&rest);
            let bridges: Vec<EdgeId> =
                tree.blocks.iter().filter(|b| b.is_bridge(&rest)).map(|b| b.edges[0]).collect();
            let ok = recs[i]
                .vertices
                .iter()
                .any(|&y| y != xs[0] && g.incident(y).iter().any(|e| bridges.contains(e)));
            if ok {
                Ok(())
            } else {
                Err("one vertex attached back and no cut edge".into())
            }
        }
        _ => Ok(()),
    }
}

fn steps_ok(recs: &[CycleRecord]) -> Result<(), String> {
    let first = recs[0].step;
    if first == SelectionStep::PreprocessSpanning {
        let ok = recs.len() == 2 && recs[1].step == SelectionStep::PreprocessSpanning;
        return if ok { Ok(()) } else { Err("spanning pair must be the whole list".into()) };
    }
    if recs[1..].iter().any(|r| matches!(r.step, SelectionStep::PreprocessSpanning | SelectionStep::PreprocessTheta)) {
        return Err("pre-process step after the first record".into());
    }
    let parity = recs.iter().filter(|r| r.step.is_parity_step()).count();
    if parity > 1 {
        return Err(format!("{parity} parity steps"));
    }
    Ok(())
}
