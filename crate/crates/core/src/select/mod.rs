//! Ordered selection of vertex-disjoint cycles covering a cubic graph.

mod validate;

use std::fmt;

pub use validate::{validate_cycle_list, CycleListCheck, CycleListVerdict};

use crate::error::{Error, Result};
use crate::sigraph::{edge_connectivity, Cycle, EdgeId, SignedGraph, VertexId, VertexSet};
use crate::structure::{
    block_cut_tree, contains_unbalanced_theta, enumerate_cycles, find_good_theta_pair,
    find_two_disjoint_negative_cycles, has_unbalanced_theta, recognize_fish, CycleIndex, DisjointPair,
    FishCertificate, GeneralizedCycle, ThetaSubgraph, CYCLE_LIMIT,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CycleKind {
    Positive,
    NegativeOrdinary,
    NegativeSpecial,
    Fish,
}

impl CycleKind {
    pub fn word(self) -> &'static str {
        match self {
            CycleKind::Positive => "positive",
            CycleKind::NegativeOrdinary => "negative-ordinary",
            CycleKind::NegativeSpecial => "negative-special",
            CycleKind::Fish => "fish",
        }
    }

    pub fn from_word(s: &str) -> Option<CycleKind> {
        Some(match s {
            "positive" => CycleKind::Positive,
            "negative-ordinary" => CycleKind::NegativeOrdinary,
            "negative-special" => CycleKind::NegativeSpecial,
            "fish" => CycleKind::Fish,
            _ => return None,
        })
    }

    pub fn is_negative(self) -> bool {
        matches!(self, CycleKind::NegativeOrdinary | CycleKind::NegativeSpecial)
    }
}

impl fmt::Display for CycleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.word())
    }
}

/// Which branch of the selection emitted a record.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SelectionStep {
    /// Two negative cycles covering the graph.
    PreprocessSpanning,
    /// First negative cycle, leaving an unbalanced theta behind.
    PreprocessTheta,
    /// No unbalanced theta left: any usable cycle of a leaf block.
    Usable,
    /// Leaf block that is a negative cycle.
    NegativeLeaf,
    /// Good cycle whose removal keeps an unbalanced theta.
    ThetaPreserving,
    FishWhole,
    FishGoodCycle,
    PairSpecial,
    PairPositive,
}

impl SelectionStep {
    pub fn word(self) -> &'static str {
        match self {
            SelectionStep::PreprocessSpanning => "preprocess-spanning",
            SelectionStep::PreprocessTheta => "preprocess-theta",
            SelectionStep::Usable => "usable",
            SelectionStep::NegativeLeaf => "negative-leaf",
            SelectionStep::ThetaPreserving => "theta-preserving",
            SelectionStep::FishWhole => "fish-whole",
            SelectionStep::FishGoodCycle => "fish-good-cycle",
            SelectionStep::PairSpecial => "pair-special",
            SelectionStep::PairPositive => "pair-positive",
        }
    }

    pub fn from_word(s: &str) -> Option<SelectionStep> {
        const ALL: [SelectionStep; 9] = [
            SelectionStep::PreprocessSpanning,
            SelectionStep::PreprocessTheta,
            SelectionStep::Usable,
            SelectionStep::NegativeLeaf,
            SelectionStep::ThetaPreserving,
            SelectionStep::FishWhole,
            SelectionStep::FishGoodCycle,
            SelectionStep::PairSpecial,
            SelectionStep::PairPositive,
        ];
        ALL.into_iter().find(|x| x.word() == s)
    }

    /// Steps taken once the last unbalanced theta is dealt with.
    pub fn is_parity_step(self) -> bool {
        matches!(
            self,
            SelectionStep::FishWhole
                | SelectionStep::FishGoodCycle
                | SelectionStep::PairSpecial
                | SelectionStep::PairPositive
        )
    }
}

/// One selected piece: a cycle (vertices and edges in cyclic order), a single
/// vertex (no edges), or a whole fish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleRecord {
    pub kind: CycleKind,
    pub step: SelectionStep,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    pub fish: Option<FishCertificate>,
}

impl CycleRecord {
    fn from_generalized(kind: CycleKind, step: SelectionStep, c: &GeneralizedCycle) -> Self {
        CycleRecord { kind, step, vertices: c.vertices(), edges: c.edges().to_vec(), fish: None }
    }

    fn from_cycle(kind: CycleKind, step: SelectionStep, c: &Cycle) -> Self {
        CycleRecord { kind, step, vertices: c.vertices.clone(), edges: c.edges.clone(), fish: None }
    }

    pub fn is_vertex(&self) -> bool {
        self.kind != CycleKind::Fish && self.edges.is_empty()
    }

    /// The record as a cycle; `None` for a vertex or a fish.
    pub fn cycle(&self) -> Option<Cycle> {
        (self.kind != CycleKind::Fish && !self.edges.is_empty())
            .then(|| Cycle { vertices: self.vertices.clone(), edges: self.edges.clone() })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn vertex_set(&self, bound: usize) -> VertexSet {
        let mut s = VertexSet::with_capacity(bound);
        self.vertices.iter().for_each(|&v| s.insert(v));
        s
    }

    pub fn is_even_ordinary(&self) -> bool {
        self.kind == CycleKind::NegativeOrdinary && self.len() % 2 == 0
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CycleList {
    pub records: Vec<CycleRecord>,
}

impl CycleList {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Even-length negative ordinary cycles plus special cycles.
    pub fn parity_count(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.is_even_ordinary() || r.kind == CycleKind::NegativeSpecial)
            .count()
    }

    /// `cycle <index> <kind> <vertices...>` per record.
    pub fn trace_lines(&self) -> Vec<String> {
        self.records
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let vs: Vec<String> = r.vertices.iter().map(|v| v.to_string()).collect();
                format!("cycle {i} {} {}", r.kind, vs.join(" "))
            })
            .collect()
    }
}

/// How the first cycle is chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FirstCycle {
    /// Two disjoint negative cycles covering every vertex.
    Spanning(Cycle, Cycle),
    /// A negative cycle whose removal leaves an unbalanced theta.
    Theta(Cycle, ThetaSubgraph),
}

fn check_input(g: &SignedGraph) -> Result<()> {
    if !g.is_cubic() || edge_connectivity(g) < 3 {
        return Err(Error::contract("cycle selection needs a cubic 3-edge-connected graph"));
    }
    match find_two_disjoint_negative_cycles(g, true, CYCLE_LIMIT) {
        DisjointPair::Found(..) => Ok(()),
        DisjointPair::None => Err(Error::contract("no two vertex-disjoint negative cycles")),
        DisjointPair::Unknown => Err(Error::Budget("cycle enumeration truncated".into())),
    }
}

/// Spanning pair if there is one, otherwise a negative cycle leaving an
/// unbalanced theta.
pub fn preprocess_first(g: &SignedGraph) -> Result<FirstCycle> {
    check_input(g)?;
    let idx = CycleIndex::new(g, CYCLE_LIMIT)?;
    let n = g.vertex_count();
    let neg: Vec<usize> = (0..idx.len()).filter(|&i| idx.is_negative(i)).collect();
    for (a, &i) in neg.iter().enumerate() {
        for &j in &neg[a + 1..] {
            if idx.cycle(i).len() + idx.cycle(j).len() == n && idx.vertex_disjoint(i, j) {
                return Ok(FirstCycle::Spanning(idx.cycle(i).clone(), idx.cycle(j).clone()));
            }
        }
    }
    for &i in &neg {
        if let Some(t) = has_unbalanced_theta(&g.without(idx.vertex_mask(i))) {
            return Ok(FirstCycle::Theta(idx.cycle(i).clone(), t));
        }
    }
    Err(Error::invariant("neither a spanning negative pair nor a negative cycle leaving an unbalanced theta"))
}

/// Result of the pair search on a fragile residual graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BeastOutcome {
    Fish(FishCertificate),
    /// `c0` good, `c1` negative.
    Pair { c0: Cycle, c1: Cycle },
}

fn even_negative_avoiding(idx: &CycleIndex, avoid: &VertexSet) -> Vec<usize> {
    (0..idx.len())
        .filter(|&i| idx.is_negative(i) && idx.cycle(i).len() % 2 == 0 && idx.vertex_mask(i).is_disjoint(avoid))
        .collect()
}

fn negative_avoiding(idx: &CycleIndex, avoid: &VertexSet) -> usize {
    (0..idx.len()).filter(|&i| idx.is_negative(i) && idx.vertex_mask(i).is_disjoint(avoid)).count()
}

/// The four requirements on `(c0, c1)`.
pub fn pair_conditions_hold(g: &SignedGraph, c0: &Cycle, c1: &Cycle) -> Result<bool> {
    let idx = CycleIndex::new(g, CYCLE_LIMIT)?;
    Ok(pair_conditions(g, &idx, c0, c1))
}

fn pair_conditions(g: &SignedGraph, idx: &CycleIndex, c0: &Cycle, c1: &Cycle) -> bool {
    let bound = g.vertex_bound();
    let (v0, v1) = (c0.vertex_set(bound), c1.vertex_set(bound));
    if !c1.is_valid_in(g) || !c1.is_negative(g) || !GeneralizedCycle::Cycle(c0.clone()).is_good_in(g) {
        return false;
    }
    if contains_unbalanced_theta(&g.without(&v1)) {
        return false;
    }
    if even_negative_avoiding(idx, &v0) != even_negative_avoiding(idx, &v1) {
        return false;
    }
    let twos = c1.vertices.iter().filter(|&&v| g.degree(v) == 2).count();
    twos >= 2 || (twos >= 1 && negative_avoiding(idx, &v1) <= 2)
}

/// Fish, or a good cycle `c0` and a negative cycle `c1` meeting the pair
/// requirements. Tries the good theta-pair construction first, then every
/// candidate pair.
pub fn beast_pair(g: &SignedGraph) -> Result<BeastOutcome> {
    if let Some(cert) = recognize_fish(g) {
        return Ok(BeastOutcome::Fish(cert));
    }
    let idx = CycleIndex::new(g, CYCLE_LIMIT)?;
    if let Some(pair) = find_good_theta_pair(g) {
        let (c0, c1) = pair.cycles_through_q(g);
        if pair_conditions(g, &idx, &c0, &c1) {
            return Ok(BeastOutcome::Pair { c0, c1 });
        }
    }
    let good: Vec<usize> = ranked_indices(g, &idx, |i| {
        !idx.is_negative(i) && idx.cycle(i).vertices.iter().filter(|&&v| g.degree(v) == 2).count() >= 2
    });
    for c1 in (0..idx.len()).filter(|&i| idx.is_negative(i)) {
        for &c0 in &good {
            if pair_conditions(g, &idx, idx.cycle(c0), idx.cycle(c1)) {
                return Ok(BeastOutcome::Pair { c0: idx.cycle(c0).clone(), c1: idx.cycle(c1).clone() });
            }
        }
    }
    Err(Error::invariant("fragile graph with neither a fish nor a valid cycle pair"))
}

fn ranked_indices(g: &SignedGraph, idx: &CycleIndex, keep: impl Fn(usize) -> bool) -> Vec<usize> {
    let mut out: Vec<usize> = (0..idx.len()).filter(|&i| keep(i)).collect();
    out.sort_by_key(|&i| (idx.cycle(i).vertices.iter().filter(|&&v| g.degree(v) >= 3).count(), idx.cycle(i).len()));
    out
}

/// Candidate generalized cycles of the leaf block `h` of `gp`. Vertices count
/// when their degree in `gp` is at most one; positive cycles need two
/// degree-2 vertices in `h`; negative cycles (when `usable`) may have at most
/// one vertex whose degree in `gp` is not two.
fn candidates(gp: &SignedGraph, h: &SignedGraph, usable: bool) -> Vec<GeneralizedCycle> {
    let mut out: Vec<GeneralizedCycle> =
        h.vertices().filter(|&v| gp.degree(v) <= 1).map(GeneralizedCycle::Vertex).collect();
    let en = enumerate_cycles(h, CYCLE_LIMIT);
    let mut cycles: Vec<Cycle> = en
        .cycles
        .into_iter()
        .zip(en.signs)
        .filter(|(c, s)| {
            if s.is_negative() {
                usable && c.vertices.iter().filter(|&&v| gp.degree(v) != 2).count() <= 1
            } else {
                c.vertices.iter().filter(|&&v| h.degree(v) == 2).count() >= 2
            }
        })
        .map(|(c, _)| c)
        .collect();
    cycles.sort_by_key(|c| (c.vertices.iter().filter(|&&v| gp.degree(v) >= 3).count(), c.len()));
    out.extend(cycles.into_iter().map(GeneralizedCycle::Cycle));
    out
}

fn describe(list: &[CycleRecord]) -> String {
    let cl = CycleList { records: list.to_vec() };
    cl.trace_lines().join("; ")
}

/// Runs the selection on a cubic 3-edge-connected graph with two disjoint
/// negative cycles. Deterministic.
pub fn run_csa(g: &SignedGraph) -> Result<CycleList> {
    let first = preprocess_first(g)?;
    let mut list = Vec::new();
    let c1 = match first {
        FirstCycle::Spanning(a, b) => {
            list.push(CycleRecord::from_cycle(CycleKind::NegativeSpecial, SelectionStep::PreprocessSpanning, &a));
            list.push(CycleRecord::from_cycle(CycleKind::NegativeSpecial, SelectionStep::PreprocessSpanning, &b));
            return Ok(CycleList { records: list });
        }
        FirstCycle::Theta(c, _) => c,
    };
    list.push(CycleRecord::from_cycle(CycleKind::NegativeSpecial, SelectionStep::PreprocessTheta, &c1));
    let mut removed = c1.vertex_set(g.vertex_bound());
    let mut parity_done = false;
    loop {
        let gp = g.without(&removed);
        if gp.vertex_count() == 0 {
            break;
        }
        let theta = contains_unbalanced_theta(&gp);
        if parity_done && theta {
            return Err(Error::invariant(format!("unbalanced theta survives the parity step: {}", describe(&list))));
        }
        let rec = step(&gp, theta, &list).map_err(|e| match e {
            Error::Invariant(m) => Error::Invariant(format!("{m}; selected so far: {}", describe(&list))),
            other => other,
        })?;
        if rec.step.is_parity_step() {
            if parity_done {
                return Err(Error::invariant("parity step reached twice"));
            }
            parity_done = true;
        }
        rec.vertices.iter().for_each(|&v| removed.insert(v));
        list.push(rec);
    }
    Ok(CycleList { records: list })
}

fn step(gp: &SignedGraph, theta: bool, list: &[CycleRecord]) -> Result<CycleRecord> {
    let bound = gp.vertex_bound();
    let tree = block_cut_tree(gp);
    let leaves = tree.leaf_blocks();
    let pick = leaves
        .iter()
        .copied()
        .find(|&b| theta && contains_unbalanced_theta(&gp.without(&tree.blocks[b].vertex_set(bound))))
        .or_else(|| {
            // otherwise a leaf block with a theta-keeping good cycle, if any
            leaves.iter().copied().find(|&b| {
                theta
                    && candidates(gp, &tree.blocks[b].subgraph(gp), false)
                        .iter()
                        .any(|c| contains_unbalanced_theta(&gp.without(&c.vertex_set(bound))))
            })
        })
        .or_else(|| leaves.first().copied())
        .ok_or_else(|| Error::invariant("residual graph has no leaf block"))?;
    let block = &tree.blocks[pick];
    let h = block.subgraph(gp);

    if !theta {
        let c = candidates(gp, &h, true)
            .into_iter()
            .next()
            .ok_or_else(|| Error::invariant(format!("leaf block {:?} has no usable cycle", block.vertices)))?;
        let kind = if c.is_negative(gp) { CycleKind::NegativeOrdinary } else { CycleKind::Positive };
        return Ok(CycleRecord::from_generalized(kind, SelectionStep::Usable, &c));
    }

    if block.is_cycle(gp) {
        if let Some(c) = Cycle::from_edge_set(gp, &block.edges).filter(|c| c.is_negative(gp)) {
            return Ok(CycleRecord::from_cycle(CycleKind::NegativeOrdinary, SelectionStep::NegativeLeaf, &c));
        }
    }

    let good = candidates(gp, &h, false);
    if good.is_empty() {
        return Err(Error::invariant(format!("leaf block {:?} has no good cycle", block.vertices)));
    }
    if let Some(c) = good.iter().find(|c| contains_unbalanced_theta(&gp.without(&c.vertex_set(bound)))) {
        return Ok(CycleRecord::from_generalized(CycleKind::Positive, SelectionStep::ThetaPreserving, c));
    }

    if tree.blocks.len() != 1 || block.vertices.len() != gp.vertex_count() {
        return Err(Error::invariant("fragile residual graph is not 2-connected"));
    }
    let k = list.iter().filter(|r| r.is_even_ordinary()).count();
    match beast_pair(gp)? {
        BeastOutcome::Fish(cert) => {
            if k % 2 == 1 {
                let mut vertices: Vec<VertexId> = gp.vertices().collect();
                vertices.sort_unstable();
                let mut edges: Vec<EdgeId> = gp.edge_ids().collect();
                edges.sort_unstable();
                Ok(CycleRecord { kind: CycleKind::Fish, step: SelectionStep::FishWhole, vertices, edges, fish: Some(cert) })
            } else {
                let c = cert.good_cycle(gp);
                Ok(CycleRecord::from_cycle(CycleKind::Positive, SelectionStep::FishGoodCycle, &c))
            }
        }
        BeastOutcome::Pair { c0, c1 } => {
            let idx = CycleIndex::new(gp, CYCLE_LIMIT)?;
            let j = even_negative_avoiding(&idx, &c0.vertex_set(bound)).len();
            if (k + j) % 2 == 0 {
                Ok(CycleRecord::from_cycle(CycleKind::NegativeSpecial, SelectionStep::PairSpecial, &c1))
            } else {
                Ok(CycleRecord::from_cycle(CycleKind::Positive, SelectionStep::PairPositive, &c0))
            }
        }
    }
}
