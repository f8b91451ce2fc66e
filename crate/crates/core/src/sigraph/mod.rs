//! Signed multigraphs with bidirected orientations.
//!
//! Vertex and edge ids are dense `usize` values that are never reused once
//! allocated, so a graph can lose vertices (as the residual graphs of the
//! cycle selection do) without renumbering anything. Loops and parallel
//! edges are allowed everywhere; a loop counts twice towards the degree.

mod balance;
mod connectivity;
mod flow;
pub mod format;
mod ops;

use fixedbitset::FixedBitSet;

pub use balance::{balance, is_balanced, is_flow_admissible, negativeness_at_most, Admissibility, BalanceCertificate};
pub use connectivity::{components, edge_connectivity, is_two_edge_connected};
pub use flow::{
    boundary_at, verify_flow, Dir, EdgeMap, FlowValue, FlowVerdict, FlowViolation, IntFlow,
    Orientation, Z3Assignment, Z3,
};
pub use ops::{
    contract_edge, reverse_edge, smooth_degree2_vertex, subdivide_edge, switch_at_vertex,
    switch_set, uncontract_at,
};

pub type VertexId = usize;
pub type EdgeId = usize;

/// Vertex subset over a graph's id range.
pub type VertexSet = FixedBitSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn flipped(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Negative
    }

    /// Product in the two-element group.
    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Positive => '+',
            Sign::Negative => '-',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeRecord {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
    pub sign: Sign,
}

impl EdgeRecord {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    pub fn ends(&self) -> [VertexId; 2] {
        [self.u, self.v]
    }

    pub fn touches(&self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }

    /// The end opposite `x`; for a loop this is `x` itself.
    pub fn other(&self, x: VertexId) -> VertexId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// A signed multigraph.
#[derive(Clone, Debug, Default)]
pub struct SignedGraph {
    alive: Vec<bool>,
    edges: Vec<Option<EdgeRecord>>,
    // each edge listed once per distinct end vertex, sorted by id
    incidence: Vec<Vec<EdgeId>>,
}

impl PartialEq for SignedGraph {
    fn eq(&self, other: &Self) -> bool {
        let trim = |v: &[bool]| v.iter().rposition(|&a| a).map_or(0, |i| i + 1);
        let trim_e = |v: &[Option<EdgeRecord>]| v.iter().rposition(|e| e.is_some()).map_or(0, |i| i + 1);
        self.alive[..trim(&self.alive)] == other.alive[..trim(&other.alive)]
            && self.edges[..trim_e(&self.edges)] == other.edges[..trim_e(&other.edges)]
    }
}

impl Eq for SignedGraph {}

impl SignedGraph {
    /// Graph on vertices `0..n` with no edges.
    pub fn new(n: usize) -> Self {
        SignedGraph {
            alive: vec![true; n],
            edges: Vec::new(),
            incidence: vec![Vec::new(); n],
        }
    }

    /// Convenience constructor from `(u, v, sign)` triples; edge ids follow
    /// the slice order.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId, Sign)]) -> Self {
        let mut g = SignedGraph::new(n);
        for &(u, v, s) in edges {
            g.add_edge(u, v, s);
        }
        g
    }

    /// One past the largest vertex id ever allocated.
    pub fn vertex_bound(&self) -> usize {
        self.alive.len()
    }

    /// One past the largest edge id ever allocated.
    pub fn edge_bound(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_count() == 0
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.alive.get(v).copied().unwrap_or(false)
    }

    pub fn has_edge(&self, e: EdgeId) -> bool {
        matches!(self.edges.get(e), Some(Some(_)))
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.alive.iter().enumerate().filter(|(_, &a)| a).map(|(i, _)| i)
    }

    pub fn edges(&self) -> impl Iterator<Item = &EdgeRecord> + '_ {
        self.edges.iter().flatten()
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges().map(|e| e.id)
    }

    /// Panics on an unknown id; use [`SignedGraph::try_edge`] for untrusted input.
    pub fn edge(&self, e: EdgeId) -> &EdgeRecord {
        self.edges[e].as_ref().expect("edge id not present")
    }

    pub fn try_edge(&self, e: EdgeId) -> Option<&EdgeRecord> {
        self.edges.get(e).and_then(|x| x.as_ref())
    }

    pub fn sign(&self, e: EdgeId) -> Sign {
        self.edge(e).sign
    }

    /// Incident edge ids, each once (loops included once), ascending.
    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incidence[v]
            .iter()
            .map(|&e| if self.edge(e).is_loop() { 2 } else { 1 })
            .sum()
    }

    /// Neighbours across non-loop edges, with multiplicity.
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = (EdgeId, VertexId)> + '_ {
        self.incidence[v].iter().filter_map(move |&e| {
            let r = self.edge(e);
            (!r.is_loop()).then(|| (e, r.other(v)))
        })
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn is_cubic(&self) -> bool {
        self.vertices().all(|v| self.degree(v) == 3)
    }

    pub fn is_subcubic(&self) -> bool {
        self.vertices().all(|v| self.degree(v) <= 3)
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.alive.push(true);
        self.incidence.push(Vec::new());
        self.alive.len() - 1
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId, sign: Sign) -> EdgeId {
        let id = self.edges.len();
        self.insert_edge(id, u, v, sign);
        id
    }

    /// Inserts an edge under a caller-chosen id. Panics if the id is taken
    /// or an end is missing.
    pub fn insert_edge(&mut self, id: EdgeId, u: VertexId, v: VertexId, sign: Sign) {
        assert!(self.has_vertex(u) && self.has_vertex(v), "edge end not in graph");
        if self.edges.len() <= id {
            self.edges.resize(id + 1, None);
        }
        assert!(self.edges[id].is_none(), "edge id {id} already used");
        self.edges[id] = Some(EdgeRecord { id, u, v, sign });
        Self::attach(&mut self.incidence[u], id);
        if u != v {
            Self::attach(&mut self.incidence[v], id);
        }
    }

    fn attach(list: &mut Vec<EdgeId>, e: EdgeId) {
        let pos = list.partition_point(|&x| x < e);
        list.insert(pos, e);
    }

    fn detach(list: &mut Vec<EdgeId>, e: EdgeId) {
        if let Ok(pos) = list.binary_search(&e) {
            list.remove(pos);
        }
    }

    pub fn remove_edge(&mut self, e: EdgeId) -> EdgeRecord {
        let rec = self.edges[e].take().expect("edge id not present");
        Self::detach(&mut self.incidence[rec.u], e);
        Self::detach(&mut self.incidence[rec.v], e);
        rec
    }

    /// Removes `v` and all edges touching it.
    pub fn remove_vertex(&mut self, v: VertexId) {
        for e in self.incidence[v].clone() {
            self.remove_edge(e);
        }
        self.alive[v] = false;
    }

    pub fn set_sign(&mut self, e: EdgeId, sign: Sign) {
        self.edges[e].as_mut().expect("edge id not present").sign = sign;
    }

    /// Re-ends an edge; the position of each end (first/second) is kept, so
    /// an [`Orientation`] entry stays attached to the same end.
    pub fn set_ends(&mut self, e: EdgeId, u: VertexId, v: VertexId) {
        let old = self.edges[e].clone().expect("edge id not present");
        Self::detach(&mut self.incidence[old.u], e);
        Self::detach(&mut self.incidence[old.v], e);
        let rec = self.edges[e].as_mut().unwrap();
        rec.u = u;
        rec.v = v;
        Self::attach(&mut self.incidence[u], e);
        if u != v {
            Self::attach(&mut self.incidence[v], e);
        }
    }

    pub fn vertex_set(&self) -> VertexSet {
        let mut s = VertexSet::with_capacity(self.vertex_bound());
        for v in self.vertices() {
            s.insert(v);
        }
        s
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::with_capacity(self.vertex_bound())
    }

    /// Induced subgraph on the vertices in `keep`, ids preserved.
    pub fn induced(&self, keep: &VertexSet) -> SignedGraph {
        let mut h = SignedGraph {
            alive: vec![false; self.vertex_bound()],
            edges: vec![None; self.edge_bound()],
            incidence: vec![Vec::new(); self.vertex_bound()],
        };
        for v in self.vertices() {
            if keep.contains(v) {
                h.alive[v] = true;
            }
        }
        for e in self.edges() {
            if h.alive[e.u] && h.alive[e.v] {
                h.edges[e.id] = Some(e.clone());
                h.incidence[e.u].push(e.id);
                if !e.is_loop() {
                    h.incidence[e.v].push(e.id);
                }
            }
        }
        h
    }

    /// `self - removed` as an induced subgraph.
    pub fn without(&self, removed: &VertexSet) -> SignedGraph {
        let mut keep = self.vertex_set();
        keep.difference_with(removed);
        self.induced(&keep)
    }

    /// Number of edges with exactly one end in `x`.
    pub fn cut_size(&self, x: &VertexSet) -> usize {
        self.edges()
            .filter(|e| !e.is_loop() && x.contains(e.u) != x.contains(e.v))
            .count()
    }

    /// Edges with one end in `a` and the other in `b` (sets assumed disjoint).
    pub fn edges_between<'a>(
        &'a self,
        a: &'a VertexSet,
        b: &'a VertexSet,
    ) -> impl Iterator<Item = &'a EdgeRecord> + 'a {
        self.edges().filter(move |e| {
            (a.contains(e.u) && b.contains(e.v)) || (a.contains(e.v) && b.contains(e.u))
        })
    }

    /// Number of negative edges.
    pub fn negative_count(&self) -> usize {
        self.edges().filter(|e| e.sign.is_negative()).count()
    }
}

/// A simple cycle given as a closed walk: `edges[i]` joins `vertices[i]` and
/// `vertices[(i + 1) % len]`. A loop is a cycle of length one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cycle {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn sign(&self, g: &SignedGraph) -> Sign {
        self.edges
            .iter()
            .fold(Sign::Positive, |acc, &e| acc.times(g.sign(e)))
    }

    pub fn is_negative(&self, g: &SignedGraph) -> bool {
        self.sign(g).is_negative()
    }

    pub fn vertex_set(&self, bound: usize) -> VertexSet {
        let mut s = VertexSet::with_capacity(bound);
        for &v in &self.vertices {
            s.insert(v);
        }
        s
    }

    /// Checks that the walk is a simple closed cycle of `g`.
    pub fn is_valid_in(&self, g: &SignedGraph) -> bool {
        let n = self.edges.len();
        if n == 0 || self.vertices.len() != n {
            return false;
        }
        let mut seen_v = std::collections::HashSet::new();
        let mut seen_e = std::collections::HashSet::new();
        for i in 0..n {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
            let Some(rec) = g.try_edge(self.edges[i]) else {
                return false;
            };
            let ok = (rec.u == a && rec.v == b) || (rec.u == b && rec.v == a);
            if !ok || !seen_v.insert(a) || !seen_e.insert(self.edges[i]) {
                return false;
            }
            if !g.has_vertex(a) {
                return false;
            }
        }
        true
    }

    /// Rebuilds a cycle from an unordered edge set forming one simple cycle.
    pub fn from_edge_set(g: &SignedGraph, edges: &[EdgeId]) -> Option<Cycle> {
        if edges.is_empty() {
            return None;
        }
        if edges.len() == 1 {
            let r = g.try_edge(edges[0])?;
            return r.is_loop().then(|| Cycle { vertices: vec![r.u], edges: vec![r.id] });
        }
        let mut remaining: Vec<EdgeId> = edges.to_vec();
        let first = g.try_edge(remaining.remove(0))?;
        let start = first.u;
        let mut vertices = vec![start];
        let mut walk = vec![first.id];
        let mut cur = first.v;
        while !remaining.is_empty() {
            let pos = remaining
                .iter()
                .position(|&e| g.try_edge(e).is_some_and(|r| r.touches(cur) && !r.is_loop()))?;
            let e = remaining.remove(pos);
            vertices.push(cur);
            walk.push(e);
            cur = g.edge(e).other(cur);
        }
        let c = Cycle { vertices, edges: walk };
        (cur == start && c.is_valid_in(g)).then_some(c)
    }
}
