use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::sigraph::{balance, BalanceCertificate, Cycle, EdgeId, Sign, SignedGraph, VertexId, VertexSet};

#[derive(Clone, Debug)]
pub struct CycleEnumeration {
    /// Shortest first, ties broken by the sorted edge-id lists.
    pub cycles: Vec<Cycle>,
    pub signs: Vec<Sign>,
    /// The limit was hit; `cycles` is incomplete (but still sorted).
    pub truncated: bool,
}

struct Enumerator<'a> {
    g: &'a SignedGraph,
    start: VertexId,
    on_path: Vec<bool>,
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
    out: Vec<Cycle>,
    limit: usize,
}

impl Enumerator<'_> {
    fn dfs(&mut self, cur: VertexId) -> bool {
        for &e in self.g.incident(cur) {
            let rec = self.g.edge(e);
            if rec.is_loop() {
                continue;
            }
            let w = rec.other(cur);
            if w == self.start {
                // each cycle is walked in both directions; keep one
                if !self.edges.is_empty() && e != self.edges[0] && self.edges[0] < e {
                    let mut edges = self.edges.clone();
                    edges.push(e);
                    self.out.push(Cycle { vertices: self.vertices.clone(), edges });
                    if self.out.len() > self.limit {
                        return false;
                    }
                }
            } else if w > self.start && !self.on_path[w] {
                self.on_path[w] = true;
                self.vertices.push(w);
                self.edges.push(e);
                let go_on = self.dfs(w);
                self.vertices.pop();
                self.edges.pop();
                self.on_path[w] = false;
                if !go_on {
                    return false;
                }
            }
        }
        true
    }
}

fn sort_key(c: &Cycle) -> (usize, Vec<EdgeId>) {
    let mut e = c.edges.clone();
    e.sort_unstable();
    (e.len(), e)
}

/// Every simple cycle once (loops are cycles of length one), up to `limit`.
pub fn enumerate_cycles(g: &SignedGraph, limit: usize) -> CycleEnumeration {
    let mut out: Vec<Cycle> = g
        .edges()
        .filter(|e| e.is_loop())
        .map(|e| Cycle { vertices: vec![e.u], edges: vec![e.id] })
        .collect();
    let mut truncated = out.len() > limit;
    for s in g.vertices() {
        if truncated {
            break;
        }
        let mut en = Enumerator {
            g,
            start: s,
            on_path: vec![false; g.vertex_bound()],
            vertices: vec![s],
            edges: Vec::new(),
            out: std::mem::take(&mut out),
            limit,
        };
        en.on_path[s] = true;
        truncated = !en.dfs(s);
        out = en.out;
    }
    out.sort_by_cached_key(sort_key);
    if out.len() > limit {
        out.truncate(limit);
        truncated = true;
    }
    let signs = out.iter().map(|c| c.sign(g)).collect();
    CycleEnumeration { cycles: out, signs, truncated }
}

/// All cycles of a graph with vertex and edge masks, for repeated queries on
/// induced subgraphs.
#[derive(Clone, Debug)]
pub struct CycleIndex {
    cycles: Vec<Cycle>,
    signs: Vec<Sign>,
    vmask: Vec<VertexSet>,
    emask: Vec<FixedBitSet>,
}

impl CycleIndex {
    /// Fails with a budget error when `g` has more than `limit` cycles.
    pub fn new(g: &SignedGraph, limit: usize) -> Result<Self> {
        let en = enumerate_cycles(g, limit);
        if en.truncated {
            return Err(Error::Budget(format!("more than {limit} cycles")));
        }
        let vmask = en.cycles.iter().map(|c| c.vertex_set(g.vertex_bound())).collect();
        let emask = en
            .cycles
            .iter()
            .map(|c| {
                let mut m = FixedBitSet::with_capacity(g.edge_bound());
                for &e in &c.edges {
                    m.insert(e);
                }
                m
            })
            .collect();
        Ok(CycleIndex { cycles: en.cycles, signs: en.signs, vmask, emask })
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn cycle(&self, i: usize) -> &Cycle {
        &self.cycles[i]
    }

    pub fn sign(&self, i: usize) -> Sign {
        self.signs[i]
    }

    pub fn is_negative(&self, i: usize) -> bool {
        self.signs[i].is_negative()
    }

    pub fn vertex_mask(&self, i: usize) -> &VertexSet {
        &self.vmask[i]
    }

    pub fn edge_mask(&self, i: usize) -> &FixedBitSet {
        &self.emask[i]
    }

    /// Indices of the cycles lying in `h`, a subgraph of the indexed graph
    /// (vertices and edges checked), in index order.
    pub fn within<'a>(&'a self, h: &'a SignedGraph) -> impl Iterator<Item = usize> + 'a {
        (0..self.cycles.len()).filter(move |&i| {
            self.cycles[i].vertices.iter().all(|&v| h.has_vertex(v))
                && self.cycles[i].edges.iter().all(|&e| h.has_edge(e))
        })
    }

    pub fn vertex_disjoint(&self, i: usize, j: usize) -> bool {
        self.vmask[i].is_disjoint(&self.vmask[j])
    }
}

pub fn find_negative_cycle(g: &SignedGraph) -> Option<Cycle> {
    match balance(g) {
        BalanceCertificate::WitnessNegativeCycle(c) => Some(c),
        BalanceCertificate::SwitchingSet(_) => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DisjointPair {
    Found(Cycle, Cycle),
    None,
    /// Cycle enumeration hit its limit before a pair was found.
    Unknown,
}

/// First pair (in enumeration order) of negative cycles that share no vertex
/// (or, with `vertex_disjoint = false`, no edge).
pub fn find_two_disjoint_negative_cycles(g: &SignedGraph, vertex_disjoint: bool, limit: usize) -> DisjointPair {
    let en = enumerate_cycles(g, limit);
    let neg: Vec<usize> = (0..en.cycles.len()).filter(|&i| en.signs[i].is_negative()).collect();
    let vmask: Vec<VertexSet> = neg.iter().map(|&i| en.cycles[i].vertex_set(g.vertex_bound())).collect();
    for a in 0..neg.len() {
        for b in a + 1..neg.len() {
            let (ca, cb) = (&en.cycles[neg[a]], &en.cycles[neg[b]]);
            let disjoint = if vertex_disjoint {
                vmask[a].is_disjoint(&vmask[b])
            } else {
                !ca.edges.iter().any(|e| cb.edges.contains(e))
            };
            if disjoint {
                return DisjointPair::Found(ca.clone(), cb.clone());
            }
        }
    }
    if en.truncated {
        DisjointPair::Unknown
    } else {
        DisjointPair::None
    }
}
