use super::cycles::enumerate_cycles;
use super::CYCLE_LIMIT;
use crate::error::{Error, Result};
use crate::sigraph::{components, edge_connectivity, Cycle, EdgeId, SignedGraph, VertexId, VertexSet};

/// Obstruction to a cycle through three given vertices: `x[i]` lies in
/// `xs[i]`, each `xs[i]` sends one edge to each `ys[j]`, and no other edges
/// cross between parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WMPartition {
    pub ys: [Vec<VertexId>; 2],
    pub xs: [Vec<VertexId>; 3],
}

impl WMPartition {
    pub fn check(&self, g: &SignedGraph, x: [VertexId; 3]) -> bool {
        let mut part = vec![usize::MAX; g.vertex_bound()];
        for (i, set) in self.ys.iter().chain(self.xs.iter()).enumerate() {
            for &v in set {
                if !g.has_vertex(v) || part[v] != usize::MAX {
                    return false;
                }
                part[v] = i;
            }
        }
        if g.vertices().any(|v| part[v] == usize::MAX) || (0..3).any(|i| part[x[i]] != i + 2) {
            return false;
        }
        let mut count = [[0usize; 5]; 5];
        for e in g.edges() {
            let (a, b) = (part[e.u], part[e.v]);
            if a != b {
                count[a.min(b)][a.max(b)] += 1;
            }
        }
        (0..2).all(|j| (2..5).all(|i| count[j][i] == 1)) && count[0][1] == 0 && (2..5).all(|i| (i + 1..5).all(|k| count[i][k] == 0))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ThreeVertexOutcome {
    Cycle(Cycle),
    Partition(WMPartition),
}

impl ThreeVertexOutcome {
    pub fn check(&self, g: &SignedGraph, x: [VertexId; 3]) -> bool {
        match self {
            ThreeVertexOutcome::Cycle(c) => c.is_valid_in(g) && x.iter().all(|v| c.vertices.contains(v)),
            ThreeVertexOutcome::Partition(p) => p.check(g, x),
        }
    }
}

/// Sets `X` containing `x` with exactly two edges leaving: the component of
/// `x` after deleting two edges, when both edges leave it.
fn two_cut_sides(g: &SignedGraph, x: VertexId) -> Vec<VertexSet> {
    let edges: Vec<EdgeId> = g.edges().filter(|e| !e.is_loop()).map(|e| e.id).collect();
    let mut out: Vec<VertexSet> = Vec::new();
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            let mut h = g.clone();
            h.remove_edge(edges[i]);
            h.remove_edge(edges[j]);
            let comp = components(&h).into_iter().find(|c| c.contains(&x)).unwrap();
            let mut s = g.empty_set();
            comp.iter().for_each(|&v| s.insert(v));
            if g.cut_size(&s) == 2 && !out.contains(&s) {
                out.push(s);
            }
        }
    }
    out
}

fn find_partition(g: &SignedGraph, x: [VertexId; 3]) -> Option<WMPartition> {
    let cands: Vec<Vec<VertexSet>> = x.iter().map(|&v| two_cut_sides(g, v)).collect();
    for x1 in &cands[0] {
        for x2 in cands[1].iter().filter(|s| s.is_disjoint(x1)) {
            for x3 in cands[2].iter().filter(|s| s.is_disjoint(x1) && s.is_disjoint(x2)) {
                let mut used = x1.clone();
                used.union_with(x2);
                used.union_with(x3);
                let rest = g.without(&used);
                let comps = components(&rest);
                if comps.len() > 12 {
                    continue;
                }
                for mask in 0u32..(1 << comps.len()) {
                    let mut ys = [Vec::new(), Vec::new()];
                    for (k, c) in comps.iter().enumerate() {
                        ys[((mask >> k) & 1) as usize].extend(c.iter().copied());
                    }
                    ys.iter_mut().for_each(|y| y.sort_unstable());
                    let set = |s: &VertexSet| s.ones().collect::<Vec<_>>();
                    let p = WMPartition { ys, xs: [set(x1), set(x2), set(x3)] };
                    if p.check(g, x) {
                        return Some(p);
                    }
                }
            }
        }
    }
    None
}

/// A cycle through `x1, x2, x3` or the partition proving none exists.
pub fn cycle_through_three_vertices(g: &SignedGraph, x1: VertexId, x2: VertexId, x3: VertexId) -> Result<ThreeVertexOutcome> {
    let x = [x1, x2, x3];
    if x1 == x2 || x2 == x3 || x1 == x3 || x.iter().any(|&v| !g.has_vertex(v)) {
        return Err(Error::Argument("three distinct vertices of the graph are required".into()));
    }
    if !g.is_subcubic() || g.vertex_count() < 3 || edge_connectivity(g) < 2 || !super::block_cut_tree(g).cut_vertices.is_empty() {
        return Err(Error::Argument("graph must be 2-connected and subcubic".into()));
    }
    let en = enumerate_cycles(g, CYCLE_LIMIT);
    if let Some(c) = en.cycles.into_iter().find(|c| x.iter().all(|v| c.vertices.contains(v))) {
        return Ok(ThreeVertexOutcome::Cycle(c));
    }
    if en.truncated {
        return Err(Error::Budget("cycle enumeration truncated".into()));
    }
    find_partition(g, x)
        .map(ThreeVertexOutcome::Partition)
        .ok_or_else(|| Error::invariant("no cycle through the three vertices and no partition found"))
}
