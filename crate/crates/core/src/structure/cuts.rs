use crate::sigraph::{components, Cycle, EdgeId, SignedGraph, VertexSet};

/// An edge cut `δ(side)`; `edges` sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeCut {
    pub edges: Vec<EdgeId>,
    pub side: VertexSet,
}

/// True when `c` has an edge with both ends in `x` and one with both ends
/// outside.
pub fn straddles(g: &SignedGraph, x: &VertexSet, c: &Cycle) -> bool {
    let inside = |e: EdgeId| {
        let r = g.edge(e);
        (x.contains(r.u), x.contains(r.v))
    };
    c.edges.iter().any(|&e| inside(e) == (true, true)) && c.edges.iter().any(|&e| inside(e) == (false, false))
}

/// Sides `X` with `δ(X)` exactly `removed`, as unions of the components of
/// `g - removed`, filtered by `accept`. Each cut is reported once, by the
/// side avoiding the lowest vertex.
fn sides_for(g: &SignedGraph, removed: &[EdgeId], mut accept: impl FnMut(&VertexSet) -> bool) -> Option<VertexSet> {
    let mut h = g.clone();
    for &e in removed {
        if g.edge(e).is_loop() {
            return None;
        }
        h.remove_edge(e);
    }
    let comps = components(&h);
    if comps.len() < 2 || comps.len() > 16 {
        return None;
    }
    // component 0 holds the lowest vertex and stays outside
    for mask in 1u32..(1 << (comps.len() - 1)) {
        let mut side = g.empty_set();
        for (k, c) in comps.iter().enumerate().skip(1) {
            if (mask >> (k - 1)) & 1 == 1 {
                c.iter().for_each(|&v| side.insert(v));
            }
        }
        let exact = removed.iter().all(|&e| {
            let r = g.edge(e);
            side.contains(r.u) != side.contains(r.v)
        });
        if exact && accept(&side) {
            return Some(side);
        }
    }
    None
}

fn combinations(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return;
    }
    loop {
        if !visit(&idx) {
            return;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Every edge set of size `k` that is exactly the cut between two connected
/// sides, edge sets in lexicographic order.
pub fn cuts_of_size(g: &SignedGraph, k: usize) -> Vec<EdgeCut> {
    let edges: Vec<EdgeId> = g.edges().filter(|e| !e.is_loop()).map(|e| e.id).collect();
    let mut out = Vec::new();
    combinations(edges.len(), k, |idx| {
        let removed: Vec<EdgeId> = idx.iter().map(|&i| edges[i]).collect();
        let mut h = g.clone();
        removed.iter().for_each(|&e| {
            h.remove_edge(e);
        });
        let comps = components(&h);
        if comps.len() == 2 {
            let mut side = g.empty_set();
            comps[1].iter().for_each(|&v| side.insert(v));
            if g.cut_size(&side) == k {
                out.push(EdgeCut { edges: removed, side });
            }
        }
        true
    });
    out
}

/// A cut of size three straddled by `c`.
pub fn straddled_three_cut(g: &SignedGraph, c: &Cycle) -> Option<EdgeCut> {
    let others: Vec<EdgeId> = g.edge_ids().filter(|e| !c.edges.contains(e)).collect();
    let n = c.len();
    for i in 0..n {
        for j in i + 1..n {
            for &f in &others {
                let mut removed = vec![c.edges[i], c.edges[j], f];
                removed.sort_unstable();
                if let Some(side) = sides_for(g, &removed, |x| straddles(g, x, c)) {
                    return Some(EdgeCut { edges: removed, side });
                }
            }
        }
    }
    None
}

/// A cut of size four straddled by both (vertex-disjoint) cycles.
pub fn doubly_straddled_four_cut(g: &SignedGraph, c1: &Cycle, c2: &Cycle) -> Option<EdgeCut> {
    let (n1, n2) = (c1.len(), c2.len());
    for i in 0..n1 {
        for j in i + 1..n1 {
            for k in 0..n2 {
                for l in k + 1..n2 {
                    let mut removed = vec![c1.edges[i], c1.edges[j], c2.edges[k], c2.edges[l]];
                    removed.sort_unstable();
                    removed.dedup();
                    if removed.len() != 4 {
                        continue;
                    }
                    if let Some(side) = sides_for(g, &removed, |x| straddles(g, x, c1) && straddles(g, x, c2)) {
                        return Some(EdgeCut { edges: removed, side });
                    }
                }
            }
        }
    }
    None
}
