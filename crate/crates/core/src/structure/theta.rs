use std::collections::VecDeque;

use super::blocks::block_cut_tree;
use super::cycles::enumerate_cycles;
use crate::sigraph::{balance, BalanceCertificate, Cycle, EdgeId, SignedGraph, VertexId};

/// Two branch vertices joined by three internally disjoint paths. Each path
/// runs from `ends[0]` to `ends[1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaSubgraph {
    pub ends: [VertexId; 2],
    pub branches: [(Vec<VertexId>, Vec<EdgeId>); 3],
}

impl ThetaSubgraph {
    pub fn edges(&self) -> Vec<EdgeId> {
        let mut e: Vec<EdgeId> = self.branches.iter().flat_map(|b| b.1.iter().copied()).collect();
        e.sort_unstable();
        e
    }

    /// Structural re-check against `g`, plus unbalance.
    pub fn is_unbalanced_theta_in(&self, g: &SignedGraph) -> bool {
        let [a, b] = self.ends;
        if a == b {
            return false;
        }
        let mut inner = std::collections::HashSet::new();
        let mut used = std::collections::HashSet::new();
        for (vs, es) in &self.branches {
            if es.is_empty() || vs.len() != es.len() + 1 || vs[0] != a || vs[vs.len() - 1] != b {
                return false;
            }
            for (i, &e) in es.iter().enumerate() {
                let Some(r) = g.try_edge(e) else { return false };
                let (x, y) = (vs[i], vs[i + 1]);
                if !((r.u == x && r.v == y) || (r.u == y && r.v == x)) || !used.insert(e) {
                    return false;
                }
            }
            for &v in &vs[1..vs.len() - 1] {
                if v == a || v == b || !inner.insert(v) {
                    return false;
                }
            }
        }
        let sign = |i: usize| self.branches[i].1.iter().filter(|&&e| g.sign(e).is_negative()).count() % 2;
        // unbalanced iff the three branches do not all share a parity
        !(sign(0) == sign(1) && sign(1) == sign(2))
    }
}

/// Fast test: some block is unbalanced and is not a single cycle.
pub fn contains_unbalanced_theta(g: &SignedGraph) -> bool {
    let t = block_cut_tree(g);
    t.blocks
        .iter()
        .any(|b| !b.is_cycle(g) && b.edges.len() > 1 && !balance(&b.subgraph(g)).is_balanced())
}

/// An unbalanced theta of `g`, if one exists: a negative cycle of an
/// unbalanced non-cycle block together with an ear.
pub fn has_unbalanced_theta(g: &SignedGraph) -> Option<ThetaSubgraph> {
    let t = block_cut_tree(g);
    for b in &t.blocks {
        if b.is_cycle(g) || b.edges.len() < 2 {
            continue;
        }
        let h = b.subgraph(g);
        let BalanceCertificate::WitnessNegativeCycle(c) = balance(&h) else {
            continue;
        };
        return Some(theta_from_ear(&h, &c));
    }
    None
}

/// `h` is 2-connected and strictly larger than the cycle `c`.
fn theta_from_ear(h: &SignedGraph, c: &Cycle) -> ThetaSubgraph {
    let n = h.vertex_bound();
    let mut on_c = vec![false; n];
    for &v in &c.vertices {
        on_c[v] = true;
    }
    let in_c: std::collections::HashSet<EdgeId> = c.edges.iter().copied().collect();
    let (start, first) = c
        .vertices
        .iter()
        .find_map(|&v| h.incident(v).iter().find(|&&e| !in_c.contains(&e)).map(|&e| (v, e)))
        .expect("2-connected block larger than a cycle has an edge leaving it");
    let w = h.edge(first).other(start);
    let (ear_v, ear_e) = if on_c[w] {
        (vec![start, w], vec![first])
    } else {
        // BFS from w avoiding `start` until another vertex of c is reached
        let mut prev: Vec<Option<(VertexId, EdgeId)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[w] = true;
        seen[start] = true;
        let mut q = VecDeque::from([w]);
        let mut hit = None;
        'bfs: while let Some(u) = q.pop_front() {
            for (e, x) in h.neighbors(u) {
                if seen[x] {
                    continue;
                }
                seen[x] = true;
                prev[x] = Some((u, e));
                if on_c[x] {
                    hit = Some(x);
                    break 'bfs;
                }
                q.push_back(x);
            }
        }
        let end = hit.expect("removing one vertex keeps a 2-connected block connected");
        let mut vs = vec![end];
        let mut es = Vec::new();
        let mut cur = end;
        while cur != w {
            let (p, e) = prev[cur].unwrap();
            es.push(e);
            vs.push(p);
            cur = p;
        }
        es.push(first);
        vs.push(start);
        vs.reverse();
        es.reverse();
        (vs, es)
    };
    let a = ear_v[0];
    let b = *ear_v.last().unwrap();
    // split c at a and b into the two other branches
    let k = c.len();
    let ia = c.vertices.iter().position(|&v| v == a).unwrap();
    let walk = |step_forward: bool| {
        let mut vs = vec![a];
        let mut es = Vec::new();
        let mut i = ia;
        while *vs.last().unwrap() != b {
            if step_forward {
                es.push(c.edges[i]);
                i = (i + 1) % k;
            } else {
                i = (i + k - 1) % k;
                es.push(c.edges[i]);
            }
            vs.push(c.vertices[i]);
        }
        (vs, es)
    };
    ThetaSubgraph { ends: [a, b], branches: [walk(true), walk(false), (ear_v, ear_e)] }
}

/// Reference check by cycle enumeration: two distinct negative cycles whose
/// union is a theta.
pub fn brute_force_unbalanced_theta(g: &SignedGraph, limit: usize) -> Option<bool> {
    let en = enumerate_cycles(g, limit);
    if en.truncated {
        return None;
    }
    let neg: Vec<&Cycle> = en.cycles.iter().zip(&en.signs).filter(|(_, s)| s.is_negative()).map(|(c, _)| c).collect();
    let mut deg = vec![0usize; g.vertex_bound()];
    for i in 0..neg.len() {
        for j in i + 1..neg.len() {
            let mut edges: Vec<EdgeId> = neg[i].edges.iter().chain(&neg[j].edges).copied().collect();
            edges.sort_unstable();
            edges.dedup();
            if edges.len() == neg[i].len() + neg[j].len() {
                continue;
            }
            deg.iter_mut().for_each(|d| *d = 0);
            for &e in &edges {
                let r = g.edge(e);
                deg[r.u] += 1;
                deg[r.v] += 1;
            }
            let verts = deg.iter().filter(|&&d| d > 0).count();
            let threes = deg.iter().filter(|&&d| d == 3).count();
            let ok_deg = deg.iter().all(|&d| d == 0 || d == 2 || d == 3);
            if ok_deg && threes == 2 && edges.len() == verts + 1 {
                return Some(true);
            }
        }
    }
    Some(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigraph::Sign::{self, *};

    fn theta(signs: [Sign; 5]) -> SignedGraph {
        // branches 0-1, 0-2-1, 0-3-1
        SignedGraph::from_edges(
            4,
            &[(0, 1, signs[0]), (0, 2, signs[1]), (2, 1, signs[2]), (0, 3, signs[3]), (3, 1, signs[4])],
        )
    }

    #[test]
    fn negative_cycle_alone_has_none() {
        let g = SignedGraph::from_edges(3, &[(0, 1, Negative), (1, 2, Positive), (2, 0, Positive)]);
        assert!(!contains_unbalanced_theta(&g));
        assert!(has_unbalanced_theta(&g).is_none());
        assert_eq!(brute_force_unbalanced_theta(&g, 100), Some(false));
    }

    #[test]
    fn theta_with_negative_branch() {
        let g = theta([Negative, Positive, Positive, Positive, Positive]);
        assert!(contains_unbalanced_theta(&g));
        let w = has_unbalanced_theta(&g).unwrap();
        assert!(w.is_unbalanced_theta_in(&g));
        assert_eq!(w.edges().len(), 5);
        assert_eq!(brute_force_unbalanced_theta(&g, 100), Some(true));
    }

    #[test]
    fn balanced_k4_has_none() {
        let mut edges = Vec::new();
        for a in 0..4 {
            for b in a + 1..4 {
                edges.push((a, b, Positive));
            }
        }
        let g = SignedGraph::from_edges(4, &edges);
        assert!(has_unbalanced_theta(&g).is_none());
        assert_eq!(brute_force_unbalanced_theta(&g, 100), Some(false));
    }

    #[test]
    fn witness_in_larger_block() {
        let mut edges = Vec::new();
        for a in 0..4 {
            for b in a + 1..4 {
                edges.push((a, b, Positive));
            }
        }
        edges[5].2 = Negative;
        let g = SignedGraph::from_edges(4, &edges);
        assert!(has_unbalanced_theta(&g).unwrap().is_unbalanced_theta_in(&g));
    }

    #[test]
    fn negative_cycles_in_separate_blocks() {
        let g = SignedGraph::from_edges(
            5,
            &[(0, 1, Negative), (1, 2, Positive), (2, 0, Positive), (2, 3, Negative), (3, 4, Positive), (4, 2, Positive)],
        );
        assert!(!contains_unbalanced_theta(&g));
        assert_eq!(brute_force_unbalanced_theta(&g, 100), Some(false));
    }
}
