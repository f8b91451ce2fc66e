use super::{SignedGraph, VertexId};

/// Connected components as sorted vertex lists, ordered by smallest member.
pub fn components(g: &SignedGraph) -> Vec<Vec<VertexId>> {
    let mut seen = vec![false; g.vertex_bound()];
    let mut out = Vec::new();
    for s in g.vertices() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for (_, w) in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Global minimum edge cut (Stoer–Wagner on edge multiplicities). Loops are
/// ignored. Graphs with fewer than two vertices report 0.
pub fn edge_connectivity(g: &SignedGraph) -> usize {
    let ids: Vec<VertexId> = g.vertices().collect();
    let n = ids.len();
    if n < 2 {
        return 0;
    }
    let mut index = vec![usize::MAX; g.vertex_bound()];
    for (i, &v) in ids.iter().enumerate() {
        index[v] = i;
    }
    let mut w = vec![vec![0usize; n]; n];
    for e in g.edges() {
        if !e.is_loop() {
            let (a, b) = (index[e.u], index[e.v]);
            w[a][b] += 1;
            w[b][a] += 1;
        }
    }
    let mut active: Vec<usize> = (0..n).collect();
    let mut best = usize::MAX;
    while active.len() > 1 {
        let m = active.len();
        let mut added = vec![false; m];
        let mut weight = vec![0usize; m];
        let mut prev = 0;
        let mut last = 0;
        for step in 0..m {
            let mut sel = usize::MAX;
            for i in 0..m {
                if !added[i] && (sel == usize::MAX || weight[i] > weight[sel]) {
                    sel = i;
                }
            }
            added[sel] = true;
            if step == m - 1 {
                best = best.min(weight[sel]);
                last = sel;
            } else {
                prev = sel;
                for i in 0..m {
                    if !added[i] {
                        weight[i] += w[active[sel]][active[i]];
                    }
                }
            }
        }
        // merge last into prev
        let (s, t) = (active[prev], active[last]);
        for i in 0..n {
            w[s][i] += w[t][i];
            w[i][s] = w[s][i];
        }
        w[s][s] = 0;
        active.remove(last);
    }
    best
}

pub fn is_two_edge_connected(g: &SignedGraph) -> bool {
    edge_connectivity(g) >= 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigraph::Sign::Positive;

    #[test]
    fn k4_is_three_connected() {
        let mut edges = Vec::new();
        for a in 0..4 {
            for b in a + 1..4 {
                edges.push((a, b, Positive));
            }
        }
        assert_eq!(edge_connectivity(&SignedGraph::from_edges(4, &edges)), 3);
    }

    #[test]
    fn triple_edge() {
        let g = SignedGraph::from_edges(2, &[(0, 1, Positive); 3]);
        assert_eq!(edge_connectivity(&g), 3);
    }

    #[test]
    fn bridge_and_loops() {
        let g = SignedGraph::from_edges(
            4,
            &[(0, 1, Positive), (1, 2, Positive), (2, 0, Positive), (2, 3, Positive), (3, 3, Positive)],
        );
        assert_eq!(edge_connectivity(&g), 1);
        let disconnected = SignedGraph::from_edges(2, &[(0, 0, Positive)]);
        assert_eq!(edge_connectivity(&disconnected), 0);
    }
}
