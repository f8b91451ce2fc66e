use std::collections::VecDeque;

use super::{connectivity, Cycle, EdgeId, Sign, SignedGraph, VertexId};

/// Proof of (un)balance, re-checkable in linear time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BalanceCertificate {
    /// Switching at these vertices makes every edge positive. Never contains
    /// the lowest-id vertex of any component.
    SwitchingSet(Vec<VertexId>),
    /// A cycle with an odd number of negative edges.
    WitnessNegativeCycle(Cycle),
}

impl BalanceCertificate {
    pub fn is_balanced(&self) -> bool {
        matches!(self, BalanceCertificate::SwitchingSet(_))
    }

    /// Re-checks the certificate against `g`.
    pub fn check(&self, g: &SignedGraph) -> bool {
        match self {
            BalanceCertificate::SwitchingSet(s) => {
                let mut side = vec![false; g.vertex_bound()];
                for &v in s {
                    if !g.has_vertex(v) {
                        return false;
                    }
                    side[v] = true;
                }
                g.edges().all(|e| {
                    let flips = !e.is_loop() && side[e.u] != side[e.v];
                    let s = if flips { e.sign.flipped() } else { e.sign };
                    s == Sign::Positive
                })
            }
            BalanceCertificate::WitnessNegativeCycle(c) => c.is_valid_in(g) && c.is_negative(g),
        }
    }
}

/// Sign-propagating search, one BFS per component rooted at its lowest id.
pub fn balance(g: &SignedGraph) -> BalanceCertificate {
    let n = g.vertex_bound();
    // potential: Some(true) = switched
    let mut pot: Vec<Option<bool>> = vec![None; n];
    let mut parent: Vec<Option<(VertexId, EdgeId)>> = vec![None; n];
    let mut depth = vec![0usize; n];

    for e in g.edges() {
        if e.is_loop() && e.sign.is_negative() {
            return BalanceCertificate::WitnessNegativeCycle(Cycle { vertices: vec![e.u], edges: vec![e.id] });
        }
    }

    for root in g.vertices() {
        if pot[root].is_some() {
            continue;
        }
        pot[root] = Some(false);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for (e, w) in g.neighbors(u) {
                let want = pot[u].unwrap() ^ g.sign(e).is_negative();
                match pot[w] {
                    None => {
                        pot[w] = Some(want);
                        parent[w] = Some((u, e));
                        depth[w] = depth[u] + 1;
                        queue.push_back(w);
                    }
                    Some(p) if p != want => {
                        return BalanceCertificate::WitnessNegativeCycle(tree_cycle(
                            &parent, &depth, u, w, e,
                        ));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    let switched = g.vertices().filter(|&v| pot[v] == Some(true)).collect();
    BalanceCertificate::SwitchingSet(switched)
}

/// Closes the tree paths from `u` and `w` with the non-tree edge `e`.
fn tree_cycle(
    parent: &[Option<(VertexId, EdgeId)>],
    depth: &[usize],
    u: VertexId,
    w: VertexId,
    e: EdgeId,
) -> Cycle {
    let (mut a, mut b) = (u, w);
    let mut up_a = vec![u];
    let mut ea = Vec::new();
    let mut up_b = vec![w];
    let mut eb = Vec::new();
    while a != b {
        if depth[a] >= depth[b] {
            let (p, pe) = parent[a].expect("root reached before meeting");
            ea.push(pe);
            up_a.push(p);
            a = p;
        } else {
            let (p, pe) = parent[b].expect("root reached before meeting");
            eb.push(pe);
            up_b.push(p);
            b = p;
        }
    }
    // up_a: u .. lca, up_b: w .. lca
    let mut vertices = up_a;
    let mut edges = ea;
    up_b.pop();
    eb.reverse();
    edges.extend(eb);
    vertices.extend(up_b.into_iter().rev());
    edges.push(e);
    Cycle { vertices, edges }
}

pub fn is_balanced(g: &SignedGraph) -> bool {
    balance(g).is_balanced()
}

/// `k = 0`: balanced. `k = 1`: balanced, or balanced after deleting a single
/// edge. A graph is 2-unbalanced iff `negativeness_at_most(g, 1)` is false.
pub fn negativeness_at_most(g: &SignedGraph, k: u8) -> bool {
    assert!(k <= 1, "negativeness_at_most supports k in {{0, 1}}");
    if is_balanced(g) {
        return true;
    }
    if k == 0 {
        return false;
    }
    // Only edges on a negative cycle can help; try those first cheaply.
    let mut h = g.clone();
    for e in g.edge_ids().collect::<Vec<_>>() {
        let rec = h.remove_edge(e);
        let ok = is_balanced(&h);
        h.insert_edge(rec.id, rec.u, rec.v, rec.sign);
        if ok {
            return true;
        }
    }
    false
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Admissibility {
    Admissible,
    NotAdmissible,
    /// Outside the 2-edge-connected setting where the characterization
    /// applies; ask the brute-force oracle instead.
    NeedsOracle,
}

/// Flow-admissibility of a 2-edge-connected graph: balanced graphs always
/// are, unbalanced ones iff they are 2-unbalanced.
pub fn is_flow_admissible(g: &SignedGraph) -> Admissibility {
    if g.vertex_count() < 2 || !connectivity::is_two_edge_connected(g) {
        return Admissibility::NeedsOracle;
    }
    if is_balanced(g) || !negativeness_at_most(g, 1) {
        Admissibility::Admissible
    } else {
        Admissibility::NotAdmissible
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigraph::Sign::*;

    fn triangle(s: [Sign; 3]) -> SignedGraph {
        SignedGraph::from_edges(3, &[(0, 1, s[0]), (1, 2, s[1]), (2, 0, s[2])])
    }

    #[test]
    fn all_positive_is_balanced_with_empty_switching() {
        let g = triangle([Positive; 3]);
        assert_eq!(balance(&g), BalanceCertificate::SwitchingSet(vec![]));
    }

    #[test]
    fn negative_triangle_witness() {
        let g = triangle([Positive, Positive, Negative]);
        match balance(&g) {
            BalanceCertificate::WitnessNegativeCycle(c) => {
                assert_eq!(c.len(), 3);
                assert!(c.is_negative(&g));
                assert!(c.is_valid_in(&g));
            }
            other => panic!("expected witness, got {other:?}"),
        }
    }

    #[test]
    fn switching_certificate_checks() {
        let g = triangle([Negative, Negative, Positive]);
        let cert = balance(&g);
        assert!(cert.is_balanced());
        assert!(cert.check(&g));
        if let BalanceCertificate::SwitchingSet(s) = cert {
            assert!(!s.contains(&0));
        }
    }

    #[test]
    fn digon_witness() {
        let g = SignedGraph::from_edges(2, &[(0, 1, Positive), (0, 1, Negative)]);
        let cert = balance(&g);
        assert!(!cert.is_balanced());
        assert!(cert.check(&g));
    }

    #[test]
    fn negative_cycle_is_one_unbalanced() {
        let g = triangle([Positive, Positive, Negative]);
        assert!(!negativeness_at_most(&g, 0));
        assert!(negativeness_at_most(&g, 1));
        assert_eq!(is_flow_admissible(&g), Admissibility::NotAdmissible);
    }
}
