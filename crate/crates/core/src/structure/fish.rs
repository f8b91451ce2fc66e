use crate::sigraph::{balance, is_balanced, BalanceCertificate, Cycle, EdgeId, SignedGraph, VertexId};

/// A fish: theta with branches `a-p-b`, `a-q-b`, `a-r-s-b` plus an odd path
/// from `r` to `s` of length at least three.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FishCertificate {
    pub a: VertexId,
    pub b: VertexId,
    pub p: VertexId,
    pub q: VertexId,
    pub r: VertexId,
    pub s: VertexId,
    /// Path from `r` to `s`.
    pub path_vertices: Vec<VertexId>,
    pub path_edges: Vec<EdgeId>,
    pub theta_edges: Vec<EdgeId>,
    /// The edge `rs`, the only one not in a 2-edge-cut.
    pub distinguished: EdgeId,
    /// The first edge of the path; after switching at `switching` it is the
    /// only negative edge.
    pub negative_edge: EdgeId,
    pub switching: Vec<VertexId>,
}

impl FishCertificate {
    /// The positive 4-cycle `a-p-b-q`.
    pub fn good_cycle(&self, g: &SignedGraph) -> Cycle {
        let find = |x: VertexId, y: VertexId| {
            g.incident(x).iter().copied().find(|&e| g.edge(e).other(x) == y).unwrap()
        };
        Cycle {
            vertices: vec![self.a, self.p, self.b, self.q],
            edges: vec![find(self.a, self.p), find(self.p, self.b), find(self.b, self.q), find(self.q, self.a)],
        }
    }

    /// A positive cycle through the distinguished edge: `r-s` closed by
    /// `s-b-p-a-r`.
    pub fn distinguished_cycle(&self, g: &SignedGraph) -> Cycle {
        let find = |x: VertexId, y: VertexId| {
            g.incident(x).iter().copied().find(|&e| g.edge(e).other(x) == y).unwrap()
        };
        Cycle {
            vertices: vec![self.r, self.s, self.b, self.p, self.a],
            edges: vec![
                self.distinguished,
                find(self.s, self.b),
                find(self.b, self.p),
                find(self.p, self.a),
                find(self.a, self.r),
            ],
        }
    }
}

/// Maximal path of degree-2 vertices between two branch vertices.
struct Thread {
    ends: [VertexId; 2],
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
}

fn threads(g: &SignedGraph) -> Option<Vec<Thread>> {
    let mut out = Vec::new();
    let mut used = std::collections::HashSet::new();
    for v in g.vertices().filter(|&v| g.degree(v) == 3) {
        for &e0 in g.incident(v) {
            if used.contains(&e0) {
                continue;
            }
            let mut vs = vec![v];
            let mut es = vec![e0];
            let mut cur = g.edge(e0).other(v);
            let mut last = e0;
            while g.degree(cur) == 2 {
                vs.push(cur);
                let next = *g.incident(cur).iter().find(|&&e| e != last)?;
                es.push(next);
                last = next;
                cur = g.edge(next).other(cur);
                if cur == v && g.degree(v) != 3 {
                    return None;
                }
            }
            if g.degree(cur) != 3 || g.edge(last).is_loop() {
                return None;
            }
            vs.push(cur);
            used.extend(es.iter().copied());
            out.push(Thread { ends: [v, cur], vertices: vs, edges: es });
        }
    }
    Some(out)
}

/// Recognizes graphs switching-equivalent to a fish.
pub fn recognize_fish(g: &SignedGraph) -> Option<FishCertificate> {
    if g.vertices().any(|v| !(2..=3).contains(&g.degree(v))) {
        return None;
    }
    let branch: Vec<VertexId> = g.vertices().filter(|&v| g.degree(v) == 3).collect();
    if branch.len() != 4 || g.edges().any(|e| e.is_loop()) {
        return None;
    }
    let ts = threads(g)?;
    if ts.len() != 6 || ts.iter().map(|t| t.edges.len()).sum::<usize>() != g.edge_count() {
        return None;
    }
    let between = |x: VertexId, y: VertexId| -> Vec<&Thread> {
        ts.iter().filter(|t| (t.ends == [x, y]) || (t.ends == [y, x])).collect()
    };
    for i in 0..4 {
        for j in i + 1..4 {
            let (r0, s0) = (branch[i], branch[j]);
            let rs = between(r0, s0);
            if rs.len() != 2 {
                continue;
            }
            let (short, long) = if rs[0].edges.len() == 1 { (rs[0], rs[1]) } else { (rs[1], rs[0]) };
            if short.edges.len() != 1 || long.edges.len() < 3 || long.edges.len() % 2 == 0 {
                continue;
            }
            let others: Vec<VertexId> = branch.iter().copied().filter(|&v| v != r0 && v != s0).collect();
            let (a0, b0) = (others[0], others[1]);
            let ab = between(a0, b0);
            if ab.len() != 2 || ab.iter().any(|t| t.edges.len() != 2) {
                continue;
            }
            // a joins r directly and b joins s, or the mirror
            let direct = |x: VertexId, y: VertexId| {
                let t = between(x, y);
                t.len() == 1 && t[0].edges.len() == 1
            };
            let (a, b, r, s) = if direct(a0, r0) && direct(b0, s0) {
                (a0, b0, r0, s0)
            } else if direct(a0, s0) && direct(b0, r0) {
                (a0, b0, s0, r0)
            } else {
                continue;
            };
            let mut pq = [ab[0].vertices[1], ab[1].vertices[1]];
            pq.sort_unstable();
            let (mut pv, mut pe) = (long.vertices.clone(), long.edges.clone());
            if pv[0] != r {
                pv.reverse();
                pe.reverse();
            }
            let path_set: std::collections::HashSet<EdgeId> = pe.iter().copied().collect();
            let mut theta_edges: Vec<EdgeId> = g.edge_ids().filter(|e| !path_set.contains(e)).collect();
            theta_edges.sort_unstable();
            let mut h = g.clone();
            for &e in &pe {
                h.remove_edge(e);
            }
            if !is_balanced(&h) || is_balanced(g) {
                return None;
            }
            let mut minus = g.clone();
            minus.remove_edge(pe[0]);
            let BalanceCertificate::SwitchingSet(switching) = balance(&minus) else {
                return None;
            };
            let negative_edge = pe[0];
            return Some(FishCertificate {
                a,
                b,
                p: pq[0],
                q: pq[1],
                r,
                s,
                path_vertices: pv,
                path_edges: pe,
                theta_edges,
                distinguished: short.edges[0],
                negative_edge,
                switching,
            });
        }
    }
    None
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::sigraph::Sign::{self, *};

    /// a=0 b=1 p=2 q=3 r=4 s=5, path internals from 6.
    pub(crate) fn fish(path_len: usize, negative: Option<usize>) -> SignedGraph {
        let mut edges: Vec<(usize, usize, Sign)> = vec![
            (0, 2, Positive),
            (2, 1, Positive),
            (0, 3, Positive),
            (3, 1, Positive),
            (0, 4, Positive),
            (4, 5, Positive),
            (5, 1, Positive),
        ];
        let n = 6 + path_len - 1;
        let mut prev = 4;
        for i in 0..path_len {
            let next = if i + 1 == path_len { 5 } else { 6 + i };
            edges.push((prev, next, Positive));
            prev = next;
        }
        if let Some(k) = negative {
            edges[k].2 = Negative;
        }
        SignedGraph::from_edges(n, &edges)
    }

    #[test]
    fn eight_vertex_fish() {
        let g = fish(3, Some(7));
        let c = recognize_fish(&g).unwrap();
        assert_eq!((c.a, c.b, c.r, c.s), (0, 1, 4, 5));
        assert_eq!(c.distinguished, 5);
        assert_eq!(c.path_edges.len(), 3);
        assert!(!c.good_cycle(&g).is_negative(&g));
        assert!(!c.distinguished_cycle(&g).is_negative(&g));
        assert!(c.distinguished_cycle(&g).is_valid_in(&g));
    }

    #[test]
    fn switched_fish_is_recognized() {
        let mut g = fish(5, Some(9));
        for e in [0, 2, 4] {
            g.set_sign(e, Negative);
        }
        assert!(recognize_fish(&g).is_some());
    }

    #[test]
    fn unbalanced_theta_is_not_a_fish() {
        let g = fish(3, Some(0));
        assert!(recognize_fish(&g).is_none());
    }

    #[test]
    fn even_path_is_not_a_fish() {
        assert!(recognize_fish(&fish(4, Some(7))).is_none());
        assert!(recognize_fish(&fish(3, None)).is_none());
    }
}
