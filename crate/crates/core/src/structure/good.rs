use super::cycles::enumerate_cycles;
use super::theta::contains_unbalanced_theta;
use super::CYCLE_LIMIT;
use crate::sigraph::{Cycle, EdgeId, SignedGraph, VertexId, VertexSet};

/// A cycle or a single vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GeneralizedCycle {
    Vertex(VertexId),
    Cycle(Cycle),
}

impl GeneralizedCycle {
    pub fn vertices(&self) -> Vec<VertexId> {
        match self {
            GeneralizedCycle::Vertex(v) => vec![*v],
            GeneralizedCycle::Cycle(c) => c.vertices.clone(),
        }
    }

    pub fn edges(&self) -> &[EdgeId] {
        match self {
            GeneralizedCycle::Vertex(_) => &[],
            GeneralizedCycle::Cycle(c) => &c.edges,
        }
    }

    pub fn vertex_set(&self, bound: usize) -> VertexSet {
        let mut s = VertexSet::with_capacity(bound);
        for v in self.vertices() {
            s.insert(v);
        }
        s
    }

    pub fn is_negative(&self, g: &SignedGraph) -> bool {
        match self {
            GeneralizedCycle::Vertex(_) => false,
            GeneralizedCycle::Cycle(c) => c.is_negative(g),
        }
    }

    pub fn len(&self) -> usize {
        self.edges().len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges().is_empty()
    }

    /// Vertices of degree 2 in `g`.
    pub fn degree_two_count(&self, g: &SignedGraph) -> usize {
        self.vertices().into_iter().filter(|&v| g.degree(v) == 2).count()
    }

    fn degree_three_count(&self, g: &SignedGraph) -> usize {
        self.vertices().into_iter().filter(|&v| g.degree(v) >= 3).count()
    }

    pub fn is_good_in(&self, g: &SignedGraph) -> bool {
        match self {
            GeneralizedCycle::Vertex(v) => g.has_vertex(*v) && g.degree(*v) <= 1,
            GeneralizedCycle::Cycle(c) => c.is_valid_in(g) && !c.is_negative(g) && self.degree_two_count(g) >= 2,
        }
    }

    pub fn is_usable_in(&self, g: &SignedGraph) -> bool {
        match self {
            GeneralizedCycle::Cycle(c) if c.is_valid_in(g) && c.is_negative(g) => {
                c.vertices.iter().filter(|&&v| g.degree(v) != 2).count() <= 1
            }
            _ => self.is_good_in(g),
        }
    }
}

/// Outcome of [`find_good_cycle`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GoodSearch {
    Found(GeneralizedCycle),
    /// The graph itself is a negative cycle.
    NegativeCycle,
    None,
}

fn is_negative_cycle_graph(g: &SignedGraph) -> Option<Cycle> {
    if g.vertex_count() == 0 || g.edge_count() != g.vertex_count() || g.vertices().any(|v| g.degree(v) != 2) {
        return None;
    }
    let edges: Vec<EdgeId> = g.edge_ids().collect();
    Cycle::from_edge_set(g, &edges).filter(|c| c.is_negative(g))
}

/// Candidates passing `keep`, in preference order: fewest vertices of degree
/// at least 3, then shortest, then enumeration order.
fn ranked(g: &SignedGraph, keep: impl Fn(&GeneralizedCycle) -> bool) -> Vec<GeneralizedCycle> {
    let mut out: Vec<GeneralizedCycle> =
        g.vertices().map(GeneralizedCycle::Vertex).filter(|c| keep(c)).collect();
    let en = enumerate_cycles(g, CYCLE_LIMIT);
    out.extend(en.cycles.into_iter().map(GeneralizedCycle::Cycle).filter(|c| keep(c)));
    out.sort_by_key(|c| (c.degree_three_count(g), c.len()));
    out
}

/// Every good generalized cycle of `g`, best first.
pub fn good_cycles(g: &SignedGraph) -> Vec<GeneralizedCycle> {
    ranked(g, |c| c.is_good_in(g))
}

pub fn find_good_cycle(g: &SignedGraph) -> GoodSearch {
    if is_negative_cycle_graph(g).is_some() {
        return GoodSearch::NegativeCycle;
    }
    match good_cycles(g).into_iter().next() {
        Some(c) => GoodSearch::Found(c),
        None => GoodSearch::None,
    }
}

pub fn find_usable_cycle(g: &SignedGraph) -> Option<GeneralizedCycle> {
    ranked(g, |c| c.is_usable_in(g)).into_iter().next()
}

/// Contains an unbalanced theta, yet deleting any good cycle destroys all of
/// them.
pub fn is_fragile(g: &SignedGraph) -> bool {
    contains_unbalanced_theta(g)
        && good_cycles(g)
            .iter()
            .all(|c| !contains_unbalanced_theta(&g.without(&c.vertex_set(g.vertex_bound()))))
}

/// A negative cycle `d` and a path `q` (listed from one end on `d` to the
/// other) internally disjoint from `d` with at least two degree-2 vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodThetaPair {
    pub d: Cycle,
    pub q_vertices: Vec<VertexId>,
    pub q_edges: Vec<EdgeId>,
}

impl GoodThetaPair {
    pub fn is_valid_in(&self, g: &SignedGraph) -> bool {
        let q = &self.q_vertices;
        if !self.d.is_valid_in(g) || !self.d.is_negative(g) || q.len() < 2 || q.len() != self.q_edges.len() + 1 {
            return false;
        }
        let on_d = |v: &VertexId| self.d.vertices.contains(v);
        if !on_d(&q[0]) || !on_d(&q[q.len() - 1]) || q[0] == q[q.len() - 1] {
            return false;
        }
        let mut seen = std::collections::HashSet::new();
        for (i, &e) in self.q_edges.iter().enumerate() {
            let Some(r) = g.try_edge(e) else { return false };
            let (a, b) = (q[i], q[i + 1]);
            if !((r.u == a && r.v == b) || (r.u == b && r.v == a)) || self.d.edges.contains(&e) {
                return false;
            }
        }
        for v in &q[1..q.len() - 1] {
            if on_d(v) || !seen.insert(*v) {
                return false;
            }
        }
        q.iter().filter(|&&v| g.degree(v) == 2).count() >= 2
    }

    /// The two cycles of `d ∪ q` through `q`, positive one first.
    pub fn cycles_through_q(&self, g: &SignedGraph) -> (Cycle, Cycle) {
        let x = self.q_vertices[0];
        let y = *self.q_vertices.last().unwrap();
        let k = self.d.len();
        let ix = self.d.vertices.iter().position(|&v| v == x).unwrap();
        let along = |forward: bool| {
            // d-path from y back to x
            let mut vs = self.q_vertices.clone();
            let mut es = self.q_edges.clone();
            let iy = self.d.vertices.iter().position(|&v| v == y).unwrap();
            let mut i = iy;
            while i != ix {
                if forward {
                    es.push(self.d.edges[i]);
                    i = (i + 1) % k;
                } else {
                    i = (i + k - 1) % k;
                    es.push(self.d.edges[i]);
                }
                if i != ix {
                    vs.push(self.d.vertices[i]);
                }
            }
            Cycle { vertices: vs, edges: es }
        };
        let (a, b) = (along(true), along(false));
        if a.is_negative(g) {
            (b, a)
        } else {
            (a, b)
        }
    }
}

struct PathSearch<'a> {
    g: &'a SignedGraph,
    on_d: Vec<bool>,
    used: Vec<bool>,
    vs: Vec<VertexId>,
    es: Vec<EdgeId>,
    d_edges: &'a [EdgeId],
    best: Option<(Vec<VertexId>, Vec<EdgeId>)>,
}

impl PathSearch<'_> {
    fn dfs(&mut self, cur: VertexId) {
        for (e, w) in self.g.neighbors(cur).collect::<Vec<_>>() {
            if self.d_edges.contains(&e) || self.used[w] {
                continue;
            }
            if self.on_d[w] {
                if w > self.vs[0] {
                    let twos = self.vs.iter().filter(|&&v| self.g.degree(v) == 2).count()
                        + usize::from(self.g.degree(w) == 2);
                    let longer = self.best.as_ref().is_none_or(|b| b.1.len() < self.es.len() + 1);
                    if twos >= 2 && longer {
                        let mut vs = self.vs.clone();
                        vs.push(w);
                        let mut es = self.es.clone();
                        es.push(e);
                        self.best = Some((vs, es));
                    }
                }
                continue;
            }
            self.used[w] = true;
            self.vs.push(w);
            self.es.push(e);
            self.dfs(w);
            self.vs.pop();
            self.es.pop();
            self.used[w] = false;
        }
    }
}

/// A good theta-pair with the longest possible path, scanning negative
/// cycles in enumeration order.
pub fn find_good_theta_pair(g: &SignedGraph) -> Option<GoodThetaPair> {
    let en = enumerate_cycles(g, CYCLE_LIMIT);
    let mut best: Option<GoodThetaPair> = None;
    for (d, s) in en.cycles.iter().zip(&en.signs) {
        if !s.is_negative() {
            continue;
        }
        let mut on_d = vec![false; g.vertex_bound()];
        for &v in &d.vertices {
            on_d[v] = true;
        }
        for &x in &d.vertices {
            let mut ps = PathSearch {
                g,
                on_d: on_d.clone(),
                used: vec![false; g.vertex_bound()],
                vs: vec![x],
                es: Vec::new(),
                d_edges: &d.edges,
                best: None,
            };
            ps.used[x] = true;
            ps.dfs(x);
            if let Some((vs, es)) = ps.best {
                if best.as_ref().is_none_or(|b| b.q_edges.len() < es.len()) {
                    best = Some(GoodThetaPair { d: d.clone(), q_vertices: vs, q_edges: es });
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigraph::Sign::*;

    #[test]
    fn positive_theta_has_good_cycle() {
        // theta(2,2,2): branch vertices 0,1; middles 2,3,4
        let g = SignedGraph::from_edges(
            5,
            &[(0, 2, Positive), (2, 1, Positive), (0, 3, Positive), (3, 1, Positive), (0, 4, Positive), (4, 1, Positive)],
        );
        let GoodSearch::Found(c) = find_good_cycle(&g) else { panic!() };
        assert!(c.is_good_in(&g));
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn negative_cycle_verdict() {
        let g = SignedGraph::from_edges(3, &[(0, 1, Negative), (1, 2, Positive), (2, 0, Positive)]);
        assert_eq!(find_good_cycle(&g), GoodSearch::NegativeCycle);
        assert!(find_usable_cycle(&g).is_some());
    }

    #[test]
    fn isolated_vertex_is_good() {
        let g = SignedGraph::new(1);
        assert_eq!(find_good_cycle(&g), GoodSearch::Found(GeneralizedCycle::Vertex(0)));
    }

    #[test]
    fn hanging_negative_cycle_is_usable() {
        let g = SignedGraph::from_edges(
            5,
            &[(0, 1, Negative), (1, 2, Positive), (2, 0, Positive), (2, 3, Positive), (3, 4, Positive), (4, 3, Positive)],
        );
        let u = find_usable_cycle(&g).unwrap();
        assert!(u.is_usable_in(&g));
    }

    #[test]
    fn theta_pair_from_ear() {
        // negative triangle 0-1-2 with ear 0-3-4-1
        let g = SignedGraph::from_edges(
            5,
            &[(0, 1, Negative), (1, 2, Positive), (2, 0, Positive), (0, 3, Positive), (3, 4, Positive), (4, 1, Positive)],
        );
        let p = find_good_theta_pair(&g).unwrap();
        assert!(p.is_valid_in(&g));
        let (c0, c1) = p.cycles_through_q(&g);
        assert!(c0.is_valid_in(&g) && !c0.is_negative(&g));
        assert!(c1.is_valid_in(&g) && c1.is_negative(&g));
    }

    #[test]
    fn balanced_graph_has_no_theta_pair_and_is_not_fragile() {
        let g = SignedGraph::from_edges(4, &[(0, 1, Positive), (1, 2, Positive), (2, 3, Positive), (3, 0, Positive), (0, 2, Positive)]);
        assert!(find_good_theta_pair(&g).is_none());
        assert!(!is_fragile(&g));
    }
}
