use crate::sigraph::{EdgeId, SignedGraph, VertexId, VertexSet};

/// A maximal 2-connected piece, a bridge, a loop, or an isolated vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl Block {
    pub fn vertex_set(&self, bound: usize) -> VertexSet {
        let mut s = VertexSet::with_capacity(bound);
        for &v in &self.vertices {
            s.insert(v);
        }
        s
    }

    /// True for a block that is a single cycle (including a loop or a digon).
    pub fn is_cycle(&self, g: &SignedGraph) -> bool {
        match self.edges.len() {
            0 => false,
            1 => g.edge(self.edges[0]).is_loop(),
            n => n == self.vertices.len(),
        }
    }

    pub fn is_bridge(&self, g: &SignedGraph) -> bool {
        self.edges.len() == 1 && !g.edge(self.edges[0]).is_loop()
    }

    /// The block as a stand-alone graph (same ids).
    pub fn subgraph(&self, g: &SignedGraph) -> SignedGraph {
        let keep = self.vertex_set(g.vertex_bound());
        let mut h = g.induced(&keep);
        let mine: std::collections::HashSet<EdgeId> = self.edges.iter().copied().collect();
        for e in h.edge_ids().collect::<Vec<_>>() {
            if !mine.contains(&e) {
                h.remove_edge(e);
            }
        }
        h
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockCutTree {
    /// Sorted by smallest vertex, then smallest edge.
    pub blocks: Vec<Block>,
    pub cut_vertices: Vec<VertexId>,
    /// `(block index, cut vertex)` incidences.
    pub adjacency: Vec<(usize, VertexId)>,
}

impl BlockCutTree {
    pub fn is_cut_vertex(&self, v: VertexId) -> bool {
        self.cut_vertices.binary_search(&v).is_ok()
    }

    /// Blocks with at most one cut vertex, in block order.
    pub fn leaf_blocks(&self) -> Vec<usize> {
        (0..self.blocks.len())
            .filter(|&b| self.adjacency.iter().filter(|(x, _)| *x == b).count() <= 1)
            .collect()
    }
}

struct Tarjan<'a> {
    g: &'a SignedGraph,
    disc: Vec<usize>,
    low: Vec<usize>,
    timer: usize,
    stack: Vec<EdgeId>,
    blocks: Vec<Vec<EdgeId>>,
}

const UNSEEN: usize = usize::MAX;

impl Tarjan<'_> {
    fn visit(&mut self, u: VertexId, parent: Option<EdgeId>) {
        self.disc[u] = self.timer;
        self.low[u] = self.timer;
        self.timer += 1;
        for &e in self.g.incident(u) {
            let rec = self.g.edge(e);
            if rec.is_loop() || Some(e) == parent {
                continue;
            }
            let w = rec.other(u);
            if self.disc[w] == UNSEEN {
                self.stack.push(e);
                self.visit(w, Some(e));
                self.low[u] = self.low[u].min(self.low[w]);
                if self.low[w] >= self.disc[u] {
                    let mut block = Vec::new();
                    while let Some(x) = self.stack.pop() {
                        block.push(x);
                        if x == e {
                            break;
                        }
                    }
                    self.blocks.push(block);
                }
            } else if self.disc[w] < self.disc[u] {
                self.stack.push(e);
                self.low[u] = self.low[u].min(self.disc[w]);
            }
        }
    }
}

/// Biconnected decomposition. Loops form their own blocks and isolated
/// vertices appear as edgeless blocks.
pub fn block_cut_tree(g: &SignedGraph) -> BlockCutTree {
    let n = g.vertex_bound();
    let mut t = Tarjan {
        g,
        disc: vec![UNSEEN; n],
        low: vec![UNSEEN; n],
        timer: 0,
        stack: Vec::new(),
        blocks: Vec::new(),
    };
    for v in g.vertices() {
        if t.disc[v] == UNSEEN {
            t.visit(v, None);
        }
    }
    let mut blocks: Vec<Block> = t
        .blocks
        .into_iter()
        .map(|mut edges| {
            edges.sort_unstable();
            let mut vertices: Vec<VertexId> = edges.iter().flat_map(|&e| g.edge(e).ends()).collect();
            vertices.sort_unstable();
            vertices.dedup();
            Block { vertices, edges }
        })
        .collect();
    for e in g.edges().filter(|e| e.is_loop()) {
        blocks.push(Block { vertices: vec![e.u], edges: vec![e.id] });
    }
    for v in g.vertices() {
        if g.incident(v).is_empty() {
            blocks.push(Block { vertices: vec![v], edges: vec![] });
        }
    }
    blocks.sort_by(|a, b| (a.vertices[0], a.edges.first()).cmp(&(b.vertices[0], b.edges.first())));

    let mut count = vec![0usize; n];
    for b in &blocks {
        for &v in &b.vertices {
            count[v] += 1;
        }
    }
    let cut_vertices: Vec<VertexId> = g.vertices().filter(|&v| count[v] >= 2).collect();
    let mut adjacency = Vec::new();
    for (i, b) in blocks.iter().enumerate() {
        for &v in &b.vertices {
            if count[v] >= 2 {
                adjacency.push((i, v));
            }
        }
    }
    BlockCutTree { blocks, cut_vertices, adjacency }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigraph::Sign::Positive;

    #[test]
    fn cycle_is_one_block() {
        let g = SignedGraph::from_edges(4, &[(0, 1, Positive), (1, 2, Positive), (2, 3, Positive), (3, 0, Positive)]);
        let t = block_cut_tree(&g);
        assert_eq!(t.blocks.len(), 1);
        assert!(t.cut_vertices.is_empty());
        assert!(t.blocks[0].is_cycle(&g));
    }

    #[test]
    fn bowtie_has_one_cut_vertex() {
        let g = SignedGraph::from_edges(
            5,
            &[(0, 1, Positive), (1, 2, Positive), (2, 0, Positive), (2, 3, Positive), (3, 4, Positive), (4, 2, Positive)],
        );
        let t = block_cut_tree(&g);
        assert_eq!(t.blocks.len(), 2);
        assert_eq!(t.cut_vertices, vec![2]);
        assert_eq!(t.leaf_blocks(), vec![0, 1]);
    }

    #[test]
    fn tree_edges_are_bridges() {
        let g = SignedGraph::from_edges(5, &[(0, 1, Positive), (1, 2, Positive), (1, 3, Positive), (3, 4, Positive)]);
        let t = block_cut_tree(&g);
        assert_eq!(t.blocks.len(), 4);
        assert!(t.blocks.iter().all(|b| b.is_bridge(&g)));
        assert_eq!(t.cut_vertices, vec![1, 3]);
    }

    #[test]
    fn parallel_edges_share_a_block() {
        let g = SignedGraph::from_edges(3, &[(0, 1, Positive), (0, 1, Positive), (1, 2, Positive), (2, 2, Positive)]);
        let t = block_cut_tree(&g);
        assert_eq!(t.blocks.len(), 3);
        assert!(t.blocks[0].is_cycle(&g));
        assert!(t.blocks.iter().any(|b| b.edges == vec![3]));
    }
}
