//! Maximum-cardinality matching in general graphs (Edmonds' blossom
//! algorithm, BFS variant with blossom contraction by base relabelling).

use std::collections::VecDeque;

const NONE: usize = usize::MAX;

/// Partner of every vertex in a maximum matching of the simple graph on
/// `0..n` given by `edges`; `None` marks an unmatched vertex. Parallel edges
/// and loops are ignored.
pub fn maximum_matching(n: usize, edges: &[(usize, usize)]) -> Vec<Option<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        if u != v && !adj[u].contains(&v) {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let mut m = Blossom { adj, mate: vec![NONE; n], parent: vec![NONE; n], base: (0..n).collect(), used: vec![false; n] };
    // greedy start
    for u in 0..n {
        if m.mate[u] == NONE {
            if let Some(&v) = m.adj[u].iter().find(|&&v| m.mate[v] == NONE) {
                m.mate[u] = v;
                m.mate[v] = u;
            }
        }
    }
    for root in 0..n {
        if m.mate[root] == NONE {
            if let Some(end) = m.find_path(root) {
                m.augment(end);
            }
        }
    }
    m.mate.into_iter().map(|v| (v != NONE).then_some(v)).collect()
}

pub fn matching_size(mate: &[Option<usize>]) -> usize {
    mate.iter().filter(|m| m.is_some()).count() / 2
}

pub fn is_perfect(mate: &[Option<usize>]) -> bool {
    mate.iter().all(Option::is_some)
}

struct Blossom {
    adj: Vec<Vec<usize>>,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
}

impl Blossom {
    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.adj.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, in_blossom: &mut [bool], mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            in_blossom[self.base[v]] = true;
            in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// BFS for an augmenting path from `root`; returns its free far end.
    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.adj.len();
        self.used.iter_mut().for_each(|x| *x = false);
        self.parent.iter_mut().for_each(|x| *x = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for i in 0..self.adj[v].len() {
                let to = self.adj[v][i];
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    // odd cycle: contract the blossom
                    let cur = self.lca(v, to);
                    let mut in_blossom = vec![false; n];
                    self.mark_path(&mut in_blossom, v, cur, to);
                    self.mark_path(&mut in_blossom, to, cur, v);
                    for x in 0..n {
                        if in_blossom[self.base[x]] {
                            self.base[x] = cur;
                            if !self.used[x] {
                                self.used[x] = true;
                                queue.push_back(x);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    queue.push_back(next);
                }
            }
        }
        None
    }

    fn augment(&mut self, mut v: usize) {
        while v != NONE {
            let pv = self.parent[v];
            let ppv = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = ppv;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Largest matching by exhaustive search over the lowest free vertex.
    fn brute(n: usize, edges: &[(usize, usize)]) -> usize {
        fn go(v: usize, adj: &[Vec<usize>], used: &mut Vec<bool>) -> usize {
            let Some(u) = (v..adj.len()).find(|&u| !used[u]) else { return 0 };
            used[u] = true;
            let mut best = go(u + 1, adj, used);
            for &w in &adj[u] {
                if !used[w] {
                    used[w] = true;
                    best = best.max(1 + go(u + 1, adj, used));
                    used[w] = false;
                }
            }
            used[u] = false;
            best
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        go(0, &adj, &mut vec![false; n])
    }

    fn check(n: usize, edges: &[(usize, usize)]) {
        let mate = maximum_matching(n, edges);
        for (u, m) in mate.iter().enumerate() {
            if let Some(v) = *m {
                assert_eq!(mate[v], Some(u));
                assert!(edges.iter().any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u)));
            }
        }
        assert_eq!(matching_size(&mate), brute(n, edges), "n {n} edges {edges:?}");
    }

    #[test]
    fn cycles() {
        for n in 3..10 {
            let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
            let mate = maximum_matching(n, &edges);
            assert_eq!(matching_size(&mate), n / 2);
            assert_eq!(is_perfect(&mate), n % 2 == 0);
        }
    }

    #[test]
    fn petersen_has_perfect_matching() {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        assert!(is_perfect(&maximum_matching(10, &edges)));
        check(10, &edges);
    }

    #[test]
    fn random_graphs_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=12);
            let p = rng.gen_range(0.1..0.6);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            check(n, &edges);
        }
    }
}
