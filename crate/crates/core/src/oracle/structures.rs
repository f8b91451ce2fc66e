use std::collections::HashSet;

use crate::sigraph::{Sign, SignedGraph};

/// Every connected subcubic multigraph on `n` vertices up to isomorphism,
/// loops included, all edges positive. Practical up to eight vertices.
pub fn subcubic_structures(n: usize) -> Vec<SignedGraph> {
    enumerate(n, false)
}

/// The cubic members of `subcubic_structures(n)`, pruned during the search.
pub fn cubic_structures(n: usize) -> Vec<SignedGraph> {
    enumerate(n, true)
}

fn enumerate(n: usize, cubic: bool) -> Vec<SignedGraph> {
    if n == 0 {
        return Vec::new();
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let mut e =
        Enumerator { n, cubic, pairs, mult: vec![vec![0u8; n]; n], deg: vec![0; n], seen: HashSet::new(), out: Vec::new() };
    e.go(0);
    e.out
}

struct Enumerator {
    n: usize,
    cubic: bool,
    pairs: Vec<(usize, usize)>,
    /// Edge multiplicities; the diagonal counts loops.
    mult: Vec<Vec<u8>>,
    deg: Vec<usize>,
    seen: HashSet<Vec<u8>>,
    out: Vec<SignedGraph>,
}

impl Enumerator {
    fn go(&mut self, p: usize) {
        if p > 0 {
            // row `i` is complete once its last pair is placed
            let (i, j) = self.pairs[p - 1];
            if j == self.n - 1 && !self.row_ok(i) {
                return;
            }
        }
        if p == self.pairs.len() {
            self.finish();
            return;
        }
        let (i, j) = self.pairs[p];
        let mut m = 0;
        loop {
            self.go(p + 1);
            let room = if i == j { self.deg[i] + 2 <= 3 } else { self.deg[i] < 3 && self.deg[j] < 3 };
            if !room {
                break;
            }
            m += 1;
            self.set(i, j, m);
        }
        self.set(i, j, 0);
    }

    fn set(&mut self, i: usize, j: usize, m: u8) {
        let old = self.mult[i][j];
        let step = if i == j { 2 } else { 1 };
        self.deg[i] -= step * old as usize;
        self.deg[j] -= if i == j { 0 } else { old as usize };
        self.mult[i][j] = m;
        self.mult[j][i] = m;
        self.deg[i] += step * m as usize;
        self.deg[j] += if i == j { 0 } else { m as usize };
    }

    /// Degrees are non-increasing along the labelling and nothing is isolated
    /// (unless the graph is a single vertex).
    fn row_ok(&self, i: usize) -> bool {
        if self.cubic {
            return self.deg[i] == 3;
        }
        (self.n == 1 || self.deg[i] > 0) && (i == 0 || self.deg[i] <= self.deg[i - 1])
    }

    fn connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in 0..self.n {
                if self.mult[v][w] > 0 && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    fn finish(&mut self) {
        if !self.connected() {
            return;
        }
        let key = self.canonical();
        if self.seen.insert(key) {
            let mut g = SignedGraph::new(self.n);
            for &(i, j) in &self.pairs {
                for _ in 0..self.mult[i][j] {
                    g.add_edge(i, j, Sign::Positive);
                }
            }
            self.out.push(g);
        }
    }

    /// Smallest upper-triangle encoding over the leaves of an
    /// individualization-refinement search.
    fn canonical(&self) -> Vec<u8> {
        let colour: Vec<usize> = self.refine((0..self.n).map(|v| self.deg[v]).collect());
        let mut best = None;
        self.search(colour, &mut best);
        best.expect("at least one leaf")
    }

    /// Colour refinement to a stable partition. Colours are ranks of sorted
    /// signatures, so equal inputs under relabelling give equal outputs.
    fn refine(&self, mut colour: Vec<usize>) -> Vec<usize> {
        let n = self.n;
        loop {
            let classes = colour.iter().collect::<HashSet<_>>().len();
            let sig: Vec<(usize, u8, Vec<(usize, u8)>)> = (0..n)
                .map(|v| {
                    let mut nb: Vec<(usize, u8)> =
                        (0..n).filter(|&w| w != v && self.mult[v][w] > 0).map(|w| (colour[w], self.mult[v][w])).collect();
                    nb.sort_unstable();
                    (colour[v], self.mult[v][v], nb)
                })
                .collect();
            let mut distinct = sig.clone();
            distinct.sort();
            distinct.dedup();
            colour = sig.iter().map(|x| distinct.binary_search(x).unwrap()).collect();
            if distinct.len() == classes {
                return colour;
            }
        }
    }

    fn search(&self, colour: Vec<usize>, best: &mut Option<Vec<u8>>) {
        let n = self.n;
        let mut size = vec![0usize; n];
        colour.iter().for_each(|&c| size[c] += 1);
        // first smallest non-singleton cell
        let Some(cell) = (0..n).filter(|&c| size[c] > 1).min_by_key(|&c| (size[c], c)) else {
            let mut perm = vec![0; n];
            for v in 0..n {
                perm[colour[v]] = v;
            }
            let code: Vec<u8> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).map(|(a, b)| self.mult[perm[a]][perm[b]]).collect();
            if best.as_ref().is_none_or(|b| code < *b) {
                *best = Some(code);
            }
            return;
        };
        for v in (0..n).filter(|&v| colour[v] == cell) {
            let split: Vec<usize> = (0..n).map(|w| 2 * colour[w] + usize::from(w != v)).collect();
            self.search(self.refine(split), best);
        }
    }
}
