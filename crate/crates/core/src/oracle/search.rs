use std::collections::VecDeque;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use crate::sigraph::{verify_flow, EdgeId, IntFlow, Orientation, SignedGraph, VertexId};

/// Limits for exhaustive search. Exceeding any of them yields
/// [`OracleVerdict::Unknown`].
#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    pub nodes: u64,
    pub time: Option<Duration>,
    /// Worker threads for the root split; 1 means sequential.
    pub width: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { nodes: 200_000_000, time: None, width: 1 }
    }
}

impl SearchBudget {
    pub fn nodes(nodes: u64) -> Self {
        SearchBudget { nodes, ..Default::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    Yes(IntFlow),
    No,
    Unknown,
}

impl OracleVerdict {
    pub fn word(&self) -> &'static str {
        match self {
            OracleVerdict::Yes(_) => "yes",
            OracleVerdict::No => "no",
            OracleVerdict::Unknown => "unknown",
        }
    }

    pub fn is_yes(&self) -> bool {
        matches!(self, OracleVerdict::Yes(_))
    }
}

/// Per-vertex incidence with boundary coefficients, loops listed once.
struct Frame {
    inc: Vec<Vec<(EdgeId, i64)>>,
    ends: Vec<Vec<(VertexId, i64)>>,
    order: Vec<EdgeId>,
}

impl Frame {
    fn new(g: &SignedGraph, o: &Orientation) -> Frame {
        let mut inc = vec![Vec::new(); g.vertex_bound()];
        let mut ends = vec![Vec::new(); g.edge_bound()];
        for v in g.vertices() {
            for &e in g.incident(v) {
                let c = o.coefficient_at(g, e, v);
                inc[v].push((e, c));
                ends[e].push((v, c));
            }
        }
        // BFS over vertices; an edge joins the order when its later end is reached
        let mut pos = vec![usize::MAX; g.vertex_bound()];
        let mut next = 0;
        for s in g.vertices() {
            if pos[s] != usize::MAX {
                continue;
            }
            pos[s] = next;
            next += 1;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for (_, w) in g.neighbors(u) {
                    if pos[w] == usize::MAX {
                        pos[w] = next;
                        next += 1;
                        q.push_back(w);
                    }
                }
            }
        }
        let mut order: Vec<EdgeId> = g.edge_ids().collect();
        order.sort_by_key(|&e| {
            let r = g.edge(e);
            (pos[r.u].max(pos[r.v]), pos[r.u].min(pos[r.v]), e)
        });
        Frame { inc, ends, order }
    }
}

enum Stop {
    Budget,
    Cancelled,
}

struct State<'a> {
    frame: &'a Frame,
    k: i64,
    value: Vec<Option<i64>>,
    partial: Vec<i64>,
    open: Vec<usize>,
    cap: Vec<i64>,
    trail: Vec<EdgeId>,
    nodes: u64,
    node_limit: u64,
    deadline: Option<Instant>,
    cancel: Option<(&'a [AtomicBool], usize)>,
}

impl<'a> State<'a> {
    fn new(frame: &'a Frame, g: &SignedGraph, k: i64) -> State<'a> {
        let mut open = vec![0; g.vertex_bound()];
        let mut cap = vec![0; g.vertex_bound()];
        for v in g.vertices() {
            open[v] = frame.inc[v].len();
            cap[v] = frame.inc[v].iter().map(|&(_, c)| c.abs()).sum();
        }
        State {
            frame,
            k,
            value: vec![None; g.edge_bound()],
            partial: vec![0; g.vertex_bound()],
            open,
            cap,
            trail: Vec::new(),
            nodes: 0,
            node_limit: u64::MAX,
            deadline: None,
            cancel: None,
        }
    }

    /// Assigns and reports whether every touched vertex stays feasible.
    fn assign(&mut self, e: EdgeId, x: i64) -> bool {
        self.value[e] = Some(x);
        self.trail.push(e);
        let mut ok = true;
        for &(v, c) in &self.frame.ends[e] {
            self.partial[v] += c * x;
            self.open[v] -= 1;
            self.cap[v] -= c.abs();
            if self.partial[v].abs() > self.cap[v] * (self.k - 1) {
                ok = false;
            }
        }
        ok
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let e = self.trail.pop().unwrap();
            let x = self.value[e].take().unwrap();
            for &(v, c) in &self.frame.ends[e] {
                self.partial[v] -= c * x;
                self.open[v] += 1;
                self.cap[v] += c.abs();
            }
        }
    }

    /// Fills edges forced by a vertex with a single open edge.
    fn propagate(&mut self, mut touched: Vec<VertexId>) -> bool {
        while let Some(v) = touched.pop() {
            if self.open[v] != 1 {
                continue;
            }
            let Some(&(e, c)) = self.frame.inc[v].iter().find(|(e, _)| self.value[*e].is_none()) else {
                continue;
            };
            let x = if c == 0 {
                if self.partial[v] != 0 {
                    return false;
                }
                1
            } else {
                if self.partial[v] % c != 0 {
                    return false;
                }
                -self.partial[v] / c
            };
            if x == 0 || x.abs() > self.k - 1 || !self.assign(e, x) {
                return false;
            }
            touched.extend(self.frame.ends[e].iter().map(|&(w, _)| w));
        }
        true
    }

    fn tick(&mut self) -> Result<(), Stop> {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return Err(Stop::Budget);
        }
        if self.nodes & 1023 == 0 {
            if self.deadline.is_some_and(|d| Instant::now() > d) {
                return Err(Stop::Budget);
            }
            if let Some((flags, me)) = self.cancel {
                if flags[..me].iter().any(|f| f.load(Ordering::Relaxed)) {
                    return Err(Stop::Cancelled);
                }
            }
        }
        Ok(())
    }

    fn values(&self) -> impl Iterator<Item = i64> {
        let k = self.k;
        (1..k).flat_map(|a| [a, -a])
    }

    fn dfs(&mut self, from: usize) -> Result<bool, Stop> {
        self.tick()?;
        let Some(i) = (from..self.frame.order.len()).find(|&i| self.value[self.frame.order[i]].is_none()) else {
            return Ok(true);
        };
        let e = self.frame.order[i];
        let vals: Vec<i64> = self.values().collect();
        for x in vals {
            let mark = self.trail.len();
            if self.assign(e, x) {
                let touched = self.frame.ends[e].iter().map(|&(w, _)| w).collect();
                if self.propagate(touched) && self.dfs(i + 1)? {
                    return Ok(true);
                }
            }
            self.undo_to(mark);
        }
        Ok(false)
    }

    fn flow(&self) -> IntFlow {
        self.value.iter().enumerate().filter_map(|(e, x)| x.map(|x| (e, x))).collect()
    }
}

/// Searches for a nowhere-zero `k`-flow agreeing with `fixed` on the edges it
/// covers.
pub fn extend_flow(g: &SignedGraph, o: &Orientation, k: i64, fixed: &IntFlow, budget: SearchBudget) -> OracleVerdict {
    if k < 2 {
        return if g.edge_count() == 0 { OracleVerdict::Yes(IntFlow::new()) } else { OracleVerdict::No };
    }
    let frame = Frame::new(g, o);
    let mut root = State::new(&frame, g, k);
    root.deadline = budget.time.map(|t| Instant::now() + t);
    for (e, &x) in fixed.iter() {
        if !g.has_edge(e) || x == 0 || x.abs() > k - 1 {
            return OracleVerdict::No;
        }
        if !root.assign(e, x) {
            return OracleVerdict::No;
        }
    }
    if g.vertices().any(|v| root.open[v] == 0 && root.partial[v] != 0) {
        return OracleVerdict::No;
    }
    let all: Vec<VertexId> = g.vertices().collect();
    if !root.propagate(all) {
        return OracleVerdict::No;
    }
    let Some(first) = frame.order.iter().position(|&e| root.value[e].is_none()) else {
        return finish(g, o, k, root.flow());
    };
    let e0 = frame.order[first];
    // negating a flow gives a flow, so without prescriptions one sign suffices
    let vals: Vec<i64> = if fixed.is_empty() { (1..k).collect() } else { root.values().collect() };
    let width = budget.width.max(1).min(vals.len());
    let per_worker = budget.nodes / width as u64;
    let found: Vec<AtomicBool> = (0..vals.len()).map(|_| AtomicBool::new(false)).collect();

    let run = |idx: usize, state: &mut State| -> Result<Option<IntFlow>, Stop> {
        let x = vals[idx];
        let mark = state.trail.len();
        let mut out = None;
        if state.assign(e0, x) {
            let touched = frame.ends[e0].iter().map(|&(w, _)| w).collect();
            if state.propagate(touched) && state.dfs(first + 1)? {
                out = Some(state.flow());
            }
        }
        state.undo_to(mark);
        Ok(out)
    };

    let results: Vec<Result<Option<IntFlow>, Stop>> = if width == 1 {
        let mut st = root;
        st.node_limit = budget.nodes;
        let mut out = Vec::new();
        for idx in 0..vals.len() {
            let r = run(idx, &mut st);
            let stop = !matches!(r, Ok(None));
            out.push(r);
            if stop {
                break;
            }
        }
        out
    } else {
        let mut slots: Vec<Option<Result<Option<IntFlow>, Stop>>> = (0..vals.len()).map(|_| None).collect();
        std::thread::scope(|s| {
            let chunks: Vec<Vec<usize>> = (0..width).map(|w| (w..vals.len()).step_by(width).collect()).collect();
            let handles: Vec<_> = chunks
                .into_iter()
                .map(|idxs| {
                    let mut st = State::new(&frame, g, k);
                    for &e in &root.trail {
                        st.assign(e, root.value[e].unwrap());
                    }
                    st.node_limit = per_worker;
                    st.deadline = root.deadline;
                    let run = &run;
                    let found = &found;
                    s.spawn(move || {
                        let mut out = Vec::new();
                        for idx in idxs {
                            st.cancel = Some((&found[..], idx));
                            let r = run(idx, &mut st);
                            if let Ok(Some(_)) = r {
                                found[idx].store(true, Ordering::Relaxed);
                            }
                            let stop = !matches!(r, Ok(None));
                            out.push((idx, r));
                            if stop {
                                break;
                            }
                        }
                        out
                    })
                })
                .collect();
            for h in handles {
                for (idx, r) in h.join().expect("search worker panicked") {
                    slots[idx] = Some(r);
                }
            }
        });
        // first slot in order decides; an empty slot means its worker stopped early
        let mut out = Vec::new();
        for s in slots {
            match s {
                Some(r) => {
                    let stop = !matches!(r, Ok(None));
                    out.push(r);
                    if stop {
                        break;
                    }
                }
                None => {
                    out.push(Err(Stop::Budget));
                    break;
                }
            }
        }
        out
    };

    for r in results {
        match r {
            Ok(Some(f)) => return finish(g, o, k, f),
            Ok(None) => {}
            Err(Stop::Budget) | Err(Stop::Cancelled) => return OracleVerdict::Unknown,
        }
    }
    OracleVerdict::No
}

fn finish(g: &SignedGraph, o: &Orientation, k: i64, f: IntFlow) -> OracleVerdict {
    assert!(verify_flow(g, o, &f, k).is_accept(), "search produced an invalid flow");
    OracleVerdict::Yes(f)
}

/// Exhaustive search for a nowhere-zero `k`-flow.
pub fn nz_kflow_exists(g: &SignedGraph, o: &Orientation, k: i64, budget: SearchBudget) -> OracleVerdict {
    extend_flow(g, o, k, &IntFlow::new(), budget)
}

/// Every flow-admissible signed graph has a nowhere-zero 11-flow, so a
/// search at that bound decides admissibility.
pub const ADMISSIBILITY_K: i64 = 11;

/// `Some(true)` iff some nowhere-zero integer flow exists; `None` when the
/// budget runs out.
pub fn brute_flow_admissible(g: &SignedGraph, budget: SearchBudget) -> Option<bool> {
    let o = Orientation::canonical(g);
    match nz_kflow_exists(g, &o, ADMISSIBILITY_K, budget) {
        OracleVerdict::Yes(_) => Some(true),
        OracleVerdict::No => Some(false),
        OracleVerdict::Unknown => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigraph::{Sign::*, Dir};

    #[test]
    fn positive_cycle_has_two_flow() {
        let g = SignedGraph::from_edges(3, &[(0, 1, Positive), (1, 2, Positive), (2, 0, Positive)]);
        let o = Orientation::canonical(&g);
        assert!(nz_kflow_exists(&g, &o, 2, SearchBudget::default()).is_yes());
    }

    #[test]
    fn negative_loop_has_no_flow() {
        let g = SignedGraph::from_edges(1, &[(0, 0, Negative)]);
        let o = Orientation::canonical(&g);
        for k in 2..8 {
            assert_eq!(nz_kflow_exists(&g, &o, k, SearchBudget::default()), OracleVerdict::No);
        }
        assert_eq!(brute_flow_admissible(&g, SearchBudget::default()), Some(false));
    }

    #[test]
    fn handcuff_three_flow() {
        let g = SignedGraph::from_edges(2, &[(0, 0, Negative), (0, 1, Positive), (1, 1, Negative)]);
        let o = Orientation::canonical(&g);
        let OracleVerdict::Yes(f) = nz_kflow_exists(&g, &o, 3, SearchBudget::default()) else { panic!() };
        assert_eq!(f.at(1).abs(), 2);
        assert_eq!(nz_kflow_exists(&g, &o, 2, SearchBudget::default()), OracleVerdict::No);
    }

    #[test]
    fn fixed_values_are_respected() {
        // three parallel edges, all leaving vertex 0
        let g = SignedGraph::from_edges(2, &[(0, 1, Positive); 3]);
        let mut o = Orientation::canonical(&g);
        o.set(0, [Dir::Away, Dir::Toward]);
        let fixed: IntFlow = [(0, 1), (1, 2), (2, -3)].into_iter().collect();
        let OracleVerdict::Yes(f) = extend_flow(&g, &o, 6, &fixed, SearchBudget::default()) else { panic!() };
        assert_eq!(f, fixed);
        let bad: IntFlow = [(0, 1), (1, 1)].into_iter().collect();
        assert_eq!(extend_flow(&g, &o, 2, &bad, SearchBudget::default()), OracleVerdict::No);
    }

    #[test]
    fn tiny_budget_is_unknown() {
        let mut edges = Vec::new();
        for a in 0..6 {
            for b in a + 1..6 {
                edges.push((a, b, if (a + b) % 3 == 0 { Negative } else { Positive }));
            }
        }
        let g = SignedGraph::from_edges(6, &edges);
        let o = Orientation::canonical(&g);
        assert_eq!(nz_kflow_exists(&g, &o, 2, SearchBudget::nodes(3)), OracleVerdict::Unknown);
    }

    #[test]
    fn parallel_split_matches_sequential() {
        let mut edges = Vec::new();
        for a in 0..4 {
            for b in a + 1..4 {
                edges.push((a, b, Negative));
            }
        }
        let g = SignedGraph::from_edges(4, &edges);
        let o = Orientation::canonical(&g);
        for k in 2..6 {
            let seq = nz_kflow_exists(&g, &o, k, SearchBudget::default());
            let par = nz_kflow_exists(&g, &o, k, SearchBudget { width: 3, ..Default::default() });
            assert_eq!(seq, par);
        }
    }
}
