//! `Z3` preflows along a selected cycle list: parity subdivision, signature
//! normalization, the single-cycle boundary solver and the builder.

use crate::error::{Error, Result};
use crate::select::{CycleKind, CycleList};
use crate::sigraph::{
    boundary_at, subdivide_edge, switch_at_vertex, Cycle, EdgeId, Orientation, SignedGraph, VertexId,
    VertexSet, Z3Assignment, Z3,
};
use crate::structure::block_cut_tree;

/// One subdivided cycle edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subdivision {
    pub record: usize,
    pub edge: EdgeId,
    pub vertex: VertexId,
    pub new_edge: EdgeId,
}

#[derive(Clone, Debug)]
pub struct Subdivided {
    pub graph: SignedGraph,
    pub orientation: Orientation,
    pub list: CycleList,
    pub subdivisions: Vec<Subdivision>,
}

impl Subdivided {
    /// The degree-2 vertex on record `k`, if it was subdivided.
    pub fn subdivision_vertex(&self, k: usize) -> Option<VertexId> {
        self.subdivisions.iter().find(|s| s.record == k).map(|s| s.vertex)
    }
}

/// Subdivides the lowest-id edge of every special and every even ordinary
/// cycle.
pub fn subdivide_for_parity(g: &SignedGraph, o: &Orientation, cl: &CycleList) -> Result<Subdivided> {
    let mut graph = g.clone();
    let mut orientation = o.clone();
    let mut list = cl.clone();
    let mut subdivisions = Vec::new();
    for (k, rec) in list.records.iter_mut().enumerate() {
        let wanted = rec.kind == CycleKind::NegativeSpecial || rec.is_even_ordinary();
        if !wanted {
            continue;
        }
        let i = (0..rec.edges.len())
            .min_by_key(|&i| rec.edges[i])
            .ok_or_else(|| Error::contract(format!("record {k} has no edges to subdivide")))?;
        let e = rec.edges[i];
        let from = rec.vertices[i];
        let u = graph.edge(e).u;
        let (x, e2) = subdivide_edge(&mut graph, &mut orientation, e)?;
        // `e` now joins its old first end to `x`; `e2` joins `x` to the other end
        let (first, second) = if u == from { (e, e2) } else { (e2, e) };
        rec.edges[i] = first;
        rec.edges.insert(i + 1, second);
        rec.vertices.insert(i + 1, x);
        subdivisions.push(Subdivision { record: k, edge: e, vertex: x, new_edge: e2 });
    }
    Ok(Subdivided { graph, orientation, list, subdivisions })
}

/// Switches on cycle vertices so positive cycles become all positive,
/// ordinary cycles all negative and a fish has a single negative edge.
/// Returns the switched vertices in order (a vertex may repeat).
pub fn normalize_cycle_signature(g: &mut SignedGraph, o: &mut Orientation, cl: &CycleList) -> Result<Vec<VertexId>> {
    let mut switched = Vec::new();
    for (k, rec) in cl.records.iter().enumerate() {
        match rec.kind {
            CycleKind::Positive | CycleKind::NegativeOrdinary if !rec.edges.is_empty() => {
                let want_negative = rec.kind == CycleKind::NegativeOrdinary;
                if want_negative && rec.len() % 2 == 0 {
                    return Err(Error::contract(format!("ordinary record {k} has even length")));
                }
                let n = rec.len();
                for i in 1..n {
                    if g.sign(rec.edges[i - 1]).is_negative() != want_negative {
                        switch_at_vertex(g, o, rec.vertices[i])?;
                        switched.push(rec.vertices[i]);
                    }
                }
                if g.sign(rec.edges[n - 1]).is_negative() != want_negative {
                    return Err(Error::invariant(format!("record {k} cannot be normalized: wrong cycle sign")));
                }
            }
            CycleKind::Fish => {
                let cert = rec.fish.as_ref().ok_or_else(|| Error::contract("fish record without certificate"))?;
                for &v in &cert.switching {
                    switch_at_vertex(g, o, v)?;
                    switched.push(v);
                }
                let neg: Vec<EdgeId> = rec.edges.iter().copied().filter(|&e| g.sign(e).is_negative()).collect();
                if neg != [cert.negative_edge] {
                    return Err(Error::invariant(format!("fish normalization left negative edges {neg:?}")));
                }
            }
            _ => {}
        }
    }
    Ok(switched)
}

/// Values on the edges of `c` with boundary `b[i]` at `c.vertices[i]`, when
/// they exist. Fixes the first edge to a free `t`, propagates around the
/// cycle and solves the closing equation; a free `t` is chosen to avoid
/// zero values.
pub fn solve_cycle_boundary(g: &SignedGraph, o: &Orientation, c: &Cycle, b: &[Z3]) -> Option<Z3Assignment> {
    let n = c.len();
    if n == 0 || b.len() != n {
        return None;
    }
    let coef = |e: EdgeId, v: VertexId| Z3::new(o.coefficient_at(g, e, v));
    if n == 1 {
        let k = coef(c.edges[0], c.vertices[0]);
        let mut out = Z3Assignment::new();
        if k.is_zero() {
            if !b[0].is_zero() {
                return None;
            }
            out.set(c.edges[0], Z3::new(1));
        } else {
            out.set(c.edges[0], b[0] * k.inverse());
        }
        return Some(out);
    }
    // tau_i = alpha_i + beta_i * t on edge i, which joins v_i and v_{i+1}
    let mut alpha = vec![Z3::new(0); n];
    let mut beta = vec![Z3::new(0); n];
    beta[0] = Z3::new(1);
    for i in 1..n {
        let v = c.vertices[i];
        let (prev, cur) = (c.edges[i - 1], c.edges[i]);
        let inv = coef(cur, v).inverse();
        alpha[i] = (b[i] - coef(prev, v) * alpha[i - 1]) * inv;
        beta[i] = -(coef(prev, v) * beta[i - 1]) * inv;
    }
    let v0 = c.vertices[0];
    let (last, first) = (c.edges[n - 1], c.edges[0]);
    let a = coef(last, v0) * alpha[n - 1] + coef(first, v0) * alpha[0];
    let bb = coef(last, v0) * beta[n - 1] + coef(first, v0) * beta[0];
    let ts: Vec<Z3> = if bb.is_zero() {
        if a != b[0] {
            return None;
        }
        Z3::all().to_vec()
    } else {
        vec![(b[0] - a) * bb.inverse()]
    };
    let t = ts
        .into_iter()
        .min_by_key(|&t| (0..n).filter(|&i| (alpha[i] + beta[i] * t).is_zero()).count())
        .expect("at least one candidate");
    let mut out = Z3Assignment::new();
    for i in 0..n {
        out.set(c.edges[i], alpha[i] + beta[i] * t);
    }
    Some(out)
}

/// Edges around record `k`: `up`/`down` are the vertices of later/earlier
/// records, `e_k`/`f_k` the edges from the record to them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleContext {
    pub up: VertexSet,
    pub down: VertexSet,
    /// `(vertex on the record, edge)` pairs.
    pub e_k: Vec<(VertexId, EdgeId)>,
    pub f_k: Vec<(VertexId, EdgeId)>,
    pub chords: Vec<EdgeId>,
}

/// Record index of every covered vertex.
pub fn owners(g: &SignedGraph, cl: &CycleList) -> Vec<usize> {
    let mut owner = vec![usize::MAX; g.vertex_bound()];
    for (i, r) in cl.records.iter().enumerate() {
        r.vertices.iter().for_each(|&v| owner[v] = i);
    }
    owner
}

pub fn cycle_context(g: &SignedGraph, cl: &CycleList, k: usize) -> CycleContext {
    let owner = owners(g, cl);
    let mut up = g.empty_set();
    let mut down = g.empty_set();
    for v in g.vertices() {
        if owner[v] != usize::MAX && owner[v] > k {
            up.insert(v);
        } else if owner[v] < k {
            down.insert(v);
        }
    }
    let rec = &cl.records[k];
    let (mut e_k, mut f_k, mut chords) = (Vec::new(), Vec::new(), Vec::new());
    for &v in &rec.vertices {
        for &e in g.incident(v) {
            let w = g.edge(e).other(v);
            if up.contains(w) {
                e_k.push((v, e));
            } else if down.contains(w) {
                f_k.push((v, e));
            } else if !rec.edges.contains(&e) && v < w && owner[w] == k {
                chords.push(e);
            }
        }
    }
    CycleContext { up, down, e_k, f_k, chords }
}

/// A sign flip of the partial preflow on every edge touching `vertices`,
/// applied while processing `record`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Negation {
    pub record: usize,
    pub vertices: Vec<VertexId>,
}

/// A `Z3` preflow together with the (switched) graph it lives on.
#[derive(Clone, Debug)]
pub struct Z3Preflow {
    pub graph: SignedGraph,
    pub orientation: Orientation,
    pub phi: Z3Assignment,
    pub negations: Vec<Negation>,
}

impl Z3Preflow {
    pub fn zero_edges(&self) -> Vec<EdgeId> {
        self.phi.iter().filter(|(_, x)| x.is_zero()).map(|(e, _)| e).collect()
    }

    /// Checks the preflow law, that zeros form a matching, and that zeros sit
    /// only on special cycles, positive cycles or a fish's distinguished edge.
    pub fn audit(&self, cl: &CycleList) -> Result<()> {
        audit_preflow(&self.graph, &self.orientation, &self.phi, cl)
    }

    /// `phi <edge> <0|1|2>` lines.
    pub fn trace_lines(&self) -> Vec<String> {
        self.phi.iter().map(|(e, x)| format!("phi {e} {x}")).collect()
    }
}

pub fn audit_preflow(g: &SignedGraph, o: &Orientation, phi: &Z3Assignment, cl: &CycleList) -> Result<()> {
    if !phi.covers_exactly(g) {
        return Err(Error::invariant("preflow does not cover every edge exactly"));
    }
    for v in g.vertices() {
        let nonzero = !boundary_at(g, o, phi, v).is_zero();
        let low = matches!(g.degree(v), 1 | 2);
        if nonzero != low {
            return Err(Error::invariant(format!("preflow law fails at vertex {v} (degree {})", g.degree(v))));
        }
    }
    let mut seen = g.empty_set();
    for (e, x) in phi.iter() {
        if !x.is_zero() {
            continue;
        }
        let r = g.edge(e);
        if seen.contains(r.u) || seen.contains(r.v) || r.is_loop() {
            return Err(Error::invariant(format!("zero edges meet at edge {e}")));
        }
        seen.insert(r.u);
        seen.insert(r.v);
        let allowed = cl.records.iter().any(|rec| match rec.kind {
            CycleKind::Positive | CycleKind::NegativeSpecial => rec.edges.contains(&e),
            CycleKind::Fish => rec.fish.as_ref().is_some_and(|c| c.distinguished == e),
            CycleKind::NegativeOrdinary => false,
        });
        if !allowed {
            return Err(Error::invariant(format!("zero on edge {e} outside special, positive and distinguished edges")));
        }
    }
    Ok(())
}

struct Builder<'a> {
    g: &'a SignedGraph,
    o: &'a Orientation,
    cl: &'a CycleList,
    owner: Vec<usize>,
    phi: Z3Assignment,
    negations: Vec<Negation>,
}

impl Builder<'_> {
    fn coef(&self, e: EdgeId, v: VertexId) -> Z3 {
        Z3::new(self.o.coefficient_at(self.g, e, v))
    }

    fn ext(&self, v: VertexId) -> Z3 {
        boundary_at(self.g, self.o, &self.phi, v)
    }

    fn fail(&self, k: usize, case: &str, msg: impl std::fmt::Display) -> Error {
        Error::invariant(format!("record {k} ({case}): {msg}"))
    }

    /// Sets the cycle of record `k` so every vertex reaches its target,
    /// `targets[i]` being the wanted boundary at `vertices[i]`.
    fn solve(&mut self, k: usize, case: &str, targets: &[Z3]) -> Result<()> {
        let rec = &self.cl.records[k];
        if rec.edges.is_empty() {
            return if targets.iter().zip(&rec.vertices).all(|(&t, &v)| self.ext(v) == t) {
                Ok(())
            } else {
                Err(self.fail(k, case, "single vertex left with the wrong boundary"))
            };
        }
        let c = rec.cycle().expect("cycle record");
        let b: Vec<Z3> = rec.vertices.iter().zip(targets).map(|(&v, &t)| t - self.ext(v)).collect();
        let tau = solve_cycle_boundary(self.g, self.o, &c, &b)
            .ok_or_else(|| self.fail(k, case, "cycle boundary system unsolvable"))?;
        for (e, x) in tau.iter() {
            self.phi.set(e, *x);
        }
        Ok(())
    }

    fn negative_ordinary(&mut self, k: usize, ctx: &CycleContext) -> Result<()> {
        const CASE: &str = "negative ordinary";
        let rec = &self.cl.records[k];
        if !ctx.chords.is_empty() {
            return Err(self.fail(k, CASE, "cycle has a chord"));
        }
        if ctx.e_k.len() > 1 {
            return Err(self.fail(k, CASE, "several edges to later records"));
        }
        for &e in &rec.edges {
            let r = self.g.edge(e);
            if self.coef(e, r.u) != self.coef(e, r.v) {
                return Err(self.fail(k, CASE, format!("cycle edge {e} is not negative")));
            }
        }
        // each vertex sees 2a from the cycle; a vertex with an E-edge needs a = ext
        let a = match ctx.e_k.first() {
            Some(&(w, _)) => self.ext(w),
            None => Z3::new(1),
        };
        if a.is_zero() {
            return Err(self.fail(k, CASE, "zero boundary from a later record"));
        }
        for &e in &rec.edges {
            let u = self.g.edge(e).u;
            self.phi.set(e, a * self.coef(e, u));
        }
        for &(v, f) in &ctx.f_k {
            let x = -(self.ext(v) * self.coef(f, v));
            self.phi.set(f, x);
        }
        Ok(())
    }

    fn negative_special(&mut self, k: usize, ctx: &CycleContext) -> Result<()> {
        const CASE: &str = "negative special";
        for &e in ctx.chords.iter().chain(ctx.f_k.iter().map(|(_, f)| f)) {
            self.phi.set(e, Z3::new(1));
        }
        let rec = &self.cl.records[k];
        let twos: Vec<usize> = (0..rec.vertices.len()).filter(|&i| self.g.degree(rec.vertices[i]) == 2).collect();
        if twos.len() != 1 {
            return Err(self.fail(k, CASE, format!("{} degree-2 vertices", twos.len())));
        }
        let mut best: Option<(usize, Z3Assignment)> = None;
        for lift in [Z3::new(1), Z3::new(2)] {
            let mut targets = vec![Z3::new(0); rec.vertices.len()];
            targets[twos[0]] = lift;
            let mut trial = Builder {
                g: self.g,
                o: self.o,
                cl: self.cl,
                owner: Vec::new(),
                phi: self.phi.clone(),
                negations: Vec::new(),
            };
            trial.solve(k, CASE, &targets)?;
            let zeros = rec.edges.iter().filter(|&&e| trial.phi.at(e).is_zero()).count();
            if best.as_ref().is_none_or(|(z, _)| zeros < *z) {
                best = Some((zeros, trial.phi));
            }
        }
        self.phi = best.expect("two trials").1;
        Ok(())
    }

    fn positive(&mut self, k: usize, ctx: &CycleContext) -> Result<()> {
        const CASE: &str = "positive";
        for &e in &ctx.chords {
            self.phi.set(e, Z3::new(1));
        }
        let rec = &self.cl.records[k];
        let sum = |b: &Self| rec.vertices.iter().fold(Z3::new(0), |acc, &v| acc + b.ext(v));
        match ctx.f_k.len() {
            0 => return Err(self.fail(k, CASE, "no edge to an earlier record")),
            1 => {
                let (x, f) = ctx.f_k[0];
                if sum(self).is_zero() {
                    self.negate_beyond_cut_edge(k, x, ctx)?;
                }
                let s = sum(self);
                if s.is_zero() {
                    return Err(self.fail(k, CASE, "boundary sum still zero after negation"));
                }
                self.phi.set(f, -(s * self.coef(f, x)));
            }
            m => {
                let s0 = sum(self);
                // j terms of -1 and m - j of +1 sum to m - 2j
                let j = (0..=m)
                    .find(|&j| Z3::new(m as i64 - 2 * j as i64) == -s0)
                    .ok_or_else(|| self.fail(k, CASE, "no sign pattern for the back edges"))?;
                for (i, &(v, f)) in ctx.f_k.iter().enumerate() {
                    let term = Z3::new(if i < j { -1 } else { 1 });
                    self.phi.set(f, term * self.coef(f, v));
                }
            }
        }
        let targets = vec![Z3::new(0); rec.vertices.len()];
        self.solve(k, CASE, &targets)
    }

    /// Negates the partial preflow on every edge touching the far side of a
    /// cut edge leaving the cycle at a vertex other than `x`.
    fn negate_beyond_cut_edge(&mut self, k: usize, x: VertexId, ctx: &CycleContext) -> Result<()> {
        let rec = &self.cl.records[k];
        let mut keep = ctx.up.clone();
        rec.vertices.iter().for_each(|&v| keep.insert(v));
        let h = self.g.induced(&keep);
        let tree = block_cut_tree(&h);
        let bridges: Vec<EdgeId> = tree.blocks.iter().filter(|b| b.is_bridge(&h)).map(|b| b.edges[0]).collect();
        let &(y, e) = ctx
            .e_k
            .iter()
            .find(|&&(y, e)| y != x && bridges.contains(&e))
            .ok_or_else(|| self.fail(k, "positive", "single back edge and no cut edge"))?;
        let mut far = h.clone();
        far.remove_vertex(y);
        let start = self.g.edge(e).other(y);
        let side: Vec<VertexId> = crate::sigraph::components(&far)
            .into_iter()
            .find(|c| c.contains(&start))
            .expect("far end present");
        let mut set = self.g.empty_set();
        side.iter().for_each(|&v| set.insert(v));
        let touched: Vec<EdgeId> = self
            .phi
            .iter()
            .map(|(d, _)| d)
            .filter(|&d| {
                let r = self.g.edge(d);
                set.contains(r.u) || set.contains(r.v)
            })
            .collect();
        for d in touched {
            let x = self.phi.at(d);
            self.phi.set(d, -x);
        }
        self.negations.push(Negation { record: k, vertices: side });
        Ok(())
    }

    fn fish(&mut self, k: usize, ctx: &CycleContext) -> Result<()> {
        const CASE: &str = "fish";
        let rec = &self.cl.records[k];
        let cert = rec.fish.as_ref().ok_or_else(|| self.fail(k, CASE, "missing certificate"))?;
        if !ctx.e_k.is_empty() {
            return Err(self.fail(k, CASE, "fish is not the last record"));
        }
        let d = cert.distinguished;
        let dr = self.g.edge(d).clone();
        let fish_edges: Vec<EdgeId> = rec.edges.iter().copied().filter(|&e| e != d).collect();
        let at = |v: VertexId| -> Vec<EdgeId> {
            fish_edges.iter().copied().filter(|&e| self.g.edge(e).touches(v)).collect()
        };
        // terms at r and s cancel; elsewhere all terms at a vertex agree
        let mut val: std::collections::HashMap<EdgeId, Z3> = std::collections::HashMap::new();
        let start = *fish_edges.first().ok_or_else(|| self.fail(k, CASE, "empty fish"))?;
        val.insert(start, Z3::new(1));
        let mut queue = vec![start];
        while let Some(e) = queue.pop() {
            let r = self.g.edge(e).clone();
            for v in r.ends() {
                let rel = if dr.touches(v) { Z3::new(-1) } else { Z3::new(1) };
                let term = self.coef(e, v) * val[&e];
                for e2 in at(v) {
                    if e2 == e {
                        continue;
                    }
                    let want = rel * term * self.coef(e2, v);
                    match val.get(&e2) {
                        Some(&x) if x != want => return Err(self.fail(k, CASE, format!("inconsistent at vertex {v}"))),
                        Some(_) => {}
                        None => {
                            val.insert(e2, want);
                            queue.push(e2);
                        }
                    }
                }
            }
        }
        if val.len() != fish_edges.len() {
            return Err(self.fail(k, CASE, "fish edges not connected"));
        }
        for (e, x) in val {
            self.phi.set(e, x);
        }
        self.phi.set(d, Z3::new(0));
        for &(v, f) in &ctx.f_k {
            let b = self.ext(v);
            if b.is_zero() {
                return Err(self.fail(k, CASE, format!("vertex {v} balanced before its back edge")));
            }
            self.phi.set(f, -(b * self.coef(f, v)));
        }
        Ok(())
    }
}

/// Builds the preflow in reverse list order on a subdivided, normalized
/// graph.
pub fn build_preflow(g: &SignedGraph, o: &Orientation, cl: &CycleList) -> Result<Z3Preflow> {
    let mut b = Builder { g, o, cl, owner: owners(g, cl), phi: Z3Assignment::new(), negations: Vec::new() };
    if let Some(v) = g.vertices().find(|&v| b.owner[v] == usize::MAX) {
        return Err(Error::contract(format!("vertex {v} is not covered by the list")));
    }
    for k in (0..cl.len()).rev() {
        let ctx = cycle_context(g, cl, k);
        match cl.records[k].kind {
            CycleKind::Fish => b.fish(k, &ctx)?,
            CycleKind::NegativeOrdinary => b.negative_ordinary(k, &ctx)?,
            CycleKind::NegativeSpecial => b.negative_special(k, &ctx)?,
            CycleKind::Positive => b.positive(k, &ctx)?,
        }
    }
    let pre = Z3Preflow { graph: g.clone(), orientation: o.clone(), phi: b.phi, negations: b.negations };
    pre.audit(cl)?;
    Ok(pre)
}
