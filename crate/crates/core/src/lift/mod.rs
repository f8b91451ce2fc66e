//! From a `Z3` preflow to an integer 8-flow: the auxiliary graph, its
//! perfect matching, the integer lift `psi`, the cycle flow `tau` and the
//! sum `2 psi + tau`.

mod matching;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::preflow::{Subdivided, Z3Preflow};
use crate::select::{CycleKind, CycleList};
use crate::sigraph::{
    boundary_at, smooth_degree2_vertex, Cycle, EdgeId, IntFlow, Orientation, Sign, SignedGraph, VertexId, Z3,
};
use crate::structure::{doubly_straddled_four_cut, straddled_three_cut};

pub use matching::{is_perfect, matching_size, maximum_matching};

/// Integer preflow with values in `{0, ±1, ±2, ±3}`.
pub type IntPreflow = IntFlow;
/// Cycle flow with values in `{0, ±1}`.
pub type TauFlow = IntFlow;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuxVertex {
    Original(VertexId),
    /// Subdivision point on `edge` next to `at`, for the gadget of `zero`;
    /// `edge` is `None` for the helper edge towards the deleted vertex.
    Point { edge: Option<EdgeId>, at: VertexId, zero: EdgeId },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuxEdge {
    /// A piece of a nonzero edge; `middle` marks the piece that decides
    /// whether the edge is flipped.
    Segment { edge: EdgeId, middle: bool },
    /// What is left of a helper edge at a degree-2 vertex.
    Helper { at: VertexId },
    Zero(EdgeId),
    Gadget(EdgeId),
}

/// One gadget: `h1` is subdivided next to `u`, `h2` next to `u2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gadget {
    pub zero: EdgeId,
    pub u: VertexId,
    pub h1: Option<EdgeId>,
    pub u2: VertexId,
    pub h2: Option<EdgeId>,
}

#[derive(Clone, Debug)]
pub struct AuxiliaryGraph {
    pub vertices: Vec<AuxVertex>,
    pub edges: Vec<(usize, usize)>,
    pub edge_origin: Vec<AuxEdge>,
    pub gadgets: Vec<Gadget>,
    index: HashMap<VertexId, usize>,
    segments: HashMap<EdgeId, Vec<usize>>,
}

impl AuxiliaryGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn index_of(&self, v: VertexId) -> Option<usize> {
        self.index.get(&v).copied()
    }

    /// The single auxiliary edge of an edge that was not cut up.
    pub fn whole_edge(&self, e: EdgeId) -> Option<usize> {
        match self.segments.get(&e).map(Vec::as_slice) {
            Some([s]) => Some(*s),
            _ => None,
        }
    }

    pub fn degree(&self, a: usize) -> usize {
        self.edges.iter().map(|&(x, y)| usize::from(x == a) + usize::from(y == a)).sum()
    }

    /// As a signed graph with every edge positive; ids carry over.
    pub fn to_graph(&self) -> SignedGraph {
        let edges: Vec<_> = self.edges.iter().map(|&(x, y)| (x, y, Sign::Positive)).collect();
        SignedGraph::from_edges(self.vertices.len(), &edges)
    }

    pub fn maximum_matching(&self) -> Vec<Option<usize>> {
        maximum_matching(self.vertices.len(), &self.edges)
    }

    /// Auxiliary edges of a matching given by partners, lowest id per pair.
    pub fn matched_edges(&self, mate: &[Option<usize>]) -> Vec<usize> {
        let mut out = Vec::new();
        for (a, m) in mate.iter().enumerate() {
            let Some(b) = *m else { continue };
            if a < b {
                if let Some(i) = self.edges.iter().position(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a)) {
                    out.push(i);
                }
            }
        }
        out
    }

    pub fn trace_lines(&self) -> Vec<String> {
        let side = |h: Option<EdgeId>| h.map_or("w".to_string(), |e| e.to_string());
        self.gadgets
            .iter()
            .map(|g| format!("gadget {} {} {} {} {}", g.zero, g.u, side(g.h1), g.u2, side(g.h2)))
            .collect()
    }
}

fn coef(g: &SignedGraph, o: &Orientation, e: EdgeId, v: VertexId) -> i64 {
    o.coefficient_at(g, e, v)
}

/// `c(h, v) * phi(h)` as `±1`.
fn term(g: &SignedGraph, o: &Orientation, phi: &crate::sigraph::Z3Assignment, h: EdgeId, v: VertexId) -> i64 {
    coef(g, o, h, v) * phi.at(h).balanced()
}

/// Term of the helper edge at a degree-2 vertex: it cancels the boundary.
fn helper_term(g: &SignedGraph, o: &Orientation, phi: &crate::sigraph::Z3Assignment, v: VertexId) -> i64 {
    (-boundary_at(g, o, phi, v)).balanced()
}

fn check_shape(g: &SignedGraph, pre: &Z3Preflow) -> Result<()> {
    for v in g.vertices() {
        if !matches!(g.degree(v), 2 | 3) {
            return Err(Error::contract(format!("vertex {v} has degree {}", g.degree(v))));
        }
    }
    if let Some(e) = g.edges().find(|e| e.is_loop()) {
        return Err(Error::contract(format!("loop {} in the subdivided graph", e.id)));
    }
    let mut seen = g.empty_set();
    for z in pre.zero_edges() {
        let r = g.edge(z);
        if seen.contains(r.u) || seen.contains(r.v) {
            return Err(Error::contract(format!("zero edges are not a matching at edge {z}")));
        }
        seen.insert(r.u);
        seen.insert(r.v);
    }
    Ok(())
}

/// Builds the auxiliary graph of `pre`, whose graph has all degrees 2 or 3.
pub fn build_auxiliary(pre: &Z3Preflow) -> Result<AuxiliaryGraph> {
    let (g, o, phi) = (&pre.graph, &pre.orientation, &pre.phi);
    check_shape(g, pre)?;
    let mut vertices: Vec<AuxVertex> = g.vertices().map(AuxVertex::Original).collect();
    let index: HashMap<VertexId, usize> = g.vertices().enumerate().map(|(i, v)| (v, i)).collect();
    let mut edges = Vec::new();
    let mut edge_origin = Vec::new();
    let mut points: HashMap<(EdgeId, VertexId), usize> = HashMap::new();
    let mut gadgets = Vec::new();
    let mut gadget_edges = Vec::new();

    for z in pre.zero_edges() {
        let r = g.edge(z).clone();
        // the neighbour edge whose flip would push the zero edge up by 3
        let pick = |u: VertexId| -> Result<Option<EdgeId>> {
            let cz = coef(g, o, z, u);
            let mut real: Vec<EdgeId> = g
                .incident(u)
                .iter()
                .copied()
                .filter(|&h| h != z && term(g, o, phi, h, u) * cz == 1)
                .collect();
            real.sort_unstable();
            if let Some(&h) = real.first() {
                return Ok(Some(h));
            }
            if g.degree(u) == 2 && helper_term(g, o, phi, u) * cz == 1 {
                return Ok(None);
            }
            Err(Error::invariant(format!("no gadget edge at vertex {u} for zero edge {z}")))
        };
        let (h1, h2) = (pick(r.u)?, pick(r.v)?);
        let mut ends = [0usize; 2];
        for (slot, (h, at)) in [(h1, r.u), (h2, r.v)].into_iter().enumerate() {
            let a = vertices.len();
            vertices.push(AuxVertex::Point { edge: h, at, zero: z });
            ends[slot] = a;
            match h {
                Some(h) => {
                    points.insert((h, at), a);
                }
                None => {
                    edges.push((index[&at], a));
                    edge_origin.push(AuxEdge::Helper { at });
                }
            }
        }
        gadget_edges.push((ends, z));
        gadgets.push(Gadget { zero: z, u: r.u, h1, u2: r.v, h2 });
    }

    let mut segments: HashMap<EdgeId, Vec<usize>> = HashMap::new();
    for e in g.edges() {
        if phi.at(e.id).is_zero() {
            segments.insert(e.id, vec![edges.len()]);
            edges.push((index[&e.u], index[&e.v]));
            edge_origin.push(AuxEdge::Zero(e.id));
            continue;
        }
        let pu = points.get(&(e.id, e.u)).copied();
        let pv = points.get(&(e.id, e.v)).copied();
        let mut chain = vec![index[&e.u]];
        chain.extend(pu);
        chain.extend(pv);
        chain.push(index[&e.v]);
        // the middle piece avoids every point created at an end
        let middle = usize::from(pu.is_some());
        let mut ids = Vec::new();
        for (i, w) in chain.windows(2).enumerate() {
            ids.push(edges.len());
            edges.push((w[0], w[1]));
            edge_origin.push(AuxEdge::Segment { edge: e.id, middle: i == middle });
        }
        segments.insert(e.id, ids);
    }
    for ([a, b], z) in gadget_edges {
        edges.push((a, b));
        edge_origin.push(AuxEdge::Gadget(z));
    }
    Ok(AuxiliaryGraph { vertices, edges, edge_origin, gadgets, index, segments })
}

/// Which matching hypotheses hold for a graph and designated odd cycles,
/// each with its degree-2 vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingHypotheses {
    pub degree_two_even: bool,
    pub cycles_disjoint: bool,
    pub cycles_odd_through_designated: bool,
    pub undesignated_degree_two: usize,
    pub straddled_three_cut: Option<usize>,
    pub doubly_straddled_four_cut: Option<(usize, usize)>,
}

impl MatchingHypotheses {
    /// Names of the failing hypotheses.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.degree_two_even {
            out.push("odd number of degree-2 vertices");
        }
        if !self.cycles_disjoint {
            out.push("designated cycles intersect");
        }
        if !self.cycles_odd_through_designated {
            out.push("designated cycle even or missing its vertex");
        }
        if self.undesignated_degree_two >= 6 {
            out.push("six or more undesignated degree-2 vertices");
        }
        if self.straddled_three_cut.is_some() {
            out.push("designated cycle straddles a 3-edge-cut");
        }
        if self.doubly_straddled_four_cut.is_some() {
            out.push("two designated cycles straddle a 4-edge-cut");
        }
        out
    }

    pub fn hold(&self) -> bool {
        self.failures().is_empty()
    }
}

pub fn check_matching_hypotheses(h: &SignedGraph, cycles: &[(Cycle, VertexId)]) -> MatchingHypotheses {
    let twos: Vec<VertexId> = h.vertices().filter(|&v| h.degree(v) == 2).collect();
    let mut owner: HashMap<VertexId, usize> = HashMap::new();
    let mut disjoint = true;
    for (i, (c, _)) in cycles.iter().enumerate() {
        for &v in &c.vertices {
            disjoint &= owner.insert(v, i).is_none();
        }
    }
    let odd = cycles.iter().all(|(c, x)| c.len() % 2 == 1 && c.vertices.contains(x) && c.is_valid_in(h));
    let designated: Vec<VertexId> = cycles.iter().map(|&(_, x)| x).collect();
    let undesignated = twos.iter().filter(|v| !designated.contains(v)).count();
    let three = (0..cycles.len()).find(|&i| straddled_three_cut(h, &cycles[i].0).is_some());
    let mut four = None;
    'outer: for i in 0..cycles.len() {
        for j in i + 1..cycles.len() {
            if doubly_straddled_four_cut(h, &cycles[i].0, &cycles[j].0).is_some() {
                four = Some((i, j));
                break 'outer;
            }
        }
    }
    MatchingHypotheses {
        degree_two_even: twos.len() % 2 == 0,
        cycles_disjoint: disjoint,
        cycles_odd_through_designated: odd,
        undesignated_degree_two: undesignated,
        straddled_three_cut: three,
        doubly_straddled_four_cut: four,
    }
}

/// The even ordinary cycles except the last two, carried into the
/// auxiliary graph with their degree-2 vertices.
pub fn designated_cycles(aux: &AuxiliaryGraph, sub: &Subdivided) -> Result<Vec<(Cycle, VertexId)>> {
    let even: Vec<usize> = (0..sub.list.len())
        .filter(|&k| sub.list.records[k].kind == CycleKind::NegativeOrdinary && sub.subdivision_vertex(k).is_some())
        .collect();
    let mut out = Vec::new();
    for &k in &even[..even.len().saturating_sub(2)] {
        let rec = &sub.list.records[k];
        let x = sub.subdivision_vertex(k).expect("filtered");
        let mut c = Cycle { vertices: Vec::new(), edges: Vec::new() };
        for (&v, &e) in rec.vertices.iter().zip(&rec.edges) {
            let a = aux.index_of(v).ok_or_else(|| Error::invariant(format!("vertex {v} missing from auxiliary graph")))?;
            let s = aux
                .whole_edge(e)
                .ok_or_else(|| Error::invariant(format!("ordinary cycle edge {e} was cut by a gadget")))?;
            c.vertices.push(a);
            c.edges.push(s);
        }
        out.push((c, aux.index_of(x).expect("cycle vertex")));
    }
    Ok(out)
}

/// Decodes a perfect matching of the auxiliary graph into `psi`: an edge
/// is flipped from `r` to `-2r` when its middle piece is matched, and a
/// zero edge takes whatever multiple of 3 its ends then require. `None`
/// when the result breaks the contract.
pub fn decode_matching(pre: &Z3Preflow, aux: &AuxiliaryGraph, mate: &[Option<usize>]) -> Option<IntPreflow> {
    let (g, o, phi) = (&pre.graph, &pre.orientation, &pre.phi);
    if !is_perfect(mate) {
        return None;
    }
    let mut flipped: HashMap<EdgeId, bool> = HashMap::new();
    for i in aux.matched_edges(mate) {
        if let AuxEdge::Segment { edge, middle: true } = aux.edge_origin[i] {
            flipped.insert(edge, true);
        }
    }
    let mut psi = IntFlow::new();
    for e in g.edge_ids() {
        let r = phi.at(e).balanced();
        if r != 0 {
            psi.set(e, if flipped.contains_key(&e) { -2 * r } else { r });
        }
    }
    for z in pre.zero_edges() {
        let r = g.edge(z);
        let x = |u: VertexId| -> i64 {
            let s: i64 = g
                .incident(u)
                .iter()
                .filter(|&&h| h != z && flipped.contains_key(&h))
                .map(|&h| term(g, o, phi, h, u))
                .sum();
            coef(g, o, z, u) * s
        };
        if x(r.u) != x(r.v) {
            return None;
        }
        psi.set(z, 3 * x(r.u));
    }
    check_int_preflow(g, o, phi, &psi).is_ok().then_some(psi)
}

/// [`decode_matching`], falling back to a bounded search over lift classes.
pub fn lift_to_integer(pre: &Z3Preflow, aux: &AuxiliaryGraph, mate: &[Option<usize>]) -> Result<IntPreflow> {
    if !is_perfect(mate) {
        return Err(Error::contract("matching is not perfect"));
    }
    decode_matching(pre, aux, mate)
        .or_else(|| search_lift(&pre.graph, &pre.orientation, &pre.phi, 1_000_000))
        .ok_or_else(|| Error::invariant("matching did not decode and the lift search found nothing"))
}

/// The integer preflow contract: `psi = phi (mod 3)`, values in
/// `{0, ±1, ±2, ±3}`, zero boundary at degree 3 and `±1` at degree 2.
pub fn check_int_preflow(
    g: &SignedGraph,
    o: &Orientation,
    phi: &crate::sigraph::Z3Assignment,
    psi: &IntPreflow,
) -> Result<()> {
    if !psi.covers_exactly(g) {
        return Err(Error::invariant("integer preflow does not cover every edge"));
    }
    for e in g.edge_ids() {
        let x = psi.at(e);
        if x.abs() > 3 || Z3::new(x) != phi.at(e) {
            return Err(Error::invariant(format!("edge {e}: value {x} does not lift {}", phi.at(e))));
        }
    }
    for v in g.vertices() {
        let b = boundary_at(g, o, psi, v);
        let ok = match g.degree(v) {
            2 => b.abs() == 1,
            _ => b == 0,
        };
        if !ok {
            return Err(Error::invariant(format!("vertex {v}: boundary {b} at degree {}", g.degree(v))));
        }
    }
    Ok(())
}

/// Backtracking over the lift classes of every edge, bounded by `budget`
/// visited nodes.
pub fn search_lift(
    g: &SignedGraph,
    o: &Orientation,
    phi: &crate::sigraph::Z3Assignment,
    budget: u64,
) -> Option<IntPreflow> {
    let order: Vec<EdgeId> = g.edge_ids().collect();
    let options: Vec<Vec<i64>> = order
        .iter()
        .map(|&e| match phi.at(e).balanced() {
            0 => vec![0, 3, -3],
            r => vec![r, -2 * r],
        })
        .collect();
    // a vertex is checked once its last edge in `order` is set
    let mut last = vec![0usize; g.vertex_bound()];
    for (i, &e) in order.iter().enumerate() {
        for v in g.edge(e).ends() {
            last[v] = last[v].max(i);
        }
    }
    let mut closes: Vec<Vec<VertexId>> = vec![Vec::new(); order.len()];
    for v in g.vertices() {
        if g.degree(v) > 0 {
            closes[last[v]].push(v);
        }
    }
    let mut psi = IntFlow::new();
    let mut nodes = 0u64;
    fn go(
        i: usize,
        ctx: (&SignedGraph, &Orientation, &[EdgeId], &[Vec<i64>], &[Vec<VertexId>]),
        psi: &mut IntFlow,
        nodes: &mut u64,
        budget: u64,
    ) -> bool {
        let (g, o, order, options, closes) = ctx;
        if i == order.len() {
            return true;
        }
        for &x in &options[i] {
            *nodes += 1;
            if *nodes > budget {
                return false;
            }
            psi.set(order[i], x);
            let ok = closes[i].iter().all(|&v| {
                let b = boundary_at(g, o, psi, v);
                if g.degree(v) == 2 {
                    b.abs() == 1
                } else {
                    b == 0
                }
            });
            if ok && go(i + 1, ctx, psi, nodes, budget) {
                return true;
            }
        }
        psi.remove(order[i]);
        false
    }
    go(0, (g, o, &order, &options, &closes), &mut psi, &mut nodes, budget).then_some(psi)
}

/// `±1` values around `c` with zero boundary everywhere except `target` at
/// `c.vertices[0]`.
fn unit_cycle_flow(g: &SignedGraph, o: &Orientation, c: &Cycle, target: i64) -> Option<IntFlow> {
    let n = c.len();
    for s in [1, -1] {
        let mut tau = vec![0i64; n];
        tau[0] = s;
        for i in 1..n {
            let v = c.vertices[i];
            tau[i] = -coef(g, o, c.edges[i - 1], v) * coef(g, o, c.edges[i], v) * tau[i - 1];
        }
        let v0 = c.vertices[0];
        let b = if n == 1 {
            coef(g, o, c.edges[0], v0) * s
        } else {
            coef(g, o, c.edges[n - 1], v0) * tau[n - 1] + coef(g, o, c.edges[0], v0) * tau[0]
        };
        if b == target {
            return Some(c.edges.iter().copied().zip(tau).collect());
        }
    }
    None
}

fn rotate_to(c: &Cycle, x: VertexId) -> Option<Cycle> {
    let i = c.vertices.iter().position(|&v| v == x)?;
    let mut vertices = c.vertices.clone();
    let mut edges = c.edges.clone();
    vertices.rotate_left(i);
    edges.rotate_left(i);
    Some(Cycle { vertices, edges })
}

/// `tau` on the selected cycles: zero boundary except `-2 psi` at each
/// subdivision vertex.
pub fn build_tau(g: &SignedGraph, o: &Orientation, sub: &Subdivided, psi: &IntPreflow) -> Result<TauFlow> {
    let cl: &CycleList = &sub.list;
    let mut tau = TauFlow::new();
    for (k, rec) in cl.records.iter().enumerate() {
        let (cycle, target) = match rec.kind {
            CycleKind::Positive => match rec.cycle() {
                Some(c) => (c, 0),
                None => continue,
            },
            CycleKind::NegativeSpecial | CycleKind::NegativeOrdinary => {
                let Some(x) = sub.subdivision_vertex(k) else { continue };
                let c = rotate_to(&rec.cycle().expect("cycle record"), x).expect("vertex on its cycle");
                (c, -2 * boundary_at(g, o, psi, x))
            }
            CycleKind::Fish => {
                let cert = rec.fish.as_ref().ok_or_else(|| Error::invariant("fish record without certificate"))?;
                (cert.distinguished_cycle(g), 0)
            }
        };
        let values = unit_cycle_flow(g, o, &cycle, target).ok_or_else(|| {
            Error::invariant(format!("record {k} ({}): no ±1 cycle flow with boundary {target}", rec.kind))
        })?;
        for (e, x) in values.iter() {
            tau.set(e, *x);
        }
    }
    Ok(tau)
}

/// `2 psi + tau` on the subdivided graph, checked to be a nowhere-zero
/// 8-flow.
pub fn assemble_flow(g: &SignedGraph, o: &Orientation, psi: &IntPreflow, tau: &TauFlow) -> Result<IntFlow> {
    let f: IntFlow = g.edge_ids().map(|e| (e, 2 * psi.at(e) + tau.at(e))).collect();
    for e in g.edge_ids() {
        let x = f.at(e);
        if x == 0 || x.abs() > 7 {
            return Err(Error::invariant(format!(
                "edge {e}: 2*{} + {} = {x} out of range",
                psi.at(e),
                tau.at(e)
            )));
        }
    }
    for v in g.vertices() {
        let b = boundary_at(g, o, &f, v);
        if b != 0 {
            return Err(Error::invariant(format!("vertex {v}: boundary {b} after assembly")));
        }
    }
    Ok(f)
}

/// Smooths every subdivision vertex of `sub`, moving a flow on the
/// subdivided graph back to the graph the list was selected on.
pub fn smooth_subdivisions(sub: &Subdivided, f: &IntFlow) -> Result<(SignedGraph, Orientation, IntFlow)> {
    let (mut g, mut o, mut f) = (sub.graph.clone(), sub.orientation.clone(), f.clone());
    for s in sub.subdivisions.iter().rev() {
        smooth_degree2_vertex(&mut g, &mut o, &mut f, s.vertex)?;
    }
    Ok((g, o, f))
}

pub fn value_lines(word: &str, f: &IntFlow) -> Vec<String> {
    f.iter().map(|(e, x)| format!("{word} {e} {x}")).collect()
}

#[cfg(test)]
mod tests;
