//! Reductions to the cubic core: uncontracting high-degree vertices and
//! splitting along 3-edge-cuts with a balanced side.

use crate::error::{Error, Result};
use crate::oracle::{extend_flow, OracleVerdict, SearchBudget};
use crate::sigraph::{
    balance, contract_edge, edge_connectivity, negativeness_at_most, switch_at_vertex, uncontract_at, verify_flow,
    BalanceCertificate, Dir, EdgeId, IntFlow, Orientation, Sign, SignedGraph, VertexId, VertexSet,
};
use crate::structure::cuts_of_size;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReductionStep {
    /// `e` and `e2` moved from `vertex` to `new_vertex`, joined to `vertex`
    /// by the positive `new_edge`.
    Uncontract { vertex: VertexId, e: EdgeId, e2: EdgeId, new_vertex: VertexId, new_edge: EdgeId },
    /// Split along the cut `δ(y)` with `G[y]` balanced.
    Split { y: Vec<VertexId>, cut: [EdgeId; 3] },
}

fn valid_core(g: &SignedGraph) -> bool {
    edge_connectivity(g) >= 3 && !negativeness_at_most(g, 1)
}

/// Uncontracts until every vertex has degree three. At each step the lowest
/// vertex of degree at least four keeps its lowest edge `e` fixed and tries
/// partners `e2` in id order until the result stays 3-edge-connected and
/// 2-unbalanced.
pub fn uncontract_to_cubic(g: &SignedGraph, o: &Orientation) -> Result<(SignedGraph, Orientation, Vec<ReductionStep>)> {
    let mut g = g.clone();
    let mut o = o.clone();
    let mut steps = Vec::new();
    loop {
        let Some(v) = g.vertices().find(|&v| g.degree(v) >= 4) else { break };
        let inc = g.incident(v).to_vec();
        let e = inc[0];
        let mut done = false;
        for &e2 in &inc[1..] {
            let mut h = g.clone();
            let (v2, new_edge) = uncontract_at(&mut h, v, e, e2)?;
            if valid_core(&h) {
                o.set(new_edge, [Dir::Away, Dir::Toward]);
                g = h;
                steps.push(ReductionStep::Uncontract { vertex: v, e, e2, new_vertex: v2, new_edge });
                done = true;
                break;
            }
        }
        if !done {
            return Err(Error::invariant(format!("no uncontraction at vertex {v} keeps the graph 3-edge-connected and 2-unbalanced")));
        }
    }
    Ok((g, o, steps))
}

/// Contracts the edges added by `steps`, newest first, carrying `f` along.
pub fn pull_back(g: &SignedGraph, o: &Orientation, f: &IntFlow, steps: &[ReductionStep]) -> Result<(SignedGraph, Orientation, IntFlow)> {
    let (mut g, mut o, mut f) = (g.clone(), o.clone(), f.clone());
    for step in steps.iter().rev() {
        if let ReductionStep::Uncontract { vertex, new_vertex, new_edge, .. } = *step {
            let r = g.edge(new_edge);
            if r.u != vertex || r.v != new_vertex {
                return Err(Error::contract(format!("edge {new_edge} no longer joins {vertex} and {new_vertex}")));
            }
            contract_edge(&mut g, &mut o, &mut f, new_edge)?;
        }
    }
    Ok((g, o, f))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Balanced3Cut {
    pub y: VertexSet,
    pub cut: [EdgeId; 3],
}

impl Balanced3Cut {
    pub fn y_vertices(&self) -> Vec<VertexId> {
        self.y.ones().collect()
    }
}

/// First 3-edge-cut (edge triples in lexicographic order) with at least two
/// vertices on each side and a balanced side; the smaller balanced side is
/// returned.
pub fn find_balanced_3cut(g: &SignedGraph) -> Option<Balanced3Cut> {
    for c in cuts_of_size(g, 3) {
        let side = c.side.clone();
        let mut other = g.vertex_set();
        other.difference_with(&side);
        let (ns, no) = (side.count_ones(..), other.count_ones(..));
        if ns < 2 || no < 2 {
            continue;
        }
        let bal_side = balance(&g.induced(&side)).is_balanced();
        let bal_other = balance(&g.induced(&other)).is_balanced();
        let y = match (bal_side, bal_other) {
            (true, true) if no < ns => other,
            (true, _) => side,
            (false, true) => other,
            (false, false) => continue,
        };
        let cut = [c.edges[0], c.edges[1], c.edges[2]];
        return Some(Balanced3Cut { y, cut });
    }
    None
}

/// Nowhere-zero `k`-flow of an all-positive graph (negative loops allowed
/// away from `v`) taking the prescribed values on the three edges at `v`,
/// all of which leave `v`. Found by exhaustive search.
pub fn prescribed_boundary_flow(
    g: &SignedGraph,
    o: &Orientation,
    v: VertexId,
    prescribed: [(EdgeId, i64); 3],
    k: i64,
    budget: SearchBudget,
) -> Result<IntFlow> {
    if k < 6 {
        return Err(Error::contract(format!("k = {k} is below 6")));
    }
    if prescribed.iter().map(|p| p.1).sum::<i64>() != 0 {
        return Err(Error::contract("prescribed values must sum to zero"));
    }
    if prescribed.iter().any(|&(_, x)| x == 0 || x.abs() > k - 1) {
        return Err(Error::contract("prescribed values must be nonzero and inside the range"));
    }
    let mut at_v: Vec<EdgeId> = g.incident(v).to_vec();
    at_v.sort_unstable();
    let mut named: Vec<EdgeId> = prescribed.iter().map(|p| p.0).collect();
    named.sort_unstable();
    if at_v != named || at_v.iter().any(|&e| g.edge(e).is_loop()) {
        return Err(Error::contract(format!("vertex {v} must meet exactly the three prescribed edges")));
    }
    if at_v.iter().any(|&e| o.dir_at(g, e, v) != Dir::Away) {
        return Err(Error::contract(format!("prescribed edges must leave vertex {v}")));
    }
    if g.edges().any(|e| !e.is_loop() && e.sign == Sign::Negative) {
        return Err(Error::contract("all non-loop edges must be positive"));
    }
    if edge_connectivity(g) < 2 {
        return Err(Error::contract("graph must be 2-edge-connected"));
    }
    let fixed: IntFlow = prescribed.iter().copied().collect();
    match extend_flow(g, o, k, &fixed, budget) {
        OracleVerdict::Yes(f) => Ok(f),
        OracleVerdict::No => Err(Error::invariant("no flow with the prescribed boundary values")),
        OracleVerdict::Unknown => Err(Error::Budget("prescribed-boundary search".into())),
    }
}

/// The two sides of a balanced 3-cut after normalization: inside `Y` every
/// edge is positive, cut edges are positive and point from `X` into `Y`.
#[derive(Clone, Debug)]
pub struct SplitParts {
    pub cut: [EdgeId; 3],
    pub y: Vec<VertexId>,
    /// Vertices switched during normalization, in order.
    pub switched: Vec<VertexId>,
    /// Cut edges reversed during normalization.
    pub reversed: Vec<EdgeId>,
    /// Normalized copy of the input.
    pub graph: SignedGraph,
    pub orientation: Orientation,
    /// `Y` contracted to `y_vertex`.
    pub g_y: SignedGraph,
    pub o_y: Orientation,
    pub y_vertex: VertexId,
    /// `X` contracted to `x_vertex`.
    pub g_x: SignedGraph,
    pub o_x: Orientation,
    pub x_vertex: VertexId,
}

/// Contracts `side` to one new vertex, dropping the edges inside it.
fn contract_side(g: &SignedGraph, o: &Orientation, side: &VertexSet) -> (SignedGraph, Orientation, VertexId) {
    let mut h = g.clone();
    let mut ho = o.clone();
    let z = h.add_vertex();
    for e in g.edges() {
        let (iu, iv) = (side.contains(e.u), side.contains(e.v));
        if iu && iv {
            h.remove_edge(e.id);
            ho.remove(e.id);
        } else if iu {
            h.set_ends(e.id, z, e.v);
        } else if iv {
            h.set_ends(e.id, e.u, z);
        }
    }
    for v in side.ones() {
        h.remove_vertex(v);
    }
    (h, ho, z)
}

pub fn split_parts(g: &SignedGraph, o: &Orientation, cut3: &Balanced3Cut) -> Result<SplitParts> {
    let y = &cut3.y;
    let mut gn = g.clone();
    let mut on = o.clone();
    let mut switched = Vec::new();
    let BalanceCertificate::SwitchingSet(inside) = balance(&g.induced(y)) else {
        return Err(Error::contract("side Y is not balanced"));
    };
    for v in inside {
        switch_at_vertex(&mut gn, &mut on, v)?;
        switched.push(v);
    }
    let mut reversed = Vec::new();
    for &e in &cut3.cut {
        let r = gn.edge(e).clone();
        let x_end = if y.contains(r.u) { r.v } else { r.u };
        if y.contains(x_end) || !(y.contains(r.u) || y.contains(r.v)) {
            return Err(Error::contract(format!("edge {e} does not cross the cut")));
        }
        if r.sign == Sign::Negative {
            switch_at_vertex(&mut gn, &mut on, x_end)?;
            switched.push(x_end);
        }
    }
    for &e in &cut3.cut {
        let r = gn.edge(e).clone();
        let x_end = if y.contains(r.u) { r.v } else { r.u };
        if on.dir_at(&gn, e, x_end) != Dir::Away {
            let d = on.get(e);
            on.set(e, [d[0].reversed(), d[1].reversed()]);
            reversed.push(e);
        }
    }
    let mut x = gn.vertex_set();
    x.difference_with(y);
    let (g_y, o_y, y_vertex) = contract_side(&gn, &on, y);
    let (g_x, o_x, x_vertex) = contract_side(&gn, &on, &x);
    Ok(SplitParts {
        cut: cut3.cut,
        y: y.ones().collect(),
        switched,
        reversed,
        graph: gn,
        orientation: on,
        g_y,
        o_y,
        y_vertex,
        g_x,
        o_x,
        x_vertex,
    })
}

impl SplitParts {
    /// Combines flows of the two sides into a flow of the original
    /// (un-normalized) graph and orientation.
    pub fn merge(&self, phi_y: &IntFlow, phi_x: &IntFlow) -> Result<IntFlow> {
        let mut f = IntFlow::new();
        for e in self.graph.edge_ids() {
            let val = if self.g_y.has_edge(e) { phi_y.get(e) } else { phi_x.get(e) };
            let Some(&val) = val else {
                return Err(Error::invariant(format!("no value for edge {e} on either side")));
            };
            f.set(e, val);
        }
        for &e in &self.cut {
            if phi_y.get(e) != phi_x.get(e) {
                return Err(Error::invariant(format!("cut edge {e} carries different values on the two sides")));
            }
        }
        for &e in &self.reversed {
            f.set(e, -f.at(e));
        }
        Ok(f)
    }
}

/// Splits along `cut3`, solves the `Y`-contracted side with `solve_inner`,
/// then completes the other side with matching cut values.
pub fn split_and_merge(
    g: &SignedGraph,
    o: &Orientation,
    cut3: &Balanced3Cut,
    k: i64,
    budget: SearchBudget,
    solve_inner: impl FnOnce(&SignedGraph, &Orientation) -> Result<IntFlow>,
) -> Result<(SplitParts, IntFlow, IntFlow, IntFlow)> {
    if cut3.y.count_ones(..) < 2 {
        return Err(Error::contract("side Y needs at least two vertices"));
    }
    let parts = split_parts(g, o, cut3)?;
    let phi_y = solve_inner(&parts.g_y, &parts.o_y)?;
    let prescribed = parts.cut.map(|e| (e, phi_y.at(e)));
    let phi_x = prescribed_boundary_flow(&parts.g_x, &parts.o_x, parts.x_vertex, prescribed, k, budget)?;
    let f = parts.merge(&phi_y, &phi_x)?;
    if let crate::sigraph::FlowVerdict::Reject(v) = verify_flow(g, o, &f, k) {
        return Err(Error::invariant(format!("merged flow rejected: {v}")));
    }
    Ok((parts, phi_y, phi_x, f))
}
