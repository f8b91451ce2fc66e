//! In-place structural operations. Each keeps edge ids stable and touches
//! only the edges it names.

use super::{Dir, EdgeId, IntFlow, Orientation, Sign, SignedGraph, VertexId};
use crate::error::{Error, Result};

fn check_vertex(g: &SignedGraph, v: VertexId) -> Result<()> {
    if g.has_vertex(v) {
        Ok(())
    } else {
        Err(Error::UnknownVertex(v))
    }
}

fn check_edge(g: &SignedGraph, e: EdgeId) -> Result<()> {
    if g.has_edge(e) {
        Ok(())
    } else {
        Err(Error::UnknownEdge(e))
    }
}

/// Switches at `v`: non-loop edges at `v` change sign, and every end at `v`
/// (both ends of a loop) is reversed.
pub fn switch_at_vertex(g: &mut SignedGraph, o: &mut Orientation, v: VertexId) -> Result<()> {
    check_vertex(g, v)?;
    for e in g.incident(v).to_vec() {
        let rec = g.edge(e).clone();
        let mut d = o.get(e);
        if rec.u == v {
            d[0] = d[0].reversed();
        }
        if rec.v == v {
            d[1] = d[1].reversed();
        }
        o.set(e, d);
        if !rec.is_loop() {
            g.set_sign(e, rec.sign.flipped());
        }
    }
    Ok(())
}

/// Switches at every vertex of `set` in turn.
pub fn switch_set(g: &mut SignedGraph, o: &mut Orientation, set: &[VertexId]) -> Result<()> {
    for &v in set {
        switch_at_vertex(g, o, v)?;
    }
    Ok(())
}

/// Reverses both ends of `e` and negates its value, leaving every boundary
/// unchanged.
pub fn reverse_edge(o: &mut Orientation, f: &mut IntFlow, e: EdgeId) -> Result<()> {
    let d = o.try_get(e).ok_or(Error::UnknownEdge(e))?;
    o.set(e, [d[0].reversed(), d[1].reversed()]);
    if let Some(&x) = f.get(e) {
        f.set(e, -x);
    }
    Ok(())
}

/// Replaces `e = uv` by the path `u -e- x -e2- v`. `e` keeps its id and
/// sign, `e2` is new and positive. A flow value on `e` stays valid when
/// copied to `e2`. Returns `(x, e2)`.
pub fn subdivide_edge(g: &mut SignedGraph, o: &mut Orientation, e: EdgeId) -> Result<(VertexId, EdgeId)> {
    check_edge(g, e)?;
    let rec = g.edge(e).clone();
    let d = o.get(e);
    let x = g.add_vertex();
    g.set_ends(e, rec.u, x);
    let at_x = match rec.sign {
        Sign::Positive => d[0].reversed(),
        Sign::Negative => d[0],
    };
    o.set(e, [d[0], at_x]);
    let e2 = g.add_edge(x, rec.v, Sign::Positive);
    o.set(e2, [d[1].reversed(), d[1]]);
    Ok((x, e2))
}

/// Merges the two edges at a degree-2 vertex `x` into the lower-id one. The
/// merged edge carries the product sign and the first edge's value; `x`
/// and the higher-id edge disappear. Returns the surviving edge id.
pub fn smooth_degree2_vertex(
    g: &mut SignedGraph,
    o: &mut Orientation,
    f: &mut IntFlow,
    x: VertexId,
) -> Result<EdgeId> {
    check_vertex(g, x)?;
    let inc = g.incident(x).to_vec();
    if g.degree(x) != 2 || inc.len() != 2 {
        return Err(Error::contract(format!("vertex {x} is not a degree-2 vertex on two distinct edges")));
    }
    let (a, b) = (inc[0], inc[1]);
    let boundary = super::boundary_at(g, o, f, x);
    if boundary != 0 {
        return Err(Error::contract(format!("boundary {boundary} at vertex {x} before smoothing")));
    }
    let ra = g.edge(a).clone();
    let rb = g.edge(b).clone();
    let q = rb.other(x);
    let cax = o.coefficient_at(g, a, x);
    let cbx = o.coefficient_at(g, b, x);
    let cbq = o.coefficient_at(g, b, q);
    let at_q = Dir::from_coefficient(-cbq * cax * cbx);

    let mut d = o.get(a);
    let (nu, nv) = if ra.u == x {
        d[0] = at_q;
        (q, ra.v)
    } else {
        d[1] = at_q;
        (ra.u, q)
    };
    g.remove_edge(b);
    o.remove(b);
    f.remove(b);
    g.set_ends(a, nu, nv);
    g.set_sign(a, ra.sign.times(rb.sign));
    o.set(a, d);
    g.remove_vertex(x);
    Ok(a)
}

/// Contracts the positive non-loop edge `e`, folding its second end into its
/// first. Boundaries of a flow add up at the merged vertex, so flows stay
/// valid. Returns the surviving vertex.
pub fn contract_edge(g: &mut SignedGraph, o: &mut Orientation, f: &mut IntFlow, e: EdgeId) -> Result<VertexId> {
    check_edge(g, e)?;
    let rec = g.edge(e).clone();
    if rec.is_loop() || rec.sign != Sign::Positive {
        return Err(Error::contract(format!("edge {e} is not a positive non-loop edge")));
    }
    let (keep, gone) = (rec.u, rec.v);
    g.remove_edge(e);
    o.remove(e);
    f.remove(e);
    for h in g.incident(gone).to_vec() {
        let r = g.edge(h).clone();
        let nu = if r.u == gone { keep } else { r.u };
        let nv = if r.v == gone { keep } else { r.v };
        g.set_ends(h, nu, nv);
    }
    g.remove_vertex(gone);
    Ok(keep)
}

/// Splits `v`: `e` and `e2` move to a new vertex `v2`, which is joined to
/// `v` by a new positive edge. A loop at `v` moves only its first end.
/// Existing orientation entries stay valid; the new edge has none yet.
/// Returns `(v2, new_edge)`.
pub fn uncontract_at(g: &mut SignedGraph, v: VertexId, e: EdgeId, e2: EdgeId) -> Result<(VertexId, EdgeId)> {
    check_vertex(g, v)?;
    check_edge(g, e)?;
    check_edge(g, e2)?;
    if g.degree(v) < 4 {
        return Err(Error::Argument(format!("vertex {v} has degree {} < 4", g.degree(v))));
    }
    if e == e2 {
        return Err(Error::Argument("the two edges must differ".into()));
    }
    if !g.edge(e).touches(v) || !g.edge(e2).touches(v) {
        return Err(Error::Argument(format!("edges {e} and {e2} must both meet vertex {v}")));
    }
    let v2 = g.add_vertex();
    for h in [e, e2] {
        let r = g.edge(h).clone();
        if r.u == v {
            g.set_ends(h, v2, r.v);
        } else {
            g.set_ends(h, r.u, v2);
        }
    }
    let new_edge = g.add_edge(v, v2, Sign::Positive);
    Ok((v2, new_edge))
}
