use super::search::{nz_kflow_exists, OracleVerdict, SearchBudget};
use crate::error::{Error, Result};
use crate::sigraph::{IntFlow, Orientation, Sign, SignedGraph};

/// Petersen graph: outer 5-cycle (edges 0-4), spokes (5-9), inner
/// pentagram (10-14). Bit `i` of `mask` makes edge `i` negative.
pub fn petersen(mask: u16) -> SignedGraph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
    }
    for i in 0..5 {
        edges.push((i, i + 5));
    }
    for (a, b) in [(5, 7), (7, 9), (9, 6), (6, 8), (8, 5)] {
        edges.push((a, b));
    }
    let signed: Vec<_> = edges
        .into_iter()
        .enumerate()
        .map(|(i, (a, b))| (a, b, if mask >> i & 1 == 1 { Sign::Negative } else { Sign::Positive }))
        .collect();
    SignedGraph::from_edges(10, &signed)
}

/// Fish with path length `3 + 2m`: `a=0 b=1 p=2 q=3 r=4 s=5`, path interior
/// from 6. The first path edge is the only negative one.
pub fn fish(m: usize) -> SignedGraph {
    let mut g = SignedGraph::from_edges(
        6 + 2 + 2 * m,
        &[
            (0, 2, Sign::Positive),
            (2, 1, Sign::Positive),
            (0, 3, Sign::Positive),
            (3, 1, Sign::Positive),
            (0, 4, Sign::Positive),
            (4, 5, Sign::Positive),
            (5, 1, Sign::Positive),
        ],
    );
    let len = 3 + 2 * m;
    let mut prev = 4;
    for i in 0..len {
        let next = if i + 1 == len { 5 } else { 6 + i };
        let sign = if i == 0 { Sign::Negative } else { Sign::Positive };
        g.add_edge(prev, next, sign);
        prev = next;
    }
    g
}

pub fn k4() -> SignedGraph {
    let mut edges = Vec::new();
    for a in 0..4 {
        for b in a + 1..4 {
            edges.push((a, b, Sign::Positive));
        }
    }
    SignedGraph::from_edges(4, &edges)
}

/// Triangles `0-1-2` and `3-4-5`, each with one negative edge, joined by a
/// positive perfect matching.
pub fn prism_neg() -> SignedGraph {
    use Sign::*;
    SignedGraph::from_edges(
        6,
        &[
            (0, 1, Negative),
            (1, 2, Positive),
            (2, 0, Positive),
            (3, 4, Negative),
            (4, 5, Positive),
            (5, 3, Positive),
            (0, 3, Positive),
            (1, 4, Positive),
            (2, 5, Positive),
        ],
    )
}

pub fn triple_edge() -> SignedGraph {
    SignedGraph::from_edges(2, &[(0, 1, Sign::Positive); 3])
}

fn arg<T: std::str::FromStr>(name: &str, inner: Option<&str>, default: Option<T>) -> Result<T> {
    match (inner, default) {
        (Some(s), _) => s.trim().parse().map_err(|_| Error::Argument(format!("bad parameter in `{name}`"))),
        (None, Some(d)) => Ok(d),
        (None, None) => Err(Error::Argument(format!("`{name}` needs a parameter"))),
    }
}

/// Looks up `petersen`, `petersen(<mask>)`, `fish(<m>)`, `k4`, `prism-neg` or
/// `triple-edge`. `name:param` is accepted as well as `name(param)`.
pub fn named_instance(name: &str) -> Result<SignedGraph> {
    let (base, inner) = match name.find(['(', ':']) {
        Some(i) => (&name[..i], Some(name[i + 1..].trim_end_matches(')'))),
        None => (name, None),
    };
    match base {
        "petersen" => Ok(petersen(arg(name, inner, Some(0))?)),
        "fish" => Ok(fish(arg(name, inner, Some(0))?)),
        "k4" if inner.is_none() => Ok(k4()),
        "prism-neg" if inner.is_none() => Ok(prism_neg()),
        "triple-edge" if inner.is_none() => Ok(triple_edge()),
        _ => Err(Error::Argument(format!("unknown instance `{name}`"))),
    }
}

/// Signature classes of the Petersen graph: the spanning tree made of the
/// outer path 0-1-2-3-4 and the five spokes stays positive, and the six
/// remaining edges range over all sign patterns.
pub fn petersen_class_masks() -> Vec<u16> {
    let cotree = [4u16, 10, 11, 12, 13, 14];
    (0u16..64)
        .map(|bits| cotree.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, &e)| 1u16 << e).sum())
        .collect()
}

/// A Petersen signature with no nowhere-zero 5-flow but a 6-flow.
#[derive(Clone, Debug)]
pub struct BouchetWitness {
    pub mask: u16,
    pub flow6: IntFlow,
}

/// Scans the 64 signature classes for one needing six as flow bound.
/// `None` if no class qualifies or a search runs out of budget.
pub fn bouchet_petersen_probe(budget: SearchBudget) -> Option<BouchetWitness> {
    for mask in petersen_class_masks() {
        let g = petersen(mask);
        let o = Orientation::canonical(&g);
        if nz_kflow_exists(&g, &o, 5, budget) != OracleVerdict::No {
            continue;
        }
        if let OracleVerdict::Yes(flow6) = nz_kflow_exists(&g, &o, 6, budget) {
            return Some(BouchetWitness { mask, flow6 });
        }
    }
    None
}
