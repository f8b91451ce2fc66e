use crate::error::{Error, Result};
use crate::sigraph::{is_balanced, SignedGraph, VertexId};

/// Largest vertex count accepted by [`is_well_behaved`].
pub const WELL_BEHAVED_MAX: usize = 16;

/// Exhaustive check over all nonempty vertex subsets `X` of a subcubic graph:
/// `d(X) + Σ(3 - deg) >= 3`, and `>= 4` when `G[X]` is balanced with at least
/// two vertices.
pub fn is_well_behaved(g: &SignedGraph) -> Result<bool> {
    let ids: Vec<VertexId> = g.vertices().collect();
    let n = ids.len();
    if n > WELL_BEHAVED_MAX {
        return Err(Error::Argument(format!("well-behaved check limited to {WELL_BEHAVED_MAX} vertices, got {n}")));
    }
    if !g.is_subcubic() {
        return Ok(false);
    }
    for mask in 1u32..(1u32 << n) {
        let mut x = g.empty_set();
        let mut deficiency = 0usize;
        for (i, &v) in ids.iter().enumerate() {
            if (mask >> i) & 1 == 1 {
                x.insert(v);
                deficiency += 3 - g.degree(v);
            }
        }
        let total = g.cut_size(&x) + deficiency;
        if total < 3 {
            return Ok(false);
        }
        if total < 4 && mask.count_ones() >= 2 && is_balanced(&g.induced(&x)) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigraph::Sign::*;

    #[test]
    fn single_vertex() {
        assert!(is_well_behaved(&SignedGraph::new(1)).unwrap());
    }

    #[test]
    fn k4_minus_a_vertex() {
        // all-negative K4 is 2-unbalanced
        let mut edges = Vec::new();
        for a in 0..4 {
            for b in a + 1..4 {
                edges.push((a, b, Negative));
            }
        }
        let g = SignedGraph::from_edges(4, &edges);
        assert!(!is_well_behaved(&g).unwrap());
        let mut drop = g.empty_set();
        drop.insert(3);
        assert!(is_well_behaved(&g.without(&drop)).unwrap());
    }

    #[test]
    fn single_edge_reaches_four() {
        // d(X) = 0, deficiencies 2 + 2
        let g = SignedGraph::from_edges(2, &[(0, 1, Positive)]);
        assert!(is_well_behaved(&g).unwrap());
    }

    #[test]
    fn balanced_triangle_fails() {
        // whole triangle: 0 + 1 + 1 + 1 = 3 < 4
        let g = SignedGraph::from_edges(3, &[(0, 1, Positive), (1, 2, Positive), (2, 0, Positive)]);
        assert!(!is_well_behaved(&g).unwrap());
        let neg = SignedGraph::from_edges(3, &[(0, 1, Negative), (1, 2, Positive), (2, 0, Positive)]);
        assert!(is_well_behaved(&neg).unwrap());
    }

    #[test]
    fn refuses_large_graphs() {
        assert!(is_well_behaved(&SignedGraph::new(17)).is_err());
    }
}
