use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sigraph::{
    contract_edge, edge_connectivity, is_flow_admissible, Admissibility, IntFlow, Orientation, Sign, SignedGraph,
};
use crate::structure::{find_two_disjoint_negative_cycles, DisjointPair, CYCLE_LIMIT};

/// Attempts before generation gives up.
pub const GENERATION_ATTEMPTS: usize = 100_000;

/// Random cubic multigraph from the pairing model, kept only when
/// 3-edge-connected; signs are uniform. With `require_two_negative`, also
/// kept only when it has two vertex-disjoint negative cycles and is
/// flow-admissible. Deterministic in `seed`.
pub fn generate_cubic_3ec_signed(n: usize, seed: u64, require_two_negative: bool) -> Result<SignedGraph> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::Argument(format!("cubic graphs need an even vertex count, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..3 * n).map(|p| p / 3).collect();
    for _ in 0..GENERATION_ATTEMPTS {
        points.shuffle(&mut rng);
        if points.chunks(2).any(|p| p[0] == p[1]) {
            continue;
        }
        let mut g = SignedGraph::new(n);
        for p in points.chunks(2) {
            let sign = if rng.gen_bool(0.5) { Sign::Negative } else { Sign::Positive };
            g.add_edge(p[0].min(p[1]), p[0].max(p[1]), sign);
        }
        if edge_connectivity(&g) < 3 {
            continue;
        }
        if require_two_negative {
            let pair = find_two_disjoint_negative_cycles(&g, true, CYCLE_LIMIT);
            if !matches!(pair, DisjointPair::Found(..)) || is_flow_admissible(&g) != Admissibility::Admissible {
                continue;
            }
        }
        return Ok(g);
    }
    Err(Error::Budget(format!("no suitable graph on {n} vertices after {GENERATION_ATTEMPTS} attempts")))
}

/// Contracts random positive edges of a cubic instance from
/// [`generate_cubic_3ec_signed`] while no degree exceeds `max_degree`, then
/// relabels densely. Contraction keeps 3-edge-connectivity, flow
/// admissibility and every balancing obstruction, so the result is a
/// 3-edge-connected flow-admissible graph that is at least two edges away
/// from balanced. Parallel edges are never contracted, so no loops appear.
pub fn generate_3ec_signed(n: usize, max_degree: usize, seed: u64) -> Result<SignedGraph> {
    let mut g = generate_cubic_3ec_signed(n, seed, true)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut o = Orientation::canonical(&g);
    let mut f = IntFlow::new();
    let budget = rng.gen_range(1..=n / 2);
    for _ in 0..budget {
        let candidates: Vec<_> = g
            .edge_ids()
            .filter(|&e| {
                let r = g.edge(e);
                r.sign == Sign::Positive
                    && !r.is_loop()
                    && g.degree(r.u) + g.degree(r.v) - 2 <= max_degree
                    && g.neighbors(r.u).filter(|&(_, w)| w == r.v).count() == 1
            })
            .collect();
        let Some(&e) = candidates.choose(&mut rng) else { break };
        contract_edge(&mut g, &mut o, &mut f, e)?;
    }
    Ok(compact(&g))
}

/// Same graph with vertices and edges renumbered from zero.
fn compact(g: &SignedGraph) -> SignedGraph {
    let mut index = vec![usize::MAX; g.vertex_bound()];
    for (i, v) in g.vertices().enumerate() {
        index[v] = i;
    }
    let mut h = SignedGraph::new(g.vertex_count());
    for r in g.edges() {
        h.add_edge(index[r.u], index[r.v], r.sign);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigraph::format::serialize_sg;

    #[test]
    fn small_graphs_are_cubic_and_3ec() {
        for seed in 0..20 {
            let g = generate_cubic_3ec_signed(4, seed, false).unwrap();
            assert!(g.is_cubic());
            assert!(edge_connectivity(&g) >= 3);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a = generate_cubic_3ec_signed(10, 7, true).unwrap();
        let b = generate_cubic_3ec_signed(10, 7, true).unwrap();
        assert_eq!(serialize_sg(&a, None), serialize_sg(&b, None));
    }

    #[test]
    fn predicate_holds_when_required() {
        for seed in 0..5 {
            let g = generate_cubic_3ec_signed(8, seed, true).unwrap();
            assert!(matches!(find_two_disjoint_negative_cycles(&g, true, CYCLE_LIMIT), DisjointPair::Found(..)));
        }
    }

    #[test]
    fn contracted_graphs_respect_degree_bound() {
        let mut non_cubic = 0;
        for seed in 0..30 {
            let g = generate_3ec_signed(12, 6, seed).unwrap();
            assert!(g.max_degree() <= 6);
            assert!(edge_connectivity(&g) >= 3);
            assert_eq!(is_flow_admissible(&g), Admissibility::Admissible);
            assert!(!crate::sigraph::negativeness_at_most(&g, 1));
            non_cubic += usize::from(!g.is_cubic());
        }
        assert!(non_cubic > 20);
    }

    #[test]
    fn odd_order_rejected() {
        assert!(generate_cubic_3ec_signed(5, 0, false).is_err());
    }
}
