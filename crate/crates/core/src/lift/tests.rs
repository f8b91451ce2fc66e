use super::*;
use crate::oracle::{generate_cubic_3ec_signed, prism_neg};
use crate::preflow::{build_preflow, normalize_cycle_signature, subdivide_for_parity};
use crate::reduce::find_balanced_3cut;
use crate::select::run_csa;
use crate::sigraph::{verify_flow, Z3Assignment};

fn instance(n: usize, seed: u64) -> Option<SignedGraph> {
    let g = generate_cubic_3ec_signed(n, seed, true).unwrap();
    find_balanced_3cut(&g).is_none().then_some(g)
}

struct Stage {
    sub: Subdivided,
    pre: Z3Preflow,
}

fn stage(g: &SignedGraph, o: &Orientation) -> Stage {
    let cl = run_csa(g).unwrap();
    let sub = subdivide_for_parity(g, o, &cl).unwrap();
    let (mut h, mut oh) = (sub.graph.clone(), sub.orientation.clone());
    normalize_cycle_signature(&mut h, &mut oh, &sub.list).unwrap();
    let pre = build_preflow(&h, &oh, &sub.list).unwrap();
    Stage { sub, pre }
}

/// Runs the whole lift and returns the flow on `g`.
fn lift_all(g: &SignedGraph, o: &Orientation) -> IntFlow {
    let st = stage(g, o);
    let aux = build_auxiliary(&st.pre).unwrap();
    let mate = aux.maximum_matching();
    assert!(is_perfect(&mate));
    let psi = decode_matching(&st.pre, &aux, &mate).expect("matching decodes");
    let tau = build_tau(&st.pre.graph, &st.pre.orientation, &st.sub, &psi).unwrap();
    let f = assemble_flow(&st.pre.graph, &st.pre.orientation, &psi, &tau).unwrap();
    smooth_subdivisions(&st.sub, &f).unwrap().2
}

#[test]
fn spanning_pair_lifts() {
    let g = prism_neg();
    let o = Orientation::canonical(&g);
    let st = stage(&g, &o);
    let aux = build_auxiliary(&st.pre).unwrap();
    let psi = decode_matching(&st.pre, &aux, &aux.maximum_matching()).unwrap();
    let twos: Vec<VertexId> = st.pre.graph.vertices().filter(|&v| st.pre.graph.degree(v) == 2).collect();
    assert_eq!(twos.len(), 2);
    for v in st.pre.graph.vertices() {
        let b = boundary_at(&st.pre.graph, &st.pre.orientation, &psi, v);
        assert_eq!(b.abs(), i64::from(twos.contains(&v)));
    }
    let f = lift_all(&g, &o);
    assert!(verify_flow(&g, &o, &f, 8).is_accept());
}

#[test]
fn gadgets_grow_the_graph() {
    for seed in 0..30 {
        let Some(g) = instance(10, seed) else { continue };
        let st = stage(&g, &Orientation::canonical(&g));
        let aux = build_auxiliary(&st.pre).unwrap();
        let z = st.pre.zero_edges().len();
        assert_eq!(aux.gadgets.len(), z);
        assert_eq!(aux.vertex_count(), st.pre.graph.vertex_count() + 2 * z);
        // a point on a helper edge adds its surviving piece instead of splitting an edge
        assert_eq!(aux.edges.len(), st.pre.graph.edge_count() + 3 * z);
        for e in &aux.edge_origin {
            if let AuxEdge::Gadget(z) = e {
                assert!(st.pre.phi.at(*z).is_zero());
            }
        }
    }
}

#[test]
fn no_zeros_means_underlying_graph() {
    let mut g = SignedGraph::new(2);
    for _ in 0..3 {
        g.add_edge(0, 1, Sign::Positive);
    }
    let o = Orientation::canonical(&g);
    let phi: Z3Assignment = (0..3).map(|e| (e, Z3::new(if e == 2 { -2 } else { 1 }))).collect();
    let pre = Z3Preflow { graph: g.clone(), orientation: o, phi, negations: Vec::new() };
    let aux = build_auxiliary(&pre).unwrap();
    assert_eq!(aux.vertex_count(), 2);
    assert_eq!(aux.edges, vec![(0, 1); 3]);
}

#[test]
fn pipeline_matchings_are_perfect_and_decode() {
    let mut checked = 0;
    for seed in 0..80 {
        let Some(g) = instance(6 + 2 * (seed as usize % 9), seed) else { continue };
        let st = stage(&g, &Orientation::canonical(&g));
        let aux = build_auxiliary(&st.pre).unwrap();
        let cycles = designated_cycles(&aux, &st.sub).unwrap();
        let hyp = check_matching_hypotheses(&aux.to_graph(), &cycles);
        assert!(hyp.hold(), "seed {seed}: {:?}", hyp.failures());
        let mate = aux.maximum_matching();
        assert!(is_perfect(&mate), "seed {seed}");
        let psi = decode_matching(&st.pre, &aux, &mate).expect("decodes");
        check_int_preflow(&st.pre.graph, &st.pre.orientation, &st.pre.phi, &psi).unwrap();
        checked += 1;
    }
    assert!(checked > 20);
}

#[test]
fn random_instances_reach_eight_flows() {
    for seed in 0..60 {
        let Some(g) = instance(6 + 2 * (seed as usize % 10), seed) else { continue };
        let o = Orientation::canonical(&g);
        let f = lift_all(&g, &o);
        let verdict = verify_flow(&g, &o, &f, 8);
        assert!(verdict.is_accept(), "seed {seed}: {verdict:?}");
    }
}

#[test]
fn search_agrees_with_decoding() {
    for seed in 0..10 {
        let Some(g) = instance(6, seed) else { continue };
        let st = stage(&g, &Orientation::canonical(&g));
        let psi = search_lift(&st.pre.graph, &st.pre.orientation, &st.pre.phi, 1_000_000).unwrap();
        check_int_preflow(&st.pre.graph, &st.pre.orientation, &st.pre.phi, &psi).unwrap();
    }
}

fn cycle(n: usize, negative: u32) -> (SignedGraph, Orientation, Cycle) {
    let mut g = SignedGraph::new(n);
    for i in 0..n {
        let s = if negative >> i & 1 == 1 { Sign::Negative } else { Sign::Positive };
        g.add_edge(i, (i + 1) % n, s);
    }
    let o = Orientation::canonical(&g);
    (g, o, Cycle { vertices: (0..n).collect(), edges: (0..n).collect() })
}

#[test]
fn unit_cycle_flows_match_brute_force() {
    for n in 2..=7usize {
        for negative in 0..1u32 << n {
            let (g, o, c) = cycle(n, negative);
            for target in [-2, 0, 2] {
                let brute = (0..1u32 << n).any(|m| {
                    let f: IntFlow = (0..n).map(|e| (e, if m >> e & 1 == 1 { -1 } else { 1 })).collect();
                    (1..n).all(|v| boundary_at(&g, &o, &f, v) == 0) && boundary_at(&g, &o, &f, 0) == target
                });
                let got = unit_cycle_flow(&g, &o, &c, target);
                assert_eq!(got.is_some(), brute, "n {n} neg {negative:b} target {target}");
                if let Some(f) = got {
                    assert!((1..n).all(|v| boundary_at(&g, &o, &f, v) == 0));
                    assert_eq!(boundary_at(&g, &o, &f, 0), target);
                }
            }
        }
    }
}

#[test]
fn assembly_values() {
    let (g, o, _) = cycle(2, 0);
    // both edges run around the digon the same way
    let psi: IntFlow = [(0, 3), (1, 3)].into_iter().collect();
    let tau: IntFlow = [(0, 1), (1, 1)].into_iter().collect();
    let f = assemble_flow(&g, &o, &psi, &tau).unwrap();
    assert_eq!((f.at(0), f.at(1)), (7, 7));
    let psi: IntFlow = [(0, 0), (1, 0)].into_iter().collect();
    let f = assemble_flow(&g, &o, &psi, &tau).unwrap();
    assert_eq!((f.at(0), f.at(1)), (1, 1));
    let tau0: IntFlow = [(0, 0), (1, 0)].into_iter().collect();
    assert!(assemble_flow(&g, &o, &psi, &tau0).is_err());
}

#[test]
fn odd_degree_two_count_is_named() {
    let (g, _, c) = cycle(5, 1);
    let hyp = check_matching_hypotheses(&g, &[(c, 0)]);
    assert!(!hyp.degree_two_even);
    assert!(hyp.failures().contains(&"odd number of degree-2 vertices"));
}

#[test]
fn straddled_three_cut_is_named() {
    // two triangles joined by three edges; a 5-cycle through both sides
    // crosses the 3-edge-cut
    let mut g = SignedGraph::new(6);
    for (a, b) in [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)] {
        g.add_edge(a, b, Sign::Positive);
    }
    // 0-1-4-3-0 is even; use 0-1-2-5-3-0
    let c = Cycle { vertices: vec![0, 1, 2, 5, 3], edges: vec![0, 1, 8, 5, 6] };
    assert!(c.is_valid_in(&g));
    let hyp = check_matching_hypotheses(&g, &[(c, 0)]);
    assert_eq!(hyp.straddled_three_cut, Some(0));
    assert!(!hyp.hold());
}
