use proptest::prelude::*;

use nzflow::certificate::{replay, Certificate};
use nzflow::oracle::generate_cubic_3ec_signed;
use nzflow::pipeline::{synthesize, SynthesisOptions, TARGET_K};
use nzflow::sigraph::format::{parse_flow, parse_sg, serialize_flow, serialize_sg};
use nzflow::sigraph::{
    boundary_at, reverse_edge, smooth_degree2_vertex, subdivide_edge, switch_set, verify_flow,
};
use nzflow::{IntFlow, Orientation, Sign, SignedGraph};

fn multigraph() -> impl Strategy<Value = SignedGraph> {
    (1usize..8).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n, any::<bool>()), 1..16).prop_map(move |edges| {
            let mut g = SignedGraph::new(n);
            for (u, v, neg) in edges {
                g.add_edge(u, v, if neg { Sign::Negative } else { Sign::Positive });
            }
            g
        })
    })
}

fn values(g: &SignedGraph) -> impl Strategy<Value = IntFlow> {
    let ids: Vec<usize> = g.edge_ids().collect();
    prop::collection::vec(-7i64..=7, ids.len()).prop_map(move |xs| ids.iter().copied().zip(xs).collect())
}

fn with_flow() -> impl Strategy<Value = (SignedGraph, IntFlow)> {
    multigraph().prop_flat_map(|g| {
        let f = values(&g);
        (Just(g), f)
    })
}

fn cubic() -> impl Strategy<Value = SignedGraph> {
    (3usize..=7, any::<u64>()).prop_map(|(h, seed)| generate_cubic_3ec_signed(2 * h, seed, true).unwrap())
}

fn boundaries(g: &SignedGraph, o: &Orientation, f: &IntFlow) -> Vec<i64> {
    g.vertices().map(|v| boundary_at(g, o, f, v)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn switching_keeps_the_verdict((g, f) in with_flow(), set in prop::collection::vec(any::<prop::sample::Index>(), 0..4)) {
        let o = Orientation::canonical(&g);
        let before = verify_flow(&g, &o, &f, TARGET_K).is_accept();
        let (mut h, mut oh) = (g.clone(), o.clone());
        let set: Vec<usize> = set.iter().map(|i| i.index(g.vertex_count())).collect();
        switch_set(&mut h, &mut oh, &set).unwrap();
        prop_assert_eq!(verify_flow(&h, &oh, &f, TARGET_K).is_accept(), before);
        // switching twice at the same vertices restores everything
        switch_set(&mut h, &mut oh, &set).unwrap();
        prop_assert_eq!(serialize_sg(&h, Some(&oh)), serialize_sg(&g, Some(&o)));
    }

    #[test]
    fn reversal_keeps_boundaries((g, f) in with_flow(), pick in any::<prop::sample::Index>()) {
        let o = Orientation::canonical(&g);
        let e = pick.index(g.edge_count());
        let (mut o2, mut f2) = (o.clone(), f.clone());
        reverse_edge(&mut o2, &mut f2, e).unwrap();
        prop_assert_eq!(boundaries(&g, &o2, &f2), boundaries(&g, &o, &f));
    }

    #[test]
    fn subdivide_then_smooth_is_identity(g in cubic(), pick in any::<prop::sample::Index>()) {
        let o = Orientation::canonical(&g);
        let f = synthesize(&g, &o, &SynthesisOptions::default()).unwrap().flow;
        let e = pick.index(g.edge_count());
        let (mut h, mut oh, mut fh) = (g.clone(), o.clone(), f.clone());
        let (x, e2) = subdivide_edge(&mut h, &mut oh, e).unwrap();
        fh.set(e2, f.at(e));
        prop_assert!(verify_flow(&h, &oh, &fh, TARGET_K).is_accept());
        prop_assert_eq!(smooth_degree2_vertex(&mut h, &mut oh, &mut fh, x).unwrap(), e);
        for id in g.edge_ids() {
            let (a, b) = (g.edge(id), h.edge(id));
            prop_assert_eq!((a.u, a.v, a.sign), (b.u, b.v, b.sign));
        }
        prop_assert_eq!(fh, f.clone());
        prop_assert!(verify_flow(&h, &oh, &f, TARGET_K).is_accept());
    }

    #[test]
    fn text_formats_roundtrip((g, f) in with_flow()) {
        let o = Orientation::canonical(&g);
        let text = serialize_sg(&g, Some(&o));
        let (g2, o2) = parse_sg(&text).unwrap();
        prop_assert_eq!(serialize_sg(&g2, o2.as_ref()), text);
        prop_assert_eq!(parse_flow(&serialize_flow(&f)).unwrap(), f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn certificates_roundtrip_and_replay(g in cubic()) {
        let o = Orientation::canonical(&g);
        let s = synthesize(&g, &o, &SynthesisOptions::default()).unwrap();
        prop_assert!(verify_flow(&g, &o, &s.flow, TARGET_K).is_accept());
        let text = s.certificate.to_text();
        let c = Certificate::parse(&text).unwrap();
        prop_assert_eq!(c.to_text(), text);
        prop_assert!(replay(&g, &o, &c).passed());
    }

    #[test]
    fn synthesis_survives_switching(g in cubic(), set in prop::collection::vec(any::<prop::sample::Index>(), 1..5)) {
        let (mut h, mut oh) = (g.clone(), Orientation::canonical(&g));
        let set: Vec<usize> = set.iter().map(|i| i.index(g.vertex_count())).collect();
        switch_set(&mut h, &mut oh, &set).unwrap();
        let s = synthesize(&h, &oh, &SynthesisOptions::default()).unwrap();
        prop_assert!(verify_flow(&h, &oh, &s.flow, TARGET_K).is_accept());
    }
}
