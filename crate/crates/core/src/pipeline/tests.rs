use super::*;
use crate::certificate::replay;
use crate::oracle::{generate_cubic_3ec_signed, prism_neg};

#[test]
fn prism_synthesizes_and_replays() {
    let g = prism_neg();
    let o = Orientation::canonical(&g);
    let s = synthesize(&g, &o, &SynthesisOptions::default()).unwrap();
    assert!(verify_flow(&g, &o, &s.flow, TARGET_K).is_accept());
    let report = replay(&g, &o, &s.certificate);
    assert!(report.passed(), "{:?}", report.lines());
}

#[test]
fn random_cubic_graphs_synthesize() {
    for seed in 0..40 {
        let g = generate_cubic_3ec_signed(6 + 2 * (seed as usize % 8), seed, true).unwrap();
        let o = Orientation::canonical(&g);
        let s = synthesize(&g, &o, &SynthesisOptions::default()).unwrap();
        assert!(verify_flow(&g, &o, &s.flow, TARGET_K).is_accept(), "seed {seed}");
        let text = s.certificate.to_text();
        let cert = Certificate::parse(&text).unwrap();
        assert_eq!(cert, s.certificate, "seed {seed}");
        let report = replay(&g, &o, &cert);
        assert!(report.passed(), "seed {seed}: {:?}", report.lines());
    }
}

#[test]
fn tampered_flow_fails_replay() {
    let g = prism_neg();
    let o = Orientation::canonical(&g);
    let mut cert = synthesize(&g, &o, &SynthesisOptions::default()).unwrap().certificate;
    cert.flow.set(0, 0);
    assert!(!replay(&g, &o, &cert).passed());
}

#[test]
fn two_edge_connected_input_is_unsupported() {
    let mut g = SignedGraph::new(2);
    g.add_edge(0, 1, crate::sigraph::Sign::Positive);
    g.add_edge(0, 1, crate::sigraph::Sign::Negative);
    let o = Orientation::canonical(&g);
    assert!(matches!(synthesize(&g, &o, &SynthesisOptions::default()), Err(Error::Unsupported(_))));
}

#[test]
fn contracted_graphs_pull_back() {
    use crate::oracle::generate_3ec_signed;
    for seed in 0..30 {
        let g = generate_3ec_signed(12, 6, seed).unwrap();
        let o = Orientation::canonical(&g);
        let s = synthesize(&g, &o, &SynthesisOptions::default()).unwrap();
        assert!(verify_flow(&g, &o, &s.flow, TARGET_K).is_accept(), "seed {seed}");
        let cert = Certificate::parse(&s.certificate.to_text()).unwrap();
        let report = replay(&g, &o, &cert);
        assert!(report.passed(), "seed {seed}: {:?}", report.lines());
    }
}

#[test]
fn declined_fallback_is_unsupported() {
    let g = crate::oracle::k4();
    let o = Orientation::canonical(&g);
    let on = synthesize(&g, &o, &SynthesisOptions::default());
    let off = synthesize(&g, &o, &SynthesisOptions { oracle_fallback: false, ..Default::default() });
    match on {
        Ok(s) => {
            assert!(s.certificate.solution.routes().iter().any(|r| r.starts_with("oracle")));
            assert!(matches!(off, Err(Error::Unsupported(_))));
        }
        Err(e) => assert!(matches!(e, Error::Unsupported(_)), "{e}"),
    }
}
