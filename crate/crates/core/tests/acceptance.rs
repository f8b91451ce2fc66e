//! Acceptance run: one line per criterion, nonzero exit if any fails.
//! Brute-force references live here, independent of the library code.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nzflow::lift::{
    assemble_flow, build_auxiliary, build_tau, check_matching_hypotheses, decode_matching, designated_cycles,
    is_perfect, maximum_matching, smooth_subdivisions,
};
use nzflow::oracle::{
    bouchet_petersen_probe, fish, generate_3ec_signed, generate_cubic_3ec_signed, nz_kflow_exists,
    cubic_structures, subcubic_structures, OracleVerdict, SearchBudget,
};
use nzflow::pipeline::{solve_cubic, synthesize, SynthesisOptions, TARGET_K};
use nzflow::preflow::{build_preflow, normalize_cycle_signature, solve_cycle_boundary, subdivide_for_parity};
use nzflow::reduce::{find_balanced_3cut, pull_back, uncontract_to_cubic};
use nzflow::select::{run_csa, validate_cycle_list, CycleKind, CycleList, CycleListVerdict, CycleRecord, SelectionStep};
use nzflow::sigraph::{boundary_at, verify_flow, Cycle, EdgeId};
use nzflow::structure::{brute_force_unbalanced_theta, contains_unbalanced_theta, recognize_fish};
use nzflow::{Orientation, Sign, SignedGraph, Z3Assignment, Z3};

enum Status {
    Pass,
    Fail,
    Warn,
}

struct Line {
    id: usize,
    name: &'static str,
    status: Status,
    detail: String,
}

fn verdict(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

/// Cubic instances with two disjoint negative cycles, cycling through the
/// even orders 6..=24.
fn cubic_instance(i: usize) -> (usize, SignedGraph) {
    let n = 6 + 2 * (i % 10);
    (n, generate_cubic_3ec_signed(n, i as u64, true).expect("generator succeeds"))
}

fn end_to_end() -> Line {
    const INSTANCES: usize = 500;
    let mut times = Vec::with_capacity(INSTANCES);
    let mut bad = Vec::new();
    let mut routes: BTreeMap<String, usize> = BTreeMap::new();
    for i in 0..INSTANCES {
        let (_, g) = cubic_instance(i);
        let o = Orientation::canonical(&g);
        let start = Instant::now();
        let result = synthesize(&g, &o, &SynthesisOptions::default());
        let ok = match &result {
            Ok(s) => verify_flow(&g, &o, &s.flow, TARGET_K).is_accept(),
            Err(_) => false,
        };
        times.push(start.elapsed());
        if let Ok(s) = result {
            *routes.entry(s.certificate.solution.routes().join("+")).or_default() += 1;
        }
        if !ok {
            bad.push(i);
        }
    }
    times.sort();
    let median = times[times.len() / 2];
    let max = *times.last().unwrap();
    let ok = bad.is_empty() && median < Duration::from_secs(1) && max < Duration::from_secs(30);
    Line {
        id: 1,
        name: "end-to-end synthesis",
        status: verdict(ok),
        detail: format!(
            "{}/{INSTANCES} verified at k=8, n in 6..=24, median {median:.2?}, max {max:.2?}, routes {routes:?}{}",
            INSTANCES - bad.len(),
            if bad.is_empty() { String::new() } else { format!(", failing {bad:?}") }
        ),
    }
}

fn oracle_equivalence() -> Line {
    let mut checked = 0;
    let mut bad = Vec::new();
    for i in 0..500 {
        let (n, g) = cubic_instance(i);
        if n > 12 {
            continue;
        }
        let o = Orientation::canonical(&g);
        let oracle = nz_kflow_exists(&g, &o, TARGET_K, SearchBudget::default());
        let flow = synthesize(&g, &o, &SynthesisOptions::default()).map(|s| s.flow);
        checked += 1;
        let ok = matches!(oracle, OracleVerdict::Yes(_)) && flow.is_ok_and(|f| verify_flow(&g, &o, &f, TARGET_K).is_accept());
        if !ok {
            bad.push(i);
        }
    }
    Line {
        id: 2,
        name: "oracle equivalence",
        status: verdict(bad.is_empty()),
        detail: format!("{checked} instances with |V| <= 12: oracle yes at k=8 and pipeline witness valid, {} mismatches", bad.len()),
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

fn cycle_boundary() -> Line {
    let (mut cases, mut bad) = (0usize, 0usize);
    for n in 2..=6usize {
        // all-positive and single-negative-edge signatures, plus every
        // other signature against exhaustive search
        for negative in 0..1u32 << n {
            let (g, o, c) = cycle(n, negative);
            let cycle_negative = negative.count_ones() % 2 == 1;
            let size = 3usize.pow(n as u32);
            let decode = |code: usize| -> Vec<Z3> { (0..n).map(|i| Z3::new((code / 3usize.pow(i as u32) % 3) as i64)).collect() };
            let encode = |b: &[Z3]| b.iter().rev().fold(0usize, |acc, x| acc * 3 + x.value() as usize);
            let mut reachable = vec![false; size];
            for code in 0..size {
                let t: Z3Assignment = decode(code).into_iter().enumerate().collect();
                let b: Vec<Z3> = (0..n).map(|v| boundary_at(&g, &o, &t, v)).collect();
                reachable[encode(&b)] = true;
            }
            for (code, &exists) in reachable.iter().enumerate() {
                let b = decode(code);
                let sum = b.iter().fold(Z3::new(0), |a, &x| a + x);
                let ruled = negative == 0 || cycle_negative;
                let rule = cycle_negative || sum.is_zero();
                let got = solve_cycle_boundary(&g, &o, &c, &b);
                let exact = got.as_ref().is_none_or(|t| (0..n).all(|v| boundary_at(&g, &o, t, v) == b[v]));
                let ok = exact && got.is_some() == exists && (!ruled || exists == rule);
                cases += 1;
                bad += usize::from(!ok);
            }
        }
    }
    Line {
        id: 3,
        name: "cycle boundary solver",
        status: verdict(bad == 0),
        detail: format!("{cases} (length, signature, boundary) cases over lengths 2..=6, {bad} mismatches"),
    }
}

/// Cores the selection accepts as input: no balanced 3-cut to split first.
fn csa_instances(count: usize) -> Vec<SignedGraph> {
    let mut out = Vec::new();
    let mut i = 0;
    while out.len() < count {
        let (_, g) = cubic_instance(i);
        if find_balanced_3cut(&g).is_none() {
            out.push(g);
        }
        i += 1;
    }
    out
}

fn csa_suite(instances: &[SignedGraph]) -> Line {
    let mut bad = Vec::new();
    let mut steps: BTreeMap<&'static str, usize> = BTreeMap::new();
    for (i, g) in instances.iter().enumerate() {
        match run_csa(g) {
            Ok(cl) => {
                for r in &cl.records {
                    *steps.entry(r.step.word()).or_default() += 1;
                }
                if !matches!(validate_cycle_list(g, &cl), CycleListVerdict::Accept) {
                    bad.push(i);
                }
            }
            Err(_) => bad.push(i),
        }
    }
    Line {
        id: 4,
        name: "cycle selection postconditions",
        status: verdict(bad.is_empty()),
        detail: format!("{}/{} lists accepted, steps {steps:?}", instances.len() - bad.len(), instances.len()),
    }
}

fn preflow_law(instances: &[SignedGraph]) -> Line {
    let mut bad = 0;
    let mut zeros = 0;
    for g in instances {
        let o = Orientation::canonical(g);
        let ok = (|| -> Option<bool> {
            let cl = run_csa(g).ok()?;
            let sub = subdivide_for_parity(g, &o, &cl).ok()?;
            let (mut h, mut oh) = (sub.graph.clone(), sub.orientation.clone());
            normalize_cycle_signature(&mut h, &mut oh, &sub.list).ok()?;
            let pre = build_preflow(&h, &oh, &sub.list).ok()?;
            let law = h.vertices().all(|v| boundary_at(&h, &oh, &pre.phi, v).is_zero() == !matches!(h.degree(v), 1 | 2));
            let z: Vec<EdgeId> = h.edge_ids().filter(|&e| pre.phi.at(e).is_zero()).collect();
            zeros += z.len();
            let mut ends: Vec<usize> = z.iter().flat_map(|&e| h.edge(e).ends()).collect();
            let before = ends.len();
            ends.sort_unstable();
            ends.dedup();
            let matching = ends.len() == before;
            let avoids = sub
                .list
                .records
                .iter()
                .filter(|r| r.kind == CycleKind::NegativeOrdinary)
                .all(|r| r.edges.iter().all(|e| !z.contains(e)));
            Some(law && matching && avoids)
        })();
        if ok != Some(true) {
            bad += 1;
        }
    }
    Line {
        id: 5,
        name: "preflow law",
        status: verdict(bad == 0),
        detail: format!("{}/{} preflows exact ({zeros} zero edges in total)", instances.len() - bad, instances.len()),
    }
}

/// Largest matching by exhaustive search over the lowest free vertex.
fn brute_matching(n: usize, edges: &[(usize, usize)]) -> usize {
    fn go(v: usize, adj: &[Vec<usize>], used: &mut Vec<bool>) -> usize {
        let Some(u) = (v..adj.len()).find(|&u| !used[u]) else { return 0 };
        used[u] = true;
        let mut best = go(u + 1, adj, used);
        for &w in &adj[u] {
            if !used[w] {
                used[w] = true;
                best = best.max(1 + go(u + 1, adj, used));
                used[w] = false;
            }
        }
        used[u] = false;
        best
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        if u != v {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    go(0, &adj, &mut vec![false; n])
}

fn blossom_agrees(n: usize, edges: &[(usize, usize)]) -> bool {
    let mate = maximum_matching(n, edges);
    let consistent = mate.iter().enumerate().all(|(u, m)| {
        m.is_none_or(|v| mate[v] == Some(u) && edges.iter().any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u)))
    });
    consistent && mate.iter().flatten().count() / 2 == brute_matching(n, edges)
}

fn graph_edges(g: &SignedGraph) -> Vec<(usize, usize)> {
    g.edges().map(|r| (r.u, r.v)).collect()
}

fn matching_stage(instances: &[SignedGraph]) -> Line {
    let mut stage_bad = 0;
    for g in instances {
        let o = Orientation::canonical(g);
        let ok = (|| -> Option<bool> {
            let cl = run_csa(g).ok()?;
            let sub = subdivide_for_parity(g, &o, &cl).ok()?;
            let (mut h, mut oh) = (sub.graph.clone(), sub.orientation.clone());
            normalize_cycle_signature(&mut h, &mut oh, &sub.list).ok()?;
            let pre = build_preflow(&h, &oh, &sub.list).ok()?;
            let aux = build_auxiliary(&pre).ok()?;
            let hyp = check_matching_hypotheses(&aux.to_graph(), &designated_cycles(&aux, &sub).ok()?);
            Some(hyp.hold() && is_perfect(&aux.maximum_matching()))
        })();
        if ok != Some(true) {
            stage_bad += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut random_bad = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=12);
        let p = rng.gen_range(0.1..0.6);
        let edges: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(p)).collect();
        random_bad += usize::from(!blossom_agrees(n, &edges));
    }
    let mut cubic: Vec<SignedGraph> =
        (1..=4).flat_map(|h| cubic_structures(2 * h)).collect();
    let exhaustive = cubic.len();
    cubic.extend((0..200).map(|i| generate_cubic_3ec_signed(10 + 2 * (i % 2), i as u64, false).unwrap()));
    let cubic_bad = cubic.iter().filter(|g| !blossom_agrees(g.vertex_count(), &graph_edges(g))).count();
    let ok = stage_bad == 0 && random_bad == 0 && cubic_bad == 0;
    Line {
        id: 6,
        name: "matching stage",
        status: verdict(ok),
        detail: format!(
            "hypotheses and perfect matching on {}/{} auxiliary graphs; blossom vs brute force: 1000 random ({random_bad} mismatches), \
             {exhaustive} cubic structures on <= 8 vertices plus 200 random cubic on 10-12 ({cubic_bad} mismatches)",
            instances.len() - stage_bad,
            instances.len()
        ),
    }
}

fn theta_characterization() -> Line {
    const SAMPLES: usize = 64;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut structures, mut checks, mut bad) = (0usize, 0usize, 0usize);
    for n in 1..=7 {
        for base in subcubic_structures(n) {
            structures += 1;
            let m = base.edge_count();
            let masks: Vec<u64> =
                if 1usize << m <= SAMPLES { (0..1u64 << m).collect() } else { (0..SAMPLES).map(|_| rng.gen_range(0..1u64 << m)).collect() };
            for mask in masks {
                let mut g = base.clone();
                for e in 0..m {
                    if mask >> e & 1 == 1 {
                        g.set_sign(e, Sign::Negative);
                    }
                }
                checks += 1;
                bad += usize::from(brute_force_unbalanced_theta(&g, 1_000_000) != Some(contains_unbalanced_theta(&g)));
            }
        }
    }
    Line {
        id: 7,
        name: "unbalanced theta characterization",
        status: verdict(bad == 0),
        detail: format!(
            "{structures} connected subcubic structures on <= 7 vertices, {checks} signatures (all, or {SAMPLES} sampled), {bad} disagreements"
        ),
    }
}

fn bouchet_probe() -> Line {
    let budget = SearchBudget { nodes: u64::MAX, time: Some(Duration::from_secs(600)), width: 1 };
    let start = Instant::now();
    match bouchet_petersen_probe(budget) {
        Some(w) => {
            let g = nzflow::oracle::petersen(w.mask);
            let o = Orientation::canonical(&g);
            let ok = verify_flow(&g, &o, &w.flow6, 6).is_accept();
            Line {
                id: 8,
                name: "Bouchet tightness probe",
                status: verdict(ok),
                detail: format!("Petersen signature {:#06x}: no 5-flow, 6-flow verified, {:.2?}", w.mask, start.elapsed()),
            }
        }
        None => Line {
            id: 8,
            name: "Bouchet tightness probe",
            status: Status::Warn,
            detail: format!("unknown: no witness concluded within the 10-minute budget ({:.2?})", start.elapsed()),
        },
    }
}

/// A cubic graph whose selected list is: a negative special cycle, an
/// even negative ordinary cycle, then `fish(m)`.
fn fish_instance(m: usize) -> (SignedGraph, CycleList) {
    let f = fish(m);
    let nf = f.vertex_count();
    let twos: Vec<usize> = f.vertices().filter(|&v| f.degree(v) == 2).collect();
    let d = twos.len();
    let lc = d + 2;
    let mut g = SignedGraph::new(nf + lc + 4);
    for r in f.edges() {
        g.add_edge(r.u, r.v, r.sign);
    }
    let c: Vec<usize> = (nf..nf + lc).collect();
    let n: Vec<usize> = (nf + lc..nf + lc + 4).collect();
    let sign = |i: usize| if i == 0 { Sign::Negative } else { Sign::Positive };
    let c_edges: Vec<EdgeId> = (0..lc).map(|i| g.add_edge(c[i], c[(i + 1) % lc], sign(i))).collect();
    let n_edges: Vec<EdgeId> = (0..4).map(|i| g.add_edge(n[i], n[(i + 1) % 4], sign(i))).collect();
    for i in 0..d - 1 {
        g.add_edge(c[i], twos[i], Sign::Positive);
    }
    for i in 0..3 {
        g.add_edge(c[d - 1 + i], n[i], Sign::Positive);
    }
    g.add_edge(n[3], twos[d - 1], Sign::Positive);
    let mut fv = g.empty_set();
    (0..nf).for_each(|v| fv.insert(v));
    let records = vec![
        CycleRecord { kind: CycleKind::NegativeSpecial, step: SelectionStep::PreprocessTheta, vertices: c, edges: c_edges, fish: None },
        CycleRecord { kind: CycleKind::NegativeOrdinary, step: SelectionStep::NegativeLeaf, vertices: n, edges: n_edges, fish: None },
        CycleRecord {
            kind: CycleKind::Fish,
            step: SelectionStep::FishWhole,
            vertices: (0..nf).collect(),
            edges: f.edge_ids().collect(),
            fish: recognize_fish(&g.induced(&fv)),
        },
    ];
    (g, CycleList { records })
}

fn fish_handling() -> Line {
    let mut details = Vec::new();
    let mut ok = true;
    for m in 0..3 {
        // the preflow on the fish alone
        let mut g = fish(m);
        let mut o = Orientation::canonical(&g);
        let cert = recognize_fish(&g).expect("fish recognized");
        let rec = CycleRecord {
            kind: CycleKind::Fish,
            step: SelectionStep::FishWhole,
            vertices: g.vertices().collect(),
            edges: g.edge_ids().collect(),
            fish: Some(cert.clone()),
        };
        let cl = CycleList { records: vec![rec] };
        let alone = normalize_cycle_signature(&mut g, &mut o, &cl).and_then(|_| build_preflow(&g, &o, &cl)).is_ok_and(|pre| {
            let zeros: Vec<EdgeId> = g.edge_ids().filter(|&e| pre.phi.at(e).is_zero()).collect();
            zeros == vec![cert.distinguished]
                && g.vertices().all(|v| boundary_at(&g, &o, &pre.phi, v).is_zero() == (g.degree(v) == 3))
        });
        // the whole construction on a list ending in the fish
        let (h, cl) = fish_instance(m);
        let oh = Orientation::canonical(&h);
        let listed = matches!(validate_cycle_list(&h, &cl), CycleListVerdict::Accept);
        let flow = (|| -> Option<bool> {
            let sub = subdivide_for_parity(&h, &oh, &cl).ok()?;
            let (mut s, mut os) = (sub.graph.clone(), sub.orientation.clone());
            normalize_cycle_signature(&mut s, &mut os, &sub.list).ok()?;
            let pre = build_preflow(&s, &os, &sub.list).ok()?;
            let aux = build_auxiliary(&pre).ok()?;
            let mate = aux.maximum_matching();
            let psi = decode_matching(&pre, &aux, &mate)?;
            let tau = build_tau(&s, &os, &sub, &psi).ok()?;
            let f = assemble_flow(&s, &os, &psi, &tau).ok()?;
            let (_, _, f) = smooth_subdivisions(&sub, &f).ok()?;
            Some(verify_flow(&h, &oh, &f, TARGET_K).is_accept())
        })();
        let all = alone && listed && flow == Some(true);
        ok &= all;
        details.push(format!("fish({m}) {}", if all { "ok" } else { "bad" }));
    }
    Line {
        id: 9,
        name: "fish handling",
        status: verdict(ok),
        detail: format!(
            "{}: distinguished edge sole zero with boundary laws; list ending in fish verifies at k=8",
            details.join(", ")
        ),
    }
}

fn reduction() -> Line {
    let mut checked = 0;
    let mut bad = Vec::new();
    let mut max_degree = 0;
    let mut seed = 0u64;
    while checked < 100 {
        let n = 8 + 2 * (seed as usize % 7);
        let g = generate_3ec_signed(n, 6, seed).expect("generator succeeds");
        seed += 1;
        if g.is_cubic() {
            continue;
        }
        checked += 1;
        max_degree = max_degree.max(g.max_degree());
        let o = Orientation::canonical(&g);
        let ok = (|| -> Option<bool> {
            let (h, oh, steps) = uncontract_to_cubic(&g, &o).ok()?;
            let (_, fh) = solve_cubic(&h, &oh, &SynthesisOptions::default(), &mut Vec::new()).ok()?;
            let (back, _, f) = pull_back(&h, &oh, &fh, &steps).ok()?;
            Some(h.is_cubic() && back == g && verify_flow(&g, &o, &f, TARGET_K).is_accept())
        })();
        if ok != Some(true) {
            bad.push(seed - 1);
        }
    }
    Line {
        id: 10,
        name: "reduction correctness",
        status: verdict(bad.is_empty()),
        detail: format!("{}/{checked} non-cubic graphs (max degree up to {max_degree}) pulled back to verified 8-flows", checked - bad.len()),
    }
}

fn main() -> ExitCode {
    let instances = csa_instances(200);
    let criteria: Vec<Box<dyn Fn() -> Line>> = vec![
        Box::new(end_to_end),
        Box::new(oracle_equivalence),
        Box::new(cycle_boundary),
        Box::new(|| csa_suite(&instances)),
        Box::new(|| preflow_law(&instances)),
        Box::new(|| matching_stage(&instances)),
        Box::new(theta_characterization),
        Box::new(bouchet_probe),
        Box::new(fish_handling),
        Box::new(reduction),
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let line = c();
        let took = start.elapsed();
        let tag = match line.status {
            Status::Pass => "PASS",
            Status::Fail => {
                failed += 1;
                "FAIL"
            }
            Status::Warn => "WARN",
        };
        println!("acceptance {:>2} {tag} {}: {} [{took:.1?}]", line.id, line.name, line.detail);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
