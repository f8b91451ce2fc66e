//! End-to-end synthesis: reduce to cubic cores, split balanced 3-cuts,
//! run the cycle construction on each core and pull the flow back.

use crate::certificate::{Certificate, CoreRecord, Solution};
use crate::error::{Error, Result};
use crate::lift::{
    assemble_flow, build_auxiliary, build_tau, check_matching_hypotheses, decode_matching, designated_cycles,
    is_perfect, lift_to_integer, smooth_subdivisions, value_lines,
};
use crate::oracle::{nz_kflow_exists, OracleVerdict, SearchBudget};
use crate::preflow::{build_preflow, normalize_cycle_signature, subdivide_for_parity};
use crate::reduce::{find_balanced_3cut, pull_back, split_and_merge, uncontract_to_cubic};
use crate::select::{run_csa, validate_cycle_list, CycleListVerdict};
use crate::sigraph::{
    edge_connectivity, is_balanced, negativeness_at_most, verify_flow, FlowVerdict, IntFlow, Orientation, SignedGraph,
};
use crate::structure::{find_two_disjoint_negative_cycles, DisjointPair, CYCLE_LIMIT};

/// Flows are produced and checked with values below this bound.
pub const TARGET_K: i64 = 8;

#[derive(Clone, Copy, Debug)]
pub struct SynthesisOptions {
    /// Budget for every exhaustive search (oracle fallbacks and split sides).
    pub budget: SearchBudget,
    /// Search for a flow when the construction does not apply (balanced
    /// inputs, cores without two disjoint negative cycles). Otherwise such
    /// inputs are unsupported.
    pub oracle_fallback: bool,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        SynthesisOptions { budget: SearchBudget::nodes(50_000_000), oracle_fallback: true }
    }
}

#[derive(Clone, Debug)]
pub struct Synthesis {
    pub flow: IntFlow,
    pub certificate: Certificate,
    /// Human-readable stage output.
    pub trace: Vec<String>,
}

fn check(verdict: FlowVerdict, what: &str) -> Result<()> {
    match verdict {
        FlowVerdict::Accept => Ok(()),
        FlowVerdict::Reject(v) => Err(Error::invariant(format!("{what}: {v}"))),
    }
}

/// Nowhere-zero 8-flow of a 3-edge-connected flow-admissible graph.
pub fn synthesize(g: &SignedGraph, o: &Orientation, opts: &SynthesisOptions) -> Result<Synthesis> {
    o.check(g)?;
    if g.edge_count() == 0 {
        return Err(Error::Unsupported("graph has no edges".into()));
    }
    if edge_connectivity(g) < 3 {
        return Err(Error::Unsupported("graph is not 3-edge-connected".into()));
    }
    let mut trace = Vec::new();
    let (steps, solution, flow) = if is_balanced(g) {
        trace.push("route oracle balanced".to_string());
        let (sol, f) = oracle_solution(g, o, &[6, TARGET_K], opts)?;
        (Vec::new(), sol, f)
    } else {
        if negativeness_at_most(g, 1) {
            return Err(Error::Unsupported("graph is not flow-admissible: one edge sign away from balanced".into()));
        }
        let (h, oh, steps) = uncontract_to_cubic(g, o)?;
        trace.push(format!("reduce {} uncontractions", steps.len()));
        let (sol, fh) = solve_cubic(&h, &oh, opts, &mut trace)?;
        let (back, _, f) = pull_back(&h, &oh, &fh, &steps)?;
        if back != *g {
            return Err(Error::invariant("pull-back did not restore the input graph"));
        }
        (steps, sol, f)
    };
    check(verify_flow(g, o, &flow, TARGET_K), "final flow")?;
    trace.extend(value_lines("flow", &flow));
    let certificate = Certificate::new(g, o, TARGET_K, steps, solution, flow.clone());
    Ok(Synthesis { flow, certificate, trace })
}

fn oracle_solution(g: &SignedGraph, o: &Orientation, ks: &[i64], opts: &SynthesisOptions) -> Result<(Solution, IntFlow)> {
    if !opts.oracle_fallback {
        return Err(Error::Unsupported("construction does not apply and the oracle fallback is off".into()));
    }
    for &k in ks {
        match nz_kflow_exists(g, o, k, opts.budget) {
            OracleVerdict::Yes(f) => return Ok((Solution::Oracle { k, flow: f.clone() }, f)),
            OracleVerdict::No => continue,
            OracleVerdict::Unknown => return Err(Error::Budget(format!("oracle at k = {k}"))),
        }
    }
    Err(Error::Unsupported(format!("no nowhere-zero flow with k up to {}", ks.last().copied().unwrap_or(0))))
}

/// Solves a cubic 3-edge-connected 2-unbalanced graph.
pub fn solve_cubic(
    g: &SignedGraph,
    o: &Orientation,
    opts: &SynthesisOptions,
    trace: &mut Vec<String>,
) -> Result<(Solution, IntFlow)> {
    if let Some(cut) = find_balanced_3cut(g) {
        trace.push(format!("split {:?} y {:?}", cut.cut, cut.y_vertices()));
        let mut inner = None;
        let (_, _, phi_x, f) = split_and_merge(g, o, &cut, TARGET_K, opts.budget, |gy, oy| {
            let (sol, f) = solve_cubic(gy, oy, opts, trace)?;
            inner = Some(sol);
            Ok(f)
        })?;
        let inner = Box::new(inner.expect("inner side solved"));
        return Ok((Solution::Split { y: cut.y_vertices(), cut: cut.cut, inner, outer: phi_x }, f));
    }
    match find_two_disjoint_negative_cycles(g, true, CYCLE_LIMIT) {
        DisjointPair::Found(..) => {
            let (rec, f) = construct(g, o, trace)?;
            Ok((Solution::Core(Box::new(rec)), f))
        }
        DisjointPair::None => {
            trace.push("route oracle no-disjoint-negative-pair".to_string());
            oracle_solution(g, o, &[6, TARGET_K], opts)
        }
        DisjointPair::Unknown => Err(Error::Budget("cycle enumeration truncated".into())),
    }
}

/// The cycle construction on a cubic core with two disjoint negative cycles
/// and no balanced 3-cut.
pub fn construct(g: &SignedGraph, o: &Orientation, trace: &mut Vec<String>) -> Result<(CoreRecord, IntFlow)> {
    let list = run_csa(g)?;
    trace.extend(list.trace_lines());
    if let CycleListVerdict::Reject { check, detail } = validate_cycle_list(g, &list) {
        return Err(Error::invariant(format!("selected list rejected: {check} ({detail})")));
    }
    let sub = subdivide_for_parity(g, o, &list)?;
    let (mut h, mut oh) = (sub.graph.clone(), sub.orientation.clone());
    normalize_cycle_signature(&mut h, &mut oh, &sub.list)?;
    let pre = build_preflow(&h, &oh, &sub.list)?;
    trace.extend(pre.trace_lines());
    for n in &pre.negations {
        trace.push(format!("negate record {} vertices {:?}", n.record, n.vertices));
    }
    let aux = build_auxiliary(&pre)?;
    trace.extend(aux.trace_lines());
    let hyp = check_matching_hypotheses(&aux.to_graph(), &designated_cycles(&aux, &sub)?);
    if !hyp.hold() {
        return Err(Error::invariant(format!("matching hypotheses fail: {}", hyp.failures().join(", "))));
    }
    let mate = aux.maximum_matching();
    if !is_perfect(&mate) {
        return Err(Error::invariant("auxiliary graph has no perfect matching"));
    }
    let matching: Vec<(usize, usize)> =
        mate.iter().enumerate().filter_map(|(a, m)| m.filter(|&b| a < b).map(|b| (a, b))).collect();
    trace.extend(matching.iter().map(|(a, b)| format!("match {a} {b}")));
    let decoded = decode_matching(&pre, &aux, &mate).is_some();
    let psi = lift_to_integer(&pre, &aux, &mate)?;
    if !decoded {
        trace.push("lift by search".to_string());
    }
    trace.extend(value_lines("psi", &psi));
    let tau = build_tau(&h, &oh, &sub, &psi)?;
    trace.extend(value_lines("tau", &tau));
    let f_star = assemble_flow(&h, &oh, &psi, &tau)?;
    let (back, _, f) = smooth_subdivisions(&sub, &f_star)?;
    if back != *g {
        return Err(Error::invariant("smoothing did not restore the core"));
    }
    check(verify_flow(g, o, &f, TARGET_K), "core flow")?;
    Ok((CoreRecord { list, phi: pre.phi, matching, psi, tau, flow: f.clone() }, f))
}

#[cfg(test)]
mod tests;
