//! Small-graph suites behind `nzflow selftest`. Each prints one line.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::thread;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nzflow::certificate::{replay, Certificate};
use nzflow::oracle::{generate_cubic_3ec_signed, nz_kflow_exists, subcubic_structures, OracleVerdict, SearchBudget};
use nzflow::pipeline::{synthesize, SynthesisOptions, TARGET_K};
use nzflow::preflow::solve_cycle_boundary;
use nzflow::sigraph::{boundary_at, verify_flow, Cycle};
use nzflow::structure::{brute_force_unbalanced_theta, contains_unbalanced_theta};
use nzflow::{Orientation, Sign, SignedGraph, Z3Assignment, Z3};

/// Signatures tried per structure when there are too many to list.
const SIGNATURE_SAMPLES: usize = 64;

pub fn run(max_n: usize, samples: usize, seed: u64, jobs: usize) -> bool {
    let results = [cycle_boundary(), theta(max_n.min(7), seed), pipeline(max_n, samples, seed, jobs)];
    for (name, ok, detail) in &results {
        println!("selftest {name} {} {detail}", if *ok { "pass" } else { "FAIL" });
    }
    results.iter().all(|r| r.1)
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

/// Every boundary vector on cycles of length 2 to 6 under every signature,
/// against exhaustive search. On negative and all-positive cycles the
/// solvable vectors are also checked against the closed rule.
fn cycle_boundary() -> (&'static str, bool, String) {
    let (mut cases, mut bad) = (0usize, 0usize);
    for n in 2..=6usize {
        for negative in 0..1u32 << n {
            let (g, o, c) = cycle(n, negative);
            let cycle_negative = negative.count_ones() % 2 == 1;
            let vector = |code: usize| -> Vec<Z3> { (0..n).map(|i| Z3::new((code / 3usize.pow(i as u32) % 3) as i64)).collect() };
            let mut reachable = vec![false; 3usize.pow(n as u32)];
            for code in 0..reachable.len() {
                let t: Z3Assignment = vector(code).into_iter().enumerate().collect();
                let b = (0..n).rev().fold(0, |acc, v| acc * 3 + boundary_at(&g, &o, &t, v).value() as usize);
                reachable[b] = true;
            }
            for (code, &exists) in reachable.iter().enumerate() {
                let b = vector(code);
                let sum = b.iter().fold(Z3::new(0), |a, &x| a + x);
                let rule = cycle_negative || negative != 0 || sum.is_zero();
                let ok = match solve_cycle_boundary(&g, &o, &c, &b) {
                    Some(t) => exists && rule && (0..n).all(|v| boundary_at(&g, &o, &t, v) == b[v]),
                    None => !exists && !(cycle_negative || (negative == 0 && sum.is_zero())),
                };
                cases += 1;
                bad += usize::from(!ok);
            }
        }
    }
    ("cycle-boundary", bad == 0, format!("{cases} cases {bad} mismatches"))
}

/// Block-based theta detection against cycle-pair enumeration on every
/// connected subcubic structure up to `max_n` vertices.
fn theta(max_n: usize, seed: u64) -> (&'static str, bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut structures, mut checks, mut bad) = (0usize, 0usize, 0usize);
    for n in 1..=max_n {
        for base in subcubic_structures(n) {
            structures += 1;
            let m = base.edge_count();
            let masks: Vec<u64> = if m <= 6 {
                (0..1u64 << m).collect()
            } else {
                (0..SIGNATURE_SAMPLES).map(|_| rng.gen_range(0..1u64 << m)).collect()
            };
            for mask in masks {
                let mut g = base.clone();
                for e in 0..m {
                    if mask >> e & 1 == 1 {
                        g.set_sign(e, Sign::Negative);
                    }
                }
                checks += 1;
                if brute_force_unbalanced_theta(&g, 100_000) != Some(contains_unbalanced_theta(&g)) {
                    bad += 1;
                }
            }
        }
    }
    ("theta", bad == 0, format!("{structures} structures {checks} signatures {bad} mismatches"))
}

/// Synthesis, verification, certificate replay and the oracle on random
/// cubic instances with up to `max_n` vertices.
fn pipeline(max_n: usize, samples: usize, seed: u64, jobs: usize) -> (&'static str, bool, String) {
    let sizes: Vec<usize> = (6..=max_n.max(6)).step_by(2).collect();
    let next = AtomicUsize::new(0);
    let bad = AtomicUsize::new(0);
    thread::scope(|s| {
        for _ in 0..jobs.max(1) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= samples {
                    break;
                }
                let n = sizes[i % sizes.len()];
                if !pipeline_instance(n, seed.wrapping_mul(1_000_003).wrapping_add(i as u64)) {
                    bad.fetch_add(1, Ordering::Relaxed);
                }
            });
        }
    });
    let bad = bad.into_inner();
    ("pipeline", bad == 0, format!("{samples} instances {bad} failures"))
}

fn pipeline_instance(n: usize, seed: u64) -> bool {
    let Ok(g) = generate_cubic_3ec_signed(n, seed, true) else { return false };
    let o = Orientation::canonical(&g);
    let Ok(s) = synthesize(&g, &o, &SynthesisOptions::default()) else { return false };
    let cert_ok = Certificate::parse(&s.certificate.to_text()).is_ok_and(|c| replay(&g, &o, &c).passed());
    let oracle_ok = n > 12 || matches!(nz_kflow_exists(&g, &o, TARGET_K, SearchBudget::default()), OracleVerdict::Yes(_));
    verify_flow(&g, &o, &s.flow, TARGET_K).is_accept() && cert_ok && oracle_ok
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_suite_passes() {
        assert!(cycle_boundary().1);
    }

    #[test]
    fn small_suites_pass() {
        assert!(theta(4, 1).1);
        assert!(pipeline(8, 6, 1, 2).1);
    }
}
