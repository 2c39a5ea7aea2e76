//! Acceptance of a transition system by a universal co-Büchi automaton
//! is equivalent to the existence of a valid bounded annotation. The
//! library decides it by condensation; here an independent detector
//! re-derives the verdict by plain reachability, and returned
//! annotations are re-validated literally.

use plts_core::automata::{
    check_acceptance, dualize_spec_pump, dualize_word_nba, ltl_to_nba, run_graph,
    valid_annotation, RunGraph, SpecPumpNba, StateAwareUct,
};
use plts_core::formula::Alphabet;
use plts_core::machine::TransitionSystem;
use plts_core::testkit::{random_ltl, random_system, rng};

/// True iff some rejecting vertex is reachable from the root and lies
/// on a cycle — decided with two breadth-first searches per candidate,
/// no strongly-connected-component machinery.
fn has_reachable_rejecting_cycle(rg: &RunGraph) -> bool {
    let reach_from = |starts: Vec<usize>| -> Vec<bool> {
        let mut seen = vec![false; rg.vertex_count()];
        let mut queue: std::collections::VecDeque<usize> = starts.into();
        while let Some(v) = queue.pop_front() {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            for &(w, _) in rg.edges_of(v) {
                if !seen[w] {
                    queue.push_back(w);
                }
            }
        }
        seen
    };
    let from_root = reach_from(vec![rg.root()]);
    (0..rg.vertex_count()).any(|v| {
        if !from_root[v] || !rg.is_rejecting(v) {
            return false;
        }
        let succ: Vec<usize> = rg.edges_of(v).iter().map(|&(w, _)| w).collect();
        reach_from(succ)[v]
    })
}

fn assert_verdict_matches(u: &StateAwareUct, ts: &TransitionSystem, context: &str) {
    let rg = run_graph(u, ts).unwrap();
    let expect_accept = !has_reachable_rejecting_cycle(&rg);
    let verdict = check_acceptance(u, ts).unwrap();
    assert_eq!(verdict.is_some(), expect_accept, "{context}\n{}", rg.to_dot());
    if let Some(annotation) = verdict {
        assert!(valid_annotation(u, ts, &annotation), "{context}");
        let cap = (ts.state_count() * u.rejecting_count()) as u64;
        assert!(
            annotation.max_value().unwrap_or(0) <= cap,
            "{context}: annotation exceeds cap {cap}"
        );
    }
}

#[test]
fn acceptance_matches_cycle_detection_on_word_automata() {
    let props = Alphabet::new(["i", "o"]);
    let inputs = Alphabet::new(["i"]);
    let outputs = Alphabet::new(["o"]);
    for seed in 0..200u64 {
        let mut r = rng(41_000 + seed);
        let size = 1 + (seed as usize % 4);
        let phi = random_ltl(&mut r, &["i", "o"], size);
        let nba = ltl_to_nba(&phi, &props).unwrap();
        let u = dualize_word_nba(nba, inputs.clone(), outputs.clone()).unwrap();
        let ts = random_system(&mut r, &inputs, &outputs, 3);
        assert_verdict_matches(&u, &ts, &format!("seed {seed}, formula {phi}"));
    }
}

#[test]
fn acceptance_matches_cycle_detection_on_state_aware_automata() {
    let props = Alphabet::new(["i", "o", "r", "rp"]);
    let inputs = Alphabet::new(["i", "r", "rp"]);
    let outputs = Alphabet::new(["o"]);
    for seed in 0..50u64 {
        let mut r = rng(42_000 + seed);
        let size = 1 + (seed as usize % 4);
        let phi = random_ltl(&mut r, &["i", "o", "r", "rp"], size);
        let spec = ltl_to_nba(&phi, &props).unwrap();
        let ts = random_system(&mut r, &inputs, &outputs, 3);
        let n = SpecPumpNba::new(spec, ts.state_count(), "r", "rp").unwrap();
        let u = dualize_spec_pump(n, inputs.clone(), outputs.clone()).unwrap();
        assert_verdict_matches(&u, &ts, &format!("seed {seed}, formula {phi}"));
    }
}
