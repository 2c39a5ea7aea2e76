//! The alternating-color rewrite on ultimately periodic words: a
//! prompt bound k transfers to every k-spaced coloring of the word,
//! and a k-bounded coloring satisfying the rewritten formula certifies
//! the doubled bound on the original word.

use plts_core::formula::{colorize, evaluate, Alphabet, Valuation};
use plts_core::testkit::{
    is_k_bounded, is_k_spaced, k_bounded_coloring, k_spaced_coloring, random_lasso,
    random_prompt, rng,
};
use rand::Rng;

#[test]
fn bound_transfers_to_spaced_colorings_and_back() {
    let alphabet = Alphabet::new(["a", "b"]);
    let mut spaced_premises = 0u32;
    let mut bounded_premises = 0u32;
    for seed in 0..500u64 {
        let mut r = rng(11_000 + seed);
        let size = 1 + (seed as usize % 6);
        let phi = random_prompt(&mut r, &["a", "b"], size);
        let w = random_lasso(&mut r, &alphabet, 3, 3);
        let k = r.gen_range(1..=3u64);
        let colored_phi = colorize(&phi, "r").unwrap();

        if evaluate(&w, &phi, &Valuation::prompt(k)).unwrap() {
            spaced_premises += 1;
            for _ in 0..3 {
                let wc = k_spaced_coloring(&mut r, &w, "r", k);
                assert!(is_k_spaced(&wc, "r", k));
                assert!(
                    evaluate(&wc, &colored_phi, &Valuation::default()).unwrap(),
                    "seed {seed}: {phi} holds on {w} at bound {k}, \
                     but its rewrite fails on the coloring {wc}"
                );
            }
        }

        for _ in 0..3 {
            let wc = k_bounded_coloring(&mut r, &w, "r", k);
            assert!(is_k_bounded(&wc, "r", k));
            if evaluate(&wc, &colored_phi, &Valuation::default()).unwrap() {
                bounded_premises += 1;
                assert!(
                    evaluate(&w, &phi, &Valuation::prompt(2 * k)).unwrap(),
                    "seed {seed}: rewrite of {phi} holds on the {k}-bounded \
                     coloring {wc}, but the original fails on {w} at bound {}",
                    2 * k
                );
            }
        }
    }
    // Both implications must fire non-vacuously; the seeds are fixed,
    // so these counts are stable.
    assert!(spaced_premises >= 100, "only {spaced_premises} spaced premises");
    assert!(bounded_premises >= 100, "only {bounded_premises} bounded premises");
}

/// Raising the prompt bound never loses satisfaction.
#[test]
fn prompt_bound_is_upward_closed() {
    let alphabet = Alphabet::new(["a", "b"]);
    let mut premises = 0u32;
    for seed in 0..300u64 {
        let mut r = rng(12_000 + seed);
        let size = 1 + (seed as usize % 6);
        let phi = random_prompt(&mut r, &["a", "b"], size);
        let w = random_lasso(&mut r, &alphabet, 3, 3);
        let k = r.gen_range(0..=3u64);
        if evaluate(&w, &phi, &Valuation::prompt(k)).unwrap() {
            premises += 1;
            for up in 1..=3u64 {
                assert!(
                    evaluate(&w, &phi, &Valuation::prompt(k + up)).unwrap(),
                    "seed {seed}: {phi} on {w} holds at {k} but not at {}",
                    k + up
                );
            }
        }
    }
    assert!(premises >= 50, "only {premises} premises");
}
