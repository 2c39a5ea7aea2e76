//! Parameterized operators are monotone in their variable valuations,
//! and eliminating them (bounded-eventually to prompt-eventually,
//! bounded-always to its operand) relates the two fragments in both
//! directions.

use plts_core::formula::{evaluate, pltl_to_prompt, Alphabet, Valuation};
use plts_core::testkit::{random_lasso, random_pltl, rng};
use rand::Rng;

const ATOMS: [&str; 2] = ["a", "b"];
const F_VARS: [&str; 2] = ["x1", "x2"];
const G_VARS: [&str; 2] = ["y1", "y2"];

fn random_valuation(r: &mut impl Rng, max: u64) -> Valuation {
    let mut v = Valuation::prompt(0);
    for name in F_VARS.iter().chain(&G_VARS) {
        v.vars.insert((*name).to_string(), r.gen_range(0..=max));
    }
    v
}

#[test]
fn satisfaction_is_monotone_in_the_valuation() {
    let alphabet = Alphabet::new(ATOMS);
    let mut premises = 0u32;
    for seed in 0..300u64 {
        let mut r = rng(61_000 + seed);
        let size = 1 + (seed as usize % 6);
        let phi = random_pltl(&mut r, &ATOMS, &F_VARS, &G_VARS, size);
        let w = random_lasso(&mut r, &alphabet, 3, 3);
        let alpha = random_valuation(&mut r, 3);
        // Dominating valuation: at least as large on every eventually
        // variable, at most as large on every always variable.
        let mut beta = alpha.clone();
        for x in F_VARS {
            let v = alpha.var(x).unwrap() + r.gen_range(0..=2);
            beta.vars.insert(x.to_string(), v);
        }
        for y in G_VARS {
            let v = alpha.var(y).unwrap().saturating_sub(r.gen_range(0..=2));
            beta.vars.insert(y.to_string(), v);
        }
        if evaluate(&w, &phi, &alpha).unwrap() {
            premises += 1;
            assert!(
                evaluate(&w, &phi, &beta).unwrap(),
                "seed {seed}: {phi} on {w} holds under {alpha:?} but not under {beta:?}"
            );
        }
    }
    assert!(premises >= 50, "only {premises} premises");
}

#[test]
fn elimination_relates_the_fragments_both_ways() {
    let alphabet = Alphabet::new(ATOMS);
    let mut forward = 0u32;
    let mut backward = 0u32;
    for seed in 0..300u64 {
        let mut r = rng(62_000 + seed);
        let size = 1 + (seed as usize % 6);
        let phi = random_pltl(&mut r, &ATOMS, &F_VARS, &G_VARS, size);
        let reduced = pltl_to_prompt(&phi).unwrap();
        assert!(reduced.is_prompt_ltl());
        let w = random_lasso(&mut r, &alphabet, 3, 3);
        let (var_f, var_g) = phi.var_sets();

        // Some valuation satisfies the original → its largest
        // eventually bound satisfies the reduction.
        let alpha = random_valuation(&mut r, 3);
        if evaluate(&w, &phi, &alpha).unwrap() {
            forward += 1;
            let k = var_f.iter().map(|x| alpha.var(x).unwrap()).max().unwrap_or(0);
            assert!(
                evaluate(&w, &reduced, &Valuation::prompt(k)).unwrap(),
                "seed {seed}: {phi} holds on {w} under {alpha:?}, \
                 but {reduced} fails at bound {k}"
            );
        }

        // Some bound satisfies the reduction → the valuation sending
        // every eventually variable to that bound and every always
        // variable to zero satisfies the original.
        let k = r.gen_range(0..=3u64);
        if evaluate(&w, &reduced, &Valuation::prompt(k)).unwrap() {
            backward += 1;
            let mut beta = Valuation::prompt(0);
            for x in &var_f {
                beta.vars.insert(x.clone(), k);
            }
            for y in &var_g {
                beta.vars.insert(y.clone(), 0);
            }
            assert!(
                evaluate(&w, &phi, &beta).unwrap(),
                "seed {seed}: {reduced} holds on {w} at bound {k}, \
                 but {phi} fails under {beta:?}"
            );
        }
    }
    assert!(forward >= 50, "only {forward} forward premises");
    assert!(backward >= 50, "only {backward} backward premises");
}
