//! The tableau translation is language-preserving: automaton
//! membership agrees with direct formula evaluation on every
//! ultimately periodic word short enough to enumerate.

use plts_core::automata::{ltl_to_nba, nba_accepts};
use plts_core::formula::{evaluate, Alphabet, LassoWord, Valuation};
use plts_core::testkit::{random_ltl, rng};

/// All lassos over the given alphabet with stem length `0..=max_stem`
/// and loop length `1..=max_loop`.
fn all_lassos(alphabet: &Alphabet, max_stem: usize, max_loop: usize) -> Vec<LassoWord> {
    let letters = alphabet.letter_count() as u32;
    let mut out = Vec::new();
    for stem_len in 0..=max_stem {
        for loop_len in 1..=max_loop {
            let total = stem_len + loop_len;
            let mut digits = vec![0u32; total];
            loop {
                let stem = digits[..stem_len].to_vec();
                let lasso_loop = digits[stem_len..].to_vec();
                out.push(LassoWord::from_masks(alphabet.clone(), stem, lasso_loop));
                let Some(i) = (0..total).rev().find(|&i| digits[i] + 1 < letters) else {
                    break;
                };
                digits[i] += 1;
                digits[i + 1..].fill(0);
            }
        }
    }
    out
}

#[test]
fn nba_membership_agrees_with_evaluation() {
    let alphabet = Alphabet::new(["a", "b"]);
    let lassos = all_lassos(&alphabet, 3, 3);
    assert_eq!(lassos.len(), 7140);

    for seed in 0..300u64 {
        let mut r = rng(31_000 + seed);
        let size = 1 + (seed as usize % 5);
        let phi = random_ltl(&mut r, &["a", "b"], size);
        let n = ltl_to_nba(&phi, &alphabet).unwrap();
        for w in &lassos {
            let direct = evaluate(w, &phi, &Valuation::default()).unwrap();
            assert_eq!(
                nba_accepts(&n, w),
                direct,
                "seed {seed}, formula {phi}, word {w}"
            );
        }
    }
}
