//! The pump automaton recognizes exactly the pumpable-word language,
//! checked exhaustively against the positional oracle; likewise the
//! composed spec automaton on hand-built lassos.

use plts_core::automata::{ltl_to_nba, PumpNba, SpecPumpNba, COLOR_R, COLOR_RP};
use plts_core::colored::word_is_pumpable;
use plts_core::formula::{alternation, Alphabet, Formula};

/// Every colored lasso over at most three vertices with colors fixed
/// per vertex and stem + loop at most six letters.
#[test]
fn pump_automaton_matches_oracle_on_vertex_colored_lassos() {
    let pump = PumpNba::new(3).unwrap();
    let mut sequence = Vec::new();
    for coloring in 0..64u32 {
        let color_of = |v: usize| -> u8 { ((coloring >> (2 * v)) & 3) as u8 };
        for len in 1..=6usize {
            sequence.clear();
            sequence.resize(len, 0usize);
            loop {
                for split in 0..len {
                    let word: Vec<(usize, u8)> =
                        sequence.iter().map(|&v| (v, color_of(v))).collect();
                    let (stem, lasso_loop) = word.split_at(split);
                    let automaton = pump.has_infinite_run(stem, lasso_loop);
                    let oracle = word_is_pumpable(stem, lasso_loop);
                    assert_eq!(
                        automaton, oracle,
                        "coloring {coloring:06b}, word {word:?}, split {split}"
                    );
                }
                // Next vertex sequence, odometer-style.
                let Some(i) = (0..len).rev().find(|&i| sequence[i] < 2) else {
                    break;
                };
                sequence[i] += 1;
                sequence[i + 1..].fill(0);
            }
        }
    }
}

/// The general setting: the color part of a letter is free, not a
/// function of the vertex id.
#[test]
fn pump_automaton_matches_oracle_on_position_colored_lassos() {
    let pump = PumpNba::new(2).unwrap();
    let decode = |d: u32| -> (usize, u8) { ((d & 1) as usize, ((d >> 1) & 3) as u8) };
    for len in 1..=4usize {
        let mut digits = vec![0u32; len];
        loop {
            for split in 0..len {
                let word: Vec<(usize, u8)> = digits.iter().map(|&d| decode(d)).collect();
                let (stem, lasso_loop) = word.split_at(split);
                assert_eq!(
                    pump.has_infinite_run(stem, lasso_loop),
                    word_is_pumpable(stem, lasso_loop),
                    "word {word:?}, split {split}"
                );
            }
            let Some(i) = (0..len).rev().find(|&i| digits[i] < 7) else {
                break;
            };
            digits[i] += 1;
            digits[i + 1..].fill(0);
        }
    }
}

/// With a one-state spec component the composed vertex set collapses
/// to the implementation states alone, so the composed language is
/// exactly the pumpable-word language: checked against the positional
/// oracle over every lasso of up to three (letter, state) pairs.
#[test]
fn composed_automaton_with_trivial_spec_matches_pumpability_oracle() {
    let alphabet = Alphabet::new(["r", "rp"]);
    let trivial = ltl_to_nba(&Formula::True, &alphabet).unwrap();
    assert_eq!(trivial.state_count(), 1, "the equality below needs |Q| = 1");
    let n = SpecPumpNba::new(trivial, 2, "r", "rp").unwrap();
    let r = 1u32 << alphabet.index_of("r").unwrap();
    let rp = 1u32 << alphabet.index_of("rp").unwrap();

    for len in 1..=3usize {
        let mut digits = vec![0u32; len];
        loop {
            let word: Vec<(u32, usize)> = digits
                .iter()
                .map(|&d| {
                    let mut sigma = 0u32;
                    if d & 1 != 0 {
                        sigma |= r;
                    }
                    if d & 2 != 0 {
                        sigma |= rp;
                    }
                    (sigma, ((d >> 2) & 1) as usize)
                })
                .collect();
            for split in 0..len {
                let (stem, lasso_loop) = word.split_at(split);
                let colored = as_colored(&word, r, rp);
                let (cstem, cloop) = colored.split_at(split);
                assert_eq!(
                    n.accepts_lasso(stem, lasso_loop),
                    word_is_pumpable(cstem, cloop),
                    "word {word:?}, split {split}"
                );
            }
            let Some(i) = (0..len).rev().find(|&i| digits[i] < 7) else {
                break;
            };
            digits[i] += 1;
            digits[i + 1..].fill(0);
        }
    }
}

/// With a nontrivial spec the composed automaton demands both the spec
/// and the pumpable structure — and the structure is measured along
/// the guessed spec run, over (state, spec-state) pairs.
#[test]
fn composed_automaton_requires_spec_and_pumpability() {
    let alphabet = Alphabet::new(["r", "rp"]);
    let spec = ltl_to_nba(&alternation("rp"), &alphabet).unwrap();
    let spec_states = spec.state_count();
    let n = SpecPumpNba::new(spec, 2, "r", "rp").unwrap();
    let r = 1u32 << alphabet.index_of("r").unwrap();
    let rp = 1u32 << alphabet.index_of("rp").unwrap();

    // rp flips every step: single-letter blocks leave no room for a
    // vertex repetition around an r-flip.
    let thin: Vec<(u32, usize)> = vec![(r | rp, 0), (r, 0)];
    assert!(!word_is_pumpable(&[], &as_colored(&thin, r, rp)));
    assert!(!n.accepts_lasso(&[], &thin));

    // A satisfying, pumpable lasso: a fixed implementation state with
    // r flipping every step, in rp-blocks holding one more r-position
    // than the spec has states. Any run of the spec then repeats some
    // state at two r-positions of each block, with an r-flip strictly
    // between them and before the block ends — so a composed run
    // exists no matter how the spec automaton is laid out.
    let block = |with_rp: bool| -> Vec<(u32, usize)> {
        let rp_part = if with_rp { rp } else { 0 };
        (0..=spec_states)
            .flat_map(|_| [(r | rp_part, 0usize), (rp_part, 0usize)])
            .collect()
    };
    let mut wide = block(true);
    wide.extend(block(false));
    assert!(word_is_pumpable(&[], &as_colored(&wide, r, rp)));
    assert!(n.accepts_lasso(&[], &wide));

    // Pumpable structure without the spec: rp never changes, so the
    // alternation spec fails while the pumpability condition is vacuous.
    let unalternating: Vec<(u32, usize)> = vec![(r, 0), (0, 1), (r, 0)];
    assert!(word_is_pumpable(&[], &as_colored(&unalternating, r, rp)));
    assert!(!n.accepts_lasso(&[], &unalternating));
}

fn as_colored(word: &[(u32, usize)], r: u32, rp: u32) -> Vec<(usize, u8)> {
    word.iter()
        .map(|&(sigma, x)| {
            let mut c = 0u8;
            if sigma & r != 0 {
                c |= COLOR_R;
            }
            if sigma & rp != 0 {
                c |= COLOR_RP;
            }
            (x, c)
        })
        .collect()
}
