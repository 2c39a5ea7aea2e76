//! Printing a formula and parsing the text back yields the same tree,
//! across every fragment and operator mix.

use plts_core::formula::parse;
use plts_core::testkit::{random_ltl, random_pltl, random_prompt, rng};

#[test]
fn printed_formulas_parse_back_identically() {
    for seed in 0..400u64 {
        let mut r = rng(51_000 + seed);
        let size = 1 + (seed as usize % 10);
        let formulas = [
            random_ltl(&mut r, &["a", "b", "c"], size),
            random_prompt(&mut r, &["a", "b"], size),
            random_pltl(&mut r, &["a", "b"], &["x1", "x2"], &["y1"], size),
        ];
        for phi in formulas {
            let text = phi.to_string();
            let back = parse(&text)
                .unwrap_or_else(|e| panic!("seed {seed}: `{text}` fails to parse: {e}"));
            assert_eq!(back, phi, "seed {seed}: `{text}` parses to {back}");
        }
    }
}
