//! The distributed product implements the joint strategy: after any
//! joint input prefix, its output letter is exactly the union of the
//! components' outputs, each fed the same prefix through widening.

use std::collections::BTreeSet;

use plts_core::formula::Alphabet;
use plts_core::testkit::{random_system, rng};
use rand::Rng;

/// Enumerates every input prefix of length `0..=max_len` over the
/// system's input alphabet and applies `check`.
fn for_all_prefixes(
    inputs: &Alphabet,
    max_len: usize,
    mut check: impl FnMut(&[BTreeSet<String>]),
) {
    let letters = inputs.letter_count() as u32;
    for len in 0..=max_len {
        let mut digits = vec![0u32; len];
        loop {
            let prefix: Vec<BTreeSet<String>> =
                digits.iter().map(|&m| inputs.set_of(m)).collect();
            check(&prefix);
            let Some(i) = (0..len).rev().find(|&i| digits[i] + 1 < letters) else {
                break;
            };
            digits[i] += 1;
            digits[i + 1..].fill(0);
        }
    }
}

fn subset<R: Rng>(r: &mut R, pool: &[&str]) -> Vec<String> {
    pool.iter().filter(|_| r.gen_ratio(1, 2)).map(|s| s.to_string()).collect()
}

#[test]
fn product_output_is_union_of_widened_components() {
    let pool = ["u", "v", "w"];
    for seed in 0..100u64 {
        let mut r = rng(81_000 + seed);
        let in1 = Alphabet::new(subset(&mut r, &pool));
        let in2 = Alphabet::new(subset(&mut r, &pool));
        let ts1 = random_system(&mut r, &in1, &Alphabet::new(["c"]), 3);
        let ts2 = random_system(&mut r, &in2, &Alphabet::new(["d"]), 3);
        let product = ts1.distributed_product(&ts2).unwrap();

        let missing = |own: &Alphabet| -> Vec<String> {
            product
                .input_props()
                .props()
                .iter()
                .filter(|p| !own.contains(p))
                .cloned()
                .collect()
        };
        let wide1 = ts1.widen(missing(&in1)).unwrap();
        let wide2 = ts2.widen(missing(&in2)).unwrap();
        assert_eq!(wide1.input_props(), product.input_props());
        assert_eq!(wide2.input_props(), product.input_props());

        for_all_prefixes(product.input_props(), 4, |prefix| {
            let joint = product.run_output(prefix).unwrap();
            let mut split = wide1.run_output(prefix).unwrap();
            split.extend(wide2.run_output(prefix).unwrap());
            assert_eq!(joint, split, "seed {seed}, prefix {prefix:?}");
        });
    }
}
