//! Information-fork detection on the two reference architectures, and
//! invariance of fork existence under the color extension (the fresh
//! color proposition is broadcast to every process, which adds no
//! asymmetric information).

use std::collections::BTreeSet;

use plts_core::architecture::{
    example_independent, example_pipeline, find_information_fork, is_information_fork,
    is_weakly_ordered, InformationFork,
};
use plts_core::testkit::{random_architecture, rng};

#[test]
fn reference_architectures() {
    let fork = find_information_fork(&example_independent()).expect("fork exists");
    assert_eq!(
        fork,
        InformationFork {
            proc_subset: BTreeSet::from(["p_env".to_string()]),
            var_subset: BTreeSet::new(),
            p: "p1".to_string(),
            p_prime: "p2".to_string(),
        }
    );
    assert!(is_information_fork(&example_independent(), &fork));
    assert!(!is_weakly_ordered(&example_independent()));

    assert_eq!(find_information_fork(&example_pipeline()), None);
    assert!(is_weakly_ordered(&example_pipeline()));
}

#[test]
fn color_extension_preserves_fork_existence() {
    for seed in 0..100u64 {
        let mut r = rng(71_000 + seed);
        let a = random_architecture(&mut r, 5);
        let extended = a.color_extend("r").unwrap();
        let plain_fork = find_information_fork(&a);
        let colored_fork = find_information_fork(&extended);
        if let Some(f) = &plain_fork {
            assert!(is_information_fork(&a, f), "seed {seed}: invalid fork {f:?}");
        }
        if let Some(f) = &colored_fork {
            assert!(is_information_fork(&extended, f), "seed {seed}: invalid fork {f:?}");
        }
        assert_eq!(
            plain_fork.is_some(),
            colored_fork.is_some(),
            "seed {seed}: fork existence differs after color extension on {a:?}"
        );
    }
}
