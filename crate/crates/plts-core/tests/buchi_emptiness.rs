//! Generalized Büchi emptiness against an exhaustive bounded-lasso
//! enumeration on random graphs.

use plts_core::colored::{buchi_non_empty, lasso_is_accepting, Lasso};
use plts_core::testkit;

const SEEDS: u64 = 200;
const MAX_VERTICES: usize = 6;
const STEM_BOUND: usize = 8;
const LOOP_BOUND: usize = 8;

/// Does some lasso within the bounds meet every acceptance set inside
/// its loop? Walk enumeration over (position, vertex, sets-covered),
/// which ranges over every bounded lasso without SCC reasoning.
fn enumeration_oracle(
    edges: &[Vec<usize>],
    init: usize,
    acceptance: &[Vec<bool>],
    max_stem: usize,
    max_loop: usize,
) -> bool {
    let n = edges.len();
    let full: u32 = (1 << acceptance.len()) - 1;
    let cover = |v: usize| -> u32 {
        acceptance
            .iter()
            .enumerate()
            .filter(|(_, set)| set[v])
            .fold(0, |m, (i, _)| m | (1 << i))
    };
    // Stems: breadth-first layers from the initial vertex.
    let mut stem_ok = vec![false; n];
    let mut frontier = vec![init];
    stem_ok[init] = true;
    for _ in 0..max_stem {
        let mut next = Vec::new();
        for &v in &frontier {
            for &w in &edges[v] {
                if !stem_ok[w] {
                    stem_ok[w] = true;
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    // Loops: from each stem-reachable vertex, walks back to it.
    for v in (0..n).filter(|&v| stem_ok[v]) {
        let mut layer = vec![vec![false; (full + 1) as usize]; n];
        layer[v][cover(v) as usize] = true;
        for _ in 0..max_loop {
            let mut next = vec![vec![false; (full + 1) as usize]; n];
            for u in 0..n {
                for mask in 0..=full {
                    if !layer[u][mask as usize] {
                        continue;
                    }
                    for &w in &edges[u] {
                        next[w][(mask | cover(w)) as usize] = true;
                    }
                }
            }
            if next[v][full as usize] {
                return true;
            }
            layer = next;
        }
    }
    false
}

fn shape_of(g: &plts_core::colored::ColoredBuchiGraph) -> (Vec<Vec<usize>>, Vec<Vec<bool>>) {
    let edges = (0..g.vertex_count()).map(|v| g.edges_of(v).to_vec()).collect();
    (edges, g.acceptance_sets().to_vec())
}

fn loop_hits_all(acceptance: &[Vec<bool>], lasso: &Lasso) -> bool {
    acceptance.iter().all(|set| lasso.cycle().iter().any(|&v| set[v]))
}

#[test]
fn emptiness_matches_bounded_enumeration_on_random_graphs() {
    for seed in 0..SEEDS {
        let mut rng = testkit::rng(seed);
        let g = testkit::random_colored_graph(&mut rng, MAX_VERTICES);
        let (edges, acceptance) = shape_of(&g);
        let found = buchi_non_empty(&edges, g.init(), &acceptance);
        let oracle = enumeration_oracle(&edges, g.init(), &acceptance, STEM_BOUND, LOOP_BOUND);
        assert_eq!(
            found.is_some(),
            oracle,
            "seed {seed}: search {found:?} vs enumeration {oracle}\n{}",
            g.to_dot()
        );
        if let Some(lasso) = found {
            assert!(lasso.is_path_of(&g), "seed {seed}: witness off-graph");
            assert!(lasso_is_accepting(&g, &lasso), "seed {seed}: witness not accepting");
            assert!(loop_hits_all(&acceptance, &lasso), "seed {seed}: loop misses a set");
        }
    }
}

#[test]
fn emptiness_handles_degenerate_shapes() {
    // Single vertex, self-loop, member of both sets.
    let edges = vec![vec![0]];
    let acc = vec![vec![true], vec![true]];
    let lasso = buchi_non_empty(&edges, 0, &acc).expect("self-loop lasso");
    assert_eq!(lasso.loop_len(), 1);
    // The two sets are met only in different terminal components.
    let edges = vec![vec![1, 2], vec![1], vec![2]];
    let acc = vec![vec![false, true, false], vec![false, false, true]];
    assert!(buchi_non_empty(&edges, 0, &acc).is_none());
}
