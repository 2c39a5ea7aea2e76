//! Language-preserving Büchi state reduction via delayed simulation.
//!
//! Delayed simulation is the coarsest of the common simulation
//! preorders whose quotient still preserves the Büchi language: when
//! the simulated run visits an accepting state, the simulating run
//! must visit one at some (possibly later) point. The preorder is the
//! winning region of a game in which the duplicator mirrors letters
//! and must clear the pending-acceptance obligation infinitely often —
//! a Büchi game over positions (left state, right state, obligation).

use super::Nba;

/// Game-position arena for one delayed-simulation check.
///
/// Spoiler positions are (q0, q1, bit); duplicator positions are
/// (q0', letter, q1, bit) after the spoiler committed a move. The bit
/// is 1 while an accepting visit of the spoiler is unanswered.
struct Arena {
    /// Successor lists for every position.
    succ: Vec<Vec<u32>>,
    /// Predecessor lists (for attractor computation).
    pred: Vec<Vec<u32>>,
    /// True for duplicator-controlled positions.
    duplicator: Vec<bool>,
    /// Büchi target: spoiler positions with a cleared obligation.
    target: Vec<bool>,
}

fn arena(n: &Nba) -> Arena {
    let q = n.state_count();
    let letters = n.props().letter_count();
    let s_base = 0usize;
    let s_count = q * q * 2;
    let d_base = s_count;
    let d_count = q * letters * q * 2;
    let s_id = |q0: usize, q1: usize, b: usize| s_base + (q0 * q + q1) * 2 + b;
    let d_id = |q0n: usize, l: usize, q1: usize, b: usize| {
        d_base + ((q0n * letters + l) * q + q1) * 2 + b
    };
    let total = s_count + d_count;
    let mut succ: Vec<Vec<u32>> = vec![Vec::new(); total];
    let mut duplicator = vec![false; total];
    let mut target = vec![false; total];
    for q0 in 0..q {
        for q1 in 0..q {
            for b in 0..2 {
                let s = s_id(q0, q1, b);
                target[s] = b == 0;
                for l in 0..letters {
                    for &t in n.targets(q0, l as u32) {
                        succ[s].push(d_id(t, l, q1, b) as u32);
                    }
                }
            }
        }
    }
    for q0n in 0..q {
        for l in 0..letters {
            for q1 in 0..q {
                for b in 0..2 {
                    let d = d_id(q0n, l, q1, b);
                    duplicator[d] = true;
                    for &t in n.targets(q1, l as u32) {
                        let nb = if n.is_accepting(t) {
                            0
                        } else if n.is_accepting(q0n) {
                            1
                        } else {
                            b
                        };
                        succ[d].push(s_id(q0n, t, nb) as u32);
                    }
                }
            }
        }
    }
    let mut pred: Vec<Vec<u32>> = vec![Vec::new(); total];
    for (v, outs) in succ.iter().enumerate() {
        for &w in outs {
            pred[w as usize].push(v as u32);
        }
    }
    Arena { succ, pred, duplicator, target }
}

/// Duplicator attractor: least superset of `base` from which the
/// duplicator can force the play into `base` in one step (or is
/// already there). Spoiler positions without moves count as won.
fn attractor(a: &Arena, base: &[bool]) -> Vec<bool> {
    let mut inset = base.to_vec();
    let mut spoiler_out: Vec<u32> = a
        .succ
        .iter()
        .enumerate()
        .map(|(v, s)| if a.duplicator[v] { 0 } else { s.len() as u32 })
        .collect();
    let mut queue: Vec<u32> = (0..inset.len()).filter(|&v| inset[v]).map(|v| v as u32).collect();
    while let Some(v) = queue.pop() {
        for &p in &a.pred[v as usize] {
            let p = p as usize;
            if inset[p] {
                continue;
            }
            if a.duplicator[p] {
                inset[p] = true;
                queue.push(p as u32);
            } else {
                spoiler_out[p] -= 1;
                if spoiler_out[p] == 0 {
                    inset[p] = true;
                    queue.push(p as u32);
                }
            }
        }
    }
    inset
}

/// Positions where the owner can ensure the next position lies in
/// `set` (spoiler positions require all moves inside; without moves
/// the play halts in the duplicator's favour).
fn controlled_pre(a: &Arena, set: &[bool]) -> Vec<bool> {
    (0..a.succ.len())
        .map(|v| {
            if a.duplicator[v] {
                a.succ[v].iter().any(|&w| set[w as usize])
            } else {
                a.succ[v].iter().all(|&w| set[w as usize])
            }
        })
        .collect()
}

/// Winning region of the duplicator for the Büchi objective "visit a
/// cleared-obligation position infinitely often (or halt the spoiler)".
fn duplicator_wins(a: &Arena) -> Vec<bool> {
    let mut y = vec![true; a.succ.len()];
    loop {
        let pre = controlled_pre(a, &y);
        let mut base: Vec<bool> = (0..y.len()).map(|v| a.target[v] && pre[v]).collect();
        for v in 0..base.len() {
            if !a.duplicator[v] && a.succ[v].is_empty() {
                base[v] = true;
            }
        }
        let next = attractor(a, &base);
        if next == y {
            return y;
        }
        y = next;
    }
}

/// The delayed-simulation preorder as a flat n×n boolean matrix:
/// entry q0·n + q1 is true iff q1 delayed-simulates q0.
fn delayed_preorder(n: &Nba) -> Vec<bool> {
    let q = n.state_count();
    let a = arena(n);
    let win = duplicator_wins(&a);
    let mut le = vec![false; q * q];
    for q0 in 0..q {
        for q1 in 0..q {
            let b0 = usize::from(n.is_accepting(q0) && !n.is_accepting(q1));
            le[q0 * q + q1] = win[(q0 * q + q1) * 2 + b0];
        }
    }
    le
}

/// Quotients the automaton by delayed-simulation equivalence.
///
/// Classes merge mutually simulating states; a class inherits the
/// union of member transitions and is accepting when any member is.
/// The construction preserves the language exactly. Automata whose
/// game arena would exceed `budget` positions are returned unchanged,
/// as are quotients that fail to shrink.
pub fn reduce_nba(n: Nba, budget: usize) -> Nba {
    let q = n.state_count();
    let letters = n.props().letter_count();
    let positions = 2 * q * q * (1 + letters);
    if q < 2 || positions > budget {
        return n;
    }
    let le = delayed_preorder(&n);
    debug_assert!((0..q).all(|s| le[s * q + s]), "delayed simulation is reflexive");
    let mut class_of = vec![usize::MAX; q];
    let mut reps: Vec<usize> = Vec::new();
    for s in 0..q {
        if let Some(&r) = reps.iter().find(|&&r| le[s * q + r] && le[r * q + s]) {
            class_of[s] = class_of[r];
        } else {
            class_of[s] = reps.len();
            reps.push(s);
        }
    }
    if reps.len() == q {
        return n;
    }
    let classes = reps.len();
    let mut delta: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); letters]; classes];
    let mut accepting = vec![false; classes];
    for s in 0..q {
        let c = class_of[s];
        accepting[c] |= n.is_accepting(s);
        for l in 0..letters {
            for &t in n.targets(s, l as u32) {
                delta[c][l].push(class_of[t]);
            }
        }
    }
    for row in &mut delta {
        for ts in row {
            ts.sort_unstable();
            ts.dedup();
        }
    }
    let init = class_of[n.init()];
    Nba::new(n.props().clone(), init, delta, accepting)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{ltl_to_nba, nba_accepts};
    use crate::formula::{evaluate, parse, Alphabet, LassoWord, Valuation};
    use crate::testkit::{random_lasso, random_ltl, rng};

    #[test]
    fn accepting_chain_collapses() {
        // Two all-accepting sink states in a chain recognize the same
        // language as one.
        let props = Alphabet::new(["a"]);
        let delta = vec![
            vec![vec![1], vec![1]],
            vec![vec![1], vec![1]],
        ];
        let n = Nba::new(props, 0, delta, vec![true, true]);
        let r = reduce_nba(n, usize::MAX);
        assert_eq!(r.state_count(), 1);
        assert!(r.is_accepting(0));
    }

    #[test]
    fn counter_phases_of_distinct_languages_stay_apart() {
        // F a: the waiting state and the satisfied state accept
        // different languages and must survive the quotient.
        let f = parse("F a").unwrap();
        let n = ltl_to_nba(&f, &Alphabet::new(["a"])).unwrap();
        assert_eq!(reduce_nba(n, usize::MAX).state_count(), 2);
    }

    #[test]
    fn quotient_preserves_membership_on_random_instances() {
        for seed in 0..120 {
            let mut r = rng(91_000 + seed);
            let size = 1 + (seed as usize % 5);
            let phi = random_ltl(&mut r, &["a", "b"], size);
            let props = Alphabet::new(["a", "b"]);
            let n = ltl_to_nba(&phi, &props).unwrap();
            let reduced = reduce_nba(n.clone(), usize::MAX);
            assert!(reduced.state_count() <= n.state_count());
            for _ in 0..40 {
                let w: LassoWord = random_lasso(&mut r, &props, 3, 3);
                let truth = evaluate(&w, &phi, &Valuation::default()).unwrap();
                assert_eq!(nba_accepts(&reduced, &w), truth, "formula {phi} on {w}");
            }
        }
    }
}
