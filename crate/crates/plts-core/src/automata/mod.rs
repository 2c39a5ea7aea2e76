//! Automata machinery: LTL→NBA compilation, the pumpability safety
//! automaton, their composition, and universal co-Büchi acceptance via
//! run graphs and annotations.

use thiserror::Error;

use crate::formula::{Alphabet, LassoWord};

mod compose;
mod pump;
mod simulation;
mod tableau;
mod uct;

pub use compose::SpecPumpNba;
pub use pump::{pump_state_count, PumpNba, COLOR_R, COLOR_RP};
pub use tableau::ltl_to_nba;
pub use uct::{
    check_acceptance, dualize_spec_pump, dualize_word_nba, run_graph, valid_annotation,
    Annotation, RunGraph, StateAwareUct,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AutomataError {
    #[error("formula is not plain LTL: {0}")]
    NotPlainLtl(&'static str),
    #[error("atom `{0}` is not in the automaton alphabet")]
    AtomOutsideAlphabet(String),
    #[error("pumpability automaton needs a nonempty vertex set")]
    EmptyVertexSet,
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("state space mismatch: {0}")]
    StateSpaceMismatch(String),
}

/// A nondeterministic Büchi word automaton over letters `2^props`.
///
/// The transition relation is stored densely: `delta[state][letter]`
/// is the sorted list of successors. A safety automaton is one where
/// every state is accepting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nba {
    props: Alphabet,
    init: usize,
    delta: Vec<Vec<Vec<usize>>>,
    accepting: Vec<bool>,
}

impl Nba {
    pub fn new(
        props: Alphabet,
        init: usize,
        delta: Vec<Vec<Vec<usize>>>,
        accepting: Vec<bool>,
    ) -> Nba {
        let n = delta.len();
        assert!(init < n && accepting.len() == n);
        let letters = props.letter_count();
        for row in &delta {
            assert_eq!(row.len(), letters);
            for targets in row {
                assert!(targets.iter().all(|&t| t < n));
                assert!(targets.windows(2).all(|w| w[0] < w[1]), "targets sorted/deduped");
            }
        }
        Nba { props, init, delta, accepting }
    }

    pub fn props(&self) -> &Alphabet {
        &self.props
    }

    pub fn state_count(&self) -> usize {
        self.delta.len()
    }

    pub fn init(&self) -> usize {
        self.init
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    pub fn accepting_count(&self) -> usize {
        self.accepting.iter().filter(|&&b| b).count()
    }

    /// Successors of `state` on letter mask `letter`.
    pub fn targets(&self, state: usize, letter: u32) -> &[usize] {
        &self.delta[state][letter as usize]
    }

    /// GraphViz rendering for diagnostics.
    pub fn to_dot(&self) -> String {
        use std::fmt::Write;
        let mut out = String::from("digraph nba {\n  rankdir=LR;\n");
        for s in 0..self.state_count() {
            let shape = if self.accepting[s] { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  q{s} [shape={shape}];");
            let _ = writeln!(out, "  init{s} [style=invis];");
        }
        let _ = writeln!(out, "  start [style=invis];\n  start -> q{};", self.init);
        for s in 0..self.state_count() {
            for letter in 0..self.props.letter_count() {
                for &t in &self.delta[s][letter] {
                    let label: Vec<String> =
                        self.props.set_of(letter as u32).into_iter().collect();
                    let _ = writeln!(out, "  q{s} -> q{t} [label=\"{{{}}}\"];", label.join(","));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Membership of an ultimately periodic word: true iff some run visits
/// accepting states infinitely often. Computed on the product of the
/// lasso's stored positions with the automaton, searching for a
/// reachable cycle through an accepting state.
///
/// Every automaton proposition must occur in the word's alphabet;
/// extra word propositions are ignored.
pub fn nba_accepts(n: &Nba, w: &LassoWord) -> bool {
    let embed = n.props.embedding(w.alphabet());
    assert!(
        embed.iter().all(Option::is_some),
        "word alphabet must contain all automaton propositions"
    );
    let project = |mask: u32| -> u32 {
        let mut out = 0u32;
        for (i, pos) in embed.iter().enumerate() {
            if mask & (1 << pos.unwrap()) != 0 {
                out |= 1 << i;
            }
        }
        out
    };
    let positions = w.len();
    let node = |pos: usize, q: usize| pos * n.state_count() + q;
    let count = positions * n.state_count();
    // Reachable product nodes from (position 0, init).
    let letters: Vec<u32> = (0..positions).map(|i| project(w.letter_at(i))).collect();
    let mut seen = vec![false; count];
    let start = node(0, n.init);
    seen[start] = true;
    let mut stack = vec![(0usize, n.init)];
    let mut reachable: Vec<(usize, usize)> = vec![(0, n.init)];
    while let Some((pos, q)) = stack.pop() {
        for &q2 in n.targets(q, letters[pos]) {
            let p2 = w.succ(pos);
            if !seen[node(p2, q2)] {
                seen[node(p2, q2)] = true;
                stack.push((p2, q2));
                reachable.push((p2, q2));
            }
        }
    }
    // An accepting lasso exists iff some cyclic SCC of the reachable
    // product contains an accepting automaton state.
    let succs = |&(pos, q): &(usize, usize)| -> Vec<(usize, usize)> {
        n.targets(q, letters[pos]).iter().map(|&q2| (w.succ(pos), q2)).collect()
    };
    let sccs = crate::automata::scc_of(&reachable, succs);
    for scc in &sccs {
        let cyclic = scc.len() > 1
            || succs(&scc[0]).contains(&scc[0]);
        if cyclic && scc.iter().any(|&(_, q)| n.accepting[q]) {
            return true;
        }
    }
    false
}

/// Tarjan's strongly connected components over an explicit node list
/// and a successor function; nodes outside the list are ignored.
/// Components are returned in reverse topological order.
pub(crate) fn scc_of<N, F>(nodes: &[N], succs: F) -> Vec<Vec<N>>
where
    N: Copy + Eq + Ord,
    F: Fn(&N) -> Vec<N>,
{
    use std::collections::BTreeMap;
    let index_of: BTreeMap<N, usize> = nodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    let n = nodes.len();
    let mut index = vec![usize::MAX; n];
    let mut lowlink = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut out: Vec<Vec<N>> = Vec::new();

    // Iterative Tarjan to avoid recursion-depth limits on long lassos.
    enum Frame {
        Enter(usize),
        Resume(usize, usize),
    }
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut frames = vec![Frame::Enter(root)];
        while let Some(frame) = frames.pop() {
            match frame {
                Frame::Enter(v) => {
                    index[v] = next_index;
                    lowlink[v] = next_index;
                    next_index += 1;
                    stack.push(v);
                    on_stack[v] = true;
                    frames.push(Frame::Resume(v, 0));
                }
                Frame::Resume(v, child_pos) => {
                    let children: Vec<usize> = succs(&nodes[v])
                        .into_iter()
                        .filter_map(|c| index_of.get(&c).copied())
                        .collect();
                    let mut advanced = false;
                    for (k, &c) in children.iter().enumerate().skip(child_pos) {
                        if index[c] == usize::MAX {
                            frames.push(Frame::Resume(v, k + 1));
                            frames.push(Frame::Enter(c));
                            advanced = true;
                            break;
                        } else if on_stack[c] {
                            lowlink[v] = lowlink[v].min(index[c]);
                        }
                    }
                    if advanced {
                        continue;
                    }
                    if lowlink[v] == index[v] {
                        let mut comp = Vec::new();
                        while let Some(w) = stack.pop() {
                            on_stack[w] = false;
                            comp.push(nodes[w]);
                            if w == v {
                                break;
                            }
                        }
                        out.push(comp);
                    } else if let Some(Frame::Resume(parent, _)) = frames.last() {
                        let parent = *parent;
                        lowlink[parent] = lowlink[parent].min(lowlink[v]);
                    }
                }
            }
        }
    }
    out
}

/// All Until subformulas of a formula, in deterministic order.
pub(crate) fn until_subformulas(f: &crate::formula::Formula) -> Vec<crate::formula::Formula> {
    let mut untils: Vec<crate::formula::Formula> = f
        .subformulas()
        .into_iter()
        .filter(|g| matches!(g, crate::formula::Formula::Until(_, _)))
        .cloned()
        .collect();
    untils.sort();
    untils.dedup();
    untils
}
