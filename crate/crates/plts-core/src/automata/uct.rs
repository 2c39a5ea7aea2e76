//! Universal co-Büchi tree automata, run graphs, and annotations.
//!
//! A nondeterministic Büchi automaton is complemented here by dual
//! interpretation: the same transition structure is read universally,
//! with the accepting states becoming rejecting. Spreading the result
//! over all directions (input letters) yields a tree automaton whose
//! acceptance of a transition system is decided on the run graph: the
//! system is accepted iff no reachable cycle passes through a rejecting
//! vertex, which in turn holds iff a valid bounded annotation exists.

use std::collections::BTreeMap;

use super::{scc_of, AutomataError, Nba, SpecPumpNba};
use crate::formula::Alphabet;
use crate::machine::TransitionSystem;

enum Backing {
    /// Plain word automaton; the implementation-state component of the
    /// letter is ignored.
    Word(Nba),
    /// State-aware composed automaton.
    SpecPump(SpecPumpNba),
}

/// A (possibly state-aware) universal co-Büchi tree automaton with
/// directions `2^inputs` and letters `2^outputs × X`.
pub struct StateAwareUct {
    inputs: Alphabet,
    outputs: Alphabet,
    in_embed: Vec<usize>,
    out_embed: Vec<usize>,
    backing: Backing,
}

fn split_embedding(
    props: &Alphabet,
    inputs: &Alphabet,
    outputs: &Alphabet,
) -> Result<(Vec<usize>, Vec<usize>), AutomataError> {
    for p in inputs.props() {
        if outputs.contains(p) {
            return Err(AutomataError::AlphabetMismatch(format!(
                "`{p}` is both direction and label"
            )));
        }
    }
    if inputs.len() + outputs.len() != props.len() {
        return Err(AutomataError::AlphabetMismatch(format!(
            "directions and labels must partition the automaton alphabet \
             ({} + {} props vs {})",
            inputs.len(),
            outputs.len(),
            props.len()
        )));
    }
    let embed = |part: &Alphabet| -> Result<Vec<usize>, AutomataError> {
        part.props()
            .iter()
            .map(|p| {
                props
                    .index_of(p)
                    .ok_or_else(|| AutomataError::AlphabetMismatch(format!("`{p}` not in alphabet")))
            })
            .collect()
    };
    Ok((embed(inputs)?, embed(outputs)?))
}

/// Reads an NBA as a universal co-Büchi tree automaton over the given
/// direction/label split of its alphabet.
pub fn dualize_word_nba(
    nba: Nba,
    inputs: Alphabet,
    outputs: Alphabet,
) -> Result<StateAwareUct, AutomataError> {
    let (in_embed, out_embed) = split_embedding(nba.props(), &inputs, &outputs)?;
    Ok(StateAwareUct { inputs, outputs, in_embed, out_embed, backing: Backing::Word(nba) })
}

/// Reads a composed specification–pump automaton as a state-aware
/// universal co-Büchi tree automaton.
pub fn dualize_spec_pump(
    n: SpecPumpNba,
    inputs: Alphabet,
    outputs: Alphabet,
) -> Result<StateAwareUct, AutomataError> {
    let (in_embed, out_embed) = split_embedding(n.spec().props(), &inputs, &outputs)?;
    Ok(StateAwareUct { inputs, outputs, in_embed, out_embed, backing: Backing::SpecPump(n) })
}

impl StateAwareUct {
    pub fn inputs(&self) -> &Alphabet {
        &self.inputs
    }

    pub fn outputs(&self) -> &Alphabet {
        &self.outputs
    }

    pub fn state_count(&self) -> usize {
        match &self.backing {
            Backing::Word(nba) => nba.state_count(),
            Backing::SpecPump(n) => n.state_count(),
        }
    }

    pub fn init(&self) -> usize {
        match &self.backing {
            Backing::Word(nba) => nba.init(),
            Backing::SpecPump(n) => n.init(),
        }
    }

    pub fn is_rejecting(&self, state: usize) -> bool {
        match &self.backing {
            Backing::Word(nba) => nba.is_accepting(state),
            Backing::SpecPump(n) => n.is_accepting(state),
        }
    }

    pub fn rejecting_count(&self) -> usize {
        (0..self.state_count()).filter(|&q| self.is_rejecting(q)).count()
    }

    /// Expected implementation state count, if the automaton is
    /// state-aware.
    pub fn x_count(&self) -> Option<usize> {
        match &self.backing {
            Backing::Word(_) => None,
            Backing::SpecPump(n) => Some(n.x_count()),
        }
    }

    fn assemble(&self, out_letter: u32, direction: u32) -> u32 {
        let mut sigma = 0u32;
        for (i, &pos) in self.out_embed.iter().enumerate() {
            if out_letter & (1 << i) != 0 {
                sigma |= 1 << pos;
            }
        }
        for (i, &pos) in self.in_embed.iter().enumerate() {
            if direction & (1 << i) != 0 {
                sigma |= 1 << pos;
            }
        }
        sigma
    }

    /// Universal transition: all (successor state, direction) pairs for
    /// a state reading (label letter, implementation state `x`).
    pub fn successors(&self, state: usize, out_letter: u32, x: usize) -> Vec<(usize, u32)> {
        let mut out = Vec::new();
        for direction in 0..(1u32 << self.inputs.len()) {
            let sigma = self.assemble(out_letter, direction);
            match &self.backing {
                Backing::Word(nba) => {
                    for &q2 in nba.targets(state, sigma) {
                        out.push((q2, direction));
                    }
                }
                Backing::SpecPump(n) => {
                    for q2 in n.successors(state, sigma, x) {
                        out.push((q2, direction));
                    }
                }
            }
        }
        out
    }
}

/// The run graph of a universal automaton on a transition system:
/// vertices are (automaton state, system state) pairs.
pub struct RunGraph {
    vertices: Vec<(usize, usize)>,
    index: BTreeMap<(usize, usize), usize>,
    edges: Vec<Vec<(usize, u32)>>,
    rejecting: Vec<bool>,
}

impl RunGraph {
    pub fn root(&self) -> usize {
        0
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[(usize, usize)] {
        &self.vertices
    }

    pub fn vertex_index(&self, q: usize, s: usize) -> Option<usize> {
        self.index.get(&(q, s)).copied()
    }

    /// Outgoing edges of a vertex as (target, direction) pairs.
    pub fn edges_of(&self, v: usize) -> &[(usize, u32)] {
        &self.edges[v]
    }

    pub fn is_rejecting(&self, v: usize) -> bool {
        self.rejecting[v]
    }

    pub fn to_dot(&self) -> String {
        use std::fmt::Write;
        let mut out = String::from("digraph run_graph {\n");
        for (v, &(q, s)) in self.vertices.iter().enumerate() {
            let shape = if self.rejecting[v] { "doubleoctagon" } else { "ellipse" };
            let _ = writeln!(out, "  v{v} [shape={shape},label=\"q{q},s{s}\"];");
        }
        for (v, row) in self.edges.iter().enumerate() {
            for &(w, dir) in row {
                let _ = writeln!(out, "  v{v} -> v{w} [label=\"{dir}\"];");
            }
        }
        out.push_str("}\n");
        out
    }
}

fn validate_pair(u: &StateAwareUct, ts: &TransitionSystem) -> Result<(), AutomataError> {
    if ts.input_props() != u.inputs() {
        return Err(AutomataError::AlphabetMismatch(format!(
            "system inputs {:?} vs automaton directions {:?}",
            ts.input_props().props(),
            u.inputs().props()
        )));
    }
    if ts.output_props() != u.outputs() {
        return Err(AutomataError::AlphabetMismatch(format!(
            "system outputs {:?} vs automaton labels {:?}",
            ts.output_props().props(),
            u.outputs().props()
        )));
    }
    if let Some(x) = u.x_count() {
        if x != ts.state_count() {
            return Err(AutomataError::StateSpaceMismatch(format!(
                "automaton is state-aware for {} states, system has {}",
                x,
                ts.state_count()
            )));
        }
    }
    Ok(())
}

/// Least graph closed under the universal transition constraint,
/// rooted at (init, init).
pub fn run_graph(u: &StateAwareUct, ts: &TransitionSystem) -> Result<RunGraph, AutomataError> {
    validate_pair(u, ts)?;
    let root = (u.init(), ts.init_index());
    let mut vertices = vec![root];
    let mut index = BTreeMap::from([(root, 0usize)]);
    let mut edges: Vec<Vec<(usize, u32)>> = Vec::new();
    let mut frontier = vec![0usize];
    while let Some(v) = frontier.pop() {
        let (q, s) = vertices[v];
        let mut row: Vec<(usize, u32)> = Vec::new();
        for (q2, direction) in u.successors(q, ts.label_mask(s), s) {
            let s2 = ts.step(s, direction);
            let target = (q2, s2);
            let id = *index.entry(target).or_insert_with(|| {
                let id = vertices.len();
                vertices.push(target);
                frontier.push(id);
                id
            });
            row.push((id, direction));
        }
        row.sort_unstable();
        row.dedup();
        if edges.len() <= v {
            edges.resize(v + 1, Vec::new());
        }
        edges[v] = row;
    }
    if edges.len() < vertices.len() {
        edges.resize(vertices.len(), Vec::new());
    }
    let rejecting = vertices.iter().map(|&(q, _)| u.is_rejecting(q)).collect();
    Ok(RunGraph { vertices, index, edges, rejecting })
}

/// An annotation λ: (automaton state, system state) → ⊥ or a number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annotation {
    uct_states: usize,
    ts_states: usize,
    values: Vec<Option<u64>>,
}

impl Annotation {
    pub fn bottom(uct_states: usize, ts_states: usize) -> Annotation {
        Annotation { uct_states, ts_states, values: vec![None; uct_states * ts_states] }
    }

    pub fn get(&self, q: usize, s: usize) -> Option<u64> {
        self.values[q * self.ts_states + s]
    }

    pub fn set(&mut self, q: usize, s: usize, value: Option<u64>) {
        self.values[q * self.ts_states + s] = value;
    }

    pub fn max_value(&self) -> Option<u64> {
        self.values.iter().flatten().max().copied()
    }
}

/// Decides acceptance of `ts` by `u` and returns a witness annotation:
/// `Some` iff no reachable run-graph cycle passes through a rejecting
/// vertex. The annotation value of a vertex is the maximal number of
/// rejecting vertices on any path from the root to it (inclusive),
/// which keeps it (|S|·|B⃖|)-bounded.
pub fn check_acceptance(
    u: &StateAwareUct,
    ts: &TransitionSystem,
) -> Result<Option<Annotation>, AutomataError> {
    let rg = run_graph(u, ts)?;
    let n = rg.vertex_count();
    let ids: Vec<usize> = (0..n).collect();
    let succs = |&v: &usize| -> Vec<usize> { rg.edges[v].iter().map(|&(w, _)| w).collect() };
    let sccs = scc_of(&ids, succs);
    let mut comp_of = vec![usize::MAX; n];
    for (ci, comp) in sccs.iter().enumerate() {
        for &v in comp {
            comp_of[v] = ci;
        }
    }
    let cyclic: Vec<bool> = sccs
        .iter()
        .map(|comp| comp.len() > 1 || succs(&comp[0]).contains(&comp[0]))
        .collect();
    for (ci, comp) in sccs.iter().enumerate() {
        if cyclic[ci] && comp.iter().any(|&v| rg.rejecting[v]) {
            return Ok(None);
        }
    }
    // Longest rejecting-count path over the condensation, components
    // in topological order (Tarjan emits them in reverse).
    let mut value: Vec<Option<u64>> = vec![None; sccs.len()];
    let root_comp = comp_of[rg.root()];
    for ci in (0..sccs.len()).rev() {
        let comp = &sccs[ci];
        let mut best = value[ci];
        if ci == root_comp {
            best = Some(best.unwrap_or(0));
        }
        let Some(base) = best else {
            // Unreachable components cannot occur: every vertex of the
            // run graph is constructed from the root.
            unreachable!("run graph vertex without incoming path");
        };
        let contribution =
            if !cyclic[ci] && rg.rejecting[comp[0]] { 1 } else { 0 };
        let total = base + contribution;
        value[ci] = Some(total);
        for &v in comp {
            for &(w, _) in &rg.edges[v] {
                let cw = comp_of[w];
                if cw != ci {
                    value[cw] = Some(value[cw].map_or(total, |old| old.max(total)));
                }
            }
        }
    }
    let mut annotation = Annotation::bottom(u.state_count(), ts.state_count());
    for (v, &(q, s)) in rg.vertices.iter().enumerate() {
        annotation.set(q, s, value[comp_of[v]]);
    }
    debug_assert!(
        annotation.max_value().unwrap_or(0)
            <= (ts.state_count() * u.rejecting_count().max(1)) as u64
    );
    Ok(Some(annotation))
}

/// Literal validity check: the root is annotated and every annotated
/// vertex dominates its successors — strictly when the successor's
/// automaton state is rejecting.
pub fn valid_annotation(u: &StateAwareUct, ts: &TransitionSystem, annotation: &Annotation) -> bool {
    if validate_pair(u, ts).is_err() {
        return false;
    }
    if annotation.get(u.init(), ts.init_index()).is_none() {
        return false;
    }
    for q in 0..u.state_count() {
        for s in 0..ts.state_count() {
            let Some(n) = annotation.get(q, s) else { continue };
            for (q2, direction) in u.successors(q, ts.label_mask(s), s) {
                let s2 = ts.step(s, direction);
                match annotation.get(q2, s2) {
                    None => return false,
                    Some(m) => {
                        let ok = if u.is_rejecting(q2) { m > n } else { m >= n };
                        if !ok {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}
