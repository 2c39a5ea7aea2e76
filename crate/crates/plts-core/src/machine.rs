//! Finite transition systems as strategy representations.
//!
//! A transition system reads input letters (subsets of its input
//! propositions) and emits, per state, an output letter. It generates
//! the strategy `f(w) = l(Δ*(w))`. This module provides widening to
//! larger input alphabets, the distributed product of strategies with
//! disjoint outputs, the scheduling discipline used by asynchronous
//! systems, and exhaustive lasso-trace extraction for oracle testing.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{Alphabet, LassoWord};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MachineError {
    #[error("unknown proposition `{0}`")]
    UnknownProp(String),
    #[error("unknown state id {0}")]
    UnknownState(u64),
    #[error("duplicate state id {0}")]
    DuplicateState(u64),
    #[error("transition relation not total: state {state} has no successor on {letter:?}")]
    NotTotal { state: u64, letter: BTreeSet<String> },
    #[error("conflicting transitions from state {state} on {letter:?}")]
    Conflicting { state: u64, letter: BTreeSet<String> },
    #[error("label of state {state} uses `{prop}` which is not an output")]
    BadLabel { state: u64, prop: String },
    #[error("input proposition `{0}` already present")]
    InputOverlap(String),
    #[error("output proposition `{0}` owned by both factors")]
    OutputOverlap(String),
    #[error("system has no states")]
    Empty,
}

/// A `2^outputs`-labeled `2^inputs`-transition system `⟨S, s₀, Δ, l⟩`.
///
/// `Δ` is total and stored densely: `delta[state][letter]` for every
/// letter mask over the input alphabet. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionSystem {
    inputs: Alphabet,
    outputs: Alphabet,
    ids: Vec<u64>,
    init: usize,
    /// `delta[s][input letter mask]` → state index.
    delta: Vec<Vec<usize>>,
    /// Output letter mask per state.
    labels: Vec<u32>,
}

/// On-disk shape of a transition system.
#[derive(Serialize, Deserialize)]
struct TsJson {
    inputs: Vec<String>,
    outputs: Vec<String>,
    states: Vec<TsStateJson>,
    init: u64,
    delta: Vec<TsEdgeJson>,
}

#[derive(Serialize, Deserialize)]
struct TsStateJson {
    id: u64,
    label: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct TsEdgeJson {
    from: u64,
    on: Vec<String>,
    to: u64,
}

impl TransitionSystem {
    /// Builds a system from explicit parts, checking totality.
    pub fn new(
        inputs: impl IntoIterator<Item = impl Into<String>>,
        outputs: impl IntoIterator<Item = impl Into<String>>,
        states: &[(u64, BTreeSet<String>)],
        init: u64,
        edges: &[(u64, BTreeSet<String>, u64)],
    ) -> Result<TransitionSystem, MachineError> {
        let inputs = Alphabet::new(inputs);
        let outputs = Alphabet::new(outputs);
        if states.is_empty() {
            return Err(MachineError::Empty);
        }
        let mut index: BTreeMap<u64, usize> = BTreeMap::new();
        let mut ids = Vec::with_capacity(states.len());
        let mut labels = Vec::with_capacity(states.len());
        for (id, label) in states {
            if index.insert(*id, ids.len()).is_some() {
                return Err(MachineError::DuplicateState(*id));
            }
            ids.push(*id);
            let mask = outputs
                .mask_of(label.iter().map(String::as_str))
                .map_err(|_| MachineError::BadLabel {
                    state: *id,
                    prop: label
                        .iter()
                        .find(|p| !outputs.contains(p))
                        .cloned()
                        .unwrap_or_default(),
                })?;
            labels.push(mask);
        }
        let init = *index.get(&init).ok_or(MachineError::UnknownState(init))?;
        let letter_count = inputs.letter_count();
        let mut delta = vec![vec![usize::MAX; letter_count]; ids.len()];
        for (from, on, to) in edges {
            let f = *index.get(from).ok_or(MachineError::UnknownState(*from))?;
            let t = *index.get(to).ok_or(MachineError::UnknownState(*to))?;
            let letter = inputs
                .mask_of(on.iter().map(String::as_str))
                .map_err(|e| match e {
                    crate::formula::FormulaError::UnknownAtom(p) => MachineError::UnknownProp(p),
                    _ => MachineError::UnknownProp(format!("{on:?}")),
                })? as usize;
            if delta[f][letter] != usize::MAX && delta[f][letter] != t {
                return Err(MachineError::Conflicting {
                    state: *from,
                    letter: on.clone(),
                });
            }
            delta[f][letter] = t;
        }
        for (s, row) in delta.iter().enumerate() {
            for (letter, &t) in row.iter().enumerate() {
                if t == usize::MAX {
                    return Err(MachineError::NotTotal {
                        state: ids[s],
                        letter: inputs.set_of(letter as u32),
                    });
                }
            }
        }
        Ok(TransitionSystem { inputs, outputs, ids, init, delta, labels })
    }

    /// Builds a system from index-based parts that are already dense;
    /// used by automata products and model decoding.
    pub fn from_dense(
        inputs: Alphabet,
        outputs: Alphabet,
        init: usize,
        delta: Vec<Vec<usize>>,
        labels: Vec<u32>,
    ) -> TransitionSystem {
        assert!(!delta.is_empty() && init < delta.len());
        assert_eq!(delta.len(), labels.len());
        let letter_count = inputs.letter_count();
        for row in &delta {
            assert_eq!(row.len(), letter_count);
            assert!(row.iter().all(|&t| t < delta.len()));
        }
        let ids = (0..delta.len() as u64).collect();
        TransitionSystem { inputs, outputs, ids, init, delta, labels }
    }

    /// One-state system emitting a fixed letter.
    pub fn constant(
        inputs: impl IntoIterator<Item = impl Into<String>>,
        outputs: impl IntoIterator<Item = impl Into<String>>,
        label: &BTreeSet<String>,
    ) -> Result<TransitionSystem, MachineError> {
        let inputs = Alphabet::new(inputs);
        let outputs = Alphabet::new(outputs);
        let mask = outputs
            .mask_of(label.iter().map(String::as_str))
            .map_err(|_| MachineError::BadLabel {
                state: 0,
                prop: label.iter().find(|p| !outputs.contains(p)).cloned().unwrap_or_default(),
            })?;
        Ok(TransitionSystem {
            delta: vec![vec![0; inputs.letter_count()]],
            inputs,
            outputs,
            ids: vec![0],
            init: 0,
            labels: vec![mask],
        })
    }

    pub fn input_props(&self) -> &Alphabet {
        &self.inputs
    }

    pub fn output_props(&self) -> &Alphabet {
        &self.outputs
    }

    pub fn state_count(&self) -> usize {
        self.ids.len()
    }

    pub fn state_ids(&self) -> &[u64] {
        &self.ids
    }

    pub fn init_index(&self) -> usize {
        self.init
    }

    /// Label mask of a state index.
    pub fn label_mask(&self, state: usize) -> u32 {
        self.labels[state]
    }

    pub fn label_set(&self, state: usize) -> BTreeSet<String> {
        self.outputs.set_of(self.labels[state])
    }

    /// Successor index on an input letter mask.
    pub fn step(&self, state: usize, letter: u32) -> usize {
        self.delta[state][letter as usize]
    }

    /// `Δ*`: the state reached from the initial state on a mask prefix.
    pub fn run_masks(&self, prefix: &[u32]) -> usize {
        prefix.iter().fold(self.init, |s, &m| self.step(s, m))
    }

    /// `l(Δ*(w))`: the strategy's output after reading `prefix`.
    pub fn run_output(
        &self,
        prefix: &[BTreeSet<String>],
    ) -> Result<BTreeSet<String>, MachineError> {
        let mut s = self.init;
        for letter in prefix {
            let mask = self
                .inputs
                .mask_of(letter.iter().map(String::as_str))
                .map_err(|_| {
                    MachineError::UnknownProp(
                        letter.iter().find(|p| !self.inputs.contains(p)).cloned().unwrap_or_default(),
                    )
                })?;
            s = self.step(s, mask);
        }
        Ok(self.label_set(s))
    }

    /// `wide`: the same behavior over an enlarged input alphabet; the
    /// extra propositions are read and ignored.
    pub fn widen(
        &self,
        extra: impl IntoIterator<Item = impl Into<String>>,
    ) -> Result<TransitionSystem, MachineError> {
        let extra: BTreeSet<String> = extra.into_iter().map(Into::into).collect();
        for p in &extra {
            if self.inputs.contains(p) {
                return Err(MachineError::InputOverlap(p.clone()));
            }
        }
        let wide = Alphabet::new(self.inputs.props().iter().cloned().chain(extra));
        let embed = self.inputs.embedding(&wide);
        let mut delta = vec![vec![0usize; wide.letter_count()]; self.ids.len()];
        for (s, row) in delta.iter_mut().enumerate() {
            for (letter, slot) in row.iter_mut().enumerate() {
                let mut projected = 0u32;
                for (i, pos) in embed.iter().enumerate() {
                    let pos = pos.expect("widened alphabet contains the original");
                    if letter & (1 << pos) != 0 {
                        projected |= 1 << i;
                    }
                }
                *slot = self.step(s, projected);
            }
        }
        Ok(TransitionSystem {
            inputs: wide,
            outputs: self.outputs.clone(),
            ids: self.ids.clone(),
            init: self.init,
            delta,
            labels: self.labels.clone(),
        })
    }

    /// Distributed product: the joint strategy of two systems with
    /// disjoint outputs, over the union of their inputs. The full
    /// `|S₁|·|S₂|` state space is kept (no reachability pruning).
    pub fn distributed_product(
        &self,
        other: &TransitionSystem,
    ) -> Result<TransitionSystem, MachineError> {
        for p in other.outputs.props() {
            if self.outputs.contains(p) {
                return Err(MachineError::OutputOverlap(p.clone()));
            }
        }
        let inputs = Alphabet::new(
            self.inputs.props().iter().chain(other.inputs.props()).cloned(),
        );
        let outputs = Alphabet::new(
            self.outputs.props().iter().chain(other.outputs.props()).cloned(),
        );
        let embed_i1 = self.inputs.embedding(&inputs);
        let embed_i2 = other.inputs.embedding(&inputs);
        let embed_o1 = self.outputs.embedding(&outputs);
        let embed_o2 = other.outputs.embedding(&outputs);
        let project = |mask: usize, embed: &[Option<usize>]| -> u32 {
            let mut out = 0u32;
            for (i, pos) in embed.iter().enumerate() {
                if mask & (1 << pos.unwrap()) != 0 {
                    out |= 1 << i;
                }
            }
            out
        };
        let lift = |mask: u32, embed: &[Option<usize>]| -> u32 {
            let mut out = 0u32;
            for (i, pos) in embed.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    out |= 1 << pos.unwrap();
                }
            }
            out
        };
        let n2 = other.ids.len();
        let pair = |s1: usize, s2: usize| s1 * n2 + s2;
        let count = self.ids.len() * n2;
        let mut delta = vec![vec![0usize; inputs.letter_count()]; count];
        let mut labels = vec![0u32; count];
        for s1 in 0..self.ids.len() {
            for s2 in 0..n2 {
                let s = pair(s1, s2);
                labels[s] =
                    lift(self.labels[s1], &embed_o1) | lift(other.labels[s2], &embed_o2);
                for letter in 0..inputs.letter_count() {
                    let m1 = project(letter, &embed_i1);
                    let m2 = project(letter, &embed_i2);
                    delta[s][letter] = pair(self.step(s1, m1), other.step(s2, m2));
                }
            }
        }
        Ok(TransitionSystem {
            inputs,
            outputs,
            ids: (0..count as u64).collect(),
            init: pair(self.init, other.init),
            delta,
            labels,
        })
    }

    /// State indices reachable from the initial state.
    pub fn reachable(&self) -> Vec<usize> {
        let mut seen = vec![false; self.ids.len()];
        seen[self.init] = true;
        let mut stack = vec![self.init];
        let mut out = vec![self.init];
        while let Some(s) = stack.pop() {
            for &t in &self.delta[s] {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                    out.push(t);
                }
            }
        }
        out
    }

    /// True iff every reachable state stays put on every letter that
    /// lacks the scheduling proposition.
    pub fn respects_scheduling(&self, sched_prop: &str) -> Result<bool, MachineError> {
        let bit = self
            .inputs
            .index_of(sched_prop)
            .ok_or_else(|| MachineError::UnknownProp(sched_prop.to_string()))?;
        for s in self.reachable() {
            for letter in 0..self.inputs.letter_count() {
                if letter & (1 << bit) == 0 && self.delta[s][letter] != s {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Alphabet of the traces: inputs ∪ outputs.
    pub fn trace_alphabet(&self) -> Alphabet {
        Alphabet::new(self.inputs.props().iter().chain(self.outputs.props()).cloned())
    }

    /// The canonical lasso trace generated by the input lasso
    /// `stem · loop^ω`: position `i` carries `w_i ∪ l(Δ*(w[0..i]))`.
    pub fn trace_of(&self, input_stem: &[u32], input_loop: &[u32]) -> LassoWord {
        assert!(!input_loop.is_empty());
        let combined = self.trace_alphabet();
        let embed_i = self.inputs.embedding(&combined);
        let embed_o = self.outputs.embedding(&combined);
        let lift = |mask: u32, embed: &[Option<usize>]| -> u32 {
            let mut out = 0u32;
            for (i, pos) in embed.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    out |= 1 << pos.unwrap();
                }
            }
            out
        };
        let mut letters: Vec<u32> = Vec::new();
        let mut state = self.init;
        for &m in input_stem {
            letters.push(lift(m, &embed_i) | lift(self.labels[state], &embed_o));
            state = self.step(state, m);
        }
        // Iterate the loop until the entry state repeats; record where
        // each loop-entry state was first seen to split stem from cycle.
        let mut first_seen: BTreeMap<usize, usize> = BTreeMap::new();
        let mut entries: Vec<usize> = Vec::new();
        loop {
            if let Some(&at) = first_seen.get(&state) {
                let cycle_start = input_stem.len() + at * input_loop.len();
                let stem = letters[..cycle_start].to_vec();
                let lasso_loop = letters[cycle_start..].to_vec();
                return LassoWord::from_masks(combined, stem, lasso_loop).canonicalize();
            }
            first_seen.insert(state, entries.len());
            entries.push(state);
            for &m in input_loop {
                letters.push(lift(m, &embed_i) | lift(self.labels[state], &embed_o));
                state = self.step(state, m);
            }
        }
    }

    /// All distinct traces whose input lasso fits the bounds
    /// (stem ≤ `max_stem`, loop 1..=`max_loop`); canonical and
    /// deterministic.
    pub fn traces(&self, max_stem: usize, max_loop: usize) -> BTreeSet<LassoWord> {
        let letters = self.inputs.letter_count() as u32;
        let sequences_of = |len: usize| -> Vec<Vec<u32>> {
            let mut level: Vec<Vec<u32>> = vec![vec![]];
            for _ in 0..len {
                let mut next = Vec::new();
                for s in &level {
                    for m in 0..letters {
                        let mut s2 = s.clone();
                        s2.push(m);
                        next.push(s2);
                    }
                }
                level = next;
            }
            level
        };
        let mut out = BTreeSet::new();
        for stem_len in 0..=max_stem {
            for stem in sequences_of(stem_len) {
                for loop_len in 1..=max_loop {
                    for lp in sequences_of(loop_len) {
                        out.insert(self.trace_of(&stem, &lp));
                    }
                }
            }
        }
        out
    }

    /// Re-validates a trace by independent simulation: every position's
    /// output part must equal the label of the state reached on the
    /// input projection.
    pub fn trace_consistent(&self, trace: &LassoWord) -> bool {
        let combined = trace.alphabet();
        let embed_i = self.inputs.embedding(combined);
        let embed_o = self.outputs.embedding(combined);
        if embed_i.iter().chain(&embed_o).any(Option::is_none) {
            return false;
        }
        let project = |mask: u32, embed: &[Option<usize>]| -> u32 {
            let mut out = 0u32;
            for (i, pos) in embed.iter().enumerate() {
                if mask & (1 << pos.unwrap()) != 0 {
                    out |= 1 << i;
                }
            }
            out
        };
        // Simulate until state × stored-position pairs repeat.
        let horizon = trace.len() * self.ids.len() + trace.len() + 1;
        let mut state = self.init;
        for i in 0..horizon {
            let letter = trace.letter_at(i);
            if project(letter, &embed_o) != self.labels[state] {
                return false;
            }
            state = self.step(state, project(letter, &embed_i));
        }
        true
    }

    pub fn to_json_string(&self) -> String {
        let states: Vec<TsStateJson> = (0..self.ids.len())
            .map(|s| TsStateJson {
                id: self.ids[s],
                label: self.label_set(s).into_iter().collect(),
            })
            .collect();
        let mut delta = Vec::new();
        for s in 0..self.ids.len() {
            for letter in 0..self.inputs.letter_count() {
                delta.push(TsEdgeJson {
                    from: self.ids[s],
                    on: self.inputs.set_of(letter as u32).into_iter().collect(),
                    to: self.ids[self.delta[s][letter]],
                });
            }
        }
        let doc = TsJson {
            inputs: self.inputs.props().to_vec(),
            outputs: self.outputs.props().to_vec(),
            states,
            init: self.ids[self.init],
            delta,
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }

    pub fn from_json_str(text: &str) -> Result<TransitionSystem, String> {
        let doc: TsJson = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let states: Vec<(u64, BTreeSet<String>)> = doc
            .states
            .iter()
            .map(|s| (s.id, s.label.iter().cloned().collect()))
            .collect();
        let edges: Vec<(u64, BTreeSet<String>, u64)> = doc
            .delta
            .iter()
            .map(|e| (e.from, e.on.iter().cloned().collect(), e.to))
            .collect();
        TransitionSystem::new(doc.inputs, doc.outputs, &states, doc.init, &edges)
            .map_err(|e| e.to_string())
    }
}
