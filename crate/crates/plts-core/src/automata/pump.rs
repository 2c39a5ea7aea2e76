//! The safety automaton recognizing pumpable color sequences.
//!
//! Letters are pairs (vertex, colors) with colors ⊆ {r, r′}. A word is
//! pumpable when between every two adjacent r′-change points (the start
//! of the word counts as one) some vertex repeats around an r-flip:
//! positions j < j′ < j″ in the block with the same vertex at j and j″
//! and opposite r at j and j′. The automaton runs in three phases per
//! block — remember a candidate vertex with its r value, observe the
//! flip, observe the repetition — and a run survives an r′ change only
//! from the final phase. All states are accepting; acceptance is the
//! existence of an infinite run.

use smallvec::SmallVec;

use super::{scc_of, AutomataError};

/// Bit for the first color (`r`) in a color mask.
pub const COLOR_R: u8 = 1;
/// Bit for the second color (`r′`) in a color mask.
pub const COLOR_RP: u8 = 2;

/// Number of automaton states for a given vertex count.
pub fn pump_state_count(vertex_count: usize) -> usize {
    8 * vertex_count + 3
}

/// Decoded automaton state; see [`PumpNba::decode`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PumpPhase {
    /// Nothing stored yet (initial state only).
    Init,
    /// Phase 1: a vertex and its colors are remembered.
    Remember { vertex: usize, colors: u8 },
    /// Phase 2: the r value flipped after the remembered position;
    /// `colors` holds the block's current colors.
    AwaitRepeat { vertex: usize, colors: u8 },
    /// Phase 3: the repetition was seen; waiting for the r′ change.
    Done { r_prime: bool },
}

/// The pumpability safety automaton over `vertices × 2^{r,r′}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PumpNba {
    vertex_count: usize,
}

impl PumpNba {
    pub const INIT: usize = 0;

    pub fn new(vertex_count: usize) -> Result<PumpNba, AutomataError> {
        if vertex_count == 0 {
            return Err(AutomataError::EmptyVertexSet);
        }
        Ok(PumpNba { vertex_count })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn state_count(&self) -> usize {
        pump_state_count(self.vertex_count)
    }

    pub fn decode(&self, state: usize) -> PumpPhase {
        let v = self.vertex_count;
        if state == 0 {
            PumpPhase::Init
        } else if state < 1 + 4 * v {
            let k = state - 1;
            PumpPhase::Remember { vertex: k / 4, colors: (k % 4) as u8 }
        } else if state < 1 + 8 * v {
            let k = state - 1 - 4 * v;
            PumpPhase::AwaitRepeat { vertex: k / 4, colors: (k % 4) as u8 }
        } else {
            PumpPhase::Done { r_prime: state - 1 - 8 * v == 1 }
        }
    }

    fn remember(&self, vertex: usize, colors: u8) -> usize {
        1 + vertex * 4 + colors as usize
    }

    fn await_repeat(&self, vertex: usize, colors: u8) -> usize {
        1 + 4 * self.vertex_count + vertex * 4 + colors as usize
    }

    fn done(&self, r_prime: bool) -> usize {
        1 + 8 * self.vertex_count + usize::from(r_prime)
    }

    /// Successor states on letter (`vertex`, `colors`).
    pub fn successors(&self, state: usize, vertex: usize, colors: u8) -> SmallVec<[usize; 3]> {
        debug_assert!(vertex < self.vertex_count && colors < 4);
        let mut out = SmallVec::new();
        match self.decode(state) {
            PumpPhase::Init => out.push(self.remember(vertex, colors)),
            PumpPhase::Remember { vertex: v, colors: x } => {
                if (x ^ colors) & COLOR_RP == 0 {
                    out.push(state);
                    out.push(self.remember(vertex, colors));
                    if (x ^ colors) & COLOR_R != 0 {
                        out.push(self.await_repeat(v, colors));
                    }
                }
            }
            PumpPhase::AwaitRepeat { vertex: v, colors: y } => {
                if (y ^ colors) & COLOR_RP == 0 {
                    if vertex != v {
                        out.push(state);
                    } else {
                        out.push(self.done(y & COLOR_RP != 0));
                    }
                }
            }
            PumpPhase::Done { r_prime } => {
                if (colors & COLOR_RP != 0) == r_prime {
                    out.push(state);
                } else {
                    out.push(self.remember(vertex, colors));
                }
            }
        }
        out
    }

    /// Whether the ultimately periodic word `stem · loop^ω` over
    /// (vertex, colors) letters has an infinite run: reachable-cycle
    /// search on the product of stored positions and states.
    pub fn has_infinite_run(&self, stem: &[(usize, u8)], lasso_loop: &[(usize, u8)]) -> bool {
        assert!(!lasso_loop.is_empty());
        let len = stem.len() + lasso_loop.len();
        let letter = |i: usize| -> (usize, u8) {
            if i < stem.len() {
                stem[i]
            } else {
                lasso_loop[i - stem.len()]
            }
        };
        let succ_pos = |i: usize| if i + 1 < len { i + 1 } else { stem.len() };
        let succs = |&(pos, s): &(usize, usize)| -> Vec<(usize, usize)> {
            let (v, c) = letter(pos);
            self.successors(s, v, c).into_iter().map(|s2| (succ_pos(pos), s2)).collect()
        };
        let mut seen = std::collections::BTreeSet::new();
        let start = (0usize, Self::INIT);
        seen.insert(start);
        let mut stack = vec![start];
        let mut nodes = vec![start];
        while let Some(n) = stack.pop() {
            for m in succs(&n) {
                if seen.insert(m) {
                    stack.push(m);
                    nodes.push(m);
                }
            }
        }
        scc_of(&nodes, succs)
            .iter()
            .any(|scc| scc.len() > 1 || succs(&scc[0]).contains(&scc[0]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const R: u8 = COLOR_R;
    const RP: u8 = COLOR_RP;

    #[test]
    fn state_count_formula() {
        assert_eq!(PumpNba::new(2).unwrap().state_count(), 19);
        assert_eq!(PumpNba::new(1).unwrap().state_count(), 11);
        assert_eq!(PumpNba::new(5).unwrap().state_count(), 43);
        assert!(PumpNba::new(0).is_err());
    }

    #[test]
    fn decode_round_trips() {
        let n = PumpNba::new(3).unwrap();
        for s in 0..n.state_count() {
            let phase = n.decode(s);
            let back = match phase {
                PumpPhase::Init => 0,
                PumpPhase::Remember { vertex, colors } => n.remember(vertex, colors),
                PumpPhase::AwaitRepeat { vertex, colors } => n.await_repeat(vertex, colors),
                PumpPhase::Done { r_prime } => n.done(r_prime),
            };
            assert_eq!(back, s);
        }
    }

    #[test]
    fn repetition_around_flip_in_every_block_is_accepted() {
        let n = PumpNba::new(2).unwrap();
        // Two blocks per loop; each has a vertex repetition (vertex 0
        // resp. 1) straddling an r flip.
        let lasso = [(0, R), (1, 0), (0, 0), (1, R | RP), (0, RP), (1, RP)];
        assert!(n.has_infinite_run(&[], &lasso));
        // Same structure with a single vertex.
        let n1 = PumpNba::new(1).unwrap();
        let lasso1 = [(0, R), (0, 0), (0, 0), (0, R | RP), (0, RP), (0, RP)];
        assert!(n1.has_infinite_run(&[], &lasso1));
    }

    #[test]
    fn blocks_without_repetition_are_rejected() {
        let n = PumpNba::new(2).unwrap();
        // Blocks of length one: no room for j < j' < j''.
        assert!(!n.has_infinite_run(&[], &[(0, 0), (1, RP)]));
        // Long blocks but r never flips.
        let n1 = PumpNba::new(1).unwrap();
        assert!(!n1.has_infinite_run(&[], &[(0, 0), (0, 0), (0, RP), (0, RP)]));
        // r flips but the vertex never repeats inside a block.
        let n2 = PumpNba::new(2).unwrap();
        assert!(!n2.has_infinite_run(
            &[],
            &[(0, R), (1, 0), (0, RP | R), (1, RP)]
        ));
    }

    #[test]
    fn constant_r_prime_allows_an_idle_run() {
        // With no r′ change the automaton may sit in phase 1 forever.
        let n = PumpNba::new(1).unwrap();
        assert!(n.has_infinite_run(&[], &[(0, 0)]));
        assert!(n.has_infinite_run(&[(0, RP)], &[(0, RP)]));
        // A lone r′ change right after the start leaves the first block
        // a single position wide — nothing can be pumped there.
        assert!(!n.has_infinite_run(&[(0, RP)], &[(0, 0)]));
    }
}
