//! LTL to nondeterministic Büchi automata via the closure tableau.
//!
//! States are obligation sets: the formulas that must hold from the
//! current position on. Expanding a state yields branches, each fixing
//! literal constraints on the current letter, a successor obligation
//! set, and the set of Until obligations the branch postponed. The
//! intermediate automaton carries transition-based generalized
//! acceptance (one set per Until subformula: the transitions that did
//! not postpone it), degeneralized with the usual counter.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::formula::{Alphabet, Formula};

use super::{until_subformulas, AutomataError, Nba};

/// One way of discharging an obligation set for a single step.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
struct Branch {
    pos: BTreeSet<String>,
    neg: BTreeSet<String>,
    next: BTreeSet<Formula>,
    postponed: BTreeSet<Formula>,
}

/// All consistent single-step expansions of an obligation set.
fn expand(obligations: &BTreeSet<Formula>) -> BTreeSet<Branch> {
    let mut done = BTreeSet::new();
    let todo: Vec<Formula> = obligations.iter().cloned().collect();
    let mut work: Vec<(Vec<Formula>, Branch)> = vec![(todo, Branch::default())];
    while let Some((mut todo, branch)) = work.pop() {
        let Some(f) = todo.pop() else {
            done.insert(branch);
            continue;
        };
        match f {
            Formula::True => work.push((todo, branch)),
            Formula::False => {}
            Formula::Atom(a) => {
                if !branch.neg.contains(&a) {
                    let mut b = branch;
                    b.pos.insert(a);
                    work.push((todo, b));
                }
            }
            Formula::NegAtom(a) => {
                if !branch.pos.contains(&a) {
                    let mut b = branch;
                    b.neg.insert(a);
                    work.push((todo, b));
                }
            }
            Formula::And(l, r) => {
                todo.push((*l).clone());
                todo.push((*r).clone());
                work.push((todo, branch));
            }
            Formula::Or(l, r) => {
                let mut left = todo.clone();
                left.push((*l).clone());
                work.push((left, branch.clone()));
                todo.push((*r).clone());
                work.push((todo, branch));
            }
            Formula::Next(g) => {
                let mut b = branch;
                b.next.insert((*g).clone());
                work.push((todo, b));
            }
            Formula::Until(ref l, ref r) => {
                // Satisfy now …
                let mut now = todo.clone();
                now.push((**r).clone());
                work.push((now, branch.clone()));
                // … or postpone: l holds and the obligation recurs.
                let mut b = branch;
                b.next.insert(f.clone());
                b.postponed.insert(f.clone());
                todo.push((**l).clone());
                work.push((todo, b));
            }
            Formula::Release(ref l, ref r) => {
                // r holds now; released now by l …
                let mut now = todo.clone();
                now.push((**r).clone());
                now.push((**l).clone());
                work.push((now, branch.clone()));
                // … or the obligation recurs.
                let mut b = branch;
                b.next.insert(f.clone());
                todo.push((**r).clone());
                work.push((todo, b));
            }
            Formula::PromptF(_) | Formula::BoundedF(_, _) | Formula::BoundedG(_, _) => {
                unreachable!("checked by is_ltl before expansion")
            }
        }
    }
    done
}

/// Drops redundant obligations so that equal languages share states:
/// `True` is vacuous, a formula kept alive by a Release in the set
/// already holds now, and an Until whose right argument holds now is
/// already discharged. Removals repeat until nothing is redundant.
fn normalize(mut set: BTreeSet<Formula>) -> BTreeSet<Formula> {
    set.remove(&Formula::True);
    loop {
        let redundant = set.iter().find(|f| implied_by_rest(f, &set)).cloned();
        match redundant {
            Some(f) => {
                set.remove(&f);
            }
            None => break,
        }
    }
    set
}

/// Whether the other obligations already force `f` at the current
/// position. Conservative: only the two syntactic implications above.
fn implied_by_rest(f: &Formula, set: &BTreeSet<Formula>) -> bool {
    let released_now = |g: &Formula| {
        set.iter()
            .any(|h| h != f && matches!(h, Formula::Release(_, r) if **r == *g))
    };
    if released_now(f) {
        return true;
    }
    match f {
        Formula::Until(_, r) => set.contains(r) || released_now(r),
        _ => false,
    }
}

/// Whether branch `a` permits every behaviour branch `b` does: fewer
/// letter constraints, fewer successor obligations, fewer postponed
/// Untils. Keeping only minimal branches preserves the state language
/// and the generalized acceptance.
fn dominates(a: &Branch, b: &Branch) -> bool {
    a.pos.is_subset(&b.pos)
        && a.neg.is_subset(&b.neg)
        && a.next.is_subset(&b.next)
        && a.postponed.is_subset(&b.postponed)
}

fn minimal_branches(brs: Vec<Branch>) -> Vec<Branch> {
    let mut keep: Vec<Branch> = Vec::new();
    'outer: for b in brs {
        let mut i = 0;
        while i < keep.len() {
            if dominates(&keep[i], &b) {
                continue 'outer;
            }
            if dominates(&b, &keep[i]) {
                keep.remove(i);
            } else {
                i += 1;
            }
        }
        keep.push(b);
    }
    keep
}

/// Letter-wise generalization of branch domination: a branch is
/// redundant when every letter it admits is also admitted by some
/// other kept branch with no more successor obligations and no more
/// postponements. Such branches arise from taking both sides of a
/// guarded disjunction at once; dropping them preserves the state
/// language because the covering branch leads to a weaker obligation
/// set while postponing no additional Untils.
fn prune_covered_branches(mut brs: Vec<Branch>, props: &Alphabet) -> Vec<Branch> {
    let letter_count = props.letter_count();
    let compatible = |br: &Branch, letter: u32| -> bool {
        br.pos.iter().all(|p| letter & (1 << props.index_of(p).unwrap()) != 0)
            && br.neg.iter().all(|p| letter & (1 << props.index_of(p).unwrap()) == 0)
    };
    // Try to remove greedy-largest first: branches with more successor
    // obligations are the most likely to be covered.
    let mut order: Vec<usize> = (0..brs.len()).collect();
    order.sort_by_key(|&i| {
        std::cmp::Reverse((brs[i].next.len(), brs[i].postponed.len()))
    });
    let mut removed = vec![false; brs.len()];
    for &i in &order {
        let covered = (0..letter_count as u32)
            .filter(|&l| compatible(&brs[i], l))
            .all(|l| {
                (0..brs.len()).any(|j| {
                    j != i
                        && !removed[j]
                        && compatible(&brs[j], l)
                        && brs[j].next.is_subset(&brs[i].next)
                        && brs[j].postponed.is_subset(&brs[i].postponed)
                })
            });
        if covered {
            removed[i] = true;
        }
    }
    let mut keep = Vec::with_capacity(brs.len());
    for (i, br) in brs.drain(..).enumerate() {
        if !removed[i] {
            keep.push(br);
        }
    }
    keep
}

/// Strongly connected component ids of the obligation-state graph
/// (iterative Tarjan; ids carry no particular order).
fn scc_ids(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut ids = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut num = vec![usize::MAX; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut on_stack = vec![false; n];
    let mut next_num = 0usize;
    let mut next_id = 0usize;
    for root in 0..n {
        if num[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some(&(v, ei)) = call.last() {
            if ei == 0 {
                num[v] = next_num;
                low[v] = next_num;
                next_num += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if ei < adj[v].len() {
                call.last_mut().unwrap().1 += 1;
                let w = adj[v][ei];
                if num[w] == usize::MAX {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(num[w]);
                }
            } else {
                if low[v] == num[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        ids[w] = next_id;
                        if w == v {
                            break;
                        }
                    }
                    next_id += 1;
                }
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
            }
        }
    }
    ids
}

/// Collapses states with identical successor rows and acceptance until
/// none remain. Such twins arise from degeneralization counter values
/// that never influence the future.
fn merge_duplicate_states(
    mut delta: Vec<Vec<Vec<usize>>>,
    mut accepting: Vec<bool>,
) -> (Vec<Vec<Vec<usize>>>, Vec<bool>) {
    loop {
        let n = delta.len();
        let mut rep: Vec<usize> = (0..n).collect();
        let mut seen: BTreeMap<(bool, Vec<Vec<usize>>), usize> = BTreeMap::new();
        let mut changed = false;
        for s in 0..n {
            let key = (accepting[s], delta[s].clone());
            match seen.get(&key) {
                Some(&r) => {
                    rep[s] = r;
                    changed = true;
                }
                None => {
                    seen.insert(key, s);
                }
            }
        }
        if !changed {
            return (delta, accepting);
        }
        let mut new_id = vec![usize::MAX; n];
        let mut survivors = 0usize;
        for (s, &r) in rep.iter().enumerate() {
            if r == s {
                new_id[s] = survivors;
                survivors += 1;
            }
        }
        let remap = |t: usize| new_id[rep[t]];
        let mut next_delta = Vec::with_capacity(survivors);
        let mut next_acc = Vec::with_capacity(survivors);
        for s in 0..n {
            if rep[s] != s {
                continue;
            }
            let row: Vec<Vec<usize>> = delta[s]
                .iter()
                .map(|ts| {
                    let mut v: Vec<usize> = ts.iter().map(|&t| remap(t)).collect();
                    v.sort_unstable();
                    v.dedup();
                    v
                })
                .collect();
            next_delta.push(row);
            next_acc.push(accepting[s]);
        }
        delta = next_delta;
        accepting = next_acc;
    }
}

/// Compiles plain LTL into an NBA over the given propositions.
///
/// The proposition set must contain every atom of the formula; extra
/// propositions enlarge the alphabet without constraining transitions.
pub fn ltl_to_nba(formula: &Formula, props: &Alphabet) -> Result<Nba, AutomataError> {
    if !formula.is_ltl() {
        return Err(AutomataError::NotPlainLtl(
            "parameterized operators have no direct automaton translation",
        ));
    }
    for atom in formula.atoms() {
        if !props.contains(&atom) {
            return Err(AutomataError::AtomOutsideAlphabet(atom));
        }
    }
    let untils = until_subformulas(formula);
    let m = untils.len();
    let until_index: BTreeMap<&Formula, usize> =
        untils.iter().enumerate().map(|(i, u)| (u, i)).collect();

    // Phase 1: obligation-set states with per-branch acceptance masks.
    // acc bit i set = branch did not postpone untils[i].
    let mut states: Vec<BTreeSet<Formula>> = Vec::new();
    let mut index: BTreeMap<BTreeSet<Formula>, usize> = BTreeMap::new();
    let mut branches: Vec<Vec<(Branch, u64)>> = Vec::new();
    let initial = normalize(BTreeSet::from([formula.clone()]));
    index.insert(initial.clone(), 0);
    states.push(initial);
    let mut frontier = vec![0usize];
    while let Some(s) = frontier.pop() {
        let expansions: Vec<Branch> = expand(&states[s])
            .into_iter()
            .map(|mut br| {
                br.next = normalize(std::mem::take(&mut br.next));
                br
            })
            .collect();
        let mut rows: Vec<(Branch, u64)> = Vec::new();
        for br in prune_covered_branches(minimal_branches(expansions), props) {
            let mut acc = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
            for p in &br.postponed {
                acc &= !(1u64 << until_index[p]);
            }
            let target = br.next.clone();
            if !index.contains_key(&target) {
                let id = states.len();
                index.insert(target.clone(), id);
                states.push(target);
                frontier.push(id);
            }
            rows.push((br, acc));
        }
        if branches.len() <= s {
            branches.resize(s + 1, Vec::new());
        }
        branches[s] = rows;
    }
    if branches.len() < states.len() {
        branches.resize(states.len(), Vec::new());
    }
    if std::env::var_os("PLTS_TABLEAU_STATS").is_some() {
        let edges: usize = branches.iter().map(|r| r.len()).sum();
        eprintln!(
            "phase1: {} obligation states, {} branches, {} untils",
            states.len(),
            edges,
            m
        );
    }

    // Phase 2: degeneralize with a counter over the acceptance sets.
    // The counter is component-local: within a strongly connected
    // component only the Untils postponed by some internal branch can
    // be starved, so a round walks exactly those, and entering another
    // component restarts the round. State (Z, p): the first p sets of
    // Z's component list are collected this round; accepting when the
    // list is exhausted. From there the round restarts before the move.
    let full_mask = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let adj: Vec<Vec<usize>> = branches
        .iter()
        .map(|rows| rows.iter().map(|(br, _)| index[&br.next]).collect())
        .collect();
    let scc = scc_ids(&adj);
    let scc_count = scc.iter().copied().max().map_or(0, |x| x + 1);
    let mut live: Vec<u64> = vec![0; scc_count];
    for (s, rows) in branches.iter().enumerate() {
        for (br, acc) in rows {
            let t = index[&br.next];
            if scc[s] == scc[t] {
                live[scc[s]] |= !acc & full_mask;
            }
        }
    }
    let live_list: Vec<Vec<usize>> = live
        .iter()
        .map(|&mask| (0..m).filter(|i| mask & (1 << i) != 0).collect())
        .collect();
    let letter_count = props.letter_count();
    let compatible = |br: &Branch, letter: u32| -> bool {
        br.pos.iter().all(|p| letter & (1 << props.index_of(p).unwrap()) != 0)
            && br.neg.iter().all(|p| letter & (1 << props.index_of(p).unwrap()) == 0)
    };
    let mut out_states: Vec<(usize, usize)> = Vec::new();
    let mut out_index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut out_delta: Vec<Vec<Vec<usize>>> = Vec::new();
    let start = (0usize, 0usize);
    out_index.insert(start, 0);
    out_states.push(start);
    let mut frontier = vec![0usize];
    while let Some(v) = frontier.pop() {
        let (z, p) = out_states[v];
        let mut row: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); letter_count];
        for (br, acc) in &branches[z] {
            let target_z = index[&br.next];
            let list = &live_list[scc[target_z]];
            let base = if scc[target_z] != scc[z] || p == live_list[scc[z]].len() {
                0
            } else {
                p
            };
            let mut j = base;
            while j < list.len() && acc & (1 << list[j]) != 0 {
                j += 1;
            }
            let target = (target_z, j);
            let target_id = *out_index.entry(target).or_insert_with(|| {
                let id = out_states.len();
                out_states.push(target);
                frontier.push(id);
                id
            });
            for letter in 0..letter_count {
                if compatible(br, letter as u32) {
                    row[letter].insert(target_id);
                }
            }
        }
        if out_delta.len() <= v {
            out_delta.resize(v + 1, Vec::new());
        }
        out_delta[v] = row.into_iter().map(|s| s.into_iter().collect()).collect();
    }
    if out_delta.len() < out_states.len() {
        out_delta.resize_with(out_states.len(), || vec![Vec::new(); letter_count]);
    }
    let accepting: Vec<bool> = out_states
        .iter()
        .map(|&(z, p)| p == live_list[scc[z]].len())
        .collect();
    let pre_merge = out_delta.len();
    let (out_delta, accepting) = merge_duplicate_states(out_delta, accepting);
    let merged = out_delta.len();
    let mut nba = Nba::new(props.clone(), 0, out_delta, accepting);
    loop {
        let before = nba.state_count();
        nba = super::simulation::reduce_nba(nba, 3_000_000);
        if nba.state_count() == before {
            break;
        }
    }
    if std::env::var_os("PLTS_TABLEAU_STATS").is_some() {
        eprintln!(
            "phase2: {} counter states, {} merged, {} quotiented",
            pre_merge,
            merged,
            nba.state_count()
        );
    }
    Ok(nba)
}
