//! Colored Büchi graphs and pumpable non-emptiness.
//!
//! A colored Büchi graph carries two color propositions `r` and `r′` on
//! its vertices and a generalized Büchi condition of index at most two.
//! An accepting path is *pumpable* if every finite `r′`-block contains a
//! vertex repetition with an `r`-flip strictly in between, which makes
//! the block stretchable without stretching any `r`-block. Pumpable
//! non-emptiness is decided by a product with the pumpability safety
//! automaton, and model checking of assume-guarantee specifications
//! reduces to it.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::automata::{ltl_to_nba, AutomataError, Nba, PumpNba, COLOR_R, COLOR_RP};
use crate::formula::{
    alternation, rel_color, Alphabet, Formula, FormulaError,
};
use crate::machine::TransitionSystem;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoredError {
    #[error("colored graph needs at least one vertex")]
    Empty,
    #[error("vertex {0} out of range")]
    UnknownVertex(usize),
    #[error("generalized Büchi index must be 1 or 2, got {0}")]
    AcceptanceIndex(usize),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("cannot pick fresh color propositions: {0} letters exceed the alphabet limit")]
    TooManyProps(usize),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Automata(#[from] AutomataError),
}

/// A colored Büchi graph of degree two: vertices labeled with subsets
/// of {r, r′} and a generalized Büchi condition of index one or two.
#[derive(Debug, Clone)]
pub struct ColoredBuchiGraph {
    r: String,
    r_prime: String,
    init: usize,
    edges: Vec<Vec<usize>>,
    color_label: Vec<u8>,
    acceptance: Vec<Vec<bool>>,
    /// Origin of each vertex when the graph is a model-checking
    /// product: (system state, colors, automaton state).
    tags: Option<Vec<(usize, u8, usize)>>,
}

impl ColoredBuchiGraph {
    pub fn new(
        r: impl Into<String>,
        r_prime: impl Into<String>,
        init: usize,
        edges: Vec<Vec<usize>>,
        color_label: Vec<u8>,
        acceptance: Vec<Vec<bool>>,
    ) -> Result<ColoredBuchiGraph, ColoredError> {
        let n = edges.len();
        if n == 0 {
            return Err(ColoredError::Empty);
        }
        if init >= n {
            return Err(ColoredError::UnknownVertex(init));
        }
        if color_label.len() != n {
            return Err(ColoredError::UnknownVertex(color_label.len().min(n)));
        }
        if let Some(&bad) = edges.iter().flatten().find(|&&t| t >= n) {
            return Err(ColoredError::UnknownVertex(bad));
        }
        if acceptance.is_empty() || acceptance.len() > 2 {
            return Err(ColoredError::AcceptanceIndex(acceptance.len()));
        }
        if acceptance.iter().any(|set| set.len() != n) {
            return Err(ColoredError::AcceptanceIndex(acceptance.len()));
        }
        let mut edges = edges;
        for row in &mut edges {
            row.sort_unstable();
            row.dedup();
        }
        Ok(ColoredBuchiGraph {
            r: r.into(),
            r_prime: r_prime.into(),
            init,
            edges,
            color_label,
            acceptance,
            tags: None,
        })
    }

    pub fn color_props(&self) -> (&str, &str) {
        (&self.r, &self.r_prime)
    }

    pub fn vertex_count(&self) -> usize {
        self.edges.len()
    }

    pub fn init(&self) -> usize {
        self.init
    }

    pub fn edges_of(&self, v: usize) -> &[usize] {
        &self.edges[v]
    }

    /// Color bits of a vertex (`COLOR_R` and `COLOR_RP`).
    pub fn color_of(&self, v: usize) -> u8 {
        self.color_label[v]
    }

    pub fn acceptance_sets(&self) -> &[Vec<bool>] {
        &self.acceptance
    }

    /// Origin (system state, colors, automaton state) of a vertex, if
    /// the graph was built as a model-checking product.
    pub fn tag_of(&self, v: usize) -> Option<(usize, u8, usize)> {
        self.tags.as_ref().map(|t| t[v])
    }

    pub fn to_dot(&self) -> String {
        use std::fmt::Write;
        let mut out = String::from("digraph colored {\n");
        for v in 0..self.vertex_count() {
            let c = self.color_label[v];
            let mut colors = Vec::new();
            if c & COLOR_R != 0 {
                colors.push(self.r.as_str());
            }
            if c & COLOR_RP != 0 {
                colors.push(self.r_prime.as_str());
            }
            let marks: String = self
                .acceptance
                .iter()
                .enumerate()
                .filter(|(_, set)| set[v])
                .map(|(i, _)| format!(" B{}", i + 1))
                .collect();
            let _ = writeln!(out, "  v{v} [label=\"{v} {{{}}}{marks}\"];", colors.join(","));
        }
        for (v, row) in self.edges.iter().enumerate() {
            for &w in row {
                let _ = writeln!(out, "  v{v} -> v{w};");
            }
        }
        out.push_str("}\n");
        out
    }
}

/// A finite witness of an infinite path: the vertex sequence from the
/// initial vertex, looping back from the last vertex to `loop_start`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lasso {
    pub path: Vec<usize>,
    pub loop_start: usize,
}

impl Lasso {
    pub fn stem(&self) -> &[usize] {
        &self.path[..self.loop_start]
    }

    pub fn cycle(&self) -> &[usize] {
        &self.path[self.loop_start..]
    }

    pub fn loop_len(&self) -> usize {
        self.path.len() - self.loop_start
    }

    /// Vertex at a position of the induced infinite path.
    pub fn vertex_at(&self, pos: usize) -> usize {
        if pos < self.path.len() {
            self.path[pos]
        } else {
            self.path[self.loop_start + (pos - self.loop_start) % self.loop_len()]
        }
    }

    /// Structural well-formedness w.r.t. a graph: starts at the initial
    /// vertex, follows edges, and the loop closes.
    pub fn is_path_of(&self, g: &ColoredBuchiGraph) -> bool {
        if self.path.is_empty()
            || self.loop_start >= self.path.len()
            || self.path[0] != g.init()
            || self.path.iter().any(|&v| v >= g.vertex_count())
        {
            return false;
        }
        for w in self.path.windows(2) {
            if !g.edges_of(w[0]).contains(&w[1]) {
                return false;
            }
        }
        g.edges_of(*self.path.last().unwrap()).contains(&self.path[self.loop_start])
    }
}

impl std::fmt::Display for Lasso {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let stem: Vec<String> = self.stem().iter().map(|v| v.to_string()).collect();
        let cycle: Vec<String> = self.cycle().iter().map(|v| v.to_string()).collect();
        write!(f, "{} ({})^ω", stem.join(" "), cycle.join(" "))
    }
}

/// Every acceptance set is visited inside the loop.
pub fn lasso_is_accepting(g: &ColoredBuchiGraph, lasso: &Lasso) -> bool {
    g.acceptance_sets().iter().all(|set| lasso.cycle().iter().any(|&v| set[v]))
}

/// Positional pumpability of a colored lasso word: letters are
/// (vertex, colors) pairs, the stem is followed by the loop repeated
/// forever. For every pair of adjacent `r′`-change points — position 0
/// counts as one — the block in between must contain positions
/// j < j′ < j″ with the same vertex at j and j″ and the `r`-value
/// flipped at j′. Two loop unrollings see every distinct block; a third
/// is checked as an internal sanity condition.
pub fn word_is_pumpable(stem: &[(usize, u8)], lasso_loop: &[(usize, u8)]) -> bool {
    assert!(!lasso_loop.is_empty(), "loop must be nonempty");
    let two = pumpable_within(stem, lasso_loop, 2);
    let three = pumpable_within(stem, lasso_loop, 3);
    assert_eq!(two, three, "unrolling depth must not change pumpability");
    two
}

fn pumpable_within(stem: &[(usize, u8)], lasso_loop: &[(usize, u8)], unrollings: usize) -> bool {
    let a = stem.len();
    let b = lasso_loop.len();
    let at = |p: usize| -> (usize, u8) {
        if p < a {
            stem[p]
        } else {
            lasso_loop[(p - a) % b]
        }
    };
    let horizon = a + unrollings * b;
    let rp = |p: usize| at(p).1 & COLOR_RP != 0;
    let mut change_points = vec![0usize];
    for p in 1..=horizon {
        if rp(p) != rp(p - 1) {
            change_points.push(p);
        }
    }
    for pair in change_points.windows(2) {
        let (i, i_next) = (pair[0], pair[1]);
        let mut found = false;
        'search: for j in i..i_next {
            for j1 in j + 1..i_next {
                if (at(j).1 & COLOR_R != 0) == (at(j1).1 & COLOR_R != 0) {
                    continue;
                }
                for j2 in j1 + 1..i_next {
                    if at(j2).0 == at(j).0 {
                        found = true;
                        break 'search;
                    }
                }
            }
        }
        if !found {
            return false;
        }
    }
    true
}

/// Pumpability of a graph lasso, reading each vertex with its label.
pub fn lasso_is_pumpable(g: &ColoredBuchiGraph, lasso: &Lasso) -> bool {
    let letter = |&v: &usize| (v, g.color_of(v));
    let stem: Vec<(usize, u8)> = lasso.stem().iter().map(letter).collect();
    let cycle: Vec<(usize, u8)> = lasso.cycle().iter().map(letter).collect();
    word_is_pumpable(&stem, &cycle)
}

fn reachable_from(edges: &[Vec<usize>], init: usize) -> Vec<bool> {
    let mut seen = vec![false; edges.len()];
    seen[init] = true;
    let mut queue = VecDeque::from([init]);
    while let Some(v) = queue.pop_front() {
        for &w in &edges[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Shortest path `from → to` over `edges`, restricted to `allowed`
/// vertices (`None` = all). With `force_step`, a trivial `from == to`
/// answer is not allowed and a genuine cycle is searched instead.
fn bfs_path(
    edges: &[Vec<usize>],
    from: usize,
    to: usize,
    allowed: Option<&BTreeSet<usize>>,
    force_step: bool,
) -> Option<Vec<usize>> {
    let ok = |v: usize| allowed.is_none_or(|set| set.contains(&v));
    if from == to && !force_step {
        return Some(vec![from]);
    }
    let mut prev: BTreeMap<usize, usize> = BTreeMap::new();
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for &w in &edges[v] {
            if !ok(w) {
                continue;
            }
            if w == to {
                let mut path = vec![to, v];
                let mut cur = v;
                while cur != from {
                    cur = prev[&cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            if w != from && !prev.contains_key(&w) {
                prev.insert(w, v);
                queue.push_back(w);
            }
        }
    }
    None
}

/// Generalized Büchi emptiness of index one or two by SCC analysis: an
/// accepting lasso exists iff some reachable cyclic SCC intersects
/// every acceptance set. Returns a witness assembled from paths inside
/// the component.
pub fn buchi_non_empty(
    edges: &[Vec<usize>],
    init: usize,
    acceptance: &[Vec<bool>],
) -> Option<Lasso> {
    assert!(!edges.is_empty() && init < edges.len());
    assert!((1..=2).contains(&acceptance.len()));
    let reachable = reachable_from(edges, init);
    let nodes: Vec<usize> = (0..edges.len()).filter(|&v| reachable[v]).collect();
    let succs = |&v: &usize| -> Vec<usize> { edges[v].clone() };
    let sccs = crate::automata::scc_of(&nodes, succs);
    for comp in &sccs {
        let cyclic = comp.len() > 1 || edges[comp[0]].contains(&comp[0]);
        if !cyclic {
            continue;
        }
        if !acceptance.iter().all(|set| comp.iter().any(|&v| set[v])) {
            continue;
        }
        let inside: BTreeSet<usize> = comp.iter().copied().collect();
        // The shortest path towards the component may enter it earlier
        // than at its minimal vertex; cut the stem at first contact.
        let full = bfs_path(edges, init, *comp.iter().min().unwrap(), None, false).unwrap();
        let first_contact = full.iter().position(|v| inside.contains(v)).unwrap();
        let stem_path = &full[..=first_contact];
        let entry = stem_path[first_contact];
        // Visit one witness per acceptance set, then close the cycle.
        let mut targets: Vec<usize> = acceptance
            .iter()
            .map(|set| *comp.iter().filter(|&&v| set[v]).min().unwrap())
            .collect();
        targets.dedup();
        let mut cycle = vec![entry];
        let mut cur = entry;
        for &t in &targets {
            let leg = bfs_path(edges, cur, t, Some(&inside), false).unwrap();
            cycle.extend_from_slice(&leg[1..]);
            cur = t;
        }
        let back = bfs_path(edges, cur, entry, Some(&inside), cycle.len() == 1).unwrap();
        cycle.extend_from_slice(&back[1..]);
        // cycle = entry … entry with at least one edge.
        let mut path = stem_path.to_vec();
        path.extend_from_slice(&cycle[1..cycle.len() - 1]);
        return Some(Lasso { path, loop_start: first_contact });
    }
    None
}

/// Pumpable non-emptiness by reduction: the product of the graph with
/// the pumpability safety automaton over its vertex set has an
/// accepting path iff the graph has a pumpable accepting one. The
/// returned lasso is the projection of the product witness.
pub fn pumpable_non_empty(g: &ColoredBuchiGraph) -> Option<Lasso> {
    let pump = PumpNba::new(g.vertex_count()).expect("nonempty vertex set");
    let init = (g.init(), PumpNba::INIT);
    let mut ids: BTreeMap<(usize, usize), usize> = BTreeMap::from([(init, 0)]);
    let mut vertices = vec![init];
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut frontier = vec![0usize];
    while let Some(p) = frontier.pop() {
        let (v, s) = vertices[p];
        let mut row = Vec::new();
        for &w in g.edges_of(v) {
            for s2 in pump.successors(s, v, g.color_of(v)) {
                let key = (w, s2);
                let id = *ids.entry(key).or_insert_with(|| {
                    let id = vertices.len();
                    vertices.push(key);
                    frontier.push(id);
                    id
                });
                row.push(id);
            }
        }
        row.sort_unstable();
        row.dedup();
        if edges.len() <= p {
            edges.resize(p + 1, Vec::new());
        }
        edges[p] = row;
    }
    if edges.len() < vertices.len() {
        edges.resize(vertices.len(), Vec::new());
    }
    // Size stays quadratic in the graph: |V'| ≤ |V| · (8|V| + 3).
    assert!(vertices.len() <= g.vertex_count() * pump.state_count());
    let acceptance: Vec<Vec<bool>> = g
        .acceptance_sets()
        .iter()
        .map(|set| vertices.iter().map(|&(v, _)| set[v]).collect())
        .collect();
    let product = buchi_non_empty(&edges, 0, &acceptance)?;
    let lasso = Lasso {
        path: product.path.iter().map(|&p| vertices[p].0).collect(),
        loop_start: product.loop_start,
    };
    debug_assert!(lasso.is_path_of(g));
    Some(lasso)
}

/// Exhaustive pumpable-accepting lasso search within bounds — the
/// independent oracle for the reduction. Enumerates edge-consistent
/// vertex paths from the initial vertex and tests each closing loop
/// positionally.
pub fn brute_force_pumpable(
    g: &ColoredBuchiGraph,
    max_stem: usize,
    max_loop: usize,
) -> Option<Lasso> {
    assert!(max_loop >= 1);
    let mut path = vec![g.init()];
    search_lassos(g, &mut path, max_stem, max_loop)
}

fn search_lassos(
    g: &ColoredBuchiGraph,
    path: &mut Vec<usize>,
    max_stem: usize,
    max_loop: usize,
) -> Option<Lasso> {
    let len = path.len();
    let last = *path.last().unwrap();
    let lower = len.saturating_sub(max_loop);
    for loop_start in lower..len.min(max_stem + 1) {
        if !g.edges_of(last).contains(&path[loop_start]) {
            continue;
        }
        let candidate = Lasso { path: path.clone(), loop_start };
        if lasso_is_accepting(g, &candidate) && lasso_is_pumpable(g, &candidate) {
            return Some(candidate);
        }
    }
    if len < max_stem + max_loop {
        for &w in g.edges_of(last) {
            path.push(w);
            if let Some(found) = search_lassos(g, path, max_stem, max_loop) {
                path.pop();
                return Some(found);
            }
            path.pop();
        }
    }
    None
}

/// The model-checking product of a transition system with a Büchi
/// automaton over `2^(I ∪ O ∪ {r, r′})`: vertices are (system state,
/// colors, automaton state), the automaton reads the state label, the
/// chosen input, and the current colors; successor colors are free.
pub fn build_colored_graph(
    ts: &TransitionSystem,
    spec: &Nba,
    r: &str,
    r_prime: &str,
) -> Result<ColoredBuchiGraph, ColoredError> {
    let props = spec.props();
    let r_pos = props
        .index_of(r)
        .ok_or_else(|| ColoredError::AlphabetMismatch(format!("color `{r}` not in alphabet")))?;
    let rp_pos = props.index_of(r_prime).ok_or_else(|| {
        ColoredError::AlphabetMismatch(format!("color `{r_prime}` not in alphabet"))
    })?;
    for p in ts.input_props().props().iter().chain(ts.output_props().props()) {
        if p == r || p == r_prime {
            return Err(ColoredError::AlphabetMismatch(format!(
                "color `{p}` collides with a system proposition"
            )));
        }
        if props.index_of(p).is_none() {
            return Err(ColoredError::AlphabetMismatch(format!(
                "system proposition `{p}` not in the automaton alphabet"
            )));
        }
    }
    if props.len() != ts.input_props().len() + ts.output_props().len() + 2 {
        return Err(ColoredError::AlphabetMismatch(format!(
            "automaton alphabet has {} propositions, expected inputs + outputs + 2 colors",
            props.len()
        )));
    }
    let in_embed: Vec<usize> =
        ts.input_props().props().iter().map(|p| props.index_of(p).unwrap()).collect();
    let out_embed: Vec<usize> =
        ts.output_props().props().iter().map(|p| props.index_of(p).unwrap()).collect();
    let embed = |mask: u32, table: &[usize]| -> u32 {
        let mut out = 0u32;
        for (i, &pos) in table.iter().enumerate() {
            if mask & (1 << i) != 0 {
                out |= 1 << pos;
            }
        }
        out
    };
    let color_mask = |colors: u8| -> u32 {
        let mut out = 0u32;
        if colors & COLOR_R != 0 {
            out |= 1 << r_pos;
        }
        if colors & COLOR_RP != 0 {
            out |= 1 << rp_pos;
        }
        out
    };

    let init = (ts.init_index(), 0u8, spec.init());
    let mut ids: BTreeMap<(usize, u8, usize), usize> = BTreeMap::from([(init, 0)]);
    let mut tags = vec![init];
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut frontier = vec![0usize];
    while let Some(vid) = frontier.pop() {
        let (s, colors, q) = tags[vid];
        let mut row = Vec::new();
        for input in 0..ts.input_props().letter_count() as u32 {
            let s2 = ts.step(s, input);
            let sigma = embed(ts.label_mask(s), &out_embed)
                | embed(input, &in_embed)
                | color_mask(colors);
            for &q2 in spec.targets(q, sigma) {
                for colors2 in 0..4u8 {
                    let key = (s2, colors2, q2);
                    let id = *ids.entry(key).or_insert_with(|| {
                        let id = tags.len();
                        tags.push(key);
                        frontier.push(id);
                        id
                    });
                    row.push(id);
                }
            }
        }
        row.sort_unstable();
        row.dedup();
        if edges.len() <= vid {
            edges.resize(vid + 1, Vec::new());
        }
        edges[vid] = row;
    }
    if edges.len() < tags.len() {
        edges.resize(tags.len(), Vec::new());
    }
    let color_label: Vec<u8> = tags.iter().map(|&(_, c, _)| c).collect();
    let acceptance = vec![tags.iter().map(|&(_, _, q)| spec.is_accepting(q)).collect()];
    let mut graph = ColoredBuchiGraph::new(r, r_prime, 0, edges, color_label, acceptance)?;
    graph.tags = Some(tags);
    Ok(graph)
}

fn fresh_prop(base: &str, taken: &BTreeSet<String>) -> String {
    if !taken.contains(base) {
        return base.to_string();
    }
    (0..)
        .map(|i| format!("{base}{i}"))
        .find(|candidate| !taken.contains(candidate))
        .unwrap()
}

/// Model checking of an assume-guarantee specification ⟨assumption,
/// guarantee⟩: for every prompt bound of the assumption there must be a
/// bound for the guarantee working on all executions. Holds iff the
/// product with the automaton for alt_{r′} ∧ ¬rel_{r′}(guarantee) ∧
/// c_r(assumption) has no pumpable accepting path.
pub fn ag_model_check(
    ts: &TransitionSystem,
    assumption: &Formula,
    guarantee: &Formula,
) -> Result<bool, ColoredError> {
    let mut taken: BTreeSet<String> = ts.input_props().props().iter().cloned().collect();
    taken.extend(ts.output_props().props().iter().cloned());
    let system_props = taken.len();
    taken.extend(assumption.atoms());
    taken.extend(guarantee.atoms());
    let r = fresh_prop("r", &taken);
    taken.insert(r.clone());
    let r_prime = fresh_prop("rp", &taken);

    let letters = system_props + 2;
    if letters > crate::formula::MAX_PROPS {
        return Err(ColoredError::TooManyProps(letters));
    }

    // alt_{r′} ∧ ¬rel_{r′}(guarantee) ∧ alt_r ∧ rel_r(assumption)
    let violated_guarantee = rel_color(guarantee, &r_prime)?.negated_ltl()?;
    let negative = Formula::and(alternation(&r_prime), violated_guarantee);
    let positive = Formula::and(alternation(&r), rel_color(assumption, &r)?);
    let spec_formula = Formula::and(negative, positive);

    // The automaton alphabet is exactly the system propositions plus
    // the two colors; a formula atom outside it is reported, not
    // silently widened into an unconstrained proposition.
    let mut names: Vec<String> = ts.input_props().props().to_vec();
    names.extend(ts.output_props().props().iter().cloned());
    names.push(r.clone());
    names.push(r_prime.clone());
    let alphabet = Alphabet::new(names);
    let nba = ltl_to_nba(&spec_formula, &alphabet)?;
    let graph = build_colored_graph(ts, &nba, &r, &r_prime)?;
    Ok(pumpable_non_empty(&graph).is_none())
}

/// Prompt model checking: the system satisfies the formula for some
/// uniform bound on all its executions. Specialization of the
/// assume-guarantee check with the trivial assumption.
pub fn prompt_model_check(ts: &TransitionSystem, phi: &Formula) -> Result<bool, ColoredError> {
    ag_model_check(ts, &Formula::True, phi)
}
