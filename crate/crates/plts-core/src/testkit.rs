//! Seeded random generators and independent checkers for the property
//! suites. Everything takes an explicit ChaCha RNG so that a failing
//! instance reproduces from its seed alone; suites fix their seeds as
//! constants.
//!
//! The coloring generators keep the colored word ultimately periodic:
//! the color pattern repeats with a period that is a multiple of the
//! input lasso's period, so the result is again a lasso.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::architecture::{Architecture, Process};
use crate::colored::ColoredBuchiGraph;
use crate::formula::{Alphabet, Formula, LassoWord};
use crate::machine::TransitionSystem;

/// The suite RNG for a seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn leaf<R: Rng>(rng: &mut R, atoms: &[&str]) -> Formula {
    if atoms.is_empty() || rng.gen_ratio(1, 8) {
        return if rng.gen() { Formula::True } else { Formula::False };
    }
    let a = atoms[rng.gen_range(0..atoms.len())];
    if rng.gen() {
        Formula::atom(a)
    } else {
        Formula::neg_atom(a)
    }
}

struct Menu<'a> {
    atoms: &'a [&'a str],
    prompt: bool,
    f_vars: &'a [&'a str],
    g_vars: &'a [&'a str],
}

fn gen_formula<R: Rng>(rng: &mut R, menu: &Menu, size: usize) -> Formula {
    if size <= 1 {
        return leaf(rng, menu.atoms);
    }
    if size >= 3 && rng.gen_ratio(3, 5) {
        let split = rng.gen_range(1..size - 1);
        let l = gen_formula(rng, menu, split);
        let r = gen_formula(rng, menu, size - 1 - split);
        return match rng.gen_range(0..4) {
            0 => Formula::and(l, r),
            1 => Formula::or(l, r),
            2 => Formula::until(l, r),
            _ => Formula::release(l, r),
        };
    }
    let mut unary = vec![0u8];
    if menu.prompt {
        unary.push(1);
    }
    if !menu.f_vars.is_empty() {
        unary.push(2);
    }
    if !menu.g_vars.is_empty() {
        unary.push(3);
    }
    let inner = gen_formula(rng, menu, size - 1);
    match unary[rng.gen_range(0..unary.len())] {
        0 => Formula::next(inner),
        1 => Formula::prompt_f(inner),
        2 => Formula::bounded_f(menu.f_vars[rng.gen_range(0..menu.f_vars.len())], inner),
        _ => Formula::bounded_g(menu.g_vars[rng.gen_range(0..menu.g_vars.len())], inner),
    }
}

/// A plain LTL formula in negation normal form, at most `size` nodes.
pub fn random_ltl<R: Rng>(rng: &mut R, atoms: &[&str], size: usize) -> Formula {
    gen_formula(rng, &Menu { atoms, prompt: false, f_vars: &[], g_vars: &[] }, size)
}

/// A PROMPT–LTL formula (LTL plus the prompt eventually).
pub fn random_prompt<R: Rng>(rng: &mut R, atoms: &[&str], size: usize) -> Formula {
    gen_formula(rng, &Menu { atoms, prompt: true, f_vars: &[], g_vars: &[] }, size)
}

/// A well-formed PLTL formula: parameterized eventualities draw their
/// variables from `f_vars`, parameterized alwayses from `g_vars`. The
/// caller keeps the two pools disjoint; well-formedness then holds by
/// construction.
pub fn random_pltl<R: Rng>(
    rng: &mut R,
    atoms: &[&str],
    f_vars: &[&str],
    g_vars: &[&str],
    size: usize,
) -> Formula {
    assert!(f_vars.iter().all(|x| !g_vars.contains(x)));
    gen_formula(rng, &Menu { atoms, prompt: false, f_vars, g_vars }, size)
}

/// A random ultimately periodic word: stem up to `max_stem`, loop
/// between one and `max_loop` letters.
pub fn random_lasso<R: Rng>(
    rng: &mut R,
    alphabet: &Alphabet,
    max_stem: usize,
    max_loop: usize,
) -> LassoWord {
    assert!(max_loop >= 1);
    let letters = alphabet.letter_count() as u32;
    let stem = (0..rng.gen_range(0..=max_stem)).map(|_| rng.gen_range(0..letters)).collect();
    let lasso_loop =
        (0..rng.gen_range(1..=max_loop)).map(|_| rng.gen_range(0..letters)).collect();
    LassoWord::from_masks(alphabet.clone(), stem, lasso_loop)
}

/// Splits `total` into `parts` summands, each within `low..=high`.
fn composition<R: Rng>(rng: &mut R, total: u64, parts: u64, low: u64, high: u64) -> Vec<u64> {
    assert!(parts * low <= total && total <= parts * high);
    let mut out = Vec::with_capacity(parts as usize);
    let mut rest = total;
    for i in 0..parts {
        let left = parts - i - 1;
        // Keep the remainder feasible for the remaining slots.
        let min = low.max(rest.saturating_sub(left * high));
        let max = high.min(rest - left * low);
        let v = rng.gen_range(min..=max);
        out.push(v);
        rest -= v;
    }
    out
}

fn color_extension(w: &LassoWord, r: &str, unroll: usize, blocks: &[u64], first: bool) -> LassoWord {
    let a = w.stem().len();
    let total = a + unroll * w.lasso_loop().len();
    let mut colors = Vec::with_capacity(total);
    let mut value = first;
    for &len in blocks {
        for _ in 0..len {
            colors.push(value);
        }
        value = !value;
    }
    assert_eq!(colors.len(), total);
    let mut names: Vec<String> = w.alphabet().props().to_vec();
    names.push(r.to_string());
    let target = Alphabet::new(names);
    let bit = 1u32 << target.index_of(r).unwrap();
    let extra: Vec<u32> = colors.iter().map(|&c| if c { bit } else { 0 }).collect();
    let mut lasso_loop = Vec::with_capacity(unroll * w.lasso_loop().len());
    for _ in 0..unroll {
        lasso_loop.extend_from_slice(w.lasso_loop());
    }
    let unrolled = LassoWord::from_masks(w.alphabet().clone(), w.stem().to_vec(), lasso_loop);
    unrolled.recolor(target, &extra)
}

/// A random `k`-spaced `r`-coloring of `w`: colors change infinitely
/// often and every block (maximal constant-color infix) has length at
/// least `k`. The stem joins the first loop block, so its length only
/// adds slack.
pub fn k_spaced_coloring<R: Rng>(rng: &mut R, w: &LassoWord, r: &str, k: u64) -> LassoWord {
    assert!(k >= 1 && !w.alphabet().contains(r));
    let b = w.lasso_loop().len() as u64;
    let mut unroll = 1;
    while unroll * b < 2 * k {
        unroll += 1;
    }
    unroll += rng.gen_range(0..=1) * unroll;
    let period = unroll * b;
    let max_blocks = period / k;
    let pairs = rng.gen_range(1..=(max_blocks / 2).max(1));
    let mut blocks = composition(rng, period, 2 * pairs, k, period);
    blocks[0] += w.stem().len() as u64;
    color_extension(w, r, unroll as usize, &blocks, rng.gen())
}

/// A random `k`-bounded `r`-coloring of `w`: every block has length at
/// most `k`. A color change is forced where the loop starts so that the
/// pattern repeats block-exactly.
pub fn k_bounded_coloring<R: Rng>(rng: &mut R, w: &LassoWord, r: &str, k: u64) -> LassoWord {
    assert!(k >= 1 && !w.alphabet().contains(r));
    let a = w.stem().len() as u64;
    let b = w.lasso_loop().len() as u64;
    let feasible = |len: u64| {
        let lo = len.div_ceil(k);
        let t = lo + (lo % 2);
        t >= 2 && t <= len
    };
    let mut unroll = 1;
    while !feasible(unroll * b) {
        unroll += 1;
    }
    let period = unroll * b;
    let lo = period.div_ceil(k);
    let hi = period;
    let mut t = rng.gen_range(lo..=hi);
    if t % 2 == 1 {
        t = if t + 1 <= hi { t + 1 } else { t - 1 };
    }
    assert!(t >= 2 && t % 2 == 0);
    let mut blocks = composition(rng, period, t, 1, k);
    let first = rng.gen::<bool>();
    // Stem blocks, alternating backward from the flip at the loop start.
    let mut stem_blocks = Vec::new();
    let mut rest = a;
    while rest > 0 {
        let len = rng.gen_range(1..=k.min(rest));
        stem_blocks.push(len);
        rest -= len;
    }
    let stem_first = if stem_blocks.len() % 2 == 0 { first } else { !first };
    stem_blocks.append(&mut blocks);
    color_extension(w, r, unroll as usize, &stem_blocks, stem_first)
}

/// Block lengths of the coloring, measured over a horizon long enough
/// to see every distinct block of the ultimately periodic word. `None`
/// when the color eventually stops changing (one infinite block).
pub fn observed_blocks(w: &LassoWord, r: &str) -> Option<Vec<u64>> {
    let a = w.stem().len();
    let b = w.lasso_loop().len();
    let bit = 1u32 << w.alphabet().index_of(r).expect("coloring proposition present");
    let holds = |i: usize| w.letter_at(i) & bit != 0;
    if (0..b).all(|i| holds(a + i) == holds(a + (i + 1) % b)) {
        return None;
    }
    let horizon = a + 3 * b;
    let mut changes = vec![0usize];
    for i in 1..horizon {
        if holds(i) != holds(i - 1) {
            changes.push(i);
        }
    }
    Some(changes.windows(2).map(|c| (c[1] - c[0]) as u64).collect())
}

/// Every block at least `k` long and infinitely many changes.
pub fn is_k_spaced(w: &LassoWord, r: &str, k: u64) -> bool {
    observed_blocks(w, r).is_some_and(|blocks| blocks.iter().all(|&l| l >= k))
}

/// Every block at most `k` long.
pub fn is_k_bounded(w: &LassoWord, r: &str, k: u64) -> bool {
    observed_blocks(w, r).is_some_and(|blocks| blocks.iter().all(|&l| l <= k))
}

/// A random colored Büchi graph: up to `max_vertices` vertices, every
/// vertex keeps at least one outgoing edge, uniform colors, generalized
/// acceptance of index one or two with possibly-empty sets.
pub fn random_colored_graph<R: Rng>(rng: &mut R, max_vertices: usize) -> ColoredBuchiGraph {
    let n = rng.gen_range(1..=max_vertices);
    let mut edges = Vec::with_capacity(n);
    for _ in 0..n {
        let mut row: Vec<usize> = (0..n).filter(|_| rng.gen_ratio(3, 10)).collect();
        if row.is_empty() {
            row.push(rng.gen_range(0..n));
        }
        edges.push(row);
    }
    let colors = (0..n).map(|_| rng.gen_range(0..4u8)).collect();
    let index = rng.gen_range(1..=2usize);
    let acceptance = (0..index)
        .map(|_| (0..n).map(|_| rng.gen_ratio(2, 5)).collect())
        .collect();
    ColoredBuchiGraph::new("r", "rp", 0, edges, colors, acceptance).unwrap()
}

/// A random complete Moore machine over the given interface.
pub fn random_system<R: Rng>(
    rng: &mut R,
    inputs: &Alphabet,
    outputs: &Alphabet,
    max_states: usize,
) -> TransitionSystem {
    let n = rng.gen_range(1..=max_states);
    let letters = inputs.letter_count();
    let delta = (0..n)
        .map(|_| (0..letters).map(|_| rng.gen_range(0..n)).collect())
        .collect();
    let labels = (0..n).map(|_| rng.gen_range(0..outputs.letter_count() as u32)).collect();
    TransitionSystem::from_dense(inputs.clone(), outputs.clone(), 0, delta, labels)
}

/// A random valid architecture: an environment plus up to `max_system`
/// system processes, pairwise-disjoint outputs, inputs drawn from other
/// processes' outputs.
pub fn random_architecture<R: Rng>(rng: &mut R, max_system: usize) -> Architecture {
    let n = rng.gen_range(1..=max_system);
    let mut pool = (0..).map(|i| format!("v{i}"));
    let env_outputs: Vec<String> =
        (0..rng.gen_range(1..=2)).map(|_| pool.next().unwrap()).collect();
    let mut outputs_of: Vec<Vec<String>> = vec![env_outputs.clone()];
    for _ in 0..n {
        outputs_of.push((0..rng.gen_range(1..=2)).map(|_| pool.next().unwrap()).collect());
    }
    let mut processes = Vec::with_capacity(n);
    for i in 0..n {
        let mut inputs = std::collections::BTreeSet::new();
        for (j, outs) in outputs_of.iter().enumerate() {
            if j == i + 1 {
                continue;
            }
            for o in outs {
                if rng.gen_ratio(1, 2) {
                    inputs.insert(o.clone());
                }
            }
        }
        processes.push(Process {
            name: format!("p{i}"),
            inputs,
            outputs: outputs_of[i + 1].iter().cloned().collect(),
        });
    }
    Architecture::new("env", env_outputs, processes).unwrap()
}
