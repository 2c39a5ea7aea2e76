//! The alternating-color rewrites and the PLTL elimination.
//!
//! `rel_color` replaces each prompt-eventually by the "within at most
//! one color change" pattern; `colorize` conjoins the alternation
//! requirement `GF r ∧ GF ¬r`; `pltl_to_prompt` maps bounded
//! eventualities to prompt ones and drops bounded always operators.

use super::{Formula, FormulaError, LassoWord};

/// `rel_r(φ)`: each `Fp ψ` becomes
/// `(r → (r U (¬r U rel_r(ψ)))) ∧ (¬r → (¬r U (r U rel_r(ψ))))`.
///
/// The result is plain LTL and linear in the size of `φ`.
pub fn rel_color(phi: &Formula, r: &str) -> Result<Formula, FormulaError> {
    if !phi.is_prompt_ltl() {
        return Err(FormulaError::NotPromptLtl);
    }
    if phi.atoms().contains(r) {
        return Err(FormulaError::ColorCollision(r.to_string()));
    }
    Ok(rel_rec(phi, r))
}

fn rel_rec(phi: &Formula, r: &str) -> Formula {
    match phi {
        Formula::True
        | Formula::False
        | Formula::Atom(_)
        | Formula::NegAtom(_) => phi.clone(),
        Formula::And(l, r2) => Formula::and(rel_rec(l, r), rel_rec(r2, r)),
        Formula::Or(l, r2) => Formula::or(rel_rec(l, r), rel_rec(r2, r)),
        Formula::Next(f) => Formula::next(rel_rec(f, r)),
        Formula::Until(l, r2) => Formula::until(rel_rec(l, r), rel_rec(r2, r)),
        Formula::Release(l, r2) => Formula::release(rel_rec(l, r), rel_rec(r2, r)),
        Formula::PromptF(f) => {
            let inner = rel_rec(f, r);
            let pos = Formula::or(
                Formula::neg_atom(r),
                Formula::until(
                    Formula::atom(r),
                    Formula::until(Formula::neg_atom(r), inner.clone()),
                ),
            );
            let neg = Formula::or(
                Formula::atom(r),
                Formula::until(
                    Formula::neg_atom(r),
                    Formula::until(Formula::atom(r), inner),
                ),
            );
            Formula::and(pos, neg)
        }
        Formula::BoundedF(..) | Formula::BoundedG(..) => {
            unreachable!("checked by rel_color precondition")
        }
    }
}

/// `alt_r = GF r ∧ GF ¬r`.
pub fn alternation(r: &str) -> Formula {
    Formula::and(
        Formula::globally(Formula::finally(Formula::atom(r))),
        Formula::globally(Formula::finally(Formula::neg_atom(r))),
    )
}

/// `c_r(φ) = rel_r(φ) ∧ alt_r`.
pub fn colorize(phi: &Formula, r: &str) -> Result<Formula, FormulaError> {
    Ok(Formula::and(rel_color(phi, r)?, alternation(r)))
}

/// Replaces each `F<=x ψ` by `Fp ψ` and each `G<=y ψ` by `ψ`.
pub fn pltl_to_prompt(phi: &Formula) -> Result<Formula, FormulaError> {
    if let Some(x) = phi.well_formedness_violation() {
        return Err(FormulaError::NotWellFormed(x));
    }
    Ok(to_prompt_rec(phi))
}

fn to_prompt_rec(phi: &Formula) -> Formula {
    match phi {
        Formula::True | Formula::False | Formula::Atom(_) | Formula::NegAtom(_) => phi.clone(),
        Formula::And(l, r) => Formula::and(to_prompt_rec(l), to_prompt_rec(r)),
        Formula::Or(l, r) => Formula::or(to_prompt_rec(l), to_prompt_rec(r)),
        Formula::Next(f) => Formula::next(to_prompt_rec(f)),
        Formula::Until(l, r) => Formula::until(to_prompt_rec(l), to_prompt_rec(r)),
        Formula::Release(l, r) => Formula::release(to_prompt_rec(l), to_prompt_rec(r)),
        Formula::PromptF(f) => Formula::prompt_f(to_prompt_rec(f)),
        Formula::BoundedF(_, f) => Formula::prompt_f(to_prompt_rec(f)),
        Formula::BoundedG(_, f) => to_prompt_rec(f),
    }
}

/// Block structure of the `r`-coloring of a lasso word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringReport {
    /// Smallest `k` such that the word is `k`-bounded (max block
    /// length); `None` when the color eventually stays constant.
    pub k_bounded_for: Option<u64>,
    /// Largest `k` such that the word is `k`-spaced (min block length);
    /// `None` when the color eventually stays constant.
    pub k_spaced_for: Option<u64>,
    /// Whether the color changes infinitely often.
    pub changes_infinitely: bool,
}

/// Max/min `r`-block lengths and alternation of the infinite word.
///
/// The block structure of a lasso is eventually periodic; blocks are
/// collected on the stem plus two loop unrollings (with a third
/// unrolling available so every block starting in the window closes).
pub fn coloring_properties(w: &LassoWord, r: &str) -> Result<ColoringReport, FormulaError> {
    let bit = w
        .alphabet()
        .index_of(r)
        .ok_or_else(|| FormulaError::UnknownAtom(r.to_string()))?;
    let stem = w.stem().len();
    let period = w.lasso_loop().len();
    let colors: Vec<bool> = (0..stem + 3 * period)
        .map(|i| w.letter_at(i) & (1 << bit) != 0)
        .collect();

    // The color changes infinitely often iff the loop carries both
    // values; a constant-colored loop never changes again.
    let changes_infinitely = w
        .lasso_loop()
        .iter()
        .any(|&m| (m & (1 << bit) != 0) != (w.lasso_loop()[0] & (1 << bit) != 0));

    if !changes_infinitely {
        return Ok(ColoringReport {
            k_bounded_for: None,
            k_spaced_for: None,
            changes_infinitely: false,
        });
    }

    // Change points: position 0 plus every i with colors[i] != colors[i-1].
    let mut change_points = vec![0usize];
    for i in 1..colors.len() {
        if colors[i] != colors[i - 1] {
            change_points.push(i);
        }
    }
    // Complete blocks starting before stem + 2·period; later blocks are
    // period-shifted copies.
    let window = stem + 2 * period;
    let mut min_len = u64::MAX;
    let mut max_len = 0u64;
    for pair in change_points.windows(2) {
        let (start, end) = (pair[0], pair[1]);
        if start >= window {
            break;
        }
        let len = (end - start) as u64;
        min_len = min_len.min(len);
        max_len = max_len.max(len);
    }
    Ok(ColoringReport {
        k_bounded_for: Some(max_len),
        k_spaced_for: Some(min_len),
        changes_infinitely: true,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{evaluate, parse, Alphabet, Valuation};
    use super::*;

    #[test]
    fn rel_color_on_prompt_eventually_matches_definition() {
        let f = parse("Fp a").unwrap();
        let rewritten = rel_color(&f, "r").unwrap();
        let expected = parse("(r -> (r U (!r U a))) & (!r -> (!r U (r U a)))").unwrap();
        assert_eq!(rewritten, expected);
        assert!(rewritten.is_ltl());
    }

    #[test]
    fn rel_color_identity_without_prompt() {
        let f = parse("G a").unwrap();
        assert_eq!(rel_color(&f, "r").unwrap(), f);
    }

    #[test]
    fn rel_color_nested_applies_inside_out() {
        let f = parse("Fp Fp a").unwrap();
        let inner = rel_color(&parse("Fp a").unwrap(), "r").unwrap();
        let outer = rel_color(&f, "r").unwrap();
        // The inner rewrite must appear verbatim inside the outer one.
        let printed = outer.to_string();
        assert!(printed.contains(&inner.to_string()));
        assert!(outer.is_ltl());
    }

    #[test]
    fn rel_color_rejects_collision_and_parameters() {
        assert_eq!(
            rel_color(&parse("Fp r").unwrap(), "r").unwrap_err(),
            FormulaError::ColorCollision("r".to_string())
        );
        assert_eq!(
            rel_color(&parse("F<=x a").unwrap(), "r").unwrap_err(),
            FormulaError::NotPromptLtl
        );
    }

    #[test]
    fn colorize_adds_alternation() {
        let f = parse("G a").unwrap();
        let c = colorize(&f, "r").unwrap();
        assert_eq!(c, parse("G a & (G F r & G F !r)").unwrap());
        let mut atoms = f.atoms();
        atoms.insert("r".to_string());
        assert_eq!(c.atoms(), atoms);
    }

    #[test]
    fn pltl_elimination() {
        assert_eq!(
            pltl_to_prompt(&parse("G(a -> F<=x b)").unwrap()).unwrap(),
            parse("G(a -> Fp b)").unwrap()
        );
        assert_eq!(
            pltl_to_prompt(&parse("G<=y c").unwrap()).unwrap(),
            parse("c").unwrap()
        );
        let ltl = parse("a U b").unwrap();
        assert_eq!(pltl_to_prompt(&ltl).unwrap(), ltl);
        assert!(pltl_to_prompt(&parse("F<=x a & G<=x b").unwrap()).is_err());
    }

    #[test]
    fn coloring_properties_examples() {
        let alpha = Alphabet::new(["r"]);
        let w = LassoWord::new(alpha.clone(), &[], &[vec!["r"], vec![]]).unwrap();
        let rep = coloring_properties(&w, "r").unwrap();
        assert_eq!(rep.k_bounded_for, Some(1));
        assert_eq!(rep.k_spaced_for, Some(1));
        assert!(rep.changes_infinitely);

        let w = LassoWord::new(alpha.clone(), &[], &[vec!["r"]]).unwrap();
        let rep = coloring_properties(&w, "r").unwrap();
        assert!(!rep.changes_infinitely);
        assert_eq!(rep.k_bounded_for, None);

        let w = LassoWord::new(alpha, &[vec![]], &[vec!["r"], vec!["r"], vec![]]).unwrap();
        let rep = coloring_properties(&w, "r").unwrap();
        assert_eq!(rep.k_bounded_for, Some(2));
        assert_eq!(rep.k_spaced_for, Some(1));
    }

    #[test]
    fn colorized_formula_sees_k_spaced_coloring() {
        // w = ({a})^ω satisfies Fp a with k = 0; color it 1-spaced.
        let w = LassoWord::new(Alphabet::new(["a"]), &[], &[vec!["a"]]).unwrap();
        let f = parse("Fp a").unwrap();
        assert!(evaluate(&w, &f, &Valuation::prompt(0)).unwrap());
        let target = Alphabet::new(["a", "r"]);
        let rbit = 1 << target.index_of("r").unwrap();
        // two unrollings: {a,r} {a} alternating
        let colored = LassoWord::from_masks(
            target.clone(),
            vec![],
            vec![1 | rbit, 1],
        );
        let c = colorize(&f, "r").unwrap();
        assert!(evaluate(&colored, &c, &Valuation::default()).unwrap());
    }
}
