//! Parametric temporal logic formulas in negation normal form.
//!
//! The AST covers LTL (`X`, `U`, `R` plus derived `F`/`G`), PROMPT–LTL
//! (the prompt-eventually `Fp`) and PLTL (bounded operators `F<=x`,
//! `G<=y` parameterized by variables). Formulas are kept in negation
//! normal form: negation occurs only on atoms. The parser accepts
//! general negation and implication and normalizes both; see
//! [`parse`].
//!
//! Evaluation is exact over ultimately periodic words ([`LassoWord`]),
//! and the alternating-color rewrites `rel_r` / `c_r` as well as the
//! PLTL-to-PROMPT reduction live in this module.

mod eval;
mod parse;
mod rewrite;
mod word;

pub use eval::evaluate;
pub use parse::parse;
pub use rewrite::{alternation, coloring_properties, colorize, pltl_to_prompt, rel_color, ColoringReport};
pub use word::{Alphabet, LassoWord, Valuation, MAX_PROPS};

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Errors produced by formula parsing, rewriting and evaluation.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    /// The input text violates the concrete grammar.
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    /// `!` applied (after normalization) to `Fp`, `F<=x` or `G<=y`.
    #[error("negation over parameterized operator `{0}`")]
    NegatedParameterized(&'static str),
    /// An implication whose antecedent mentions `Fp` or a parameterized operator.
    #[error("non-negatable antecedent of `->`: antecedent must be Fp-free and parameter-free")]
    NonNegatableAntecedent,
    /// A rewrite was asked to introduce a color that the formula already uses.
    #[error("color proposition `{0}` collides with an existing atom")]
    ColorCollision(String),
    /// Evaluation hit a parameter with no value in the valuation.
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    /// A word or alphabet mentions a proposition outside the declared alphabet.
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    /// Operation requires a well-formed PLTL formula (varF ∩ varG = ∅).
    #[error("formula is not well-formed: variable `{0}` parameterizes both F<= and G<=")]
    NotWellFormed(String),
    /// Operation requires a PROMPT–LTL formula (no bounded operators).
    #[error("formula is not PROMPT–LTL: contains a parameterized operator")]
    NotPromptLtl,
    /// Operation requires a plain LTL formula.
    #[error("formula is not plain LTL: contains `{0}`")]
    NotPlainLtl(&'static str),
}

/// A formula in negation normal form.
///
/// `True`/`False` are kept as leaves (the derived operators `F`/`G`
/// desugar through them); implication is desugared by the parser.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(String),
    NegAtom(String),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    /// Prompt eventually `Fp φ`: within the (implicit) bound `k`.
    PromptF(Box<Formula>),
    /// Bounded eventually `F<=x φ`.
    BoundedF(String, Box<Formula>),
    /// Bounded always `G<=y φ`.
    BoundedG(String, Box<Formula>),
}

impl Formula {
    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn next(f: Formula) -> Formula {
        Formula::Next(Box::new(f))
    }

    pub fn until(l: Formula, r: Formula) -> Formula {
        Formula::Until(Box::new(l), Box::new(r))
    }

    pub fn release(l: Formula, r: Formula) -> Formula {
        Formula::Release(Box::new(l), Box::new(r))
    }

    /// Derived `F φ = true U φ`.
    pub fn finally(f: Formula) -> Formula {
        Formula::until(Formula::True, f)
    }

    /// Derived `G φ = false R φ`.
    pub fn globally(f: Formula) -> Formula {
        Formula::release(Formula::False, f)
    }

    pub fn prompt_f(f: Formula) -> Formula {
        Formula::PromptF(Box::new(f))
    }

    pub fn bounded_f(var: impl Into<String>, f: Formula) -> Formula {
        Formula::BoundedF(var.into(), Box::new(f))
    }

    pub fn bounded_g(var: impl Into<String>, f: Formula) -> Formula {
        Formula::BoundedG(var.into(), Box::new(f))
    }

    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    pub fn neg_atom(name: impl Into<String>) -> Formula {
        Formula::NegAtom(name.into())
    }

    /// Direct subformulas, in left-to-right order.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) | Formula::NegAtom(_) => vec![],
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Until(l, r) | Formula::Release(l, r) => {
                vec![l, r]
            }
            Formula::Next(f) | Formula::PromptF(f) | Formula::BoundedF(_, f) | Formula::BoundedG(_, f) => {
                vec![f]
            }
        }
    }

    /// All distinct subformulas (including `self`), outermost first.
    pub fn subformulas(&self) -> Vec<&Formula> {
        let mut seen: BTreeSet<&Formula> = BTreeSet::new();
        let mut order: Vec<&Formula> = Vec::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            if seen.insert(f) {
                order.push(f);
                for c in f.children() {
                    stack.push(c);
                }
            }
        }
        order
    }

    /// Number of distinct subformulas.
    pub fn size(&self) -> usize {
        self.subformulas().len()
    }

    /// Set of atomic propositions occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for f in self.subformulas() {
            if let Formula::Atom(a) | Formula::NegAtom(a) = f {
                out.insert(a.clone());
            }
        }
        out
    }

    /// Variables parameterizing bounded-eventually and bounded-always
    /// operators, respectively.
    pub fn var_sets(&self) -> (BTreeSet<String>, BTreeSet<String>) {
        let mut var_f = BTreeSet::new();
        let mut var_g = BTreeSet::new();
        for f in self.subformulas() {
            match f {
                Formula::BoundedF(x, _) => {
                    var_f.insert(x.clone());
                }
                Formula::BoundedG(y, _) => {
                    var_g.insert(y.clone());
                }
                _ => {}
            }
        }
        (var_f, var_g)
    }

    /// All parameter variables.
    pub fn vars(&self) -> BTreeSet<String> {
        let (mut f, g) = self.var_sets();
        f.extend(g);
        f
    }

    /// A PLTL formula is well-formed iff no variable parameterizes both
    /// an eventually and an always operator.
    pub fn is_well_formed(&self) -> bool {
        let (f, g) = self.var_sets();
        f.intersection(&g).next().is_none()
    }

    /// Name of a variable violating well-formedness, if any.
    pub fn well_formedness_violation(&self) -> Option<String> {
        let (f, g) = self.var_sets();
        f.intersection(&g).next().cloned()
    }

    /// PROMPT–LTL: no parameterized (bounded) operators.
    pub fn is_prompt_ltl(&self) -> bool {
        !self
            .subformulas()
            .iter()
            .any(|f| matches!(f, Formula::BoundedF(..) | Formula::BoundedG(..)))
    }

    /// Plain LTL: neither bounded operators nor prompt-eventually.
    pub fn is_ltl(&self) -> bool {
        !self.subformulas().iter().any(|f| {
            matches!(f, Formula::PromptF(_) | Formula::BoundedF(..) | Formula::BoundedG(..))
        })
    }

    /// Negation of a plain LTL formula, in negation normal form.
    ///
    /// Fails on `Fp`/`F<=`/`G<=` — those operators have no dual in the
    /// fragment.
    pub fn negated_ltl(&self) -> Result<Formula, FormulaError> {
        Ok(match self {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Atom(a) => Formula::NegAtom(a.clone()),
            Formula::NegAtom(a) => Formula::Atom(a.clone()),
            Formula::And(l, r) => Formula::or(l.negated_ltl()?, r.negated_ltl()?),
            Formula::Or(l, r) => Formula::and(l.negated_ltl()?, r.negated_ltl()?),
            Formula::Next(f) => Formula::next(f.negated_ltl()?),
            Formula::Until(l, r) => Formula::release(l.negated_ltl()?, r.negated_ltl()?),
            Formula::Release(l, r) => Formula::until(l.negated_ltl()?, r.negated_ltl()?),
            Formula::PromptF(_) => return Err(FormulaError::NotPlainLtl("Fp")),
            Formula::BoundedF(..) => return Err(FormulaError::NotPlainLtl("F<=")),
            Formula::BoundedG(..) => return Err(FormulaError::NotPlainLtl("G<=")),
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            Formula::Until(..) | Formula::Release(..) => 3,
            _ => 4,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.precedence();
        let parens = prec < min;
        if parens {
            write!(f, "(")?;
        }
        match self {
            Formula::True => write!(f, "true")?,
            Formula::False => write!(f, "false")?,
            Formula::Atom(a) => write!(f, "{a}")?,
            Formula::NegAtom(a) => write!(f, "!{a}")?,
            Formula::And(l, r) => {
                l.fmt_prec(f, 3)?;
                write!(f, " & ")?;
                r.fmt_prec(f, 2)?;
            }
            Formula::Or(l, r) => {
                l.fmt_prec(f, 2)?;
                write!(f, " | ")?;
                r.fmt_prec(f, 1)?;
            }
            // Print the derived forms back as sugar; both reparse to the
            // identical AST.
            Formula::Until(l, r) if **l == Formula::True => {
                write!(f, "F ")?;
                r.fmt_prec(f, 4)?;
            }
            Formula::Release(l, r) if **l == Formula::False => {
                write!(f, "G ")?;
                r.fmt_prec(f, 4)?;
            }
            Formula::Until(l, r) => {
                l.fmt_prec(f, 4)?;
                write!(f, " U ")?;
                r.fmt_prec(f, 3)?;
            }
            Formula::Release(l, r) => {
                l.fmt_prec(f, 4)?;
                write!(f, " R ")?;
                r.fmt_prec(f, 3)?;
            }
            Formula::Next(g) => {
                write!(f, "X ")?;
                g.fmt_prec(f, 4)?;
            }
            Formula::PromptF(g) => {
                write!(f, "Fp ")?;
                g.fmt_prec(f, 4)?;
            }
            Formula::BoundedF(x, g) => {
                write!(f, "F<={x} ")?;
                g.fmt_prec(f, 4)?;
            }
            Formula::BoundedG(y, g) => {
                write!(f, "G<={y} ")?;
                g.fmt_prec(f, 4)?;
            }
        }
        if parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn size_counts_distinct_subformulas() {
        // a & a has subformulas {a & a, a}.
        assert_eq!(p("a & a").size(), 2);
        assert_eq!(p("a & b").size(), 3);
        assert_eq!(p("Fp (a U b)").size(), 4);
    }

    #[test]
    fn var_sets_examples() {
        let f = p("G(a -> F<=x b) & G<=y c");
        let (vf, vg) = f.var_sets();
        assert_eq!(vf, BTreeSet::from(["x".to_string()]));
        assert_eq!(vg, BTreeSet::from(["y".to_string()]));

        let f = p("Fp a");
        let (vf, vg) = f.var_sets();
        assert!(vf.is_empty() && vg.is_empty());

        let f = p("F<=x a & G<=x b");
        let (vf, vg) = f.var_sets();
        assert_eq!(vf, vg);
    }

    #[test]
    fn well_formedness() {
        assert!(p("F<=x a & G<=y b").is_well_formed());
        assert!(!p("F<=x a & G<=x b").is_well_formed());
        assert!(p("Fp a").is_well_formed());
    }

    #[test]
    fn fragment_predicates() {
        assert!(p("a U b").is_ltl());
        assert!(p("Fp a").is_prompt_ltl());
        assert!(!p("Fp a").is_ltl());
        assert!(!p("F<=x a").is_prompt_ltl());
    }

    #[test]
    fn negated_ltl_is_involutive() {
        let f = p("(a U b) & X (c R !d)");
        assert_eq!(f.negated_ltl().unwrap().negated_ltl().unwrap(), f);
        assert!(p("Fp a").negated_ltl().is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "a",
            "!a",
            "true",
            "false",
            "a & b | c",
            "a U b U c",
            "(a U b) U c",
            "X (a | b)",
            "Fp (a & b)",
            "F<=x a & G<=y b",
            "G (a | Fp b)",
            "F (a & X b)",
        ] {
            let f = p(s);
            let printed = f.to_string();
            assert_eq!(p(&printed), f, "round trip failed for {s} -> {printed}");
        }
    }
}
