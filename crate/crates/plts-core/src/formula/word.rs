//! Ultimately periodic words and parameter valuations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::FormulaError;

/// Maximum number of propositions a single alphabet may carry; letters
/// are bitmasks, and every consumer enumerates `2^|props|` letters at
/// some point.
pub const MAX_PROPS: usize = 20;

/// An ordered set of proposition names. Letters over the alphabet are
/// bitmasks: bit `i` set means proposition `props[i]` holds.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Alphabet {
    props: Vec<String>,
}

impl Alphabet {
    /// Builds an alphabet from names; sorts and deduplicates.
    pub fn new<I: IntoIterator<Item = S>, S: Into<String>>(names: I) -> Alphabet {
        let set: BTreeSet<String> = names.into_iter().map(Into::into).collect();
        assert!(set.len() <= MAX_PROPS, "alphabet too large ({} props)", set.len());
        Alphabet { props: set.into_iter().collect() }
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn len(&self) -> usize {
        self.props.len()
    }

    pub fn is_empty(&self) -> bool {
        self.props.is_empty()
    }

    /// Number of letters (`2^|props|`).
    pub fn letter_count(&self) -> usize {
        1usize << self.props.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.props.binary_search_by(|p| p.as_str().cmp(name)).ok()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    /// Bitmask of a letter given as a set of proposition names.
    pub fn mask_of<'a, I: IntoIterator<Item = &'a str>>(&self, set: I) -> Result<u32, FormulaError> {
        let mut mask = 0u32;
        for name in set {
            match self.index_of(name) {
                Some(i) => mask |= 1 << i,
                None => return Err(FormulaError::UnknownAtom(name.to_string())),
            }
        }
        Ok(mask)
    }

    /// The proposition names set in `mask`.
    pub fn set_of(&self, mask: u32) -> BTreeSet<String> {
        self.props
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, p)| p.clone())
            .collect()
    }

    /// For each of our propositions, its bit index in `other` (None if
    /// absent there).
    pub fn embedding(&self, other: &Alphabet) -> Vec<Option<usize>> {
        self.props.iter().map(|p| other.index_of(p)).collect()
    }
}

/// A finite representation `stem · loop^ω` of an ultimately periodic
/// word over an [`Alphabet`]. Letters are stored as bitmasks.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LassoWord {
    alphabet: Alphabet,
    stem: Vec<u32>,
    lasso_loop: Vec<u32>,
}

impl LassoWord {
    /// Builds a lasso from letters given as proposition-name slices.
    pub fn new(
        alphabet: Alphabet,
        stem: &[Vec<&str>],
        lasso_loop: &[Vec<&str>],
    ) -> Result<LassoWord, FormulaError> {
        assert!(!lasso_loop.is_empty(), "lasso loop must be nonempty");
        let stem = stem
            .iter()
            .map(|l| alphabet.mask_of(l.iter().copied()))
            .collect::<Result<_, _>>()?;
        let lasso_loop = lasso_loop
            .iter()
            .map(|l| alphabet.mask_of(l.iter().copied()))
            .collect::<Result<_, _>>()?;
        Ok(LassoWord { alphabet, stem, lasso_loop })
    }

    /// Builds a lasso directly from letter masks.
    pub fn from_masks(alphabet: Alphabet, stem: Vec<u32>, lasso_loop: Vec<u32>) -> LassoWord {
        assert!(!lasso_loop.is_empty(), "lasso loop must be nonempty");
        let bound = alphabet.letter_count() as u32;
        for &m in stem.iter().chain(&lasso_loop) {
            assert!((m as usize) < bound as usize, "letter mask out of range");
        }
        LassoWord { alphabet, stem, lasso_loop }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn stem(&self) -> &[u32] {
        &self.stem
    }

    pub fn lasso_loop(&self) -> &[u32] {
        &self.lasso_loop
    }

    /// Number of stored positions (`|stem| + |loop|`).
    pub fn len(&self) -> usize {
        self.stem.len() + self.lasso_loop.len()
    }

    /// Letter mask at absolute position `i` of the infinite word.
    pub fn letter_at(&self, i: usize) -> u32 {
        if i < self.stem.len() {
            self.stem[i]
        } else {
            self.lasso_loop[(i - self.stem.len()) % self.lasso_loop.len()]
        }
    }

    /// Stored index of the position following stored index `i`
    /// (wraps from the last loop position to the loop start).
    pub fn succ(&self, i: usize) -> usize {
        if i + 1 < self.len() {
            i + 1
        } else {
            self.stem.len()
        }
    }

    /// Stored index reached from stored index `i` after `j` steps.
    pub fn advance(&self, i: usize, j: usize) -> usize {
        if i + j < self.len() {
            return i + j;
        }
        let l = self.lasso_loop.len();
        let from_loop_start = (i + j - self.stem.len()) % l;
        self.stem.len() + from_loop_start
    }

    /// Truth of proposition `name` at stored position `i`.
    pub fn holds_at(&self, name: &str, i: usize) -> Option<bool> {
        let bit = self.alphabet.index_of(name)?;
        let mask = if i < self.stem.len() {
            self.stem[i]
        } else {
            self.lasso_loop[i - self.stem.len()]
        };
        Some(mask & (1 << bit) != 0)
    }

    /// The same word with proposition `r` removed from the alphabet.
    pub fn erase(&self, r: &str) -> LassoWord {
        let Some(bit) = self.alphabet.index_of(r) else {
            return self.clone();
        };
        let keep: Vec<String> =
            self.alphabet.props.iter().filter(|p| p.as_str() != r).cloned().collect();
        let strip = |mask: u32| -> u32 {
            let low = mask & ((1u32 << bit) - 1);
            let high = mask >> (bit + 1);
            low | (high << bit)
        };
        LassoWord {
            alphabet: Alphabet { props: keep },
            stem: self.stem.iter().map(|&m| strip(m)).collect(),
            lasso_loop: self.lasso_loop.iter().map(|&m| strip(m)).collect(),
        }
    }

    /// The same word over a larger alphabet, with per-position extra
    /// masks OR-ed in. `extra` must cover `|stem| + |loop|` positions and
    /// is interpreted over `target`.
    pub fn recolor(&self, target: Alphabet, extra: &[u32]) -> LassoWord {
        assert_eq!(extra.len(), self.len());
        let map = self.alphabet.embedding(&target);
        let lift = |mask: u32| -> u32 {
            let mut out = 0;
            for (i, slot) in map.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    out |= 1 << slot.expect("recolor target must contain source alphabet");
                }
            }
            out
        };
        let stem: Vec<u32> =
            self.stem.iter().enumerate().map(|(i, &m)| lift(m) | extra[i]).collect();
        let lasso_loop: Vec<u32> = self
            .lasso_loop
            .iter()
            .enumerate()
            .map(|(i, &m)| lift(m) | extra[self.stem.len() + i])
            .collect();
        LassoWord { alphabet: target, stem, lasso_loop }
    }

    /// Reduces to the canonical lasso denoting the same infinite word:
    /// primitive loop, and no stem letter duplicating the loop tail.
    pub fn canonicalize(&self) -> LassoWord {
        let mut stem = self.stem.clone();
        let mut lp = self.lasso_loop.clone();
        // Primitive period of the loop.
        let n = lp.len();
        for p in 1..=n {
            if n % p == 0 && (0..n).all(|i| lp[i] == lp[i % p]) {
                lp.truncate(p);
                break;
            }
        }
        // Fold stem letters that equal the loop's last letter.
        while let Some(&last) = stem.last() {
            if last == *lp.last().unwrap() {
                stem.pop();
                lp.rotate_right(1);
            } else {
                break;
            }
        }
        LassoWord { alphabet: self.alphabet.clone(), stem, lasso_loop: lp }
    }
}

impl fmt::Display for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |f: &mut fmt::Formatter<'_>, mask: u32| -> fmt::Result {
            write!(f, "{{")?;
            let mut first = true;
            for (i, p) in self.alphabet.props.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    if !first {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                    first = false;
                }
            }
            write!(f, "}}")
        };
        for &m in &self.stem {
            show(f, m)?;
            write!(f, " ")?;
        }
        write!(f, "(")?;
        for (i, &m) in self.lasso_loop.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            show(f, m)?;
        }
        write!(f, ")^w")
    }
}

/// Parameter values for evaluation: the PROMPT–LTL bound `k` plus a map
/// for the PLTL variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Valuation {
    /// The single PROMPT–LTL parameter (bound for every `Fp`).
    pub prompt_bound: u64,
    /// Values of the PLTL variables.
    pub vars: BTreeMap<String, u64>,
}

impl Valuation {
    /// Valuation with only the prompt bound set.
    pub fn prompt(k: u64) -> Valuation {
        Valuation { prompt_bound: k, vars: BTreeMap::new() }
    }

    pub fn with_var(mut self, name: impl Into<String>, value: u64) -> Valuation {
        self.vars.insert(name.into(), value);
        self
    }

    pub fn var(&self, name: &str) -> Result<u64, FormulaError> {
        self.vars
            .get(name)
            .copied()
            .ok_or_else(|| FormulaError::UnboundVariable(name.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn masks_round_trip() {
        let alpha = Alphabet::new(["b", "a", "a"]);
        assert_eq!(alpha.props(), &["a".to_string(), "b".to_string()]);
        let m = alpha.mask_of(["b"]).unwrap();
        assert_eq!(alpha.set_of(m), BTreeSet::from(["b".to_string()]));
        assert!(alpha.mask_of(["zzz"]).is_err());
    }

    #[test]
    fn lasso_indexing_wraps() {
        let alpha = Alphabet::new(["a"]);
        let w = LassoWord::new(alpha, &[vec![]], &[vec!["a"], vec![]]).unwrap();
        // positions: 0 -> stem {}, 1 -> {a}, 2 -> {}, 3 -> {a}, ...
        assert_eq!(w.letter_at(0), 0);
        assert_eq!(w.letter_at(1), 1);
        assert_eq!(w.letter_at(2), 0);
        assert_eq!(w.letter_at(3), 1);
        assert_eq!(w.succ(2), 1);
        assert_eq!(w.advance(1, 4), 1);
        assert_eq!(w.advance(0, 2), 2);
    }

    #[test]
    fn erase_removes_color_bit() {
        let alpha = Alphabet::new(["a", "r"]);
        let w = LassoWord::new(alpha, &[], &[vec!["a", "r"], vec!["r"]]).unwrap();
        let e = w.erase("r");
        assert_eq!(e.alphabet().props(), &["a".to_string()]);
        assert_eq!(e.lasso_loop(), &[1, 0]);
    }

    #[test]
    fn canonicalize_minimizes() {
        let alpha = Alphabet::new(["a"]);
        // {a} ({} {a})^w  ==  ({a} {})^w
        let w = LassoWord::new(alpha.clone(), &[vec!["a"]], &[vec![], vec!["a"]]).unwrap();
        let c = w.canonicalize();
        assert_eq!(c.stem(), &[] as &[u32]);
        assert_eq!(c.lasso_loop(), &[1, 0]);
        // loop {}{} collapses to {}
        let w = LassoWord::new(alpha.clone(), &[vec![]], &[vec![], vec![]]).unwrap();
        let c = w.canonicalize();
        assert_eq!(c.stem(), &[] as &[u32]);
        assert_eq!(c.lasso_loop(), &[0]);
    }
}
