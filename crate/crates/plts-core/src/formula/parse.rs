//! Lexer and recursive-descent parser for the concrete formula syntax.
//!
//! Grammar (loosest binding first):
//! `->` (right) < `|` < `&` < `U`,`R` (right) < unary (`!`, `X`, `F`,
//! `G`, `Fp`, `F<=x`, `G<=y`) < atoms / `true` / `false` / parentheses.
//!
//! The parser accepts general negation and implication and emits
//! negation normal form. Negation cannot be pushed over `Fp`, `F<=` or
//! `G<=` (the fragment has no duals for them), and an implication
//! antecedent must therefore be Fp-free and parameter-free.

use super::{Formula, FormulaError};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    LParen,
    RParen,
    Next,
    Finally,
    Globally,
    PromptF,
    Until,
    Release,
    LeEq,
}

struct Lexer<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { text: text.as_bytes(), pos: 0 }
    }

    fn error(&self, msg: impl Into<String>) -> FormulaError {
        FormulaError::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn tokens(mut self) -> Result<Vec<(usize, Tok)>, FormulaError> {
        let mut out = Vec::new();
        while self.pos < self.text.len() {
            let start = self.pos;
            let c = self.text[self.pos];
            match c {
                b' ' | b'\t' | b'\r' | b'\n' => {
                    self.pos += 1;
                    continue;
                }
                b'(' => {
                    self.pos += 1;
                    out.push((start, Tok::LParen));
                }
                b')' => {
                    self.pos += 1;
                    out.push((start, Tok::RParen));
                }
                b'!' => {
                    self.pos += 1;
                    out.push((start, Tok::Not));
                }
                b'&' => {
                    self.pos += 1;
                    out.push((start, Tok::And));
                }
                b'|' => {
                    self.pos += 1;
                    out.push((start, Tok::Or));
                }
                b'-' => {
                    if self.text.get(self.pos + 1) == Some(&b'>') {
                        self.pos += 2;
                        out.push((start, Tok::Implies));
                    } else {
                        return Err(self.error("expected `->`"));
                    }
                }
                b'<' => {
                    if self.text.get(self.pos + 1) == Some(&b'=') {
                        self.pos += 2;
                        out.push((start, Tok::LeEq));
                    } else {
                        return Err(self.error("expected `<=`"));
                    }
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    let mut end = self.pos + 1;
                    while end < self.text.len()
                        && (self.text[end].is_ascii_alphanumeric() || self.text[end] == b'_')
                    {
                        end += 1;
                    }
                    let word = std::str::from_utf8(&self.text[self.pos..end]).unwrap();
                    self.pos = end;
                    let tok = match word {
                        "true" => Tok::True,
                        "false" => Tok::False,
                        "X" => Tok::Next,
                        "F" => Tok::Finally,
                        "G" => Tok::Globally,
                        "Fp" => Tok::PromptF,
                        "U" => Tok::Until,
                        "R" => Tok::Release,
                        _ => Tok::Ident(word.to_string()),
                    };
                    out.push((start, tok));
                }
                other => {
                    return Err(self.error(format!("unexpected character `{}`", other as char)));
                }
            }
        }
        Ok(out)
    }
}

/// Pre-normalization AST: negation and implication still present.
#[derive(Debug, Clone)]
enum Raw {
    True,
    False,
    Atom(String),
    Not(Box<Raw>),
    And(Box<Raw>, Box<Raw>),
    Or(Box<Raw>, Box<Raw>),
    Implies(Box<Raw>, Box<Raw>),
    Next(Box<Raw>),
    Until(Box<Raw>, Box<Raw>),
    Release(Box<Raw>, Box<Raw>),
    Finally(Box<Raw>),
    Globally(Box<Raw>),
    PromptF(Box<Raw>),
    BoundedF(String, Box<Raw>),
    BoundedG(String, Box<Raw>),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    idx: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.idx).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|(_, t)| t.clone());
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), FormulaError> {
        if self.peek() == Some(&t) {
            self.idx += 1;
            Ok(())
        } else {
            Err(FormulaError::Syntax { pos: self.pos(), msg: format!("expected {what}") })
        }
    }

    fn implies(&mut self) -> Result<Raw, FormulaError> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Implies) {
            self.idx += 1;
            let rhs = self.implies()?;
            Ok(Raw::Implies(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Raw, FormulaError> {
        let lhs = self.and()?;
        if self.peek() == Some(&Tok::Or) {
            self.idx += 1;
            let rhs = self.or()?;
            Ok(Raw::Or(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn and(&mut self) -> Result<Raw, FormulaError> {
        let lhs = self.until_release()?;
        if self.peek() == Some(&Tok::And) {
            self.idx += 1;
            let rhs = self.and()?;
            Ok(Raw::And(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn until_release(&mut self) -> Result<Raw, FormulaError> {
        let lhs = self.unary()?;
        match self.peek() {
            Some(Tok::Until) => {
                self.idx += 1;
                let rhs = self.until_release()?;
                Ok(Raw::Until(Box::new(lhs), Box::new(rhs)))
            }
            Some(Tok::Release) => {
                self.idx += 1;
                let rhs = self.until_release()?;
                Ok(Raw::Release(Box::new(lhs), Box::new(rhs)))
            }
            _ => Ok(lhs),
        }
    }

    fn bound_var(&mut self) -> Result<String, FormulaError> {
        match self.bump() {
            Some(Tok::Ident(x)) => Ok(x),
            _ => Err(FormulaError::Syntax {
                pos: self.pos(),
                msg: "expected variable name after `<=`".to_string(),
            }),
        }
    }

    fn unary(&mut self) -> Result<Raw, FormulaError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.idx += 1;
                Ok(Raw::Not(Box::new(self.unary()?)))
            }
            Some(Tok::Next) => {
                self.idx += 1;
                Ok(Raw::Next(Box::new(self.unary()?)))
            }
            Some(Tok::PromptF) => {
                self.idx += 1;
                Ok(Raw::PromptF(Box::new(self.unary()?)))
            }
            Some(Tok::Finally) => {
                self.idx += 1;
                if self.peek() == Some(&Tok::LeEq) {
                    self.idx += 1;
                    let x = self.bound_var()?;
                    Ok(Raw::BoundedF(x, Box::new(self.unary()?)))
                } else {
                    Ok(Raw::Finally(Box::new(self.unary()?)))
                }
            }
            Some(Tok::Globally) => {
                self.idx += 1;
                if self.peek() == Some(&Tok::LeEq) {
                    self.idx += 1;
                    let y = self.bound_var()?;
                    Ok(Raw::BoundedG(y, Box::new(self.unary()?)))
                } else {
                    Ok(Raw::Globally(Box::new(self.unary()?)))
                }
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Raw, FormulaError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Ident(a)) => Ok(Raw::Atom(a)),
            Some(Tok::True) => Ok(Raw::True),
            Some(Tok::False) => Ok(Raw::False),
            Some(Tok::LParen) => {
                let inner = self.implies()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            other => Err(FormulaError::Syntax {
                pos,
                msg: match other {
                    Some(t) => format!("unexpected token {t:?}"),
                    None => "unexpected end of input".to_string(),
                },
            }),
        }
    }
}

/// Push negations to the atoms and desugar `F`/`G`/`->`.
fn normalize(raw: &Raw, negated: bool) -> Result<Formula, FormulaError> {
    Ok(match raw {
        Raw::True => {
            if negated {
                Formula::False
            } else {
                Formula::True
            }
        }
        Raw::False => {
            if negated {
                Formula::True
            } else {
                Formula::False
            }
        }
        Raw::Atom(a) => {
            if negated {
                Formula::NegAtom(a.clone())
            } else {
                Formula::Atom(a.clone())
            }
        }
        Raw::Not(f) => normalize(f, !negated)?,
        Raw::And(l, r) => {
            let (l, r) = (normalize(l, negated)?, normalize(r, negated)?);
            if negated {
                Formula::or(l, r)
            } else {
                Formula::and(l, r)
            }
        }
        Raw::Or(l, r) => {
            let (l, r) = (normalize(l, negated)?, normalize(r, negated)?);
            if negated {
                Formula::and(l, r)
            } else {
                Formula::or(l, r)
            }
        }
        Raw::Implies(l, r) => {
            // φ → ψ is sugar for ¬φ ∨ ψ; the antecedent must be negatable
            // within the fragment.
            let neg_l = normalize(l, !negated).map_err(|e| match e {
                FormulaError::NegatedParameterized(_) => FormulaError::NonNegatableAntecedent,
                other => other,
            })?;
            let r = normalize(r, negated)?;
            if negated {
                Formula::and(neg_l, r)
            } else {
                Formula::or(neg_l, r)
            }
        }
        Raw::Next(f) => Formula::next(normalize(f, negated)?),
        Raw::Until(l, r) => {
            let (l, r) = (normalize(l, negated)?, normalize(r, negated)?);
            if negated {
                Formula::release(l, r)
            } else {
                Formula::until(l, r)
            }
        }
        Raw::Release(l, r) => {
            let (l, r) = (normalize(l, negated)?, normalize(r, negated)?);
            if negated {
                Formula::until(l, r)
            } else {
                Formula::release(l, r)
            }
        }
        Raw::Finally(f) => {
            let f = normalize(f, negated)?;
            if negated {
                Formula::globally(f)
            } else {
                Formula::finally(f)
            }
        }
        Raw::Globally(f) => {
            let f = normalize(f, negated)?;
            if negated {
                Formula::finally(f)
            } else {
                Formula::globally(f)
            }
        }
        Raw::PromptF(f) => {
            if negated {
                return Err(FormulaError::NegatedParameterized("Fp"));
            }
            Formula::prompt_f(normalize(f, false)?)
        }
        Raw::BoundedF(x, f) => {
            if negated {
                return Err(FormulaError::NegatedParameterized("F<="));
            }
            Formula::bounded_f(x.clone(), normalize(f, false)?)
        }
        Raw::BoundedG(y, f) => {
            if negated {
                return Err(FormulaError::NegatedParameterized("G<="));
            }
            Formula::bounded_g(y.clone(), normalize(f, false)?)
        }
    })
}

/// Parse a formula from concrete syntax into negation normal form.
pub fn parse(text: &str) -> Result<Formula, FormulaError> {
    let toks = Lexer::new(text).tokens()?;
    let mut parser = Parser { toks, idx: 0, end: text.len() };
    let raw = parser.implies()?;
    if parser.idx != parser.toks.len() {
        return Err(FormulaError::Syntax {
            pos: parser.pos(),
            msg: "trailing input after formula".to_string(),
        });
    }
    normalize(&raw, false)
}
