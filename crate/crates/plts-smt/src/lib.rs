//! Finite-domain solver for an SMT-LIB v2 scripting subset.
//!
//! The engine decides quantifier-free assertions over uninterpreted
//! functions applied at concrete integer points. Points must carry
//! asserted range bounds (top-level conjuncts such as `(<= 1 (f 2 3))`
//! and `(<= (f 2 3) 5)`); bounded values are bit-blasted and handed to
//! an embedded CDCL SAT solver. Supported commands: `set-logic`,
//! `set-option`, `set-info`, `declare-fun`, `declare-const`,
//! `define-fun` (expanded as a macro), `assert`, `check-sat`,
//! `get-value`, `echo`, `reset`, and `exit`. Terms may use the core
//! boolean connectives, `=`/`distinct`, integer comparisons, `ite`, and
//! constant-folded `+`/`-`/`*`.

mod compile;
mod sexp;

pub use sexp::{parse_all, print_sexp, Interner, ParseError, Sexp, SexpStream};

use std::collections::HashMap;

use compile::{Compiler, Ctx};

#[derive(Debug, thiserror::Error)]
pub enum SmtError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum Sort {
    Bool,
    Int,
}

pub(crate) struct FunSig {
    arity: usize,
    ret: Sort,
}

struct MacroDef {
    params: Vec<u32>,
    body: Sexp,
}

/// A ground occurrence of a declared function: the symbol plus concrete
/// integer arguments (empty for constants).
pub(crate) type PointKey = (u32, Vec<i64>);

pub(crate) struct Model {
    ints: HashMap<PointKey, i64>,
    bools: HashMap<PointKey, bool>,
}

/// Interned ids for every operator, sort, and command name the engine
/// recognizes.
pub(crate) struct Syms {
    pub true_: u32,
    pub false_: u32,
    pub op_not: u32,
    pub op_and: u32,
    pub op_or: u32,
    pub op_imp: u32,
    pub op_xor: u32,
    pub op_ite: u32,
    pub op_eq: u32,
    pub op_distinct: u32,
    pub op_le: u32,
    pub op_lt: u32,
    pub op_ge: u32,
    pub op_gt: u32,
    pub op_plus: u32,
    pub op_minus: u32,
    pub op_times: u32,
    sort_int: u32,
    sort_bool: u32,
    cmd_set_logic: u32,
    cmd_set_option: u32,
    cmd_set_info: u32,
    cmd_declare_fun: u32,
    cmd_declare_const: u32,
    cmd_define_fun: u32,
    cmd_assert: u32,
    cmd_check_sat: u32,
    cmd_get_value: u32,
    cmd_exit: u32,
    cmd_echo: u32,
    cmd_reset: u32,
    opt_print_success: u32,
}

impl Syms {
    fn new(i: &mut Interner) -> Self {
        Syms {
            true_: i.intern("true"),
            false_: i.intern("false"),
            op_not: i.intern("not"),
            op_and: i.intern("and"),
            op_or: i.intern("or"),
            op_imp: i.intern("=>"),
            op_xor: i.intern("xor"),
            op_ite: i.intern("ite"),
            op_eq: i.intern("="),
            op_distinct: i.intern("distinct"),
            op_le: i.intern("<="),
            op_lt: i.intern("<"),
            op_ge: i.intern(">="),
            op_gt: i.intern(">"),
            op_plus: i.intern("+"),
            op_minus: i.intern("-"),
            op_times: i.intern("*"),
            sort_int: i.intern("Int"),
            sort_bool: i.intern("Bool"),
            cmd_set_logic: i.intern("set-logic"),
            cmd_set_option: i.intern("set-option"),
            cmd_set_info: i.intern("set-info"),
            cmd_declare_fun: i.intern("declare-fun"),
            cmd_declare_const: i.intern("declare-const"),
            cmd_define_fun: i.intern("define-fun"),
            cmd_assert: i.intern("assert"),
            cmd_check_sat: i.intern("check-sat"),
            cmd_get_value: i.intern("get-value"),
            cmd_exit: i.intern("exit"),
            cmd_echo: i.intern("echo"),
            cmd_reset: i.intern("reset"),
            opt_print_success: i.intern(":print-success"),
        }
    }
}

enum Flow {
    Continue,
    Exit,
}

pub struct Engine {
    interner: Interner,
    syms: Syms,
    funs: HashMap<u32, FunSig>,
    macros: HashMap<u32, MacroDef>,
    pending: Vec<Sexp>,
    bounds: HashMap<PointKey, (Option<i64>, Option<i64>)>,
    comp: Option<Compiler>,
    model: Option<Model>,
    print_success: bool,
}

impl Default for Engine {
    fn default() -> Self {
        Self::new()
    }
}

impl Engine {
    pub fn new() -> Self {
        let mut interner = Interner::default();
        let syms = Syms::new(&mut interner);
        Engine {
            interner,
            syms,
            funs: HashMap::new(),
            macros: HashMap::new(),
            pending: Vec::new(),
            bounds: HashMap::new(),
            comp: None,
            model: None,
            print_success: false,
        }
    }

    fn reset(&mut self) {
        self.funs.clear();
        self.macros.clear();
        self.pending.clear();
        self.bounds.clear();
        self.comp = None;
        self.model = None;
        self.print_success = false;
    }

    // ---- macro expansion and folding --------------------------------

    fn subst(body: &Sexp, map: &HashMap<u32, Sexp>) -> Sexp {
        match body {
            Sexp::Sym(s) => map.get(s).cloned().unwrap_or_else(|| body.clone()),
            Sexp::List(items) => Sexp::List(items.iter().map(|i| Self::subst(i, map)).collect()),
            _ => body.clone(),
        }
    }

    fn fold_node(&self, items: Vec<Sexp>) -> Sexp {
        if let Some(Sexp::Sym(h)) = items.first() {
            let h = *h;
            let nums: Option<Vec<i64>> = items[1..]
                .iter()
                .map(|a| if let Sexp::Num(n) = a { Some(*n) } else { None })
                .collect();
            if let Some(ns) = nums {
                if !ns.is_empty() {
                    if h == self.syms.op_plus {
                        let mut acc = 0i64;
                        for n in &ns {
                            acc = match acc.checked_add(*n) {
                                Some(v) => v,
                                None => return Sexp::List(items),
                            };
                        }
                        return Sexp::Num(acc);
                    }
                    if h == self.syms.op_minus {
                        if ns.len() == 1 {
                            return Sexp::Num(-ns[0]);
                        }
                        let mut acc = ns[0];
                        for n in &ns[1..] {
                            acc = match acc.checked_sub(*n) {
                                Some(v) => v,
                                None => return Sexp::List(items),
                            };
                        }
                        return Sexp::Num(acc);
                    }
                    if h == self.syms.op_times {
                        let mut acc = 1i64;
                        for n in &ns {
                            acc = match acc.checked_mul(*n) {
                                Some(v) => v,
                                None => return Sexp::List(items),
                            };
                        }
                        return Sexp::Num(acc);
                    }
                }
            }
        }
        Sexp::List(items)
    }

    /// Expands `define-fun` macros and folds constant arithmetic.
    fn expand(&self, t: &Sexp) -> Result<Sexp, String> {
        match t {
            Sexp::Sym(s) => {
                if let Some(m) = self.macros.get(s) {
                    if !m.params.is_empty() {
                        return Err(format!(
                            "{} expects {} arguments",
                            self.interner.name(*s),
                            m.params.len()
                        ));
                    }
                    return Ok(m.body.clone());
                }
                Ok(t.clone())
            }
            Sexp::List(items) => {
                if let Some(Sexp::Sym(h)) = items.first() {
                    if let Some(m) = self.macros.get(h) {
                        if m.params.len() != items.len() - 1 {
                            return Err(format!(
                                "{} expects {} arguments, got {}",
                                self.interner.name(*h),
                                m.params.len(),
                                items.len() - 1
                            ));
                        }
                        let mut map = HashMap::new();
                        for (p, a) in m.params.iter().zip(&items[1..]) {
                            map.insert(*p, self.expand(a)?);
                        }
                        let substituted = Self::subst(&m.body, &map);
                        return self.refold(substituted);
                    }
                }
                let expanded = items
                    .iter()
                    .map(|i| self.expand(i))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(self.fold_node(expanded))
            }
            _ => Ok(t.clone()),
        }
    }

    /// Re-folds arithmetic bottom-up after substitution (macro bodies
    /// contain no further macro calls; they were expanded at definition
    /// time).
    fn refold(&self, t: Sexp) -> Result<Sexp, String> {
        match t {
            Sexp::List(items) => {
                let folded = items
                    .into_iter()
                    .map(|i| self.refold(i))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(self.fold_node(folded))
            }
            _ => Ok(t),
        }
    }

    // ---- range bounds ------------------------------------------------

    fn direct_point(&self, t: &Sexp) -> Option<PointKey> {
        match t {
            Sexp::Sym(s) => {
                let sig = self.funs.get(s)?;
                (sig.arity == 0 && sig.ret == Sort::Int).then(|| (*s, Vec::new()))
            }
            Sexp::List(items) => {
                let Some(Sexp::Sym(h)) = items.first() else { return None };
                let sig = self.funs.get(h)?;
                if sig.ret != Sort::Int || sig.arity != items.len() - 1 {
                    return None;
                }
                let vals: Option<Vec<i64>> = items[1..]
                    .iter()
                    .map(|a| if let Sexp::Num(n) = a { Some(*n) } else { None })
                    .collect();
                vals.map(|v| (*h, v))
            }
            _ => None,
        }
    }

    fn note_lo(&mut self, key: PointKey, v: i64) {
        let e = self.bounds.entry(key).or_insert((None, None));
        e.0 = Some(e.0.map_or(v, |old| old.max(v)));
    }

    fn note_hi(&mut self, key: PointKey, v: i64) {
        let e = self.bounds.entry(key).or_insert((None, None));
        e.1 = Some(e.1.map_or(v, |old| old.min(v)));
    }

    /// Harvests range bounds from the top-level conjuncts of an
    /// assertion. The conjuncts are still compiled as ordinary
    /// constraints; this pass only fixes the bit width of each point.
    fn scan_bounds(&mut self, t: &Sexp) {
        let mut stack = vec![t.clone()];
        while let Some(c) = stack.pop() {
            let Sexp::List(items) = &c else { continue };
            let Some(Sexp::Sym(h)) = items.first() else { continue };
            let h = *h;
            if h == self.syms.op_and {
                stack.extend(items[1..].iter().cloned());
                continue;
            }
            if items.len() != 3 {
                continue;
            }
            let (a, b) = (&items[1], &items[2]);
            let s = &self.syms;
            let (le, lt, ge, gt, eq) = (s.op_le, s.op_lt, s.op_ge, s.op_gt, s.op_eq);
            if let (Sexp::Num(n), Some(key)) = (a, self.direct_point(b)) {
                let n = *n;
                if h == le {
                    self.note_lo(key, n);
                } else if h == lt {
                    self.note_lo(key, n.saturating_add(1));
                } else if h == ge {
                    self.note_hi(key, n);
                } else if h == gt {
                    self.note_hi(key, n.saturating_sub(1));
                } else if h == eq {
                    self.note_lo(key.clone(), n);
                    self.note_hi(key, n);
                }
            } else if let (Some(key), Sexp::Num(n)) = (self.direct_point(a), b) {
                let n = *n;
                if h == le {
                    self.note_hi(key, n);
                } else if h == lt {
                    self.note_hi(key, n.saturating_sub(1));
                } else if h == ge {
                    self.note_lo(key, n);
                } else if h == gt {
                    self.note_lo(key, n.saturating_add(1));
                } else if h == eq {
                    self.note_lo(key.clone(), n);
                    self.note_hi(key, n);
                }
            }
        }
    }

    // ---- evaluation under the current model ---------------------------

    fn eval(&self, t: &Sexp) -> Result<EvalVal, String> {
        let model = self.model.as_ref().expect("eval requires a model");
        match t {
            Sexp::Num(n) => Ok(EvalVal::I(*n)),
            Sexp::Str(_) => Err("cannot evaluate a string term".to_string()),
            Sexp::Sym(s) => {
                if *s == self.syms.true_ {
                    return Ok(EvalVal::B(true));
                }
                if *s == self.syms.false_ {
                    return Ok(EvalVal::B(false));
                }
                let sig = self
                    .funs
                    .get(s)
                    .ok_or_else(|| format!("undeclared symbol {}", self.interner.name(*s)))?;
                if sig.arity != 0 {
                    return Err(format!(
                        "{} is not a constant",
                        self.interner.name(*s)
                    ));
                }
                Ok(self.point_value(model, (*s, Vec::new()), sig.ret))
            }
            Sexp::List(items) => {
                let Some(Sexp::Sym(h)) = items.first() else {
                    return Err("malformed term".to_string());
                };
                let h = *h;
                let s = &self.syms;
                let args = &items[1..];
                let bools = |this: &Self| -> Result<Vec<bool>, String> {
                    args.iter()
                        .map(|a| match this.eval(a)? {
                            EvalVal::B(b) => Ok(b),
                            EvalVal::I(_) => Err("expected a boolean argument".to_string()),
                        })
                        .collect()
                };
                let ints = |this: &Self| -> Result<Vec<i64>, String> {
                    args.iter()
                        .map(|a| match this.eval(a)? {
                            EvalVal::I(n) => Ok(n),
                            EvalVal::B(_) => Err("expected an integer argument".to_string()),
                        })
                        .collect()
                };
                if h == s.op_not {
                    let v = bools(self)?;
                    return Ok(EvalVal::B(!v[0]));
                }
                if h == s.op_and {
                    return Ok(EvalVal::B(bools(self)?.iter().all(|&b| b)));
                }
                if h == s.op_or {
                    return Ok(EvalVal::B(bools(self)?.iter().any(|&b| b)));
                }
                if h == s.op_imp {
                    let v = bools(self)?;
                    let mut acc = *v.last().unwrap();
                    for &a in v[..v.len() - 1].iter().rev() {
                        acc = !a || acc;
                    }
                    return Ok(EvalVal::B(acc));
                }
                if h == s.op_xor {
                    return Ok(EvalVal::B(
                        bools(self)?.iter().fold(false, |acc, &b| acc ^ b),
                    ));
                }
                if h == s.op_ite {
                    let EvalVal::B(c) = self.eval(&args[0])? else {
                        return Err("ite condition must be boolean".to_string());
                    };
                    return self.eval(if c { &args[1] } else { &args[2] });
                }
                if h == s.op_eq {
                    let first = self.eval(&args[0])?;
                    for a in &args[1..] {
                        if self.eval(a)? != first {
                            return Ok(EvalVal::B(false));
                        }
                    }
                    return Ok(EvalVal::B(true));
                }
                if h == s.op_distinct {
                    let v = ints(self)?;
                    for i in 0..v.len() {
                        for j in i + 1..v.len() {
                            if v[i] == v[j] {
                                return Ok(EvalVal::B(false));
                            }
                        }
                    }
                    return Ok(EvalVal::B(true));
                }
                if h == s.op_le || h == s.op_lt || h == s.op_ge || h == s.op_gt {
                    let v = ints(self)?;
                    let ok = v.windows(2).all(|w| {
                        if h == s.op_le {
                            w[0] <= w[1]
                        } else if h == s.op_lt {
                            w[0] < w[1]
                        } else if h == s.op_ge {
                            w[0] >= w[1]
                        } else {
                            w[0] > w[1]
                        }
                    });
                    return Ok(EvalVal::B(ok));
                }
                if h == s.op_plus {
                    return Ok(EvalVal::I(ints(self)?.iter().sum()));
                }
                if h == s.op_minus {
                    let v = ints(self)?;
                    if v.len() == 1 {
                        return Ok(EvalVal::I(-v[0]));
                    }
                    return Ok(EvalVal::I(v[1..].iter().fold(v[0], |a, b| a - b)));
                }
                if h == s.op_times {
                    return Ok(EvalVal::I(ints(self)?.iter().product()));
                }
                let sig = self
                    .funs
                    .get(&h)
                    .ok_or_else(|| format!("undeclared function {}", self.interner.name(h)))?;
                let vals = ints(self)?;
                if vals.len() != sig.arity {
                    return Err(format!(
                        "{} applied to {} arguments, expected {}",
                        self.interner.name(h),
                        vals.len(),
                        sig.arity
                    ));
                }
                Ok(self.point_value(model, (h, vals), sig.ret))
            }
        }
    }

    /// Model value of a point; points the solver never saw default to
    /// their lower bound (or 0/false).
    fn point_value(&self, model: &Model, key: PointKey, ret: Sort) -> EvalVal {
        match ret {
            Sort::Int => {
                if let Some(&v) = model.ints.get(&key) {
                    EvalVal::I(v)
                } else {
                    let lo = self.bounds.get(&key).and_then(|b| b.0).unwrap_or(0);
                    EvalVal::I(lo)
                }
            }
            Sort::Bool => EvalVal::B(model.bools.get(&key).copied().unwrap_or(false)),
        }
    }

    // ---- commands ------------------------------------------------------

    fn parse_sort(&self, t: &Sexp) -> Result<Sort, String> {
        match t {
            Sexp::Sym(s) if *s == self.syms.sort_int => Ok(Sort::Int),
            Sexp::Sym(s) if *s == self.syms.sort_bool => Ok(Sort::Bool),
            _ => Err("unsupported sort (only Int and Bool)".to_string()),
        }
    }

    fn declare(&mut self, name: u32, arity: usize, ret: Sort) -> Result<(), String> {
        if self.funs.contains_key(&name) || self.macros.contains_key(&name) {
            return Err(format!("{} is already declared", self.interner.name(name)));
        }
        self.funs.insert(name, FunSig { arity, ret });
        Ok(())
    }

    fn check_sat(&mut self) -> &'static str {
        let mut comp = self.comp.take().unwrap_or_else(Compiler::new);
        {
            let ctx = Ctx {
                syms: &self.syms,
                funs: &self.funs,
                bounds: &self.bounds,
                interner: &self.interner,
            };
            for a in std::mem::take(&mut self.pending) {
                comp.assert_term(&a, &ctx);
            }
        }
        let answer = if comp.failed.is_some() {
            self.model = None;
            "unknown"
        } else {
            match comp.solve() {
                Ok(true) => {
                    self.model = Some(comp.extract_model());
                    "sat"
                }
                Ok(false) => {
                    self.model = None;
                    "unsat"
                }
                Err(_) => {
                    self.model = None;
                    "unknown"
                }
            }
        };
        self.comp = Some(comp);
        answer
    }

    fn get_value(&mut self, terms: &[Sexp]) -> Result<String, String> {
        if self.model.is_none() {
            return Err("model is not available".to_string());
        }
        let mut out = String::from("(");
        for (i, t) in terms.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let expanded = self.expand(t)?;
            let val = self.eval(&expanded)?;
            out.push('(');
            print_sexp(t, &self.interner, &mut out);
            out.push(' ');
            match val {
                EvalVal::B(true) => out.push_str("true"),
                EvalVal::B(false) => out.push_str("false"),
                EvalVal::I(n) => print_sexp(&Sexp::Num(n), &self.interner, &mut out),
            }
            out.push(')');
        }
        out.push(')');
        Ok(out)
    }

    fn exec(&mut self, cmd: &Sexp, out: &mut String) -> Flow {
        let result = self.exec_inner(cmd, out);
        match result {
            Ok(flow) => flow,
            Err(msg) => {
                out.push_str("(error \"");
                out.push_str(&msg.replace('"', "'"));
                out.push_str("\")\n");
                Flow::Continue
            }
        }
    }

    fn exec_inner(&mut self, cmd: &Sexp, out: &mut String) -> Result<Flow, String> {
        let Sexp::List(items) = cmd else {
            return Err("commands must be parenthesized".to_string());
        };
        let Some(Sexp::Sym(h)) = items.first() else {
            return Err("malformed command".to_string());
        };
        let h = *h;
        let s = &self.syms;
        let ok = |this: &Self, out: &mut String| {
            if this.print_success {
                out.push_str("success\n");
            }
        };
        if h == s.cmd_set_logic || h == s.cmd_set_info {
            ok(self, out);
            return Ok(Flow::Continue);
        }
        if h == s.cmd_set_option {
            if items.len() == 3 {
                if let (Sexp::Sym(k), Sexp::Sym(v)) = (&items[1], &items[2]) {
                    if *k == self.syms.opt_print_success {
                        self.print_success = *v == self.syms.true_;
                    }
                }
            }
            ok(self, out);
            return Ok(Flow::Continue);
        }
        if h == s.cmd_declare_fun {
            let [_, Sexp::Sym(name), Sexp::List(arg_sorts), ret] = items.as_slice() else {
                return Err("malformed declare-fun".to_string());
            };
            for a in arg_sorts {
                if self.parse_sort(a)? != Sort::Int {
                    return Err("only integer argument sorts are supported".to_string());
                }
            }
            let ret = self.parse_sort(ret)?;
            self.declare(*name, arg_sorts.len(), ret)?;
            ok(self, out);
            return Ok(Flow::Continue);
        }
        if h == s.cmd_declare_const {
            let [_, Sexp::Sym(name), ret] = items.as_slice() else {
                return Err("malformed declare-const".to_string());
            };
            let ret = self.parse_sort(ret)?;
            self.declare(*name, 0, ret)?;
            ok(self, out);
            return Ok(Flow::Continue);
        }
        if h == s.cmd_define_fun {
            let [_, Sexp::Sym(name), Sexp::List(params), _ret, body] = items.as_slice() else {
                return Err("malformed define-fun".to_string());
            };
            if self.funs.contains_key(name) || self.macros.contains_key(name) {
                return Err(format!(
                    "{} is already declared",
                    self.interner.name(*name)
                ));
            }
            let mut ids = Vec::with_capacity(params.len());
            for p in params {
                let Sexp::List(pair) = p else {
                    return Err("malformed parameter list".to_string());
                };
                let [Sexp::Sym(pname), psort] = pair.as_slice() else {
                    return Err("malformed parameter list".to_string());
                };
                self.parse_sort(psort)?;
                ids.push(*pname);
            }
            let body = self.expand(body)?;
            self.macros.insert(*name, MacroDef { params: ids, body });
            ok(self, out);
            return Ok(Flow::Continue);
        }
        if h == s.cmd_assert {
            let [_, term] = items.as_slice() else {
                return Err("assert expects one term".to_string());
            };
            let expanded = self.expand(term)?;
            self.scan_bounds(&expanded);
            if let Some(comp) = self.comp.as_mut() {
                // A solver already exists: compile immediately.
                let ctx = Ctx {
                    syms: &self.syms,
                    funs: &self.funs,
                    bounds: &self.bounds,
                    interner: &self.interner,
                };
                comp.assert_term(&expanded, &ctx);
            } else {
                self.pending.push(expanded);
            }
            ok(self, out);
            return Ok(Flow::Continue);
        }
        if h == s.cmd_check_sat {
            let answer = self.check_sat();
            out.push_str(answer);
            out.push('\n');
            return Ok(Flow::Continue);
        }
        if h == s.cmd_get_value {
            let [_, Sexp::List(terms)] = items.as_slice() else {
                return Err("malformed get-value".to_string());
            };
            let line = self.get_value(terms)?;
            out.push_str(&line);
            out.push('\n');
            return Ok(Flow::Continue);
        }
        if h == s.cmd_echo {
            if let Some(Sexp::Str(text)) = items.get(1) {
                out.push_str(text);
                out.push('\n');
            }
            return Ok(Flow::Continue);
        }
        if h == s.cmd_reset {
            self.reset();
            return Ok(Flow::Continue);
        }
        if h == s.cmd_exit {
            return Ok(Flow::Exit);
        }
        Err(format!(
            "unsupported command: {}",
            self.interner.name(h)
        ))
    }
}

#[derive(PartialEq, Eq, Clone, Copy)]
enum EvalVal {
    I(i64),
    B(bool),
}

/// Runs a full script and returns everything the solver printed.
pub fn run_script(input: &str) -> Result<String, SmtError> {
    let mut engine = Engine::new();
    let mut out = String::new();
    let mut stream = SexpStream::new(input);
    while let Some(cmd) = stream.next(&mut engine.interner)? {
        if let Flow::Exit = engine.exec(&cmd, &mut out) {
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(script: &str) -> String {
        run_script(script).expect("script should parse")
    }

    #[test]
    fn constant_assertions() {
        assert_eq!(run("(assert true)(check-sat)"), "sat\n");
        assert_eq!(run("(assert false)(check-sat)"), "unsat\n");
        assert_eq!(run("(set-logic UFLIA)(check-sat)"), "sat\n");
    }

    #[test]
    fn bounded_constant_with_value() {
        let out = run(
            "(declare-const x Int)\
             (assert (and (<= 1 x) (<= x 3)))\
             (assert (> x 2))\
             (check-sat)(get-value (x))",
        );
        assert_eq!(out, "sat\n((x 3))\n");
    }

    #[test]
    fn unbounded_point_is_unknown() {
        let out = run("(declare-const x Int)(assert (<= 1 x))(assert (= x x))(check-sat)");
        assert_eq!(out, "unknown\n");
    }

    #[test]
    fn contradictory_range_is_unsat() {
        let out = run(
            "(declare-const x Int)\
             (assert (and (<= 4 x) (<= x 2)))\
             (check-sat)",
        );
        assert_eq!(out, "unsat\n");
    }

    #[test]
    fn function_points_are_independent() {
        let out = run(
            "(declare-fun f (Int) Int)\
             (assert (and (<= 1 (f 0)) (<= (f 0) 2) (<= 1 (f 1)) (<= (f 1) 2)))\
             (assert (not (= (f 0) (f 1))))\
             (assert (= (f 0) 2))\
             (check-sat)(get-value ((f 0) (f 1)))",
        );
        assert_eq!(out, "sat\n(((f 0) 2) ((f 1) 1))\n");
    }

    #[test]
    fn nested_application_grounds_over_inner_range() {
        let script = "(declare-fun f (Int) Int)\
             (declare-fun b (Int) Bool)\
             (assert (and (<= 1 (f 1)) (<= (f 1) 2)))\
             (assert (b 1))\
             (assert (not (b 2)))\
             (assert (b (f 1)))\
             (check-sat)(get-value ((f 1)))";
        assert_eq!(run(script), "sat\n(((f 1) 1))\n");
        let unsat = format!("{}{}", script.replace("(check-sat)(get-value ((f 1)))", ""), "(assert (= (f 1) 2))(check-sat)");
        assert_eq!(run(&unsat), "unsat\n");
    }

    #[test]
    fn pigeonhole_two_values_three_slots() {
        let out = run(
            "(declare-const a Int)(declare-const b Int)(declare-const c Int)\
             (assert (and (<= 1 a) (<= a 2) (<= 1 b) (<= b 2) (<= 1 c) (<= c 2)))\
             (assert (distinct a b c))\
             (check-sat)",
        );
        assert_eq!(out, "unsat\n");
    }

    #[test]
    fn strict_order_cycle_is_unsat() {
        let out = run(
            "(declare-const x Int)(declare-const y Int)(declare-const z Int)\
             (assert (and (<= 0 x) (<= x 7) (<= 0 y) (<= y 7) (<= 0 z) (<= z 7)))\
             (assert (< x y))(assert (< y z))(assert (< z x))\
             (check-sat)",
        );
        assert_eq!(out, "unsat\n");
    }

    #[test]
    fn define_fun_expands_and_folds() {
        let out = run(
            "(declare-const x Int)\
             (define-fun lim () Int (* 2 3))\
             (define-fun shifted ((a Int)) Bool (<= a (- lim 1)))\
             (assert (and (<= 0 x) (<= x 9)))\
             (assert (shifted x))\
             (assert (>= x 5))\
             (check-sat)(get-value (x))",
        );
        assert_eq!(out, "sat\n((x 5))\n");
    }

    #[test]
    fn shared_subterm_in_both_polarities() {
        let out = run(
            "(declare-const p Bool)(declare-const q Bool)\
             (declare-const r Bool)(declare-const s Bool)\
             (assert p)(assert q)(assert (not r))(assert (not s))\
             (assert (= (and p q) (or r s)))\
             (check-sat)",
        );
        assert_eq!(out, "unsat\n");
    }

    #[test]
    fn implication_chains_distribute() {
        let out = run(
            "(declare-fun d (Int Int) Int)\
             (declare-fun lb (Int Int) Bool)\
             (assert (and (<= 1 (d 1 0)) (<= (d 1 0) 2)))\
             (assert (lb 0 1))\
             (assert (=> (lb 0 1) (and (lb 1 (d 1 0)) (lb 2 (d 1 0)))))\
             (assert (=> (lb 1 1) false))\
             (assert (=> (lb 1 2) (not (lb 2 2))))\
             (check-sat)",
        );
        // d(1,0)=1 forces lb(1,1), which is forbidden; d(1,0)=2 forces
        // both lb(2,2) and (via lb(1,2)) its negation.
        assert_eq!(out, "unsat\n");
    }

    #[test]
    fn annotation_style_progress_chain() {
        // A two-state loop with a strictly increasing counter bounded by 3
        // has no consistent annotation.
        let strict = "(declare-fun n (Int) Int)\
             (assert (and (<= 0 (n 1)) (<= (n 1) 3) (<= 0 (n 2)) (<= (n 2) 3)))\
             (assert (> (n 2) (n 1)))\
             (assert (> (n 1) (n 2)))\
             (check-sat)";
        assert_eq!(run(strict), "unsat\n");
    }

    #[test]
    fn relaxed_progress_chain_is_sat() {
        let out = run(
            "(declare-fun n (Int) Int)\
             (assert (and (<= 0 (n 1)) (<= (n 1) 3) (<= 0 (n 2)) (<= (n 2) 3)))\
             (assert (>= (n 2) (n 1)))\
             (assert (>= (n 1) (n 2)))\
             (assert (= (n 1) 2))\
             (check-sat)(get-value ((n 2)))",
        );
        assert_eq!(out, "sat\n(((n 2) 2))\n");
    }

    #[test]
    fn ite_selects_branch() {
        let out = run(
            "(declare-const x Int)(declare-const c Bool)\
             (assert (and (<= 0 x) (<= x 5)))\
             (assert (= x (ite c 4 1)))\
             (assert (not c))\
             (check-sat)(get-value (x c))",
        );
        assert_eq!(out, "sat\n((x 1) (c false))\n");
    }

    #[test]
    fn incremental_checks_accumulate() {
        let out = run(
            "(declare-const x Int)\
             (assert (and (<= 1 x) (<= x 4)))\
             (check-sat)\
             (assert (>= x 3))\
             (check-sat)\
             (assert (<= x 2))\
             (check-sat)",
        );
        assert_eq!(out, "sat\nsat\nunsat\n");
    }

    #[test]
    fn print_success_option() {
        let out = run("(set-option :print-success true)(set-logic UFLIA)(assert true)(check-sat)");
        assert_eq!(out, "success\nsuccess\nsuccess\nsat\n");
    }

    #[test]
    fn errors_are_reported_and_execution_continues() {
        let out = run("(frobnicate)(assert true)(check-sat)");
        assert_eq!(out, "(error \"unsupported command: frobnicate\")\nsat\n");
    }

    #[test]
    fn deterministic_output() {
        let script = "(declare-fun f (Int) Int)\
             (assert (and (<= 1 (f 0)) (<= (f 0) 4)))\
             (assert (not (= (f 0) 2)))\
             (check-sat)(get-value ((f 0)))";
        assert_eq!(run(script), run(script));
    }
}
