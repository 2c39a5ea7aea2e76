//! Ground clause compilation.
//!
//! Every integer unknown is a *point*: a declared function applied to
//! concrete integer arguments (constants are zero-ary points). Points
//! carry asserted range bounds and are bit-blasted in absolute binary.
//! Boolean structure becomes CNF through polarity-aware Tseitin gates,
//! so a definition clause is only emitted for the direction in which a
//! gate output is actually observed. Applications whose arguments are
//! themselves unknowns are grounded by enumerating the argument range
//! behind equality guards.

use std::collections::HashMap;

use varisat::{ExtendFormula, Lit, Solver};

use crate::sexp::{Interner, Sexp};
use crate::{FunSig, Model, PointKey, Sort, Syms};

/// Which implication directions of a gate definition are required.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum Pol {
    Pos,
    Neg,
    Both,
}

impl Pol {
    fn emit_pos(self) -> bool {
        !matches!(self, Pol::Neg)
    }

    fn emit_neg(self) -> bool {
        !matches!(self, Pol::Pos)
    }

    fn flip(self) -> Pol {
        match self {
            Pol::Pos => Pol::Neg,
            Pol::Neg => Pol::Pos,
            Pol::Both => Pol::Both,
        }
    }

    fn code(self) -> u8 {
        match self {
            Pol::Pos => 0,
            Pol::Neg => 1,
            Pol::Both => 2,
        }
    }
}

/// Declaration and bound tables the compiler reads while translating.
pub(crate) struct Ctx<'a> {
    pub syms: &'a Syms,
    pub funs: &'a HashMap<u32, FunSig>,
    pub bounds: &'a HashMap<PointKey, (Option<i64>, Option<i64>)>,
    pub interner: &'a Interner,
}

#[derive(Clone, Copy)]
enum IArg {
    Const(i64),
    Pt(u32),
}

struct Case {
    guards: Vec<Lit>,
    val: IArg,
}

struct IntRepr {
    key: PointKey,
    lo: i64,
    hi: i64,
    bits: Vec<Lit>,
}

struct GateSlot {
    lit: Lit,
    pos: bool,
    neg: bool,
}

const TAG_AND: u8 = 0;
const TAG_OR: u8 = 1;
const TAG_IFF: u8 = 2;

const OP_GE: u8 = 0;
const OP_GT: u8 = 1;
const OP_EQ: u8 = 2;

/// Cache key side for a comparison operand: either a point index or a
/// constant value.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum CKey {
    Pt(u32),
    Const(i64),
}

const MAX_GROUNDING_CASES: usize = 4096;

pub(crate) struct Compiler {
    solver: Solver<'static>,
    true_lit: Lit,
    int_index: HashMap<PointKey, u32>,
    reprs: Vec<IntRepr>,
    bool_points: HashMap<PointKey, Lit>,
    gates: HashMap<(u8, usize, usize), GateSlot>,
    cmps: HashMap<(u8, CKey, CKey), GateSlot>,
    terms: HashMap<(Sexp, u8), Lit>,
    pub(crate) failed: Option<String>,
}

fn point_name(key: &PointKey, interner: &Interner) -> String {
    if key.1.is_empty() {
        interner.name(key.0).to_string()
    } else {
        let mut s = format!("({}", interner.name(key.0));
        for v in &key.1 {
            s.push(' ');
            s.push_str(&v.to_string());
        }
        s.push(')');
        s
    }
}

fn width_for(hi: i64) -> usize {
    64 - (hi as u64).leading_zeros() as usize
}

impl Compiler {
    pub(crate) fn new() -> Self {
        let mut solver: Solver<'static> = Solver::new();
        let true_lit = solver.new_lit();
        solver.add_clause(&[true_lit]);
        Compiler {
            solver,
            true_lit,
            int_index: HashMap::new(),
            reprs: Vec::new(),
            bool_points: HashMap::new(),
            gates: HashMap::new(),
            cmps: HashMap::new(),
            terms: HashMap::new(),
            failed: None,
        }
    }

    fn add_clause(&mut self, mut lits: Vec<Lit>) {
        lits.sort_unstable_by_key(|l| l.code());
        lits.dedup();
        for w in lits.windows(2) {
            if w[0] == !w[1] {
                return;
            }
        }
        self.solver.add_clause(&lits);
    }

    // ---- gates ----------------------------------------------------

    fn gate(&mut self, tag: u8, mut a: Lit, mut b: Lit, pol: Pol) -> Lit {
        let t = self.true_lit;
        let f = !self.true_lit;
        // Constant folding and trivial cases.
        match tag {
            TAG_AND => {
                if a == f || b == f {
                    return f;
                }
                if a == t {
                    return b;
                }
                if b == t {
                    return a;
                }
                if a == b {
                    return a;
                }
                if a == !b {
                    return f;
                }
            }
            TAG_OR => {
                if a == t || b == t {
                    return t;
                }
                if a == f {
                    return b;
                }
                if b == f {
                    return a;
                }
                if a == b {
                    return a;
                }
                if a == !b {
                    return t;
                }
            }
            TAG_IFF => {
                if a == t {
                    return b;
                }
                if b == t {
                    return a;
                }
                if a == f {
                    return !b;
                }
                if b == f {
                    return !a;
                }
                if a == b {
                    return t;
                }
                if a == !b {
                    return f;
                }
            }
            _ => unreachable!(),
        }
        if a.code() > b.code() {
            std::mem::swap(&mut a, &mut b);
        }
        let key = (tag, a.code(), b.code());
        let (lit, need_pos, need_neg) = match self.gates.get_mut(&key) {
            Some(slot) => {
                let np = pol.emit_pos() && !slot.pos;
                let nn = pol.emit_neg() && !slot.neg;
                slot.pos |= np;
                slot.neg |= nn;
                (slot.lit, np, nn)
            }
            None => {
                let lit = self.solver.new_lit();
                self.gates.insert(
                    key,
                    GateSlot { lit, pos: pol.emit_pos(), neg: pol.emit_neg() },
                );
                (lit, pol.emit_pos(), pol.emit_neg())
            }
        };
        match tag {
            TAG_AND => {
                if need_pos {
                    self.add_clause(vec![!lit, a]);
                    self.add_clause(vec![!lit, b]);
                }
                if need_neg {
                    self.add_clause(vec![lit, !a, !b]);
                }
            }
            TAG_OR => {
                if need_pos {
                    self.add_clause(vec![!lit, a, b]);
                }
                if need_neg {
                    self.add_clause(vec![lit, !a]);
                    self.add_clause(vec![lit, !b]);
                }
            }
            TAG_IFF => {
                if need_pos {
                    self.add_clause(vec![!lit, !a, b]);
                    self.add_clause(vec![!lit, a, !b]);
                }
                if need_neg {
                    self.add_clause(vec![lit, a, b]);
                    self.add_clause(vec![lit, !a, !b]);
                }
            }
            _ => unreachable!(),
        }
        lit
    }

    fn and_fold(&mut self, lits: &[Lit], pol: Pol) -> Lit {
        let mut acc = self.true_lit;
        for &l in lits {
            acc = self.gate(TAG_AND, acc, l, pol);
        }
        acc
    }

    fn or_fold(&mut self, lits: &[Lit], pol: Pol) -> Lit {
        let mut acc = !self.true_lit;
        for &l in lits {
            acc = self.gate(TAG_OR, acc, l, pol);
        }
        acc
    }

    // ---- integer points -------------------------------------------

    fn int_point(&mut self, key: PointKey, ctx: &Ctx) -> Result<u32, String> {
        if let Some(&idx) = self.int_index.get(&key) {
            return Ok(idx);
        }
        let (lo, hi) = match ctx.bounds.get(&key) {
            Some(&(Some(lo), Some(hi))) => (lo, hi),
            _ => {
                return Err(format!(
                    "no finite range asserted for {}",
                    point_name(&key, ctx.interner)
                ));
            }
        };
        if lo < 0 {
            return Err(format!(
                "negative lower bound for {}",
                point_name(&key, ctx.interner)
            ));
        }
        let idx = self.reprs.len() as u32;
        if hi < lo {
            // Contradictory bounds: the point has no value at all.
            self.solver.add_clause(&[]);
            self.reprs.push(IntRepr { key: key.clone(), lo, hi: lo, bits: Vec::new() });
            self.int_index.insert(key, idx);
            return Ok(idx);
        }
        let bits = if lo == hi {
            Vec::new()
        } else {
            let w = width_for(hi);
            let bits: Vec<Lit> = (0..w).map(|_| self.solver.new_lit()).collect();
            // value <= hi
            for i in 0..w {
                if hi >> i & 1 == 0 {
                    let mut cl = vec![!bits[i]];
                    for (j, &bj) in bits.iter().enumerate().skip(i + 1) {
                        if hi >> j & 1 == 1 {
                            cl.push(!bj);
                        }
                    }
                    self.add_clause(cl);
                }
            }
            // value >= lo
            for i in 0..w {
                if lo >> i & 1 == 1 {
                    let mut cl = vec![bits[i]];
                    for (j, &bj) in bits.iter().enumerate().skip(i + 1) {
                        if lo >> j & 1 == 0 {
                            cl.push(bj);
                        }
                    }
                    self.add_clause(cl);
                }
            }
            bits
        };
        self.reprs.push(IntRepr { key: key.clone(), lo, hi, bits });
        self.int_index.insert(key, idx);
        Ok(idx)
    }

    fn bool_point(&mut self, key: PointKey) -> Lit {
        if let Some(&l) = self.bool_points.get(&key) {
            return l;
        }
        let l = self.solver.new_lit();
        self.bool_points.insert(key, l);
        l
    }

    fn range_of(&self, a: IArg) -> (i64, i64) {
        match a {
            IArg::Const(c) => (c, c),
            IArg::Pt(p) => (self.reprs[p as usize].lo, self.reprs[p as usize].hi),
        }
    }

    /// Bit vector of an operand, padded to `w` with constant-false, as
    /// absolute binary (constants become fixed literals).
    fn operand_bits(&self, a: IArg, w: usize) -> Vec<Lit> {
        let t = self.true_lit;
        match a {
            IArg::Const(c) => (0..w).map(|i| if c >> i & 1 == 1 { t } else { !t }).collect(),
            IArg::Pt(p) => {
                let repr = &self.reprs[p as usize];
                (0..w)
                    .map(|i| {
                        if i < repr.bits.len() {
                            repr.bits[i]
                        } else if repr.lo == repr.hi && repr.lo >> i & 1 == 1 {
                            t
                        } else {
                            !t
                        }
                    })
                    .collect()
            }
        }
    }

    fn ckey(a: IArg) -> CKey {
        match a {
            IArg::Const(c) => CKey::Const(c),
            IArg::Pt(p) => CKey::Pt(p),
        }
    }

    /// Comparison circuit between two operands. `op` is one of
    /// `OP_GE`/`OP_GT`/`OP_EQ`.
    fn cmp_basic(&mut self, op: u8, a: IArg, b: IArg, pol: Pol) -> Lit {
        let t = self.true_lit;
        let (alo, ahi) = self.range_of(a);
        let (blo, bhi) = self.range_of(b);
        if let (IArg::Pt(p), IArg::Pt(q)) = (a, b) {
            if p == q {
                return match op {
                    OP_GE | OP_EQ => t,
                    _ => !t,
                };
            }
        }
        match op {
            OP_GE => {
                if alo >= bhi {
                    return t;
                }
                if ahi < blo {
                    return !t;
                }
            }
            OP_GT => {
                if alo > bhi {
                    return t;
                }
                if ahi <= blo {
                    return !t;
                }
            }
            OP_EQ => {
                if ahi < blo || bhi < alo {
                    return !t;
                }
                if alo == ahi && blo == bhi && alo == blo {
                    return t;
                }
            }
            _ => unreachable!(),
        }
        let key = (op, Self::ckey(a), Self::ckey(b));
        if let Some(slot) = self.cmps.get(&key) {
            if (!pol.emit_pos() || slot.pos) && (!pol.emit_neg() || slot.neg) {
                return slot.lit;
            }
        }
        let w = width_for(ahi.max(bhi).max(1));
        let xa = self.operand_bits(a, w);
        let xb = self.operand_bits(b, w);
        let lit = match op {
            OP_EQ => {
                let eqs: Vec<Lit> =
                    (0..w).map(|i| self.gate(TAG_IFF, xa[i], xb[i], pol)).collect();
                self.and_fold(&eqs, pol)
            }
            _ => {
                // a >= b (or >): scan from the least significant bit.
                let mut acc = if op == OP_GE { t } else { !t };
                for i in 0..w {
                    let gt_here = self.gate(TAG_AND, xa[i], !xb[i], pol);
                    let eq_here = self.gate(TAG_IFF, xa[i], xb[i], pol);
                    let keep = self.gate(TAG_AND, eq_here, acc, pol);
                    acc = self.gate(TAG_OR, gt_here, keep, pol);
                }
                acc
            }
        };
        let slot = self.cmps.entry(key).or_insert(GateSlot { lit, pos: false, neg: false });
        slot.pos |= pol.emit_pos();
        slot.neg |= pol.emit_neg();
        lit
    }

    // ---- terms ----------------------------------------------------

    fn sort_of(&self, t: &Sexp, ctx: &Ctx) -> Result<Sort, String> {
        match t {
            Sexp::Num(_) => Ok(Sort::Int),
            Sexp::Sym(s) => {
                if *s == ctx.syms.true_ || *s == ctx.syms.false_ {
                    Ok(Sort::Bool)
                } else if let Some(sig) = ctx.funs.get(s) {
                    Ok(sig.ret)
                } else {
                    Err(format!("undeclared symbol {}", ctx.interner.name(*s)))
                }
            }
            Sexp::Str(_) => Err("string term has no logical sort".to_string()),
            Sexp::List(items) => {
                let Some(Sexp::Sym(h)) = items.first() else {
                    return Err("malformed application".to_string());
                };
                let s = ctx.syms;
                if *h == s.op_not
                    || *h == s.op_and
                    || *h == s.op_or
                    || *h == s.op_imp
                    || *h == s.op_xor
                    || *h == s.op_eq
                    || *h == s.op_distinct
                    || *h == s.op_le
                    || *h == s.op_lt
                    || *h == s.op_ge
                    || *h == s.op_gt
                {
                    Ok(Sort::Bool)
                } else if *h == s.op_plus || *h == s.op_minus || *h == s.op_times {
                    Ok(Sort::Int)
                } else if *h == s.op_ite {
                    if items.len() == 4 {
                        self.sort_of(&items[2], ctx)
                    } else {
                        Err("ite expects three arguments".to_string())
                    }
                } else if let Some(sig) = ctx.funs.get(h) {
                    Ok(sig.ret)
                } else {
                    Err(format!("undeclared function {}", ctx.interner.name(*h)))
                }
            }
        }
    }

    /// All concrete argument tuples an application can take, each behind
    /// the guard literals that select it.
    fn arg_combos(
        &mut self,
        args: &[Sexp],
        ctx: &Ctx,
    ) -> Result<Vec<(Vec<Lit>, Vec<i64>)>, String> {
        let mut combos: Vec<(Vec<Lit>, Vec<i64>)> = vec![(Vec::new(), Vec::new())];
        for arg in args {
            let cases = self.compile_int(arg, ctx)?;
            let mut concrete: Vec<(Vec<Lit>, i64)> = Vec::new();
            for case in cases {
                match case.val {
                    IArg::Const(c) => concrete.push((case.guards, c)),
                    IArg::Pt(p) => {
                        let (lo, hi) =
                            (self.reprs[p as usize].lo, self.reprs[p as usize].hi);
                        for v in lo..=hi {
                            let mut guards = case.guards.clone();
                            if lo != hi {
                                guards.push(self.cmp_basic(
                                    OP_EQ,
                                    IArg::Pt(p),
                                    IArg::Const(v),
                                    Pol::Neg,
                                ));
                            }
                            concrete.push((guards, v));
                        }
                    }
                }
            }
            if combos.len().saturating_mul(concrete.len()) > MAX_GROUNDING_CASES {
                return Err("argument grounding exceeds the case limit".to_string());
            }
            let mut next = Vec::with_capacity(combos.len() * concrete.len());
            for (gs, vs) in &combos {
                for (cg, cv) in &concrete {
                    let mut g = gs.clone();
                    g.extend_from_slice(cg);
                    let mut v = vs.clone();
                    v.push(*cv);
                    next.push((g, v));
                }
            }
            combos = next;
        }
        Ok(combos)
    }

    fn compile_int(&mut self, t: &Sexp, ctx: &Ctx) -> Result<Vec<Case>, String> {
        match t {
            Sexp::Num(n) => Ok(vec![Case { guards: Vec::new(), val: IArg::Const(*n) }]),
            Sexp::Sym(s) => {
                if *s == ctx.syms.true_ || *s == ctx.syms.false_ {
                    return Err("boolean term where an integer was expected".to_string());
                }
                let sig = ctx
                    .funs
                    .get(s)
                    .ok_or_else(|| format!("undeclared symbol {}", ctx.interner.name(*s)))?;
                if sig.ret != Sort::Int || sig.arity != 0 {
                    return Err(format!(
                        "{} is not an integer constant",
                        ctx.interner.name(*s)
                    ));
                }
                let idx = self.int_point((*s, Vec::new()), ctx)?;
                Ok(vec![Case { guards: Vec::new(), val: IArg::Pt(idx) }])
            }
            Sexp::Str(_) => Err("string term where an integer was expected".to_string()),
            Sexp::List(items) => {
                let Some(Sexp::Sym(h)) = items.first() else {
                    return Err("malformed integer term".to_string());
                };
                let s = ctx.syms;
                if *h == s.op_ite {
                    if items.len() != 4 {
                        return Err("ite expects three arguments".to_string());
                    }
                    let cond = self.compile_bool(&items[1], ctx, Pol::Both)?;
                    let mut cases = Vec::new();
                    for case in self.compile_int(&items[2], ctx)? {
                        let mut guards = vec![cond];
                        guards.extend(case.guards);
                        cases.push(Case { guards, val: case.val });
                    }
                    for case in self.compile_int(&items[3], ctx)? {
                        let mut guards = vec![!cond];
                        guards.extend(case.guards);
                        cases.push(Case { guards, val: case.val });
                    }
                    return Ok(cases);
                }
                if *h == s.op_plus || *h == s.op_minus || *h == s.op_times {
                    return Err(
                        "arithmetic over unknowns is not supported (bound each point instead)"
                            .to_string(),
                    );
                }
                let sig = ctx
                    .funs
                    .get(h)
                    .ok_or_else(|| format!("undeclared function {}", ctx.interner.name(*h)))?;
                if sig.ret != Sort::Int {
                    return Err(format!(
                        "{} does not return an integer",
                        ctx.interner.name(*h)
                    ));
                }
                if sig.arity != items.len() - 1 {
                    return Err(format!(
                        "{} applied to {} arguments, expected {}",
                        ctx.interner.name(*h),
                        items.len() - 1,
                        sig.arity
                    ));
                }
                let combos = self.arg_combos(&items[1..], ctx)?;
                let mut cases = Vec::with_capacity(combos.len());
                for (guards, vals) in combos {
                    let idx = self.int_point((*h, vals), ctx)?;
                    cases.push(Case { guards, val: IArg::Pt(idx) });
                }
                Ok(cases)
            }
        }
    }

    /// Comparison (or equality) between two integer terms, each possibly
    /// a guarded selection over several points.
    fn int_cmp(
        &mut self,
        op: u8,
        swap: bool,
        a: &Sexp,
        b: &Sexp,
        ctx: &Ctx,
        pol: Pol,
    ) -> Result<Lit, String> {
        let (a, b) = if swap { (b, a) } else { (a, b) };
        let ac = self.compile_int(a, ctx)?;
        let bc = self.compile_int(b, ctx)?;
        if ac.len() == 1 && bc.len() == 1 && ac[0].guards.is_empty() && bc[0].guards.is_empty() {
            return Ok(self.cmp_basic(op, ac[0].val, bc[0].val, pol));
        }
        let out = self.solver.new_lit();
        for ca in &ac {
            for cb in &bc {
                let inner = self.cmp_basic(op, ca.val, cb.val, pol);
                if pol.emit_pos() {
                    let mut cl = vec![!out, inner];
                    cl.extend(ca.guards.iter().map(|g| !*g));
                    cl.extend(cb.guards.iter().map(|g| !*g));
                    self.add_clause(cl);
                }
                if pol.emit_neg() {
                    let mut cl = vec![out, !inner];
                    cl.extend(ca.guards.iter().map(|g| !*g));
                    cl.extend(cb.guards.iter().map(|g| !*g));
                    self.add_clause(cl);
                }
            }
        }
        Ok(out)
    }

    fn compile_bool(&mut self, t: &Sexp, ctx: &Ctx, pol: Pol) -> Result<Lit, String> {
        match t {
            Sexp::Sym(s) => {
                if *s == ctx.syms.true_ {
                    return Ok(self.true_lit);
                }
                if *s == ctx.syms.false_ {
                    return Ok(!self.true_lit);
                }
                let sig = ctx
                    .funs
                    .get(s)
                    .ok_or_else(|| format!("undeclared symbol {}", ctx.interner.name(*s)))?;
                if sig.ret != Sort::Bool || sig.arity != 0 {
                    return Err(format!(
                        "{} is not a boolean constant",
                        ctx.interner.name(*s)
                    ));
                }
                Ok(self.bool_point((*s, Vec::new())))
            }
            Sexp::Num(_) => Err("integer term where a boolean was expected".to_string()),
            Sexp::Str(_) => Err("string term where a boolean was expected".to_string()),
            Sexp::List(_) => {
                let cache_key = (t.clone(), pol.code());
                if let Some(&lit) = self.terms.get(&cache_key) {
                    return Ok(lit);
                }
                let lit = self.compile_bool_list(t, ctx, pol)?;
                self.terms.insert(cache_key, lit);
                Ok(lit)
            }
        }
    }

    fn compile_bool_list(&mut self, t: &Sexp, ctx: &Ctx, pol: Pol) -> Result<Lit, String> {
        let Sexp::List(items) = t else { unreachable!() };
        let Some(Sexp::Sym(h)) = items.first() else {
            return Err("malformed boolean term".to_string());
        };
        let h = *h;
        let s = ctx.syms;
        let args = &items[1..];
        if h == s.op_not {
            if args.len() != 1 {
                return Err("not expects one argument".to_string());
            }
            return Ok(!self.compile_bool(&args[0], ctx, pol.flip())?);
        }
        if h == s.op_and || h == s.op_or {
            let lits = args
                .iter()
                .map(|a| self.compile_bool(a, ctx, pol))
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(if h == s.op_and {
                self.and_fold(&lits, pol)
            } else {
                self.or_fold(&lits, pol)
            });
        }
        if h == s.op_imp {
            if args.len() < 2 {
                return Err("=> expects at least two arguments".to_string());
            }
            let mut lits = Vec::with_capacity(args.len());
            for a in &args[..args.len() - 1] {
                lits.push(!self.compile_bool(a, ctx, pol.flip())?);
            }
            lits.push(self.compile_bool(&args[args.len() - 1], ctx, pol)?);
            return Ok(self.or_fold(&lits, pol));
        }
        if h == s.op_xor {
            if args.len() < 2 {
                return Err("xor expects at least two arguments".to_string());
            }
            let mut acc = self.compile_bool(&args[0], ctx, Pol::Both)?;
            for a in &args[1..] {
                let next = self.compile_bool(a, ctx, Pol::Both)?;
                acc = !self.gate(TAG_IFF, acc, next, Pol::Both);
            }
            return Ok(acc);
        }
        if h == s.op_ite {
            if args.len() != 3 {
                return Err("ite expects three arguments".to_string());
            }
            let c = self.compile_bool(&args[0], ctx, Pol::Both)?;
            let a = self.compile_bool(&args[1], ctx, pol)?;
            let b = self.compile_bool(&args[2], ctx, pol)?;
            let left = self.gate(TAG_OR, !c, a, pol);
            let right = self.gate(TAG_OR, c, b, pol);
            return Ok(self.gate(TAG_AND, left, right, pol));
        }
        if h == s.op_eq {
            if args.len() < 2 {
                return Err("= expects at least two arguments".to_string());
            }
            match self.sort_of(&args[0], ctx)? {
                Sort::Bool => {
                    let lits = args
                        .iter()
                        .map(|a| self.compile_bool(a, ctx, Pol::Both))
                        .collect::<Result<Vec<_>, _>>()?;
                    let mut pair = Vec::with_capacity(lits.len() - 1);
                    for w in lits.windows(2) {
                        pair.push(self.gate(TAG_IFF, w[0], w[1], Pol::Both));
                    }
                    return Ok(self.and_fold(&pair, pol));
                }
                Sort::Int => {
                    let mut pair = Vec::with_capacity(args.len() - 1);
                    for w in args.windows(2) {
                        pair.push(self.int_cmp(OP_EQ, false, &w[0], &w[1], ctx, pol)?);
                    }
                    return Ok(self.and_fold(&pair, pol));
                }
            }
        }
        if h == s.op_distinct {
            if args.len() < 2 {
                return Err("distinct expects at least two arguments".to_string());
            }
            let mut pair = Vec::new();
            for i in 0..args.len() {
                for j in i + 1..args.len() {
                    let eq =
                        self.int_cmp(OP_EQ, false, &args[i], &args[j], ctx, pol.flip())?;
                    pair.push(!eq);
                }
            }
            return Ok(self.and_fold(&pair, pol));
        }
        if h == s.op_ge || h == s.op_gt || h == s.op_le || h == s.op_lt {
            if args.len() != 2 {
                return Err("comparison expects two arguments".to_string());
            }
            let (op, swap) = if h == s.op_ge {
                (OP_GE, false)
            } else if h == s.op_gt {
                (OP_GT, false)
            } else if h == s.op_le {
                (OP_GE, true)
            } else {
                (OP_GT, true)
            };
            return self.int_cmp(op, swap, &args[0], &args[1], ctx, pol);
        }
        // Uninterpreted application.
        let sig = ctx
            .funs
            .get(&h)
            .ok_or_else(|| format!("undeclared function {}", ctx.interner.name(h)))?;
        if sig.ret != Sort::Bool {
            return Err(format!(
                "integer-valued {} used as a boolean",
                ctx.interner.name(h)
            ));
        }
        if sig.arity != args.len() {
            return Err(format!(
                "{} applied to {} arguments, expected {}",
                ctx.interner.name(h),
                args.len(),
                sig.arity
            ));
        }
        let combos = self.arg_combos(args, ctx)?;
        if combos.len() == 1 && combos[0].0.is_empty() {
            let key = (h, combos[0].1.clone());
            return Ok(self.bool_point(key));
        }
        let out = self.solver.new_lit();
        for (guards, vals) in combos {
            let pt = self.bool_point((h, vals));
            if pol.emit_pos() {
                let mut cl = vec![!out, pt];
                cl.extend(guards.iter().map(|g| !*g));
                self.add_clause(cl);
            }
            if pol.emit_neg() {
                let mut cl = vec![out, !pt];
                cl.extend(guards.iter().map(|g| !*g));
                self.add_clause(cl);
            }
        }
        Ok(out)
    }

    // ---- top-level assertions --------------------------------------

    /// Translates one asserted term, distributing over top-level
    /// conjunctions and implications so the common
    /// `(=> (and …) (and …))` shape becomes plain clauses without
    /// intermediate gate variables.
    pub(crate) fn assert_term(&mut self, t: &Sexp, ctx: &Ctx) {
        if self.failed.is_some() {
            return;
        }
        if let Err(e) = self.assert_root(t, ctx) {
            self.failed = Some(e);
        }
    }

    fn assert_root(&mut self, t: &Sexp, ctx: &Ctx) -> Result<(), String> {
        if let Sexp::List(items) = t {
            if let Some(Sexp::Sym(h)) = items.first() {
                if *h == ctx.syms.op_and {
                    for c in &items[1..] {
                        self.assert_root(c, ctx)?;
                    }
                    return Ok(());
                }
                if *h == ctx.syms.op_imp && items.len() >= 3 {
                    let ants: Vec<&Sexp> = items[1..items.len() - 1].iter().collect();
                    return self.assert_impl(&ants, &items[items.len() - 1], ctx);
                }
            }
        }
        let mut clause = Vec::new();
        self.collect_or(t, ctx, &mut clause)?;
        self.add_clause(clause);
        Ok(())
    }

    fn assert_impl(&mut self, ants: &[&Sexp], concl: &Sexp, ctx: &Ctx) -> Result<(), String> {
        if let Sexp::List(items) = concl {
            if let Some(Sexp::Sym(h)) = items.first() {
                if *h == ctx.syms.op_and {
                    for c in &items[1..] {
                        self.assert_impl(ants, c, ctx)?;
                    }
                    return Ok(());
                }
                if *h == ctx.syms.op_imp && items.len() >= 3 {
                    let mut inner: Vec<&Sexp> = ants.to_vec();
                    inner.extend(items[1..items.len() - 1].iter());
                    return self.assert_impl(&inner, &items[items.len() - 1], ctx);
                }
            }
        }
        let mut clause = Vec::new();
        for a in ants {
            self.collect_neg(a, ctx, &mut clause)?;
        }
        self.collect_or(concl, ctx, &mut clause)?;
        self.add_clause(clause);
        Ok(())
    }

    fn collect_or(&mut self, t: &Sexp, ctx: &Ctx, out: &mut Vec<Lit>) -> Result<(), String> {
        if let Sexp::List(items) = t {
            if let Some(Sexp::Sym(h)) = items.first() {
                if *h == ctx.syms.op_or {
                    for c in &items[1..] {
                        self.collect_or(c, ctx, out)?;
                    }
                    return Ok(());
                }
                if *h == ctx.syms.op_not && items.len() == 2 {
                    return self.collect_neg(&items[1], ctx, out);
                }
                if *h == ctx.syms.op_imp && items.len() >= 3 {
                    for a in &items[1..items.len() - 1] {
                        self.collect_neg(a, ctx, out)?;
                    }
                    return self.collect_or(&items[items.len() - 1], ctx, out);
                }
            }
        }
        out.push(self.compile_bool(t, ctx, Pol::Pos)?);
        Ok(())
    }

    fn collect_neg(&mut self, t: &Sexp, ctx: &Ctx, out: &mut Vec<Lit>) -> Result<(), String> {
        if let Sexp::List(items) = t {
            if let Some(Sexp::Sym(h)) = items.first() {
                if *h == ctx.syms.op_and {
                    for c in &items[1..] {
                        self.collect_neg(c, ctx, out)?;
                    }
                    return Ok(());
                }
                if *h == ctx.syms.op_not && items.len() == 2 {
                    return self.collect_or(&items[1], ctx, out);
                }
            }
        }
        out.push(!self.compile_bool(t, ctx, Pol::Neg)?);
        Ok(())
    }

    // ---- solving ----------------------------------------------------

    pub(crate) fn solve(&mut self) -> Result<bool, String> {
        self.solver.solve().map_err(|e| e.to_string())
    }

    pub(crate) fn extract_model(&self) -> Model {
        let assignment = self.solver.model().unwrap_or_default();
        let mut truth = vec![false; assignment.len()];
        for l in &assignment {
            let i = l.var().index();
            if i < truth.len() {
                truth[i] = l.is_positive();
            }
        }
        let value = |l: Lit| {
            let i = l.var().index();
            let v = i < truth.len() && truth[i];
            if l.is_positive() {
                v
            } else {
                !v
            }
        };
        let mut ints = HashMap::new();
        for repr in &self.reprs {
            let mut v = if repr.lo == repr.hi { repr.lo } else { 0 };
            for (i, &b) in repr.bits.iter().enumerate() {
                if value(b) {
                    v |= 1 << i;
                }
            }
            ints.insert(repr.key.clone(), v);
        }
        let mut bools = HashMap::new();
        for (key, &l) in &self.bool_points {
            bools.insert(key.clone(), value(l));
        }
        Model { ints, bools }
    }
}
