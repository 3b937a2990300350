//! Side conditions and substitution.
//!
//! Each function is a direct structural recursion over the syntax, with the
//! term and term-list cases written out separately. All of them are total.

use crate::syntax::{Formula, FunId, Term};

pub fn inc_term(t: &Term) -> Term {
    match t {
        Term::Var(n) => Term::Var(n + 1),
        Term::Fun(i, args) => Term::Fun(*i, inc_list(args)),
    }
}

pub fn inc_list(ts: &[Term]) -> Vec<Term> {
    match ts.split_first() {
        None => Vec::new(),
        Some((t, rest)) => {
            let mut out = Vec::with_capacity(ts.len());
            out.push(inc_term(t));
            out.extend(inc_list(rest));
            out
        }
    }
}

/// Replaces variable `v` by `s` in `t`. Larger variables are decremented since
/// the quantifier that bound `v` is gone.
pub fn sub_term(v: usize, s: &Term, t: &Term) -> Term {
    match t {
        Term::Var(n) if *n < v => Term::Var(*n),
        Term::Var(n) if *n == v => s.clone(),
        Term::Var(n) => Term::Var(n - 1),
        Term::Fun(i, args) => Term::Fun(*i, sub_list(v, s, args)),
    }
}

pub fn sub_list(v: usize, s: &Term, ts: &[Term]) -> Vec<Term> {
    match ts.split_first() {
        None => Vec::new(),
        Some((t, rest)) => {
            let mut out = Vec::with_capacity(ts.len());
            out.push(sub_term(v, s, t));
            out.extend(sub_list(v, s, rest));
            out
        }
    }
}

/// Substitutes `s` for variable `v` in `p`. Under a quantifier the target index
/// and the variables of `s` are both incremented, so nothing in `s` is captured.
pub fn sub(v: usize, s: &Term, p: &Formula) -> Formula {
    match p {
        Formula::Pre(i, args) => Formula::Pre(*i, sub_list(v, s, args)),
        Formula::Imp(p, q) => Formula::imp(sub(v, s, p), sub(v, s, q)),
        Formula::Dis(p, q) => Formula::dis(sub(v, s, p), sub(v, s, q)),
        Formula::Con(p, q) => Formula::con(sub(v, s, p), sub(v, s, q)),
        Formula::Exi(p) => Formula::exi(sub(v + 1, &inc_term(s), p)),
        Formula::Uni(p) => Formula::uni(sub(v + 1, &inc_term(s), p)),
        Formula::Neg(p) => Formula::neg(sub(v, s, p)),
    }
}

pub fn new_term(c: FunId, t: &Term) -> bool {
    match t {
        Term::Var(_) => true,
        Term::Fun(i, args) => {
            if *i == c {
                false
            } else {
                new_list(c, args)
            }
        }
    }
}

pub fn new_list(c: FunId, ts: &[Term]) -> bool {
    match ts.split_first() {
        None => true,
        Some((t, rest)) => {
            if new_term(c, t) {
                new_list(c, rest)
            } else {
                false
            }
        }
    }
}

/// True iff the function symbol `c` occurs nowhere in `p`.
pub fn new(c: FunId, p: &Formula) -> bool {
    match p {
        Formula::Pre(_, args) => new_list(c, args),
        Formula::Imp(p, q) | Formula::Dis(p, q) | Formula::Con(p, q) => {
            if new(c, p) {
                new(c, q)
            } else {
                false
            }
        }
        Formula::Exi(p) | Formula::Uni(p) | Formula::Neg(p) => new(c, p),
    }
}

pub fn news(c: FunId, z: &[Formula]) -> bool {
    match z.split_first() {
        None => true,
        Some((p, rest)) => {
            if new(c, p) {
                news(c, rest)
            } else {
                false
            }
        }
    }
}

pub fn member(x: &Formula, z: &[Formula]) -> bool {
    match z.split_first() {
        None => false,
        Some((y, rest)) => {
            if x == y {
                true
            } else {
                member(x, rest)
            }
        }
    }
}

/// True iff every formula of `z` is a member of `y`.
pub fn ext(y: &[Formula], z: &[Formula]) -> bool {
    match z.split_first() {
        None => true,
        Some((p, rest)) => {
            if member(p, y) {
                ext(y, rest)
            } else {
                false
            }
        }
    }
}
