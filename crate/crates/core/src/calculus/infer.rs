//! Recovering the instantiation term of a quantifier step.
//!
//! Given the body `p` of a quantifier and the formula the author wrote in its
//! place, find the `t` with `sub(0, t, p) = stated`. The two trees are walked in
//! lockstep; every occurrence of the bound variable proposes a candidate and all
//! candidates must agree.

use crate::ops::sub;
use crate::syntax::{Formula, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instantiation {
    Found(Term),
    /// The bound variable does not occur, so every term gives the same result.
    Ambiguous,
    NoMatch,
}

/// Undoes `depth` applications of `inc_term`, failing if `t` mentions a
/// variable bound below the substitution point.
fn unshift(t: &Term, depth: usize) -> Option<Term> {
    match t {
        Term::Var(n) if *n >= depth => Some(Term::Var(n - depth)),
        Term::Var(_) => None,
        Term::Fun(i, args) => Some(Term::Fun(
            *i,
            args.iter()
                .map(|a| unshift(a, depth))
                .collect::<Option<_>>()?,
        )),
    }
}

struct Matcher {
    candidate: Option<Term>,
}

impl Matcher {
    fn term(&mut self, body: &Term, stated: &Term, depth: usize) -> bool {
        match body {
            Term::Var(n) if *n == depth => match unshift(stated, depth) {
                None => false,
                Some(t) => match &self.candidate {
                    Some(c) => *c == t,
                    None => {
                        self.candidate = Some(t);
                        true
                    }
                },
            },
            Term::Var(n) if *n < depth => *stated == Term::Var(*n),
            Term::Var(n) => *stated == Term::Var(n - 1),
            Term::Fun(i, args) => match stated {
                Term::Fun(j, sargs) if i == j && args.len() == sargs.len() => {
                    args.iter().zip(sargs).all(|(a, b)| self.term(a, b, depth))
                }
                _ => false,
            },
        }
    }

    fn formula(&mut self, body: &Formula, stated: &Formula, depth: usize) -> bool {
        use Formula::*;
        match (body, stated) {
            (Pre(i, args), Pre(j, sargs)) if i == j && args.len() == sargs.len() => {
                args.iter().zip(sargs).all(|(a, b)| self.term(a, b, depth))
            }
            (Imp(p, q), Imp(sp, sq)) | (Dis(p, q), Dis(sp, sq)) | (Con(p, q), Con(sp, sq)) => {
                self.formula(p, sp, depth) && self.formula(q, sq, depth)
            }
            (Exi(p), Exi(sp)) | (Uni(p), Uni(sp)) => self.formula(p, sp, depth + 1),
            (Neg(p), Neg(sp)) => self.formula(p, sp, depth),
            _ => false,
        }
    }
}

pub fn infer_instantiation(body: &Formula, stated_head: &Formula) -> Instantiation {
    let mut m = Matcher { candidate: None };
    if !m.formula(body, stated_head, 0) {
        return Instantiation::NoMatch;
    }
    match m.candidate {
        None => Instantiation::Ambiguous,
        Some(t) => {
            if sub(0, &t, body) == *stated_head {
                Instantiation::Found(t)
            } else {
                Instantiation::NoMatch
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(args: Vec<Term>) -> Formula {
        Formula::pre(0, args)
    }
    fn a() -> Term {
        Term::constant(0)
    }
    fn b() -> Term {
        Term::constant(1)
    }

    #[test]
    fn recovers_term_under_binder() {
        let body = Formula::uni(p(vec![Term::Var(1), Term::Var(0)]));
        let stated = Formula::uni(p(vec![a(), Term::Var(0)]));
        assert_eq!(
            infer_instantiation(&body, &stated),
            Instantiation::Found(a())
        );
    }

    #[test]
    fn sites_must_agree() {
        let body = p(vec![Term::Var(0), Term::Var(0)]);
        assert_eq!(
            infer_instantiation(&body, &p(vec![a(), b()])),
            Instantiation::NoMatch
        );
        assert_eq!(
            infer_instantiation(&body, &p(vec![a(), a()])),
            Instantiation::Found(a())
        );
    }

    #[test]
    fn vacuous_body_is_ambiguous() {
        let body = p(vec![a()]);
        assert_eq!(
            infer_instantiation(&body, &p(vec![a()])),
            Instantiation::Ambiguous
        );
        assert_eq!(
            infer_instantiation(&body, &p(vec![b()])),
            Instantiation::NoMatch
        );
    }

    #[test]
    fn captured_variable_is_rejected() {
        // Exi p[1, 0]: the stated Exi p[0, 0] would need t = Var -1
        let body = Formula::exi(p(vec![Term::Var(1), Term::Var(0)]));
        let stated = Formula::exi(p(vec![Term::Var(0), Term::Var(0)]));
        assert_eq!(infer_instantiation(&body, &stated), Instantiation::NoMatch);
    }

    #[test]
    fn free_term_is_unshifted() {
        let body = Formula::exi(p(vec![Term::Var(1)]));
        let t = Term::fun(2, vec![Term::Var(3)]);
        let stated = sub(0, &t, &body);
        assert_eq!(infer_instantiation(&body, &stated), Instantiation::Found(t));
    }

    fn arb_term() -> impl Strategy<Value = Term> {
        let leaf = prop_oneof![
            (0usize..3).prop_map(Term::Var),
            (0usize..3).prop_map(Term::constant)
        ];
        leaf.prop_recursive(2, 6, 2, |inner| {
            (0usize..2, prop::collection::vec(inner, 1..3)).prop_map(|(i, args)| Term::Fun(i, args))
        })
    }

    fn arb_formula() -> impl Strategy<Value = Formula> {
        let leaf = (0usize..2, prop::collection::vec(arb_term(), 0..3))
            .prop_map(|(i, args)| Formula::Pre(i, args));
        leaf.prop_recursive(3, 12, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(p, q)| Formula::imp(p, q)),
                (inner.clone(), inner.clone()).prop_map(|(p, q)| Formula::con(p, q)),
                inner.clone().prop_map(Formula::exi),
                inner.prop_map(Formula::neg),
            ]
        })
    }

    proptest! {
        // Whenever the stated formula is an instance, inference finds a term
        // that reproduces it, and finds exactly `t` if the variable occurs.
        #[test]
        fn inverts_substitution(body in arb_formula(), t in arb_term()) {
            let stated = sub(0, &t, &body);
            match infer_instantiation(&body, &stated) {
                Instantiation::Found(u) => {
                    prop_assert_eq!(sub(0, &u, &body), stated);
                    prop_assert_eq!(u, t);
                }
                Instantiation::Ambiguous => {
                    prop_assert_eq!(sub(0, &Term::constant(7), &body), stated);
                }
                Instantiation::NoMatch => prop_assert!(false, "instance not recognised"),
            }
        }
    }
}
