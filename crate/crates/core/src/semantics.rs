//! Truth of formulas under an interpretation, and a brute-force oracle over
//! finite interpretations.
//!
//! The evaluator is generic over the domain. Quantifiers range over an
//! explicitly listed universe, so only finite structures can be evaluated.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::syntax::{free_vars, symbols_of, symbols_of_sequent, Formula, FunId, PredId, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("function symbol {id} with {arity} argument(s) has no denotation")]
    UndefinedFunction { id: FunId, arity: usize },
    #[error("predicate symbol {id} with {arity} argument(s) has no denotation")]
    UndefinedPredicate { id: PredId, arity: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("domain size must be at least 1")]
    EmptyDomain,
    #[error("{count} interpretations exceed the budget of {budget}")]
    BudgetExceeded { count: String, budget: u64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Variable assignment: de Bruijn index to domain element.
pub type Assignment<'a, D> = &'a dyn Fn(usize) -> D;
/// Function denotation.
pub type FunDenotation<'a, D> = &'a dyn Fn(FunId, &[D]) -> Result<D, EvalError>;
/// Predicate denotation.
pub type PredDenotation<'a, D> = &'a dyn Fn(PredId, &[D]) -> Result<bool, EvalError>;

/// `shift(e, v, x)`: below `v` the assignment is unchanged, `v` maps to `x`, and
/// every index above `v` sees what `e` gave the index one lower.
pub fn shift<'a, D: Clone + 'a>(e: Assignment<'a, D>, v: usize, x: D) -> impl Fn(usize) -> D + 'a {
    move |n| {
        if n < v {
            e(n)
        } else if n == v {
            x.clone()
        } else {
            e(n - 1)
        }
    }
}

pub fn eval_term<D: Clone>(
    t: &Term,
    e: Assignment<'_, D>,
    f: FunDenotation<'_, D>,
) -> Result<D, EvalError> {
    match t {
        Term::Var(n) => Ok(e(*n)),
        Term::Fun(i, args) => f(*i, &eval_list(args, e, f)?),
    }
}

pub fn eval_list<D: Clone>(
    ts: &[Term],
    e: Assignment<'_, D>,
    f: FunDenotation<'_, D>,
) -> Result<Vec<D>, EvalError> {
    ts.iter().map(|t| eval_term(t, e, f)).collect()
}

/// An interpretation: assignment `e`, function denotation `f`, predicate
/// denotation `g`, plus the universe quantifiers range over.
pub struct Interpretation<'a, D> {
    pub universe: &'a [D],
    pub e: Assignment<'a, D>,
    pub f: FunDenotation<'a, D>,
    pub g: PredDenotation<'a, D>,
}

impl<D: Clone> Interpretation<'_, D> {
    pub fn eval(&self, p: &Formula) -> Result<bool, EvalError> {
        eval_formula(p, self.e, self.f, self.g, self.universe)
    }
}

pub fn eval_formula<D: Clone>(
    p: &Formula,
    e: Assignment<'_, D>,
    f: FunDenotation<'_, D>,
    g: PredDenotation<'_, D>,
    universe: &[D],
) -> Result<bool, EvalError> {
    Ok(match p {
        Formula::Pre(i, args) => g(*i, &eval_list(args, e, f)?)?,
        Formula::Imp(p, q) => {
            !eval_formula(p, e, f, g, universe)? || eval_formula(q, e, f, g, universe)?
        }
        Formula::Dis(p, q) => {
            eval_formula(p, e, f, g, universe)? || eval_formula(q, e, f, g, universe)?
        }
        Formula::Con(p, q) => {
            eval_formula(p, e, f, g, universe)? && eval_formula(q, e, f, g, universe)?
        }
        Formula::Exi(p) => {
            for x in universe {
                let shifted = shift(e, 0, x.clone());
                if eval_formula(p, &shifted, f, g, universe)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Uni(p) => {
            for x in universe {
                let shifted = shift(e, 0, x.clone());
                if !eval_formula(p, &shifted, f, g, universe)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Neg(p) => !eval_formula(p, e, f, g, universe)?,
    })
}

/// Symbols with arities; tables are keyed on `(id, arity)` so an identifier
/// used at two arities gets two independent denotations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SignatureProfile {
    pub funs: Vec<(FunId, usize)>,
    pub preds: Vec<(PredId, usize)>,
}

impl SignatureProfile {
    pub fn of_formula(p: &Formula) -> Self {
        let s = symbols_of(p);
        SignatureProfile {
            funs: s.funs,
            preds: s.preds,
        }
    }

    pub fn of_sequent(z: &[Formula]) -> Self {
        let s = symbols_of_sequent(z);
        SignatureProfile {
            funs: s.funs,
            preds: s.preds,
        }
    }
}

/// An interpretation over the domain `{0, .., domain_size - 1}` given by full
/// lookup tables. Table cells are ordered lexicographically by argument tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteInterpretation {
    pub domain_size: usize,
    pub fun_tables: BTreeMap<(FunId, usize), Vec<usize>>,
    pub pred_tables: BTreeMap<(PredId, usize), Vec<bool>>,
    /// Free variables not listed here are mapped to 0.
    pub env: BTreeMap<usize, usize>,
}

fn table_index(n: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, a| acc * n + a)
}

/// All argument tuples of the given arity, in table order.
pub fn argument_tuples(n: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

impl FiniteInterpretation {
    pub fn env_value(&self, n: usize) -> usize {
        self.env.get(&n).copied().unwrap_or(0)
    }

    pub fn fun_value(&self, id: FunId, args: &[usize]) -> Result<usize, EvalError> {
        self.fun_tables
            .get(&(id, args.len()))
            .map(|t| t[table_index(self.domain_size, args)])
            .ok_or(EvalError::UndefinedFunction {
                id,
                arity: args.len(),
            })
    }

    pub fn pred_value(&self, id: PredId, args: &[usize]) -> Result<bool, EvalError> {
        self.pred_tables
            .get(&(id, args.len()))
            .map(|t| t[table_index(self.domain_size, args)])
            .ok_or(EvalError::UndefinedPredicate {
                id,
                arity: args.len(),
            })
    }

    pub fn eval_term(&self, t: &Term) -> Result<usize, EvalError> {
        eval_term(t, &|n| self.env_value(n), &|i, xs| self.fun_value(i, xs))
    }

    pub fn eval(&self, p: &Formula) -> Result<bool, EvalError> {
        let universe: Vec<usize> = (0..self.domain_size).collect();
        Interpretation {
            universe: &universe,
            e: &|n| self.env_value(n),
            f: &|i, xs| self.fun_value(i, xs),
            g: &|i, xs| self.pred_value(i, xs),
        }
        .eval(p)
    }
}

/// A sequent holds when at least one of its formulas does.
pub fn sequent_satisfied(z: &[Formula], i: &FiniteInterpretation) -> Result<bool, EvalError> {
    for p in z {
        if i.eval(p)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Cells of the enumeration in order: function table cells (radix `n`),
/// predicate table cells (radix 2), then free-variable cells (radix `n`).
#[derive(Debug, Clone)]
struct Layout {
    n: usize,
    funs: Vec<((FunId, usize), usize)>,
    preds: Vec<((PredId, usize), usize)>,
    env: Vec<usize>,
}

impl Layout {
    fn new(sig: &SignatureProfile, n: usize, env: &[usize]) -> Self {
        let cells = |arity: usize| n.pow(arity as u32);
        Layout {
            n,
            funs: sig.funs.iter().map(|&k| (k, cells(k.1))).collect(),
            preds: sig.preds.iter().map(|&k| (k, cells(k.1))).collect(),
            env: env.to_vec(),
        }
    }

    fn radices(&self) -> Vec<usize> {
        let mut r = Vec::new();
        for (_, c) in &self.funs {
            r.extend(std::iter::repeat_n(self.n, *c));
        }
        for (_, c) in &self.preds {
            r.extend(std::iter::repeat_n(2, *c));
        }
        r.extend(std::iter::repeat_n(self.n, self.env.len()));
        r
    }

    fn count(&self) -> Option<u128> {
        self.radices()
            .iter()
            .try_fold(1u128, |acc, &r| acc.checked_mul(r as u128))
    }

    fn build(&self, digits: &[usize]) -> FiniteInterpretation {
        let mut k = 0;
        let mut fun_tables = BTreeMap::new();
        for (key, c) in &self.funs {
            fun_tables.insert(*key, digits[k..k + c].to_vec());
            k += c;
        }
        let mut pred_tables = BTreeMap::new();
        for (key, c) in &self.preds {
            pred_tables.insert(*key, digits[k..k + c].iter().map(|&d| d == 1).collect());
            k += c;
        }
        let env = self
            .env
            .iter()
            .zip(&digits[k..])
            .map(|(&i, &d)| (i, d))
            .collect();
        FiniteInterpretation {
            domain_size: self.n,
            fun_tables,
            pred_tables,
            env,
        }
    }
}

/// Every finite interpretation of a signature over a fixed domain, each exactly
/// once, in lexicographic order of table cells (last cell varies fastest).
#[derive(Debug, Clone)]
pub struct Interpretations {
    layout: Layout,
    radices: Vec<usize>,
    digits: Option<Vec<usize>>,
}

impl Iterator for Interpretations {
    type Item = FiniteInterpretation;

    fn next(&mut self) -> Option<FiniteInterpretation> {
        let digits = self.digits.as_mut()?;
        let item = self.layout.build(digits);
        let mut k = digits.len();
        loop {
            if k == 0 {
                self.digits = None;
                break;
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < self.radices[k] {
                break;
            }
            digits[k] = 0;
        }
        Some(item)
    }
}

/// Number of interpretations of `sig` over a domain of size `n`, or `None` on
/// overflow.
pub fn interpretation_count(sig: &SignatureProfile, n: usize) -> Option<u128> {
    Layout::new(sig, n, &[]).count()
}

pub fn enumerate_interpretations(
    sig: &SignatureProfile,
    n: usize,
    budget: u64,
) -> Result<Interpretations, SemanticsError> {
    enumerate_with_env(sig, n, &[], budget)
}

/// As [`enumerate_interpretations`], additionally varying the values of the
/// listed free-variable indices.
pub fn enumerate_with_env(
    sig: &SignatureProfile,
    n: usize,
    free: &[usize],
    budget: u64,
) -> Result<Interpretations, SemanticsError> {
    if n == 0 {
        return Err(SemanticsError::EmptyDomain);
    }
    let layout = Layout::new(sig, n, free);
    match layout.count() {
        Some(c) if c <= budget as u128 => {}
        Some(c) => {
            return Err(SemanticsError::BudgetExceeded {
                count: c.to_string(),
                budget,
            })
        }
        None => {
            return Err(SemanticsError::BudgetExceeded {
                count: "more than 2^128".to_string(),
                budget,
            })
        }
    }
    let radices = layout.radices();
    Ok(Interpretations {
        digits: Some(vec![0; radices.len()]),
        radices,
        layout,
    })
}

/// Smallest-domain interpretation falsifying `p`, searching domains
/// `1..=max_domain` in enumeration order.
pub fn find_countermodel(
    p: &Formula,
    max_domain: usize,
    budget: u64,
) -> Result<Option<FiniteInterpretation>, SemanticsError> {
    if max_domain == 0 {
        return Err(SemanticsError::EmptyDomain);
    }
    let sig = SignatureProfile::of_formula(p);
    let free = free_vars(p);
    for n in 1..=max_domain {
        for i in enumerate_with_env(&sig, n, &free, budget)? {
            if !i.eval(p)? {
                return Ok(Some(i));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(id: PredId, args: Vec<Term>) -> Formula {
        Formula::pre(id, args)
    }

    #[test]
    fn shift_cases() {
        let e = |n: usize| n * 10;
        let s = shift(&e, 0, 99);
        assert_eq!(s(0), 99);
        assert_eq!(s(1), e(0));
        assert_eq!(s(4), e(3));
        let s1 = shift(&e, 1, 99);
        assert_eq!(s1(0), e(0));
        assert_eq!(s1(1), 99);
    }

    #[test]
    fn term_evaluation() {
        let e = |n: usize| if n == 0 { 5 } else { n };
        let f = |i: FunId, xs: &[usize]| -> Result<usize, EvalError> {
            Ok(match (i, xs) {
                (0, []) => 7,
                (1, [5]) => 8,
                _ => 0,
            })
        };
        assert_eq!(eval_term(&Term::constant(0), &e, &f).unwrap(), 7);
        assert_eq!(eval_term(&Term::Var(3), &e, &f).unwrap(), 3);
        assert_eq!(
            eval_term(&Term::fun(1, vec![Term::Var(0)]), &e, &f).unwrap(),
            8
        );
    }

    fn unary_pred(table: Vec<bool>) -> FiniteInterpretation {
        FiniteInterpretation {
            domain_size: table.len(),
            fun_tables: BTreeMap::new(),
            pred_tables: BTreeMap::from([((0, 1), table)]),
            env: BTreeMap::new(),
        }
    }

    #[test]
    fn universal_falsified_by_witness() {
        let i = unary_pred(vec![true, false]);
        assert!(!i.eval(&Formula::uni(atom(0, vec![Term::Var(0)]))).unwrap());
        assert!(i.eval(&Formula::exi(atom(0, vec![Term::Var(0)]))).unwrap());
    }

    #[test]
    fn missing_table_is_an_error() {
        let i = unary_pred(vec![true]);
        assert_eq!(
            i.eval(&atom(0, vec![])),
            Err(EvalError::UndefinedPredicate { id: 0, arity: 0 })
        );
        assert_eq!(
            i.eval_term(&Term::constant(3)),
            Err(EvalError::UndefinedFunction { id: 3, arity: 0 })
        );
    }

    #[test]
    fn enumeration_counts() {
        let sig = SignatureProfile {
            funs: vec![],
            preds: vec![(0, 0)],
        };
        assert_eq!(enumerate_interpretations(&sig, 1, 100).unwrap().count(), 2);

        let sig = SignatureProfile {
            funs: vec![(0, 0)],
            preds: vec![(0, 1)],
        };
        let all: Vec<_> = enumerate_interpretations(&sig, 2, 100).unwrap().collect();
        // 2 choices for the constant times 2^2 tables for the predicate
        assert_eq!(all.len(), 2 * 4);
        assert_eq!(interpretation_count(&sig, 2), Some(8));
        for (k, a) in all.iter().enumerate() {
            for b in &all[k + 1..] {
                assert_ne!(a, b);
            }
        }

        let empty = SignatureProfile::default();
        assert_eq!(
            enumerate_interpretations(&empty, 3, 100).unwrap().count(),
            1
        );
    }

    #[test]
    fn enumeration_budget() {
        let sig = SignatureProfile {
            funs: vec![(0, 2)],
            preds: vec![],
        };
        // 3^(3^2) = 19683
        match enumerate_interpretations(&sig, 3, 1000) {
            Err(SemanticsError::BudgetExceeded { count, .. }) => assert_eq!(count, "19683"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            enumerate_interpretations(&sig, 0, 1000),
            Err(SemanticsError::EmptyDomain)
        ));
    }

    #[test]
    fn sequents_are_disjunctions() {
        let p = atom(0, vec![]);
        let sig = SignatureProfile::of_formula(&p);
        for i in enumerate_interpretations(&sig, 1, 10).unwrap() {
            assert!(sequent_satisfied(&[p.clone(), Formula::neg(p.clone())], &i).unwrap());
            assert!(!sequent_satisfied(&[], &i).unwrap());
            assert_eq!(
                sequent_satisfied(std::slice::from_ref(&p), &i).unwrap(),
                i.pred_value(0, &[]).unwrap()
            );
        }
    }

    #[test]
    fn countermodel_for_non_theorem() {
        // Imp p[a] (Uni p[0])
        let p = Formula::imp(
            atom(0, vec![Term::constant(0)]),
            Formula::uni(atom(0, vec![Term::Var(0)])),
        );
        let m = find_countermodel(&p, 2, 1_000_000)
            .unwrap()
            .expect("countermodel");
        assert_eq!(m.domain_size, 2);
        assert_eq!(m.fun_tables[&(0, 0)], vec![0]);
        assert_eq!(m.pred_tables[&(0, 1)], vec![true, false]);

        let q = atom(0, vec![]);
        let m = find_countermodel(&q, 1, 10).unwrap().unwrap();
        assert_eq!(m.pred_tables[&(0, 0)], vec![false]);

        let a = Term::constant(0);
        let b = Term::constant(1);
        let em = Formula::dis(
            atom(0, vec![a.clone(), b.clone()]),
            Formula::neg(atom(0, vec![a, b])),
        );
        assert_eq!(find_countermodel(&em, 3, 1_000_000).unwrap(), None);
    }

    #[test]
    fn free_variables_are_varied() {
        // the free variable is part of the search space
        let p = atom(0, vec![Term::Var(0)]);
        let m = find_countermodel(&p, 1, 10).unwrap().unwrap();
        assert_eq!(m.env_value(0), 0);
        assert_eq!(m.pred_tables[&(0, 1)], vec![false]);
    }
}
