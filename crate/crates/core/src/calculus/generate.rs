//! Random derivations, built forwards from axioms.
//!
//! A derivation tree grows from `Basic` leaves by applying rules top-down, then
//! its root sequent is folded into one formula with `AlphaDis` and the tree is
//! flattened into a script in pre-order. Every script produced this way checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{infer_instantiation, Instantiation, ProofScript, ProofState, RuleApp, RuleId, Step};
use crate::diagnostics::SourceSpan;
use crate::ops::{member, news, sub};
use crate::syntax::{formula_size, Formula, FunId, Sequent, Term};

/// Limits on generated derivations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenBudget {
    /// Largest formula anywhere in the derivation, see [`formula_size`].
    pub max_formula_size: usize,
    /// Largest number of steps in the script.
    pub max_steps: usize,
    /// Rules the derivation may use. `Basic` is required; `AlphaDis` is used to
    /// combine the final sequent into one formula whether listed or not.
    pub rules: Vec<RuleId>,
}

impl Default for GenBudget {
    fn default() -> Self {
        GenBudget {
            max_formula_size: 24,
            max_steps: 24,
            rules: RuleId::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerationFailure {
    #[error("Basic must be among the allowed rules")]
    NoAxiom,
    #[error("no derivation fits the budget after {attempts} attempts")]
    Exhausted { attempts: usize },
}

const ATTEMPTS: usize = 200;
const CONSTANTS: [FunId; 3] = [0, 1, 2];
const UNARY_FUN: FunId = 3;

#[derive(Debug, Clone)]
struct Node {
    seq: Sequent,
    app: RuleApp,
    children: Vec<Node>,
}

impl Node {
    fn size(&self) -> usize {
        1 + self.children.iter().map(Node::size).sum::<usize>()
    }

    fn cost(&self) -> usize {
        self.size() + self.seq.len().saturating_sub(1)
    }
}

fn cons(head: Formula, tail: &[Formula]) -> Sequent {
    let mut z = vec![head];
    z.extend_from_slice(tail);
    z
}

/// Replaces chosen occurrences of the closed term `target` by the variable
/// about to be bound, shifting other free variables up by one.
fn abstract_term(t: &Term, target: &Term, depth: usize, pick: &mut dyn FnMut() -> bool) -> Term {
    if t == target && pick() {
        return Term::Var(depth);
    }
    match t {
        Term::Var(n) if *n >= depth => Term::Var(n + 1),
        Term::Var(n) => Term::Var(*n),
        Term::Fun(i, args) => Term::Fun(
            *i,
            args.iter()
                .map(|a| abstract_term(a, target, depth, pick))
                .collect(),
        ),
    }
}

fn abstract_formula(
    p: &Formula,
    target: &Term,
    depth: usize,
    pick: &mut dyn FnMut() -> bool,
) -> Formula {
    let go = |q: &Formula, d: usize, pick: &mut dyn FnMut() -> bool| {
        abstract_formula(q, target, d, pick)
    };
    match p {
        Formula::Pre(i, args) => Formula::Pre(
            *i,
            args.iter()
                .map(|a| abstract_term(a, target, depth, pick))
                .collect(),
        ),
        Formula::Imp(a, b) => {
            let a = go(a, depth, pick);
            Formula::imp(a, go(b, depth, pick))
        }
        Formula::Dis(a, b) => {
            let a = go(a, depth, pick);
            Formula::dis(a, go(b, depth, pick))
        }
        Formula::Con(a, b) => {
            let a = go(a, depth, pick);
            Formula::con(a, go(b, depth, pick))
        }
        Formula::Exi(a) => Formula::exi(go(a, depth + 1, pick)),
        Formula::Uni(a) => Formula::uni(go(a, depth + 1, pick)),
        Formula::Neg(a) => Formula::neg(go(a, depth, pick)),
    }
}

fn closed_subterms(p: &Formula, out: &mut Vec<Term>) {
    fn term(t: &Term, out: &mut Vec<Term>) {
        if t.is_closed() && !out.contains(t) {
            out.push(t.clone());
        }
        if let Term::Fun(_, args) = t {
            args.iter().for_each(|a| term(a, out));
        }
    }
    match p {
        Formula::Pre(_, args) => args.iter().for_each(|a| term(a, out)),
        Formula::Imp(a, b) | Formula::Dis(a, b) | Formula::Con(a, b) => {
            closed_subterms(a, out);
            closed_subterms(b, out);
        }
        Formula::Exi(a) | Formula::Uni(a) | Formula::Neg(a) => closed_subterms(a, out),
    }
}

struct Generator<'a> {
    rng: ChaCha8Rng,
    budget: &'a GenBudget,
}

impl Generator<'_> {
    fn allowed(&self, r: RuleId) -> bool {
        self.budget.rules.contains(&r)
    }

    fn term(&mut self) -> Term {
        let c = Term::constant(*CONSTANTS.choose(&mut self.rng).expect("non-empty"));
        if self.rng.gen_bool(0.2) {
            Term::fun(UNARY_FUN, vec![c])
        } else {
            c
        }
    }

    fn atom(&mut self) -> Formula {
        match self.rng.gen_range(0..3) {
            0 => Formula::pre(0, vec![self.term()]),
            1 => Formula::pre(1, vec![self.term(), self.term()]),
            _ => Formula::pre(2, vec![]),
        }
    }

    fn literal(&mut self) -> Formula {
        let a = self.atom();
        if self.rng.gen_bool(0.3) {
            Formula::neg(a)
        } else {
            a
        }
    }

    fn fits(&self, z: &[Formula]) -> bool {
        z.iter()
            .all(|p| formula_size(p) <= self.budget.max_formula_size)
    }

    fn leaf(&mut self) -> Node {
        let p = self.atom();
        let extras = if self.budget.max_steps > 2 {
            self.rng.gen_range(0..=2)
        } else {
            0
        };
        let mut tail = vec![Formula::neg(p.clone())];
        for _ in 0..extras {
            tail.push(self.literal());
        }
        tail.shuffle(&mut self.rng);
        Node {
            seq: cons(p, &tail),
            app: RuleApp::new(RuleId::Basic),
            children: Vec::new(),
        }
    }

    /// Puts `child` under an `Ext` step concluding `target`, which must contain
    /// every formula of the child's sequent. No step is added if they agree.
    fn extend_to(&self, child: Node, target: Sequent) -> Option<Node> {
        if child.seq == target {
            return Some(child);
        }
        if !self.allowed(RuleId::Ext) {
            return None;
        }
        debug_assert!(child.seq.iter().all(|p| member(p, &target)));
        Some(Node {
            seq: target,
            app: RuleApp::new(RuleId::Ext),
            children: vec![child],
        })
    }

    /// Splits off the formulas at `idx` (in that order) from the rest.
    fn focus(z: &[Formula], idx: &[usize]) -> (Vec<Formula>, Vec<Formula>) {
        let picked = idx.iter().map(|&i| z[i].clone()).collect();
        let rest = z
            .iter()
            .enumerate()
            .filter(|(i, _)| !idx.contains(i))
            .map(|(_, p)| p.clone())
            .collect();
        (picked, rest)
    }

    /// A position satisfying `ok`, preferring the front when `Ext` is unavailable.
    fn position(
        &mut self,
        z: &[Formula],
        avoid: Option<usize>,
        ok: impl Fn(&Formula) -> bool,
    ) -> Option<usize> {
        let cands: Vec<usize> = (0..z.len())
            .filter(|&i| Some(i) != avoid && ok(&z[i]))
            .collect();
        if !self.allowed(RuleId::Ext) {
            let front = if avoid.is_some() { 1 } else { 0 };
            return cands.contains(&front).then_some(front);
        }
        cands.choose(&mut self.rng).copied()
    }

    fn gamma_body(&mut self, h: &Formula) -> (Formula, Term, bool) {
        let mut terms = Vec::new();
        closed_subterms(h, &mut terms);
        let t = match terms.choose(&mut self.rng) {
            Some(t) if !self.rng.gen_bool(0.15) => t.clone(),
            _ => self.term(),
        };
        let rng = &mut self.rng;
        let body = abstract_formula(h, &t, 0, &mut || rng.gen_bool(0.7));
        debug_assert_eq!(sub(0, &t, &body), *h);
        let inferable = infer_instantiation(&body, h) == Instantiation::Found(t.clone());
        let hint = !inferable || self.rng.gen_bool(0.3);
        (body, t, hint)
    }

    /// Abstracts every occurrence of some constant that is new to `rest`.
    fn delta_body(&mut self, h: &Formula, rest: &[Formula]) -> Option<Formula> {
        let mut terms = Vec::new();
        closed_subterms(h, &mut terms);
        let mut consts: Vec<FunId> = terms
            .iter()
            .filter_map(|t| match t {
                Term::Fun(i, args) if args.is_empty() => Some(*i),
                _ => None,
            })
            .collect();
        consts.shuffle(&mut self.rng);
        for c in consts {
            let body = abstract_formula(h, &Term::constant(c), 0, &mut || true);
            if news(c, &cons(body.clone(), rest)) {
                return Some(body);
            }
        }
        // vacuous quantifier: the checker picks a fresh witness itself
        let body = abstract_formula(h, &Term::constant(usize::MAX), 0, &mut || true);
        Some(body)
    }

    fn unary(&mut self, t: Node) -> Option<Node> {
        const UNARY: [RuleId; 9] = [
            RuleId::AlphaDis,
            RuleId::AlphaImp,
            RuleId::AlphaCon,
            RuleId::GammaExi,
            RuleId::GammaUni,
            RuleId::DeltaUni,
            RuleId::DeltaExi,
            RuleId::NegNeg,
            RuleId::Ext,
        ];
        let rules: Vec<RuleId> = UNARY.into_iter().filter(|r| self.allowed(*r)).collect();
        let rule = *rules.choose(&mut self.rng)?;
        let z = t.seq.clone();
        let is_neg = |p: &Formula| matches!(p, Formula::Neg(_));
        let any = |_: &Formula| true;
        let (idx, concl, app): (Vec<usize>, Formula, RuleApp) = match rule {
            RuleId::Ext => {
                let mut target = z.clone();
                if target.len() < 2 || self.rng.gen_bool(0.5) {
                    let extra = if self.rng.gen_bool(0.5) {
                        self.literal()
                    } else {
                        z.choose(&mut self.rng).expect("non-empty").clone()
                    };
                    target.push(extra);
                }
                target.shuffle(&mut self.rng);
                if target == z || !self.fits(&target) {
                    return None;
                }
                return self.extend_to(t, target);
            }
            RuleId::AlphaDis | RuleId::AlphaImp | RuleId::AlphaCon => {
                if z.len() < 2 {
                    return None;
                }
                let first = match rule {
                    RuleId::AlphaDis => self.position(&z, None, any)?,
                    _ => self.position(&z, None, is_neg)?,
                };
                let second = match rule {
                    RuleId::AlphaCon => self.position(&z, Some(first), is_neg)?,
                    _ => self.position(&z, Some(first), any)?,
                };
                let (a, b) = (z[first].clone(), z[second].clone());
                let concl = match (rule, a, b) {
                    (RuleId::AlphaDis, a, b) => Formula::dis(a, b),
                    (RuleId::AlphaImp, Formula::Neg(a), b) => Formula::imp(*a, b),
                    (_, Formula::Neg(a), Formula::Neg(b)) => Formula::neg(Formula::con(*a, *b)),
                    _ => unreachable!("positions were chosen by shape"),
                };
                (vec![first, second], concl, RuleApp::new(rule))
            }
            RuleId::NegNeg => {
                let i = self.position(&z, None, any)?;
                (
                    vec![i],
                    Formula::neg(Formula::neg(z[i].clone())),
                    RuleApp::new(rule),
                )
            }
            RuleId::GammaExi | RuleId::GammaUni => {
                let i = if rule == RuleId::GammaExi {
                    self.position(&z, None, any)?
                } else {
                    self.position(&z, None, is_neg)?
                };
                let h = match (&z[i], rule) {
                    (Formula::Neg(h), RuleId::GammaUni) => (**h).clone(),
                    (h, _) => h.clone(),
                };
                let (body, term, hint) = self.gamma_body(&h);
                let concl = if rule == RuleId::GammaExi {
                    Formula::exi(body)
                } else {
                    Formula::neg(Formula::uni(body))
                };
                let app = if hint {
                    RuleApp::with_hint(rule, term)
                } else {
                    RuleApp::new(rule)
                };
                (vec![i], concl, app)
            }
            RuleId::DeltaUni | RuleId::DeltaExi => {
                let i = if rule == RuleId::DeltaUni {
                    self.position(&z, None, any)?
                } else {
                    self.position(&z, None, is_neg)?
                };
                let (_, rest) = Self::focus(&z, &[i]);
                let h = match (&z[i], rule) {
                    (Formula::Neg(h), RuleId::DeltaExi) => (**h).clone(),
                    (h, _) => h.clone(),
                };
                let body = self.delta_body(&h, &rest)?;
                let concl = if rule == RuleId::DeltaUni {
                    Formula::uni(body)
                } else {
                    Formula::neg(Formula::exi(body))
                };
                (vec![i], concl, RuleApp::new(rule))
            }
            RuleId::Basic | RuleId::BetaCon | RuleId::BetaImp | RuleId::BetaDis => return None,
        };
        let (picked, rest) = Self::focus(&z, &idx);
        let premise: Sequent = picked.into_iter().chain(rest.iter().cloned()).collect();
        let seq = cons(concl, &rest);
        if !self.fits(&seq) {
            return None;
        }
        let child = self.extend_to(t, premise)?;
        Some(Node {
            seq,
            app,
            children: vec![child],
        })
    }

    fn branching(&mut self, left: Node, right: Node) -> Option<Node> {
        let rules: Vec<RuleId> = [RuleId::BetaCon, RuleId::BetaImp, RuleId::BetaDis]
            .into_iter()
            .filter(|r| self.allowed(*r))
            .collect();
        let rule = *rules.choose(&mut self.rng)?;
        let is_neg = |p: &Formula| matches!(p, Formula::Neg(_));
        let any = |_: &Formula| true;
        let i = match rule {
            RuleId::BetaDis => self.position(&left.seq, None, is_neg)?,
            _ => self.position(&left.seq, None, any)?,
        };
        let j = match rule {
            RuleId::BetaCon => self.position(&right.seq, None, any)?,
            _ => self.position(&right.seq, None, is_neg)?,
        };
        let (a, rest1) = Self::focus(&left.seq, &[i]);
        let (b, rest2) = Self::focus(&right.seq, &[j]);
        let (a, b) = (a[0].clone(), b[0].clone());
        let mut z = rest1;
        for p in rest2 {
            if !member(&p, &z) {
                z.push(p);
            }
        }
        let concl = match (rule, &a, &b) {
            (RuleId::BetaCon, a, b) => Formula::con(a.clone(), b.clone()),
            (RuleId::BetaImp, a, Formula::Neg(b)) => {
                Formula::neg(Formula::imp(a.clone(), (**b).clone()))
            }
            (RuleId::BetaDis, Formula::Neg(a), Formula::Neg(b)) => {
                Formula::neg(Formula::dis((**a).clone(), (**b).clone()))
            }
            _ => unreachable!("positions were chosen by shape"),
        };
        let seq = cons(concl, &z);
        if !self.fits(&seq) {
            return None;
        }
        let l = self.extend_to(left, cons(a, &z))?;
        let r = self.extend_to(right, cons(b, &z))?;
        Some(Node {
            seq,
            app: RuleApp::new(rule),
            children: vec![l, r],
        })
    }

    fn grow(&mut self, limit: usize) -> Node {
        let mut t = self.leaf();
        let mut misses = 0;
        while misses < 12 && !self.rng.gen_bool(0.12) {
            let branch = self.rng.gen_bool(0.25) && limit > t.cost() + 2;
            let cand = if branch {
                let other = self.grow((limit - t.cost()) / 2);
                self.branching(t.clone(), other)
            } else {
                self.unary(t.clone())
            };
            match cand {
                Some(c) if c.cost() <= limit => {
                    t = c;
                    misses = 0;
                }
                _ => misses += 1,
            }
        }
        t
    }

    fn collapse(mut t: Node) -> Node {
        while t.seq.len() >= 2 {
            let (a, rest) = t.seq.split_at(2);
            let seq = cons(Formula::dis(a[0].clone(), a[1].clone()), rest);
            t = Node {
                seq,
                app: RuleApp::new(RuleId::AlphaDis),
                children: vec![t],
            };
        }
        t
    }
}

fn linearize(root: &Node) -> ProofScript {
    let mut steps = Vec::new();
    // open goals, first goal on top
    let mut stack: Vec<&Node> = vec![root];
    while let Some(n) = stack.pop() {
        stack.extend(n.children.iter().rev());
        let open_goals = stack.iter().rev().map(|c| c.seq.clone()).collect();
        steps.push(Step {
            app: n.app.clone(),
            stated: ProofState::new(open_goals),
            span: SourceSpan::default(),
        });
    }
    ProofScript {
        goal: root.seq[0].clone(),
        steps,
        span: SourceSpan::default(),
    }
}

/// A random complete derivation of a single-formula goal, reproducible from
/// `seed`. Symbols are drawn from a fixed small signature: predicates 0
/// (unary), 1 (binary) and 2 (nullary), constants 0 to 2 and the unary
/// function 3.
pub fn random_derivation(seed: u64, budget: &GenBudget) -> Result<ProofScript, GenerationFailure> {
    if !budget.rules.contains(&RuleId::Basic) {
        return Err(GenerationFailure::NoAxiom);
    }
    let mut g = Generator {
        rng: ChaCha8Rng::seed_from_u64(seed),
        budget,
    };
    for _ in 0..ATTEMPTS {
        let t = Generator::collapse(g.grow(budget.max_steps));
        if t.size() <= budget.max_steps && formula_size(&t.seq[0]) <= budget.max_formula_size {
            return Ok(linearize(&t));
        }
    }
    Err(GenerationFailure::Exhausted { attempts: ATTEMPTS })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::check_script;

    #[test]
    fn derivations_check() {
        for seed in 0..300 {
            let s = random_derivation(seed, &GenBudget::default()).unwrap();
            let d = check_script(&s);
            assert!(d.is_empty(), "seed {seed}: {d:?}");
            assert!(s.steps.len() <= 24);
        }
    }

    #[test]
    fn reproducible() {
        let b = GenBudget::default();
        assert_eq!(
            random_derivation(7, &b).unwrap(),
            random_derivation(7, &b).unwrap()
        );
    }

    #[test]
    fn smallest_budget_gives_excluded_middle() {
        let b = GenBudget {
            max_formula_size: 10,
            max_steps: 2,
            rules: vec![RuleId::Basic, RuleId::Ext],
        };
        for seed in 0..20 {
            let s = random_derivation(seed, &b).unwrap();
            let rules: Vec<RuleId> = s.steps.iter().map(|st| st.app.rule).collect();
            assert_eq!(rules, vec![RuleId::AlphaDis, RuleId::Basic]);
            match &s.goal {
                Formula::Dis(p, q) => assert_eq!(**q, Formula::neg((**p).clone())),
                other => panic!("unexpected goal {other}"),
            }
        }
    }

    #[test]
    fn rule_restriction_is_respected() {
        let b = GenBudget {
            max_formula_size: 30,
            max_steps: 20,
            rules: vec![RuleId::Basic, RuleId::NegNeg, RuleId::BetaCon],
        };
        for seed in 0..50 {
            let s = random_derivation(seed, &b).unwrap();
            assert!(s.steps.iter().all(|st| matches!(
                st.app.rule,
                RuleId::Basic | RuleId::NegNeg | RuleId::BetaCon | RuleId::AlphaDis
            )));
            assert!(check_script(&s).is_empty());
        }
    }

    #[test]
    fn every_rule_is_exercised() {
        let mut seen = std::collections::BTreeSet::new();
        for seed in 0..300 {
            for st in random_derivation(seed, &GenBudget::default())
                .unwrap()
                .steps
            {
                seen.insert(st.app.rule);
            }
        }
        assert_eq!(seen.len(), RuleId::ALL.len());
    }

    #[test]
    fn missing_axiom_fails() {
        let b = GenBudget {
            rules: vec![RuleId::Ext],
            ..GenBudget::default()
        };
        assert_eq!(random_derivation(0, &b), Err(GenerationFailure::NoAxiom));
    }
}
