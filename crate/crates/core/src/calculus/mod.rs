//! The proof kernel.
//!
//! Thirteen rule schemas over one-sided sequents, each read backwards: a rule
//! turns the first open goal into its premises. A script is checked as a state
//! machine over the list of open goals, always working on the first one, and
//! the author's stated state must equal the computed one exactly.

mod generate;
mod infer;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use generate::{random_derivation, GenBudget, GenerationFailure};
pub use infer::{infer_instantiation, Instantiation};

use crate::diagnostics::{Category, Diagnostic, SourceSpan};
use crate::ops::{ext, member, news, sub};
use crate::surface::{render_formula, render_sequent, render_state, render_term, NameMap};
use crate::syntax::{symbols_of_sequent, Formula, FunId, Sequent, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    Basic,
    AlphaDis,
    AlphaImp,
    AlphaCon,
    BetaCon,
    BetaImp,
    BetaDis,
    GammaExi,
    GammaUni,
    DeltaUni,
    DeltaExi,
    NegNeg,
    Ext,
}

impl RuleId {
    pub const ALL: [RuleId; 13] = [
        RuleId::Basic,
        RuleId::AlphaDis,
        RuleId::AlphaImp,
        RuleId::AlphaCon,
        RuleId::BetaCon,
        RuleId::BetaImp,
        RuleId::BetaDis,
        RuleId::GammaExi,
        RuleId::GammaUni,
        RuleId::DeltaUni,
        RuleId::DeltaExi,
        RuleId::NegNeg,
        RuleId::Ext,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::Basic => "Basic",
            RuleId::AlphaDis => "AlphaDis",
            RuleId::AlphaImp => "AlphaImp",
            RuleId::AlphaCon => "AlphaCon",
            RuleId::BetaCon => "BetaCon",
            RuleId::BetaImp => "BetaImp",
            RuleId::BetaDis => "BetaDis",
            RuleId::GammaExi => "GammaExi",
            RuleId::GammaUni => "GammaUni",
            RuleId::DeltaUni => "DeltaUni",
            RuleId::DeltaExi => "DeltaExi",
            RuleId::NegNeg => "NegNeg",
            RuleId::Ext => "Ext",
        }
    }

    /// Only the γ-rules may carry an instantiation hint.
    pub fn takes_hint(self) -> bool {
        matches!(self, RuleId::GammaExi | RuleId::GammaUni)
    }

    /// The rule schema, premises first.
    pub fn schema(self) -> &'static str {
        match self {
            RuleId::Basic => "member (Neg p) z  ⟹  [p, z]",
            RuleId::AlphaDis => "[p, q, z]  ⟹  [Dis p q, z]",
            RuleId::AlphaImp => "[Neg p, q, z]  ⟹  [Imp p q, z]",
            RuleId::AlphaCon => "[Neg p, Neg q, z]  ⟹  [Neg (Con p q), z]",
            RuleId::BetaCon => "[p, z] and [q, z]  ⟹  [Con p q, z]",
            RuleId::BetaImp => "[p, z] and [Neg q, z]  ⟹  [Neg (Imp p q), z]",
            RuleId::BetaDis => "[Neg p, z] and [Neg q, z]  ⟹  [Neg (Dis p q), z]",
            RuleId::GammaExi => "[sub 0 t p, z]  ⟹  [Exi p, z]",
            RuleId::GammaUni => "[Neg (sub 0 t p), z]  ⟹  [Neg (Uni p), z]",
            RuleId::DeltaUni => "[sub 0 (Fun i []) p, z] and news i (p # z)  ⟹  [Uni p, z]",
            RuleId::DeltaExi => {
                "[Neg (sub 0 (Fun i []) p), z] and news i (p # z)  ⟹  [Neg (Exi p), z]"
            }
            RuleId::NegNeg => "[p, z]  ⟹  [Neg (Neg p), z]",
            RuleId::Ext => "[z] and ext y z  ⟹  [y]",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown rule `{0}`")]
pub struct UnknownRule(pub String);

impl FromStr for RuleId {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleId::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| UnknownRule(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleApp {
    pub rule: RuleId,
    pub hint: Option<Term>,
}

impl RuleApp {
    pub fn new(rule: RuleId) -> Self {
        RuleApp { rule, hint: None }
    }

    pub fn with_hint(rule: RuleId, hint: Term) -> Self {
        RuleApp {
            rule,
            hint: Some(hint),
        }
    }
}

/// Open goals during checking; empty means the derivation is complete.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ProofState {
    pub open_goals: Vec<Sequent>,
}

impl ProofState {
    pub fn new(open_goals: Vec<Sequent>) -> Self {
        ProofState { open_goals }
    }

    pub fn initial(goal: &Formula) -> Self {
        ProofState {
            open_goals: vec![vec![goal.clone()]],
        }
    }

    pub fn is_complete(&self) -> bool {
        self.open_goals.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub app: RuleApp,
    /// Every open goal after the rule, not just the ones it produced.
    pub stated: ProofState,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofScript {
    pub goal: Formula,
    pub steps: Vec<Step>,
    /// Location of the goal formula.
    pub span: SourceSpan,
}

impl ProofScript {
    /// Same goal, rules, hints and stated states; source positions ignored.
    pub fn same_derivation(&self, other: &ProofScript) -> bool {
        self.goal == other.goal
            && self.steps.len() == other.steps.len()
            && self
                .steps
                .iter()
                .zip(&other.steps)
                .all(|(a, b)| a.app == b.app && a.stated == b.stated)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("{rule} does not apply to an empty sequent")]
    EmptyGoal { rule: RuleId },
    #[error("{rule} does not apply: the first formula is a {} formula", head.constructor_name())]
    ShapeMismatch { rule: RuleId, head: Formula },
    #[error("Basic needs the negation of the first formula later in the sequent")]
    BasicMisapplied { head: Formula },
    #[error("cannot infer the term instantiated by {rule}")]
    MissingHint { rule: RuleId },
    #[error("{rule} witness {witness} is not new to the sequent")]
    FreshnessViolation { rule: RuleId, witness: FunId },
    #[error("{rule} must instantiate with a fresh constant")]
    BadWitness { rule: RuleId, witness: Term },
    #[error("the first stated formula is not an instance of the {rule} formula")]
    NoInstance { rule: RuleId },
    #[error("Ext cannot introduce a formula that is not in the goal")]
    ExtNotSubset { missing: Formula },
    #[error("Ext needs a stated sequent")]
    ExtWithoutPremise,
}

impl RuleError {
    pub fn category(&self) -> Category {
        match self {
            RuleError::EmptyGoal { .. } | RuleError::ShapeMismatch { .. } => {
                Category::ShapeMismatch
            }
            RuleError::BasicMisapplied { .. } => Category::BasicMisapplied,
            RuleError::MissingHint { .. } => Category::MissingHint,
            RuleError::FreshnessViolation { .. } => Category::FreshnessViolation,
            RuleError::ExtNotSubset { .. } => Category::ExtNotSubset,
            RuleError::BadWitness { .. }
            | RuleError::NoInstance { .. }
            | RuleError::ExtWithoutPremise => Category::StateMismatch,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("no open goals remain")]
    NoOpenGoals,
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error("the stated state does not match the rule application")]
    StateMismatch { expected: ProofState },
}

impl StepError {
    pub fn category(&self) -> Category {
        match self {
            StepError::NoOpenGoals => Category::NoOpenGoals,
            StepError::Rule(e) => e.category(),
            StepError::StateMismatch { .. } => Category::StateMismatch,
        }
    }
}

fn cons(head: Formula, tail: &[Formula]) -> Sequent {
    let mut z = Vec::with_capacity(tail.len() + 1);
    z.push(head);
    z.extend_from_slice(tail);
    z
}

fn cons2(first: Formula, second: Formula, tail: &[Formula]) -> Sequent {
    let mut z = Vec::with_capacity(tail.len() + 2);
    z.push(first);
    z.push(second);
    z.extend_from_slice(tail);
    z
}

/// Smallest function identifier that occurs nowhere in `z`, at any arity.
pub fn smallest_fresh(z: &[Formula]) -> FunId {
    let used = symbols_of_sequent(z).funs;
    (0..)
        .find(|i| used.iter().all(|(j, _)| j != i))
        .unwrap_or(0)
}

fn gamma_term(
    rule: RuleId,
    body: &Formula,
    hint: Option<&Term>,
    stated: Option<&Formula>,
) -> Result<Term, RuleError> {
    if let Some(t) = hint {
        return Ok(t.clone());
    }
    match stated.map(|s| infer_instantiation(body, s)) {
        Some(Instantiation::Found(t)) => Ok(t),
        _ => Err(RuleError::MissingHint { rule }),
    }
}

fn delta_witness(
    rule: RuleId,
    body: &Formula,
    goal: &[Formula],
    stated: Option<&Formula>,
) -> Result<FunId, RuleError> {
    let witness = match stated.map(|s| infer_instantiation(body, s)) {
        Some(Instantiation::Found(Term::Fun(i, args))) if args.is_empty() => i,
        Some(Instantiation::Found(t)) => return Err(RuleError::BadWitness { rule, witness: t }),
        Some(Instantiation::NoMatch) => return Err(RuleError::NoInstance { rule }),
        Some(Instantiation::Ambiguous) | None => smallest_fresh(goal),
    };
    let (_, tail) = goal.split_first().expect("non-empty goal");
    if news(witness, &cons(body.clone(), tail)) {
        Ok(witness)
    } else {
        Err(RuleError::FreshnessViolation { rule, witness })
    }
}

/// Premises of `app` when read backwards from `goal`.
///
/// `stated_first` is the first sequent the author wrote after the rule; it is
/// consulted to recover γ-instantiations without a hint, δ-witnesses, and the
/// premise of `Ext`.
pub fn premises_of(
    app: &RuleApp,
    goal: &[Formula],
    stated_first: Option<&[Formula]>,
) -> Result<Vec<Sequent>, RuleError> {
    use Formula::*;
    let rule = app.rule;
    if rule == RuleId::Ext {
        let z = stated_first.ok_or(RuleError::ExtWithoutPremise)?;
        if ext(goal, z) {
            return Ok(vec![z.to_vec()]);
        }
        let missing = z.iter().find(|p| !member(p, goal)).expect("ext failed");
        return Err(RuleError::ExtNotSubset {
            missing: missing.clone(),
        });
    }
    let (head, z) = goal.split_first().ok_or(RuleError::EmptyGoal { rule })?;
    let stated_head = stated_first.and_then(|s| s.first());
    let mismatch = || RuleError::ShapeMismatch {
        rule,
        head: head.clone(),
    };
    Ok(match (rule, head) {
        (RuleId::Basic, p) => {
            if member(&Formula::neg(p.clone()), z) {
                Vec::new()
            } else {
                return Err(RuleError::BasicMisapplied { head: p.clone() });
            }
        }
        (RuleId::AlphaDis, Dis(p, q)) => vec![cons2((**p).clone(), (**q).clone(), z)],
        (RuleId::AlphaImp, Imp(p, q)) => vec![cons2(Formula::neg((**p).clone()), (**q).clone(), z)],
        (RuleId::AlphaCon, Neg(inner)) => match &**inner {
            Con(p, q) => vec![cons2(
                Formula::neg((**p).clone()),
                Formula::neg((**q).clone()),
                z,
            )],
            _ => return Err(mismatch()),
        },
        (RuleId::BetaCon, Con(p, q)) => vec![cons((**p).clone(), z), cons((**q).clone(), z)],
        (RuleId::BetaImp, Neg(inner)) => match &**inner {
            Imp(p, q) => vec![cons((**p).clone(), z), cons(Formula::neg((**q).clone()), z)],
            _ => return Err(mismatch()),
        },
        (RuleId::BetaDis, Neg(inner)) => match &**inner {
            Dis(p, q) => vec![
                cons(Formula::neg((**p).clone()), z),
                cons(Formula::neg((**q).clone()), z),
            ],
            _ => return Err(mismatch()),
        },
        (RuleId::NegNeg, Neg(inner)) => match &**inner {
            Neg(p) => vec![cons((**p).clone(), z)],
            _ => return Err(mismatch()),
        },
        (RuleId::GammaExi, Exi(p)) => {
            let t = gamma_term(rule, p, app.hint.as_ref(), stated_head)?;
            vec![cons(sub(0, &t, p), z)]
        }
        (RuleId::GammaUni, Neg(inner)) => match &**inner {
            Uni(p) => {
                let stated_body = match stated_head {
                    Some(Neg(s)) => Some(&**s),
                    _ => None,
                };
                let t = gamma_term(rule, p, app.hint.as_ref(), stated_body)?;
                vec![cons(Formula::neg(sub(0, &t, p)), z)]
            }
            _ => return Err(mismatch()),
        },
        (RuleId::DeltaUni, Uni(p)) => {
            let i = delta_witness(rule, p, goal, stated_head)?;
            vec![cons(sub(0, &Term::constant(i), p), z)]
        }
        (RuleId::DeltaExi, Neg(inner)) => match &**inner {
            Exi(p) => {
                let stated_body = match stated_head {
                    Some(Neg(s)) => Some(&**s),
                    Some(_) => return Err(RuleError::NoInstance { rule }),
                    None => None,
                };
                let i = delta_witness(rule, p, goal, stated_body)?;
                vec![cons(Formula::neg(sub(0, &Term::constant(i), p)), z)]
            }
            _ => return Err(mismatch()),
        },
        _ => return Err(mismatch()),
    })
}

/// Applies `step` to the first open goal of `state`. On success the new state
/// is the stated one, which equals the computed one.
pub fn check_step(state: &ProofState, step: &Step) -> Result<ProofState, StepError> {
    let (goal, rest) = state
        .open_goals
        .split_first()
        .ok_or(StepError::NoOpenGoals)?;
    let stated_first = step.stated.open_goals.first().map(Vec::as_slice);
    let mut open_goals = premises_of(&step.app, goal, stated_first)?;
    open_goals.extend_from_slice(rest);
    let expected = ProofState { open_goals };
    if expected == step.stated {
        Ok(expected)
    } else {
        Err(StepError::StateMismatch { expected })
    }
}

/// Checks a script with numeric rendering in diagnostics.
pub fn check_script(s: &ProofScript) -> Vec<Diagnostic> {
    check_script_named(s, None)
}

/// Checks a script from the initial state `[[goal]]`. Stops at the first error;
/// warnings gathered before it are kept. An empty result means the script is a
/// complete derivation.
pub fn check_script_named(s: &ProofScript, names: Option<&NameMap>) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let mut state = ProofState::initial(&s.goal);
    for step in &s.steps {
        if !state.is_complete() && step.stated == state {
            diags.push(Diagnostic::new(
                Category::UnchangedSequent,
                step.span,
                format!(
                    "the state after {} is identical to the state before it",
                    step.app.rule
                ),
            ));
        }
        match check_step(&state, step) {
            Ok(next) => state = next,
            Err(e) => {
                diags.push(step_diagnostic(&e, &state, step, names));
                return diags;
            }
        }
    }
    if !state.is_complete() {
        let span = s.steps.last().map_or(s.span, |st| st.span);
        let n = state.open_goals.len();
        diags.push(
            Diagnostic::new(
                Category::IncompleteProof,
                span,
                format!(
                    "proof ends with {n} open goal{}",
                    if n == 1 { "" } else { "s" }
                ),
            )
            .with_actual(render_state(&state, names)),
        );
    }
    diags
}

pub fn is_verified(s: &ProofScript) -> bool {
    !crate::diagnostics::has_errors(&check_script(s))
}

fn step_diagnostic(
    e: &StepError,
    state: &ProofState,
    step: &Step,
    names: Option<&NameMap>,
) -> Diagnostic {
    let rule = step.app.rule;
    let goal = state.open_goals.first().map(|g| render_sequent(g, names));
    let stated = render_state(&step.stated, names);
    let base = |msg: String| {
        let d = Diagnostic::new(e.category(), step.span, msg).with_stated(stated.clone());
        match &goal {
            Some(g) => d.with_actual(g.clone()),
            None => d,
        }
    };
    match e {
        StepError::NoOpenGoals => Diagnostic::new(
            Category::NoOpenGoals,
            step.span,
            format!("{rule} is applied after the proof is already complete"),
        ),
        StepError::StateMismatch { expected } => base(format!(
            "the stated state is not what {rule} produces from the first open goal"
        ))
        .with_expected(render_state(expected, names)),
        StepError::Rule(err) => match err {
            RuleError::EmptyGoal { .. } => base(format!("{rule} does not apply to an empty sequent"))
                .with_expected(rule.schema()),
            RuleError::ShapeMismatch { head, .. } => base(format!(
                "{rule} does not apply: its conclusion has the form `{}` but the first formula is `{}`",
                conclusion_shape(rule),
                render_formula(head, names)
            ))
            .with_expected(format!("{rule}: {}", rule.schema())),
            RuleError::BasicMisapplied { head } => base(format!(
                "Basic needs `{}` somewhere after the first formula",
                render_formula(&Formula::neg(head.clone()), names)
            ))
            .with_expected(rule.schema()),
            RuleError::MissingHint { .. } => base(format!(
                "cannot infer which term {rule} instantiates; write it explicitly as {rule}[t]"
            )),
            RuleError::FreshnessViolation { witness, .. } => base(format!(
                "{rule} witness `{}` is not new: it already occurs in the sequent",
                render_term(&Term::constant(*witness), names)
            ))
            .with_expected(rule.schema()),
            RuleError::BadWitness { witness, .. } => base(format!(
                "{rule} must instantiate with a constant, found `{}`",
                render_term(witness, names)
            ))
            .with_expected(rule.schema()),
            RuleError::NoInstance { .. } => base(format!(
                "the first stated formula is not an instance of the formula {rule} eliminates"
            ))
            .with_expected(rule.schema()),
            RuleError::ExtNotSubset { missing } => base(format!(
                "Ext cannot introduce `{}`: it is not in the goal",
                render_formula(missing, names)
            ))
            .with_expected(rule.schema()),
            RuleError::ExtWithoutPremise => {
                base("Ext needs a stated sequent".to_string()).with_expected(rule.schema())
            }
        },
    }
}

fn conclusion_shape(rule: RuleId) -> &'static str {
    match rule {
        RuleId::Basic => "p, .., Neg p, ..",
        RuleId::AlphaDis => "Dis p q, ..",
        RuleId::AlphaImp => "Imp p q, ..",
        RuleId::AlphaCon => "Neg (Con p q), ..",
        RuleId::BetaCon => "Con p q, ..",
        RuleId::BetaImp => "Neg (Imp p q), ..",
        RuleId::BetaDis => "Neg (Dis p q), ..",
        RuleId::GammaExi => "Exi p, ..",
        RuleId::GammaUni => "Neg (Uni p), ..",
        RuleId::DeltaUni => "Uni p, ..",
        RuleId::DeltaExi => "Neg (Exi p), ..",
        RuleId::NegNeg => "Neg (Neg p), ..",
        RuleId::Ext => "y",
    }
}
