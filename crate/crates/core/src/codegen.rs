//! Isabelle/Isar text for checked scripts.
//!
//! Each step becomes one line of a forward-chaining proof: the first step uses
//! `from`, later ones `with`, and the step that closes the last goal `show`s the
//! thesis. Formulas are embedded in the numeric syntax.

use thiserror::Error;

use crate::calculus::{infer_instantiation, Instantiation, ProofScript, RuleId, Step};
use crate::diagnostics::{has_errors, Diagnostic};
use crate::surface::{print_conventional, NameMap};
use crate::syntax::{print_full_secav, Formula, Sequent, Term};

/// How γ-instantiations are written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HintStyle {
    /// `GammaUni[where t=\<open>Fun 0 []\<close>]`
    #[default]
    Attribute,
    /// `GammaUni (* t = Fun 0 [] *)`
    Comment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CodegenOptions {
    /// Emit even if the script has errors.
    pub force: bool,
    pub hint_style: HintStyle,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodegenError {
    #[error("the script has no steps")]
    EmptyProof,
    #[error("the script has {count} error(s); use force to emit anyway")]
    HasErrors { count: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedProof {
    /// Comment block with the symbol numbering, the goal in conventional
    /// notation, and a notice if there were diagnostics.
    pub header: String,
    /// The `lemma ... qed` block.
    pub isar: String,
}

impl GeneratedProof {
    pub fn text(&self) -> String {
        format!("{}{}", self.header, self.isar)
    }
}

const TURNSTILE: &str = "\\<open>\\<tturnstile>";
const CLOSE: &str = "\\<close>";

fn push_sequent(out: &mut String, z: &Sequent, indent: &str) {
    out.push_str(indent);
    out.push_str("[\n");
    for (k, p) in z.iter().enumerate() {
        out.push_str(indent);
        out.push_str("  ");
        out.push_str(&print_full_secav(p));
        if k + 1 < z.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str(indent);
    out.push_str("]\n");
}

/// The instantiation of a γ-step: the hint, or the term recovered from the
/// stated premise.
fn gamma_term(step: &Step, before: Option<&Sequent>) -> Option<Term> {
    if let Some(t) = &step.app.hint {
        return Some(t.clone());
    }
    let head = before?.first()?;
    let stated = step.stated.open_goals.first()?.first()?;
    let (body, stated) = match (step.app.rule, head, stated) {
        (RuleId::GammaExi, Formula::Exi(p), s) => (&**p, s),
        (RuleId::GammaUni, Formula::Neg(p), Formula::Neg(s)) => match &**p {
            Formula::Uni(p) => (&**p, &**s),
            _ => return None,
        },
        _ => return None,
    };
    match infer_instantiation(body, stated) {
        Instantiation::Found(t) => Some(t),
        _ => None,
    }
}

fn rule_ref(step: &Step, before: Option<&Sequent>, style: HintStyle) -> String {
    let name = step.app.rule.name();
    if !step.app.rule.takes_hint() {
        return name.to_string();
    }
    match (gamma_term(step, before), style) {
        (Some(t), HintStyle::Attribute) => format!("{name}[where t={}{t}{CLOSE}]", "\\<open>"),
        (Some(t), HintStyle::Comment) => format!("{name} (* t = {t} *)"),
        (None, _) => name.to_string(),
    }
}

fn header(names: &NameMap, goal: &Formula, diagnostics: &[Diagnostic]) -> String {
    let mut h = String::new();
    if !diagnostics.is_empty() {
        let errors = diagnostics.iter().filter(|d| d.is_error()).count();
        let warnings = diagnostics.len() - errors;
        h.push_str(&format!(
            "(* NOTE: the source script has {errors} error(s) and {warnings} warning(s) *)\n"
        ));
    }
    let map = names.render();
    if !map.is_empty() {
        h.push_str("(*\n");
        h.push_str(&map);
        h.push_str("*)\n");
    }
    h.push_str(&format!("(* {} *)\n", print_conventional(goal, names)));
    h
}

/// Emits an Isar proof of `script`. `diagnostics` are the checker's findings;
/// any error blocks emission unless `force` is set.
pub fn emit_isar(
    script: &ProofScript,
    names: &NameMap,
    diagnostics: &[Diagnostic],
    opts: &CodegenOptions,
) -> Result<GeneratedProof, CodegenError> {
    if script.steps.is_empty() {
        return Err(CodegenError::EmptyProof);
    }
    if has_errors(diagnostics) && !opts.force {
        return Err(CodegenError::HasErrors {
            count: diagnostics.iter().filter(|d| d.is_error()).count(),
        });
    }

    let mut out = format!("lemma {TURNSTILE}\n");
    push_sequent(&mut out, &vec![script.goal.clone()], "  ");
    out.push_str(&format!("  {CLOSE}\nproof -\n"));

    let mut before: Option<Sequent> = Some(vec![script.goal.clone()]);
    let last = script.steps.len() - 1;
    for (k, step) in script.steps.iter().enumerate() {
        let kw = if k == 0 { "from" } else { "with" };
        let rule = rule_ref(step, before.as_ref(), opts.hint_style);
        if k == last {
            out.push_str(&format!("  {kw} {rule} show ?thesis\n"));
            if step.stated.is_complete() {
                out.push_str("    by simp\n");
            } else {
                // only reachable with `force`
                out.push_str("    sorry\n");
            }
        } else {
            out.push_str(&format!("  {kw} {rule} have ?thesis if {TURNSTILE}\n"));
            let goals = &step.stated.open_goals;
            for (j, z) in goals.iter().enumerate() {
                push_sequent(&mut out, z, "    ");
                if j + 1 < goals.len() {
                    out.push_str(&format!("    {CLOSE} and {TURNSTILE}\n"));
                } else {
                    out.push_str(&format!("    {CLOSE}\n"));
                }
            }
            if goals.is_empty() {
                out.push_str("    [\n    ]\n");
                out.push_str(&format!("    {CLOSE}\n"));
            }
            out.push_str("    using that by simp\n");
        }
        before = step.stated.open_goals.first().cloned();
    }
    out.push_str("qed\n");

    Ok(GeneratedProof {
        header: header(names, &script.goal, diagnostics),
        isar: out,
    })
}
