use crate::calculus::{ProofScript, ProofState};
use crate::syntax::{Formula, Term};

use super::names::NameMap;

fn fun_name(id: usize, names: &NameMap) -> String {
    names
        .fun_name(id)
        .map_or_else(|| format!("c{id}"), str::to_string)
}

fn pred_name(id: usize, names: &NameMap) -> String {
    names
        .pred_name(id)
        .map_or_else(|| format!("P{id}"), str::to_string)
}

fn compact_args(args: &[Term], names: &NameMap, out: &mut String) {
    if args.is_empty() {
        return;
    }
    out.push('[');
    for (k, a) in args.iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        compact_term_into(a, names, out);
    }
    out.push(']');
}

fn compact_term_into(t: &Term, names: &NameMap, out: &mut String) {
    match t {
        Term::Var(n) => out.push_str(&n.to_string()),
        Term::Fun(i, args) => {
            out.push_str(&fun_name(*i, names));
            compact_args(args, names, out);
        }
    }
}

pub fn compact_term(t: &Term, names: &NameMap) -> String {
    let mut s = String::new();
    compact_term_into(t, names, &mut s);
    s
}

fn compact_arg(p: &Formula, names: &NameMap, out: &mut String) {
    if let Formula::Pre(..) = p {
        compact_into(p, names, out);
    } else {
        out.push('(');
        compact_into(p, names, out);
        out.push(')');
    }
}

fn compact_into(p: &Formula, names: &NameMap, out: &mut String) {
    match p {
        Formula::Pre(i, args) => {
            out.push_str(&pred_name(*i, names));
            compact_args(args, names, out);
        }
        Formula::Imp(a, b) | Formula::Dis(a, b) | Formula::Con(a, b) => {
            out.push_str(p.constructor_name());
            out.push(' ');
            compact_arg(a, names, out);
            out.push(' ');
            compact_arg(b, names, out);
        }
        Formula::Exi(a) | Formula::Uni(a) | Formula::Neg(a) => {
            out.push_str(p.constructor_name());
            out.push(' ');
            compact_arg(a, names, out);
        }
    }
}

/// A formula in compact syntax: `Imp (Uni p[0]) p[a]`.
pub fn compact_formula(p: &Formula, names: &NameMap) -> String {
    let mut s = String::new();
    compact_into(p, names, &mut s);
    s
}

/// The canonical compact form of a script. Parsing the output yields the same
/// derivation under the same names.
pub fn print_compact(script: &ProofScript, names: &NameMap) -> String {
    let mut out = compact_formula(&script.goal, names);
    out.push_str("\n\n");
    for step in &script.steps {
        out.push_str(step.app.rule.name());
        if let Some(h) = &step.app.hint {
            out.push('[');
            out.push_str(&compact_term(h, names));
            out.push(']');
        }
        out.push('\n');
        for (k, seq) in step.stated.open_goals.iter().enumerate() {
            if k > 0 {
                out.push_str("+\n");
            }
            for p in seq {
                out.push_str("  ");
                out.push_str(&compact_formula(p, names));
                out.push('\n');
            }
        }
    }
    out
}

/// Several scripts separated by blank lines.
pub fn print_document<'a>(
    proofs: impl IntoIterator<Item = (&'a ProofScript, &'a NameMap)>,
) -> String {
    proofs
        .into_iter()
        .map(|(s, n)| print_compact(s, n))
        .collect::<Vec<_>>()
        .join("\n")
}

const BINDERS: [&str; 6] = ["x", "y", "z", "u", "v", "w"];

fn binder_candidate(k: usize) -> String {
    if k < BINDERS.len() {
        BINDERS[k].to_string()
    } else {
        format!("x{}", k - BINDERS.len() + 1)
    }
}

struct Conventional<'a> {
    names: &'a NameMap,
    binders: Vec<String>,
    next: usize,
}

impl Conventional<'_> {
    fn fresh_binder(&mut self) -> String {
        loop {
            let c = binder_candidate(self.next);
            self.next += 1;
            if !self.names.uses(&c) {
                return c;
            }
        }
    }

    fn term(&self, t: &Term) -> String {
        match t {
            Term::Var(n) => {
                let d = self.binders.len();
                if *n < d {
                    self.binders[d - 1 - n].clone()
                } else {
                    format!("#{}", n - d)
                }
            }
            Term::Fun(i, args) if args.is_empty() => fun_name(*i, self.names),
            Term::Fun(i, args) => format!("{}({})", fun_name(*i, self.names), self.terms(args)),
        }
    }

    fn terms(&self, args: &[Term]) -> String {
        args.iter()
            .map(|a| self.term(a))
            .collect::<Vec<_>>()
            .join(", ")
    }

    /// `min` is the weakest operator allowed unparenthesized here; `rightmost`
    /// says whether nothing follows at this level, so a quantifier may extend.
    fn formula(&mut self, p: &Formula, min: u8, rightmost: bool) -> String {
        let (prec, quant) = match p {
            Formula::Pre(..) => (5, false),
            Formula::Neg(_) => (4, false),
            Formula::Con(..) => (3, false),
            Formula::Dis(..) => (2, false),
            Formula::Imp(..) => (1, false),
            Formula::Exi(_) | Formula::Uni(_) => (0, true),
        };
        let parens = if quant { !rightmost } else { prec < min };
        let rightmost = rightmost || parens;
        let body = match p {
            Formula::Pre(i, args) if args.is_empty() => pred_name(*i, self.names),
            Formula::Pre(i, args) => format!("{}({})", pred_name(*i, self.names), self.terms(args)),
            Formula::Neg(a) => format!("¬{}", self.formula(a, 4, rightmost)),
            Formula::Con(a, b) | Formula::Dis(a, b) | Formula::Imp(a, b) => {
                let op = match p {
                    Formula::Con(..) => "∧",
                    Formula::Dis(..) => "∨",
                    _ => "→",
                };
                let l = self.formula(a, prec + 1, false);
                let r = self.formula(b, prec, rightmost);
                format!("{l} {op} {r}")
            }
            Formula::Exi(a) | Formula::Uni(a) => {
                let q = if matches!(p, Formula::Exi(_)) {
                    "∃"
                } else {
                    "∀"
                };
                let saved = self.next;
                let x = self.fresh_binder();
                self.binders.push(x.clone());
                let b = self.formula(a, 0, true);
                self.binders.pop();
                self.next = saved;
                format!("{q}{x}. {b}")
            }
        };
        if parens {
            format!("({body})")
        } else {
            body
        }
    }
}

/// Conventional first-order notation with named bound variables, e.g.
/// `(∀x. ∀y. p(y, x)) → p(a, a)`. Variables free at the top level print as
/// `#k`.
pub fn print_conventional(p: &Formula, names: &NameMap) -> String {
    Conventional {
        names,
        binders: Vec::new(),
        next: 0,
    }
    .formula(p, 0, true)
}

fn names_cover(p: &Formula, names: &NameMap) -> bool {
    let s = crate::syntax::symbols_of(p);
    s.funs.iter().all(|(i, _)| names.fun_name(*i).is_some())
        && s.preds.iter().all(|(i, _)| names.pred_name(*i).is_some())
}

fn term_covered(t: &Term, names: &NameMap) -> bool {
    match t {
        Term::Var(_) => true,
        Term::Fun(i, args) => {
            names.fun_name(*i).is_some() && args.iter().all(|a| term_covered(a, names))
        }
    }
}

/// Compact syntax when every symbol has a name, numeric syntax otherwise.
pub fn render_formula(p: &Formula, names: Option<&NameMap>) -> String {
    match names {
        Some(n) if names_cover(p, n) => compact_formula(p, n),
        _ => p.to_string(),
    }
}

pub fn render_term(t: &Term, names: Option<&NameMap>) -> String {
    match names {
        Some(n) if term_covered(t, n) => compact_term(t, n),
        _ => t.to_string(),
    }
}

pub fn render_sequent(z: &[Formula], names: Option<&NameMap>) -> String {
    let parts: Vec<String> = z.iter().map(|p| render_formula(p, names)).collect();
    format!("[{}]", parts.join(", "))
}

pub fn render_state(s: &ProofState, names: Option<&NameMap>) -> String {
    if s.is_complete() {
        return "(no open goals)".to_string();
    }
    s.open_goals
        .iter()
        .map(|z| render_sequent(z, names))
        .collect::<Vec<_>>()
        .join(" + ")
}
