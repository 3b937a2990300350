//! Parser for the compact proof-script syntax.
//!
//! A document is a sequence of proofs. Each proof is a goal formula (one or
//! more unindented lines) followed by steps. A step is a rule line, optionally
//! `GammaExi[t]`/`GammaUni[t]`, followed by the stated state: indented formula
//! lines, one formula per line, with branches separated by a line holding only
//! `+`. A rule without stated lines leaves no open goals, and the next
//! unindented formula line after such a step starts a new proof.
//!
//! ```text
//! Dis p[a, b] (Neg p[a, b])
//!
//! AlphaDis
//!   p[a, b]
//!   Neg p[a, b]
//! Basic
//! ```
#![allow(clippy::result_large_err)]

use std::collections::HashMap;

use crate::calculus::{ProofScript, ProofState, RuleApp, RuleId, Step};
use crate::diagnostics::{Category, Diagnostic, SourceSpan};
use crate::syntax::{Formula, Term};

use super::names::NameMap;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(usize),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: SourceSpan,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Num(n) => format!("`{n}`"),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::LBrack => "`[`".into(),
        Tok::RBrack => "`]`".into(),
        Tok::Comma => "`,`".into(),
    }
}

fn syntax_error(span: SourceSpan, msg: impl Into<String>) -> Diagnostic {
    Diagnostic::new(Category::SyntaxError, span, msg)
}

/// Tokenizes `text`, which sits on line `line` starting at column `col0`.
fn lex_line(line: usize, col0: usize, text: &str, out: &mut Vec<Token>) -> Result<(), Diagnostic> {
    let chars: Vec<char> = text.chars().collect();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let col = col0 + k;
        let single = |tok| Token {
            tok,
            span: SourceSpan::point(line, col),
        };
        match c {
            ' ' | '\t' | '\r' => k += 1,
            '(' => {
                out.push(single(Tok::LParen));
                k += 1
            }
            ')' => {
                out.push(single(Tok::RParen));
                k += 1
            }
            '[' => {
                out.push(single(Tok::LBrack));
                k += 1
            }
            ']' => {
                out.push(single(Tok::RBrack));
                k += 1
            }
            ',' => {
                out.push(single(Tok::Comma));
                k += 1
            }
            c if c.is_ascii_alphabetic() => {
                let start = k;
                while k < chars.len() && chars[k].is_ascii_alphabetic() {
                    k += 1;
                }
                let s: String = chars[start..k].iter().collect();
                out.push(Token {
                    tok: Tok::Ident(s),
                    span: SourceSpan::new(line, col, line, col0 + k - 1),
                });
            }
            c if c.is_ascii_digit() => {
                let start = k;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
                let s: String = chars[start..k].iter().collect();
                let span = SourceSpan::new(line, col, line, col0 + k - 1);
                let n = s.parse().map_err(|_| {
                    syntax_error(span, format!("variable index `{s}` is too large"))
                })?;
                out.push(Token {
                    tok: Tok::Num(n),
                    span,
                });
            }
            other => {
                return Err(syntax_error(
                    SourceSpan::point(line, col),
                    format!("unexpected character `{other}`"),
                ))
            }
        }
    }
    Ok(())
}

/// Formula syntax with names, as written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NamedTerm {
    Fun(String, Vec<NamedTerm>, SourceSpan),
    Var(usize, SourceSpan),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NamedFormula {
    Pre(String, Vec<NamedTerm>, SourceSpan),
    Imp(Box<NamedFormula>, Box<NamedFormula>),
    Dis(Box<NamedFormula>, Box<NamedFormula>),
    Con(Box<NamedFormula>, Box<NamedFormula>),
    Exi(Box<NamedFormula>),
    Uni(Box<NamedFormula>),
    Neg(Box<NamedFormula>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedStep {
    pub rule: RuleId,
    pub hint: Option<NamedTerm>,
    pub stated: Vec<Vec<NamedFormula>>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedProof {
    pub goal: NamedFormula,
    pub goal_span: SourceSpan,
    pub steps: Vec<NamedStep>,
    pub span: SourceSpan,
}

const BINARY: [&str; 3] = ["Imp", "Dis", "Con"];
const UNARY: [&str; 3] = ["Exi", "Uni", "Neg"];

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    /// Where "end of input" is reported.
    end: SourceSpan,
}

impl Parser {
    fn new(toks: Vec<Token>, end: SourceSpan) -> Self {
        Parser { toks, pos: 0, end }
    }

    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<SourceSpan, Diagnostic> {
        match self.next() {
            Some(t) if t.tok == want => Ok(t.span),
            Some(t) => Err(syntax_error(
                t.span,
                format!("expected {what}, found {}", describe(&t.tok)),
            )),
            None => Err(syntax_error(
                self.end,
                format!("expected {what}, found end of line"),
            )),
        }
    }

    fn finish(&self) -> Result<(), Diagnostic> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(syntax_error(
                t.span,
                format!("unexpected {} after formula", describe(&t.tok)),
            )),
        }
    }

    fn term_list(&mut self) -> Result<Vec<NamedTerm>, Diagnostic> {
        let mut args = Vec::new();
        if matches!(
            self.peek(),
            Some(Token {
                tok: Tok::RBrack,
                ..
            })
        ) {
            self.next();
            return Ok(args);
        }
        loop {
            args.push(self.term()?);
            match self.next() {
                Some(Token {
                    tok: Tok::Comma, ..
                }) => {}
                Some(Token {
                    tok: Tok::RBrack, ..
                }) => return Ok(args),
                Some(t) => {
                    return Err(syntax_error(
                        t.span,
                        format!("expected `,` or `]`, found {}", describe(&t.tok)),
                    ))
                }
                None => return Err(syntax_error(self.end, "unclosed `[`")),
            }
        }
    }

    fn term(&mut self) -> Result<NamedTerm, Diagnostic> {
        match self.next() {
            Some(Token {
                tok: Tok::Num(n),
                span,
            }) => Ok(NamedTerm::Var(n, span)),
            Some(Token {
                tok: Tok::Ident(name),
                span,
            }) => {
                let mut args = Vec::new();
                let mut span = span;
                if matches!(
                    self.peek(),
                    Some(Token {
                        tok: Tok::LBrack,
                        ..
                    })
                ) {
                    self.next();
                    args = self.term_list()?;
                    span = span.join(self.toks[self.pos - 1].span);
                }
                Ok(NamedTerm::Fun(name, args, span))
            }
            Some(t) => Err(syntax_error(
                t.span,
                format!("expected a term, found {}", describe(&t.tok)),
            )),
            None => Err(syntax_error(self.end, "expected a term, found end of line")),
        }
    }

    /// Atom or parenthesized formula.
    fn argument(&mut self) -> Result<NamedFormula, Diagnostic> {
        match self.peek().cloned() {
            Some(Token {
                tok: Tok::LParen, ..
            }) => {
                self.next();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Token {
                tok: Tok::Ident(name),
                span,
            }) => {
                if BINARY.contains(&name.as_str()) || UNARY.contains(&name.as_str()) {
                    return Err(syntax_error(
                        span,
                        format!("compound argument `{name} ..` must be parenthesized"),
                    ));
                }
                self.atom()
            }
            Some(t) => Err(syntax_error(
                t.span,
                format!("expected a formula, found {}", describe(&t.tok)),
            )),
            None => Err(syntax_error(
                self.end,
                "expected a formula, found end of line",
            )),
        }
    }

    fn atom(&mut self) -> Result<NamedFormula, Diagnostic> {
        let Some(Token {
            tok: Tok::Ident(name),
            span,
        }) = self.next()
        else {
            unreachable!("atom called on identifier")
        };
        let mut span = span;
        let mut args = Vec::new();
        if matches!(
            self.peek(),
            Some(Token {
                tok: Tok::LBrack,
                ..
            })
        ) {
            self.next();
            args = self.term_list()?;
            span = span.join(self.toks[self.pos - 1].span);
        }
        Ok(NamedFormula::Pre(name, args, span))
    }

    fn formula(&mut self) -> Result<NamedFormula, Diagnostic> {
        match self.peek().cloned() {
            Some(Token {
                tok: Tok::Ident(name),
                ..
            }) if BINARY.contains(&name.as_str()) => {
                self.next();
                let p = Box::new(self.argument()?);
                let q = Box::new(self.argument()?);
                Ok(match name.as_str() {
                    "Imp" => NamedFormula::Imp(p, q),
                    "Dis" => NamedFormula::Dis(p, q),
                    _ => NamedFormula::Con(p, q),
                })
            }
            Some(Token {
                tok: Tok::Ident(name),
                ..
            }) if UNARY.contains(&name.as_str()) => {
                self.next();
                let p = Box::new(self.argument()?);
                Ok(match name.as_str() {
                    "Exi" => NamedFormula::Exi(p),
                    "Uni" => NamedFormula::Uni(p),
                    _ => NamedFormula::Neg(p),
                })
            }
            _ => self.argument(),
        }
    }
}

fn line_end(line: usize, text: &str) -> SourceSpan {
    SourceSpan::point(line, text.chars().count() + 1)
}

/// Parses one formula spread over the given `(line number, text)` pieces.
fn parse_formula_lines(pieces: &[(usize, &str)]) -> Result<NamedFormula, Diagnostic> {
    let mut toks = Vec::new();
    for (line, text) in pieces {
        lex_line(*line, 1, text, &mut toks)?;
    }
    let (l, t) = pieces.last().expect("at least one line");
    let mut p = Parser::new(toks, line_end(*l, t));
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

fn is_blank(s: &str) -> bool {
    s.trim().is_empty()
}

fn is_indented(s: &str) -> bool {
    s.starts_with(' ') || s.starts_with('\t')
}

fn is_plus(s: &str) -> bool {
    s.trim() == "+"
}

/// The rule a line names, if it starts with a reserved rule keyword.
fn rule_keyword(s: &str) -> Option<RuleId> {
    if is_indented(s) {
        return None;
    }
    let word: String = s.chars().take_while(|c| c.is_ascii_alphabetic()).collect();
    let rest = &s[word.len()..];
    let rule = word.parse::<RuleId>().ok()?;
    if rest.is_empty() || rest.starts_with('[') || rest.starts_with(char::is_whitespace) {
        Some(rule)
    } else {
        None
    }
}

fn trimmed_span(line: usize, s: &str) -> SourceSpan {
    let lead = s.chars().take_while(|c| c.is_whitespace()).count();
    let len = s.trim().chars().count();
    SourceSpan::new(line, lead + 1, line, lead + len.max(1))
}

fn parse_rule_line(line: usize, text: &str) -> Result<(RuleId, Option<NamedTerm>), Diagnostic> {
    let mut toks = Vec::new();
    lex_line(line, 1, text, &mut toks)?;
    let mut p = Parser::new(toks, line_end(line, text));
    let Some(Token {
        tok: Tok::Ident(name),
        span,
    }) = p.next()
    else {
        return Err(syntax_error(
            trimmed_span(line, text),
            "expected a rule name",
        ));
    };
    let rule: RuleId = name
        .parse()
        .map_err(|e: crate::calculus::UnknownRule| syntax_error(span, e.to_string()))?;
    let mut hint = None;
    if let Some(t) = p.peek().cloned() {
        if t.tok != Tok::LBrack {
            return Err(syntax_error(
                t.span,
                format!("unexpected {} after rule name", describe(&t.tok)),
            ));
        }
        if !rule.takes_hint() {
            return Err(syntax_error(
                t.span,
                format!("{rule} does not take an instantiation"),
            ));
        }
        p.next();
        hint = Some(p.term()?);
        p.expect(Tok::RBrack, "`]`")?;
        if let Some(t) = p.peek() {
            return Err(syntax_error(
                t.span,
                format!("unexpected {} after instantiation", describe(&t.tok)),
            ));
        }
    }
    Ok((rule, hint))
}

struct Lines<'a> {
    lines: Vec<&'a str>,
    i: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text
            .split('\n')
            .map(|l| l.strip_suffix('\r').unwrap_or(l))
            .collect();
        Lines { lines, i: 0 }
    }

    fn skip_blank(&mut self) {
        while self.i < self.lines.len() && is_blank(self.lines[self.i]) {
            self.i += 1;
        }
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.lines.get(self.i).map(|l| (self.i + 1, *l))
    }
}

fn check_indent(line: usize, text: &str) -> Result<(), Diagnostic> {
    let lead: String = text.chars().take_while(|c| c.is_whitespace()).collect();
    if let Some(k) = lead.find('\t') {
        return Err(Diagnostic::new(
            Category::SyntaxError,
            SourceSpan::point(line, k + 1),
            "indentation must use spaces, not tabs",
        ));
    }
    Ok(())
}

fn parse_goal(lines: &mut Lines) -> Result<(NamedFormula, SourceSpan), Diagnostic> {
    let mut pieces = Vec::new();
    while let Some((n, text)) = lines.peek() {
        if is_blank(text) || rule_keyword(text).is_some() {
            break;
        }
        if is_plus(text) {
            return Err(syntax_error(
                trimmed_span(n, text),
                "`+` can only separate branches of a stated state",
            ));
        }
        check_indent(n, text)?;
        pieces.push((n, text));
        lines.i += 1;
    }
    let f = parse_formula_lines(&pieces)?;
    let (first, ft) = pieces[0];
    let (last, lt) = pieces[pieces.len() - 1];
    Ok((f, trimmed_span(first, ft).join(trimmed_span(last, lt))))
}

/// Indented lines after a rule line; empty when the rule leaves no goals.
fn parse_block(
    lines: &mut Lines,
) -> Result<(Vec<Vec<NamedFormula>>, Option<SourceSpan>), Diagnostic> {
    let mut branches: Vec<Vec<NamedFormula>> = vec![Vec::new()];
    let mut last_span = None;
    loop {
        let save = lines.i;
        lines.skip_blank();
        let Some((n, text)) = lines.peek() else {
            lines.i = save;
            break;
        };
        if is_plus(text) {
            let span = trimmed_span(n, text);
            if branches.last().is_some_and(Vec::is_empty) {
                return Err(syntax_error(
                    span,
                    "`+` must come between two non-empty sequents",
                ));
            }
            branches.push(Vec::new());
            last_span = Some(span);
            lines.i += 1;
        } else if is_indented(text) {
            check_indent(n, text)?;
            let f = parse_formula_lines(&[(n, text)])?;
            branches.last_mut().expect("non-empty").push(f);
            last_span = Some(trimmed_span(n, text));
            lines.i += 1;
        } else {
            lines.i = save;
            break;
        }
    }
    if branches.len() > 1 && branches.last().is_some_and(Vec::is_empty) {
        return Err(syntax_error(
            last_span.unwrap_or_default(),
            "`+` must be followed by a sequent",
        ));
    }
    if branches.len() == 1 && branches[0].is_empty() {
        branches.clear();
    }
    Ok((branches, last_span))
}

/// Parses the document into named proofs. Parsing stops at the first syntax
/// error; proofs completed before it are returned alongside the error.
pub fn parse_named(text: &str) -> (Vec<NamedProof>, Option<Diagnostic>) {
    let mut lines = Lines::new(text);
    let mut proofs: Vec<NamedProof> = Vec::new();
    let mut current: Option<NamedProof> = None;
    // whether the last step of `current` left no open goals
    let mut closed = false;

    let result = (|| -> Result<(), Diagnostic> {
        loop {
            lines.skip_blank();
            let Some((n, text)) = lines.peek() else {
                return Ok(());
            };
            if rule_keyword(text).is_some() {
                let Some(proof) = current.as_mut() else {
                    return Err(syntax_error(
                        trimmed_span(n, text),
                        "expected a goal formula before the first rule",
                    ));
                };
                let (rule, hint) = parse_rule_line(n, text)?;
                lines.i += 1;
                let (stated, last) = parse_block(&mut lines)?;
                let span = trimmed_span(n, text);
                proof.span = proof.span.join(last.unwrap_or(span));
                closed = stated.is_empty();
                proof.steps.push(NamedStep {
                    rule,
                    hint,
                    stated,
                    span,
                });
            } else if is_plus(text) {
                return Err(syntax_error(
                    trimmed_span(n, text),
                    "`+` can only separate branches of a stated state",
                ));
            } else if is_indented(text) {
                return Err(syntax_error(
                    trimmed_span(n, text),
                    "indented formula lines must follow a rule line",
                ));
            } else if current.is_none() || closed {
                if let Some(done) = current.take() {
                    proofs.push(done);
                }
                let (goal, goal_span) = parse_goal(&mut lines)?;
                current = Some(NamedProof {
                    goal,
                    goal_span,
                    steps: Vec::new(),
                    span: goal_span,
                });
                closed = false;
            } else {
                let span = trimmed_span(n, text);
                let word: String = text
                    .chars()
                    .take_while(|c| c.is_ascii_alphabetic())
                    .collect();
                let msg = if word.is_empty() {
                    "expected a rule name".to_string()
                } else {
                    format!("unknown rule `{word}`")
                };
                let span = if word.is_empty() {
                    span
                } else {
                    SourceSpan::new(n, 1, n, word.chars().count())
                };
                return Err(syntax_error(span, msg));
            }
        }
    })();

    match result {
        Ok(()) => {
            proofs.extend(current);
            (proofs, None)
        }
        Err(d) => (proofs, Some(d)),
    }
}

fn visit_term(t: &NamedTerm, map: &mut NameMap) {
    if let NamedTerm::Fun(name, args, _) = t {
        map.intern_fun(name);
        args.iter().for_each(|a| visit_term(a, map));
    }
}

fn visit_formula(p: &NamedFormula, map: &mut NameMap) {
    match p {
        NamedFormula::Pre(name, args, _) => {
            map.intern_pred(name);
            args.iter().for_each(|a| visit_term(a, map));
        }
        NamedFormula::Imp(p, q) | NamedFormula::Dis(p, q) | NamedFormula::Con(p, q) => {
            visit_formula(p, map);
            visit_formula(q, map);
        }
        NamedFormula::Exi(p) | NamedFormula::Uni(p) | NamedFormula::Neg(p) => visit_formula(p, map),
    }
}

/// Numbers functions and predicates independently, from 0, in order of first
/// occurrence: the goal first, then each step's hint and stated formulas.
pub fn build_name_map(proof: &NamedProof) -> NameMap {
    let mut map = NameMap::new();
    visit_formula(&proof.goal, &mut map);
    for step in &proof.steps {
        if let Some(h) = &step.hint {
            visit_term(h, &mut map);
        }
        for p in step.stated.iter().flatten() {
            visit_formula(p, &mut map);
        }
    }
    map
}

fn resolve_term(t: &NamedTerm, map: &NameMap) -> Term {
    match t {
        NamedTerm::Var(n, _) => Term::Var(*n),
        NamedTerm::Fun(name, args, _) => Term::Fun(
            map.fun_id(name).expect("name map covers the proof"),
            args.iter().map(|a| resolve_term(a, map)).collect(),
        ),
    }
}

fn resolve(p: &NamedFormula, map: &NameMap) -> Formula {
    match p {
        NamedFormula::Pre(name, args, _) => Formula::Pre(
            map.pred_id(name).expect("name map covers the proof"),
            args.iter().map(|a| resolve_term(a, map)).collect(),
        ),
        NamedFormula::Imp(p, q) => Formula::imp(resolve(p, map), resolve(q, map)),
        NamedFormula::Dis(p, q) => Formula::dis(resolve(p, map), resolve(q, map)),
        NamedFormula::Con(p, q) => Formula::con(resolve(p, map), resolve(q, map)),
        NamedFormula::Exi(p) => Formula::exi(resolve(p, map)),
        NamedFormula::Uni(p) => Formula::uni(resolve(p, map)),
        NamedFormula::Neg(p) => Formula::neg(resolve(p, map)),
    }
}

pub fn resolve_formula(p: &NamedFormula, map: &NameMap) -> Formula {
    resolve(p, map)
}

fn to_script(proof: &NamedProof, map: &NameMap) -> ProofScript {
    ProofScript {
        goal: resolve(&proof.goal, map),
        span: proof.goal_span,
        steps: proof
            .steps
            .iter()
            .map(|s| Step {
                app: RuleApp {
                    rule: s.rule,
                    hint: s.hint.as_ref().map(|h| resolve_term(h, map)),
                },
                stated: ProofState::new(
                    s.stated
                        .iter()
                        .map(|b| b.iter().map(|p| resolve(p, map)).collect())
                        .collect(),
                ),
                span: s.span,
            })
            .collect(),
    }
}

#[derive(Default)]
struct Lints {
    // (is_predicate, name) -> arity first seen and where
    arities: HashMap<(bool, String), (usize, SourceSpan)>,
    reported: Vec<(bool, String, usize)>,
    out: Vec<Diagnostic>,
}

impl Lints {
    fn arity(&mut self, pred: bool, name: &str, arity: usize, span: SourceSpan) {
        let key = (pred, name.to_string());
        match self.arities.get(&key) {
            None => {
                self.arities.insert(key, (arity, span));
            }
            Some(&(first, at)) if first != arity => {
                let tag = (pred, name.to_string(), arity);
                if !self.reported.contains(&tag) {
                    self.reported.push(tag);
                    let kind = if pred { "predicate" } else { "function" };
                    self.out.push(Diagnostic::new(
                        Category::ArityLint,
                        span,
                        format!(
                            "{kind} `{name}` takes {arity} argument(s) here but {first} at {at}"
                        ),
                    ));
                }
            }
            Some(_) => {}
        }
    }

    fn term(&mut self, t: &NamedTerm, depth: usize) {
        match t {
            NamedTerm::Var(n, span) if *n >= depth => self.out.push(Diagnostic::new(
                Category::FreeVariableLint,
                *span,
                format!("variable {n} is not bound by any quantifier"),
            )),
            NamedTerm::Var(..) => {}
            NamedTerm::Fun(name, args, span) => {
                self.arity(false, name, args.len(), *span);
                args.iter().for_each(|a| self.term(a, depth));
            }
        }
    }

    fn formula(&mut self, p: &NamedFormula, depth: usize) {
        match p {
            NamedFormula::Pre(name, args, span) => {
                self.arity(true, name, args.len(), *span);
                args.iter().for_each(|a| self.term(a, depth));
            }
            NamedFormula::Imp(p, q) | NamedFormula::Dis(p, q) | NamedFormula::Con(p, q) => {
                self.formula(p, depth);
                self.formula(q, depth);
            }
            NamedFormula::Exi(p) | NamedFormula::Uni(p) => self.formula(p, depth + 1),
            NamedFormula::Neg(p) => self.formula(p, depth),
        }
    }
}

fn lint(proof: &NamedProof) -> Vec<Diagnostic> {
    let mut l = Lints::default();
    l.formula(&proof.goal, 0);
    for s in &proof.steps {
        if let Some(NamedTerm::Fun(name, args, span)) = &s.hint {
            l.arity(false, name, args.len(), *span);
        }
        for p in s.stated.iter().flatten() {
            l.formula(p, 0);
        }
    }
    l.out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedProof {
    pub script: ProofScript,
    pub names: NameMap,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParsedDocument {
    pub proofs: Vec<ParsedProof>,
    /// Syntax errors and lint warnings.
    pub diagnostics: Vec<Diagnostic>,
}

impl ParsedDocument {
    pub fn has_syntax_errors(&self) -> bool {
        self.diagnostics
            .iter()
            .any(|d| d.category == Category::SyntaxError)
    }
}

pub fn parse_document(text: &str) -> ParsedDocument {
    let (named, err) = parse_named(text);
    let mut doc = ParsedDocument::default();
    for proof in &named {
        let names = build_name_map(proof);
        doc.diagnostics.extend(lint(proof));
        doc.proofs.push(ParsedProof {
            script: to_script(proof, &names),
            names,
            span: proof.span,
        });
    }
    doc.diagnostics.extend(err);
    doc
}

/// Parses a single formula written in compact syntax, numbering its symbols
/// by first occurrence.
pub fn parse_formula(text: &str) -> Result<(Formula, NameMap), Diagnostic> {
    let pieces: Vec<(usize, &str)> = text
        .split('\n')
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !is_blank(l))
        .collect();
    if pieces.is_empty() {
        return Err(syntax_error(SourceSpan::point(1, 1), "expected a formula"));
    }
    let named = parse_formula_lines(&pieces)?;
    let mut map = NameMap::new();
    visit_formula(&named, &mut map);
    Ok((resolve(&named, &map), map))
}
