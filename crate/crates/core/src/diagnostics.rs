//! Positioned errors and warnings.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A region of the source text. Lines and columns are 1-based; `end_col` is the
/// column of the last character covered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct SourceSpan {
    pub start_line: usize,
    pub start_col: usize,
    pub end_line: usize,
    pub end_col: usize,
}

impl SourceSpan {
    pub fn new(start_line: usize, start_col: usize, end_line: usize, end_col: usize) -> Self {
        SourceSpan {
            start_line,
            start_col,
            end_line,
            end_col,
        }
    }

    pub fn point(line: usize, col: usize) -> Self {
        SourceSpan::new(line, col, line, col)
    }

    /// Smallest span covering both.
    pub fn join(self, other: SourceSpan) -> SourceSpan {
        let (start_line, start_col) =
            (self.start_line, self.start_col).min((other.start_line, other.start_col));
        let (end_line, end_col) =
            (self.end_line, self.end_col).max((other.end_line, other.end_col));
        SourceSpan {
            start_line,
            start_col,
            end_line,
            end_col,
        }
    }

    pub fn contains(&self, other: &SourceSpan) -> bool {
        (self.start_line, self.start_col) <= (other.start_line, other.start_col)
            && (other.end_line, other.end_col) <= (self.end_line, self.end_col)
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start_line, self.start_col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    SyntaxError,
    ShapeMismatch,
    StateMismatch,
    BasicMisapplied,
    FreshnessViolation,
    ExtNotSubset,
    MissingHint,
    UnchangedSequent,
    IncompleteProof,
    NoOpenGoals,
    ArityLint,
    FreeVariableLint,
    BudgetExceeded,
}

impl Category {
    pub const ALL: [Category; 13] = [
        Category::SyntaxError,
        Category::ShapeMismatch,
        Category::StateMismatch,
        Category::BasicMisapplied,
        Category::FreshnessViolation,
        Category::ExtNotSubset,
        Category::MissingHint,
        Category::UnchangedSequent,
        Category::IncompleteProof,
        Category::NoOpenGoals,
        Category::ArityLint,
        Category::FreeVariableLint,
        Category::BudgetExceeded,
    ];

    pub fn severity(self) -> Severity {
        match self {
            Category::UnchangedSequent | Category::ArityLint | Category::FreeVariableLint => {
                Severity::Warning
            }
            _ => Severity::Error,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Category::SyntaxError => "syntax_error",
            Category::ShapeMismatch => "shape_mismatch",
            Category::StateMismatch => "state_mismatch",
            Category::BasicMisapplied => "basic_misapplied",
            Category::FreshnessViolation => "freshness_violation",
            Category::ExtNotSubset => "ext_not_subset",
            Category::MissingHint => "missing_hint",
            Category::UnchangedSequent => "unchanged_sequent",
            Category::IncompleteProof => "incomplete_proof",
            Category::NoOpenGoals => "no_open_goals",
            Category::ArityLint => "arity_lint",
            Category::FreeVariableLint => "free_variable_lint",
            Category::BudgetExceeded => "budget_exceeded",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub category: Category,
    pub span: SourceSpan,
    pub message: String,
    /// What the rule required, e.g. the rule schema or the computed state.
    pub expected: Option<String>,
    /// What was found, e.g. the goal or the state the author wrote.
    pub actual: Option<String>,
    /// The state written after the offending rule, when it is not `actual`.
    pub stated: Option<String>,
}

impl Diagnostic {
    pub fn new(category: Category, span: SourceSpan, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: category.severity(),
            category,
            span,
            message: message.into(),
            expected: None,
            actual: None,
            stated: None,
        }
    }

    pub fn with_expected(mut self, s: impl Into<String>) -> Self {
        self.expected = Some(s.into());
        self
    }

    pub fn with_actual(mut self, s: impl Into<String>) -> Self {
        self.actual = Some(s.into());
        self
    }

    pub fn with_stated(mut self, s: impl Into<String>) -> Self {
        self.stated = Some(s.into());
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

pub fn has_errors(ds: &[Diagnostic]) -> bool {
    ds.iter().any(Diagnostic::is_error)
}

/// Flat record with stable field names, used for JSON output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineDiagnostic {
    pub category: Category,
    pub severity: Severity,
    pub start_line: usize,
    pub start_col: usize,
    pub end_line: usize,
    pub end_col: usize,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actual: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stated: Option<String>,
}

pub fn to_machine(d: &Diagnostic) -> MachineDiagnostic {
    MachineDiagnostic {
        category: d.category,
        severity: d.severity,
        start_line: d.span.start_line,
        start_col: d.span.start_col,
        end_line: d.span.end_line,
        end_col: d.span.end_col,
        message: d.message.clone(),
        expected: d.expected.clone(),
        actual: d.actual.clone(),
        stated: d.stated.clone(),
    }
}

impl From<&MachineDiagnostic> for Diagnostic {
    fn from(m: &MachineDiagnostic) -> Self {
        Diagnostic {
            severity: m.severity,
            category: m.category,
            span: SourceSpan::new(m.start_line, m.start_col, m.end_line, m.end_col),
            message: m.message.clone(),
            expected: m.expected.clone(),
            actual: m.actual.clone(),
            stated: m.stated.clone(),
        }
    }
}

const MAX_EXCERPT: usize = 120;

/// Renders a diagnostic with a caret-underlined excerpt of `source`.
///
/// Warnings without attached states are a single line. Lines longer than
/// `MAX_EXCERPT` characters are cut to a window around the span.
pub fn render_human(d: &Diagnostic, source: &str) -> String {
    let kind = match d.severity {
        Severity::Error => "error",
        Severity::Warning => "warning",
    };
    let head = format!("{kind}[{}] {}: {}", d.category, d.span, d.message);
    if d.severity == Severity::Warning && d.expected.is_none() && d.actual.is_none() {
        return head;
    }

    let mut out = head;
    out.push('\n');
    if let Some(line) = source.lines().nth(d.span.start_line.saturating_sub(1)) {
        let chars: Vec<char> = line.chars().collect();
        let start = d.span.start_col.max(1) - 1;
        let end = if d.span.end_line == d.span.start_line {
            d.span.end_col.max(d.span.start_col)
        } else {
            chars.len().max(start + 1)
        };
        let (lo, hi) = if chars.len() > MAX_EXCERPT {
            let lo = start.saturating_sub(MAX_EXCERPT / 4).min(chars.len());
            (lo, (lo + MAX_EXCERPT).min(chars.len()))
        } else {
            (0, chars.len())
        };
        let mut excerpt: String = chars[lo..hi].iter().collect();
        if lo > 0 {
            excerpt.insert_str(0, "...");
        }
        if hi < chars.len() {
            excerpt.push_str("...");
        }
        let shift = if lo > 0 { 3 } else { 0 };
        let caret_start = start.saturating_sub(lo) + shift;
        let caret_len = end.saturating_sub(start).clamp(1, MAX_EXCERPT);
        let gutter = d.span.start_line.to_string();
        let pad = " ".repeat(gutter.len());
        out.push_str(&format!("{pad} |\n{gutter} | {excerpt}\n{pad} | "));
        out.push_str(&" ".repeat(caret_start));
        out.push_str(&"^".repeat(caret_len));
        out.push('\n');
    }
    if let Some(e) = &d.expected {
        out.push_str(&format!("  expected: {e}\n"));
    }
    if let Some(s) = &d.stated {
        out.push_str(&format!("  stated:   {s}\n"));
    }
    if let Some(a) = &d.actual {
        out.push_str(&format!("  goal:     {a}\n"));
    }
    out.truncate(out.trim_end().len());
    out
}
