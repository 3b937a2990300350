use crate::calculus::check_script_named;
use crate::codegen::{emit_isar, CodegenOptions, GeneratedProof};
use crate::diagnostics::{has_errors, Category, Diagnostic};
use crate::surface::{parse_document, print_conventional, ParsedProof};

/// Outcome for one proof of a document.
#[derive(Debug, Clone)]
pub struct CheckedProof {
    pub parsed: ParsedProof,
    /// Lints for this proof followed by checker findings.
    pub diagnostics: Vec<Diagnostic>,
    pub verified: bool,
    pub conventional: String,
    /// Present when the proof verified, or when forced and it has steps.
    pub isar: Option<GeneratedProof>,
}

#[derive(Debug, Clone, Default)]
pub struct DocumentReport {
    pub proofs: Vec<CheckedProof>,
    /// Syntax errors, which end parsing and belong to no proof.
    pub syntax: Vec<Diagnostic>,
}

impl DocumentReport {
    /// All diagnostics in source order.
    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        let mut all: Vec<Diagnostic> = self
            .proofs
            .iter()
            .flat_map(|p| p.diagnostics.iter().cloned())
            .chain(self.syntax.iter().cloned())
            .collect();
        all.sort_by_key(|d| (d.span.start_line, d.span.start_col));
        all
    }

    pub fn has_syntax_errors(&self) -> bool {
        !self.syntax.is_empty()
    }

    pub fn all_verified(&self) -> bool {
        self.syntax.is_empty() && self.proofs.iter().all(|p| p.verified)
    }
}

/// Parses, checks and translates every proof in `source`.
pub fn check_document(source: &str, opts: &CodegenOptions) -> DocumentReport {
    let doc = parse_document(source);
    let (syntax, lints): (Vec<Diagnostic>, Vec<Diagnostic>) = doc
        .diagnostics
        .into_iter()
        .partition(|d| d.category == Category::SyntaxError);
    let proofs = doc
        .proofs
        .into_iter()
        .map(|parsed| {
            let mut diagnostics: Vec<Diagnostic> = lints
                .iter()
                .filter(|d| parsed.span.contains(&d.span))
                .cloned()
                .collect();
            diagnostics.extend(check_script_named(&parsed.script, Some(&parsed.names)));
            let verified = !has_errors(&diagnostics);
            let isar = emit_isar(&parsed.script, &parsed.names, &diagnostics, opts).ok();
            let conventional = print_conventional(&parsed.script.goal, &parsed.names);
            CheckedProof {
                parsed,
                diagnostics,
                verified,
                conventional,
                isar,
            }
        })
        .collect();
    DocumentReport { proofs, syntax }
}
