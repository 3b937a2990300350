//! A checker for proofs in a one-sided sequent calculus for first-order logic,
//! together with a script language, a finite-model countermodel search and an
//! Isabelle/Isar back end.
//!
//! ```
//! use secav_core::{check_document, CodegenOptions};
//!
//! let src = "Dis p (Neg p)\n\nAlphaDis\n  p\n  Neg p\nBasic\n";
//! let report = check_document(src, &CodegenOptions::default());
//! assert!(report.proofs[0].verified);
//! ```

pub mod calculus;
pub mod codegen;
pub mod diagnostics;
pub mod ops;
pub mod semantics;
pub mod surface;
pub mod syntax;

mod document;

pub use calculus::{
    check_script, check_script_named, check_step, is_verified, premises_of, random_derivation,
    GenBudget, GenerationFailure, ProofScript, ProofState, RuleApp, RuleId, Step, StepError,
};
pub use codegen::{emit_isar, CodegenError, CodegenOptions, GeneratedProof, HintStyle};
pub use diagnostics::{
    render_human, to_machine, Category, Diagnostic, MachineDiagnostic, Severity, SourceSpan,
};
pub use document::{check_document, CheckedProof, DocumentReport};
pub use semantics::{find_countermodel, FiniteInterpretation, SemanticsError};
pub use surface::{parse_document, parse_formula, print_compact, print_conventional, NameMap};
pub use syntax::{Formula, Sequent, Term};
