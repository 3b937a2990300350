//! The human-facing proof-script language: parsing, name resolution and
//! printing.

mod names;
mod parse;
mod print;

pub use names::NameMap;
pub use parse::{
    build_name_map, parse_document, parse_formula, parse_named, resolve_formula, NamedFormula,
    NamedProof, NamedStep, NamedTerm, ParsedDocument, ParsedProof,
};
pub use print::{
    compact_formula, compact_term, print_compact, print_conventional, print_document,
    render_formula, render_sequent, render_state, render_term,
};
