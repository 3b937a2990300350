//! Command-line front end and local JSON service.

use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use secav_core::diagnostics::{render_human, to_machine, MachineDiagnostic, SourceSpan};
use secav_core::semantics::{
    argument_tuples, find_countermodel, FiniteInterpretation, SemanticsError,
};
use secav_core::surface::NameMap;
use secav_core::{check_document, parse_formula, CodegenOptions, DocumentReport};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_PORT: u16 = 8087;

pub mod exit {
    pub const OK: i32 = 0;
    pub const VERIFICATION: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const BUDGET: i32 = 3;
}

#[derive(Debug, Parser)]
#[command(
    name = "secav",
    version,
    about = "Check sequent-calculus proof scripts and translate them to Isabelle/Isar"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every proof in the given files.
    Check {
        #[arg(long)]
        json: bool,
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Print the Isar text for a script file (`-` reads standard input).
    Unshorten {
        /// Emit even when the script has errors.
        #[arg(long)]
        force: bool,
        path: PathBuf,
    },
    /// Search small finite models for one that falsifies a formula.
    Countermodel {
        #[arg(long, default_value_t = 2)]
        max_domain: usize,
        /// Largest number of interpretations enumerated per domain size.
        #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
        #[arg(long)]
        json: bool,
        formula: String,
    },
    /// Serve POST /process and GET /health on localhost.
    Serve {
        #[arg(long, default_value_t = DEFAULT_PORT)]
        port: u16,
    },
}

fn read_source(path: &Path) -> io::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
    }
}

/// Exit status for a checked document.
pub fn status_of(report: &DocumentReport) -> i32 {
    if report.has_syntax_errors() {
        exit::INPUT
    } else if report.all_verified() {
        exit::OK
    } else {
        exit::VERIFICATION
    }
}

#[derive(Debug, Serialize)]
pub struct ProofRecord<'a> {
    pub isar: Option<String>,
    pub verified: bool,
    pub name_map: &'a NameMap,
    pub conventional: &'a str,
    pub span: SourceSpan,
}

#[derive(Debug, Serialize)]
pub struct ProcessResponse<'a> {
    pub schema_version: u32,
    pub proofs: Vec<ProofRecord<'a>>,
    pub diagnostics: Vec<MachineDiagnostic>,
}

pub fn process_response(report: &DocumentReport) -> ProcessResponse<'_> {
    ProcessResponse {
        schema_version: SCHEMA_VERSION,
        proofs: report
            .proofs
            .iter()
            .map(|p| ProofRecord {
                isar: p.isar.as_ref().map(|g| g.text()),
                verified: p.verified,
                name_map: &p.parsed.names,
                conventional: &p.conventional,
                span: p.parsed.span,
            })
            .collect(),
        diagnostics: report.diagnostics().iter().map(to_machine).collect(),
    }
}

fn error_body(msg: &str) -> String {
    serde_json::json!({ "schema_version": SCHEMA_VERSION, "error": msg }).to_string()
}

/// Handles a `/process` request body. Returns the HTTP status and JSON body.
pub fn process_request(body: &[u8]) -> (u16, String) {
    let value: Value = match serde_json::from_slice(body) {
        Ok(v) => v,
        Err(e) => return (400, error_body(&format!("invalid JSON: {e}"))),
    };
    let Some(source) = value.get("source").and_then(Value::as_str) else {
        return (
            400,
            error_body("expected an object with a string field `source`"),
        );
    };
    let report = check_document(source, &CodegenOptions::default());
    let body = serde_json::to_string(&process_response(&report)).expect("serializable");
    (200, body)
}

pub fn cmd_check(
    paths: &[PathBuf],
    json: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<i32> {
    let mut status = exit::OK;
    let mut files = Vec::new();
    for path in paths {
        let src = match read_source(path) {
            Ok(s) => s,
            Err(e) => {
                writeln!(err, "{}: {e}", path.display())?;
                status = status.max(exit::INPUT);
                continue;
            }
        };
        let report = check_document(&src, &CodegenOptions::default());
        status = status.max(status_of(&report));
        if json {
            let v = serde_json::to_value(process_response(&report)).expect("serializable");
            files.push(serde_json::json!({ "path": path.display().to_string(), "result": v }));
        } else {
            for d in report.diagnostics() {
                writeln!(out, "{}: {}", path.display(), render_human(&d, &src))?;
            }
            for p in &report.proofs {
                let verdict = if p.verified {
                    "verified"
                } else {
                    "not verified"
                };
                writeln!(
                    out,
                    "{}:{}: {} ({verdict})",
                    path.display(),
                    p.parsed.span,
                    p.conventional
                )?;
            }
        }
    }
    if json {
        let doc = serde_json::json!({ "schema_version": SCHEMA_VERSION, "files": files });
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&doc).expect("serializable")
        )?;
    }
    Ok(status)
}

pub fn cmd_unshorten(
    path: &Path,
    force: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<i32> {
    let src = match read_source(path) {
        Ok(s) => s,
        Err(e) => {
            writeln!(err, "{}: {e}", path.display())?;
            return Ok(exit::INPUT);
        }
    };
    let report = check_document(
        &src,
        &CodegenOptions {
            force,
            ..Default::default()
        },
    );
    for d in report.diagnostics() {
        writeln!(err, "{}", render_human(&d, &src))?;
    }
    let status = status_of(&report);
    if report.has_syntax_errors() || (status != exit::OK && !force) {
        return Ok(status);
    }
    let texts: Vec<String> = report
        .proofs
        .iter()
        .filter_map(|p| p.isar.as_ref().map(|g| g.text()))
        .collect();
    write!(out, "{}", texts.join("\n"))?;
    Ok(status)
}

#[derive(Debug, Serialize)]
struct TableRow {
    args: Vec<usize>,
    value: Value,
}

#[derive(Debug, Serialize)]
struct SymbolRecord {
    name: String,
    id: usize,
    arity: usize,
    table: Vec<TableRow>,
}

#[derive(Debug, Serialize)]
struct CountermodelRecord {
    domain_size: usize,
    functions: Vec<SymbolRecord>,
    predicates: Vec<SymbolRecord>,
    env: std::collections::BTreeMap<usize, usize>,
}

fn countermodel_record(m: &FiniteInterpretation, names: &NameMap) -> CountermodelRecord {
    let n = m.domain_size;
    let functions = m
        .fun_tables
        .iter()
        .map(|(&(id, arity), t)| SymbolRecord {
            name: names
                .fun_name(id)
                .map_or_else(|| format!("c{id}"), str::to_string),
            id,
            arity,
            table: argument_tuples(n, arity)
                .into_iter()
                .zip(t)
                .map(|(args, v)| TableRow {
                    args,
                    value: (*v).into(),
                })
                .collect(),
        })
        .collect();
    let predicates = m
        .pred_tables
        .iter()
        .map(|(&(id, arity), t)| SymbolRecord {
            name: names
                .pred_name(id)
                .map_or_else(|| format!("P{id}"), str::to_string),
            id,
            arity,
            table: argument_tuples(n, arity)
                .into_iter()
                .zip(t)
                .map(|(args, v)| TableRow {
                    args,
                    value: (*v).into(),
                })
                .collect(),
        })
        .collect();
    CountermodelRecord {
        domain_size: n,
        functions,
        predicates,
        env: m.env.clone(),
    }
}

fn render_table(rec: &CountermodelRecord) -> String {
    let mut s = format!(
        "domain: {{{}}}\n",
        (0..rec.domain_size)
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    );
    for sym in rec.functions.iter().chain(&rec.predicates) {
        for row in &sym.table {
            let lhs = if sym.arity == 0 {
                sym.name.clone()
            } else {
                format!(
                    "{}({})",
                    sym.name,
                    row.args
                        .iter()
                        .map(|a| a.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                )
            };
            s.push_str(&format!("  {lhs} = {}\n", row.value));
        }
    }
    for (v, x) in &rec.env {
        s.push_str(&format!("  #{v} = {x}\n"));
    }
    s
}

pub fn cmd_countermodel(
    formula: &str,
    max_domain: usize,
    budget: u64,
    json: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<i32> {
    if max_domain == 0 {
        writeln!(err, "--max-domain must be at least 1")?;
        return Ok(exit::INPUT);
    }
    let (p, names) = match parse_formula(formula) {
        Ok(x) => x,
        Err(d) => {
            writeln!(err, "{}", render_human(&d, formula))?;
            return Ok(exit::INPUT);
        }
    };
    match find_countermodel(&p, max_domain, budget) {
        Ok(found) => {
            let rec = found.as_ref().map(|m| countermodel_record(m, &names));
            if json {
                let v = serde_json::json!({
                    "schema_version": SCHEMA_VERSION,
                    "max_domain": max_domain,
                    "countermodel": rec,
                });
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&v).expect("serializable")
                )?;
            } else {
                match &rec {
                    Some(r) => write!(out, "countermodel found\n{}", render_table(r))?,
                    None => writeln!(out, "no countermodel up to domain {max_domain}")?,
                }
            }
            Ok(exit::OK)
        }
        Err(e @ SemanticsError::BudgetExceeded { .. }) => {
            writeln!(err, "{e}")?;
            Ok(exit::BUDGET)
        }
        Err(e) => {
            writeln!(err, "{e}")?;
            Ok(exit::INPUT)
        }
    }
}

pub fn router() -> axum::Router {
    use axum::body::Bytes;
    use axum::http::{header, StatusCode};
    use axum::routing::{get, post};

    async fn process(body: Bytes) -> impl axum::response::IntoResponse {
        let (status, json) = process_request(&body);
        (
            StatusCode::from_u16(status).expect("valid status"),
            [(header::CONTENT_TYPE, "application/json")],
            json,
        )
    }
    async fn health() -> impl axum::response::IntoResponse {
        (
            [(header::CONTENT_TYPE, "application/json")],
            r#"{"status":"ok"}"#,
        )
    }
    axum::Router::new()
        .route("/process", post(process))
        .route("/health", get(health))
}

pub async fn serve(listener: tokio::net::TcpListener) -> io::Result<()> {
    axum::serve(listener, router()).await
}

pub fn cmd_serve(port: u16, err: &mut dyn Write) -> io::Result<i32> {
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(async {
        let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
        writeln!(err, "listening on http://{}", listener.local_addr()?)?;
        serve(listener).await
    })?;
    Ok(exit::OK)
}

pub fn run(config: RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match config.command {
        Command::Check { json, paths } => cmd_check(&paths, json, out, err),
        Command::Unshorten { force, path } => cmd_unshorten(&path, force, out, err),
        Command::Countermodel {
            max_domain,
            budget,
            json,
            formula,
        } => cmd_countermodel(&formula, max_domain, budget, json, out, err),
        Command::Serve { port } => cmd_serve(port, err),
    };
    result.unwrap_or_else(|e| {
        let _ = writeln!(err, "error: {e}");
        exit::INPUT
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn countermodel_table() {
        let (p, names) = parse_formula("Imp p[a] (Uni p[0])").unwrap();
        let m = find_countermodel(&p, 2, 1000).unwrap().unwrap();
        let rec = countermodel_record(&m, &names);
        assert_eq!(
            render_table(&rec),
            "domain: {0, 1}\n  a = 0\n  p(0) = true\n  p(1) = false\n"
        );
    }

    #[test]
    fn free_variables_appear_in_table() {
        let (p, names) = parse_formula("p[0]").unwrap();
        let m = find_countermodel(&p, 1, 1000).unwrap().unwrap();
        assert!(render_table(&countermodel_record(&m, &names)).ends_with("  #0 = 0\n"));
    }

    #[test]
    fn exit_status_ordering() {
        let ok = check_document(
            "Dis p (Neg p)\n\nAlphaDis\n  p\n  Neg p\nBasic\n",
            &CodegenOptions::default(),
        );
        assert_eq!(status_of(&ok), exit::OK);
        let bad = check_document("Dis p (Neg p)\n\nBasic\n", &CodegenOptions::default());
        assert_eq!(status_of(&bad), exit::VERIFICATION);
        let syntax = check_document("Dis p (Neg p)\n\nBasik\n", &CodegenOptions::default());
        assert_eq!(status_of(&syntax), exit::INPUT);
    }

    #[test]
    fn flags_parse() {
        let c =
            RunConfig::try_parse_from(["secav", "countermodel", "--max-domain", "3", "p"]).unwrap();
        assert!(matches!(
            c.command,
            Command::Countermodel {
                max_domain: 3,
                budget: 1_000_000,
                json: false,
                ..
            }
        ));
        assert!(
            RunConfig::try_parse_from(["secav", "countermodel", "--budget", "0", "p"]).is_err()
        );
        let c = RunConfig::try_parse_from(["secav", "serve"]).unwrap();
        assert!(matches!(c.command, Command::Serve { port: DEFAULT_PORT }));
    }
}
