//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any fails. Set `SECAV_UPDATE_GOLDEN=1` to rewrite the Isar snapshots.

use std::collections::{BTreeMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use secav_core::calculus::{random_derivation, GenBudget, ProofScript};
use secav_core::diagnostics::render_human;
use secav_core::ops::{ext, member, sub};
use secav_core::semantics::{
    enumerate_interpretations, eval_formula, eval_term, find_countermodel, sequent_satisfied,
    shift, SignatureProfile,
};
use secav_core::surface::{parse_document, print_compact, print_document, NameMap};
use secav_core::syntax::{Formula, Term};
use secav_core::{check_document, check_script, emit_isar, Category, CodegenOptions};

const CORPUS_TIME_LIMIT: Duration = Duration::from_secs(1);
const SOUNDNESS_TIME_LIMIT: Duration = Duration::from_secs(300);
const COUNTERMODEL_TIME_LIMIT: Duration = Duration::from_secs(30);
const SOUNDNESS_SEEDS: u64 = 1000;
const ROUND_TRIP_SEEDS: u64 = 10_000;
const MIN_MUTATIONS: usize = 20;
const INTERPRETATION_BUDGET: u64 = 1_000_000;

const CORPUS: [&str; 3] = ["excluded_middle", "instantiation", "branching"];

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn corpus(name: &str) -> String {
    std::fs::read_to_string(data(&format!("{name}.secav"))).expect("corpus file")
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn corpus_verification() -> Outcome {
    let sources: Vec<String> = CORPUS.iter().map(|n| corpus(n)).collect();
    let start = Instant::now();
    for (name, src) in CORPUS.iter().zip(&sources) {
        let report = check_document(src, &CodegenOptions::default());
        ensure(report.proofs.len() == 1 && report.syntax.is_empty(), || {
            format!("{name}: did not parse")
        })?;
        let p = &report.proofs[0];
        ensure(p.diagnostics.is_empty(), || {
            format!("{name}: {:?}", p.diagnostics)
        })?;
        ensure(p.isar.is_some(), || format!("{name}: no Isar output"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < CORPUS_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("3 scripts in {elapsed:?}"))
}

fn replace_once(src: &str, from: &str, to: &str) -> String {
    assert!(src.contains(from), "mutation anchor `{from}` not found");
    src.replacen(from, to, 1)
}

fn first_error(src: &str) -> (Option<Category>, Vec<Category>) {
    let report = check_document(src, &CodegenOptions::default());
    let all = report.diagnostics();
    let first = all.iter().find(|d| d.is_error()).map(|d| d.category);
    (first, all.iter().map(|d| d.category).collect())
}

fn mutation_suite() -> Outcome {
    let em = corpus("excluded_middle");
    let inst = corpus("instantiation");
    let br = corpus("branching");

    // the reference mutation: AlphaDis replaced by AlphaImp
    let bad = replace_once(&em, "AlphaDis", "AlphaImp");
    let report = check_document(&bad, &CodegenOptions::default());
    let diags = report.diagnostics();
    ensure(
        diags.len() == 1 && diags[0].category == Category::ShapeMismatch,
        || format!("{diags:?}"),
    )?;
    let text = render_human(&diags[0], &bad);
    ensure(
        text.contains("AlphaImp") && text.contains("Dis p[a, b] (Neg p[a, b])"),
        || text.clone(),
    )?;
    ensure(diags[0].span.start_line == 3, || {
        format!("span {:?}", diags[0].span)
    })?;

    use Category::*;
    let cases: Vec<(&str, String, Category)> = vec![
        ("wrong rule AlphaImp", bad.clone(), ShapeMismatch),
        ("wrong rule BetaCon", replace_once(&em, "AlphaDis", "BetaCon"), ShapeMismatch),
        (
            "permuted stated sequent",
            replace_once(&em, "  p[a, b]\n  Neg p[a, b]", "  Neg p[a, b]\n  p[a, b]"),
            StateMismatch,
        ),
        (
            "stale sequent",
            replace_once(&em, "  p[a, b]\n  Neg p[a, b]", "  Dis p[a, b] (Neg p[a, b])"),
            StateMismatch,
        ),
        ("missing final step", replace_once(&em, "Basic\n", ""), IncompleteProof),
        ("extra step", format!("{em}Basic\n"), NoOpenGoals),
        (
            "Basic without matching negation",
            "Dis p[a, b] (Neg p[b, a])\n\nAlphaDis\n  p[a, b]\n  Neg p[b, a]\nBasic\n".to_string(),
            BasicMisapplied,
        ),
        ("unknown rule", replace_once(&em, "AlphaDis", "AlphaDiss"), SyntaxError),
        ("hint on propositional rule", replace_once(&em, "AlphaDis", "AlphaDis[a]"), SyntaxError),
        ("dropped Ext", replace_once(&inst, "Ext\n  p[a, a]\n  Neg p[a, a]\n", ""), BasicMisapplied),
        ("wrong instantiation", replace_once(&inst, "GammaUni[a]", "GammaUni[b]"), StateMismatch),
        ("wrong rule AlphaDis", replace_once(&inst, "AlphaImp", "AlphaDis"), ShapeMismatch),
        ("Ext adds a formula", replace_once(&inst, "Ext\n  p[a, a]\n", "Ext\n  q\n  p[a, a]\n"), ExtNotSubset),
        ("wrong quantifier rule", replace_once(&inst, "GammaUni\n", "GammaExi\n"), ShapeMismatch),
        (
            "permuted AlphaImp result",
            replace_once(&inst, "  Neg (Uni (Uni p[1, 0]))\n  p[a, a]", "  p[a, a]\n  Neg (Uni (Uni p[1, 0]))"),
            StateMismatch,
        ),
        ("missing final step", replace_once(&inst, "Basic\n", ""), IncompleteProof),
        ("wrong branching rule", replace_once(&br, "BetaImp", "BetaDis"), ShapeMismatch),
        (
            "swapped branches",
            replace_once(
                &br,
                "  p[a]\n  Neg p[a]\n  Exi q[0]\n+\n  Neg q[a]\n  Neg p[a]\n  Exi q[0]\n",
                "  Neg q[a]\n  Neg p[a]\n  Exi q[0]\n+\n  p[a]\n  Neg p[a]\n  Exi q[0]\n",
            ),
            StateMismatch,
        ),
        (
            "dropped Ext before AlphaImp",
            replace_once(&br, "Ext\n  Imp (Exi p[0]) (Exi q[0])\n  Neg (Uni (Imp p[0] q[0]))\n", ""),
            ShapeMismatch,
        ),
        ("wrong existential witness", replace_once(&br, "  q[a]\n  Neg q[a]\nBasic", "  q[b]\n  Neg q[a]\nBasic"), BasicMisapplied),
        (
            "non-constant witness",
            replace_once(&br, "DeltaExi\n  Neg p[a]\n", "DeltaExi\n  Neg p[f[a]]\n"),
            StateMismatch,
        ),
        ("missing final step", br.trim_end().strip_suffix("Basic").unwrap().to_string(), IncompleteProof),
        (
            "δ-witness occurring in sequent (DeltaUni)",
            "Dis (Uni p[0]) (Neg p[a])\n\nAlphaDis\n  Uni p[0]\n  Neg p[a]\nDeltaUni\n  p[a]\n  Neg p[a]\nBasic\n"
                .to_string(),
            FreshnessViolation,
        ),
        (
            "δ-witness occurring in sequent (DeltaExi)",
            "Dis (Neg (Exi p[0])) p[a]\n\nAlphaDis\n  Neg (Exi p[0])\n  p[a]\nDeltaExi\n  Neg p[a]\n  p[a]\n"
                .to_string(),
            FreshnessViolation,
        ),
        (
            "vacuous instantiation without hint",
            "Dis (Exi q) (Neg q)\n\nAlphaDis\n  Exi q\n  Neg q\nGammaExi\n  q\n  Neg q\nBasic\n".to_string(),
            MissingHint,
        ),
    ];
    ensure(cases.len() >= MIN_MUTATIONS, || {
        format!("only {} mutations", cases.len())
    })?;
    for (name, src, want) in &cases {
        let (got, all) = first_error(src);
        ensure(got == Some(*want), || {
            format!("{name}: expected {want}, got {got:?} ({all:?})")
        })?;
    }
    let (_, stale) = first_error(&cases[3].1);
    ensure(stale.contains(&UnchangedSequent), || {
        format!("stale sequent without warning: {stale:?}")
    })?;
    Ok(format!(
        "reference mutation plus {} mutations rejected as expected",
        cases.len()
    ))
}

fn soundness() -> Outcome {
    let start = Instant::now();
    let budget = GenBudget::default();
    let mut interpretations = 0u64;
    for seed in 0..SOUNDNESS_SEEDS {
        let s = random_derivation(seed, &budget).map_err(|e| format!("seed {seed}: {e}"))?;
        let d = check_script(&s);
        ensure(d.is_empty(), || {
            format!("seed {seed} does not verify: {d:?}")
        })?;
        let root = vec![s.goal.clone()];
        let sig = SignatureProfile::of_sequent(&root);
        for n in 1..=2 {
            let all = enumerate_interpretations(&sig, n, INTERPRETATION_BUDGET)
                .map_err(|e| e.to_string())?;
            for i in all {
                interpretations += 1;
                let ok = sequent_satisfied(&root, &i).map_err(|e| e.to_string())?;
                ensure(ok, || format!("seed {seed}: root falsified by {i:?}"))?;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < SOUNDNESS_TIME_LIMIT, || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{SOUNDNESS_SEEDS} derivations, {interpretations} interpretations, {elapsed:?}"
    ))
}

// Signature: predicate 0 unary; function 0 nullary, function 1 unary.
fn small_terms() -> Vec<Term> {
    let mut size1: Vec<Term> = (0..3).map(Term::Var).collect();
    size1.push(Term::constant(0));
    let size2: Vec<Term> = size1
        .iter()
        .map(|t| Term::fun(1, vec![t.clone()]))
        .collect();
    size1.into_iter().chain(size2).collect()
}

/// Formulas with at most `n` formula constructors, atoms over `small_terms`.
/// With term constructors counted this covers every formula of size 4 and
/// more, since binary connectives are included.
fn formulas_up_to(n: usize) -> Vec<Vec<Formula>> {
    let mut by_size: Vec<Vec<Formula>> = vec![Vec::new(); n + 1];
    by_size[1] = small_terms()
        .into_iter()
        .map(|t| Formula::pre(0, vec![t]))
        .collect();
    for k in 2..=n {
        let mut out = Vec::new();
        for p in &by_size[k - 1] {
            out.push(Formula::neg(p.clone()));
            out.push(Formula::exi(p.clone()));
            out.push(Formula::uni(p.clone()));
        }
        for i in 1..k - 1 {
            let j = k - 1 - i;
            for p in &by_size[i] {
                for q in &by_size[j] {
                    out.push(Formula::imp(p.clone(), q.clone()));
                    out.push(Formula::dis(p.clone(), q.clone()));
                    out.push(Formula::con(p.clone(), q.clone()));
                }
            }
        }
        by_size[k] = out;
    }
    by_size
}

fn substitution_lemma() -> Outcome {
    let formulas: Vec<Formula> = formulas_up_to(4).into_iter().flatten().collect();
    let terms = small_terms();
    let mut checks = 0u64;
    for n in 1..=2usize {
        let universe: Vec<usize> = (0..n).collect();
        // every table for P (unary), c (nullary), f (unary) and every
        // environment on variables 0..4
        let pred_tables: Vec<Vec<bool>> = (0..1u32 << n)
            .map(|m| (0..n).map(|x| m >> x & 1 == 1).collect())
            .collect();
        let fun_tables: Vec<Vec<usize>> = (0..n.pow(n as u32))
            .map(|m| (0..n).map(|x| m / n.pow(x as u32) % n).collect())
            .collect();
        let envs: Vec<Vec<usize>> = (0..n.pow(4))
            .map(|m| (0..4).map(|x| m / n.pow(x as u32) % n).collect())
            .collect();
        for ptab in &pred_tables {
            for c in 0..n {
                for ftab in &fun_tables {
                    let f = |i: usize, xs: &[usize]| -> Result<usize, secav_core::semantics::EvalError> {
                        Ok(if i == 0 { c } else { ftab[xs[0]] })
                    };
                    let g = |_: usize,
                             xs: &[usize]|
                     -> Result<bool, secav_core::semantics::EvalError> {
                        Ok(ptab[xs[0]])
                    };
                    for env in &envs {
                        let e = |v: usize| env.get(v).copied().unwrap_or(0);
                        for t in &terms {
                            let tv = eval_term(t, &e, &f).map_err(|x| x.to_string())?;
                            let shifted = shift(&e, 0, tv);
                            for p in &formulas {
                                let lhs = eval_formula(&sub(0, t, p), &e, &f, &g, &universe)
                                    .map_err(|x| x.to_string())?;
                                let rhs = eval_formula(p, &shifted, &f, &g, &universe)
                                    .map_err(|x| x.to_string())?;
                                checks += 1;
                                ensure(lhs == rhs, || {
                                    format!("sub(0, {t}, {p}) differs, domain {n}, env {env:?}")
                                })?;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(format!(
        "{} formulas, {} terms, {checks} evaluations",
        formulas.len(),
        terms.len()
    ))
}

fn lists_up_to(pool: &[Formula], len: usize) -> Vec<Vec<Formula>> {
    let mut all = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..len {
        layer = layer
            .iter()
            .flat_map(|l: &Vec<Formula>| {
                pool.iter().map(move |p| {
                    let mut l = l.clone();
                    l.push(p.clone());
                    l
                })
            })
            .collect();
        all.extend(layer.iter().cloned());
    }
    all
}

fn ext_member_oracle() -> Outcome {
    let pool = vec![
        Formula::pre(0, vec![]),
        Formula::neg(Formula::pre(0, vec![])),
        Formula::exi(Formula::pre(1, vec![Term::Var(0)])),
    ];
    let outsider = Formula::pre(2, vec![Term::constant(0)]);
    let lists = lists_up_to(&pool, 4);
    let mut checks = 0u64;
    for y in &lists {
        let yset: HashSet<&Formula> = y.iter().collect();
        for z in &lists {
            let reference = z.iter().all(|p| yset.contains(p));
            ensure(ext(y, z) == reference, || format!("ext({y:?}, {z:?})"))?;
            checks += 1;
        }
        for x in pool.iter().chain([&outsider]) {
            let reference = y.iter().position(|p| p == x).is_some();
            ensure(member(x, y) == reference, || format!("member({x}, {y:?})"))?;
            checks += 1;
        }
    }
    Ok(format!("{} lists, {checks} comparisons", lists.len()))
}

fn generator_names() -> NameMap {
    NameMap::from_names(&["a", "b", "c", "f"], &["p", "q", "r"]).expect("distinct")
}

/// Renumbers symbols by first occurrence: goal, then each step's hint and
/// stated formulas, functions and predicates separately.
fn renumber(s: &ProofScript) -> ProofScript {
    struct R {
        funs: BTreeMap<usize, usize>,
        preds: BTreeMap<usize, usize>,
    }
    impl R {
        fn fun(&mut self, i: usize) -> usize {
            let k = self.funs.len();
            *self.funs.entry(i).or_insert(k)
        }
        fn pred(&mut self, i: usize) -> usize {
            let k = self.preds.len();
            *self.preds.entry(i).or_insert(k)
        }
        fn term(&mut self, t: &Term) -> Term {
            match t {
                Term::Var(n) => Term::Var(*n),
                Term::Fun(i, args) => {
                    let i = self.fun(*i);
                    Term::Fun(i, args.iter().map(|a| self.term(a)).collect())
                }
            }
        }
        fn formula(&mut self, p: &Formula) -> Formula {
            match p {
                Formula::Pre(i, args) => {
                    let i = self.pred(*i);
                    Formula::Pre(i, args.iter().map(|a| self.term(a)).collect())
                }
                Formula::Imp(a, b) => {
                    let a = self.formula(a);
                    Formula::imp(a, self.formula(b))
                }
                Formula::Dis(a, b) => {
                    let a = self.formula(a);
                    Formula::dis(a, self.formula(b))
                }
                Formula::Con(a, b) => {
                    let a = self.formula(a);
                    Formula::con(a, self.formula(b))
                }
                Formula::Exi(a) => Formula::exi(self.formula(a)),
                Formula::Uni(a) => Formula::uni(self.formula(a)),
                Formula::Neg(a) => Formula::neg(self.formula(a)),
            }
        }
    }
    let mut r = R {
        funs: BTreeMap::new(),
        preds: BTreeMap::new(),
    };
    let mut out = s.clone();
    out.goal = r.formula(&s.goal);
    for step in &mut out.steps {
        step.app.hint = step.app.hint.as_ref().map(|h| r.term(h));
        for z in &mut step.stated.open_goals {
            for p in z.iter_mut() {
                *p = r.formula(p);
            }
        }
    }
    out
}

fn round_trip() -> Outcome {
    let names = generator_names();
    let mut steps = 0usize;
    let mut batch: Vec<ProofScript> = Vec::new();
    for seed in 0..ROUND_TRIP_SEEDS {
        let budget = GenBudget {
            max_steps: 4 + (seed % 28) as usize,
            ..GenBudget::default()
        };
        let s = random_derivation(seed, &budget).map_err(|e| format!("seed {seed}: {e}"))?;
        steps += s.steps.len();
        let text = print_compact(&s, &names);
        let doc = parse_document(&text);
        ensure(doc.diagnostics.is_empty() && doc.proofs.len() == 1, || {
            format!("seed {seed}: {:?}\n{text}", doc.diagnostics)
        })?;
        let back = &doc.proofs[0];
        ensure(back.script.same_derivation(&renumber(&s)), || {
            format!("seed {seed} changed:\n{text}")
        })?;
        ensure(print_compact(&back.script, &back.names) == text, || {
            format!("seed {seed}: text changed")
        })?;
        batch.push(s);
        if batch.len() == 4 {
            let text = print_document(batch.iter().map(|s| (s, &names)));
            let doc = parse_document(&text);
            ensure(doc.proofs.len() == 4 && doc.diagnostics.is_empty(), || {
                format!("document at seed {seed}")
            })?;
            for (a, b) in batch.iter().zip(&doc.proofs) {
                ensure(b.script.same_derivation(&renumber(a)), || {
                    format!("document at seed {seed}")
                })?;
            }
            batch.clear();
        }
    }
    for name in CORPUS {
        let src = corpus(name);
        let doc = parse_document(&src);
        let p = &doc.proofs[0];
        let text = print_compact(&p.script, &p.names);
        let again = parse_document(&text);
        ensure(again.proofs.len() == 1, || format!("{name} reparse"))?;
        ensure(
            again.proofs[0].script.same_derivation(&p.script) && again.proofs[0].names == p.names,
            || format!("{name} changed:\n{text}"),
        )?;
    }
    Ok(format!(
        "{ROUND_TRIP_SEEDS} generated scripts ({steps} steps) and the corpus"
    ))
}

fn codegen_snapshots() -> Outcome {
    let update = std::env::var_os("SECAV_UPDATE_GOLDEN").is_some();
    for name in CORPUS {
        let doc = parse_document(&corpus(name));
        let p = &doc.proofs[0];
        let d = check_script(&p.script);
        let text = emit_isar(&p.script, &p.names, &d, &CodegenOptions::default())
            .map_err(|e| e.to_string())?
            .text();
        let path = data(&format!("{name}.thy"));
        if update {
            std::fs::write(&path, &text).map_err(|e| e.to_string())?;
        }
        let golden =
            std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        ensure(golden == text, || format!("{name}.thy differs:\n{text}"))?;
    }
    let doc = parse_document(&corpus("excluded_middle"));
    let goal = doc.proofs[0].script.goal.to_string();
    let want = "Dis (Pre 0 [Fun 0 [], Fun 1 []]) (Neg (Pre 0 [Fun 0 [], Fun 1 []]))";
    ensure(goal == want, || goal.clone())?;
    Ok("3 snapshots byte-identical".to_string())
}

fn countermodels() -> Outcome {
    let start = Instant::now();
    let (p, _) = secav_core::parse_formula("Imp p[a] (Uni p[0])").map_err(|d| d.message)?;
    let m = find_countermodel(&p, 2, INTERPRETATION_BUDGET).map_err(|e| e.to_string())?;
    let m = m.ok_or("no countermodel for Imp p[a] (Uni p[0])")?;
    ensure(m.domain_size == 2 && !m.eval(&p).unwrap(), || {
        format!("{m:?}")
    })?;
    for name in CORPUS {
        let doc = parse_document(&corpus(name));
        let goal = &doc.proofs[0].script.goal;
        let found = find_countermodel(goal, 3, INTERPRETATION_BUDGET).map_err(|e| e.to_string())?;
        ensure(found.is_none(), || {
            format!("{name}: spurious countermodel {found:?}")
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < COUNTERMODEL_TIME_LIMIT, || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "domain-2 countermodel found, corpus goals valid up to domain 3, {elapsed:?}"
    ))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("corpus verification", corpus_verification),
        ("mutation suite", mutation_suite),
        ("soundness on generated derivations", soundness),
        ("substitution lemma", substitution_lemma),
        ("ext/member oracle", ext_member_oracle),
        ("round-trip", round_trip),
        ("codegen snapshots", codegen_snapshots),
        ("countermodel sanity", countermodels),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or(e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} [{elapsed:.2?}]"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why} [{elapsed:.2?}]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
