//! Terms, formulas and sequents of the object logic.
//!
//! Function and predicate symbols are plain natural numbers and variables are
//! de Bruijn indices: `Var 0` refers to the nearest enclosing quantifier.
//! Nothing here enforces arities; the same identifier may be applied to
//! argument lists of different lengths.

use std::fmt;

/// Function symbol identifier.
pub type FunId = usize;
/// Predicate symbol identifier.
pub type PredId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Fun(FunId, Vec<Term>),
    Var(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Pre(PredId, Vec<Term>),
    Imp(Box<Formula>, Box<Formula>),
    Dis(Box<Formula>, Box<Formula>),
    Con(Box<Formula>, Box<Formula>),
    Exi(Box<Formula>),
    Uni(Box<Formula>),
    Neg(Box<Formula>),
}

/// A one-sided sequent, read as the disjunction of its formulas. Order matters
/// and duplicates are allowed.
pub type Sequent = Vec<Formula>;

impl Term {
    pub fn fun(id: FunId, args: Vec<Term>) -> Term {
        Term::Fun(id, args)
    }

    /// A function symbol applied to no arguments.
    pub fn constant(id: FunId) -> Term {
        Term::Fun(id, Vec::new())
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Fun(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Fun(_, args) => args.iter().all(Term::is_closed),
        }
    }
}

impl Formula {
    pub fn pre(id: PredId, args: Vec<Term>) -> Formula {
        Formula::Pre(id, args)
    }

    pub fn imp(p: Formula, q: Formula) -> Formula {
        Formula::Imp(Box::new(p), Box::new(q))
    }

    pub fn dis(p: Formula, q: Formula) -> Formula {
        Formula::Dis(Box::new(p), Box::new(q))
    }

    pub fn con(p: Formula, q: Formula) -> Formula {
        Formula::Con(Box::new(p), Box::new(q))
    }

    pub fn exi(p: Formula) -> Formula {
        Formula::Exi(Box::new(p))
    }

    pub fn uni(p: Formula) -> Formula {
        Formula::Uni(Box::new(p))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(p: Formula) -> Formula {
        Formula::Neg(Box::new(p))
    }

    /// Number of constructors in the tree, term constructors included.
    pub fn size(&self) -> usize {
        formula_size(self)
    }

    /// Name of the outermost constructor.
    pub fn constructor_name(&self) -> &'static str {
        match self {
            Formula::Pre(..) => "Pre",
            Formula::Imp(..) => "Imp",
            Formula::Dis(..) => "Dis",
            Formula::Con(..) => "Con",
            Formula::Exi(..) => "Exi",
            Formula::Uni(..) => "Uni",
            Formula::Neg(..) => "Neg",
        }
    }
}

pub fn formula_size(p: &Formula) -> usize {
    match p {
        Formula::Pre(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        Formula::Imp(p, q) | Formula::Dis(p, q) | Formula::Con(p, q) => {
            1 + formula_size(p) + formula_size(q)
        }
        Formula::Exi(p) | Formula::Uni(p) | Formula::Neg(p) => 1 + formula_size(p),
    }
}

/// Function and predicate symbols with the arities they are used at, each
/// listed once in order of first occurrence (left to right, depth first).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Symbols {
    pub funs: Vec<(FunId, usize)>,
    pub preds: Vec<(PredId, usize)>,
}

impl Symbols {
    pub fn is_empty(&self) -> bool {
        self.funs.is_empty() && self.preds.is_empty()
    }

    fn add_term(&mut self, t: &Term) {
        if let Term::Fun(i, args) = t {
            push_unique(&mut self.funs, (*i, args.len()));
            for a in args {
                self.add_term(a);
            }
        }
    }

    pub fn add_formula(&mut self, p: &Formula) {
        match p {
            Formula::Pre(i, args) => {
                push_unique(&mut self.preds, (*i, args.len()));
                for a in args {
                    self.add_term(a);
                }
            }
            Formula::Imp(p, q) | Formula::Dis(p, q) | Formula::Con(p, q) => {
                self.add_formula(p);
                self.add_formula(q);
            }
            Formula::Exi(p) | Formula::Uni(p) | Formula::Neg(p) => self.add_formula(p),
        }
    }
}

fn push_unique<T: PartialEq>(v: &mut Vec<T>, x: T) {
    if !v.contains(&x) {
        v.push(x);
    }
}

pub fn symbols_of(p: &Formula) -> Symbols {
    let mut s = Symbols::default();
    s.add_formula(p);
    s
}

pub fn symbols_of_sequent(z: &[Formula]) -> Symbols {
    let mut s = Symbols::default();
    for p in z {
        s.add_formula(p);
    }
    s
}

/// Indices of variables that are free at the top level of `p`, i.e. not bound
/// by any quantifier inside `p`. Sorted and deduplicated.
pub fn free_vars(p: &Formula) -> Vec<usize> {
    fn term(t: &Term, depth: usize, out: &mut Vec<usize>) {
        match t {
            Term::Var(n) if *n >= depth => out.push(n - depth),
            Term::Var(_) => {}
            Term::Fun(_, args) => args.iter().for_each(|a| term(a, depth, out)),
        }
    }
    fn go(p: &Formula, depth: usize, out: &mut Vec<usize>) {
        match p {
            Formula::Pre(_, args) => args.iter().for_each(|a| term(a, depth, out)),
            Formula::Imp(p, q) | Formula::Dis(p, q) | Formula::Con(p, q) => {
                go(p, depth, out);
                go(q, depth, out);
            }
            Formula::Exi(p) | Formula::Uni(p) => go(p, depth + 1, out),
            Formula::Neg(p) => go(p, depth, out),
        }
    }
    let mut out = Vec::new();
    go(p, 0, &mut out);
    out.sort_unstable();
    out.dedup();
    out
}

// Full numeric syntax, e.g. `Dis (Pre 0 [Fun 0 []]) (Neg (Pre 0 [Fun 0 []]))`.

fn write_terms(f: &mut fmt::Formatter<'_>, ts: &[Term]) -> fmt::Result {
    f.write_str("[")?;
    for (k, t) in ts.iter().enumerate() {
        if k > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{t}")?;
    }
    f.write_str("]")
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(n) => write!(f, "Var {n}"),
            Term::Fun(i, args) => {
                write!(f, "Fun {i} ")?;
                write_terms(f, args)
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Pre(i, args) => {
                write!(f, "Pre {i} ")?;
                write_terms(f, args)
            }
            Formula::Imp(p, q) | Formula::Dis(p, q) | Formula::Con(p, q) => {
                write!(f, "{} ({p}) ({q})", self.constructor_name())
            }
            Formula::Exi(p) | Formula::Uni(p) | Formula::Neg(p) => {
                write!(f, "{} ({p})", self.constructor_name())
            }
        }
    }
}

/// Renders a formula in the fully parenthesized numeric syntax that the
/// generated Isar text embeds.
pub fn print_full_secav(p: &Formula) -> String {
    p.to_string()
}
