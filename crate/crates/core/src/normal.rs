//! Conversion of quantified formulas to Skolem-normal-form clause sets, and
//! hypothesis negation.
//!
//! The pipeline is NNF, standardize apart, prenex (quantifiers pulled out
//! left to right, outside in), Skolemize, distribute `Or` over `And`, and
//! finally split into canonical clauses with tautologies removed.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::engine::{Origin, TheorySet};
use crate::logic::{Atom, Clause, Literal, Substitution, Term};
use crate::symbol::Symbol;

/// Largest clause set a single input formula may expand to.
pub const CNF_CLAUSE_BOUND: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    ForAll(Symbol, Box<Formula>),
    Exists(Symbol, Box<Formula>),
}

impl Formula {
    pub fn atom(predicate: &str, args: Vec<Term>) -> Formula {
        Formula::Atom(Atom::new(predicate, args))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(var: &str, f: Formula) -> Formula {
        Formula::ForAll(Symbol::intern(var), Box::new(f))
    }

    pub fn exists(var: &str, f: Formula) -> Formula {
        Formula::Exists(Symbol::intern(var), Box::new(f))
    }

    /// Left-nested conjunction; `None` for an empty list.
    pub fn and_all(items: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        items.into_iter().reduce(|a, b| Formula::And(Box::new(a), Box::new(b)))
    }

    pub fn or_all(items: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        items.into_iter().reduce(|a, b| Formula::Or(Box::new(a), Box::new(b)))
    }

    pub fn from_literal(l: &Literal) -> Formula {
        let a = Formula::Atom(l.atom.clone());
        if l.positive {
            a
        } else {
            Formula::not(a)
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Symbol> {
        fn go(f: &Formula, bound: &mut Vec<Symbol>, out: &mut BTreeSet<Symbol>) {
            match f {
                Formula::Atom(a) => {
                    let mut vs = Vec::new();
                    a.args.iter().for_each(|t| t.collect_vars(&mut vs));
                    out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
                }
                Formula::Not(g) => go(g, bound, out),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Formula::ForAll(v, g) | Formula::Exists(v, g) => {
                    bound.push(*v);
                    go(g, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Every constant and function symbol name, used to keep Skolem names fresh.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        fn term(t: &Term, out: &mut BTreeSet<Symbol>) {
            match t {
                Term::Var(_) => {}
                Term::Const(c) => {
                    out.insert(*c);
                }
                Term::Fn(f, args) => {
                    out.insert(*f);
                    args.iter().for_each(|a| term(a, out));
                }
            }
        }
        fn go(f: &Formula, out: &mut BTreeSet<Symbol>) {
            match f {
                Formula::Atom(a) => a.args.iter().for_each(|t| term(t, out)),
                Formula::Not(g) | Formula::ForAll(_, g) | Formula::Exists(_, g) => go(g, out),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                    go(a, out);
                    go(b, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut out);
        out
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        fn go<'a>(f: &'a Formula, out: &mut Vec<&'a Atom>) {
            match f {
                Formula::Atom(a) => out.push(a),
                Formula::Not(g) | Formula::ForAll(_, g) | Formula::Exists(_, g) => go(g, out),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                    go(a, out);
                    go(b, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(g) => write!(f, "~{g}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::ForAll(v, g) => write!(f, "all {v}. {g}"),
            Formula::Exists(v, g) => write!(f, "exists {v}. {g}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("cnf_blowup: formula expands to more than {bound} clauses")]
    CnfBlowup { bound: usize },
    #[error("formula has free variable `{0}`")]
    FreeVariable(Symbol),
}

/// Hands out `sk1`, `sk2`, ... in first-use order.
#[derive(Clone, Debug, Default)]
pub struct SkolemNamer {
    next: usize,
}

impl SkolemNamer {
    pub fn new() -> Self {
        SkolemNamer { next: 1 }
    }

    /// A namer whose names cannot collide with any symbol already used by
    /// `formulas`.
    pub fn avoiding<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> Self {
        let max = formulas.into_iter().flat_map(|f| f.symbols()).filter_map(|s| s.skolem_index()).max().unwrap_or(0);
        SkolemNamer { next: max + 1 }
    }

    pub fn fresh(&mut self) -> Symbol {
        let s = Symbol::intern(&format!("sk{}", self.next.max(1)));
        self.next = self.next.max(1) + 1;
        s
    }

    /// Index the next fresh name will carry.
    pub fn peek(&self) -> usize {
        self.next.max(1)
    }
}

/// Negation pushed down to the atoms, quantifiers dualized.
pub fn negate(f: &Formula) -> Formula {
    nnf(f, false)
}

/// Negation normal form: no `Implies`, `Not` only directly above atoms.
pub fn to_nnf(f: &Formula) -> Formula {
    nnf(f, true)
}

fn nnf(f: &Formula, positive: bool) -> Formula {
    match f {
        Formula::Atom(_) => {
            if positive {
                f.clone()
            } else {
                Formula::not(f.clone())
            }
        }
        Formula::Not(g) => nnf(g, !positive),
        Formula::And(a, b) => {
            let (a, b) = (Box::new(nnf(a, positive)), Box::new(nnf(b, positive)));
            if positive {
                Formula::And(a, b)
            } else {
                Formula::Or(a, b)
            }
        }
        Formula::Or(a, b) => {
            let (a, b) = (Box::new(nnf(a, positive)), Box::new(nnf(b, positive)));
            if positive {
                Formula::Or(a, b)
            } else {
                Formula::And(a, b)
            }
        }
        Formula::Implies(a, b) => {
            // a -> b  ==  ~a | b
            let (na, b) = (Box::new(nnf(a, !positive)), Box::new(nnf(b, positive)));
            if positive {
                Formula::Or(na, b)
            } else {
                Formula::And(na, b)
            }
        }
        Formula::ForAll(v, g) => {
            let g = Box::new(nnf(g, positive));
            if positive {
                Formula::ForAll(*v, g)
            } else {
                Formula::Exists(*v, g)
            }
        }
        Formula::Exists(v, g) => {
            let g = Box::new(nnf(g, positive));
            if positive {
                Formula::Exists(*v, g)
            } else {
                Formula::ForAll(*v, g)
            }
        }
    }
}

/// Renames every bound variable to a unique `_q{n}` name.
fn standardize_apart(f: &Formula, counter: &mut usize, scope: &mut Vec<(Symbol, Symbol)>) -> Formula {
    let rename_term = |t: &Term, scope: &Vec<(Symbol, Symbol)>| {
        t.rename(&|v| scope.iter().rev().find(|(old, _)| *old == v).map_or(v, |(_, new)| *new))
    };
    match f {
        Formula::Atom(a) => {
            Formula::Atom(Atom { predicate: a.predicate, args: a.args.iter().map(|t| rename_term(t, scope)).collect() })
        }
        Formula::Not(g) => Formula::not(standardize_apart(g, counter, scope)),
        Formula::And(a, b) => {
            Formula::And(Box::new(standardize_apart(a, counter, scope)), Box::new(standardize_apart(b, counter, scope)))
        }
        Formula::Or(a, b) => {
            Formula::Or(Box::new(standardize_apart(a, counter, scope)), Box::new(standardize_apart(b, counter, scope)))
        }
        Formula::Implies(a, b) => {
            Formula::Implies(Box::new(standardize_apart(a, counter, scope)), Box::new(standardize_apart(b, counter, scope)))
        }
        Formula::ForAll(v, g) | Formula::Exists(v, g) => {
            *counter += 1;
            let fresh = Symbol::intern(&format!("_q{counter}"));
            scope.push((*v, fresh));
            let body = Box::new(standardize_apart(g, counter, scope));
            scope.pop();
            match f {
                Formula::ForAll(..) => Formula::ForAll(fresh, body),
                _ => Formula::Exists(fresh, body),
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Quantifier {
    All,
    Some,
}

/// Quantifier-free NNF matrix.
#[derive(Clone, Debug)]
enum Matrix {
    Lit(Literal),
    And(Vec<Matrix>),
    Or(Vec<Matrix>),
}

fn prenex(f: &Formula, prefix: &mut Vec<(Quantifier, Symbol)>) -> Matrix {
    match f {
        Formula::Atom(a) => Matrix::Lit(Literal::pos(a.clone())),
        Formula::Not(g) => match g.as_ref() {
            Formula::Atom(a) => Matrix::Lit(Literal::neg(a.clone())),
            _ => unreachable!("input is in negation normal form"),
        },
        Formula::And(a, b) => {
            let a = prenex(a, prefix);
            let b = prenex(b, prefix);
            Matrix::And(vec![a, b])
        }
        Formula::Or(a, b) => {
            let a = prenex(a, prefix);
            let b = prenex(b, prefix);
            Matrix::Or(vec![a, b])
        }
        Formula::Implies(..) => unreachable!("input is in negation normal form"),
        Formula::ForAll(v, g) => {
            prefix.push((Quantifier::All, *v));
            prenex(g, prefix)
        }
        Formula::Exists(v, g) => {
            prefix.push((Quantifier::Some, *v));
            prenex(g, prefix)
        }
    }
}

fn substitute(m: Matrix, s: &Substitution) -> Matrix {
    match m {
        Matrix::Lit(l) => Matrix::Lit(s.apply_literal(&l)),
        Matrix::And(xs) => Matrix::And(xs.into_iter().map(|x| substitute(x, s)).collect()),
        Matrix::Or(xs) => Matrix::Or(xs.into_iter().map(|x| substitute(x, s)).collect()),
    }
}

fn cnf(m: &Matrix, bound: usize) -> Result<Vec<Vec<Literal>>, NormalizeError> {
    match m {
        Matrix::Lit(l) => Ok(vec![vec![l.clone()]]),
        Matrix::And(xs) => {
            let mut out = Vec::new();
            for x in xs {
                out.extend(cnf(x, bound)?);
                if out.len() > bound {
                    return Err(NormalizeError::CnfBlowup { bound });
                }
            }
            Ok(out)
        }
        Matrix::Or(xs) => {
            let mut acc: Vec<Vec<Literal>> = vec![Vec::new()];
            for x in xs {
                let part = cnf(x, bound)?;
                if acc.len().saturating_mul(part.len()) > bound {
                    return Err(NormalizeError::CnfBlowup { bound });
                }
                let mut next = Vec::with_capacity(acc.len() * part.len());
                for a in &acc {
                    for p in &part {
                        let mut c = a.clone();
                        c.extend(p.iter().cloned());
                        next.push(c);
                    }
                }
                acc = next;
            }
            Ok(acc)
        }
    }
}

/// Clause set of the Skolemized CNF of a closed formula, in canonical form,
/// tautologies removed, duplicates removed (first occurrence kept).
pub fn to_clauses(f: &Formula, namer: &mut SkolemNamer) -> Result<Vec<Clause>, NormalizeError> {
    to_clauses_bounded(f, namer, CNF_CLAUSE_BOUND)
}

pub fn to_clauses_bounded(f: &Formula, namer: &mut SkolemNamer, bound: usize) -> Result<Vec<Clause>, NormalizeError> {
    if let Some(v) = f.free_vars().into_iter().next() {
        return Err(NormalizeError::FreeVariable(v));
    }
    let nnf = to_nnf(f);
    let std = standardize_apart(&nnf, &mut 0, &mut Vec::new());
    let mut prefix = Vec::new();
    let mut matrix = prenex(&std, &mut prefix);

    let mut universals: Vec<Symbol> = Vec::new();
    for (q, v) in prefix {
        match q {
            Quantifier::All => universals.push(v),
            Quantifier::Some => {
                let sk = namer.fresh();
                let term = if universals.is_empty() {
                    Term::Const(sk)
                } else {
                    Term::Fn(sk, universals.iter().map(|u| Term::Var(*u)).collect())
                };
                let s = Substitution::from_bindings([(v, term)]).expect("fresh Skolem term");
                matrix = substitute(matrix, &s);
            }
        }
    }

    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for lits in cnf(&matrix, bound)? {
        let c = Clause::new(lits).canonical();
        if c.is_tautology() {
            continue;
        }
        if seen.insert(c.clone()) {
            out.push(c);
        }
    }
    Ok(out)
}

/// Input clauses for the two refutation runs of one judging task.
#[derive(Clone, Debug)]
pub struct TheorySets {
    pub theory: Vec<Clause>,
    pub hypothesis: Vec<Clause>,
    pub negated_hypothesis: Vec<Clause>,
    /// Theory plus hypothesis.
    pub t1: TheorySet,
    /// Theory plus negated hypothesis.
    pub t2: TheorySet,
}

/// Normalizes the theory once and shares its clauses (and Skolem names)
/// between both sets. The hypothesis side of each set starts from the same
/// Skolem index, so both sets stay comparable.
pub fn build_theory_sets(theory: &[Formula], hypothesis: &Formula) -> Result<TheorySets, NormalizeError> {
    let mut namer = SkolemNamer::avoiding(theory.iter().chain(std::iter::once(hypothesis)));
    let mut theory_clauses = Vec::new();
    for f in theory {
        theory_clauses.extend(to_clauses(f, &mut namer)?);
    }
    let hyp = to_clauses(hypothesis, &mut namer.clone())?;
    let neg = to_clauses(&negate(hypothesis), &mut namer.clone())?;

    let t1 = TheorySet::from_parts(&theory_clauses, &hyp, Origin::Hypothesis);
    let t2 = TheorySet::from_parts(&theory_clauses, &neg, Origin::NegatedHypothesis);
    Ok(TheorySets { theory: theory_clauses, hypothesis: hyp, negated_hypothesis: neg, t1, t2 })
}

/// Clause set of a whole theory with a shared Skolem namer.
pub fn theory_clauses(theory: &[Formula]) -> Result<Vec<Clause>, NormalizeError> {
    let mut namer = SkolemNamer::avoiding(theory);
    let mut out = Vec::new();
    for f in theory {
        out.extend(to_clauses(f, &mut namer)?);
    }
    Ok(out)
}
