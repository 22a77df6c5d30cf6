//! Substitutions and syntactic unification with occurs check.

use std::collections::BTreeMap;
use std::fmt;

use super::clause::Clause;
use super::term::{Atom, Literal, Term};
use crate::symbol::Symbol;

/// A finite map from variables to terms, kept idempotent: no variable bound
/// by the map occurs in any of its range terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<Symbol, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn get(&self, var: Symbol) -> Option<&Term> {
        self.bindings.get(&var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, &Term)> {
        self.bindings.iter()
    }

    /// Builds a substitution from explicit bindings. Fails the occurs check
    /// for a binding like `x -> f(x)`; the result is made idempotent.
    pub fn from_bindings<I>(bindings: I) -> Option<Substitution>
    where
        I: IntoIterator<Item = (Symbol, Term)>,
    {
        let mut s = Substitution::new();
        for (v, t) in bindings {
            if !s.bind(v, t) {
                return None;
            }
        }
        Some(s)
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        if self.bindings.is_empty() {
            return t.clone();
        }
        match t {
            Term::Var(v) => self.bindings.get(v).cloned().unwrap_or_else(|| t.clone()),
            Term::Const(_) => t.clone(),
            Term::Fn(f, args) => Term::Fn(*f, args.iter().map(|a| self.apply_term(a)).collect()),
        }
    }

    pub fn apply_atom(&self, a: &Atom) -> Atom {
        Atom { predicate: a.predicate, args: a.args.iter().map(|t| self.apply_term(t)).collect() }
    }

    pub fn apply_literal(&self, l: &Literal) -> Literal {
        Literal { positive: l.positive, atom: self.apply_atom(&l.atom) }
    }

    /// Replaces every bound variable of `c`. Duplicate literals produced by the
    /// replacement are kept; only canonicalization collapses them.
    pub fn apply(&self, c: &Clause) -> Clause {
        Clause::new(c.literals().iter().map(|l| self.apply_literal(l)).collect())
    }

    /// Adds `var -> term` (both taken under the current bindings), keeping the
    /// map idempotent. Returns false on an occurs-check violation.
    fn bind(&mut self, var: Symbol, term: Term) -> bool {
        let term = self.apply_term(&term);
        let var_now = self.apply_term(&Term::Var(var));
        match var_now {
            Term::Var(v) => {
                if term == Term::Var(v) {
                    return true;
                }
                if term.occurs(v) {
                    return false;
                }
                let single = Substitution { bindings: BTreeMap::from([(v, term.clone())]) };
                for t in self.bindings.values_mut() {
                    *t = single.apply_term(t);
                }
                self.bindings.insert(v, term);
                true
            }
            // already bound: the two images must unify
            other => match unify_terms_into(self.clone(), &other, &term) {
                Some(s) => {
                    *self = s;
                    true
                }
                None => false,
            },
        }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v} -> {t}")?;
        }
        f.write_str("}")
    }
}

/// Most general unifier of two atoms. Predicate mismatch, arity mismatch and
/// occurs-check violations all yield `None`.
///
/// The caller renames variables apart first; shared variable names are
/// treated as the same variable.
pub fn unify(a: &Atom, b: &Atom) -> Option<Substitution> {
    if a.predicate != b.predicate || a.args.len() != b.args.len() {
        return None;
    }
    unify_args(Substitution::new(), &a.args, &b.args)
}

pub(crate) fn unify_args(mut s: Substitution, xs: &[Term], ys: &[Term]) -> Option<Substitution> {
    for (x, y) in xs.iter().zip(ys) {
        s = unify_terms_into(s, x, y)?;
    }
    Some(s)
}

fn unify_terms_into(mut s: Substitution, x: &Term, y: &Term) -> Option<Substitution> {
    let mut work = vec![(x.clone(), y.clone())];
    while let Some((l, r)) = work.pop() {
        let l = s.apply_term(&l);
        let r = s.apply_term(&r);
        if l == r {
            continue;
        }
        match (l, r) {
            (Term::Var(v), t) | (t, Term::Var(v)) => {
                if t.occurs(v) {
                    return None;
                }
                let single = Substitution { bindings: BTreeMap::from([(v, t.clone())]) };
                for bound in s.bindings.values_mut() {
                    *bound = single.apply_term(bound);
                }
                s.bindings.insert(v, t);
            }
            (Term::Fn(f, xs), Term::Fn(g, ys)) => {
                if f != g || xs.len() != ys.len() {
                    return None;
                }
                work.extend(xs.into_iter().zip(ys));
            }
            _ => return None,
        }
    }
    Some(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind(t: Term) -> Atom {
        Atom::new("kind", vec![t])
    }

    #[test]
    fn binds_variable_to_constant() {
        let s = unify(&kind(Term::constant("Bob")), &kind(Term::var("x"))).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.get(Symbol::intern("x")), Some(&Term::constant("Bob")));
    }

    #[test]
    fn identical_atoms_give_empty_substitution() {
        let s = unify(&kind(Term::constant("Bob")), &kind(Term::constant("Bob"))).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn predicate_mismatch_fails() {
        let round = Atom::new("round", vec![Term::constant("Bob")]);
        assert!(unify(&kind(Term::constant("Bob")), &round).is_none());
    }

    #[test]
    fn arity_mismatch_fails() {
        let a = Atom::new("p", vec![Term::var("x")]);
        let b = Atom::new("p", vec![Term::var("x"), Term::var("y")]);
        assert!(unify(&a, &b).is_none());
    }

    #[test]
    fn occurs_check_fails() {
        let a = Atom::new("p", vec![Term::var("x")]);
        let b = Atom::new("p", vec![Term::Fn(Symbol::intern("f"), vec![Term::var("x")])]);
        assert!(unify(&a, &b).is_none());
    }

    #[test]
    fn chained_bindings_are_idempotent() {
        // p(x, y, z) = p(y, z, Bob)
        let a = Atom::new("p", vec![Term::var("x"), Term::var("y"), Term::var("z")]);
        let b = Atom::new("p", vec![Term::var("y"), Term::var("z"), Term::constant("Bob")]);
        let s = unify(&a, &b).unwrap();
        for (_, t) in s.iter() {
            assert_eq!(t, &Term::constant("Bob"));
        }
        assert_eq!(s.apply_atom(&a), s.apply_atom(&b));
    }

    #[test]
    fn from_bindings_rejects_cycles() {
        let x = Symbol::intern("x");
        let fx = Term::Fn(Symbol::intern("f"), vec![Term::var("x")]);
        assert!(Substitution::from_bindings([(x, fx)]).is_none());
        let y = Symbol::intern("y");
        let s = Substitution::from_bindings([(x, Term::var("y")), (y, Term::constant("Bob"))]).unwrap();
        assert_eq!(s.get(x), Some(&Term::constant("Bob")));
    }
}
