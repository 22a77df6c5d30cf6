use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::symbol::Symbol;

/// A first-order term. The derived ordering puts variables before constants
/// before function applications, then compares names and arguments.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Symbol),
    Const(Symbol),
    Fn(Symbol, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Symbol::intern(name))
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(Symbol::intern(name))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) => true,
            Term::Fn(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn occurs(&self, var: Symbol) -> bool {
        match self {
            Term::Var(v) => *v == var,
            Term::Const(_) => false,
            Term::Fn(_, args) => args.iter().any(|a| a.occurs(var)),
        }
    }

    pub(crate) fn collect_vars(&self, out: &mut Vec<Symbol>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(*v)
                }
            }
            Term::Const(_) => {}
            Term::Fn(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub(crate) fn collect_constants(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Term::Var(_) => {}
            Term::Const(c) => {
                out.insert(*c);
            }
            Term::Fn(_, args) => args.iter().for_each(|a| a.collect_constants(out)),
        }
    }

    pub(crate) fn has_function(&self) -> bool {
        matches!(self, Term::Fn(..))
    }

    /// Structural comparison that treats every variable as the same symbol.
    pub(crate) fn cmp_blind(&self, other: &Term) -> Ordering {
        match (self, other) {
            (Term::Var(_), Term::Var(_)) => Ordering::Equal,
            (Term::Const(a), Term::Const(b)) => a.cmp(b),
            (Term::Fn(f, xs), Term::Fn(g, ys)) => f.cmp(g).then_with(|| cmp_blind_args(xs, ys)),
            _ => rank(self).cmp(&rank(other)),
        }
    }

    pub(crate) fn rename(&self, map: &impl Fn(Symbol) -> Symbol) -> Term {
        match self {
            Term::Var(v) => Term::Var(map(*v)),
            Term::Const(_) => self.clone(),
            Term::Fn(f, args) => Term::Fn(*f, args.iter().map(|a| a.rename(map)).collect()),
        }
    }
}

fn rank(t: &Term) -> u8 {
    match t {
        Term::Var(_) => 0,
        Term::Const(_) => 1,
        Term::Fn(..) => 2,
    }
}

pub(crate) fn cmp_blind_args(xs: &[Term], ys: &[Term]) -> Ordering {
    for (x, y) in xs.iter().zip(ys) {
        let o = x.cmp_blind(y);
        if o != Ordering::Equal {
            return o;
        }
    }
    xs.len().cmp(&ys.len())
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(s) | Term::Const(s) => write!(f, "{s}"),
            Term::Fn(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// A predicate application.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub predicate: Symbol,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: &str, args: Vec<Term>) -> Atom {
        Atom { predicate: Symbol::intern(predicate), args }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub(crate) fn cmp_blind(&self, other: &Atom) -> Ordering {
        self.predicate.cmp(&other.predicate).then_with(|| cmp_blind_args(&self.args, &other.args))
    }

    pub(crate) fn rename(&self, map: &impl Fn(Symbol) -> Symbol) -> Atom {
        Atom { predicate: self.predicate, args: self.args.iter().map(|a| a.rename(map)).collect() }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.predicate)?;
        if self.args.is_empty() {
            return Ok(());
        }
        f.write_str("(")?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// A possibly negated atom. Negative literals order before positive ones.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn pos(atom: Atom) -> Literal {
        Literal { positive: true, atom }
    }

    pub fn neg(atom: Atom) -> Literal {
        Literal { positive: false, atom }
    }

    pub fn negated(&self) -> Literal {
        Literal { positive: !self.positive, atom: self.atom.clone() }
    }

    pub fn predicate(&self) -> Symbol {
        self.atom.predicate
    }

    pub(crate) fn cmp_blind(&self, other: &Literal) -> Ordering {
        self.positive.cmp(&other.positive).then_with(|| self.atom.cmp_blind(&other.atom))
    }

    pub(crate) fn rename(&self, map: &impl Fn(Symbol) -> Symbol) -> Literal {
        Literal { positive: self.positive, atom: self.atom.rename(map) }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("-")?;
        }
        write!(f, "{}", self.atom)
    }
}
