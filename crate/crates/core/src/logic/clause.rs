use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use super::term::{Atom, Literal, Term};
use crate::symbol::Symbol;

/// Upper bound on the number of literal orderings tried when breaking ties
/// between literals that differ only in their variables.
const MAX_TIE_ORDERINGS: usize = 5040;

/// A disjunction of literals. All variables are implicitly universally
/// quantified; the empty clause is the contradiction.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause {
    literals: Vec<Literal>,
}

/// `v1`, `v2`, ... as interned symbols.
pub(crate) fn canonical_var(index: usize) -> Symbol {
    static CACHE: OnceLock<Vec<Symbol>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| (1..=64).map(|i| Symbol::intern(&format!("v{i}"))).collect());
    match cache.get(index) {
        Some(s) => *s,
        None => Symbol::intern(&format!("v{}", index + 1)),
    }
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Clause {
        Clause { literals }
    }

    pub fn empty() -> Clause {
        Clause::default()
    }

    pub fn unit(literal: Literal) -> Clause {
        Clause { literals: vec![literal] }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn into_literals(self) -> Vec<Literal> {
        self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.literals.len() == 1
    }

    pub fn is_ground(&self) -> bool {
        self.literals.iter().all(|l| l.atom.is_ground())
    }

    /// At most one positive literal.
    pub fn is_horn(&self) -> bool {
        self.literals.iter().filter(|l| l.positive).count() <= 1
    }

    /// True if some atom occurs both positively and negatively.
    pub fn is_tautology(&self) -> bool {
        self.literals
            .iter()
            .enumerate()
            .any(|(i, a)| self.literals[i + 1..].iter().any(|b| a.positive != b.positive && a.atom == b.atom))
    }

    /// Variables in order of first occurrence.
    pub fn vars(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        for l in &self.literals {
            for t in &l.atom.args {
                t.collect_vars(&mut out);
            }
        }
        out
    }

    pub fn constants(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for l in &self.literals {
            for t in &l.atom.args {
                t.collect_constants(&mut out);
            }
        }
        out
    }

    pub fn predicates(&self) -> BTreeSet<(Symbol, usize)> {
        self.literals.iter().map(|l| (l.atom.predicate, l.atom.arity())).collect()
    }

    pub fn has_function_terms(&self) -> bool {
        self.literals.iter().any(|l| l.atom.args.iter().any(Term::has_function))
    }

    /// Renames every variable through `map`.
    pub fn rename(&self, map: impl Fn(Symbol) -> Symbol) -> Clause {
        Clause { literals: self.literals.iter().map(|l| l.rename(&map)).collect() }
    }

    /// Renames variables to `{prefix}1`, `{prefix}2`, ... by first occurrence.
    pub fn rename_apart(&self, prefix: &str) -> Clause {
        let vars = self.vars();
        if vars.is_empty() {
            return self.clone();
        }
        let fresh: Vec<Symbol> = (1..=vars.len()).map(|i| Symbol::intern(&format!("{prefix}{i}"))).collect();
        self.rename(|v| match vars.iter().position(|w| *w == v) {
            Some(i) => fresh[i],
            None => v,
        })
    }

    /// The canonical representative of this clause's variant class.
    ///
    /// Literals are deduplicated and sorted by (polarity, predicate, argument
    /// structure), negative literals first, and variables are renamed
    /// `v1, v2, ...` in order of first occurrence. When several literals differ
    /// only in their variables, every ordering of them is tried and the least
    /// result is kept, so two clauses are variants exactly when their
    /// canonical forms are equal.
    pub fn canonical(&self) -> Clause {
        let mut lits = self.literals.clone();
        lits.sort();
        lits.dedup();
        if lits.iter().all(|l| l.atom.is_ground()) {
            return Clause { literals: lits };
        }
        lits.sort_by(|a, b| a.cmp_blind(b));

        let mut groups: Vec<(usize, usize)> = Vec::new();
        let mut start = 0;
        for i in 1..=lits.len() {
            if i == lits.len() || lits[i].cmp_blind(&lits[start]).is_ne() {
                if i - start > 1 && !lits[start..i].iter().all(|l| l.atom.is_ground()) {
                    groups.push((start, i));
                }
                start = i;
            }
        }

        let mut orderings = 1usize;
        for (s, e) in &groups {
            orderings = orderings.saturating_mul(factorial(e - s));
        }
        if groups.is_empty() || orderings > MAX_TIE_ORDERINGS {
            return rename_sorted(&lits);
        }

        let perms: Vec<Vec<Vec<usize>>> = groups.iter().map(|(s, e)| permutations(e - s)).collect();
        let mut choice = vec![0usize; groups.len()];
        let mut best: Option<Clause> = None;
        loop {
            let mut order = lits.clone();
            for (g, (s, _)) in groups.iter().enumerate() {
                for (k, &p) in perms[g][choice[g]].iter().enumerate() {
                    order[s + k] = lits[s + p].clone();
                }
            }
            let cand = rename_sorted(&order);
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
            // odometer over the per-group permutation choices
            let mut g = 0;
            loop {
                if g == groups.len() {
                    return best.expect("at least one ordering");
                }
                choice[g] += 1;
                if choice[g] < perms[g].len() {
                    break;
                }
                choice[g] = 0;
                g += 1;
            }
        }
    }

    pub fn is_variant_of(&self, other: &Clause) -> bool {
        self.canonical() == other.canonical()
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.literals.iter().map(|l| &l.atom)
    }

    /// Theta-subsumption: some substitution maps every literal of `self`
    /// onto a literal of `other`. Only clauses no longer than `other` count.
    pub fn subsumes(&self, other: &Clause) -> bool {
        self.len() <= other.len() && match_from(&self.literals, &other.literals, &mut Vec::new())
    }
}

fn match_term(p: &Term, t: &Term, binds: &mut Vec<(Symbol, Term)>) -> bool {
    match (p, t) {
        (Term::Var(v), _) => match binds.iter().find(|(w, _)| w == v) {
            Some((_, bound)) => bound == t,
            None => {
                binds.push((*v, t.clone()));
                true
            }
        },
        (Term::Const(a), Term::Const(b)) => a == b,
        (Term::Fn(f, xs), Term::Fn(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_term(x, y, binds))
        }
        _ => false,
    }
}

fn match_from(pattern: &[Literal], target: &[Literal], binds: &mut Vec<(Symbol, Term)>) -> bool {
    let Some((first, rest)) = pattern.split_first() else { return true };
    for t in target {
        if t.positive != first.positive || t.atom.predicate != first.atom.predicate || t.atom.arity() != first.atom.arity() {
            continue;
        }
        let mark = binds.len();
        if first.atom.args.iter().zip(&t.atom.args).all(|(p, a)| match_term(p, a, binds)) && match_from(rest, target, binds) {
            return true;
        }
        binds.truncate(mark);
    }
    false
}

fn rename_sorted(order: &[Literal]) -> Clause {
    let clause = Clause { literals: order.to_vec() };
    let vars = clause.vars();
    let mut renamed = clause.rename(|v| match vars.iter().position(|w| *w == v) {
        Some(i) => canonical_var(i),
        None => v,
    });
    renamed.literals.sort();
    renamed.literals.dedup();
    renamed
}

fn factorial(n: usize) -> usize {
    (1..=n).fold(1usize, |acc, k| acc.saturating_mul(k))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

impl fmt::Display for Clause {
    /// `-kind(v1) | -round(v1) | rough(v1)`; the empty clause is `[]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return f.write_str("[]");
        }
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromIterator<Literal> for Clause {
    fn from_iter<T: IntoIterator<Item = Literal>>(iter: T) -> Self {
        Clause { literals: iter.into_iter().collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsumption() {
        let c = |t: &str| t.parse::<Clause>().unwrap();
        assert!(c("kind(x)").subsumes(&c("kind(Bob) | rough(Bob)")));
        assert!(c("-kind(x) | rough(x)").subsumes(&c("-kind(Bob) | rough(Bob) | tall(Alan)")));
        assert!(!c("-kind(x) | rough(x)").subsumes(&c("-kind(Bob) | rough(Alan)")));
        assert!(!c("kind(Bob)").subsumes(&c("kind(x)")));
        assert!(Clause::empty().subsumes(&c("kind(Bob)")));
        assert!(c("p(x,y)").subsumes(&c("p(v1,v1)")));
        assert!(!c("p(x,x)").subsumes(&c("p(v1,v2)")));
        assert!(!c("p(x) | p(y)").subsumes(&c("p(Bob)")));
    }

    fn lit(pos: bool, pred: &str, arg: Term) -> Literal {
        Literal { positive: pos, atom: Atom::new(pred, vec![arg]) }
    }

    #[test]
    fn canonical_orders_negatives_first_and_renames() {
        let c = Clause::new(vec![lit(true, "rough", Term::var("x")), lit(false, "kind", Term::var("x"))]);
        assert_eq!(c.canonical().to_string(), "-kind(v1) | rough(v1)");
    }

    #[test]
    fn canonical_dedups() {
        let a = lit(true, "p", Term::constant("a"));
        let c = Clause::new(vec![a.clone(), a]);
        assert_eq!(c.canonical().to_string(), "p(a)");
    }

    #[test]
    fn ties_between_variable_only_differences_are_resolved() {
        // p(x) | p(y) | q(x)  and  p(y) | p(x) | q(x) are variants
        let c1 =
            Clause::new(vec![lit(true, "p", Term::var("x")), lit(true, "p", Term::var("y")), lit(true, "q", Term::var("x"))]);
        let c2 =
            Clause::new(vec![lit(true, "p", Term::var("y")), lit(true, "p", Term::var("x")), lit(true, "q", Term::var("x"))]);
        assert_eq!(c1.canonical(), c2.canonical());
        assert_eq!(c1.canonical().canonical(), c1.canonical());
    }

    #[test]
    fn empty_clause_display() {
        assert_eq!(Clause::empty().to_string(), "[]");
        assert_eq!(Clause::empty().canonical(), Clause::empty());
    }

    #[test]
    fn tautology_detection() {
        let c = Clause::new(vec![lit(true, "p", Term::var("x")), lit(false, "p", Term::var("x"))]);
        assert!(c.is_tautology());
        let d = Clause::new(vec![lit(true, "p", Term::var("x")), lit(false, "p", Term::var("y"))]);
        assert!(!d.is_tautology());
    }
}
