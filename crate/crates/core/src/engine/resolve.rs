//! Binary resolution and factoring.

use crate::logic::{unify, Clause, Substitution};

/// A conclusion together with the unifier of the resolved literal pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolvent {
    pub clause: Clause,
    pub mgu: Substitution,
}

fn apart(c1: &Clause, c2: &Clause) -> (Clause, Clause) {
    (c1.rename_apart("_l"), c2.rename_apart("_r"))
}

/// The valid-pair predicate: some literal of `c1` and some literal of `c2`
/// have opposite polarity, the same predicate and unifiable arguments.
pub fn can_resolve(c1: &Clause, c2: &Clause) -> bool {
    let (a, b) = apart(c1, c2);
    a.literals().iter().any(|l| b.literals().iter().any(|m| l.positive != m.positive && unify(&l.atom, &m.atom).is_some()))
}

/// Every binary resolvent of the two clauses, canonical, tautologies dropped,
/// each variant class once.
pub fn resolvents(c1: &Clause, c2: &Clause) -> Vec<Resolvent> {
    let (a, b) = apart(c1, c2);
    let mut out: Vec<Resolvent> = Vec::new();
    for (i, l) in a.literals().iter().enumerate() {
        for (j, m) in b.literals().iter().enumerate() {
            if l.positive == m.positive || l.atom.predicate != m.atom.predicate {
                continue;
            }
            let Some(mgu) = unify(&l.atom, &m.atom) else { continue };
            let rest = a
                .literals()
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i)
                .map(|(_, x)| mgu.apply_literal(x))
                .chain(b.literals().iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| mgu.apply_literal(x)));
            let clause = Clause::new(rest.collect()).canonical();
            if clause.is_tautology() || out.iter().any(|r| r.clause == clause) {
                continue;
            }
            out.push(Resolvent { clause, mgu });
        }
    }
    out
}

pub fn resolve(c1: &Clause, c2: &Clause) -> Vec<Clause> {
    resolvents(c1, c2).into_iter().map(|r| r.clause).collect()
}

/// Factors obtained by unifying one pair of same-polarity, same-predicate
/// literals of `c`.
pub fn factor(c: &Clause) -> Vec<Clause> {
    let lits = c.literals();
    let mut out: Vec<Clause> = Vec::new();
    for i in 0..lits.len() {
        for j in i + 1..lits.len() {
            let (l, m) = (&lits[i], &lits[j]);
            if l.positive != m.positive || l.atom.predicate != m.atom.predicate || l.atom == m.atom {
                continue;
            }
            let Some(mgu) = unify(&l.atom, &m.atom) else { continue };
            let f = mgu.apply(c).canonical();
            if f.is_tautology() || out.contains(&f) {
                continue;
            }
            out.push(f);
        }
    }
    out
}

/// Resolvents of the pair plus every clause reachable from one of them by
/// repeated factoring. These are exactly the conclusions one proof step may
/// draw from the two premises.
pub fn step_conclusions(c1: &Clause, c2: &Clause) -> Vec<Resolvent> {
    let mut out = resolvents(c1, c2);
    let mut i = 0;
    while i < out.len() {
        let mgu = out[i].mgu.clone();
        for f in factor(&out[i].clause) {
            if !out.iter().any(|r| r.clause == f) {
                out.push(Resolvent { clause: f, mgu: mgu.clone() });
            }
        }
        i += 1;
    }
    out
}
