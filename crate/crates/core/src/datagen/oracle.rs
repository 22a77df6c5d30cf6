//! Model enumeration over the Herbrand base of a function-free clause set.
//!
//! Clauses are grounded over the constants they mention. Ground atoms that
//! never share a ground clause are independent, so the base is split into
//! connected components and each component is searched on its own with
//! backtracking, checking a clause as soon as its last atom is assigned.

use std::collections::HashMap;

use thiserror::Error;

use crate::judge::Label;
use crate::logic::{Atom, Clause, Substitution, Term};
use crate::symbol::Symbol;

/// Largest number of ground atoms searched together.
pub const ORACLE_ATOM_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle_overflow: {atoms} interdependent ground atoms exceed the cap of {cap}")]
    Overflow { atoms: usize, cap: usize },
    #[error("the oracle handles function-free clauses only")]
    FunctionTerms,
    #[error("the theory alone is unsatisfiable")]
    InconsistentTheory,
}

type GroundClause = Vec<(usize, bool)>;

fn ground(clauses: &[Clause]) -> Result<(usize, Vec<GroundClause>), OracleError> {
    if clauses.iter().any(Clause::has_function_terms) {
        return Err(OracleError::FunctionTerms);
    }
    let mut constants: Vec<Symbol> = clauses.iter().flat_map(|c| c.constants()).collect();
    constants.sort();
    constants.dedup();
    if constants.is_empty() {
        constants.push(Symbol::intern("_d"));
    }
    let mut atoms: HashMap<Atom, usize> = HashMap::new();
    let mut out = Vec::new();
    for c in clauses {
        let vars = c.vars();
        let mut choice = vec![0usize; vars.len()];
        loop {
            let s = Substitution::from_bindings(vars.iter().zip(&choice).map(|(v, &i)| (*v, Term::Const(constants[i]))))
                .expect("constants never fail the occurs check");
            let mut g: GroundClause = Vec::with_capacity(c.len());
            for l in c.literals() {
                let a = s.apply_atom(&l.atom);
                let n = atoms.len();
                let id = *atoms.entry(a).or_insert(n);
                g.push((id, l.positive));
            }
            g.sort_unstable();
            g.dedup();
            if !g.windows(2).any(|w| w[0].0 == w[1].0) {
                out.push(g);
            }
            // odometer over constant choices
            let mut k = 0;
            while k < choice.len() {
                choice[k] += 1;
                if choice[k] < constants.len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
            if k == choice.len() {
                break;
            }
        }
    }
    Ok((atoms.len(), out))
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn search(i: usize, n: usize, by_last: &[Vec<&GroundClause>], value: &mut [bool]) -> bool {
    if i == n {
        return true;
    }
    for v in [false, true] {
        value[i] = v;
        let ok = by_last[i].iter().all(|c| c.iter().any(|&(a, pos)| value[a] == pos));
        if ok && search(i + 1, n, by_last, value) {
            return true;
        }
    }
    false
}

/// Whether the clause set has a Herbrand model.
pub fn satisfiable(clauses: &[Clause]) -> Result<bool, OracleError> {
    let (n_atoms, ground) = ground(clauses)?;
    if ground.iter().any(Vec::is_empty) {
        return Ok(false);
    }
    let mut parent: Vec<usize> = (0..n_atoms).collect();
    for g in &ground {
        let r = find(&mut parent, g[0].0);
        for &(a, _) in &g[1..] {
            let s = find(&mut parent, a);
            parent[s] = r;
        }
    }
    let mut components: HashMap<usize, (Vec<usize>, Vec<&GroundClause>)> = HashMap::new();
    for a in 0..n_atoms {
        let r = find(&mut parent, a);
        components.entry(r).or_default().0.push(a);
    }
    for g in &ground {
        let r = find(&mut parent, g[0].0);
        components.get_mut(&r).expect("root has a component").1.push(g);
    }
    let mut roots: Vec<usize> = components.keys().copied().collect();
    roots.sort_unstable();
    for r in roots {
        let (members, cs) = &components[&r];
        if members.len() > ORACLE_ATOM_CAP {
            return Err(OracleError::Overflow { atoms: members.len(), cap: ORACLE_ATOM_CAP });
        }
        let local: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let mut by_last: Vec<Vec<GroundClause>> = vec![Vec::new(); members.len()];
        for g in cs {
            let lg: GroundClause = g.iter().map(|&(a, p)| (local[&a], p)).collect();
            let last = lg.iter().map(|&(a, _)| a).max().expect("non-empty ground clause");
            by_last[last].push(lg);
        }
        let refs: Vec<Vec<&GroundClause>> = by_last.iter().map(|v| v.iter().collect()).collect();
        let mut value = vec![false; members.len()];
        if !search(0, members.len(), &refs, &mut value) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Entailment label of a hypothesis, given its clause form and the clause
/// form of its negation. The theory must be satisfiable on its own.
pub fn oracle_entail(theory: &[Clause], hypothesis: &[Clause], negated: &[Clause]) -> Result<Label, OracleError> {
    if !satisfiable(theory)? {
        return Err(OracleError::InconsistentTheory);
    }
    let with = |extra: &[Clause]| -> Result<bool, OracleError> {
        let all: Vec<Clause> = theory.iter().chain(extra).cloned().collect();
        satisfiable(&all)
    };
    if !with(negated)? {
        Ok(Label::True)
    } else if !with(hypothesis)? {
        Ok(Label::False)
    } else {
        Ok(Label::Unknown)
    }
}

/// Whether every Herbrand model of `premises` satisfies the universal
/// closure of `conclusion`. Its variables are replaced by fresh witnesses.
pub fn entails_clause(premises: &[Clause], conclusion: &Clause) -> Result<bool, OracleError> {
    let witnesses = Substitution::from_bindings(
        conclusion.vars().into_iter().enumerate().map(|(i, v)| (v, Term::Const(Symbol::intern(&format!("_w{i}"))))),
    )
    .expect("constants never fail the occurs check");
    let mut all: Vec<Clause> = premises.to_vec();
    for l in witnesses.apply(conclusion).literals() {
        all.push(Clause::unit(l.negated()));
    }
    Ok(!satisfiable(&all)?)
}
