//! Normal-form conversion checked by finite model enumeration. On a fixed
//! domain a formula has a model exactly when its Skolemized clause form has
//! one (with the Skolem functions interpreted over the same domain), so
//! both sides are searched on domains of one to three elements.

use std::collections::{BTreeSet, HashMap};

use nlrefute::logic::{Atom, Clause, Term};
use nlrefute::normal::{negate, to_clauses, to_nnf, Formula, SkolemNamer};
use nlrefute::Symbol;
use proptest::prelude::*;

#[derive(Default)]
struct Signature {
    preds: BTreeSet<(Symbol, usize)>,
    consts: BTreeSet<Symbol>,
    funcs: BTreeSet<(Symbol, usize)>,
}

impl Signature {
    fn add_term(&mut self, t: &Term) {
        match t {
            Term::Var(_) => {}
            Term::Const(c) => {
                self.consts.insert(*c);
            }
            Term::Fn(f, args) => {
                self.funcs.insert((*f, args.len()));
                args.iter().for_each(|a| self.add_term(a));
            }
        }
    }

    fn add_atom(&mut self, a: &Atom) {
        self.preds.insert((a.predicate, a.args.len()));
        a.args.iter().for_each(|t| self.add_term(t));
    }

    fn of_formula(f: &Formula) -> Self {
        let mut s = Signature::default();
        f.atoms().into_iter().for_each(|a| s.add_atom(a));
        s
    }

    fn of_clauses(cs: &[Clause]) -> Self {
        let mut s = Signature::default();
        cs.iter().flat_map(|c| c.atoms()).for_each(|a| s.add_atom(a));
        s
    }
}

struct Interp {
    n: usize,
    preds: HashMap<Symbol, Vec<bool>>,
    consts: HashMap<Symbol, usize>,
    funcs: HashMap<Symbol, Vec<usize>>,
}

fn index(n: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, &a| acc * n + a)
}

impl Interp {
    fn term(&self, t: &Term, env: &HashMap<Symbol, usize>) -> usize {
        match t {
            Term::Var(v) => env[v],
            Term::Const(c) => self.consts[c],
            Term::Fn(f, args) => {
                let vals: Vec<usize> = args.iter().map(|a| self.term(a, env)).collect();
                self.funcs[f][index(self.n, &vals)]
            }
        }
    }

    fn atom(&self, a: &Atom, env: &HashMap<Symbol, usize>) -> bool {
        let vals: Vec<usize> = a.args.iter().map(|t| self.term(t, env)).collect();
        self.preds[&a.predicate][index(self.n, &vals)]
    }

    fn formula(&self, f: &Formula, env: &mut HashMap<Symbol, usize>) -> bool {
        match f {
            Formula::Atom(a) => self.atom(a, env),
            Formula::Not(g) => !self.formula(g, env),
            Formula::And(a, b) => self.formula(a, env) && self.formula(b, env),
            Formula::Or(a, b) => self.formula(a, env) || self.formula(b, env),
            Formula::Implies(a, b) => !self.formula(a, env) || self.formula(b, env),
            Formula::ForAll(v, g) | Formula::Exists(v, g) => {
                let universal = matches!(f, Formula::ForAll(..));
                let saved = env.get(v).copied();
                let mut result = universal;
                for d in 0..self.n {
                    env.insert(*v, d);
                    if self.formula(g, env) != universal {
                        result = !universal;
                        break;
                    }
                }
                match saved {
                    Some(d) => env.insert(*v, d),
                    None => env.remove(v),
                };
                result
            }
        }
    }

    fn clause(&self, c: &Clause) -> bool {
        let vars = c.vars();
        (0..self.n.pow(vars.len() as u32)).all(|code| {
            let env: HashMap<Symbol, usize> =
                vars.iter().enumerate().map(|(i, v)| (*v, code / self.n.pow(i as u32) % self.n)).collect();
            c.literals().iter().any(|l| self.atom(&l.atom, &env) == l.positive)
        })
    }
}

/// Calls `visit` on every interpretation of `sig` over an `n`-element
/// domain until it returns true. `None` if there are more than `limit`.
fn any_model(sig: &Signature, n: usize, limit: u64, mut visit: impl FnMut(&Interp) -> bool) -> Option<bool> {
    let mut radix: Vec<usize> = Vec::new();
    for &(_, k) in &sig.preds {
        radix.extend(std::iter::repeat_n(2, n.pow(k as u32)));
    }
    radix.extend(std::iter::repeat_n(n, sig.consts.len()));
    for &(_, k) in &sig.funcs {
        radix.extend(std::iter::repeat_n(n, n.pow(k as u32)));
    }
    let total = radix.iter().try_fold(1u64, |acc, &r| acc.checked_mul(r as u64))?;
    if total > limit {
        return None;
    }
    let mut digits = vec![0usize; radix.len()];
    for _ in 0..total {
        let mut k = 0;
        let mut interp = Interp { n, preds: HashMap::new(), consts: HashMap::new(), funcs: HashMap::new() };
        for &(p, a) in &sig.preds {
            let m = n.pow(a as u32);
            interp.preds.insert(p, digits[k..k + m].iter().map(|&d| d == 1).collect());
            k += m;
        }
        for &c in &sig.consts {
            interp.consts.insert(c, digits[k]);
            k += 1;
        }
        for &(f, a) in &sig.funcs {
            let m = n.pow(a as u32);
            interp.funcs.insert(f, digits[k..k + m].to_vec());
            k += m;
        }
        if visit(&interp) {
            return Some(true);
        }
        for (d, r) in digits.iter_mut().zip(&radix) {
            *d += 1;
            if *d < *r {
                break;
            }
            *d = 0;
        }
    }
    Some(false)
}

const PREDS: [&str; 3] = ["kind", "round", "rough"];

fn formula() -> impl Strategy<Value = Formula> {
    let arg = prop_oneof![
        3 => prop::sample::select(&["x", "y"][..]).prop_map(Term::var),
        1 => prop::sample::select(&["Bob", "Alan"][..]).prop_map(Term::constant),
    ];
    let leaf = (prop::sample::select(&PREDS[..]), arg).prop_map(|(p, t)| Formula::atom(p, vec![t]));
    leaf.prop_recursive(4, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::Or(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (prop::sample::select(&["x", "y"][..]), inner.clone()).prop_map(|(v, f)| Formula::forall(v, f)),
            (prop::sample::select(&["x", "y"][..]), inner).prop_map(|(v, f)| Formula::exists(v, f)),
        ]
    })
}

fn closed_formula() -> impl Strategy<Value = Formula> {
    formula().prop_map(|f| f.free_vars().into_iter().fold(f, |g, v| Formula::ForAll(v, Box::new(g))))
}

const LIMIT: u64 = 200_000;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn nnf_and_negation_preserve_truth(f in closed_formula()) {
        let nnf = to_nnf(&f);
        let neg = negate(&f);
        let sig = Signature::of_formula(&f);
        for n in 1..=3 {
            let mut bad = None;
            any_model(&sig, n, LIMIT, |m| {
                let v = m.formula(&f, &mut HashMap::new());
                if m.formula(&nnf, &mut HashMap::new()) != v || m.formula(&neg, &mut HashMap::new()) == v {
                    bad = Some(n);
                }
                bad.is_some()
            });
            prop_assert!(bad.is_none(), "disagreement on a {n}-element model");
        }
    }

    #[test]
    fn clause_form_is_equisatisfiable_per_domain(f in closed_formula()) {
        let Ok(clauses) = to_clauses(&f, &mut SkolemNamer::new()) else {
            return Ok(());
        };
        let fsig = Signature::of_formula(&f);
        let csig = Signature::of_clauses(&clauses);
        for n in 1..=3 {
            let formula_sat = any_model(&fsig, n, LIMIT, |m| m.formula(&f, &mut HashMap::new()));
            let clauses_sat = any_model(&csig, n, LIMIT, |m| clauses.iter().all(|c| m.clause(c)));
            if let (Some(a), Some(b)) = (formula_sat, clauses_sat) {
                let shown: Vec<String> = clauses.iter().map(Clause::to_string).collect();
                prop_assert_eq!(a, b, "domain {}: {:?}", n, shown);
            }
        }
    }
}

#[test]
fn enumeration_counts_interpretations() {
    let f = Formula::atom("kind", vec![Term::constant("Bob")]);
    let sig = Signature::of_formula(&f);
    let mut seen = 0;
    any_model(&sig, 2, LIMIT, |_| {
        seen += 1;
        false
    });
    // two truth assignments per element times two places for Bob
    assert_eq!(seen, 8);
}

#[test]
fn skolem_function_needs_a_witness_per_element() {
    // forall x exists y (kind(x) -> -kind(y)) & kind(Bob)
    let f = Formula::And(
        Box::new(Formula::forall(
            "x",
            Formula::exists(
                "y",
                Formula::implies(
                    Formula::atom("kind", vec![Term::var("x")]),
                    Formula::not(Formula::atom("kind", vec![Term::var("y")])),
                ),
            ),
        )),
        Box::new(Formula::atom("kind", vec![Term::constant("Bob")])),
    );
    let clauses = to_clauses(&f, &mut SkolemNamer::new()).unwrap();
    assert!(clauses.iter().any(Clause::has_function_terms));
    let csig = Signature::of_clauses(&clauses);
    assert_eq!(any_model(&csig, 1, LIMIT, |m| clauses.iter().all(|c| m.clause(c))), Some(false));
    assert_eq!(any_model(&csig, 2, LIMIT, |m| clauses.iter().all(|c| m.clause(c))), Some(true));
}
