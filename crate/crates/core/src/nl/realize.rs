use super::lexicon::Lexicon;
use super::parse::parse_sentence;
use super::NlError;
use crate::logic::{Clause, Literal, Term};
use crate::normal::{negate, to_clauses, Formula, SkolemNamer};
use crate::symbol::Symbol;

fn unrealizable(c: &Clause, why: &str) -> NlError {
    NlError::Unrealizable(format!("{c}: {why}"))
}

fn adjective<'a>(l: &Literal, lex: &'a Lexicon, c: &Clause) -> Result<&'a str, NlError> {
    lex.attribute(l.atom.predicate.as_str())
        .ok_or_else(|| unrealizable(c, &format!("`{}` is not a lexicon attribute", l.atom.predicate)))
}

fn name(t: &Term, lex: &Lexicon, c: &Clause) -> Result<String, NlError> {
    match t {
        Term::Const(s) if s.skolem_index().is_some() => Ok(format!("person {s}")),
        Term::Const(s) => {
            lex.entity(s.as_str()).map(str::to_string).ok_or_else(|| unrealizable(c, &format!("`{s}` is not a lexicon entity")))
        }
        _ => Err(unrealizable(c, "argument is not a name")),
    }
}

fn capitalize_first(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

fn lit_list(c: &Clause, lex: &Lexicon) -> Result<String, NlError> {
    let words = c
        .literals()
        .iter()
        .map(|l| Ok(format!("{}{}", if l.positive { "" } else { "not " }, adjective(l, lex, c)?)))
        .collect::<Result<Vec<_>, NlError>>()?;
    Ok(words.join(" or "))
}

/// Renders a clause with the ground-clause, universal-clause or relation-fact
/// template. Literals keep the clause's own order; canonical input gives the
/// canonical sentence.
pub fn realize_clause(c: &Clause, lex: &Lexicon) -> Result<String, NlError> {
    if c.is_empty() {
        return Ok(String::new());
    }
    if c.has_function_terms() {
        return Err(unrealizable(c, "Skolem function terms have no template"));
    }
    if c.literals().iter().any(|l| l.atom.arity() == 2) {
        let [l] = c.literals() else {
            return Err(unrealizable(c, "relation literals only appear as single facts"));
        };
        let verb = lex
            .relation(l.atom.predicate.as_str())
            .filter(|_| l.positive)
            .ok_or_else(|| unrealizable(c, "not a positive lexicon relation"))?;
        let subject = capitalize_first(&name(&l.atom.args[0], lex, c)?);
        let object = name(&l.atom.args[1], lex, c)?;
        return Ok(format!("{subject} {verb} {object}."));
    }
    if c.literals().iter().any(|l| l.atom.arity() != 1) {
        return Err(unrealizable(c, "only unary attributes fit the templates"));
    }
    let subject = &c.literals()[0].atom.args[0];
    if c.literals().iter().any(|l| &l.atom.args[0] != subject) {
        return Err(unrealizable(c, "literals speak about different subjects"));
    }
    let lits = lit_list(c, lex)?;
    match subject {
        Term::Var(_) => Ok(format!("Everyone is {lits}.")),
        t => Ok(format!("{} is {lits}.", capitalize_first(&name(t, lex, c)?))),
    }
}

fn realize_all(clauses: &[Clause], fresh_from: usize, lex: &Lexicon) -> Result<String, NlError> {
    let fresh = |s: Symbol| s.skolem_index().is_some_and(|i| i >= fresh_from);
    let sentences = clauses
        .iter()
        .map(|c| {
            // a lone fresh witness reads as "Someone"
            if let [l] = c.literals() {
                if let [Term::Const(s)] = l.atom.args.as_slice() {
                    if fresh(*s) && clauses.iter().filter(|d| d.constants().contains(s)).count() == 1 {
                        return Ok(format!("Someone is {}.", lit_list(c, lex)?));
                    }
                }
            }
            realize_clause(c, lex)
        })
        .collect::<Result<Vec<_>, NlError>>()?;
    Ok(sentences.join(" "))
}

/// Realizes the clause form of `f`, one sentence per clause. Skolem
/// constants introduced here for a witness that occurs in a single unit
/// clause come out as "Someone is ...".
pub fn realize_formula(f: &Formula, lex: &Lexicon) -> Result<String, NlError> {
    let mut namer = SkolemNamer::avoiding([f]);
    let fresh_from = namer.peek();
    let clauses = to_clauses(f, &mut namer)?;
    realize_all(&clauses, fresh_from, lex)
}

/// Negates a sentence through the logic: parse, negate, normalize, realize.
pub fn negate_sentence(text: &str, lex: &Lexicon) -> Result<String, NlError> {
    realize_formula(&negate(&parse_sentence(text, lex)?), lex)
}
