//! LL(1) parser for the template fragment.
//!
//! ```text
//! fact          := Name "is" ["not"] Adj "."
//! rel_fact      := Name Verb Name "."                 (relations enabled only)
//! rule          := AdjList "people are" ["not"] Adj "."
//!                | "If someone is" AdjList2 "then they are" ["not"] Adj "."
//! univ_clause   := "Everyone is" LitList "."
//! ground_clause := Name "is" LitList "."
//! exist_fact    := "Someone is" ["not"] Adj "."
//! LitList       := Lit {"or" Lit}        Lit := ["not"] Adj
//! AdjList       := Adj {"," Adj}         AdjList2 := Adj {"and" Adj}
//! Name          := entity | "person" skN
//! ```

use serde::{Deserialize, Serialize};

use super::lexicon::{Lexicon, FUNCTION_WORDS};
use super::NlError;
use crate::logic::{Atom, Term};
use crate::normal::Formula;
use crate::symbol::Symbol;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SentenceKind {
    Fact,
    Rule,
    DisjunctiveRule,
    ExistentialFact,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sentence {
    pub text: String,
    pub parse: Formula,
    pub kind: SentenceKind,
}

impl Sentence {
    pub fn parse(text: &str, lex: &Lexicon) -> Result<Sentence, NlError> {
        let (parse, kind) = Parser::new(text, lex)?.sentence()?;
        Ok(Sentence { text: text.to_string(), parse, kind })
    }
}

pub fn parse_sentence(text: &str, lex: &Lexicon) -> Result<Formula, NlError> {
    Ok(Parser::new(text, lex)?.sentence()?.0)
}

#[derive(Clone, Copy, Debug)]
struct Token<'a> {
    text: &'a str,
    pos: usize,
}

struct Parser<'a> {
    src: &'a str,
    lex: &'a Lexicon,
    tokens: Vec<Token<'a>>,
    at: usize,
}

fn var_x() -> Term {
    Term::Var(Symbol::intern("x"))
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, lex: &'a Lexicon) -> Result<Self, NlError> {
        let mut tokens = Vec::new();
        let mut start: Option<usize> = None;
        for (i, c) in src.char_indices() {
            let boundary = c.is_whitespace() || c == ',' || c == '.';
            if boundary {
                if let Some(s) = start.take() {
                    tokens.push(Token { text: &src[s..i], pos: s });
                }
                if c == ',' || c == '.' {
                    tokens.push(Token { text: &src[i..i + 1], pos: i });
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if let Some(s) = start {
            tokens.push(Token { text: &src[s..], pos: s });
        }
        if tokens.last().map(|t| t.text) != Some(".") {
            return Err(NlError::Parse { position: src.trim_end().len(), message: "sentence must end with '.'".into() });
        }
        Ok(Parser { src, lex, tokens, at: 0 })
    }

    fn peek(&self) -> Option<Token<'a>> {
        self.tokens.get(self.at).copied()
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.src.len(), |t| t.pos)
    }

    fn is(&self, word: &str) -> bool {
        self.peek().is_some_and(|t| t.text.eq_ignore_ascii_case(word))
    }

    fn expect(&mut self, word: &str) -> Result<(), NlError> {
        if self.is(word) {
            self.at += 1;
            Ok(())
        } else {
            let found = self.peek().map_or("end of sentence", |t| t.text);
            Err(NlError::Parse { position: self.here(), message: format!("expected `{word}`, found `{found}`") })
        }
    }

    fn eat(&mut self, word: &str) -> bool {
        if self.is(word) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn unexpected(&self, wanted: &str) -> NlError {
        match self.peek() {
            Some(t) if is_content_word(t.text) => NlError::UnknownWord { word: t.text.to_string(), position: t.pos },
            Some(t) => NlError::Parse { position: t.pos, message: format!("expected {wanted}, found `{}`", t.text) },
            None => NlError::Parse { position: self.src.len(), message: format!("expected {wanted}") },
        }
    }

    fn adjective(&mut self) -> Result<Symbol, NlError> {
        match self.peek().and_then(|t| self.lex.attribute(t.text)) {
            Some(a) => {
                self.at += 1;
                Ok(Symbol::intern(a))
            }
            None => Err(self.unexpected("an attribute")),
        }
    }

    /// `["not"] Adj` as (positive, predicate).
    fn literal(&mut self) -> Result<(bool, Symbol), NlError> {
        let positive = !self.eat("not");
        Ok((positive, self.adjective()?))
    }

    fn name(&mut self) -> Result<Term, NlError> {
        if self.eat("person") {
            return match self.peek() {
                Some(t) if Symbol::intern(&t.text.to_lowercase()).skolem_index().is_some() => {
                    self.at += 1;
                    Ok(Term::Const(Symbol::intern(&t.text.to_lowercase())))
                }
                _ => Err(NlError::Parse { position: self.here(), message: "expected a Skolem name after `person`".into() }),
            };
        }
        match self.peek().and_then(|t| self.lex.entity(t.text)) {
            Some(e) => {
                self.at += 1;
                Ok(Term::Const(Symbol::intern(e)))
            }
            None => Err(self.unexpected("a name")),
        }
    }

    fn finish(&mut self) -> Result<(), NlError> {
        self.expect(".")?;
        if let Some(t) = self.peek() {
            return Err(NlError::Parse { position: t.pos, message: "text after the final '.'".into() });
        }
        Ok(())
    }

    fn sentence(&mut self) -> Result<(Formula, SentenceKind), NlError> {
        let first = self.peek().ok_or_else(|| NlError::Parse { position: 0, message: "empty sentence".into() })?;
        let lower = first.text.to_lowercase();
        match lower.as_str() {
            "everyone" => {
                self.at += 1;
                self.expect("is")?;
                let lits = self.lit_list()?;
                self.finish()?;
                let body = disjunction(&lits, &var_x());
                Ok((Formula::forall("x", body), SentenceKind::DisjunctiveRule))
            }
            "someone" => {
                self.at += 1;
                self.expect("is")?;
                let (pos, adj) = self.literal()?;
                self.finish()?;
                Ok((Formula::exists("x", literal(pos, adj, &var_x())), SentenceKind::ExistentialFact))
            }
            "if" => {
                self.at += 1;
                self.expect("someone")?;
                self.expect("is")?;
                let mut body = vec![self.adjective()?];
                while self.eat("and") {
                    body.push(self.adjective()?);
                }
                self.expect("then")?;
                self.expect("they")?;
                self.expect("are")?;
                let head = self.literal()?;
                self.finish()?;
                Ok((rule(&body, head), SentenceKind::Rule))
            }
            _ if self.lex.attribute(first.text).is_some() => {
                let mut body = vec![self.adjective()?];
                while self.eat(",") {
                    body.push(self.adjective()?);
                }
                self.expect("people")?;
                self.expect("are")?;
                let head = self.literal()?;
                self.finish()?;
                Ok((rule(&body, head), SentenceKind::Rule))
            }
            _ => {
                let subject = self.name()?;
                if self.eat("is") {
                    let lits = self.lit_list()?;
                    self.finish()?;
                    let kind = if lits.len() == 1 { SentenceKind::Fact } else { SentenceKind::DisjunctiveRule };
                    return Ok((disjunction(&lits, &subject), kind));
                }
                if self.lex.relations_enabled() {
                    if let Some(verb) = self.peek().and_then(|t| self.lex.relation(t.text)) {
                        self.at += 1;
                        let object = self.name()?;
                        self.finish()?;
                        let atom = Formula::Atom(Atom { predicate: Symbol::intern(verb), args: vec![subject, object] });
                        return Ok((atom, SentenceKind::Fact));
                    }
                }
                Err(self.unexpected("`is`"))
            }
        }
    }

    fn lit_list(&mut self) -> Result<Vec<(bool, Symbol)>, NlError> {
        let mut lits = vec![self.literal()?];
        while self.eat("or") {
            lits.push(self.literal()?);
        }
        Ok(lits)
    }
}

fn is_content_word(word: &str) -> bool {
    word.chars().all(|c| c.is_alphanumeric() || c == '_') && !FUNCTION_WORDS.contains(&word.to_lowercase().as_str())
}

fn literal(positive: bool, predicate: Symbol, subject: &Term) -> Formula {
    let atom = Formula::Atom(Atom { predicate, args: vec![subject.clone()] });
    if positive {
        atom
    } else {
        Formula::not(atom)
    }
}

fn disjunction(lits: &[(bool, Symbol)], subject: &Term) -> Formula {
    Formula::or_all(lits.iter().map(|(p, a)| literal(*p, *a, subject))).expect("at least one literal")
}

fn rule(body: &[Symbol], head: (bool, Symbol)) -> Formula {
    let x = var_x();
    let body = Formula::and_all(body.iter().map(|a| literal(true, *a, &x))).expect("non-empty body");
    Formula::forall("x", Formula::implies(body, literal(head.0, head.1, &x)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex() -> Lexicon {
        Lexicon::default()
    }

    fn atom(p: &str, t: Term) -> Formula {
        Formula::atom(p, vec![t])
    }

    #[test]
    fn fact() {
        assert_eq!(parse_sentence("Bob is kind.", &lex()).unwrap(), atom("kind", Term::constant("Bob")));
        assert_eq!(parse_sentence("Bob is not kind.", &lex()).unwrap(), Formula::not(atom("kind", Term::constant("Bob"))));
    }

    #[test]
    fn people_rule() {
        let f = parse_sentence("Round, kind people are rough.", &lex()).unwrap();
        let x = Term::var("x");
        let expected = Formula::forall(
            "x",
            Formula::implies(Formula::and_all([atom("round", x.clone()), atom("kind", x.clone())]).unwrap(), atom("rough", x)),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn if_then_rule_matches_people_rule() {
        let a = parse_sentence("If someone is round and kind then they are rough.", &lex()).unwrap();
        let b = parse_sentence("Round, kind people are rough.", &lex()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn universal_clause() {
        let f = parse_sentence("Everyone is not kind or not round or rough.", &lex()).unwrap();
        let x = Term::var("x");
        let expected = Formula::forall(
            "x",
            Formula::or_all([Formula::not(atom("kind", x.clone())), Formula::not(atom("round", x.clone())), atom("rough", x)])
                .unwrap(),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn ground_clause() {
        let f = parse_sentence("Bob is not round or rough.", &lex()).unwrap();
        let bob = Term::constant("Bob");
        let expected = Formula::or_all([Formula::not(atom("round", bob.clone())), atom("rough", bob)]).unwrap();
        assert_eq!(f, expected);
    }

    #[test]
    fn existential_and_skolem_names() {
        assert_eq!(
            parse_sentence("Someone is not big.", &lex()).unwrap(),
            Formula::exists("x", Formula::not(atom("big", Term::var("x"))))
        );
        assert_eq!(parse_sentence("Person sk2 is blue.", &lex()).unwrap(), atom("blue", Term::constant("sk2")));
    }

    #[test]
    fn kinds() {
        let k = |s: &str| Sentence::parse(s, &lex()).unwrap().kind;
        assert_eq!(k("Bob is kind."), SentenceKind::Fact);
        assert_eq!(k("Kind people are big."), SentenceKind::Rule);
        assert_eq!(k("Everyone is big."), SentenceKind::DisjunctiveRule);
        assert_eq!(k("Someone is big."), SentenceKind::ExistentialFact);
    }

    #[test]
    fn relations_only_when_enabled() {
        assert!(parse_sentence("Bob likes Alan.", &lex()).is_err());
        let rel = Lexicon::new(["Bob", "Alan"], ["kind"], ["likes"]).unwrap();
        assert_eq!(
            parse_sentence("Bob likes Alan.", &rel).unwrap(),
            Formula::atom("likes", vec![Term::constant("Bob"), Term::constant("Alan")])
        );
    }

    #[test]
    fn errors() {
        assert_eq!(parse_sentence("Bob is purple.", &lex()), Err(NlError::UnknownWord { word: "purple".into(), position: 7 }));
        assert_eq!(parse_sentence("Dave is kind.", &lex()), Err(NlError::UnknownWord { word: "Dave".into(), position: 0 }));
        assert!(matches!(parse_sentence("Bob is kind", &lex()), Err(NlError::Parse { .. })));
        assert!(matches!(parse_sentence("Bob is or kind.", &lex()), Err(NlError::Parse { position: 7, .. })));
        assert!(matches!(parse_sentence("Kind people is big.", &lex()), Err(NlError::Parse { .. })));
        assert!(matches!(parse_sentence("Bob is kind. Bob", &lex()), Err(NlError::Parse { .. })));
    }

    #[test]
    fn function_words_are_case_insensitive() {
        assert_eq!(parse_sentence("EVERYONE IS ROUND.", &lex()).unwrap(), parse_sentence("Everyone is round.", &lex()).unwrap());
    }
}
