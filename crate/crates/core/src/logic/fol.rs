//! Textual clause syntax.
//!
//! Literals are joined by `|`, negation is a leading `-`, terms are written in
//! prefix form and the empty clause is `[]`. A bare identifier is a variable
//! when it starts with a lower-case letter and is not a Skolem name
//! (`sk1`, `sk2`, ...); everything else is a constant.

use std::str::FromStr;

use thiserror::Error;

use super::clause::Clause;
use super::term::{Atom, Literal, Term};
use crate::symbol::Symbol;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad clause syntax at byte {position}: {message}")]
pub struct FolError {
    pub position: usize,
    pub message: String,
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, FolError> {
        Err(FolError { position: self.pos, message: message.into() })
    }

    fn ident(&mut self) -> Result<&'a str, FolError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest.char_indices().find(|(_, c)| !(c.is_alphanumeric() || *c == '_')).map_or(rest.len(), |(i, _)| i);
        if len == 0 {
            return self.err("expected identifier");
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    fn args(&mut self) -> Result<Vec<Term>, FolError> {
        let mut args = Vec::new();
        if self.eat('(') {
            loop {
                args.push(self.term()?);
                if self.eat(',') {
                    continue;
                }
                if self.eat(')') {
                    break;
                }
                return self.err("expected ',' or ')'");
            }
        }
        Ok(args)
    }

    fn term(&mut self) -> Result<Term, FolError> {
        let name = self.ident()?;
        let sym = Symbol::intern(name);
        let args = self.args()?;
        if !args.is_empty() {
            return Ok(Term::Fn(sym, args));
        }
        let first = name.chars().next().expect("non-empty identifier");
        if first.is_lowercase() && sym.skolem_index().is_none() {
            Ok(Term::Var(sym))
        } else {
            Ok(Term::Const(sym))
        }
    }

    fn literal(&mut self) -> Result<Literal, FolError> {
        let positive = !self.eat('-');
        let name = self.ident()?;
        let args = self.args()?;
        Ok(Literal { positive, atom: Atom { predicate: Symbol::intern(name), args } })
    }
}

pub fn parse_clause(text: &str) -> Result<Clause, FolError> {
    let mut cur = Cursor { src: text, pos: 0 };
    if cur.eat('[') {
        if !cur.eat(']') {
            return cur.err("expected ']'");
        }
        cur.skip_ws();
        if cur.pos != text.len() {
            return cur.err("trailing input after []");
        }
        return Ok(Clause::empty());
    }
    let mut lits = vec![cur.literal()?];
    while cur.eat('|') {
        lits.push(cur.literal()?);
    }
    cur.skip_ws();
    if cur.pos != text.len() {
        return cur.err("trailing input");
    }
    Ok(Clause::new(lits))
}

impl FromStr for Clause {
    type Err = FolError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_clause(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints_the_same_text() {
        for text in ["-kind(v1) | -round(v1) | rough(v1)", "[]", "kind(Bob)", "likes(Bob,sk1)", "p(f(v1,Bob))"] {
            let c: Clause = text.parse().unwrap();
            assert_eq!(c.to_string(), text);
        }
    }

    #[test]
    fn classifies_identifiers() {
        let c: Clause = "p(x, Bob, sk2)".parse().unwrap();
        let args = &c.literals()[0].atom.args;
        assert!(matches!(args[0], Term::Var(_)));
        assert!(matches!(args[1], Term::Const(_)));
        assert!(matches!(args[2], Term::Const(_)));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_clause("kind(Bob").is_err());
        assert!(parse_clause("kind(Bob) |").is_err());
        assert!(parse_clause("").is_err());
        assert!(parse_clause("[] x").is_err());
        assert!(parse_clause("Bob is kind.").is_err());
    }
}
