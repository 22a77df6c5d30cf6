use std::collections::HashSet;
use std::path::Path;

use super::NlError;

pub(crate) const FUNCTION_WORDS: &[&str] =
    &["is", "are", "not", "or", "and", "if", "then", "they", "someone", "everyone", "people", "person"];

/// Vocabulary of one theory: proper names, unary attributes and (optionally)
/// binary relation verbs. Lookups are case-insensitive and return the
/// lexicon's own spelling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lexicon {
    entities: Vec<String>,
    attributes: Vec<String>,
    relations: Vec<String>,
}

impl Default for Lexicon {
    fn default() -> Self {
        Lexicon::new(
            ["Bob", "Alan", "Erin", "Gary"],
            ["kind", "round", "rough", "tall", "happy", "big", "blue", "green"],
            Vec::<String>::new(),
        )
        .expect("default lexicon is valid")
    }
}

fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars.flat_map(|c| c.to_lowercase())).collect(),
        None => String::new(),
    }
}

impl Lexicon {
    pub fn new<E, A, R>(
        entities: impl IntoIterator<Item = E>,
        attributes: impl IntoIterator<Item = A>,
        relations: impl IntoIterator<Item = R>,
    ) -> Result<Lexicon, NlError>
    where
        E: AsRef<str>,
        A: AsRef<str>,
        R: AsRef<str>,
    {
        let lex = Lexicon {
            entities: entities.into_iter().map(|e| capitalize(e.as_ref())).collect(),
            attributes: attributes.into_iter().map(|a| a.as_ref().to_lowercase()).collect(),
            relations: relations.into_iter().map(|r| r.as_ref().to_lowercase()).collect(),
        };
        lex.validate()?;
        Ok(lex)
    }

    fn validate(&self) -> Result<(), NlError> {
        let mut seen = HashSet::new();
        for w in self.entities.iter().chain(&self.attributes).chain(&self.relations) {
            if w.is_empty() || !w.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(NlError::Lexicon(format!("`{w}` is not a single word")));
            }
            let lower = w.to_lowercase();
            if FUNCTION_WORDS.contains(&lower.as_str()) {
                return Err(NlError::Lexicon(format!("`{w}` is a reserved function word")));
            }
            if lower.starts_with("sk") && lower[2..].chars().all(|c| c.is_ascii_digit()) && lower.len() > 2 {
                return Err(NlError::Lexicon(format!("`{w}` collides with the Skolem namespace")));
            }
            if !seen.insert(lower) {
                return Err(NlError::Lexicon(format!("`{w}` appears more than once")));
            }
        }
        Ok(())
    }

    /// Parses the line-oriented format:
    ///
    /// ```text
    /// [entities]
    /// Bob
    /// [attributes]
    /// kind
    /// [relations]
    /// likes
    /// ```
    ///
    /// Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Lexicon, NlError> {
        let (mut ents, mut attrs, mut rels) = (Vec::new(), Vec::new(), Vec::new());
        let mut section: Option<&str> = None;
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                match name.trim() {
                    s @ ("entities" | "attributes" | "relations") => section = Some(s),
                    other => return Err(NlError::Lexicon(format!("line {}: unknown section [{other}]", n + 1))),
                }
                continue;
            }
            match section {
                Some("entities") => ents.push(line.to_string()),
                Some("attributes") => attrs.push(line.to_string()),
                Some("relations") => rels.push(line.to_string()),
                _ => return Err(NlError::Lexicon(format!("line {}: word outside a section", n + 1))),
            }
        }
        Lexicon::new(ents, attrs, rels)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Lexicon, NlError> {
        let text =
            std::fs::read_to_string(path.as_ref()).map_err(|e| NlError::Lexicon(format!("{}: {e}", path.as_ref().display())))?;
        Lexicon::parse(&text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("[entities]\n");
        for e in &self.entities {
            out.push_str(e);
            out.push('\n');
        }
        out.push_str("[attributes]\n");
        for a in &self.attributes {
            out.push_str(a);
            out.push('\n');
        }
        if !self.relations.is_empty() {
            out.push_str("[relations]\n");
            for r in &self.relations {
                out.push_str(r);
                out.push('\n');
            }
        }
        out
    }

    pub fn entities(&self) -> &[String] {
        &self.entities
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn relations(&self) -> &[String] {
        &self.relations
    }

    pub fn relations_enabled(&self) -> bool {
        !self.relations.is_empty()
    }

    pub fn entity(&self, word: &str) -> Option<&str> {
        self.entities.iter().find(|e| e.eq_ignore_ascii_case(word)).map(String::as_str)
    }

    pub fn attribute(&self, word: &str) -> Option<&str> {
        self.attributes.iter().find(|a| a.eq_ignore_ascii_case(word)).map(String::as_str)
    }

    pub fn relation(&self, word: &str) -> Option<&str> {
        self.relations.iter().find(|r| r.eq_ignore_ascii_case(word)).map(String::as_str)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_vocabulary() {
        let lex = Lexicon::default();
        assert_eq!(lex.entities(), ["Bob", "Alan", "Erin", "Gary"]);
        assert_eq!(lex.attributes().len(), 8);
        assert!(!lex.relations_enabled());
        assert_eq!(lex.attribute("Round"), Some("round"));
        assert_eq!(lex.entity("bob"), Some("Bob"));
    }

    #[test]
    fn file_format_round_trips() {
        let text = "# vocabulary\n[entities]\nBob\nDave\n\n[attributes]\nkind\nred\n[relations]\nlikes\n";
        let lex = Lexicon::parse(text).unwrap();
        assert_eq!(lex.entities(), ["Bob", "Dave"]);
        assert_eq!(lex.relations(), ["likes"]);
        assert_eq!(Lexicon::parse(&lex.to_text()).unwrap(), lex);
    }

    #[test]
    fn rejects_bad_lexicons() {
        assert!(Lexicon::parse("[entities]\nBob\n[attributes]\nbob\n").is_err());
        assert!(Lexicon::parse("Bob\n").is_err());
        assert!(Lexicon::parse("[people]\nBob\n").is_err());
        assert!(Lexicon::parse("[attributes]\nnot\n").is_err());
        assert!(Lexicon::parse("[entities]\nSk1\n").is_err());
    }
}
