//! Template English front end: a lexicon, a deterministic parser from
//! sentences to formulas, and a realizer from clauses back to sentences.

mod lexicon;
mod parse;
mod realize;

use thiserror::Error;

use crate::normal::NormalizeError;

pub use lexicon::Lexicon;
pub use parse::{parse_sentence, Sentence, SentenceKind};
pub use realize::{negate_sentence, realize_clause, realize_formula};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NlError {
    #[error("parse_error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("unknown_word `{word}` at byte {position}")]
    UnknownWord { word: String, position: usize },
    #[error("unrealizable: {0}")]
    Unrealizable(String),
    #[error("lexicon: {0}")]
    Lexicon(String),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
}
