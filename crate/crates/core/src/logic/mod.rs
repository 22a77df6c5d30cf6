//! Terms, literals, clauses, substitutions and unification.
//!
//! All values here are immutable once built and can be shared freely between
//! worker threads.

mod clause;
mod fol;
mod subst;
mod term;

pub use clause::Clause;
pub use fol::{parse_clause, FolError};
pub use subst::{unify, Substitution};
pub use term::{Atom, Literal, Term};
