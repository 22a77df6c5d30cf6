//! Binary resolution with factoring, the valid-pair predicate, and
//! strategy-guided refutation search with proof recording.

mod refute;
mod resolve;
mod theory;

pub use refute::{refute, HaltReason, ProofStep, RefutationResult, RefuteConfig, Strategy, DEFAULT_BUDGET, DEFAULT_MAX_WORK};
pub use resolve::{can_resolve, factor, resolve, resolvents, step_conclusions, Resolvent};
pub use theory::{ClauseId, Entry, Insert, Origin, TheorySet};
