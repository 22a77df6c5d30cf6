//! Natural-language resolution refutation: template English to clause form,
//! resolution search over two theory sets, three-valued judging, proof
//! checking and synthetic dataset generation.

pub mod datagen;
pub mod engine;
pub mod eval;
pub mod judge;
pub mod logic;
pub mod nl;
pub mod normal;
pub mod proof;
pub mod symbol;

pub use judge::Label;
pub use symbol::Symbol;
