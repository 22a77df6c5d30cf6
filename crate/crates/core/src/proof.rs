//! Serialized proofs: one record per resolution step, in FOL and English.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::engine::ProofStep;
use crate::logic::Clause;
use crate::nl::{realize_clause, Lexicon};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderedStep {
    pub premise_ids: [u64; 2],
    pub premises_fol: [String; 2],
    pub premises_nl: [String; 2],
    pub conclusion_id: u64,
    pub conclusion_fol: String,
    pub conclusion_nl: String,
}

/// English rendering of `c`, or its FOL text when no template fits.
pub fn clause_nl(c: &Clause, lex: &Lexicon) -> String {
    realize_clause(c, lex).unwrap_or_else(|_| c.to_string())
}

impl RenderedStep {
    pub fn new(step: &ProofStep, lex: &Lexicon) -> Self {
        let (a, b) = &step.premises;
        RenderedStep {
            premise_ids: [step.premise_ids.0 .0, step.premise_ids.1 .0],
            premises_fol: [a.to_string(), b.to_string()],
            premises_nl: [clause_nl(a, lex), clause_nl(b, lex)],
            conclusion_id: step.conclusion_id.0,
            conclusion_fol: step.conclusion.to_string(),
            conclusion_nl: clause_nl(&step.conclusion, lex),
        }
    }

    /// `STEP k: [a] fol_a | [b] fol_b => [c] fol_c ;; NL: nl_a + nl_b => nl_c`
    pub fn line(&self, k: usize) -> String {
        format!(
            "STEP {k}: [{}] {} | [{}] {} => [{}] {} ;; NL: {} + {} => {}",
            self.premise_ids[0],
            self.premises_fol[0],
            self.premise_ids[1],
            self.premises_fol[1],
            self.conclusion_id,
            self.conclusion_fol,
            self.premises_nl[0],
            self.premises_nl[1],
            self.conclusion_nl,
        )
    }
}

pub fn render_proof(proof: &[ProofStep], lex: &Lexicon) -> Vec<RenderedStep> {
    proof.iter().map(|s| RenderedStep::new(s, lex)).collect()
}

/// One `STEP` line per step, numbered from 1, each ending in a newline.
pub fn format_proof(steps: &[RenderedStep]) -> String {
    let mut out = String::new();
    for (k, s) in steps.iter().enumerate() {
        let _ = writeln!(out, "{}", s.line(k + 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{refute, Origin, RefuteConfig, TheorySet};

    #[test]
    fn worked_example_lines() {
        let theory: Vec<Clause> =
            ["-kind(x) | -round(x) | rough(x)", "-rough(x)", "round(x)"].iter().map(|s| s.parse().unwrap()).collect();
        let mut t = TheorySet::from_parts(&theory, &["kind(Bob)".parse().unwrap()], Origin::NegatedHypothesis);
        let r = refute(&mut t, &RefuteConfig::default());
        let text = format_proof(&render_proof(&r.proof, &Lexicon::default()));
        assert_eq!(
            text,
            "STEP 1: [4] kind(Bob) | [1] -kind(v1) | -round(v1) | rough(v1) => [5] -round(Bob) | rough(Bob) \
             ;; NL: Bob is kind. + Everyone is not kind or not round or rough. => Bob is not round or rough.\n\
             STEP 2: [5] -round(Bob) | rough(Bob) | [2] -rough(v1) => [6] -round(Bob) \
             ;; NL: Bob is not round or rough. + Everyone is not rough. => Bob is not round.\n\
             STEP 3: [6] -round(Bob) | [3] round(v1) => [7] [] ;; NL: Bob is not round. + Everyone is round. => \n"
        );
    }

    #[test]
    fn unrealizable_clauses_fall_back_to_fol() {
        let c: Clause = "kind(Bob) | kind(Alan)".parse().unwrap();
        assert_eq!(clause_nl(&c, &Lexicon::default()), "kind(Bob) | kind(Alan)");
    }
}
