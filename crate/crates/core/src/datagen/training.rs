use serde::{Deserialize, Serialize};

use super::{DatagenError, Instance};
use crate::judge::Label;
use crate::logic::parse_clause;
use crate::nl::Lexicon;
use crate::proof::clause_nl;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordKind {
    /// Select both premises from the theory set.
    PreS,
    /// Select the partner of a given premise.
    PostS,
    /// Compose the conclusion of two premises.
    Kc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainingRecord {
    pub kind: RecordKind,
    pub context: Vec<String>,
    pub input: Vec<String>,
    pub target: Vec<String>,
}

/// Four records per gold proof step. The context of step `k` is the input
/// set of the refuted theory set plus the conclusions of steps `1..k`, all
/// rendered in English where a template fits.
pub fn extract_training_samples(inst: &Instance, lex: &Lexicon) -> Result<Vec<TrainingRecord>, DatagenError> {
    if inst.label.is_proofless() || inst.gold_proof.is_empty() {
        return Err(DatagenError::NoProof(inst.id.clone()));
    }
    let side = match inst.label {
        Label::True => &inst.negated_hypothesis_fol,
        Label::False => &inst.hypothesis_fol,
        _ => &Vec::new(),
    };
    let mut context: Vec<String> = Vec::new();
    for text in inst.theory_fol.iter().chain(side) {
        let c = parse_clause(text).map_err(|e| DatagenError::Config(format!("{}: {e}", inst.id)))?;
        context.push(clause_nl(&c, lex));
    }
    let mut out = Vec::with_capacity(4 * inst.gold_proof.len());
    for step in &inst.gold_proof {
        let [a, b] = step.premises_nl.clone();
        let c = step.conclusion_nl.clone();
        let rec =
            |kind, context: Vec<String>, input: Vec<String>, target: Vec<String>| TrainingRecord { kind, context, input, target };
        out.push(rec(RecordKind::PreS, context.clone(), vec![], vec![a.clone(), b.clone()]));
        out.push(rec(RecordKind::PostS, context.clone(), vec![a.clone()], vec![b.clone()]));
        out.push(rec(RecordKind::PostS, context.clone(), vec![b.clone()], vec![a.clone()]));
        out.push(rec(RecordKind::Kc, vec![], vec![a, b], vec![c.clone()]));
        context.push(c);
    }
    Ok(out)
}
