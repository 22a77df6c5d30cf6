//! Synthetic labeled theories with gold refutation proofs, training-record
//! extraction, and the model-enumeration oracle used to label them.

mod generate;
mod oracle;
mod training;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{RefuteConfig, Strategy, DEFAULT_BUDGET};
use crate::eval::{PredictedStep, PredictionRecord};
use crate::judge::{Label, SatVerdict, Verdict};
use crate::nl::{Lexicon, NlError};
use crate::normal::NormalizeError;
use crate::proof::{render_proof, RenderedStep};

pub use generate::{generate, generate_nlsat, Generator};
pub use oracle::{entails_clause, oracle_entail, satisfiable, OracleError, ORACLE_ATOM_CAP};
pub use training::{extract_training_samples, RecordKind, TrainingRecord};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DatagenError {
    #[error("invalid generator config: {0}")]
    Config(String),
    #[error("generation_stalled after {attempts} rejected candidates: {constraint}")]
    Stalled { attempts: u64, constraint: String },
    #[error("engine and oracle disagree on {id}: engine {engine}, oracle {oracle}")]
    EngineDisagreement { id: String, engine: Label, oracle: Label },
    #[error("instance {0} has no proof to extract records from")]
    NoProof(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Nl(#[from] NlError),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
}

/// Generator parameters. Every field has a default, so a config file only
/// needs the fields it changes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenConfig {
    pub seed: u64,
    pub n_instances: usize,
    /// Entities drawn from the front of the lexicon.
    pub n_entities: usize,
    /// Attributes drawn from the front of the lexicon.
    pub n_attributes: usize,
    pub n_facts: usize,
    pub n_rules: usize,
    pub max_rule_body: usize,
    pub p_negation: f64,
    /// Adds "Someone is ..." facts and quantified hypotheses.
    pub allow_existential: bool,
    /// Inclusive bounds on the proof length of True and False instances.
    /// Unknown instances have depth 0 and are not filtered by it.
    pub target_depth_range: (usize, usize),
    /// Proportions of True, False and Unknown.
    pub label_mix: [f64; 3],
    pub budget: usize,
    pub strategy: Strategy,
    /// Consecutive rejected candidates tolerated before giving up.
    pub stall_limit: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 1,
            n_instances: 100,
            n_entities: 4,
            n_attributes: 8,
            n_facts: 6,
            n_rules: 6,
            max_rule_body: 2,
            p_negation: 0.2,
            allow_existential: false,
            target_depth_range: (0, 5),
            label_mix: [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
            budget: DEFAULT_BUDGET,
            strategy: Strategy::SosLinear,
            stall_limit: 20_000,
        }
    }
}

impl GenConfig {
    pub fn validate(&self, lex: &Lexicon) -> Result<(), DatagenError> {
        let bad = |m: String| Err(DatagenError::Config(m));
        for (name, v) in [
            ("n_instances", self.n_instances),
            ("n_entities", self.n_entities),
            ("n_attributes", self.n_attributes),
            ("n_facts", self.n_facts),
            ("n_rules", self.n_rules),
            ("max_rule_body", self.max_rule_body),
            ("budget", self.budget),
        ] {
            if v == 0 {
                return bad(format!("{name} must be at least 1"));
            }
        }
        if self.n_entities > lex.entities().len() {
            return bad(format!("n_entities = {} but the lexicon has {} entities", self.n_entities, lex.entities().len()));
        }
        if self.n_attributes > lex.attributes().len() {
            return bad(format!(
                "n_attributes = {} but the lexicon has {} attributes",
                self.n_attributes,
                lex.attributes().len()
            ));
        }
        // ground atoms of one individual form one oracle component
        if self.n_attributes > ORACLE_ATOM_CAP {
            return bad(format!("n_attributes = {} exceeds the oracle cap of {ORACLE_ATOM_CAP}", self.n_attributes));
        }
        if self.max_rule_body >= self.n_attributes {
            return bad("max_rule_body must be smaller than n_attributes".into());
        }
        if !(0.0..=1.0).contains(&self.p_negation) {
            return bad("p_negation must lie in [0, 1]".into());
        }
        if self.label_mix.iter().any(|p| !(0.0..=1.0).contains(p)) || (self.label_mix.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return bad("label_mix must be three proportions summing to 1".into());
        }
        if self.target_depth_range.0 > self.target_depth_range.1 {
            return bad("target_depth_range must be (low, high) with low <= high".into());
        }
        if self.stall_limit == 0 {
            return bad("stall_limit must be at least 1".into());
        }
        Ok(())
    }

    pub fn refute_config(&self) -> RefuteConfig {
        RefuteConfig::new(self.strategy, self.budget)
    }
}

/// Splits `n` into counts proportional to `mix`, by largest remainder.
pub(crate) fn quotas(n: usize, mix: &[f64]) -> Vec<usize> {
    let raw: Vec<f64> = mix.iter().map(|p| p * n as f64).collect();
    let mut counts: Vec<usize> = raw.iter().map(|r| r.floor() as usize).collect();
    let mut order: Vec<usize> = (0..mix.len()).collect();
    order.sort_by(|&a, &b| (raw[b] - raw[b].floor()).total_cmp(&(raw[a] - raw[a].floor())).then(a.cmp(&b)));
    let missing = n - counts.iter().sum::<usize>();
    for &i in order.iter().take(missing) {
        counts[i] += 1;
    }
    counts
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub generator: String,
    pub seed: u64,
    pub index: usize,
    /// Number of candidates drawn for this instance, the accepted one included.
    pub candidates: u64,
    pub strategy: Strategy,
    pub budget: usize,
}

/// One dataset line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub id: String,
    pub theory: Vec<String>,
    pub theory_fol: Vec<String>,
    /// Empty for satisfiability instances.
    pub hypothesis: String,
    pub hypothesis_fol: Vec<String>,
    pub negated_hypothesis_fol: Vec<String>,
    pub label: Label,
    pub depth: usize,
    pub gold_proof: Vec<RenderedStep>,
    pub meta: Meta,
}

fn fol(clauses: &[crate::logic::Clause]) -> Vec<String> {
    clauses.iter().map(|c| c.to_string()).collect()
}

impl Instance {
    pub fn from_verdict(id: String, theory: Vec<String>, hypothesis: String, v: &Verdict, lex: &Lexicon, meta: Meta) -> Self {
        Instance {
            id,
            theory,
            theory_fol: fol(&v.theory),
            hypothesis,
            hypothesis_fol: fol(&v.hypothesis),
            negated_hypothesis_fol: fol(&v.negated_hypothesis),
            label: v.label,
            depth: v.depth(),
            gold_proof: render_proof(&v.proof, lex),
            meta,
        }
    }

    pub fn from_sat_verdict(id: String, theory: Vec<String>, v: &SatVerdict, lex: &Lexicon, meta: Meta) -> Self {
        Instance {
            id,
            theory,
            theory_fol: fol(&v.theory),
            hypothesis: String::new(),
            hypothesis_fol: Vec::new(),
            negated_hypothesis_fol: Vec::new(),
            label: v.label,
            depth: v.proof.len(),
            gold_proof: render_proof(&v.proof, lex),
            meta,
        }
    }

    /// Evaluation record for a prediction on this instance.
    pub fn prediction(&self, label: Label, proof: Vec<PredictedStep>) -> PredictionRecord {
        PredictionRecord {
            instance_id: self.id.clone(),
            predicted_label: label,
            predicted_proof: proof,
            gold_label: self.label,
            theory_fol: self.theory_fol.clone(),
            hypothesis_fol: self.hypothesis_fol.clone(),
            negated_hypothesis_fol: self.negated_hypothesis_fol.clone(),
        }
    }

    /// The gold answer as a prediction.
    pub fn gold_prediction(&self) -> PredictionRecord {
        self.prediction(self.label, predicted_steps(&self.gold_proof))
    }
}

pub fn predicted_steps(proof: &[RenderedStep]) -> Vec<PredictedStep> {
    proof
        .iter()
        .map(|s| PredictedStep { premises_fol: s.premises_fol.clone(), conclusion_fol: s.conclusion_fol.clone() })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotas_follow_the_mix() {
        assert_eq!(quotas(300, &[1.0 / 3.0; 3]), [100, 100, 100]);
        assert_eq!(quotas(10, &[1.0 / 3.0; 3]), [4, 3, 3]);
        assert_eq!(quotas(200, &[0.5, 0.5]), [100, 100]);
        assert_eq!(quotas(7, &[0.0, 1.0, 0.0]), [0, 7, 0]);
    }

    #[test]
    fn config_validation() {
        let lex = Lexicon::default();
        assert!(GenConfig::default().validate(&lex).is_ok());
        let bad = [
            GenConfig { n_entities: 9, ..Default::default() },
            GenConfig { n_facts: 0, ..Default::default() },
            GenConfig { label_mix: [0.5, 0.5, 0.5], ..Default::default() },
            GenConfig { target_depth_range: (4, 2), ..Default::default() },
            GenConfig { max_rule_body: 8, ..Default::default() },
            GenConfig { p_negation: 1.5, ..Default::default() },
        ];
        for c in bad {
            assert!(matches!(c.validate(&lex), Err(DatagenError::Config(_))), "{c:?}");
        }
    }
}
