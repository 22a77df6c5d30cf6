//! Proof checking, EA/FA scoring and the validity contrastive loss.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{factor, resolve};
use crate::judge::Label;
use crate::logic::{parse_clause, Clause};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("bad_step_format: {0}")]
    BadStepFormat(String),
    #[error("degenerate_contrast: positive and negative index sets must be non-empty")]
    DegenerateContrast,
    #[error("index {0} is out of range")]
    IndexOutOfRange(usize),
    #[error("index {0} is both positive and negative")]
    Overlap(usize),
    #[error("no records to score")]
    NoRecords,
}

/// One proof step as predicted: two premises and a conclusion, all in the
/// clause text format. Extra fields (ids, English renderings) are ignored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictedStep {
    pub premises_fol: [String; 2],
    pub conclusion_fol: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub instance_id: String,
    pub predicted_label: Label,
    #[serde(default)]
    pub predicted_proof: Vec<PredictedStep>,
    pub gold_label: Label,
    /// Input clauses of the instance; a step premise must be one of the
    /// inputs of the refuted set or an earlier conclusion.
    #[serde(default)]
    pub theory_fol: Vec<String>,
    #[serde(default)]
    pub hypothesis_fol: Vec<String>,
    #[serde(default)]
    pub negated_hypothesis_fol: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scores {
    pub entailment_accuracy: f64,
    pub full_accuracy: f64,
    pub n: usize,
}

fn parse(text: &str) -> Result<Clause, EvalError> {
    parse_clause(text).map_err(|e| EvalError::BadStepFormat(format!("`{text}`: {e}")))
}

/// Whether `conclusion` is, up to variable renaming, a resolvent of the two
/// premises or a factor (of a factor ...) of one.
pub fn check_step_clauses(p1: &Clause, p2: &Clause, conclusion: &Clause) -> bool {
    let target = conclusion.canonical();
    let mut seen: HashSet<Clause> = HashSet::new();
    let mut frontier = resolve(p1, p2);
    while let Some(c) = frontier.pop() {
        if c == target {
            return true;
        }
        // factoring only shortens a clause, so nothing shorter than the target helps
        if c.len() > target.len() && seen.insert(c.clone()) {
            frontier.extend(factor(&c));
        }
    }
    false
}

pub fn check_step(premises: [&str; 2], conclusion: &str) -> Result<bool, EvalError> {
    Ok(check_step_clauses(&parse(premises[0])?, &parse(premises[1])?, &parse(conclusion)?))
}

fn input_set(rec: &PredictionRecord) -> Result<HashSet<Clause>, EvalError> {
    let extra = match rec.predicted_label {
        Label::True => &rec.negated_hypothesis_fol,
        Label::False => &rec.hypothesis_fol,
        _ => &Vec::new(),
    };
    rec.theory_fol.iter().chain(extra).map(|s| parse(s).map(|c| c.canonical())).collect()
}

/// Proof validity. A proofless label is right exactly when the gold label
/// agrees; otherwise every step must be a valid resolution step over inputs
/// or earlier conclusions and the last conclusion must be the empty clause.
pub fn check_proof(rec: &PredictionRecord) -> bool {
    if rec.predicted_label.is_proofless() {
        return rec.predicted_label == rec.gold_label && rec.predicted_proof.is_empty();
    }
    let Ok(mut available) = input_set(rec) else { return false };
    let Some(last) = rec.predicted_proof.last() else { return false };
    if !matches!(parse(&last.conclusion_fol), Ok(c) if c.is_empty()) {
        return false;
    }
    for step in &rec.predicted_proof {
        let parsed = (parse(&step.premises_fol[0]), parse(&step.premises_fol[1]), parse(&step.conclusion_fol));
        let (Ok(a), Ok(b), Ok(c)) = parsed else { return false };
        if !available.contains(&a.canonical()) || !available.contains(&b.canonical()) {
            return false;
        }
        if !check_step_clauses(&a, &b, &c) {
            return false;
        }
        available.insert(c.canonical());
    }
    true
}

pub fn score(records: &[PredictionRecord]) -> Result<Scores, EvalError> {
    if records.is_empty() {
        return Err(EvalError::NoRecords);
    }
    let correct = records.iter().filter(|r| r.predicted_label == r.gold_label);
    let (mut ea, mut fa) = (0usize, 0usize);
    for r in correct {
        ea += 1;
        if check_proof(r) {
            fa += 1;
        }
    }
    let n = records.len();
    Ok(Scores { entailment_accuracy: ea as f64 / n as f64, full_accuracy: fa as f64 / n as f64, n })
}

/// How a positive similarity is bounded at 0.8 before entering the loss.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClampMode {
    /// `max(sim, 0.8)`.
    #[default]
    Floor,
    /// `min(sim, 0.8)`.
    Cap,
}

pub const VCE_CLAMP: f64 = 0.8;

/// `-(1/k) * sum_{j in P} log(exp(clamp(sim_j)) / sum_{i in R} exp(sim_i))`
/// with `clamp = max(., 0.8)`.
pub fn vce_loss(sims: &[f64], positive: &[usize], negative: &[usize]) -> Result<f64, EvalError> {
    vce_loss_with(sims, positive, negative, ClampMode::Floor)
}

pub fn vce_loss_with(sims: &[f64], positive: &[usize], negative: &[usize], mode: ClampMode) -> Result<f64, EvalError> {
    if positive.is_empty() || negative.is_empty() {
        return Err(EvalError::DegenerateContrast);
    }
    if let Some(&i) = positive.iter().chain(negative).find(|&&i| i >= sims.len()) {
        return Err(EvalError::IndexOutOfRange(i));
    }
    if let Some(&i) = positive.iter().find(|i| negative.contains(i)) {
        return Err(EvalError::Overlap(i));
    }
    // log-sum-exp over the negatives, shifted for stability
    let m = negative.iter().map(|&i| sims[i]).fold(f64::NEG_INFINITY, f64::max);
    let log_denominator = m + negative.iter().map(|&i| (sims[i] - m).exp()).sum::<f64>().ln();
    let total: f64 = positive
        .iter()
        .map(|&j| {
            let s = match mode {
                ClampMode::Floor => sims[j].max(VCE_CLAMP),
                ClampMode::Cap => sims[j].min(VCE_CLAMP),
            };
            s - log_denominator
        })
        .sum();
    Ok(-total / positive.len() as f64)
}
