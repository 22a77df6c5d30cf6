//! Hypothesis labeling by refuting both `theory + H` and `theory + not H`,
//! and theory satisfiability by refuting the theory alone.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::engine::{refute, HaltReason, ProofStep, RefutationResult, RefuteConfig, Strategy, TheorySet};
use crate::logic::Clause;
use crate::nl::Sentence;
use crate::normal::{build_theory_sets, theory_clauses, Formula, NormalizeError};

/// Dataset labels. Hypothesis judging uses the first three, satisfiability
/// checking the last two.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    True,
    False,
    Unknown,
    Satisfiable,
    Unsatisfiable,
}

impl Label {
    pub fn as_str(&self) -> &'static str {
        match self {
            Label::True => "True",
            Label::False => "False",
            Label::Unknown => "Unknown",
            Label::Satisfiable => "Satisfiable",
            Label::Unsatisfiable => "Unsatisfiable",
        }
    }

    /// Labels that come without a proof.
    pub fn is_proofless(&self) -> bool {
        matches!(self, Label::Unknown | Label::Satisfiable)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "true" => Ok(Label::True),
            "false" => Ok(Label::False),
            "unknown" => Ok(Label::Unknown),
            "satisfiable" | "sat" => Ok(Label::Satisfiable),
            "unsatisfiable" | "unsat" => Ok(Label::Unsatisfiable),
            _ => Err(format!("unknown label `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub label: Label,
    /// Refutation of `theory + not H` for True, of `theory + H` for False,
    /// empty for Unknown.
    pub proof: Vec<ProofStep>,
    pub steps_t1: usize,
    pub steps_t2: usize,
    pub halt_t1: HaltReason,
    pub halt_t2: HaltReason,
    pub tie_broken: bool,
    pub theory: Vec<Clause>,
    pub hypothesis: Vec<Clause>,
    pub negated_hypothesis: Vec<Clause>,
}

impl Verdict {
    /// Steps of the attached proof.
    pub fn depth(&self) -> usize {
        self.proof.len()
    }
}

/// Decides a label when both sets were refuted: the shorter refutation wins,
/// equal lengths give Unknown.
pub fn tie_break(r1: &RefutationResult, r2: &RefutationResult) -> Label {
    use std::cmp::Ordering::*;
    match r2.steps_used.cmp(&r1.steps_used) {
        Less => Label::True,
        Greater => Label::False,
        Equal => {
            log::warn!("both theory sets refuted in {} steps; reporting Unknown", r1.steps_used);
            Label::Unknown
        }
    }
}

pub fn judge(nlt: &[Sentence], hypothesis: &Sentence, config: &RefuteConfig) -> Result<Verdict, NormalizeError> {
    let theory: Vec<Formula> = nlt.iter().map(|s| s.parse.clone()).collect();
    judge_formulas(&theory, &hypothesis.parse, config)
}

pub fn judge_formulas(theory: &[Formula], hypothesis: &Formula, config: &RefuteConfig) -> Result<Verdict, NormalizeError> {
    let sets = build_theory_sets(theory, hypothesis)?;
    let (mut t1, mut t2) = (sets.t1, sets.t2);
    let r1 = refute(&mut t1, config);
    let r2 = refute(&mut t2, config);
    let (label, tie_broken) = match (r1.refuted, r2.refuted) {
        (false, true) => (Label::True, false),
        (true, false) => (Label::False, false),
        (false, false) => (Label::Unknown, false),
        (true, true) => (tie_break(&r1, &r2), true),
    };
    let proof = match label {
        Label::True => r2.proof,
        Label::False => r1.proof,
        _ => Vec::new(),
    };
    Ok(Verdict {
        label,
        proof,
        steps_t1: r1.steps_used,
        steps_t2: r2.steps_used,
        halt_t1: r1.halt_reason,
        halt_t2: r2.halt_reason,
        tie_broken,
        theory: sets.theory,
        hypothesis: sets.hypothesis,
        negated_hypothesis: sets.negated_hypothesis,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatVerdict {
    /// Satisfiable or Unsatisfiable.
    pub label: Label,
    pub proof: Vec<ProofStep>,
    pub halt_reason: HaltReason,
    pub theory: Vec<Clause>,
}

/// Refutes the theory alone with the unrestricted strategy, whatever
/// strategy `config` names.
pub fn check_sat(nlt: &[Sentence], config: &RefuteConfig) -> Result<SatVerdict, NormalizeError> {
    let theory: Vec<Formula> = nlt.iter().map(|s| s.parse.clone()).collect();
    check_sat_formulas(&theory, config)
}

pub fn check_sat_formulas(theory: &[Formula], config: &RefuteConfig) -> Result<SatVerdict, NormalizeError> {
    let clauses = theory_clauses(theory)?;
    Ok(check_sat_clauses(clauses, config))
}

pub fn check_sat_clauses(clauses: Vec<Clause>, config: &RefuteConfig) -> SatVerdict {
    let mut set = TheorySet::from_clauses(&clauses);
    let config = RefuteConfig { strategy: Strategy::Unrestricted, ..*config };
    let r = refute(&mut set, &config);
    SatVerdict {
        label: if r.refuted { Label::Unsatisfiable } else { Label::Satisfiable },
        proof: r.proof,
        halt_reason: r.halt_reason,
        theory: clauses,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nl::Lexicon;

    fn sentences(texts: &[&str]) -> Vec<Sentence> {
        let lex = Lexicon::default();
        texts.iter().map(|t| Sentence::parse(t, &lex).unwrap()).collect()
    }

    fn one(text: &str) -> Sentence {
        Sentence::parse(text, &Lexicon::default()).unwrap()
    }

    fn result(refuted: bool, steps: usize) -> RefutationResult {
        RefutationResult { refuted, steps_used: steps, proof: Vec::new(), halt_reason: HaltReason::EmptyClause, inferences: 0 }
    }

    #[test]
    fn tie_break_prefers_the_shorter_refutation() {
        assert_eq!(tie_break(&result(true, 5), &result(true, 2)), Label::True);
        assert_eq!(tie_break(&result(true, 2), &result(true, 5)), Label::False);
        assert_eq!(tie_break(&result(true, 3), &result(true, 3)), Label::Unknown);
    }

    #[test]
    fn worked_example_is_true() {
        let nlt = sentences(&["Round, kind people are rough.", "Everyone is not rough.", "Everyone is round."]);
        let v = judge(&nlt, &one("Bob is not kind."), &RefuteConfig::default()).unwrap();
        assert_eq!(v.label, Label::True);
        assert_eq!(v.proof.len(), 3);
        assert_eq!(v.steps_t2, 3);
        assert!(!v.tie_broken);
        assert!(v.proof.last().unwrap().conclusion.is_empty());
    }

    #[test]
    fn fact_identical_hypothesis() {
        let v = judge(&sentences(&["Bob is kind."]), &one("Bob is kind."), &RefuteConfig::default()).unwrap();
        assert_eq!(v.label, Label::True);
        assert_eq!(v.proof.len(), 1);
    }

    #[test]
    fn contradicted_hypothesis_is_false() {
        let v = judge(&sentences(&["Bob is kind."]), &one("Bob is not kind."), &RefuteConfig::default()).unwrap();
        assert_eq!(v.label, Label::False);
        assert_eq!(v.steps_t1, 1);
    }

    #[test]
    fn independent_hypothesis_is_unknown() {
        let v = judge(&sentences(&["Bob is kind."]), &one("Bob is round."), &RefuteConfig::default()).unwrap();
        assert_eq!(v.label, Label::Unknown);
        assert!(v.proof.is_empty());
    }

    #[test]
    fn inconsistent_theory_goes_through_the_tie_break() {
        let nlt = sentences(&["Bob is kind.", "Bob is not kind."]);
        let all_pairs = RefuteConfig::new(Strategy::Unrestricted, 100);
        let v = judge(&nlt, &one("Bob is round."), &all_pairs).unwrap();
        assert!(v.tie_broken);
        assert_eq!(v.label, Label::Unknown);
        // set of support never starts from the theory alone
        let v = judge(&nlt, &one("Bob is round."), &RefuteConfig::default()).unwrap();
        assert!(!v.tie_broken);
        assert_eq!(v.label, Label::Unknown);
    }

    #[test]
    fn satisfiability() {
        let cfg = RefuteConfig::default();
        let v = check_sat(&sentences(&["Everyone is round.", "Bob is not round."]), &cfg).unwrap();
        assert_eq!(v.label, Label::Unsatisfiable);
        assert_eq!(v.proof.len(), 1);
        let v = check_sat(&sentences(&["Bob is kind."]), &cfg).unwrap();
        assert_eq!(v.label, Label::Satisfiable);
        assert!(v.proof.is_empty());
    }

    #[test]
    fn labels_parse_and_print() {
        for l in [Label::True, Label::False, Label::Unknown, Label::Satisfiable, Label::Unsatisfiable] {
            assert_eq!(l.as_str().parse::<Label>().unwrap(), l);
            assert_eq!(serde_json::to_string(&l).unwrap(), format!("\"{l}\""));
        }
    }
}
