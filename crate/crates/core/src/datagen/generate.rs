use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::oracle::{oracle_entail, satisfiable};
use super::{quotas, DatagenError, GenConfig, Instance, Meta};
use crate::judge::{check_sat_formulas, judge_formulas, Label};
use crate::nl::{Lexicon, Sentence};
use crate::normal::{build_theory_sets, theory_clauses, Formula};

/// Hypotheses tried against one sampled theory before a new one is drawn.
const HYPOTHESES_PER_THEORY: usize = 4;

/// Longest planted contradiction chain in satisfiability instances.
const MAX_CHAIN: usize = 11;

#[derive(Clone, Copy, Debug)]
enum Mode {
    Hypothesis,
    Satisfiability { fraction_unsat: f64 },
}

/// A finite, deterministic stream of instances. After the first error the
/// stream ends.
pub struct Generator {
    config: GenConfig,
    lex: Lexicon,
    mode: Mode,
    rng: ChaCha8Rng,
    labels: Vec<Label>,
    quotas: Vec<usize>,
    counts: Vec<usize>,
    emitted: usize,
    done: bool,
}

/// Theory-plus-hypothesis instances labeled True, False or Unknown.
pub fn generate(config: &GenConfig, lex: &Lexicon) -> Result<Generator, DatagenError> {
    config.validate(lex)?;
    let labels = vec![Label::True, Label::False, Label::Unknown];
    Ok(Generator::new(config, lex, Mode::Hypothesis, labels, quotas(config.n_instances, &config.label_mix)))
}

/// Rule-only theories labeled Satisfiable or Unsatisfiable, with
/// `fraction_unsat` of them unsatisfiable.
pub fn generate_nlsat(config: &GenConfig, fraction_unsat: f64, lex: &Lexicon) -> Result<Generator, DatagenError> {
    config.validate(lex)?;
    if !(0.0..=1.0).contains(&fraction_unsat) {
        return Err(DatagenError::Config("fraction_unsat must lie in [0, 1]".into()));
    }
    if config.n_attributes < 2 {
        return Err(DatagenError::Config("satisfiability instances need at least 2 attributes".into()));
    }
    let labels = vec![Label::Unsatisfiable, Label::Satisfiable];
    let q = quotas(config.n_instances, &[fraction_unsat, 1.0 - fraction_unsat]);
    Ok(Generator::new(config, lex, Mode::Satisfiability { fraction_unsat }, labels, q))
}

fn neg(rng: &mut ChaCha8Rng, p: f64) -> &'static str {
    if rng.gen_bool(p) {
        "not "
    } else {
        ""
    }
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    c.next().map(|f| f.to_uppercase().chain(c).collect()).unwrap_or_default()
}

/// A universally quantified rule, `body` implying `head`, in one of the
/// three universal template shapes.
fn universal_rule(rng: &mut ChaCha8Rng, body: &[&str], head: &str, head_neg: bool) -> String {
    let not = if head_neg { "not " } else { "" };
    match rng.gen_range(0..3) {
        0 => format!("{} people are {not}{head}.", capitalize(&body.join(", "))),
        1 => format!("If someone is {} then they are {not}{head}.", body.join(" and ")),
        _ => format!("Everyone is {} or {not}{head}.", negated_list(body)),
    }
}

fn negated_list(body: &[&str]) -> String {
    body.iter().map(|b| format!("not {b}")).collect::<Vec<_>>().join(" or ")
}

impl Generator {
    fn new(config: &GenConfig, lex: &Lexicon, mode: Mode, labels: Vec<Label>, quotas: Vec<usize>) -> Self {
        Generator {
            config: config.clone(),
            lex: lex.clone(),
            mode,
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            counts: vec![0; labels.len()],
            labels,
            quotas,
            emitted: 0,
            done: false,
        }
    }

    fn generator_name(&self) -> &'static str {
        match self.mode {
            Mode::Hypothesis if self.config.allow_existential => "rule_taker_e",
            Mode::Hypothesis => "rule_taker",
            Mode::Satisfiability { .. } => "nlsat",
        }
    }

    fn entities(&self) -> Vec<String> {
        self.lex.entities()[..self.config.n_entities].to_vec()
    }

    fn attributes(&self) -> Vec<String> {
        self.lex.attributes()[..self.config.n_attributes].to_vec()
    }

    fn slot(&self, label: Label) -> usize {
        self.labels.iter().position(|l| *l == label).expect("label belongs to this mode")
    }

    fn open(&self, label: Label) -> bool {
        let s = self.slot(label);
        self.counts[s] < self.quotas[s]
    }

    fn depth_ok(&self, label: Label, depth: usize) -> bool {
        let (lo, hi) = self.config.target_depth_range;
        label.is_proofless() || (lo..=hi).contains(&depth)
    }

    fn unmet(&self) -> String {
        let (lo, hi) = self.config.target_depth_range;
        let needs: Vec<String> = self
            .labels
            .iter()
            .zip(self.quotas.iter().zip(&self.counts))
            .filter(|(_, (q, c))| c < q)
            .map(|(l, (q, c))| format!("{} more {l}", q - c))
            .collect();
        format!("still need {} (proof depth {lo}..={hi})", needs.join(", "))
    }

    fn parse_all(&self, texts: &[String]) -> Result<Vec<Formula>, DatagenError> {
        texts.iter().map(|t| Ok(Sentence::parse(t, &self.lex)?.parse)).collect()
    }

    fn meta(&self, candidates: u64) -> Meta {
        Meta {
            generator: self.generator_name().to_string(),
            seed: self.config.seed,
            index: self.emitted,
            candidates,
            strategy: self.config.strategy,
            budget: self.config.budget,
        }
    }

    fn id(&self) -> String {
        format!("{}-{}-{:05}", self.generator_name(), self.config.seed, self.emitted)
    }

    fn theory_text(&mut self) -> Vec<String> {
        let (ents, attrs) = (self.entities(), self.attributes());
        let c = self.config.clone();
        let rng = &mut self.rng;
        let mut out = Vec::with_capacity(c.n_facts + c.n_rules);
        for _ in 0..c.n_facts {
            let a = attrs.choose(rng).expect("attributes");
            let not = neg(rng, c.p_negation);
            if c.allow_existential && rng.gen_bool(0.25) {
                out.push(format!("Someone is {not}{a}."));
            } else {
                let e = ents.choose(rng).expect("entities");
                out.push(format!("{e} is {not}{a}."));
            }
        }
        for _ in 0..c.n_rules {
            let k = rng.gen_range(1..=c.max_rule_body);
            let picked: Vec<&str> = attrs.choose_multiple(rng, k + 1).map(String::as_str).collect();
            let head_neg = rng.gen_bool(c.p_negation);
            if rng.gen_range(0..10) == 0 {
                // the same rule restricted to one entity
                let e = ents.choose(rng).expect("entities");
                let not = if head_neg { "not " } else { "" };
                out.push(format!("{e} is {} or {not}{}.", negated_list(&picked[..k]), picked[k]));
            } else {
                out.push(universal_rule(rng, &picked[..k], picked[k], head_neg));
            }
        }
        out.shuffle(rng);
        out
    }

    fn hypothesis_text(&mut self) -> String {
        let (ents, attrs) = (self.entities(), self.attributes());
        let rng = &mut self.rng;
        let a = attrs.choose(rng).expect("attributes");
        let not = neg(rng, 0.5);
        if self.config.allow_existential && rng.gen_bool(0.3) {
            let q = if rng.gen_bool(0.5) { "Someone" } else { "Everyone" };
            format!("{q} is {not}{a}.")
        } else {
            format!("{} is {not}{a}.", ents.choose(rng).expect("entities"))
        }
    }

    /// Draws one theory and up to a few hypotheses for it. Returns the
    /// accepted instance, if any, and the number of candidates consumed.
    fn hypothesis_candidate(&mut self) -> Result<(Option<Instance>, u64), DatagenError> {
        let theory = self.theory_text();
        let formulas = self.parse_all(&theory)?;
        if !satisfiable(&theory_clauses(&formulas)?)? {
            return Ok((None, 1));
        }
        let mut tried = 0;
        for _ in 0..HYPOTHESES_PER_THEORY {
            tried += 1;
            let hyp_text = self.hypothesis_text();
            let hyp = Sentence::parse(&hyp_text, &self.lex)?.parse;
            let sets = build_theory_sets(&formulas, &hyp)?;
            let label = oracle_entail(&sets.theory, &sets.hypothesis, &sets.negated_hypothesis)?;
            if !self.open(label) {
                continue;
            }
            let verdict = judge_formulas(&formulas, &hyp, &self.config.refute_config())?;
            if verdict.label != label {
                return Err(DatagenError::EngineDisagreement { id: self.id(), engine: verdict.label, oracle: label });
            }
            if !self.depth_ok(label, verdict.depth()) {
                continue;
            }
            let meta = self.meta(0);
            let inst = Instance::from_verdict(self.id(), theory, hyp_text, &verdict, &self.lex, meta);
            return Ok((Some(inst), tried));
        }
        Ok((None, tried))
    }

    fn satisfiability_candidate(&mut self, fraction_unsat: f64) -> Result<(Option<Instance>, u64), DatagenError> {
        let attrs = self.attributes();
        let c = self.config.clone();
        let want_unsat = self.open(Label::Unsatisfiable)
            && (!self.open(Label::Satisfiable) || {
                let p = if fraction_unsat > 0.0 { 0.5 } else { 0.0 };
                self.rng.gen_bool(p)
            });
        let rng = &mut self.rng;
        let k = rng.gen_range(c.n_attributes.min(5)..=c.n_attributes);
        let mut pool: Vec<&str> = attrs.choose_multiple(rng, k).map(String::as_str).collect();
        pool.shuffle(rng);

        // planted chain: everyone is c0, c0 -> c1 -> ... -> cL, then a closing clash
        let chain_len = rng.gen_range(1..=(k - 1).min(MAX_CHAIN));
        let chain = &pool[..=chain_len];
        let mut planted = vec![format!("Everyone is {}.", chain[0])];
        for i in 0..chain_len {
            let mut body = vec![chain[i]];
            if i > 0 && c.max_rule_body > 1 && rng.gen_bool(0.3) {
                body.push(chain[rng.gen_range(0..i)]);
            }
            planted.push(universal_rule(rng, &body, chain[i + 1], false));
        }
        planted.push(format!("Everyone is not {}.", chain[chain_len]));
        if !want_unsat {
            let drop = rng.gen_range(0..planted.len());
            planted.remove(drop);
        }
        let mut theory = planted;
        for _ in 0..c.n_rules {
            let b = rng.gen_range(1..=c.max_rule_body.min(k - 1));
            let picked: Vec<&str> = pool.choose_multiple(rng, b + 1).copied().collect();
            let head_neg = rng.gen_bool(c.p_negation);
            let r = universal_rule(rng, &picked[..b], picked[b], head_neg);
            theory.push(r);
        }
        theory.shuffle(rng);

        let formulas = self.parse_all(&theory)?;
        let clauses = theory_clauses(&formulas)?;
        let label = if satisfiable(&clauses)? { Label::Satisfiable } else { Label::Unsatisfiable };
        if !self.open(label) {
            return Ok((None, 1));
        }
        let verdict = check_sat_formulas(&formulas, &c.refute_config())?;
        if verdict.label != label {
            return Err(DatagenError::EngineDisagreement { id: self.id(), engine: verdict.label, oracle: label });
        }
        if !self.depth_ok(label, verdict.proof.len()) {
            return Ok((None, 1));
        }
        let inst = Instance::from_sat_verdict(self.id(), theory, &verdict, &self.lex, self.meta(0));
        Ok((Some(inst), 1))
    }
}

impl Iterator for Generator {
    type Item = Result<Instance, DatagenError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done || self.emitted >= self.config.n_instances {
            return None;
        }
        let mut candidates = 0u64;
        loop {
            let step = match self.mode {
                Mode::Hypothesis => self.hypothesis_candidate(),
                Mode::Satisfiability { fraction_unsat } => self.satisfiability_candidate(fraction_unsat),
            };
            match step {
                Ok((Some(mut inst), used)) => {
                    candidates += used;
                    inst.meta.candidates = candidates;
                    let s = self.slot(inst.label);
                    self.counts[s] += 1;
                    self.emitted += 1;
                    return Some(Ok(inst));
                }
                Ok((None, used)) => {
                    candidates += used;
                    if candidates >= self.config.stall_limit {
                        self.done = true;
                        return Some(Err(DatagenError::Stalled { attempts: candidates, constraint: self.unmet() }));
                    }
                }
                Err(e) => {
                    self.done = true;
                    return Some(Err(e));
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_is_balanced_and_deterministic() {
        let config = GenConfig { n_instances: 30, ..Default::default() };
        let lex = Lexicon::default();
        let a: Vec<Instance> = generate(&config, &lex).unwrap().map(Result::unwrap).collect();
        let b: Vec<Instance> = generate(&config, &lex).unwrap().map(Result::unwrap).collect();
        assert_eq!(a, b);
        for l in [Label::True, Label::False, Label::Unknown] {
            assert_eq!(a.iter().filter(|i| i.label == l).count(), 10);
        }
        assert!(a.iter().all(|i| i.depth <= 5));
    }

    #[test]
    fn impossible_constraints_stall() {
        let config = GenConfig {
            n_instances: 3,
            target_depth_range: (40, 50),
            label_mix: [1.0, 0.0, 0.0],
            stall_limit: 200,
            ..Default::default()
        };
        let mut g = generate(&config, &Lexicon::default()).unwrap();
        assert!(matches!(g.next(), Some(Err(DatagenError::Stalled { .. }))));
        assert!(g.next().is_none());
    }
}
