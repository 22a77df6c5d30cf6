//! Refutation search.
//!
//! Two strategies share one result type:
//!
//! * [`Strategy::SosLinear`]: set of support combined with linear resolution.
//!   The first center is a hypothesis-derived clause, every later center is
//!   the previous resolvent, and side clauses come from the input set or the
//!   chain's own ancestors. The search is depth-first with an explicit trail,
//!   run under iterative deepening up to the budget, so the first proof found
//!   is a shortest linear one. Failed centers whose subtree never touched the
//!   surrounding trail are cached and not expanded twice. When every input
//!   clause is Horn, ancestors are never needed and the linear derivations
//!   form a graph over center clauses, searched breadth first instead.
//!   Otherwise the unrestricted closure is computed first, and a set it
//!   saturates without the empty clause is reported as such.
//! * [`Strategy::Unrestricted`]: a FIFO given-clause loop over all pairs.
//!
//! The budget bounds derivation length: no linear chain and no derived clause
//! may be more than `budget` resolution steps away from the input.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::resolve::{can_resolve, step_conclusions};
use super::theory::{ClauseId, Insert, Origin, TheorySet};
use crate::logic::{Clause, Substitution};
use crate::symbol::Symbol;

pub const DEFAULT_BUDGET: usize = 100;

/// Default cap on the number of conclusions a single search may generate.
pub const DEFAULT_MAX_WORK: usize = 2_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    #[default]
    #[serde(alias = "sos_linear")]
    SosLinear,
    Unrestricted,
}

impl Strategy {
    pub fn as_str(&self) -> &'static str {
        match self {
            Strategy::SosLinear => "sos-linear",
            Strategy::Unrestricted => "unrestricted",
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sos-linear" | "sos_linear" => Ok(Strategy::SosLinear),
            "unrestricted" => Ok(Strategy::Unrestricted),
            other => Err(format!("unknown strategy `{other}` (expected sos-linear or unrestricted)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RefuteConfig {
    pub strategy: Strategy,
    pub budget: usize,
    pub max_work: usize,
    /// Drop new clauses subsumed by a retained one (unrestricted strategy).
    pub subsumption: bool,
}

impl Default for RefuteConfig {
    fn default() -> Self {
        RefuteConfig { strategy: Strategy::SosLinear, budget: DEFAULT_BUDGET, max_work: DEFAULT_MAX_WORK, subsumption: true }
    }
}

impl RefuteConfig {
    pub fn new(strategy: Strategy, budget: usize) -> Self {
        RefuteConfig { strategy, budget, ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HaltReason {
    EmptyClause,
    Saturated,
    BudgetExhausted,
    NoValidPair,
}

impl HaltReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            HaltReason::EmptyClause => "empty_clause",
            HaltReason::Saturated => "saturated",
            HaltReason::BudgetExhausted => "budget_exhausted",
            HaltReason::NoValidPair => "no_valid_pair",
        }
    }
}

/// One resolution step. `premises.0` is the center (or given clause).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofStep {
    pub premise_ids: (ClauseId, ClauseId),
    pub premises: (Clause, Clause),
    pub conclusion_id: ClauseId,
    pub conclusion: Clause,
    pub mgu: Substitution,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefutationResult {
    pub refuted: bool,
    /// Length of the proof; zero when not refuted.
    pub steps_used: usize,
    pub proof: Vec<ProofStep>,
    pub halt_reason: HaltReason,
    /// Conclusions generated during the search, including abandoned branches.
    pub inferences: usize,
}

impl RefutationResult {
    fn failed(halt_reason: HaltReason, inferences: usize) -> Self {
        RefutationResult { refuted: false, steps_used: 0, proof: Vec::new(), halt_reason, inferences }
    }

    fn found(proof: Vec<ProofStep>, inferences: usize) -> Self {
        RefutationResult { refuted: true, steps_used: proof.len(), proof, halt_reason: HaltReason::EmptyClause, inferences }
    }
}

/// Searches `theory` for the empty clause. Resolvents that end up in the
/// proof (and, for the unrestricted strategy, every retained resolvent) are
/// added to `theory`.
pub fn refute(theory: &mut TheorySet, config: &RefuteConfig) -> RefutationResult {
    if let Some(e) = theory.entries().iter().find(|e| e.clause.is_empty()) {
        log::debug!("input already contains the empty clause [{}]", e.id);
        return RefutationResult::found(Vec::new(), 0);
    }
    match config.strategy {
        Strategy::SosLinear if theory.entries().iter().all(|e| e.clause.is_horn()) => input_search(theory, config),
        Strategy::SosLinear => {
            // a saturated closure without the empty clause means no linear
            // derivation can succeed either
            let closure = given_clause(&mut theory.clone(), config);
            if matches!(closure.halt_reason, HaltReason::Saturated | HaltReason::NoValidPair) {
                return closure;
            }
            let mut result = LinearSearch::new(theory, config).run(theory);
            result.inferences += closure.inferences;
            result
        }
        Strategy::Unrestricted => given_clause(theory, config),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Input(usize),
    Ancestor(usize),
}

struct Node {
    clause: Clause,
    via: Option<(Side, Substitution)>,
}

#[derive(Clone, Copy, Debug)]
struct Cached {
    remaining: usize,
    cutoff: bool,
}

enum Outcome {
    Found,
    /// `dep` is the lowest trail index outside the subtree that influenced it.
    Failed {
        dep: usize,
        cutoff: bool,
    },
}

struct LinearSearch {
    /// Entry indices of the input set, in side-clause preference order.
    inputs: Vec<usize>,
    input_clauses: Vec<Clause>,
    tops: Vec<usize>,
    budget: usize,
    max_work: usize,
    trail: Vec<Node>,
    cache: HashMap<Clause, Cached>,
    work: usize,
    aborted: bool,
}

impl LinearSearch {
    fn new(theory: &TheorySet, config: &RefuteConfig) -> Self {
        let mut inputs: Vec<usize> = (0..theory.len()).collect();
        inputs.sort_by_key(|&i| (theory.entry_at(i).clause.len(), theory.entry_at(i).id));
        let input_clauses = (0..theory.len()).map(|i| theory.entry_at(i).clause.clone()).collect();
        let mut tops: Vec<usize> = (0..theory.len()).filter(|&i| theory.entry_at(i).supported).collect();
        if tops.is_empty() {
            // no support marks: plain linear resolution from every clause
            tops = (0..theory.len()).collect();
        }
        LinearSearch {
            inputs,
            input_clauses,
            tops,
            budget: config.budget,
            max_work: config.max_work,
            trail: Vec::new(),
            cache: HashMap::new(),
            work: 0,
            aborted: false,
        }
    }

    fn run(mut self, theory: &mut TheorySet) -> RefutationResult {
        for limit in 1..=self.budget {
            let mut cutoff = false;
            for ti in 0..self.tops.len() {
                let top = self.tops[ti];
                self.trail.clear();
                self.trail.push(Node { clause: self.input_clauses[top].clone(), via: None });
                match self.dfs(limit) {
                    Outcome::Found => {
                        let proof = self.build_proof(theory, top);
                        return RefutationResult::found(proof, self.work);
                    }
                    Outcome::Failed { cutoff: c, .. } => cutoff |= c,
                }
                if self.aborted {
                    log::debug!("linear search hit the work cap after {} conclusions", self.work);
                    return RefutationResult::failed(HaltReason::BudgetExhausted, self.work);
                }
            }
            if !cutoff {
                return RefutationResult::failed(HaltReason::NoValidPair, self.work);
            }
        }
        RefutationResult::failed(HaltReason::BudgetExhausted, self.work)
    }

    /// Side clauses for the current center: inputs by (length, id), then
    /// the trail's derived ancestors by (length, position).
    fn sides(&self) -> Vec<Side> {
        let k = self.trail.len() - 1;
        let mut ancestors: Vec<usize> = (1..k).collect();
        ancestors.sort_by_key(|&a| (self.trail[a].clause.len(), a));
        let mut sides: Vec<(usize, u8, Side)> =
            self.inputs.iter().map(|&i| (self.input_clauses[i].len(), 0u8, Side::Input(i))).collect();
        sides.extend(ancestors.into_iter().map(|a| (self.trail[a].clause.len(), 1u8, Side::Ancestor(a))));
        // stable: inputs keep id order, ancestors keep trail order
        sides.sort_by_key(|(len, kind, _)| (*len, *kind));
        sides.into_iter().map(|(_, _, s)| s).collect()
    }

    fn side_clause(&self, side: Side) -> &Clause {
        match side {
            Side::Input(i) => &self.input_clauses[i],
            Side::Ancestor(a) => &self.trail[a].clause,
        }
    }

    fn dfs(&mut self, remaining: usize) -> Outcome {
        let k = self.trail.len() - 1;
        let center = self.trail[k].clause.clone();
        if let Some(hit) = self.cache.get(&center) {
            if hit.remaining >= remaining {
                return Outcome::Failed { dep: usize::MAX, cutoff: hit.cutoff };
            }
        }

        let mut dep = usize::MAX;
        let mut cutoff = false;
        let sides = self.sides();

        if remaining == 0 {
            for side in sides {
                if can_resolve(&center, self.side_clause(side)) {
                    cutoff = true;
                    if let Side::Ancestor(a) = side {
                        dep = dep.min(a);
                    }
                }
            }
            return Outcome::Failed { dep, cutoff };
        }

        for side in sides {
            let conclusions = step_conclusions(&center, self.side_clause(side));
            if conclusions.is_empty() {
                continue;
            }
            if let Side::Ancestor(a) = side {
                dep = dep.min(a);
            }
            for r in conclusions {
                self.work += 1;
                if self.work > self.max_work {
                    self.aborted = true;
                    return Outcome::Failed { dep: 0, cutoff: true };
                }
                if let Some(i) = self.trail.iter().position(|n| n.clause == r.clause) {
                    // regularity: never re-derive a clause already on the trail
                    dep = dep.min(i);
                    continue;
                }
                let empty = r.clause.is_empty();
                self.trail.push(Node { clause: r.clause, via: Some((side, r.mgu)) });
                if empty {
                    return Outcome::Found;
                }
                match self.dfs(remaining - 1) {
                    Outcome::Found => return Outcome::Found,
                    Outcome::Failed { dep: d, cutoff: c } => {
                        dep = dep.min(d);
                        cutoff |= c;
                    }
                }
                self.trail.pop();
                if self.aborted {
                    return Outcome::Failed { dep: 0, cutoff: true };
                }
            }
        }

        if dep >= k {
            let entry = Cached { remaining: if cutoff { remaining } else { usize::MAX }, cutoff };
            self.cache
                .entry(center)
                .and_modify(|c| {
                    if entry.remaining > c.remaining {
                        *c = entry
                    }
                })
                .or_insert(entry);
        }
        Outcome::Failed { dep, cutoff }
    }

    fn build_proof(&self, theory: &mut TheorySet, top: usize) -> Vec<ProofStep> {
        let mut ids: Vec<ClauseId> = vec![theory.entry_at(top).id];
        let mut proof = Vec::with_capacity(self.trail.len() - 1);
        for k in 1..self.trail.len() {
            let node = &self.trail[k];
            let (side, mgu) = node.via.clone().expect("derived trail node");
            let id = match theory.insert(node.clause.clone(), Origin::Resolvent, true) {
                Insert::Added(id) | Insert::Duplicate(id) => id,
                Insert::Tautology => unreachable!("resolvents are never tautologies"),
            };
            let (side_id, side_clause) = match side {
                Side::Input(i) => (theory.entry_at(i).id, self.input_clauses[i].clone()),
                Side::Ancestor(a) => (ids[a], self.trail[a].clause.clone()),
            };
            proof.push(ProofStep {
                premise_ids: (ids[k - 1], side_id),
                premises: (self.trail[k - 1].clause.clone(), side_clause),
                conclusion_id: id,
                conclusion: node.clause.clone(),
                mgu,
            });
            ids.push(id);
        }
        proof
    }
}

/// Linear input resolution as a breadth-first search over centers. Side
/// clauses are inputs only, in (length, id) order.
fn input_search(theory: &mut TheorySet, config: &RefuteConfig) -> RefutationResult {
    struct Center {
        clause: Clause,
        via: Option<(usize, usize, Substitution)>,
    }
    let n = theory.len();
    let mut sides: Vec<usize> = (0..n).collect();
    sides.sort_by_key(|&i| (theory.entry_at(i).clause.len(), theory.entry_at(i).id));
    let inputs: Vec<Clause> = (0..n).map(|i| theory.entry_at(i).clause.clone()).collect();
    let mut tops: Vec<usize> = (0..n).filter(|&i| theory.entry_at(i).supported).collect();
    if tops.is_empty() {
        tops = (0..n).collect();
    }

    let mut centers: Vec<Center> = tops.iter().map(|&t| Center { clause: inputs[t].clone(), via: None }).collect();
    let mut seen: HashSet<Clause> = centers.iter().map(|c| c.clause.clone()).collect();
    let mut frontier: Vec<usize> = (0..centers.len()).collect();
    let mut work = 0usize;

    for _ in 0..config.budget {
        let mut next = Vec::new();
        for &k in &frontier {
            let center = centers[k].clause.clone();
            for &s in &sides {
                for r in step_conclusions(&center, &inputs[s]) {
                    work += 1;
                    if work > config.max_work {
                        log::debug!("input search hit the work cap with {} centers", centers.len());
                        return RefutationResult::failed(HaltReason::BudgetExhausted, work);
                    }
                    if seen.contains(&r.clause) {
                        continue;
                    }
                    let empty = r.clause.is_empty();
                    seen.insert(r.clause.clone());
                    centers.push(Center { clause: r.clause, via: Some((k, s, r.mgu)) });
                    if empty {
                        let mut path = vec![centers.len() - 1];
                        while let Some((p, _, _)) = &centers[*path.last().expect("non-empty")].via {
                            path.push(*p);
                        }
                        path.reverse();
                        let root = tops[path[0]];
                        let mut prev_id = theory.entry_at(root).id;
                        let mut proof = Vec::with_capacity(path.len() - 1);
                        for w in path.windows(2) {
                            let (from, to) = (&centers[w[0]], &centers[w[1]]);
                            let (_, s, mgu) = to.via.clone().expect("derived center");
                            let id = match theory.insert(to.clause.clone(), Origin::Resolvent, true) {
                                Insert::Added(id) | Insert::Duplicate(id) => id,
                                Insert::Tautology => unreachable!("resolvents are never tautologies"),
                            };
                            proof.push(ProofStep {
                                premise_ids: (prev_id, theory.entry_at(s).id),
                                premises: (from.clause.clone(), inputs[s].clone()),
                                conclusion_id: id,
                                conclusion: to.clause.clone(),
                                mgu,
                            });
                            prev_id = id;
                        }
                        return RefutationResult::found(proof, work);
                    }
                    next.push(centers.len() - 1);
                }
            }
        }
        if next.is_empty() {
            return RefutationResult::failed(HaltReason::NoValidPair, work);
        }
        frontier = next;
    }
    RefutationResult::failed(HaltReason::BudgetExhausted, work)
}

fn given_clause(theory: &mut TheorySet, config: &RefuteConfig) -> RefutationResult {
    let n0 = theory.len();
    let mut depth: Vec<usize> = vec![0; n0];
    let mut parents: Vec<Option<(usize, usize, Substitution)>> = vec![None; n0];
    let mut queue: VecDeque<usize> = (0..n0).collect();
    let mut processed_by_literal: HashMap<(Symbol, bool), Vec<usize>> = HashMap::new();
    let mut work = 0usize;
    let mut cutoff = false;
    let mut any_pair = false;

    while let Some(g) = queue.pop_front() {
        let given = theory.entry_at(g).clause.clone();
        let mut partners: BTreeSet<usize> = BTreeSet::new();
        for l in given.literals() {
            if let Some(v) = processed_by_literal.get(&(l.predicate(), !l.positive)) {
                partners.extend(v.iter().copied());
            }
        }
        partners.insert(g);

        for p in partners {
            let partner = theory.entry_at(p).clause.clone();
            let conclusions = step_conclusions(&given, &partner);
            if !conclusions.is_empty() {
                any_pair = true;
            }
            let d = depth[g].max(depth[p]) + 1;
            for r in conclusions {
                work += 1;
                if d > config.budget {
                    cutoff = true;
                    continue;
                }
                if config.subsumption && theory.clauses().any(|c| c.subsumes(&r.clause)) {
                    continue;
                }
                let supported = theory.entry_at(g).supported || theory.entry_at(p).supported;
                let empty = r.clause.is_empty();
                if let Insert::Added(_) = theory.insert(r.clause, Origin::Resolvent, supported) {
                    let idx = theory.len() - 1;
                    depth.push(d);
                    parents.push(Some((g, p, r.mgu)));
                    queue.push_back(idx);
                    if empty {
                        let proof = extract_proof(theory, &parents, idx);
                        return RefutationResult::found(proof, work);
                    }
                }
            }
            if work > config.max_work {
                log::debug!("given-clause loop hit the work cap with {} clauses", theory.len());
                return RefutationResult::failed(HaltReason::BudgetExhausted, work);
            }
        }

        for l in given.literals() {
            let slot = processed_by_literal.entry((l.predicate(), l.positive)).or_default();
            if slot.last() != Some(&g) {
                slot.push(g);
            }
        }
    }

    let halt = if cutoff {
        HaltReason::BudgetExhausted
    } else if !any_pair {
        HaltReason::NoValidPair
    } else {
        HaltReason::Saturated
    };
    RefutationResult::failed(halt, work)
}

fn extract_proof(theory: &TheorySet, parents: &[Option<(usize, usize, Substitution)>], goal: usize) -> Vec<ProofStep> {
    let mut needed = BTreeSet::new();
    let mut stack = vec![goal];
    while let Some(i) = stack.pop() {
        if let Some((a, b, _)) = &parents[i] {
            if needed.insert(i) {
                stack.push(*a);
                stack.push(*b);
            }
        }
    }
    needed
        .into_iter()
        .map(|i| {
            let (a, b, mgu) = parents[i].clone().expect("derived clause");
            let (ea, eb, ec) = (theory.entry_at(a), theory.entry_at(b), theory.entry_at(i));
            ProofStep {
                premise_ids: (ea.id, eb.id),
                premises: (ea.clause.clone(), eb.clause.clone()),
                conclusion_id: ec.id,
                conclusion: ec.clause.clone(),
                mgu,
            }
        })
        .collect()
}
