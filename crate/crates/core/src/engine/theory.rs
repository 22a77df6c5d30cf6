use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::logic::Clause;

/// Instance-unique clause number. Ids start at 1 and grow with insertion order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClauseId(pub u64);

impl fmt::Display for ClauseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Input,
    /// Clause of the hypothesis itself (the theory-plus-hypothesis set).
    Hypothesis,
    NegatedHypothesis,
    Resolvent,
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub id: ClauseId,
    pub clause: Clause,
    pub origin: Origin,
    /// In the set of support: a hypothesis-derived clause or a descendant of one.
    pub supported: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Insert {
    Added(ClauseId),
    Duplicate(ClauseId),
    Tautology,
}

/// Ordered clause store of one refutation task. Clauses are kept canonical,
/// with no two sharing a canonical form and no tautologies.
#[derive(Clone, Debug, Default)]
pub struct TheorySet {
    entries: Vec<Entry>,
    index: HashMap<Clause, usize>,
}

impl TheorySet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Theory clauses as `Input`, then the support clauses with `support_origin`.
    pub fn from_parts(theory: &[Clause], support: &[Clause], support_origin: Origin) -> Self {
        let mut t = TheorySet::new();
        for c in theory {
            t.insert(c.clone(), Origin::Input, false);
        }
        for c in support {
            t.insert(c.clone(), support_origin, true);
        }
        t
    }

    /// Plain input set with no support marks.
    pub fn from_clauses(clauses: &[Clause]) -> Self {
        Self::from_parts(clauses, &[], Origin::Input)
    }

    /// Canonicalizes and stores `clause`. A duplicate of a stored clause only
    /// propagates the support mark to it.
    pub fn insert(&mut self, clause: Clause, origin: Origin, supported: bool) -> Insert {
        let clause = clause.canonical();
        if clause.is_tautology() {
            return Insert::Tautology;
        }
        if let Some(&i) = self.index.get(&clause) {
            if supported {
                self.entries[i].supported = true;
            }
            return Insert::Duplicate(self.entries[i].id);
        }
        let id = ClauseId(self.entries.len() as u64 + 1);
        self.index.insert(clause.clone(), self.entries.len());
        self.entries.push(Entry { id, clause, origin, supported });
        Insert::Added(id)
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: ClauseId) -> Option<&Entry> {
        let i = usize::try_from(id.0).ok()?.checked_sub(1)?;
        self.entries.get(i)
    }

    pub fn clause(&self, id: u64) -> Option<&Clause> {
        self.get(ClauseId(id)).map(|e| &e.clause)
    }

    pub fn find(&self, clause: &Clause) -> Option<ClauseId> {
        self.index.get(&clause.canonical()).map(|&i| self.entries[i].id)
    }

    pub(crate) fn entry_at(&self, index: usize) -> &Entry {
        &self.entries[index]
    }

    pub fn clauses(&self) -> impl Iterator<Item = &Clause> {
        self.entries.iter().map(|e| &e.clause)
    }
}
