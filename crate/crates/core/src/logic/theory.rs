use std::collections::HashSet;
use std::hash::{DefaultHasher, Hash, Hasher};

use serde::Serialize;

use super::sat::Session;
use super::{entails, satisfiable, Formula};

/// A theory, represented by a finite base whose deductive closure it is.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct TheoryBase {
    base: Vec<Formula>,
}

impl TheoryBase {
    pub fn new<I: IntoIterator<Item = Formula>>(formulas: I) -> Self {
        let mut out = TheoryBase::default();
        for f in formulas {
            out.insert(f);
        }
        out
    }

    /// Adds `f` unless it is already (syntactically) present.
    pub fn insert(&mut self, f: Formula) {
        if !self.base.contains(&f) {
            self.base.push(f);
        }
    }

    /// Inserts, using `seen` (hashes of every base formula) to skip the
    /// duplicate scan for formulas that are certainly new.
    fn insert_hashed(&mut self, f: Formula, seen: &mut HashSet<u64>) {
        if seen.insert(fingerprint(&f)) {
            self.base.push(f);
        } else {
            self.insert(f);
        }
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn entails(&self, d: &Formula) -> bool {
        entails(&self.base, d)
    }

    pub fn is_consistent(&self) -> bool {
        satisfiable(&self.base)
    }

    /// `Th(self) ⊆ Th(other)`.
    pub fn is_subtheory_of(&self, other: &TheoryBase) -> bool {
        let mut session = Session::with(&other.base);
        self.base.iter().all(|f| other.base.contains(f) || session.entails(f))
    }

    pub fn theory_eq(&self, other: &TheoryBase) -> bool {
        self.is_subtheory_of(other) && other.is_subtheory_of(self)
    }
}

impl FromIterator<Formula> for TheoryBase {
    fn from_iter<T: IntoIterator<Item = Formula>>(iter: T) -> Self {
        TheoryBase::new(iter)
    }
}

/// True iff `k2` entails every base formula of `k1`.
pub fn theory_subset(k1: &TheoryBase, k2: &TheoryBase) -> bool {
    k1.is_subtheory_of(k2)
}

pub fn theory_equal(k1: &TheoryBase, k2: &TheoryBase) -> bool {
    k1.theory_eq(k2)
}

/// A one-way inference rule `premise / consequent`: knowing the premise licenses
/// the consequent, with no contrapositive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InferenceRule {
    pub premise: Formula,
    pub consequent: Formula,
}

impl InferenceRule {
    pub fn new(premise: Formula, consequent: Formula) -> Self {
        InferenceRule { premise, consequent }
    }

    /// `true / (a -> c)`: the encoding of a rule that allows contraposition.
    pub fn material(a: Formula, c: Formula) -> Self {
        InferenceRule::new(Formula::Top, Formula::implies(a, c))
    }
}

/// Result of closing a base under a set of inference rules.
#[derive(Clone, Debug)]
pub struct Closure {
    pub base: TheoryBase,
    /// Positions (in the rule slice) of the rules that fired, ascending.
    pub fired: Vec<usize>,
}

/// Repeatedly fires every rule whose premise the base entails, until stable.
///
/// `fired[i]` marks rules whose consequent is already in `base`.
pub(crate) fn saturate(base: &mut TheoryBase, rules: &[&InferenceRule], fired: &mut [bool]) {
    saturate_in_session(base, rules, fired);
}

/// [`saturate`], handing back the solver session that holds the closed base.
pub(crate) fn saturate_in_session(base: &mut TheoryBase, rules: &[&InferenceRule], fired: &mut [bool]) -> Session {
    debug_assert_eq!(rules.len(), fired.len());
    let mut session = Session::with(base.formulas());
    let mut seen: HashSet<u64> = base.formulas().iter().map(fingerprint).collect();
    // a rule checked since the last insertion cannot fire yet
    let mut inserted = 0usize;
    let mut checked_at = vec![usize::MAX; rules.len()];
    loop {
        let mut changed = false;
        for (i, (rule, done)) in rules.iter().zip(fired.iter_mut()).enumerate() {
            if *done || checked_at[i] == inserted {
                continue;
            }
            checked_at[i] = inserted;
            if session.entails(&rule.premise) {
                session.assert(&rule.consequent);
                base.insert_hashed(rule.consequent.clone(), &mut seen);
                *done = true;
                inserted += 1;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    session
}

fn fingerprint(f: &Formula) -> u64 {
    let mut h = DefaultHasher::new();
    f.hash(&mut h);
    h.finish()
}

/// Base of `Th^J(U)`: `u` plus the consequent of every rule that fires.
pub fn th_closure(u: &[Formula], j: &[InferenceRule]) -> TheoryBase {
    th_closure_traced(u, j).base
}

pub fn th_closure_traced(u: &[Formula], j: &[InferenceRule]) -> Closure {
    let mut base = TheoryBase::new(u.iter().cloned());
    let rules: Vec<&InferenceRule> = j.iter().collect();
    let mut fired = vec![false; rules.len()];
    saturate(&mut base, &rules, &mut fired);
    Closure { base, fired: fired.iter().enumerate().filter(|(_, &f)| f).map(|(i, _)| i).collect() }
}
