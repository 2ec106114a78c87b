//! Closed default theories over a propositional language.
//!
//! A default `a : b / c` behaves like the inference rule `a / c` as long as
//! its justification `b` stays consistent. Everything here works over
//! `S = { Th^γ(W) : γ ⊆ {1..m} }`, enumerated exhaustively and grouped into
//! theory-equivalence classes, since distinct `γ` can generate the same theory.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::index::{check_enumerable, GammaIndex, SigmaIndex, MAX_INDEX};
use crate::logic::{equivalent, saturate, Formula, InferenceRule, TheoryBase};

/// `prerequisite : justification / consequent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefaultRule {
    pub id: usize,
    pub prerequisite: Formula,
    pub justification: Formula,
    pub consequent: Formula,
}

impl DefaultRule {
    pub fn new(id: usize, prerequisite: Formula, justification: Formula, consequent: Formula) -> Self {
        DefaultRule { id, prerequisite, justification, consequent }
    }

    /// `a : c / c`.
    pub fn normal(id: usize, prerequisite: Formula, consequent: Formula) -> Self {
        DefaultRule::new(id, prerequisite, consequent.clone(), consequent)
    }

    pub fn inference_rule(&self) -> InferenceRule {
        InferenceRule::new(self.prerequisite.clone(), self.consequent.clone())
    }
}

/// `Δ = (D, W)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefaultTheory {
    defaults: Vec<DefaultRule>,
    facts: Vec<Formula>,
}

impl DefaultTheory {
    /// Defaults are reordered by id; ids must be exactly `1..=m`.
    pub fn new(mut defaults: Vec<DefaultRule>, facts: Vec<Formula>) -> Result<Self> {
        defaults.sort_by_key(|d| d.id);
        if defaults.len() > MAX_INDEX {
            return Err(Error::InvalidModel(format!("at most {MAX_INDEX} defaults are supported")));
        }
        if defaults.iter().enumerate().any(|(pos, d)| d.id != pos + 1) {
            return Err(Error::InvalidModel(format!("default ids must be exactly 1..={}", defaults.len())));
        }
        Ok(DefaultTheory { defaults, facts })
    }

    pub fn defaults(&self) -> &[DefaultRule] {
        &self.defaults
    }

    pub fn facts(&self) -> &[Formula] {
        &self.facts
    }

    pub fn m(&self) -> usize {
        self.defaults.len()
    }

    pub fn default(&self, id: usize) -> Option<&DefaultRule> {
        id.checked_sub(1).and_then(|i| self.defaults.get(i))
    }

    /// `I = { a_i / c_i }`.
    pub fn inference_rules(&self) -> Vec<InferenceRule> {
        self.defaults.iter().map(DefaultRule::inference_rule).collect()
    }
}

/// One extension: its base (facts plus fired consequents) and the rules that fired.
#[derive(Clone, Debug, Serialize)]
pub struct Extension {
    pub fired: SigmaIndex,
    pub base: TheoryBase,
}

/// `Th^γ(W)`.
pub fn th_gamma(theory: &DefaultTheory, gamma: GammaIndex) -> TheoryBase {
    th_gamma_traced(theory, gamma).1
}

fn th_gamma_traced(theory: &DefaultTheory, gamma: GammaIndex) -> (GammaIndex, TheoryBase) {
    let rules: Vec<InferenceRule> =
        gamma.ids().filter_map(|id| theory.default(id)).map(DefaultRule::inference_rule).collect();
    let refs: Vec<&InferenceRule> = rules.iter().collect();
    let mut fired = vec![false; refs.len()];
    let mut base = TheoryBase::new(theory.facts.iter().cloned());
    saturate(&mut base, &refs, &mut fired);
    let fired_ids = gamma.ids().zip(&fired).filter(|(_, &f)| f).map(|(id, _)| id);
    (GammaIndex::from_ids(fired_ids), base)
}

/// A theory-equivalence class of `S`.
#[derive(Clone, Debug)]
pub struct TheoryClass {
    pub base: TheoryBase,
    /// Every `γ` with `Th^γ(W)` in this class, ascending.
    pub generators: Vec<GammaIndex>,
    /// Rules fired when closing under the smallest generator.
    pub fired: GammaIndex,
    pub consistent: bool,
    pub delta_consistent: bool,
}

impl TheoryClass {
    fn extension(&self) -> Extension {
        Extension { fired: self.fired, base: self.base.clone() }
    }
}

/// `S` for a default theory, grouped into theory-equivalence classes in order
/// of their smallest generator.
#[derive(Clone, Debug)]
pub struct DefaultSpace {
    classes: Vec<TheoryClass>,
    /// Class of each `γ`, indexed by its bits.
    class_of: Vec<usize>,
}

impl DefaultSpace {
    pub fn build(theory: &DefaultTheory) -> Result<Self> {
        let m = theory.m();
        check_enumerable(m)?;
        let rules = theory.inference_rules();
        let mut classes: Vec<TheoryClass> = Vec::new();
        let mut class_of: Vec<usize> = Vec::with_capacity(1 << m);
        let mut by_fired: HashMap<GammaIndex, usize> = HashMap::new();
        let mut closures: Vec<(Vec<bool>, GammaIndex)> = Vec::with_capacity(1 << m);
        for gamma in SigmaIndex::all(m) {
            // grow from γ without its largest member; its rules are a prefix
            let (mut base, mut fired) = match gamma.max_id() {
                None => (TheoryBase::new(theory.facts.iter().cloned()), Vec::new()),
                Some(top) => {
                    let parent = gamma.without(top).bits() as usize;
                    let class = &classes[class_of[parent]];
                    let parent_fired = closures[parent].1;
                    let base = if class.fired == parent_fired {
                        class.base.clone()
                    } else {
                        th_gamma(theory, gamma.without(top))
                    };
                    (base, closures[parent].0.clone())
                }
            };
            let refs: Vec<&InferenceRule> = gamma.ids().map(|id| &rules[id - 1]).collect();
            fired.resize(refs.len(), false);
            saturate(&mut base, &refs, &mut fired);
            let fired_set = GammaIndex::from_ids(gamma.ids().zip(&fired).filter(|(_, &f)| f).map(|(id, _)| id));
            closures.push((fired, fired_set));

            let idx = match by_fired.get(&fired_set) {
                Some(&idx) => idx,
                None => {
                    let consistent = base.is_consistent();
                    let found = classes
                        .iter()
                        .position(|c| c.consistent == consistent && (!consistent || c.base.theory_eq(&base)));
                    let idx = found.unwrap_or_else(|| {
                        classes.push(TheoryClass {
                            base,
                            generators: Vec::new(),
                            fired: fired_set,
                            consistent,
                            delta_consistent: false,
                        });
                        classes.len() - 1
                    });
                    by_fired.insert(fired_set, idx);
                    idx
                }
            };
            classes[idx].generators.push(gamma);
            class_of.push(idx);
        }
        for class in &mut classes {
            let refuted: Vec<bool> =
                theory.defaults.iter().map(|d| class.base.entails(&d.justification.negate())).collect();
            class.delta_consistent = class.generators.iter().any(|g| g.ids().all(|i| !refuted[i - 1]));
        }
        Ok(DefaultSpace { classes, class_of })
    }

    pub fn classes(&self) -> &[TheoryClass] {
        &self.classes
    }

    pub fn class_of(&self, gamma: GammaIndex) -> &TheoryClass {
        &self.classes[self.class_of[gamma.bits() as usize]]
    }

    pub fn find(&self, k: &TheoryBase) -> Option<&TheoryClass> {
        let consistent = k.is_consistent();
        self.classes.iter().find(|c| c.consistent == consistent && (!consistent || c.base.theory_eq(k)))
    }

    /// Maximal Δ-consistent members.
    pub fn m_extensions(&self) -> Vec<Extension> {
        let candidates: Vec<&TheoryClass> = self.classes.iter().filter(|c| c.delta_consistent).collect();
        candidates
            .iter()
            .enumerate()
            .filter(|(i, c)| {
                !candidates.iter().enumerate().any(|(j, other)| *i != j && c.base.is_subtheory_of(&other.base))
            })
            .map(|(_, c)| c.extension())
            .collect()
    }

    /// Members `E` with `E = Th^γ(W)` for `γ = { i : E ⊭ ¬b_i }`.
    pub fn reiter_extensions(&self, theory: &DefaultTheory) -> Vec<Extension> {
        self.classes
            .iter()
            .enumerate()
            .filter(|(idx, c)| {
                let gamma = GammaIndex::from_ids(
                    theory.defaults.iter().filter(|d| !c.base.entails(&d.justification.negate())).map(|d| d.id),
                );
                self.class_of[gamma.bits() as usize] == *idx
            })
            .map(|(_, c)| c.extension())
            .collect()
    }
}

/// Whether `k` is a Δ-consistent member of `S`; false when `k` is not in `S`.
pub fn delta_consistent(theory: &DefaultTheory, k: &TheoryBase) -> Result<bool> {
    Ok(DefaultSpace::build(theory)?.find(k).is_some_and(|c| c.delta_consistent))
}

/// M-extensions: the maximal Δ-consistent members of `S`.
pub fn m_extensions(theory: &DefaultTheory) -> Result<Vec<Extension>> {
    Ok(DefaultSpace::build(theory)?.m_extensions())
}

/// Reiter extensions, via their fixed-point characterisation over `S`.
pub fn reiter_extensions(theory: &DefaultTheory) -> Result<Vec<Extension>> {
    Ok(DefaultSpace::build(theory)?.reiter_extensions(theory))
}

/// Every justification is equivalent to its consequent.
pub fn is_normal(theory: &DefaultTheory) -> bool {
    theory.defaults.iter().all(|d| equivalent(&d.justification, &d.consequent))
}

/// Some M-extension entails `p`.
pub fn m_credulous(theory: &DefaultTheory, p: &Formula) -> Result<bool> {
    Ok(m_extensions(theory)?.iter().any(|e| e.base.entails(p)))
}
