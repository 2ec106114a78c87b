use std::collections::{BTreeMap, BTreeSet};

use crate::bext::CombinedModel;
use crate::defaults::{DefaultRule, DefaultTheory};
use crate::error::Result;
use crate::logic::{Atom, Formula};
use crate::sources::{EvidenceModel, ProbabilityModel, Source};

/// `rule <name>: if <a> then <c> weight <w> [contra|nocontra] [priority <n>].`
#[derive(Clone, Debug, PartialEq)]
pub struct NumericRule {
    pub name: String,
    pub antecedent: Formula,
    pub consequent: Formula,
    pub weight: f64,
    /// `contra` (the default) compiles to `true / (a -> c)`, `nocontra` to `a / c`.
    pub contraposition: bool,
    /// 0 is the highest priority.
    pub priority: u32,
}

/// `default <name>: <a> : <b> / <c>.`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefaultDecl {
    pub name: String,
    pub prerequisite: Formula,
    pub justification: Formula,
    pub consequent: Formula,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Ds,
    Priority,
}

/// A parsed knowledge base. Numeric rules and defaults are numbered from 1 in
/// declaration order, each in their own index space.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct KnowledgeBase {
    pub facts: Vec<Formula>,
    pub rules: Vec<NumericRule>,
    pub defaults: Vec<DefaultDecl>,
}

impl KnowledgeBase {
    pub fn material_rules(&self) -> impl Iterator<Item = &NumericRule> {
        self.rules.iter().filter(|r| r.contraposition)
    }

    pub fn inference_rules(&self) -> impl Iterator<Item = &NumericRule> {
        self.rules.iter().filter(|r| !r.contraposition)
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        for f in &self.facts {
            f.collect_atoms(&mut out);
        }
        for r in &self.rules {
            r.antecedent.collect_atoms(&mut out);
            r.consequent.collect_atoms(&mut out);
        }
        for d in &self.defaults {
            d.prerequisite.collect_atoms(&mut out);
            d.justification.collect_atoms(&mut out);
            d.consequent.collect_atoms(&mut out);
        }
        out
    }

    pub fn sources(&self) -> Vec<Source> {
        self.rules
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let (a, c) = (r.antecedent.clone(), r.consequent.clone());
                let s = if r.contraposition {
                    Source::material(i + 1, r.weight, a, c)
                } else {
                    Source::inference(i + 1, r.weight, a, c)
                };
                s.with_label(r.name.clone())
            })
            .collect()
    }

    /// Source ids grouped by ascending priority value.
    pub fn priority_levels(&self) -> Vec<Vec<usize>> {
        let mut levels: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (i, r) in self.rules.iter().enumerate() {
            levels.entry(r.priority).or_default().push(i + 1);
        }
        levels.into_values().collect()
    }

    pub fn evidence_model(&self, kind: ModelKind) -> Result<EvidenceModel> {
        let probability = match kind {
            ModelKind::Ds => ProbabilityModel::Ds,
            ModelKind::Priority => ProbabilityModel::Prioritized { levels: self.priority_levels() },
        };
        EvidenceModel::new(self.facts.clone(), self.sources(), probability)
    }

    pub fn default_rules(&self) -> Vec<DefaultRule> {
        self.defaults
            .iter()
            .enumerate()
            .map(|(i, d)| {
                DefaultRule::new(i + 1, d.prerequisite.clone(), d.justification.clone(), d.consequent.clone())
            })
            .collect()
    }

    pub fn default_theory(&self) -> Result<DefaultTheory> {
        DefaultTheory::new(self.default_rules(), self.facts.clone())
    }

    pub fn combined_model(&self) -> CombinedModel {
        CombinedModel { facts: self.facts.clone(), defaults: self.default_rules(), numeric: self.sources() }
    }
}
