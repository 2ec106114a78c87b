//! Sources of evidence: each source is reliable with probability `alpha` and,
//! when reliable, adds its inference rules to the logic. Belief in a formula
//! is the probability of landing in an elementary event whose theory entails
//! it.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::index::{check_enumerable, SigmaIndex, MAX_INDEX};
use crate::logic::{saturate, saturate_in_session, Formula, InferenceRule, TheoryBase};

/// One source of evidence `n_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Source {
    pub id: usize,
    pub alpha: f64,
    pub rules: Vec<InferenceRule>,
    pub label: Option<String>,
}

impl Source {
    pub fn new(id: usize, alpha: f64, rules: Vec<InferenceRule>) -> Self {
        Source { id, alpha, rules, label: None }
    }

    /// "If `a` then `c`", allowing contraposition: the rule `true / (a -> c)`.
    pub fn material(id: usize, alpha: f64, a: Formula, c: Formula) -> Self {
        Source::new(id, alpha, vec![InferenceRule::material(a, c)])
    }

    /// "If `a` then `c`" without contraposition: the rule `a / c`.
    pub fn inference(id: usize, alpha: f64, a: Formula, c: Formula) -> Self {
        Source::new(id, alpha, vec![InferenceRule::new(a, c)])
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }
}

/// How probability is spread over the elementary events.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbabilityModel {
    /// Independent product, zeroed on contradictions and renormalised.
    Ds,
    /// Ordered partition of source ids; earlier levels dominate later ones.
    Prioritized { levels: Vec<Vec<usize>> },
}

/// Certain facts plus a list of sources and a probability model over them.
#[derive(Clone, Debug, PartialEq)]
pub struct EvidenceModel {
    facts: Vec<Formula>,
    sources: Vec<Source>,
    probability: ProbabilityModel,
}

impl EvidenceModel {
    /// Validates and builds a model. Sources are reordered by id; ids must be
    /// exactly `1..=m`.
    pub fn new(facts: Vec<Formula>, mut sources: Vec<Source>, probability: ProbabilityModel) -> Result<Self> {
        sources.sort_by_key(|s| s.id);
        if sources.len() > MAX_INDEX {
            return Err(Error::InvalidModel(format!("at most {MAX_INDEX} sources are supported")));
        }
        for (pos, s) in sources.iter().enumerate() {
            if s.id != pos + 1 {
                return Err(Error::InvalidModel(format!("source ids must be exactly 1..={}", sources.len())));
            }
            if !(0.0..=1.0).contains(&s.alpha) {
                return Err(Error::InvalidModel(format!("source {} has reliability {} outside [0, 1]", s.id, s.alpha)));
            }
            if s.rules.is_empty() {
                return Err(Error::InvalidModel(format!("source {} carries no rules", s.id)));
            }
        }
        if let ProbabilityModel::Prioritized { levels } = &probability {
            let mut seen = vec![false; sources.len() + 1];
            for level in levels {
                if level.is_empty() {
                    return Err(Error::InvalidModel("empty priority level".into()));
                }
                for &id in level {
                    if id == 0 || id > sources.len() || std::mem::replace(&mut seen[id], true) {
                        return Err(Error::InvalidModel(format!(
                            "priority levels must partition the source ids (bad id {id})"
                        )));
                    }
                }
            }
            if seen.iter().skip(1).any(|s| !s) {
                return Err(Error::InvalidModel("priority levels do not cover every source".into()));
            }
        }
        Ok(EvidenceModel { facts, sources, probability })
    }

    pub fn ds(facts: Vec<Formula>, sources: Vec<Source>) -> Result<Self> {
        EvidenceModel::new(facts, sources, ProbabilityModel::Ds)
    }

    pub fn facts(&self) -> &[Formula] {
        &self.facts
    }

    pub fn sources(&self) -> &[Source] {
        &self.sources
    }

    pub fn probability(&self) -> &ProbabilityModel {
        &self.probability
    }

    /// Number of sources.
    pub fn m(&self) -> usize {
        self.sources.len()
    }

    pub fn source(&self, id: usize) -> Option<&Source> {
        id.checked_sub(1).and_then(|i| self.sources.get(i))
    }

    pub(crate) fn rules_of(&self, sigma: SigmaIndex) -> Vec<(usize, &InferenceRule)> {
        sigma.ids().filter_map(|id| self.source(id)).flat_map(|s| s.rules.iter().map(move |r| (s.id, r))).collect()
    }
}

/// `K_σ` together with the sources whose rules actually fired.
#[derive(Clone, Debug)]
pub struct SigmaTheory {
    pub base: TheoryBase,
    pub fired: SigmaIndex,
}

/// `K_σ = Th^σ(W)`: the facts closed under the rules of every source in `sigma`.
pub fn k_sigma(model: &EvidenceModel, sigma: SigmaIndex) -> TheoryBase {
    k_sigma_traced(model, sigma).base
}

pub fn k_sigma_traced(model: &EvidenceModel, sigma: SigmaIndex) -> SigmaTheory {
    let tagged = model.rules_of(sigma);
    let rules: Vec<&InferenceRule> = tagged.iter().map(|(_, r)| *r).collect();
    let mut fired = vec![false; rules.len()];
    let mut base = TheoryBase::new(model.facts.iter().cloned());
    saturate(&mut base, &rules, &mut fired);
    SigmaTheory { base, fired: fired_sources(&tagged, &fired) }
}

/// Whether `K_σ` is consistent and, if so, whether it entails `d`; skips
/// materialising the theory.
pub(crate) fn k_sigma_query(model: &EvidenceModel, sigma: SigmaIndex, d: Option<&Formula>) -> Option<bool> {
    let rules: Vec<&InferenceRule> = model.rules_of(sigma).into_iter().map(|(_, r)| r).collect();
    let mut fired = vec![false; rules.len()];
    let mut base = TheoryBase::new(model.facts.iter().cloned());
    let mut session = saturate_in_session(&mut base, &rules, &mut fired);
    session.is_consistent().then(|| d.is_some_and(|d| session.entails(d)))
}

fn fired_sources(tagged: &[(usize, &InferenceRule)], fired: &[bool]) -> SigmaIndex {
    SigmaIndex::from_ids(tagged.iter().zip(fired).filter(|(_, &f)| f).map(|((id, _), _)| *id))
}

/// `ρ_σ = ∏_{i∈σ} α_i ∏_{i∉σ} (1 − α_i)`.
pub fn rho(model: &EvidenceModel, sigma: SigmaIndex) -> f64 {
    model.sources.iter().map(|s| if sigma.contains(s.id) { s.alpha } else { 1.0 - s.alpha }).product()
}

/// `P^DS(η_σ)`. Builds the full table; use [`ExactBelief`] for repeated queries.
pub fn p_ds(model: &EvidenceModel, sigma: SigmaIndex) -> Result<f64> {
    if model.probability != ProbabilityModel::Ds {
        return Err(Error::InvalidModel("p_ds needs the DS probability model".into()));
    }
    Ok(ExactBelief::new(model)?.probability(sigma))
}

/// Probability of `η_σ` under the prioritized model.
pub fn p_prioritized(model: &EvidenceModel, sigma: SigmaIndex) -> Result<f64> {
    if !matches!(model.probability, ProbabilityModel::Prioritized { .. }) {
        return Err(Error::InvalidModel("p_prioritized needs a prioritized probability model".into()));
    }
    Ok(ExactBelief::new(model)?.probability(sigma))
}

/// `Bel(d)`: total probability of the elementary events whose theory entails `d`.
pub fn bel_exact(model: &EvidenceModel, d: &Formula) -> Result<f64> {
    Ok(ExactBelief::new(model)?.bel(d))
}

/// Every `K_σ` for `σ ⊆ {1..m}`, with consistency.
///
/// Built in ascending bit order so that each `K_σ` is grown from
/// `K_{σ∖{max σ}}`, and any `σ` with an inconsistent one-smaller subset is
/// marked inconsistent without a closure.
#[derive(Clone, Debug)]
pub struct SigmaTable {
    m: usize,
    entries: Vec<Option<SigmaTheory>>,
}

impl SigmaTable {
    pub fn build(model: &EvidenceModel) -> Result<Self> {
        let m = model.m();
        check_enumerable(m)?;
        let size = 1usize << m;
        let mut entries: Vec<Option<SigmaTheory>> = Vec::with_capacity(size);
        let mut fired_rules: Vec<Vec<bool>> = Vec::with_capacity(size);
        for bits in 0..size as u64 {
            let sigma = SigmaIndex::from_bits(bits);
            let Some(top) = sigma.max_id() else {
                let base = TheoryBase::new(model.facts.iter().cloned());
                let consistent = base.is_consistent();
                entries.push(consistent.then_some(SigmaTheory { base, fired: SigmaIndex::EMPTY }));
                fired_rules.push(Vec::new());
                continue;
            };
            if sigma.ids().any(|i| entries[sigma.without(i).bits() as usize].is_none()) {
                entries.push(None);
                fired_rules.push(Vec::new());
                continue;
            }
            let parent = sigma.without(top).bits() as usize;
            let tagged = model.rules_of(sigma);
            let rules: Vec<&InferenceRule> = tagged.iter().map(|(_, r)| *r).collect();
            // The parent's rules come first in `tagged`, in the same order.
            let mut fired = fired_rules[parent].clone();
            fired.resize(rules.len(), false);
            let mut base = entries[parent].as_ref().expect("parent is consistent").base.clone();
            saturate(&mut base, &rules, &mut fired);
            if base.is_consistent() {
                entries.push(Some(SigmaTheory { base, fired: fired_sources(&tagged, &fired) }));
                fired_rules.push(fired);
            } else {
                entries.push(None);
                fired_rules.push(Vec::new());
            }
        }
        Ok(SigmaTable { m, entries })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_consistent(&self, sigma: SigmaIndex) -> bool {
        self.get(sigma).is_some()
    }

    /// `K_σ` when consistent.
    pub fn get(&self, sigma: SigmaIndex) -> Option<&SigmaTheory> {
        self.entries.get(sigma.bits() as usize).and_then(Option::as_ref)
    }

    /// Consistent `σ` in ascending bit order.
    pub fn consistent(&self) -> impl Iterator<Item = (SigmaIndex, &SigmaTheory)> {
        self.entries
            .iter()
            .enumerate()
            .filter_map(|(bits, e)| e.as_ref().map(|t| (SigmaIndex::from_bits(bits as u64), t)))
    }
}

/// Exact belief over a model: the `K_σ` table with a probability per `σ`.
#[derive(Clone, Debug)]
pub struct ExactBelief {
    table: SigmaTable,
    weights: Vec<f64>,
}

impl ExactBelief {
    pub fn new(model: &EvidenceModel) -> Result<Self> {
        let table = SigmaTable::build(model)?;
        let weights = match &model.probability {
            ProbabilityModel::Ds => ds_weights(model, &table)?,
            ProbabilityModel::Prioritized { levels } => prioritized_weights(model, &table, levels)?,
        };
        Ok(ExactBelief { table, weights })
    }

    pub fn table(&self) -> &SigmaTable {
        &self.table
    }

    pub fn probability(&self, sigma: SigmaIndex) -> f64 {
        self.weights.get(sigma.bits() as usize).copied().unwrap_or(0.0)
    }

    pub fn bel(&self, d: &Formula) -> f64 {
        let terms: Vec<f64> = self
            .table
            .entries
            .par_iter()
            .zip(self.weights.par_iter())
            .map(|(entry, &w)| match entry {
                Some(t) if w > 0.0 && t.base.entails(d) => w,
                _ => 0.0,
            })
            .collect();
        // fixed summation order keeps the result independent of the thread count
        terms.iter().sum()
    }
}

fn ds_weights(model: &EvidenceModel, table: &SigmaTable) -> Result<Vec<f64>> {
    let mut weights: Vec<f64> = table
        .entries
        .iter()
        .enumerate()
        .map(|(bits, e)| if e.is_some() { rho(model, SigmaIndex::from_bits(bits as u64)) } else { 0.0 })
        .collect();
    let k: f64 = weights.iter().sum();
    if k <= 0.0 {
        return Err(Error::ContradictorySources);
    }
    weights.iter_mut().for_each(|w| *w /= k);
    Ok(weights)
}

/// Level by level from the highest priority: given the sources `R` already
/// taken reliable, the subsets `τ` of the current level are weighted by their
/// product `ρ` restricted to the level, zeroed when `K_{R∪τ}` is inconsistent,
/// and renormalised.
fn prioritized_weights(model: &EvidenceModel, table: &SigmaTable, levels: &[Vec<usize>]) -> Result<Vec<f64>> {
    let masks: Vec<SigmaIndex> = levels.iter().map(|l| SigmaIndex::from_ids(l.iter().copied())).collect();
    let level_rho = |mask: SigmaIndex, tau: SigmaIndex| -> f64 {
        mask.ids()
            .map(|id| {
                let a = model.source(id).expect("validated id").alpha;
                if tau.contains(id) {
                    a
                } else {
                    1.0 - a
                }
            })
            .product()
    };
    let mut normalizers: HashMap<(usize, SigmaIndex), f64> = HashMap::new();
    let mut weights = vec![0.0; table.entries.len()];
    for (bits, w) in weights.iter_mut().enumerate() {
        let sigma = SigmaIndex::from_bits(bits as u64);
        let mut reliable = SigmaIndex::EMPTY;
        let mut p = 1.0;
        if !table.is_consistent(reliable) {
            return Err(Error::ContradictorySources);
        }
        for (level, &mask) in masks.iter().enumerate() {
            let tau = sigma.intersection(mask);
            let next = reliable.union(tau);
            if !table.is_consistent(next) {
                p = 0.0;
                break;
            }
            let k = *normalizers.entry((level, reliable)).or_insert_with(|| {
                mask.subsets().filter(|&t| table.is_consistent(reliable.union(t))).map(|t| level_rho(mask, t)).sum()
            });
            if k <= 0.0 {
                // reachable context where every consistent choice has weight zero
                return Err(Error::ContradictorySources);
            }
            p *= level_rho(mask, tau) / k;
            reliable = next;
            if p == 0.0 {
                break;
            }
        }
        *w = p;
    }
    Ok(weights)
}
