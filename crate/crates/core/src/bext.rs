//! B-extensions: the theories whose belief tends to 1 as source reliabilities
//! tend to 1, computed as the maximal consistent `K_σ`.
//!
//! Defaults enter the source framework through fresh atoms `__q<i>`: default
//! `i` contributes the rules `a_i / q_i`, `q_i / c_i` and `!b_i / !q_i`, so a
//! refuted justification makes `K′_σ` inconsistent whenever the default fires.

use crate::defaults::{DefaultRule, DefaultTheory, Extension};
use crate::error::{Error, Result};
use crate::index::SigmaIndex;
use crate::logic::{Atom, Formula, InferenceRule, TheoryBase};
use crate::sources::{bel_exact, k_sigma, EvidenceModel, ProbabilityModel, SigmaTable, SigmaTheory, Source};

/// Reliability given to encoded defaults; only consistency matters for B-extensions.
const ENCODED_ALPHA: f64 = 0.5;

fn check_unreserved<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> Result<()> {
    for f in formulas {
        if let Some(atom) = f.mentions_reserved() {
            return Err(Error::ReservedAtom(atom.name().to_owned()));
        }
    }
    Ok(())
}

/// A default theory rewritten as sources over the language extended by `__q<i>`.
#[derive(Clone, Debug)]
pub struct DefaultEncoding {
    theory: DefaultTheory,
    model: EvidenceModel,
}

impl DefaultEncoding {
    pub fn new(theory: &DefaultTheory) -> Result<Self> {
        check_unreserved(theory.facts())?;
        for d in theory.defaults() {
            check_unreserved([&d.prerequisite, &d.justification, &d.consequent])?;
        }
        let sources =
            theory.defaults().iter().map(|d| Source::new(d.id, ENCODED_ALPHA, encode_default(d).to_vec())).collect();
        let model = EvidenceModel::ds(theory.facts().to_vec(), sources)?;
        Ok(DefaultEncoding { theory: theory.clone(), model })
    }

    pub fn theory(&self) -> &DefaultTheory {
        &self.theory
    }

    /// The three rules of default `id`.
    pub fn rules(&self, id: usize) -> Option<&[InferenceRule]> {
        self.model.source(id).map(|s| s.rules.as_slice())
    }

    /// The encoded theory as a DS evidence model.
    pub fn evidence_model(&self) -> &EvidenceModel {
        &self.model
    }
}

/// `a / q`, `q / c`, `!b / !q` for the default's reserved atom `q`.
pub fn encode_default(d: &DefaultRule) -> [InferenceRule; 3] {
    let q = Formula::Var(Atom::q(d.id));
    [
        InferenceRule::new(d.prerequisite.clone(), q.clone()),
        InferenceRule::new(q.clone(), d.consequent.clone()),
        InferenceRule::new(d.justification.negate(), Formula::not(q)),
    ]
}

/// `K′_σ = Th^{J_σ}(W)` in the extended language.
pub fn k_prime_sigma(enc: &DefaultEncoding, sigma: SigmaIndex) -> TheoryBase {
    k_sigma(&enc.model, sigma)
}

/// Membership of a q-free formula in `K′_σ ∩ L`.
pub fn k_sigma_restricted(enc: &DefaultEncoding, sigma: SigmaIndex, d: &Formula) -> Result<bool> {
    check_unreserved([d])?;
    Ok(k_prime_sigma(enc, sigma).entails(d))
}

/// `K′_σ ∩ L` as an extension: the base formulas free of reserved atoms, and the
/// defaults whose `q_i` was derived.
fn restrict(theory: &SigmaTheory) -> Extension {
    let mut fired = SigmaIndex::EMPTY;
    let mut base = TheoryBase::default();
    for f in theory.base.formulas() {
        match f {
            Formula::Var(a) if a.is_reserved() => {
                let id = a.name()[crate::logic::RESERVED_PREFIX.len()..].parse().expect("reserved atoms are __q<id>");
                fired = fired.with(id);
            }
            _ if f.mentions_reserved().is_some() => {}
            _ => base.insert(f.clone()),
        }
    }
    Extension { fired, base }
}

fn unrestricted(theory: &SigmaTheory) -> Extension {
    Extension { fired: theory.fired, base: theory.base.clone() }
}

/// B-extensions under theory-level maximality, plus the σ-level reading for comparison.
#[derive(Clone, Debug)]
pub struct BExtensions {
    /// Theory-maximal consistent `K_σ`, deduplicated, by smallest `σ`.
    pub extensions: Vec<Extension>,
    /// `K_σ` for the `σ` that are maximal (as sets) with `K_σ` consistent.
    pub sigma_maximal: Vec<Extension>,
}

impl BExtensions {
    /// Whether both readings of "σ maximal" give the same theories.
    pub fn agree(&self) -> bool {
        same_theories(&self.extensions, &self.sigma_maximal)
    }
}

pub(crate) fn same_theories(a: &[Extension], b: &[Extension]) -> bool {
    let covered = |xs: &[Extension], ys: &[Extension]| xs.iter().all(|x| ys.iter().any(|y| x.base.theory_eq(&y.base)));
    covered(a, b) && covered(b, a)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Maximality {
    Theory,
    Sigma,
}

fn dedup(exts: Vec<Extension>) -> Vec<Extension> {
    let mut out: Vec<Extension> = Vec::new();
    for e in exts {
        if !out.iter().any(|o| o.base.theory_eq(&e.base)) {
            out.push(e);
        }
    }
    out
}

/// Lexicographic maximisation over priority levels; a single level is the
/// plain maximal-consistent-`σ` characterisation.
fn maximal(
    table: &SigmaTable,
    levels: &[SigmaIndex],
    project: &dyn Fn(&SigmaTheory) -> Extension,
    mode: Maximality,
) -> Vec<Extension> {
    let mut states = vec![SigmaIndex::EMPTY];
    for &mask in levels {
        let mut next = Vec::new();
        for &reliable in &states {
            let options: Vec<(SigmaIndex, Extension)> =
                mask.subsets().filter_map(|tau| table.get(reliable.union(tau)).map(|t| (tau, project(t)))).collect();
            for (tau, ext) in &options {
                let dominated = options.iter().any(|(other, o)| match mode {
                    Maximality::Sigma => other != tau && tau.is_subset(*other),
                    Maximality::Theory => ext.base.is_subtheory_of(&o.base) && !o.base.is_subtheory_of(&ext.base),
                });
                if !dominated {
                    next.push(reliable.union(*tau));
                }
            }
        }
        next.sort();
        next.dedup();
        states = next;
    }
    dedup(states.into_iter().filter_map(|s| table.get(s).map(project)).collect())
}

fn level_masks(model: &EvidenceModel) -> Vec<SigmaIndex> {
    match model.probability() {
        ProbabilityModel::Ds => vec![SigmaIndex::full(model.m())],
        ProbabilityModel::Prioritized { levels } => {
            levels.iter().map(|l| SigmaIndex::from_ids(l.iter().copied())).collect()
        }
    }
}

fn b_extensions_with(model: &EvidenceModel, project: &dyn Fn(&SigmaTheory) -> Extension) -> Result<BExtensions> {
    let table = SigmaTable::build(model)?;
    let levels = level_masks(model);
    Ok(BExtensions {
        extensions: maximal(&table, &levels, project, Maximality::Theory),
        sigma_maximal: maximal(&table, &levels, project, Maximality::Sigma),
    })
}

/// B-extensions of a source model: the theory-maximal consistent `K_σ`.
/// Under a prioritized model maximality is taken level by level.
pub fn b_extensions_sources(model: &EvidenceModel) -> Result<BExtensions> {
    b_extensions_with(model, &unrestricted)
}

/// B-extensions of a default theory through the q-atom encoding.
pub fn b_extensions_defaults(theory: &DefaultTheory) -> Result<BExtensions> {
    let enc = DefaultEncoding::new(theory)?;
    b_extensions_with(&enc.model, &restrict)
}

/// The normal-theory route: defaults as the plain inference rules `a_i / c_i`.
pub fn b_extensions_direct(theory: &DefaultTheory) -> Result<BExtensions> {
    let sources =
        theory.defaults().iter().map(|d| Source::new(d.id, ENCODED_ALPHA, vec![d.inference_rule()])).collect();
    b_extensions_sources(&EvidenceModel::ds(theory.facts().to_vec(), sources)?)
}

/// Facts, default rules and numeric sources together.
#[derive(Clone, Debug)]
pub struct CombinedModel {
    pub facts: Vec<Formula>,
    pub defaults: Vec<DefaultRule>,
    pub numeric: Vec<Source>,
}

/// `Bel(d)` in every B-extension of the defaults, with min, max and mean.
#[derive(Clone, Debug, PartialEq)]
pub struct CombinedBelief {
    pub lower: f64,
    pub upper: f64,
    /// Unweighted mean over the extensions.
    pub average: f64,
    pub per_extension: Vec<f64>,
}

/// Builds the B-extensions of the defaults, then evaluates the numeric sources
/// (DS model) on top of each extension's base.
pub fn combined_belief(model: &CombinedModel, d: &Formula) -> Result<CombinedBelief> {
    let theory = DefaultTheory::new(model.defaults.clone(), model.facts.clone())?;
    let extensions = b_extensions_defaults(&theory)?.extensions;
    if extensions.is_empty() {
        return Err(Error::ContradictorySources);
    }
    let per_extension = extensions
        .iter()
        .map(|e| bel_exact(&EvidenceModel::ds(e.base.formulas().to_vec(), model.numeric.clone())?, d))
        .collect::<Result<Vec<f64>>>()?;
    let lower = per_extension.iter().copied().fold(f64::INFINITY, f64::min);
    let upper = per_extension.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let average = per_extension.iter().sum::<f64>() / per_extension.len() as f64;
    // the mean of values in [lower, upper] can round just outside it
    let average = average.clamp(lower, upper);
    Ok(CombinedBelief { lower, upper, average, per_extension })
}

/// `BEL_*(d)`: the smallest belief over the extensions.
pub fn bel_star_lower(model: &CombinedModel, d: &Formula) -> Result<f64> {
    combined_belief(model, d).map(|b| b.lower)
}

/// `BEL^*(d)`: the largest belief over the extensions.
pub fn bel_star_upper(model: &CombinedModel, d: &Formula) -> Result<f64> {
    combined_belief(model, d).map(|b| b.upper)
}

pub fn bel_star_avg(model: &CombinedModel, d: &Formula) -> Result<f64> {
    combined_belief(model, d).map(|b| b.average)
}
