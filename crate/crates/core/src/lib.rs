//! Belief functions over uncertain rules, and default logic as their limit.
//!
//! Each uncertain rule is a *source*: with probability `alpha` it is reliable
//! and adds an inference rule to the logic. Belief in a formula is the
//! probability of being in a situation where the formula is known. Sending
//! reliabilities to 1 yields B-extensions, which coincide with the
//! M-extensions of the corresponding default theory.
//!
//! - [`logic`]: propositional formulas, satisfiability, closure under inference rules.
//! - [`sources`]: evidence models, the DS and prioritized distributions, exact belief.
//! - [`montecarlo`]: sampled belief with confidence intervals.
//! - [`defaults`]: default theories, M-extensions and Reiter extensions.
//! - [`bext`]: B-extensions and the combined lower/upper/average belief.
//! - [`frontend`]: the knowledge-base text format.

pub mod bext;
pub mod defaults;
pub mod error;
pub mod frontend;
pub mod index;
pub mod logic;
pub mod montecarlo;
pub mod sources;

pub use bext::{
    b_extensions_defaults, b_extensions_direct, b_extensions_sources, bel_star_avg, bel_star_lower, bel_star_upper,
    combined_belief, BExtensions, CombinedBelief, CombinedModel, DefaultEncoding,
};
pub use defaults::{
    delta_consistent, is_normal, m_credulous, m_extensions, reiter_extensions, th_gamma, DefaultRule, DefaultSpace,
    DefaultTheory, Extension,
};
pub use error::{Error, Result};
pub use frontend::{parse_formula, parse_kb, KnowledgeBase, ModelKind, ParseError, ParseErrorKind};
pub use index::{GammaIndex, SigmaIndex};
pub use logic::{entails, evaluate, satisfiable, Atom, Formula, InferenceRule, TheoryBase, Valuation};
pub use montecarlo::{bel_mc, sample_sigma, McConfig, McEstimate};
pub use sources::{bel_exact, k_sigma, p_ds, p_prioritized, rho, EvidenceModel, ExactBelief, ProbabilityModel, Source};
