//! Propositional language and decision procedures.
//!
//! Formulas are plain trees over named atoms. Satisfiability goes through a
//! Tseitin translation to CNF and a small DPLL solver (see [`sat`]); the
//! [`truth_table`] module holds the brute-force enumeration used as a test
//! oracle.

pub(crate) mod sat;
mod theory;
pub mod truth_table;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub(crate) use theory::{saturate, saturate_in_session};
pub use theory::{th_closure, th_closure_traced, theory_equal, theory_subset, Closure, InferenceRule, TheoryBase};

/// Prefix reserved for the atoms introduced by the justification encoding.
pub const RESERVED_PREFIX: &str = "__q";

/// A propositional symbol.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(Arc<str>);

impl Atom {
    /// Builds an atom, checking the identifier syntax `[A-Za-z_][A-Za-z0-9_]*`.
    pub fn new(name: &str) -> Option<Atom> {
        if is_identifier(name) {
            Some(Atom(Arc::from(name)))
        } else {
            None
        }
    }

    /// The reserved atom `__q<index>` attached to default `index`.
    pub fn q(index: usize) -> Atom {
        Atom(Arc::from(format!("{RESERVED_PREFIX}{index}")))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn is_reserved(&self) -> bool {
        self.0.starts_with(RESERVED_PREFIX)
    }
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A propositional sentence.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Top,
    Bottom,
    Var(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    /// Variable for `name`.
    ///
    /// Panics if `name` is not an identifier; use [`Atom::new`] for
    /// untrusted input.
    pub fn var(name: &str) -> Formula {
        Formula::Var(Atom::new(name).unwrap_or_else(|| panic!("`{name}` is not a valid atom name")))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, c: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(c))
    }

    /// Negation that folds a leading `!` instead of stacking another one.
    pub fn negate(&self) -> Formula {
        match self {
            Formula::Not(inner) => (**inner).clone(),
            Formula::Top => Formula::Bottom,
            Formula::Bottom => Formula::Top,
            other => Formula::not(other.clone()),
        }
    }

    /// Conjunction of all `parts`, `Top` when empty.
    pub fn conjoin<I: IntoIterator<Item = Formula>>(parts: I) -> Formula {
        parts.into_iter().reduce(Formula::and).unwrap_or(Formula::Top)
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    pub(crate) fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Formula::Top | Formula::Bottom => {}
            Formula::Var(a) => {
                out.insert(a.clone());
            }
            Formula::Not(f) => f.collect_atoms(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    pub fn mentions_reserved(&self) -> Option<Atom> {
        self.atoms().into_iter().find(Atom::is_reserved)
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Bottom | Formula::Var(_) => 0,
            Formula::Not(f) => 1 + f.depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

/// Fully parenthesised rendering in the knowledge-base syntax.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Top => f.write_str("true"),
            Formula::Bottom => f.write_str("false"),
            Formula::Var(a) => write!(f, "{a}"),
            Formula::Not(inner) => write!(f, "!{inner}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A truth assignment over a finite set of atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Valuation {
    values: BTreeMap<Atom, bool>,
}

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, atom: Atom, value: bool) -> &mut Self {
        self.values.insert(atom, value);
        self
    }

    pub fn with(mut self, name: &str, value: bool) -> Self {
        self.set(Atom::new(name).expect("valid atom name"), value);
        self
    }

    pub fn get(&self, atom: &Atom) -> Option<bool> {
        self.values.get(atom).copied()
    }
}

impl FromIterator<(Atom, bool)> for Valuation {
    fn from_iter<T: IntoIterator<Item = (Atom, bool)>>(iter: T) -> Self {
        Valuation { values: iter.into_iter().collect() }
    }
}

/// Truth value of `f` under `v`; `a -> c` reads as `!a | c`.
pub fn evaluate(f: &Formula, v: &Valuation) -> Result<bool> {
    Ok(match f {
        Formula::Top => true,
        Formula::Bottom => false,
        Formula::Var(a) => v.get(a).ok_or_else(|| Error::MissingAtom(a.name().to_owned()))?,
        Formula::Not(inner) => !evaluate(inner, v)?,
        Formula::And(a, b) => evaluate(a, v)? && evaluate(b, v)?,
        Formula::Or(a, b) => evaluate(a, v)? || evaluate(b, v)?,
        Formula::Implies(a, b) => !evaluate(a, v)? || evaluate(b, v)?,
    })
}

/// Whether some valuation satisfies every formula of `gamma`.
pub fn satisfiable(gamma: &[Formula]) -> bool {
    sat::satisfiable(gamma.iter())
}

/// `gamma ⊨ d`, decided as unsatisfiability of `gamma ∪ {!d}`.
pub fn entails(gamma: &[Formula], d: &Formula) -> bool {
    if matches!(d, Formula::Top) || gamma.contains(d) {
        return true;
    }
    sat::Session::with(gamma).entails(d)
}

/// Semantic equivalence.
pub fn equivalent(a: &Formula, b: &Formula) -> bool {
    entails(std::slice::from_ref(a), b) && entails(std::slice::from_ref(b), a)
}
