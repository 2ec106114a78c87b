//! Brute-force truth-table enumeration.
//!
//! Exponential in the number of atoms and kept deliberately naive: it is the
//! reference the DPLL solver is checked against.

use std::collections::BTreeSet;

use super::{evaluate, Atom, Formula, Valuation};

/// Upper bound on the atom count accepted by the enumeration.
pub const MAX_ATOMS: usize = 20;

fn atoms_of(formulas: &[Formula]) -> Vec<Atom> {
    let mut set = BTreeSet::new();
    for f in formulas {
        f.collect_atoms(&mut set);
    }
    set.into_iter().collect()
}

/// Calls `visit` on each valuation over `atoms`; stops early when it returns true.
pub fn any_valuation(atoms: &[Atom], mut visit: impl FnMut(&Valuation) -> bool) -> bool {
    assert!(atoms.len() <= MAX_ATOMS, "truth table over {} atoms", atoms.len());
    for bits in 0u32..(1u32 << atoms.len()) {
        let v: Valuation = atoms.iter().enumerate().map(|(i, a)| (a.clone(), bits >> i & 1 == 1)).collect();
        if visit(&v) {
            return true;
        }
    }
    false
}

pub fn satisfiable(gamma: &[Formula]) -> bool {
    let atoms = atoms_of(gamma);
    any_valuation(&atoms, |v| gamma.iter().all(|f| evaluate(f, v).expect("valuation covers atoms")))
}

pub fn entails(gamma: &[Formula], d: &Formula) -> bool {
    let mut all = gamma.to_vec();
    all.push(d.clone());
    let atoms = atoms_of(&all);
    !any_valuation(&atoms, |v| gamma.iter().all(|f| evaluate(f, v).unwrap()) && !evaluate(d, v).unwrap())
}
