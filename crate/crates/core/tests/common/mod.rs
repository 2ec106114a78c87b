#![allow(dead_code)]

use std::collections::HashMap;

use evident_core::{DefaultRule, DefaultTheory, Formula, Source};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn v(name: &str) -> Formula {
    Formula::var(name)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn atom_name(i: usize) -> String {
    format!("p{i}")
}

/// Random formula of at most `depth` connectives over `p0..p{atoms-1}`.
pub fn random_formula<R: Rng>(rng: &mut R, atoms: usize, depth: usize) -> Formula {
    if depth == 0 || rng.random_bool(0.3) {
        return match rng.random_range(0..12) {
            0 => Formula::Top,
            1 => Formula::Bottom,
            2..=4 => Formula::not(v(&atom_name(rng.random_range(0..atoms)))),
            _ => v(&atom_name(rng.random_range(0..atoms))),
        };
    }
    let a = random_formula(rng, atoms, depth - 1);
    match rng.random_range(0..4) {
        0 => Formula::not(a),
        1 => Formula::and(a, random_formula(rng, atoms, depth - 1)),
        2 => Formula::or(a, random_formula(rng, atoms, depth - 1)),
        _ => Formula::implies(a, random_formula(rng, atoms, depth - 1)),
    }
}

/// Prerequisites lean towards `true` and literals so that defaults actually fire.
fn random_prerequisite<R: Rng>(rng: &mut R, atoms: usize) -> Formula {
    match rng.random_range(0..4) {
        0 => Formula::Top,
        1 => random_formula(rng, atoms, 0),
        _ => random_formula(rng, atoms, 2),
    }
}

pub fn random_default<R: Rng>(rng: &mut R, id: usize, atoms: usize, normal: bool) -> DefaultRule {
    let a = random_prerequisite(rng, atoms);
    let c = random_formula(rng, atoms, 2);
    if normal {
        DefaultRule::normal(id, a, c)
    } else {
        DefaultRule::new(id, a, random_formula(rng, atoms, 2), c)
    }
}

pub fn random_facts<R: Rng>(rng: &mut R, atoms: usize) -> Vec<Formula> {
    (0..rng.random_range(0..=2)).map(|_| random_formula(rng, atoms, 2)).collect()
}

/// A random theory with `1..=max_m` defaults over `2..=max_atoms` atoms.
pub fn random_theory<R: Rng>(rng: &mut R, max_m: usize, max_atoms: usize, normal: bool) -> DefaultTheory {
    let atoms = rng.random_range(2..=max_atoms);
    let m = rng.random_range(1..=max_m);
    let defaults = (1..=m).map(|id| random_default(rng, id, atoms, normal)).collect();
    DefaultTheory::new(defaults, random_facts(rng, atoms)).unwrap()
}

/// Like [`random_theory`], redrawing the facts until they are satisfiable.
pub fn random_consistent_theory<R: Rng>(rng: &mut R, max_m: usize, max_atoms: usize, normal: bool) -> DefaultTheory {
    let t = random_theory(rng, max_m, max_atoms, normal);
    let atoms = 1 + t
        .defaults()
        .iter()
        .flat_map(|d| [&d.prerequisite, &d.justification, &d.consequent])
        .chain(t.facts())
        .flat_map(|f| f.atoms())
        .map(|a| a.name()[1..].parse::<usize>().unwrap())
        .max()
        .unwrap_or(0);
    let mut facts = t.facts().to_vec();
    while !(0..1u32 << atoms).any(|w| facts.iter().all(|f| holds(f, w))) {
        facts = random_facts(rng, atoms);
    }
    DefaultTheory::new(t.defaults().to_vec(), facts).unwrap()
}

/// Random sources mixing material and one-way rules.
pub fn random_sources<R: Rng>(rng: &mut R, m: usize, atoms: usize) -> Vec<Source> {
    (1..=m)
        .map(|id| {
            let alpha = rng.random_range(0.05..0.95);
            let a = random_prerequisite(rng, atoms);
            let c = random_formula(rng, atoms, 2);
            if rng.random_bool(0.5) {
                Source::material(id, alpha, a, c)
            } else {
                Source::inference(id, alpha, a, c)
            }
        })
        .collect()
}

pub fn shuffled<T: Clone, R: Rng>(rng: &mut R, items: &[T]) -> Vec<T> {
    let mut out = items.to_vec();
    out.shuffle(rng);
    out
}

/// Truth value under the world `bits` (atom `p{i}` is bit `i`). Written
/// independently of the library's evaluator.
pub fn holds(f: &Formula, bits: u32) -> bool {
    match f {
        Formula::Top => true,
        Formula::Bottom => false,
        Formula::Var(a) => {
            let i: u32 = a.name()[1..].parse().expect("atoms are p<i>");
            bits >> i & 1 == 1
        }
        Formula::Not(g) => !holds(g, bits),
        Formula::And(a, b) => holds(a, bits) && holds(b, bits),
        Formula::Or(a, b) => holds(a, bits) || holds(b, bits),
        Formula::Implies(a, b) => !holds(a, bits) || holds(b, bits),
    }
}

/// The set of worlds (over `atoms` atoms) satisfying `f`, as a bitmask.
pub fn models(f: &Formula, atoms: usize) -> u64 {
    assert!(atoms <= 6);
    (0..1u32 << atoms).filter(|&w| holds(f, w)).fold(0u64, |acc, w| acc | 1 << w)
}

/// Brute-force truth-table entailment over `p0..p{atoms-1}`.
pub fn tt_entails(gamma: &[Formula], d: &Formula, atoms: usize) -> bool {
    (0..1u32 << atoms).all(|w| !gamma.iter().all(|g| holds(g, w)) || holds(d, w))
}

/// Dempster's rule over the frame of all worlds of `atoms` atoms, combining
/// simple support functions `(alpha_i on p_i, 1 - alpha_i on the frame)`.
/// Returns `None` under total conflict.
pub fn dempster_belief(supports: &[(f64, Formula)], query: &Formula, atoms: usize) -> Option<f64> {
    let frame: u64 = if atoms == 6 { u64::MAX } else { (1u64 << (1u32 << atoms)) - 1 };
    let mut mass: HashMap<u64, f64> = HashMap::from([(frame, 1.0)]);
    for (alpha, p) in supports {
        let focal = models(p, atoms);
        let mut next: HashMap<u64, f64> = HashMap::new();
        for (&set, &m) in &mass {
            *next.entry(set & focal).or_default() += m * alpha;
            *next.entry(set).or_default() += m * (1.0 - alpha);
        }
        mass = next;
    }
    let conflict = mass.remove(&0).unwrap_or(0.0);
    let k = 1.0 - conflict;
    if k <= 1e-15 {
        return None;
    }
    let target = models(query, atoms);
    Some(mass.iter().filter(|(&set, _)| set & !target == 0).map(|(_, &m)| m).sum::<f64>() / k)
}
