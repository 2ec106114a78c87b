//! Tseitin translation to CNF and a DPLL solver with unit propagation.

use std::collections::HashMap;

use super::{Atom, Formula};

type Lit = i32;

#[inline]
fn var_of(l: Lit) -> usize {
    l.unsigned_abs() as usize
}

enum Enc {
    Const(bool),
    Lit(Lit),
}

impl Enc {
    fn flip(self) -> Enc {
        match self {
            Enc::Const(v) => Enc::Const(!v),
            Enc::Lit(l) => Enc::Lit(-l),
        }
    }
}

/// An incremental satisfiability context over a growing set of formulas.
///
/// Asserted formulas are Tseitin-encoded once; assignments forced at the top
/// level survive between queries, so a query only pays for the clauses its
/// assumption actually reaches.
#[derive(Default)]
pub(crate) struct Session {
    atoms: HashMap<Atom, Lit>,
    solver: Solver,
}

impl Session {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn with<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> Self {
        let mut s = Session::new();
        for f in formulas {
            s.assert(f);
        }
        s
    }

    pub(crate) fn assert(&mut self, f: &Formula) {
        match f {
            Formula::And(a, b) => {
                self.assert(a);
                self.assert(b);
            }
            Formula::Not(inner) if matches!(**inner, Formula::Not(_)) => {
                if let Formula::Not(g) = &**inner {
                    self.assert(g);
                }
            }
            _ => {
                let mut clause = Vec::new();
                if !self.collect_disjuncts(f, &mut clause) {
                    self.solver.add_clause(clause);
                }
            }
        }
    }

    pub(crate) fn is_consistent(&mut self) -> bool {
        self.solver.solve_under(None)
    }

    pub(crate) fn entails(&mut self, d: &Formula) -> bool {
        if matches!(d, Formula::Top) || self.solver.unsat {
            return true;
        }
        match self.encode(d) {
            Enc::Const(true) => true,
            Enc::Const(false) => !self.is_consistent(),
            Enc::Lit(l) => !self.solver.solve_under(Some(-l)),
        }
    }

    fn atom(&mut self, a: &Atom) -> Lit {
        if let Some(&l) = self.atoms.get(a) {
            return l;
        }
        let l = self.solver.new_var();
        self.atoms.insert(a.clone(), l);
        l
    }

    fn encode(&mut self, f: &Formula) -> Enc {
        match f {
            Formula::Top => Enc::Const(true),
            Formula::Bottom => Enc::Const(false),
            Formula::Var(a) => Enc::Lit(self.atom(a)),
            Formula::Not(inner) => self.encode(inner).flip(),
            Formula::And(a, b) => {
                let (ea, eb) = (self.encode(a), self.encode(b));
                self.gate(ea, eb, true)
            }
            Formula::Or(a, b) => {
                let (ea, eb) = (self.encode(a), self.encode(b));
                self.gate(ea, eb, false)
            }
            Formula::Implies(a, b) => {
                let (ea, eb) = (self.encode(a).flip(), self.encode(b));
                self.gate(ea, eb, false)
            }
        }
    }

    /// Conjunction (`is_and`) or disjunction of two encoded operands.
    fn gate(&mut self, a: Enc, b: Enc, is_and: bool) -> Enc {
        // An Or gate is the De Morgan dual of an And gate.
        let (a, b) = if is_and { (a, b) } else { (a.flip(), b.flip()) };
        let out = match (a, b) {
            (Enc::Const(false), _) | (_, Enc::Const(false)) => Enc::Const(false),
            (Enc::Const(true), other) | (other, Enc::Const(true)) => other,
            (Enc::Lit(x), Enc::Lit(y)) => {
                if x == y {
                    Enc::Lit(x)
                } else if x == -y {
                    Enc::Const(false)
                } else {
                    let g = self.solver.new_var();
                    self.solver.add_clause(vec![-g, x]);
                    self.solver.add_clause(vec![-g, y]);
                    self.solver.add_clause(vec![g, -x, -y]);
                    Enc::Lit(g)
                }
            }
        };
        if is_and {
            out
        } else {
            out.flip()
        }
    }

    /// Flattens a top-level disjunction into `clause`; true when it is valid.
    fn collect_disjuncts(&mut self, f: &Formula, clause: &mut Vec<Lit>) -> bool {
        match f {
            Formula::Or(a, b) => self.collect_disjuncts(a, clause) || self.collect_disjuncts(b, clause),
            Formula::Implies(a, b) => {
                let na = Formula::not((**a).clone());
                self.collect_disjuncts(&na, clause) || self.collect_disjuncts(b, clause)
            }
            _ => match self.encode(f) {
                Enc::Const(true) => true,
                Enc::Const(false) => false,
                Enc::Lit(l) => {
                    if clause.contains(&-l) {
                        return true;
                    }
                    if !clause.contains(&l) {
                        clause.push(l);
                    }
                    false
                }
            },
        }
    }
}

#[inline]
fn code(l: Lit) -> usize {
    2 * var_of(l) + usize::from(l < 0)
}

/// DPLL with two watched literals. Assignments made with no decision open are
/// permanent; every query backtracks to that level before returning.
#[derive(Default)]
struct Solver {
    clauses: Vec<Vec<Lit>>,
    /// Clauses watching a literal, indexed by [`code`]; the watched literals
    /// of a clause are its first two.
    watches: Vec<Vec<usize>>,
    /// 0 unassigned, 1 true, -1 false; indexed by variable.
    values: Vec<i8>,
    trail: Vec<Lit>,
    queue_head: usize,
    num_vars: usize,
    /// Set once the permanent assignments are contradictory.
    unsat: bool,
}

impl Solver {
    fn new_var(&mut self) -> Lit {
        self.num_vars += 1;
        let n = self.num_vars + 1;
        self.values.resize(n, 0);
        self.watches.resize_with(2 * n, Vec::new);
        self.num_vars as Lit
    }

    #[inline]
    fn value(&self, l: Lit) -> i8 {
        let v = self.values[var_of(l)];
        if l > 0 {
            v
        } else {
            -v
        }
    }

    fn assign(&mut self, l: Lit) {
        self.values[var_of(l)] = if l > 0 { 1 } else { -1 };
        self.trail.push(l);
    }

    fn backtrack(&mut self, mark: usize) {
        for l in self.trail.drain(mark..) {
            self.values[var_of(l)] = 0;
        }
        self.queue_head = self.queue_head.min(mark);
    }

    /// Adds a clause while no decision is open.
    fn add_clause(&mut self, mut lits: Vec<Lit>) {
        if self.unsat {
            return;
        }
        lits.sort_unstable();
        lits.dedup();
        if lits.iter().any(|&l| self.value(l) == 1 || lits.binary_search(&-l).is_ok()) {
            return;
        }
        lits.retain(|&l| self.value(l) == 0);
        match lits.len() {
            0 => self.unsat = true,
            1 => {
                self.assign(lits[0]);
                if !self.propagate() {
                    self.unsat = true;
                }
            }
            _ => {
                let ci = self.clauses.len();
                self.watches[code(lits[0])].push(ci);
                self.watches[code(lits[1])].push(ci);
                self.clauses.push(lits);
            }
        }
    }

    /// Unit propagation of every queued assignment; false on conflict.
    fn propagate(&mut self) -> bool {
        while self.queue_head < self.trail.len() {
            let falsified = -self.trail[self.queue_head];
            self.queue_head += 1;
            let mut watching = std::mem::take(&mut self.watches[code(falsified)]);
            let mut keep = 0;
            let mut ok = true;
            let mut i = 0;
            while i < watching.len() {
                let ci = watching[i];
                i += 1;
                let clause = &mut self.clauses[ci];
                if clause[0] == falsified {
                    clause.swap(0, 1);
                }
                let other = clause[0];
                let replacement = (2..clause.len()).find(|&k| {
                    let l = clause[k];
                    let v = self.values[var_of(l)];
                    (if l > 0 { v } else { -v }) != -1
                });
                if let Some(k) = replacement {
                    clause.swap(1, k);
                    let new_watch = clause[1];
                    self.watches[code(new_watch)].push(ci);
                    continue;
                }
                watching[keep] = ci;
                keep += 1;
                match self.value(other) {
                    1 => {}
                    0 => self.assign(other),
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            // on conflict, the unvisited tail still watches `falsified`
            while i < watching.len() {
                watching[keep] = watching[i];
                keep += 1;
                i += 1;
            }
            watching.truncate(keep);
            self.watches[code(falsified)] = watching;
            if !ok {
                return false;
            }
        }
        true
    }

    fn pick_branch(&self) -> Option<Lit> {
        self.clauses
            .iter()
            .filter(|c| c.iter().all(|&l| self.value(l) != 1))
            .find_map(|c| c.iter().copied().find(|&l| self.value(l) == 0))
    }

    fn search(&mut self) -> bool {
        if !self.propagate() {
            return false;
        }
        let Some(lit) = self.pick_branch() else {
            return true;
        };
        let mark = self.trail.len();
        for choice in [lit, -lit] {
            self.assign(choice);
            if self.search() {
                return true;
            }
            self.backtrack(mark);
        }
        false
    }

    /// Satisfiability of the clauses plus an optional assumed literal.
    fn solve_under(&mut self, assumption: Option<Lit>) -> bool {
        if self.unsat {
            return false;
        }
        let mark = self.trail.len();
        let sat = match assumption.map(|l| (l, self.value(l))) {
            Some((_, -1)) => false,
            Some((l, 0)) => {
                self.assign(l);
                self.search()
            }
            _ => self.search(),
        };
        self.backtrack(mark);
        sat
    }
}

pub(super) fn satisfiable<'a>(formulas: impl Iterator<Item = &'a Formula>) -> bool {
    Session::with(formulas).is_consistent()
}
