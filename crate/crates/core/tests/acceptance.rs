//! End-to-end acceptance checks. Runs without the libtest harness so that
//! every criterion prints exactly one line; exits non-zero if a blocking
//! criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use evident_core::{
    b_extensions_defaults, b_extensions_direct, b_extensions_sources, bel_exact, bel_mc, combined_belief, is_normal,
    m_extensions, parse_formula, parse_kb, reiter_extensions, DefaultRule, DefaultTheory, EvidenceModel, ExactBelief,
    Extension, Formula, McConfig, ModelKind, Source,
};
use rand::Rng;

const EXACT_TOL: f64 = 1e-9;
const NIXON_BUDGET: Duration = Duration::from_secs(1);
const DEMPSTER_BUDGET: Duration = Duration::from_secs(30);
const MC_BUDGET: Duration = Duration::from_secs(5);
const MC_TOL: f64 = 0.01;
const MC_TRIALS: u64 = 100_000;
const MC_SEEDS: [u64; 3] = [11, 2024, 987_654_321];
const EXTENSION_BUDGET: Duration = Duration::from_secs(60);
const SCALING_TRIALS: u64 = 10_000;
const SCALING_RATIO: f64 = 3.0;

const NIXON_KB: &str = "
fact quaker.
fact republican.
rule r1: if quaker then pacifist weight 0.9 nocontra.
rule r2: if republican then !pacifist weight 0.8 nocontra.
";

const NIXON_DEFAULTS_KB: &str = "
fact quaker.
fact republican.
default d1: quaker : pacifist / pacifist.
default d2: republican : !pacifist / !pacifist.
";

/// Name, whether failure blocks the run, and the check itself.
type Criterion = (&'static str, bool, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn f(text: &str) -> Formula {
    parse_formula(text).unwrap()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= EXACT_TOL
}

fn same(a: &[Extension], b: &[Extension]) -> bool {
    let covered = |xs: &[Extension], ys: &[Extension]| xs.iter().all(|x| ys.iter().any(|y| x.base.theory_eq(&y.base)));
    covered(a, b) && covered(b, a)
}

fn nixon_exact() -> Outcome {
    let start = Instant::now();
    let model = parse_kb(NIXON_KB).unwrap().evidence_model(ModelKind::Ds).unwrap();
    let (a1, a2) = (0.9, 0.8);
    let want_p = a1 * (1.0 - a2) / (1.0 - a1 * a2);
    let want_n = (1.0 - a1) * a2 / (1.0 - a1 * a2);
    let p = bel_exact(&model, &f("pacifist")).unwrap();
    let n = bel_exact(&model, &f("!pacifist")).unwrap();
    let took = start.elapsed();
    outcome(
        close(p, want_p) && close(n, want_n) && close(p, 9.0 / 14.0) && close(n, 2.0 / 7.0) && took < NIXON_BUDGET,
        format!("Bel(pacifist)={p:.12} Bel(!pacifist)={n:.12} in {took:?}"),
    )
}

fn reasoning_by_cases() -> Outcome {
    let kb = "rule r1: if a then c weight 0.9 contra.\nrule r2: if !a then c weight 0.8 contra.";
    let bel = bel_exact(&parse_kb(kb).unwrap().evidence_model(ModelKind::Ds).unwrap(), &f("c")).unwrap();
    outcome(close(bel, 0.72) && bel < 0.8, format!("Bel(c)={bel:.12}, min alpha=0.8"))
}

fn chaining() -> Outcome {
    let kb = "fact a.\nrule r1: if a then b weight 0.9.\nrule r2: if b then c weight 0.8.";
    let bel = bel_exact(&parse_kb(kb).unwrap().evidence_model(ModelKind::Ds).unwrap(), &f("c")).unwrap();
    outcome(close(bel, 0.72), format!("Bel(c)={bel:.12}"))
}

fn penguin_priority() -> Outcome {
    let kb = "fact penguin.\nfact bird.\n\
              rule r1: if penguin then !flies weight 0.9 nocontra priority 0.\n\
              rule r2: if bird then flies weight 0.8 nocontra priority 1.";
    let model = parse_kb(kb).unwrap().evidence_model(ModelKind::Priority).unwrap();
    let exact = ExactBelief::new(&model).unwrap();
    let (not_flies, flies) = (exact.bel(&f("!flies")), exact.bel(&f("flies")));
    let ext = b_extensions_sources(&model).unwrap().extensions;
    let one = ext.len() == 1 && ext[0].base.entails(&f("!flies"));
    outcome(
        close(not_flies, 0.9) && close(flies, 0.08) && one,
        format!("Bel(!flies)={not_flies:.12} Bel(flies)={flies:.12} b-extensions={}", ext.len()),
    )
}

fn dempster_oracle() -> Outcome {
    let start = Instant::now();
    let mut r = rng(0xD5);
    let (mut checked, mut worst, mut skipped) = (0, 0.0f64, 0);
    for _ in 0..100 {
        let atoms = r.random_range(1..=4);
        let m = r.random_range(1..=6);
        let supports: Vec<(f64, Formula)> =
            (0..m).map(|_| (r.random_range(0.05..0.95), random_formula(&mut r, atoms, 2))).collect();
        let sources = supports
            .iter()
            .enumerate()
            .map(|(i, (a, p))| Source::inference(i + 1, *a, Formula::Top, p.clone()))
            .collect();
        let queries: Vec<Formula> = (0..20).map(|_| random_formula(&mut r, atoms, 2)).collect();
        let Ok(exact) = ExactBelief::new(&EvidenceModel::ds(vec![], sources).unwrap()) else {
            // total conflict: the oracle must agree that nothing survives
            if dempster_belief(&supports, &Formula::Top, atoms).is_some() {
                return outcome(false, "framework reported total conflict, oracle did not");
            }
            skipped += 1;
            continue;
        };
        for q in &queries {
            let Some(oracle) = dempster_belief(&supports, q, atoms) else {
                return outcome(false, "oracle reported total conflict, framework did not");
            };
            worst = worst.max((exact.bel(q) - oracle).abs());
            checked += 1;
        }
    }
    let took = start.elapsed();
    outcome(
        worst <= EXACT_TOL && took < DEMPSTER_BUDGET,
        format!("{checked} queries, {skipped} fully conflicting models, max |diff|={worst:.2e} in {took:?}"),
    )
}

fn monte_carlo() -> Outcome {
    let model = parse_kb(NIXON_KB).unwrap().evidence_model(ModelKind::Ds).unwrap();
    let target = 9.0 / 14.0;
    let start = Instant::now();
    let mut within = true;
    let mut covered = 0;
    let mut parts = Vec::new();
    for seed in MC_SEEDS {
        let est = bel_mc(&model, &f("pacifist"), &McConfig::new(MC_TRIALS, seed)).unwrap();
        within &= (est.estimate - target).abs() <= MC_TOL;
        covered += usize::from(est.ci_low <= target && target <= est.ci_high);
        parts.push(format!("{:.4}", est.estimate));
    }
    let took = start.elapsed();
    outcome(
        within && covered >= 2 && took < MC_BUDGET,
        format!("estimates [{}], CI covers on {covered}/3 seeds, {took:?}", parts.join(", ")),
    )
}

fn extension_properties() -> Outcome {
    let start = Instant::now();
    let mut r = rng(0x7E0);
    let mut failures = Vec::new();
    for i in 0..200 {
        let t = random_consistent_theory(&mut r, 5, 6, false);
        let m = m_extensions(&t).unwrap();
        let reiter = reiter_extensions(&t).unwrap();
        if m.is_empty() {
            failures.push(format!("m-extensions empty #{i}"));
        }
        if !reiter.iter().all(|e| m.iter().any(|x| x.base.theory_eq(&e.base))) {
            failures.push(format!("reiter not among m-extensions #{i}"));
        }
        if !same(&b_extensions_defaults(&t).unwrap().extensions, &m) {
            failures.push(format!("b-extensions differ from m-extensions #{i}"));
        }
    }
    for i in 0..100 {
        let t = random_consistent_theory(&mut r, 5, 6, true);
        let m = m_extensions(&t).unwrap();
        let ok = is_normal(&t)
            && same(&m, &reiter_extensions(&t).unwrap())
            && same(&m, &b_extensions_direct(&t).unwrap().extensions)
            && same(&m, &b_extensions_defaults(&t).unwrap().extensions);
        if !ok {
            failures.push(format!("normal routes disagree #{i}"));
        }
    }
    for i in 0..100 {
        let larger = random_consistent_theory(&mut r, 5, 6, false);
        let keep = r.random_range(0..larger.m());
        let smaller = DefaultTheory::new(larger.defaults()[..keep].to_vec(), larger.facts().to_vec()).unwrap();
        let big = m_extensions(&larger).unwrap();
        let embeds =
            m_extensions(&smaller).unwrap().iter().all(|e| big.iter().any(|l| e.base.is_subtheory_of(&l.base)));
        if !embeds {
            failures.push(format!("semi-monotonicity #{i}"));
        }
    }
    let took = start.elapsed();
    outcome(
        failures.is_empty() && took < EXTENSION_BUDGET,
        format!("200 + 100 normal + 100 pairs, failures {failures:?}, {took:?}"),
    )
}

fn orphan() -> Outcome {
    let b = Formula::var("b");
    let t = DefaultTheory::new(vec![DefaultRule::new(1, Formula::Top, b.clone(), Formula::not(b))], vec![]).unwrap();
    let reiter = reiter_extensions(&t).unwrap();
    let m = m_extensions(&t).unwrap();
    let bx = b_extensions_defaults(&t).unwrap();
    let empty = evident_core::TheoryBase::default();
    let ok = reiter.is_empty() && m.len() == 1 && m[0].base.theory_eq(&empty) && same(&bx.extensions, &m);
    outcome(ok, format!("reiter={} m={} b={}", reiter.len(), m.len(), bx.extensions.len()))
}

fn combined() -> Outcome {
    let mut model = parse_kb(NIXON_DEFAULTS_KB).unwrap().combined_model();
    model.numeric.push(Source::material(1, 0.9, f("pacifist"), f("dove")));
    let c = combined_belief(&model, &f("dove")).unwrap();
    outcome(
        close(c.lower, 0.0) && close(c.upper, 0.9) && close(c.average, 0.45),
        format!("BEL_*={:.12} BEL^*={:.12} avg={:.12}", c.lower, c.upper, c.average),
    )
}

const CHAIN_LEN: usize = 5;

/// `m / CHAIN_LEN` disjoint chains `cK_0 -> cK_1 -> ... -> cK_5`, each rooted in a fact.
fn chains_kb(m: usize) -> String {
    let mut kb = String::new();
    for c in 0..m / CHAIN_LEN {
        kb.push_str(&format!("fact c{c}_0.\n"));
        for i in 1..=CHAIN_LEN {
            kb.push_str(&format!("rule r{c}_{i}: if c{c}_{} then c{c}_{i} weight 0.9 nocontra.\n", i - 1));
        }
    }
    kb
}

fn scaling() -> Outcome {
    let time = |m: usize| {
        let model = parse_kb(&chains_kb(m)).unwrap().evidence_model(ModelKind::Ds).unwrap();
        let goal = f(&format!("c0_{CHAIN_LEN}"));
        let start = Instant::now();
        bel_mc(&model, &goal, &McConfig::new(SCALING_TRIALS, 1)).unwrap();
        start.elapsed()
    };
    let (t10, t20) = (time(10), time(20));
    let ratio = t20.as_secs_f64() / t10.as_secs_f64();
    outcome(ratio <= SCALING_RATIO, format!("m=10 {t10:?}, m=20 {t20:?}, ratio {ratio:.2}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 nixon exact belief", true, nixon_exact),
        ("2 reasoning by cases", true, reasoning_by_cases),
        ("3 chaining", true, chaining),
        ("4 priority penguin", true, penguin_priority),
        ("5 dempster oracle", true, dempster_oracle),
        ("6 monte-carlo convergence", true, monte_carlo),
        ("7 extension properties", true, extension_properties),
        ("8 orphan extension", true, orphan),
        ("9 combined measures", true, combined),
        ("10 scaling (informational)", false, scaling),
    ];
    let mut failed = 0;
    for (name, blocking, run) in criteria {
        let Outcome { pass, detail } = run();
        let tag = match (pass, blocking) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "WARN",
        };
        println!("{tag} {name}: {detail}");
        failed += usize::from(!pass && blocking);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} blocking criteria failed");
        ExitCode::FAILURE
    }
}
