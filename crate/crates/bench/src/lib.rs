//! Workloads shared by the benchmarks.

use evident_core::{parse_kb, DefaultTheory, EvidenceModel, KnowledgeBase, ModelKind};

/// `m / chain_len` disjoint chains `cK_0 -> cK_1 -> ...`, each rooted in a fact.
pub fn chains_kb(m: usize, chain_len: usize) -> String {
    let mut kb = String::new();
    for c in 0..m.div_ceil(chain_len) {
        kb.push_str(&format!("fact c{c}_0.\n"));
        for i in 1..=chain_len.min(m - c * chain_len) {
            kb.push_str(&format!("rule r{c}_{i}: if c{c}_{} then c{c}_{i} weight 0.9 nocontra.\n", i - 1));
        }
    }
    kb
}

/// `n` Nixon-style conflicts: `q_k : p_k` against `r_k : !p_k`.
pub fn conflicts_kb(n: usize) -> String {
    let mut kb = String::new();
    for k in 0..n {
        kb.push_str(&format!(
            "fact q{k}. fact r{k}.\n\
             rule a{k}: if q{k} then p{k} weight 0.9 nocontra.\n\
             rule b{k}: if r{k} then !p{k} weight 0.8 nocontra.\n\
             default d{k}: q{k} : p{k} / p{k}.\n\
             default e{k}: r{k} : !p{k} / !p{k}.\n"
        ));
    }
    kb
}

pub fn parsed(text: &str) -> KnowledgeBase {
    parse_kb(text).expect("workload knowledge bases parse")
}

pub fn ds_model(text: &str) -> EvidenceModel {
    parsed(text).evidence_model(ModelKind::Ds).expect("workload models are valid")
}

pub fn default_theory(text: &str) -> DefaultTheory {
    parsed(text).default_theory().expect("workload theories are valid")
}
