//! Monte-Carlo estimation of belief under the DS model.
//!
//! Each trial draws `σ` by rejection (every source independently reliable
//! with probability `alpha`, redrawn while `K_σ` is inconsistent) and succeeds
//! when `K_σ` entails the query. Trial `t` uses its own ChaCha stream, so the
//! estimate does not depend on how trials are split across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::index::SigmaIndex;
use crate::logic::{Formula, TheoryBase};
use crate::sources::{k_sigma_query, EvidenceModel, ProbabilityModel};

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;
const CHUNK: u64 = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    pub max_rejections_per_trial: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig { trials: 100_000, seed: 0, max_rejections_per_trial: 1_000_000 }
    }
}

impl McConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        McConfig { trials, seed, ..McConfig::default() }
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidModel("trials must be at least 1".into()));
        }
        if self.max_rejections_per_trial == 0 {
            return Err(Error::InvalidModel("max_rejections_per_trial must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub successes: u64,
    pub trials: u64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub rejected_samples: u64,
}

/// 95% score interval for a binomial proportion, `successes` out of `trials`.
pub fn score_interval(successes: u64, trials: u64) -> (f64, f64) {
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - half).clamp(0.0, 1.0).min(p), (centre + half).clamp(0.0, 1.0).max(p))
}

fn require_ds(model: &EvidenceModel) -> Result<()> {
    if *model.probability() != ProbabilityModel::Ds {
        return Err(Error::InvalidModel("Monte-Carlo estimation supports the DS model only".into()));
    }
    Ok(())
}

/// Accepted `σ`, whether `K_σ` entails `query`, and the number of rejected
/// proposals before it.
fn draw<R: Rng>(
    model: &EvidenceModel,
    query: Option<&Formula>,
    rng: &mut R,
    max_rejections: u64,
) -> Result<(SigmaIndex, bool, u64)> {
    let mut rejected = 0;
    loop {
        let sigma = propose(model, rng);
        if let Some(hit) = k_sigma_query(model, sigma, query) {
            return Ok((sigma, hit, rejected));
        }
        rejected += 1;
        if rejected >= max_rejections {
            return Err(Error::RejectionLimit { limit: max_rejections });
        }
    }
}

fn propose<R: Rng>(model: &EvidenceModel, rng: &mut R) -> SigmaIndex {
    let mut sigma = SigmaIndex::EMPTY;
    for s in model.sources() {
        // random_bool rejects p outside [0, 1]; alpha is validated on construction
        if rng.random_bool(s.alpha) {
            sigma = sigma.with(s.id);
        }
    }
    sigma
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Draws one `σ` with probability `P^DS(η_σ)` by rejection from the
/// independent product.
pub fn sample_sigma<R: Rng>(model: &EvidenceModel, rng: &mut R, max_rejections_per_trial: u64) -> Result<SigmaIndex> {
    require_ds(model)?;
    if max_rejections_per_trial == 0 {
        return Err(Error::InvalidModel("max_rejections_per_trial must be at least 1".into()));
    }
    draw(model, None, rng, max_rejections_per_trial).map(|(s, _, _)| s)
}

/// Monte-Carlo estimate of `Bel(d)`.
pub fn bel_mc(model: &EvidenceModel, d: &Formula, cfg: &McConfig) -> Result<McEstimate> {
    require_ds(model)?;
    cfg.validate()?;
    if !TheoryBase::new(model.facts().iter().cloned()).is_consistent() {
        return Err(Error::ContradictorySources);
    }
    let chunks = cfg.trials.div_ceil(CHUNK);
    let per_chunk: Vec<Result<(u64, u64)>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let (mut successes, mut rejected) = (0u64, 0u64);
            for t in c * CHUNK..((c + 1) * CHUNK).min(cfg.trials) {
                let (_, hit, r) = draw(model, Some(d), &mut trial_rng(cfg.seed, t), cfg.max_rejections_per_trial)?;
                rejected += r;
                successes += u64::from(hit);
            }
            Ok((successes, rejected))
        })
        .collect();
    let (mut successes, mut rejected_samples) = (0, 0);
    for chunk in per_chunk {
        let (s, r) = chunk?;
        successes += s;
        rejected_samples += r;
    }
    let (ci_low, ci_high) = score_interval(successes, cfg.trials);
    Ok(McEstimate {
        estimate: successes as f64 / cfg.trials as f64,
        successes,
        trials: cfg.trials,
        ci_low,
        ci_high,
        rejected_samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sources::Source;

    fn v(name: &str) -> Formula {
        Formula::var(name)
    }

    fn nixon() -> EvidenceModel {
        EvidenceModel::ds(
            vec![v("quaker"), v("republican")],
            vec![
                Source::inference(1, 0.9, v("quaker"), v("pacifist")),
                Source::inference(2, 0.8, v("republican"), Formula::not(v("pacifist"))),
            ],
        )
        .unwrap()
    }

    #[test]
    fn zero_reliability_always_samples_empty() {
        let m = EvidenceModel::ds(vec![], vec![Source::material(1, 0.0, v("a"), v("b"))]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            assert_eq!(sample_sigma(&m, &mut rng, 10).unwrap(), SigmaIndex::EMPTY);
        }
        let empty = EvidenceModel::ds(vec![], vec![]).unwrap();
        assert_eq!(sample_sigma(&empty, &mut rng, 1).unwrap(), SigmaIndex::EMPTY);
    }

    #[test]
    fn sampled_frequency_matches_p_ds() {
        let m = nixon();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 100_000;
        let hits = (0..n).filter(|_| sample_sigma(&m, &mut rng, 1000).unwrap() == SigmaIndex::from_ids([1])).count();
        assert!((hits as f64 / n as f64 - 9.0 / 14.0).abs() < 0.01);
    }

    #[test]
    fn tautology_and_certain_sources() {
        let est = bel_mc(&nixon(), &Formula::Top, &McConfig::new(2000, 1)).unwrap();
        assert_eq!(est.estimate, 1.0);
        let m = EvidenceModel::ds(vec![v("a")], vec![Source::inference(1, 1.0, v("a"), v("b"))]).unwrap();
        assert_eq!(bel_mc(&m, &v("b"), &McConfig::new(500, 9)).unwrap().estimate, 1.0);
    }

    #[test]
    fn nixon_estimate() {
        let est = bel_mc(&nixon(), &v("pacifist"), &McConfig::new(100_000, 42)).unwrap();
        assert!((est.estimate - 9.0 / 14.0).abs() < 0.01);
        assert!(est.ci_low <= est.estimate && est.estimate <= est.ci_high);
        assert_eq!(est.estimate, est.successes as f64 / est.trials as f64);
    }

    #[test]
    fn rejection_limit() {
        let mut sources = nixon().sources().to_vec();
        sources[0].alpha = 1.0;
        sources[1].alpha = 1.0;
        let m = EvidenceModel::ds(nixon().facts().to_vec(), sources).unwrap();
        let cfg = McConfig { trials: 10, seed: 0, max_rejections_per_trial: 50 };
        assert_eq!(bel_mc(&m, &v("pacifist"), &cfg), Err(Error::RejectionLimit { limit: 50 }));
    }

    #[test]
    fn config_and_model_checks() {
        assert!(bel_mc(&nixon(), &Formula::Top, &McConfig::new(0, 1)).is_err());
        let bad = EvidenceModel::ds(vec![Formula::Bottom], vec![]).unwrap();
        assert_eq!(bel_mc(&bad, &Formula::Top, &McConfig::new(10, 1)), Err(Error::ContradictorySources));
        let prio = EvidenceModel::new(
            vec![],
            vec![Source::material(1, 0.5, v("a"), v("b"))],
            ProbabilityModel::Prioritized { levels: vec![vec![1]] },
        )
        .unwrap();
        assert!(matches!(bel_mc(&prio, &Formula::Top, &McConfig::new(10, 1)), Err(Error::InvalidModel(_))));
    }

    #[test]
    fn score_interval_brackets_the_estimate() {
        for (s, n) in [(0, 10), (10, 10), (3, 7), (64285, 100000)] {
            let (lo, hi) = score_interval(s, n);
            let p = s as f64 / n as f64;
            assert!(0.0 <= lo && lo <= p && p <= hi && hi <= 1.0);
        }
        let (lo, hi) = score_interval(50, 100);
        assert!((lo - 0.4038).abs() < 1e-3 && (hi - 0.5962).abs() < 1e-3);
    }
}
