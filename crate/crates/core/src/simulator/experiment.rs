use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::random;

/// Outcome statistics of a two-outcome experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub trials: u64,
    pub successes: u64,
    pub empirical_prob: f64,
    pub exact_prob: f64,
    pub ci95_halfwidth: f64,
    pub queries_used: u64,
    pub total_evolution_time: f64,
    pub seed: Option<u64>,
    /// Set when the empirical frequency lies more than five half-widths from
    /// the exact probability.
    pub flagged: bool,
}

impl ExperimentResult {
    /// Amplitude-computed result with no sampling.
    pub fn exact(exact_prob: f64, queries_used: u64) -> Self {
        Self {
            trials: 0,
            successes: 0,
            empirical_prob: exact_prob,
            exact_prob,
            ci95_halfwidth: 0.0,
            queries_used,
            total_evolution_time: 0.0,
            seed: None,
            flagged: false,
        }
    }

    /// Draws `trials` Bernoulli outcomes with success probability `exact_prob`.
    pub fn sample(exact_prob: f64, trials: u64, queries_per_trial: u64, seed: u64) -> Result<Self> {
        let mut rng = random::rng(seed);
        Self::sample_with(exact_prob, trials, queries_per_trial, seed, &mut rng)
    }

    pub fn sample_with<R: Rng + ?Sized>(
        exact_prob: f64,
        trials: u64,
        queries_per_trial: u64,
        seed: u64,
        rng: &mut R,
    ) -> Result<Self> {
        if !(0.0..=1.0 + 1e-12).contains(&exact_prob) {
            return Err(Error::param("exact_prob", format!("{exact_prob} not a probability")));
        }
        let p = exact_prob.clamp(0.0, 1.0);
        if trials == 0 {
            let mut r = Self::exact(p, queries_per_trial);
            r.seed = Some(seed);
            return Ok(r);
        }
        let successes = Binomial::new(trials, p)
            .map_err(|e| Error::param("exact_prob", e.to_string()))?
            .sample(rng);
        let empirical = successes as f64 / trials as f64;
        let halfwidth = 1.96 * (empirical * (1.0 - empirical) / trials as f64).sqrt();
        Ok(Self {
            trials,
            successes,
            empirical_prob: empirical,
            exact_prob: p,
            ci95_halfwidth: halfwidth,
            queries_used: queries_per_trial * trials,
            total_evolution_time: 0.0,
            seed: Some(seed),
            flagged: (empirical - p).abs() > 5.0 * halfwidth + 1e-12,
        })
    }

    pub fn with_evolution_time(mut self, time_per_trial: f64) -> Self {
        self.total_evolution_time = time_per_trial * self.trials.max(1) as f64;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampled_frequency_is_consistent() {
        let r = ExperimentResult::sample(0.3, 10_000, 1, 7).unwrap();
        assert_eq!(r.empirical_prob, r.successes as f64 / 1e4);
        assert!(!r.flagged);
        assert_eq!(r.queries_used, 10_000);
        assert_eq!(r, ExperimentResult::sample(0.3, 10_000, 1, 7).unwrap());
    }

    #[test]
    fn exact_mode_has_no_noise() {
        let r = ExperimentResult::exact(0.25, 3);
        assert_eq!(r.empirical_prob, 0.25);
        assert_eq!(r.trials, 0);
        assert!(ExperimentResult::sample(1.5, 10, 1, 0).is_err());
    }
}
