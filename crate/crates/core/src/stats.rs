//! Seed derivation and the small statistical toolkit used by trial runners.

use serde::{Deserialize, Serialize};

/// SplitMix64 finalizer; the fixed mixing function behind all derived seeds.
pub fn splitmix64(seed: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for trial `index` of a batch rooted at `base_seed`.
pub fn trial_seed(base_seed: u64, index: u64) -> u64 {
    splitmix64(base_seed ^ splitmix64(index.wrapping_add(1)))
}

/// Per-run stream seeds: 0 = channel/oracle, 1 = Alice, 2 = Bob.
pub fn stream_seed(run_seed: u64, stream: u64) -> u64 {
    splitmix64(run_seed.wrapping_add(stream.wrapping_mul(0xA5A5_A5A5_A5A5_A5A5)))
}

const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval at 95% confidence.
pub fn wilson95(successes: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = (Z95 / denom) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Binomial standard deviation of a frequency estimate at true probability `p`.
pub fn binomial_sigma(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// |estimate − predicted| ≤ 3σ, with σ = 0 demanding exact agreement.
pub fn within_three_sigma(estimate: f64, predicted: f64, n: u64) -> bool {
    (estimate - predicted).abs() <= 3.0 * binomial_sigma(predicted, n)
}

/// Aggregated results of a seeded trial batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialStats {
    pub n: u64,
    pub successes: u64,
    pub estimate: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub completed: u64,
    pub aborted_by_alice: u64,
    pub aborted_by_bob: u64,
    pub base_seed: u64,
}

impl TrialStats {
    pub fn from_counts(
        successes: u64,
        completed: u64,
        aborted_by_alice: u64,
        aborted_by_bob: u64,
        base_seed: u64,
    ) -> Self {
        let n = completed + aborted_by_alice + aborted_by_bob;
        let estimate = if n == 0 {
            0.0
        } else {
            successes as f64 / n as f64
        };
        let (wilson_low, wilson_high) = wilson95(successes, n);
        Self {
            n,
            successes,
            estimate,
            wilson_low,
            wilson_high,
            completed,
            aborted_by_alice,
            aborted_by_bob,
            base_seed,
        }
    }

    pub fn ci_contains(&self, p: f64) -> bool {
        self.wilson_low <= p && p <= self.wilson_high
    }
}

/// Pearson chi-square statistic for observed counts against expected counts.
pub fn chi_square(observed: &[u64], expected: &[f64]) -> f64 {
    observed
        .iter()
        .zip(expected)
        .filter(|(_, &e)| e > 0.0)
        .map(|(&o, &e)| {
            let d = o as f64 - e;
            d * d / e
        })
        .sum()
}

/// Upper critical values of the chi-square distribution at significance 0.01.
pub fn chi_square_crit_01(df: usize) -> f64 {
    // Standard table values; the test suites only use these degrees of freedom.
    match df {
        1 => 6.635,
        2 => 9.210,
        3 => 11.345,
        7 => 18.475,
        _ => panic!("no tabulated chi-square critical value for df={df}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_is_deterministic_and_spreads() {
        assert_eq!(splitmix64(0), splitmix64(0));
        assert_ne!(splitmix64(0), splitmix64(1));
        assert_ne!(trial_seed(42, 0), trial_seed(42, 1));
        assert_ne!(trial_seed(42, 0), trial_seed(43, 0));
    }

    #[test]
    fn wilson_interval_brackets_estimate() {
        let (lo, hi) = wilson95(75, 100);
        assert!(lo < 0.75 && 0.75 < hi);
        assert!(lo > 0.65 && hi < 0.84);
        let (lo, hi) = wilson95(0, 100);
        assert!(lo < 1e-12 && hi > 0.0);
        let (lo, hi) = wilson95(100, 100);
        assert!(hi > 1.0 - 1e-12 && lo < 1.0);
    }

    #[test]
    fn trial_stats_single_trial_counts_sum_to_one() {
        let s = TrialStats::from_counts(1, 1, 0, 0, 9);
        assert_eq!(s.n, 1);
        assert_eq!(s.completed + s.aborted_by_alice + s.aborted_by_bob, 1);
        assert!((s.estimate - 1.0).abs() < 1e-12);
    }

    #[test]
    fn three_sigma_band_is_exact_at_certainty() {
        assert!(within_three_sigma(1.0, 1.0, 1000));
        assert!(!within_three_sigma(0.999, 1.0, 1000));
        assert!(within_three_sigma(0.51, 0.5, 1000));
    }

    #[test]
    fn chi_square_statistic() {
        let stat = chi_square(&[50, 50], &[50.0, 50.0]);
        assert!(stat.abs() < 1e-12);
        let stat = chi_square(&[90, 10], &[50.0, 50.0]);
        assert!(stat > chi_square_crit_01(1));
    }
}
