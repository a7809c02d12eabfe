use super::channel::ChannelConfig;
use super::protocol::Protocol;
use super::runner::{run_protocol, EngineError, ProtocolOutcome};
use super::strategy::Strategy;
use crate::stats::{trial_seed, TrialStats};
use crate::types::Role;
use rayon::prelude::*;

/// Builds a fresh strategy instance for each trial.
pub type StrategyFactory<'a> = &'a (dyn Fn() -> Box<dyn Strategy> + Sync);

/// Runs `n` independent seeded trials and aggregates them.
///
/// Trial `i` uses a seed derived from `base_seed` and `i` by a fixed
/// splitmix-style mix, so the aggregate is independent of scheduling order
/// and parallelism degree.
pub fn run_trials(
    protocol: &dyn Protocol,
    alice: StrategyFactory<'_>,
    bob: StrategyFactory<'_>,
    channel: &ChannelConfig,
    n: u64,
    base_seed: u64,
    success: &(dyn Fn(&ProtocolOutcome) -> bool + Sync),
) -> Result<TrialStats, EngineError> {
    let results: Result<Vec<(bool, Option<Role>)>, EngineError> = (0..n)
        .into_par_iter()
        .map(|i| {
            let seed = trial_seed(base_seed, i);
            let (outcome, _) = run_protocol(protocol, alice(), bob(), channel, seed)?;
            Ok((success(&outcome), outcome.aborted_by()))
        })
        .collect();
    let results = results?;
    let mut successes = 0u64;
    let mut completed = 0u64;
    let mut aborted_alice = 0u64;
    let mut aborted_bob = 0u64;
    for (ok, aborted) in results {
        if ok {
            successes += 1;
        }
        match aborted {
            None => completed += 1,
            Some(Role::Alice) => aborted_alice += 1,
            Some(Role::Bob) => aborted_bob += 1,
        }
    }
    Ok(TrialStats::from_counts(
        successes,
        completed,
        aborted_alice,
        aborted_bob,
        base_seed,
    ))
}
