//! Monte Carlo estimation of cheating probabilities, scored against the
//! attacks' predicted values.

use crate::adversaries::{build_strategy, AttackError, AttackParams, AttackReport, BuiltStrategy};
use crate::engine::{run_trials, ChannelConfig, EngineError, ProtocolHandle, RestartLimit};
use crate::stats::{binomial_sigma, within_three_sigma};
use crate::types::Role;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EstimateError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Attack(#[from] AttackError),
}

/// Runs `n` trials of `attacker` against the honest peer and scores the
/// attacker's goal. Success means the attacker outputs the target secret and
/// the honest party has not aborted.
pub fn estimate_cheating(
    protocol: &ProtocolHandle,
    attacker: &BuiltStrategy,
    channel: &ChannelConfig,
    n: u64,
    seed: u64,
) -> Result<AttackReport, EstimateError> {
    let honest: crate::adversaries::AttackFactory = match attacker.role {
        Role::Alice => {
            let p = protocol.clone();
            std::sync::Arc::new(move || p.honest_bob())
        }
        Role::Bob => {
            let p = protocol.clone();
            std::sync::Arc::new(move || p.honest_alice())
        }
    };
    let (alice_f, bob_f) = match attacker.role {
        Role::Alice => (&attacker.factory, &honest),
        Role::Bob => (&honest, &attacker.factory),
    };
    let goal = attacker.goal;
    let stats = run_trials(
        protocol.as_ref(),
        &|| alice_f(),
        &|| bob_f(),
        channel,
        n,
        seed,
        &move |outcome| goal.score(outcome),
    )?;
    let predicted = attacker.predicted.unwrap_or(f64::NAN);
    let sigma = binomial_sigma(predicted, n);
    let within = within_three_sigma(stats.estimate, predicted, n);
    let certs_ok = attacker.certificates.iter().all(|c| c.passed);
    Ok(AttackReport {
        attack: attacker.name.clone(),
        protocol: protocol.name(),
        predicted,
        stats,
        sigma,
        within_three_sigma: within,
        certificates: attacker.certificates.clone(),
        passed: within && certs_ok,
    })
}

/// One point of the lost-message gain curve.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LossGainPoint {
    pub max_restarts: u32,
    pub predicted: f64,
    pub report: AttackReport,
}

/// Sweeps the lost-message attack over restart caps on a lossless channel.
/// The prediction 1 − 2^−(r+2) is cross-checked by the restart-tree oracle in
/// the test suite.
pub fn loss_gain_curve(
    protocol: &ProtocolHandle,
    r_values: &[u32],
    n: u64,
    seed: u64,
) -> Result<Vec<LossGainPoint>, EstimateError> {
    let mut out = Vec::with_capacity(r_values.len());
    for (i, &r) in r_values.iter().enumerate() {
        let channel = ChannelConfig {
            loss_rate: 0.0,
            classical_loss_rate: 0.0,
            adversarial_loss_allowed: true,
            max_restarts: RestartLimit::Bounded(r),
        };
        let params = AttackParams {
            lost_message_budget: r,
            declared_losses: 0,
        };
        let attacker = build_strategy("alice-lost-message", Role::Alice, protocol, &params)?;
        let report = estimate_cheating(
            protocol,
            &attacker,
            &channel,
            n,
            seed.wrapping_add(i as u64),
        )?;
        out.push(LossGainPoint {
            max_restarts: r,
            predicted: report.predicted,
            report,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::{ProtocolParams, ProtocolRegistry};

    fn registry_build(name: &str) -> ProtocolHandle {
        ProtocolRegistry::standard()
            .build(name, &ProtocolParams::default())
            .unwrap()
    }

    #[test]
    fn helstrom_attack_hits_three_quarters() {
        let p = registry_build("cks10-rot");
        let attacker = build_strategy(
            "alice-helstrom",
            Role::Alice,
            &p,
            &AttackParams::default(),
        )
        .unwrap();
        let report =
            estimate_cheating(&p, &attacker, &ChannelConfig::lossless(), 20_000, 5).unwrap();
        assert!(report.passed, "{report:?}");
        assert!((report.stats.estimate - 0.75).abs() < 0.015);
        assert_eq!(report.stats.aborted_by_bob, 0);
    }

    #[test]
    fn parity_attack_is_certain() {
        let p = registry_build("cks10-rot");
        let attacker =
            build_strategy("bob-parity", Role::Bob, &p, &AttackParams::default()).unwrap();
        let report =
            estimate_cheating(&p, &attacker, &ChannelConfig::lossless(), 2_000, 6).unwrap();
        assert_eq!(report.stats.successes, report.stats.n);
        assert_eq!(report.stats.aborted_by_alice, 0);
        assert!(report.passed);
    }

    #[test]
    fn epr_attack_is_certain_even_under_loss() {
        let p = registry_build("unfair-lt-rot");
        let attacker = build_strategy("bob-epr", Role::Bob, &p, &AttackParams::default()).unwrap();
        for loss in [0.0, 0.5] {
            let channel = ChannelConfig {
                loss_rate: loss,
                classical_loss_rate: 0.0,
                adversarial_loss_allowed: true,
                max_restarts: RestartLimit::Unbounded,
            };
            let report = estimate_cheating(&p, &attacker, &channel, 2_000, 7).unwrap();
            assert_eq!(report.stats.successes, report.stats.n, "loss {loss}");
        }
    }

    #[test]
    fn guess_attack_stays_at_half_despite_declared_losses() {
        let p = registry_build("unfair-lt-rot");
        let params = AttackParams {
            lost_message_budget: 0,
            declared_losses: 5,
        };
        let attacker = build_strategy("alice-guess", Role::Alice, &p, &params).unwrap();
        let channel = ChannelConfig {
            loss_rate: 0.0,
            classical_loss_rate: 0.0,
            adversarial_loss_allowed: true,
            max_restarts: RestartLimit::Bounded(8),
        };
        let report = estimate_cheating(&p, &attacker, &channel, 20_000, 8).unwrap();
        assert!(report.passed, "estimate {}", report.stats.estimate);
        assert!((report.stats.estimate - 0.5).abs() < 0.02);
    }

    #[test]
    fn lost_message_curve_matches_prediction() {
        let p = registry_build("cks10-rot");
        let points = loss_gain_curve(&p, &[0, 1, 3], 20_000, 11).unwrap();
        let expected = [0.75, 0.875, 0.96875];
        for (point, want) in points.iter().zip(expected) {
            assert!((point.predicted - want).abs() < 1e-12);
            assert!(
                point.report.within_three_sigma,
                "r={} estimate={} predicted={}",
                point.max_restarts, point.report.stats.estimate, point.predicted
            );
        }
        // Strictly increasing in the restart budget.
        assert!(points[0].report.stats.estimate < points[1].report.stats.estimate);
        assert!(points[1].report.stats.estimate < points[2].report.stats.estimate);
    }

    #[test]
    fn optimal_attacks_on_the_switched_protocol_swap_the_profile() {
        let reg = ProtocolRegistry::standard();
        let p = reg
            .build("role-switch", &ProtocolParams::default())
            .unwrap();
        // Switched from (1/2, 1): Alice now learns with certainty, Bob only
        // guesses.
        let alice = build_strategy("alice-optimal", Role::Alice, &p, &AttackParams::default())
            .unwrap();
        assert!((alice.predicted.unwrap() - 1.0).abs() < 1e-12);
        let report =
            estimate_cheating(&p, &alice, &ChannelConfig::lossless(), 2_000, 12).unwrap();
        assert_eq!(report.stats.successes, report.stats.n);

        let bob =
            build_strategy("bob-optimal", Role::Bob, &p, &AttackParams::default()).unwrap();
        assert!((bob.predicted.unwrap() - 0.5).abs() < 1e-12);
        let report = estimate_cheating(&p, &bob, &ChannelConfig::lossless(), 20_000, 13).unwrap();
        assert!(report.within_three_sigma, "estimate {}", report.stats.estimate);
    }

    #[test]
    fn combined_attack_matches_the_formula() {
        let p = registry_build("combined-rot");
        // Branches (1, 1/2): predicted 0.8536·0.5 + 0.5 = 0.9268.
        let alice = build_strategy("alice-optimal", Role::Alice, &p, &AttackParams::default())
            .unwrap();
        assert!((alice.predicted.unwrap() - 0.9268).abs() < 1e-12);
        let report =
            estimate_cheating(&p, &alice, &ChannelConfig::lossless(), 20_000, 14).unwrap();
        assert!(report.passed, "estimate {}", report.stats.estimate);
    }

    #[test]
    fn wcf_force_reaches_its_forcing_probability() {
        let p = registry_build("wcf-black-box");
        let alice =
            build_strategy("wcf-force", Role::Alice, &p, &AttackParams::default()).unwrap();
        let report =
            estimate_cheating(&p, &alice, &ChannelConfig::lossless(), 20_000, 15).unwrap();
        assert!(report.passed, "estimate {}", report.stats.estimate);
        assert!((report.stats.estimate - 0.8536).abs() < 0.02);
    }
}
