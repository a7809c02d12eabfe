//! Every explicit cheating strategy the analysis certifies, with its
//! predicted success probability and analytic certificates, plus a name
//! registry so runs can select attackers the same way they select protocols.

mod cks10_attacks;
mod resolver;
mod unfair_attacks;

pub use cks10_attacks::{HelstromAlice, LostMessageAlice, ParityBob};
pub use resolver::{optimal_attack, AttackFactory, ResolvedAttack};
pub use unfair_attacks::{bell_povm, bell_state, epr_pair, EprBob, GuessAlice};

use crate::engine::{keys, Action, Event, PartyCtx, ProtocolHandle, ProtocolKind, StepError,
    Strategy, WcfStance};
use crate::stats::TrialStats;
use crate::types::Role;
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use thiserror::Error;

/// An exact analytic check backing an attack's predicted value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    pub value: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Certificate {
    pub fn check(name: &str, value: f64, expected: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            value,
            expected,
            tolerance,
            passed: (value - expected).abs() <= tolerance,
        }
    }
}

/// Analytic certificates for the implemented attacks.
pub mod certificates {
    use super::Certificate;
    use crate::protocols::{cks10, unfair};
    use crate::quantum::{helstrom, trace_distance, TOL};

    /// The qutrit protocol's reduced views are 3/4-distinguishable.
    pub fn qutrit_helstrom() -> Vec<Certificate> {
        let v0 = cks10::alice_view(0);
        let v1 = cks10::alice_view(1);
        vec![
            Certificate::check(
                "qutrit-views-trace-distance",
                trace_distance(&v0, &v1).expect("same dims"),
                0.5,
                TOL,
            ),
            Certificate::check(
                "qutrit-views-helstrom",
                helstrom(&v0, &v1).expect("same dims"),
                0.75,
                TOL,
            ),
        ]
    }

    /// Alice's computational measurement reveals b on a given attempt with
    /// probability exactly 1/2.
    pub fn qutrit_per_attempt_learning() -> Vec<Certificate> {
        let mut certs = qutrit_helstrom();
        for b in 0..2u8 {
            let view = cks10::alice_view(b);
            let p = view.matrix()[(b as usize, b as usize)].re;
            certs.push(Certificate::check(
                &format!("qutrit-learn-prob-b{b}"),
                p,
                0.5,
                TOL,
            ));
        }
        certs
    }

    /// The two parity classes of the probe attack are orthogonal.
    pub fn qutrit_parity_orthogonality() -> Vec<Certificate> {
        let overlap = super::cks10_attacks::parity_class(0)
            .inner(&super::cks10_attacks::parity_class(1))
            .expect("same dims")
            .norm();
        vec![Certificate::check(
            "parity-class-overlap",
            overlap,
            0.0,
            TOL,
        )]
    }

    /// The unfair protocol's two candidate views are exactly identical.
    pub fn unfair_no_information() -> Vec<Certificate> {
        let v0 = unfair::alice_view(0);
        let v1 = unfair::alice_view(1);
        let td = trace_distance(&v0, &v1).expect("same dims");
        vec![
            Certificate::check("unfair-views-trace-distance", td, 0.0, 1e-12),
            Certificate::check("unfair-views-helstrom", 0.5 + 0.5 * td, 0.5, 1e-12),
        ]
    }

    /// The four post-attack Bell states are pairwise orthonormal.
    pub fn bell_orthogonality() -> Vec<Certificate> {
        let states: Vec<_> = (0..4u8).map(|k| super::bell_state(k >> 1, k & 1)).collect();
        let mut max_dev: f64 = 0.0;
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                let got = a.inner(b).expect("same dims").norm();
                max_dev = max_dev.max((got - want).abs());
            }
        }
        vec![Certificate::check(
            "bell-gram-identity-deviation",
            max_dev,
            0.0,
            TOL,
        )]
    }
}

/// Forces the coin flip toward this party's preferred outcome and accepts it.
pub struct WcfForce;

impl Strategy for WcfForce {
    fn wcf_stance(&mut self) -> WcfStance {
        WcfStance::Force
    }

    fn step(&mut self, ctx: &mut PartyCtx<'_>, event: Event) -> Result<Action, StepError> {
        match event {
            Event::WcfOutcome(c) => {
                ctx.set_output(keys::C, c);
                Ok(Action::Done)
            }
            Event::PeerDone => Ok(Action::Done),
            Event::Start | Event::Restarted => Ok(Action::Pass),
            other => Err(StepError::Protocol(format!("unexpected event {other:?}"))),
        }
    }
}

/// What a strategy is trying to achieve; determines how trials are scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Goal {
    /// Honest completion: Bob's received bit matches Alice's (or the coin
    /// flip agrees, for the black box).
    Correctness,
    /// Dishonest Alice outputs Bob's index bit.
    AliceLearnsB,
    /// Dishonest Bob outputs x0 ⊕ x1.
    BobLearnsParity,
    /// Force the coin flip to 0 (dishonest Alice).
    ForceZero,
    /// Force the coin flip to 1 (dishonest Bob).
    ForceOne,
}

impl Goal {
    /// Scores one completed run; aborted runs never count as success.
    pub fn score(&self, outcome: &crate::engine::ProtocolOutcome) -> bool {
        let Some((alice, bob)) = outcome.outputs() else {
            return false;
        };
        match self {
            Goal::Correctness => match outcome.rot_output() {
                Some(rot) => rot.is_correct(),
                None => match (alice.bit(keys::C), bob.bit(keys::C)) {
                    (Some(a), Some(b)) => a == b,
                    _ => false,
                },
            },
            Goal::AliceLearnsB => match (alice.bit(keys::B_GUESS), bob.bit(keys::B)) {
                (Some(guess), Some(b)) => guess == b,
                _ => false,
            },
            Goal::BobLearnsParity => {
                match (bob.bit(keys::PARITY_GUESS), alice.bit(keys::X0), alice.bit(keys::X1)) {
                    (Some(guess), Some(x0), Some(x1)) => guess == (x0 ^ x1),
                    _ => false,
                }
            }
            Goal::ForceZero => bob.bit(keys::C) == Some(0),
            Goal::ForceOne => alice.bit(keys::C) == Some(1),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum AttackError {
    #[error("unknown strategy {0:?} (see `list` for registered names)")]
    UnknownStrategy(String),
    #[error("strategy {strategy:?} does not play the {role} side")]
    RoleMismatch { strategy: String, role: Role },
    #[error("strategy {strategy:?} does not apply to protocol {protocol:?}")]
    Incompatible { strategy: String, protocol: String },
}

/// Tuning knobs for parameterized attacks, derived from the run config.
#[derive(Debug, Clone, Copy)]
pub struct AttackParams {
    /// Restarts the lost-message attacker may burn (usually the channel cap).
    pub lost_message_budget: u32,
    /// False loss declarations the guessing attacker makes before playing.
    pub declared_losses: u32,
}

impl Default for AttackParams {
    fn default() -> Self {
        Self {
            lost_message_budget: 0,
            declared_losses: 0,
        }
    }
}

/// A strategy selected by name, ready to run: fresh-instance factory, the
/// goal to score, the predicted success probability and its certificates.
pub struct BuiltStrategy {
    pub name: String,
    pub role: Role,
    pub goal: Goal,
    pub factory: AttackFactory,
    pub predicted: Option<f64>,
    pub certificates: Vec<Certificate>,
}

/// Registered strategy names for one party, including "honest".
pub fn strategy_names(role: Role) -> Vec<&'static str> {
    match role {
        Role::Alice => vec![
            "honest",
            "alice-helstrom",
            "alice-lost-message",
            "alice-guess",
            "alice-optimal",
            "wcf-force",
        ],
        Role::Bob => vec![
            "honest",
            "bob-parity",
            "bob-epr",
            "bob-optimal",
            "wcf-force",
        ],
    }
}

/// One-line descriptions for the CLI listing.
pub fn strategy_description(name: &str) -> &'static str {
    match name {
        "honest" => "follow the protocol exactly",
        "alice-helstrom" => "optimal single-copy discrimination of the first message (qutrit protocol)",
        "alice-lost-message" => "measure, then declare losses until the basis outcome reveals b (qutrit protocol)",
        "alice-guess" => "uniform guess, optionally after false loss declarations (unfair protocol)",
        "alice-optimal" => "best implemented Alice attack, resolved through reductions",
        "bob-parity" => "entangled probe recovering x0 XOR x1 with certainty (qutrit protocol)",
        "bob-epr" => "EPR probe recovering both bits with certainty (unfair protocol)",
        "bob-optimal" => "best implemented Bob attack, resolved through reductions",
        "wcf-force" => "force the coin flip toward this party's preferred outcome",
        _ => "",
    }
}

/// Builds a named strategy against a protocol.
pub fn build_strategy(
    name: &str,
    role: Role,
    protocol: &ProtocolHandle,
    params: &AttackParams,
) -> Result<BuiltStrategy, AttackError> {
    let incompatible = || AttackError::Incompatible {
        strategy: name.to_string(),
        protocol: protocol.name(),
    };
    let built = |goal: Goal,
                 factory: AttackFactory,
                 predicted: Option<f64>,
                 certificates: Vec<Certificate>| {
        Ok(BuiltStrategy {
            name: name.to_string(),
            role,
            goal,
            factory,
            predicted,
            certificates,
        })
    };
    match (name, role) {
        ("honest", Role::Alice) => {
            let p = protocol.clone();
            built(
                Goal::Correctness,
                Arc::new(move || p.honest_alice()),
                Some(1.0),
                Vec::new(),
            )
        }
        ("honest", Role::Bob) => {
            let p = protocol.clone();
            built(
                Goal::Correctness,
                Arc::new(move || p.honest_bob()),
                Some(1.0),
                Vec::new(),
            )
        }
        ("alice-helstrom", Role::Alice) => {
            if !matches!(protocol.kind(), ProtocolKind::QutritRot) {
                return Err(incompatible());
            }
            built(
                Goal::AliceLearnsB,
                Arc::new(|| Box::new(HelstromAlice::new())),
                Some(0.75),
                certificates::qutrit_helstrom(),
            )
        }
        ("alice-lost-message", Role::Alice) => {
            if !matches!(protocol.kind(), ProtocolKind::QutritRot) {
                return Err(incompatible());
            }
            let budget = params.lost_message_budget;
            built(
                Goal::AliceLearnsB,
                Arc::new(move || Box::new(LostMessageAlice::new(budget))),
                Some(LostMessageAlice::predicted_success(budget)),
                certificates::qutrit_per_attempt_learning(),
            )
        }
        ("alice-guess", Role::Alice) => {
            if !matches!(protocol.kind(), ProtocolKind::UnfairRot) {
                return Err(incompatible());
            }
            let losses = params.declared_losses;
            built(
                Goal::AliceLearnsB,
                Arc::new(move || Box::new(GuessAlice::with_declared_losses(losses))),
                Some(0.5),
                certificates::unfair_no_information(),
            )
        }
        ("bob-parity", Role::Bob) => {
            if !matches!(protocol.kind(), ProtocolKind::QutritRot) {
                return Err(incompatible());
            }
            built(
                Goal::BobLearnsParity,
                Arc::new(|| Box::new(ParityBob::new())),
                Some(1.0),
                certificates::qutrit_parity_orthogonality(),
            )
        }
        ("bob-epr", Role::Bob) => {
            if !matches!(protocol.kind(), ProtocolKind::UnfairRot) {
                return Err(incompatible());
            }
            built(
                Goal::BobLearnsParity,
                Arc::new(|| Box::new(EprBob::new())),
                Some(1.0),
                certificates::bell_orthogonality(),
            )
        }
        ("alice-optimal", Role::Alice) | ("bob-optimal", Role::Bob) => {
            let resolved = optimal_attack(role, protocol).ok_or_else(incompatible)?;
            let goal = match role {
                Role::Alice => Goal::AliceLearnsB,
                Role::Bob => Goal::BobLearnsParity,
            };
            built(
                goal,
                resolved.factory,
                Some(resolved.predicted),
                resolved.certificates,
            )
        }
        ("wcf-force", role) => {
            let spec = protocol.wcf().ok_or_else(incompatible)?;
            if !matches!(protocol.kind(), ProtocolKind::WcfBlackBox) {
                return Err(incompatible());
            }
            let (goal, predicted) = match role {
                Role::Alice => (Goal::ForceZero, spec.alice_force),
                Role::Bob => (Goal::ForceOne, spec.bob_force),
            };
            built(
                goal,
                Arc::new(|| Box::new(WcfForce)),
                Some(predicted),
                Vec::new(),
            )
        }
        (other, role) => {
            if strategy_names(role.peer()).contains(&other) {
                Err(AttackError::RoleMismatch {
                    strategy: other.to_string(),
                    role,
                })
            } else {
                Err(AttackError::UnknownStrategy(other.to_string()))
            }
        }
    }
}

/// A cross-checked attack evaluation: prediction, empirical estimate and
/// certificates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackReport {
    pub attack: String,
    pub protocol: String,
    pub predicted: f64,
    pub stats: TrialStats,
    pub sigma: f64,
    pub within_three_sigma: bool,
    pub certificates: Vec<Certificate>,
    pub passed: bool,
}
