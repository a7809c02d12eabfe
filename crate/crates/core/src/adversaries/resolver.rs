//! Resolves the best implemented attack for a protocol, recursing through
//! reductions: a role switch swaps which party's attack applies, and the
//! arbitrated combination forces the coin flip toward the favorable branch
//! and mounts that branch's attack.

use super::cks10_attacks::{HelstromAlice, ParityBob};
use super::unfair_attacks::{EprBob, GuessAlice};
use super::{certificates, Certificate};
use crate::engine::{ProtocolHandle, ProtocolKind, Strategy, WcfStance};
use crate::protocols::BranchSelect;
use crate::protocols::reductions::{SwitchedAlice, SwitchedBob};
use crate::types::Role;
use std::sync::Arc;

/// Shared, repeatedly-invocable strategy constructor.
pub type AttackFactory = Arc<dyn Fn() -> Box<dyn Strategy> + Send + Sync>;

pub struct ResolvedAttack {
    pub factory: AttackFactory,
    pub predicted: f64,
    pub certificates: Vec<Certificate>,
}

/// Best implemented attack for the given party, or `None` if the protocol has
/// no analyzed attack for that side.
pub fn optimal_attack(party: Role, protocol: &ProtocolHandle) -> Option<ResolvedAttack> {
    match party {
        Role::Alice => optimal_alice(protocol),
        Role::Bob => optimal_bob(protocol),
    }
}

fn optimal_alice(protocol: &ProtocolHandle) -> Option<ResolvedAttack> {
    match protocol.kind() {
        ProtocolKind::QutritRot => Some(ResolvedAttack {
            factory: Arc::new(|| Box::new(HelstromAlice::new())),
            predicted: 0.75,
            certificates: certificates::qutrit_helstrom(),
        }),
        ProtocolKind::UnfairRot => Some(ResolvedAttack {
            factory: Arc::new(|| Box::new(GuessAlice::new())),
            predicted: 0.5,
            certificates: certificates::unfair_no_information(),
        }),
        ProtocolKind::RoleSwitch { inner } => {
            let inner_attack = optimal_bob(inner)?;
            let f = inner_attack.factory.clone();
            Some(ResolvedAttack {
                factory: Arc::new(move || Box::new(SwitchedAlice::new(f()))),
                predicted: inner_attack.predicted,
                certificates: inner_attack.certificates,
            })
        }
        ProtocolKind::Combined { branch0, branch1 } => {
            combined_attack(Role::Alice, protocol, branch0, branch1)
        }
        _ => None,
    }
}

fn optimal_bob(protocol: &ProtocolHandle) -> Option<ResolvedAttack> {
    match protocol.kind() {
        ProtocolKind::QutritRot => Some(ResolvedAttack {
            factory: Arc::new(|| Box::new(ParityBob::new())),
            predicted: 1.0,
            certificates: certificates::qutrit_parity_orthogonality(),
        }),
        ProtocolKind::UnfairRot => Some(ResolvedAttack {
            factory: Arc::new(|| Box::new(EprBob::new())),
            predicted: 1.0,
            certificates: certificates::bell_orthogonality(),
        }),
        ProtocolKind::RoleSwitch { inner } => {
            let inner_attack = optimal_alice(inner)?;
            let f = inner_attack.factory.clone();
            Some(ResolvedAttack {
                factory: Arc::new(move || Box::new(SwitchedBob::new(f()))),
                predicted: inner_attack.predicted,
                certificates: inner_attack.certificates,
            })
        }
        ProtocolKind::Combined { branch0, branch1 } => {
            combined_attack(Role::Bob, protocol, branch0, branch1)
        }
        _ => None,
    }
}

fn combined_attack(
    party: Role,
    protocol: &ProtocolHandle,
    branch0: &ProtocolHandle,
    branch1: &ProtocolHandle,
) -> Option<ResolvedAttack> {
    let spec = protocol.wcf()?;
    let a0 = optimal_attack(party, branch0)?;
    let a1 = optimal_attack(party, branch1)?;
    // Branch 0 carries profile (x, y) with x ≥ y: Alice's favorable branch is
    // c = 0, Bob's is c = 1. Forcing succeeds with the black box's
    // probability, and the unfavorable branch still yields its own optimum.
    let (force, favorable, other) = match party {
        Role::Alice => (spec.alice_force, a0.predicted, a1.predicted),
        Role::Bob => (spec.bob_force, a1.predicted, a0.predicted),
    };
    debug_assert!(favorable + 1e-12 >= other);
    let predicted = force * favorable + (1.0 - force) * other;
    let mut certs = a0.certificates;
    certs.extend(a1.certificates);
    certs.dedup_by(|a, b| a.name == b.name);
    let (f0, f1) = (a0.factory, a1.factory);
    Some(ResolvedAttack {
        factory: Arc::new(move || {
            let f0 = f0.clone();
            let f1 = f1.clone();
            Box::new(BranchSelect::with_branches(
                WcfStance::Force,
                Box::new(move || f0()),
                Box::new(move || f1()),
            ))
        }),
        predicted,
        certificates: certs,
    })
}
